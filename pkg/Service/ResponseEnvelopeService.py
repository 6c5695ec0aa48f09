"""
統一輸出服務 - 將計算結果包裝成固定格式的輸出信封
精確數值一律為字串，計時資訊獨立於結果之外
"""
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from config import get_config

logger = logging.getLogger(__name__)

class ResponseEnvelopeService:
    def __init__(self):
        output_config = get_config().get('output', {})
        self.schema_version = output_config.get('schema_version', '1.0')
        self.tool_version = output_config.get('tool_version', '0.1.0')

    def build(self, command: str, input_data: Dict[str, Any], parameters: Dict[str, Any],
              result: Dict[str, Any], elapsed: Optional[float] = None) -> Dict[str, Any]:
        """
        建立輸出信封，鍵的順序固定

        Args:
            command: 子命令名稱
            input_data: 輸入字詞或子群
            parameters: 其餘參數
            result: 計算結果
            elapsed: 執行秒數

        Returns:
            dict: 輸出信封
        """
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "command": command,
            "input": input_data,
            "parameters": parameters,
            "result": result,
            "status": "success",
            "timing": {"seconds": round(elapsed or 0.0, 6)},
        }

    def without_timing(self, envelope: Dict[str, Any]) -> Dict[str, Any]:
        """去除計時欄位，供可重現性比較"""
        return {key: value for key, value in envelope.items() if key != "timing"}

    def render(self, envelope: Dict[str, Any], output_format: str = "json") -> str:
        """以 json 或 plain 格式輸出"""
        if output_format == "plain":
            return "\n".join(self._flatten(envelope))
        return json.dumps(envelope, indent=2, ensure_ascii=False)

    def _flatten(self, value: Any, prefix: str = "") -> List[str]:
        if isinstance(value, dict):
            lines = []
            for key, item in value.items():
                lines.extend(self._flatten(item, f"{prefix}.{key}" if prefix else str(key)))
            return lines
        if isinstance(value, list):
            if all(not isinstance(item, (dict, list)) for item in value):
                return [f"{prefix}: {', '.join(str(item) for item in value)}"]
            lines = []
            for position, item in enumerate(value):
                lines.extend(self._flatten(item, f"{prefix}[{position}]"))
            return lines
        if isinstance(value, bool):
            value = str(value).lower()
        elif value is None:
            value = "null"
        if isinstance(value, str) and "\n" in value:
            value = value.replace("\n", " | ")
        return [f"{prefix}: {value}"]

    def emit(self, envelope: Dict[str, Any], output_format: str = "json", stream=None):
        """寫到標準輸出"""
        print(self.render(envelope, output_format), file=stream or sys.stdout)

# 全域輸出服務實例
response_envelope_service = ResponseEnvelopeService()
