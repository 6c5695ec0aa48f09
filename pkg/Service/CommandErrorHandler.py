"""
命令錯誤處理器，統一將例外轉換為結束代碼與標準錯誤輸出的診斷訊息
"""
import logging
import sys
import time
from functools import wraps
from typing import Any, Callable

from Service.WordMeasureErrors import WordMeasureError


class CommandErrorHandler:
    def __init__(self, logger_name: str = __name__):
        self.logger = logging.getLogger(logger_name)
        self.error_count = 0
        self.last_error_time = None

    def command_error_handler(self, stream=None):
        """
        命令處理裝飾器 - 成功時回傳 (0, 結果)，失敗時回傳 (結束代碼, None)
        """
        def decorator(func: Callable[..., Any]):
            @wraps(func)
            def wrapper(*args, **kwargs):
                try:
                    return 0, func(*args, **kwargs)
                except WordMeasureError as e:
                    return self._handle_error(e, func.__name__, e.exit_code, stream), None
                except Exception as e:
                    return self._handle_error(e, func.__name__, 1, stream), None
            return wrapper
        return decorator

    def _handle_error(self, exception: Exception, func_name: str, exit_code: int, stream=None) -> int:
        """
        統一錯誤處理邏輯
        """
        self.error_count += 1
        self.last_error_time = time.time()

        if self.should_skip_detailed_logging():
            self.logger.warning(f"頻繁錯誤: {func_name}")
        elif exit_code == 1:
            # 內部錯誤保留完整堆疊
            self.logger.error(f"Error in {func_name}: {str(exception)}", exc_info=True)
        else:
            self.logger.info(f"{func_name} 輸入錯誤: {type(exception).__name__}")

        print(f"error: {type(exception).__name__}: {exception}", file=stream or sys.stderr)
        return exit_code

    def should_skip_detailed_logging(self) -> bool:
        """
        判斷是否應該跳過詳細日誌記錄（基於錯誤頻率）
        """
        if self.error_count > 10 and self.last_error_time:
            return time.time() - self.last_error_time < 60
        return False
