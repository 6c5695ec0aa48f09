"""
並行處理服務 - 以固定順序合併結果，確保輸出可重現
"""
import concurrent.futures
import logging
from typing import Any, Callable, Iterable, List

logger = logging.getLogger(__name__)

class AsyncProcessor:
    def __init__(self, max_workers: int = 1):
        self.max_workers = max(1, int(max_workers))

    def batch_process(self, func: Callable[[Any], Any], items: Iterable[Any]) -> List[Any]:
        """
        批次處理，結果順序與輸入順序一致

        Args:
            func: 對每個項目執行的函數
            items: 待處理項目

        Returns:
            list: 依輸入順序排列的結果
        """
        items = list(items)
        if self.max_workers == 1 or len(items) <= 1:
            return [func(item) for item in items]

        logger.debug(f"以 {self.max_workers} 個執行緒處理 {len(items)} 個分片")
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            # map 保留輸入順序
            return list(executor.map(func, items))

    def with_workers(self, max_workers: int) -> "AsyncProcessor":
        """依指定執行緒數取得處理器"""
        if max_workers == self.max_workers:
            return self
        return AsyncProcessor(max_workers)

# 全域處理器（預設單執行緒以保持確定性）
async_processor = AsyncProcessor()
