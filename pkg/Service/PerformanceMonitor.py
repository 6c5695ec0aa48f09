"""
性能監控 - 量測命令執行時間，逾時過長時記錄警告
"""
import time
import logging
from collections import deque
from functools import wraps
from typing import Any, Dict

from config import get_config

class PerformanceMonitor:
    def __init__(self, slow_seconds: float = None):
        self.response_times = deque(maxlen=100)  # 保存最近100次的執行時間
        self.error_count = 0
        self.total_requests = 0
        self.last_elapsed = 0.0
        if slow_seconds is None:
            slow_seconds = get_config().get('performance', {}).get('slow_seconds', 3.0)
        self.slow_seconds = slow_seconds
        self.logger = logging.getLogger(__name__)

    def timing_decorator(self, operation_name: str = "operation"):
        """
        用於測量方法執行時間的裝飾器
        """
        def decorator(func):
            @wraps(func)
            def wrapper(*args, **kwargs):
                start_time = time.perf_counter()
                self.total_requests += 1

                try:
                    return func(*args, **kwargs)
                except Exception as e:
                    self.error_count += 1
                    self.logger.error(f"{operation_name} 發生錯誤: {type(e).__name__}")
                    raise
                finally:
                    elapsed = time.perf_counter() - start_time
                    self.last_elapsed = elapsed
                    self.response_times.append(elapsed)
                    if elapsed > self.slow_seconds:
                        self.logger.warning(f"{operation_name} 執行時間過長: {elapsed:.2f}秒")
            return wrapper
        return decorator

    def get_performance_stats(self) -> Dict[str, Any]:
        """
        獲取性能統計資訊
        """
        times = list(self.response_times)
        return {
            "total_requests": self.total_requests,
            "error_count": self.error_count,
            "avg_seconds": sum(times) / len(times) if times else 0,
            "max_seconds": max(times) if times else 0,
            "last_seconds": self.last_elapsed
        }

# 創建全局性能監控實例
performance_monitor = PerformanceMonitor()
