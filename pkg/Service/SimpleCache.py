"""
簡化快取機制 - 避免重複的邊緣枚舉
有界、執行緒安全，超出容量時淘汰最久未使用的項目
"""
import threading
import logging
from collections import OrderedDict
from functools import wraps
from typing import Any, Dict, Hashable, Optional

logger = logging.getLogger(__name__)

class SimpleCache:
    def __init__(self, max_entries: int = 256):
        self.cache = OrderedDict()
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0
        self.lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[Any]:
        """獲取快取值"""
        with self.lock:
            if key in self.cache:
                self.cache.move_to_end(key)
                self.hits += 1
                return self.cache[key]
            self.misses += 1
        return None

    def set(self, key: Hashable, value: Any):
        """設置快取值"""
        with self.lock:
            self.cache[key] = value
            self.cache.move_to_end(key)
            while len(self.cache) > self.max_entries:
                evicted, _ = self.cache.popitem(last=False)
                logger.debug(f"快取已滿，淘汰: {str(evicted)[:40]}")

    def clear(self):
        """清空快取"""
        with self.lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0

    def get_stats(self) -> Dict[str, Any]:
        """獲取快取統計"""
        total = self.hits + self.misses
        return {
            "cache_size": len(self.cache),
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": self.hits / max(total, 1) * 100
        }

    def cache_decorator(self):
        """快取裝飾器，以函數名稱與參數為鍵；參數須可雜湊"""
        def decorator(func):
            @wraps(func)
            def wrapper(*args, **kwargs):
                cache_key = (func.__name__, args, tuple(sorted(kwargs.items())))
                cached_result = self.get(cache_key)
                if cached_result is not None:
                    return cached_result
                result = func(*args, **kwargs)
                self.set(cache_key, result)
                return result
            return wrapper
        return decorator

# 邊緣枚舉快取（以循環約化字詞為鍵）
fringe_cache = SimpleCache(max_entries=512)

# 下降階乘多項式快取
polynomial_cache = SimpleCache(max_entries=256)
