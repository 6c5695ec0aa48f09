# ==========================================================
# 邊緣枚舉服務
# 列舉被 ⟨w⟩ X-覆蓋的所有子群（商核心圖），並以 K_m 條件篩選出 Q_m(w)
# ==========================================================

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from config import get_config
from Service.AsyncProcessor import async_processor
from Service.SimpleCache import fringe_cache
from Service.StallingsGraphService import CoreGraph, Edge, PreGraph, TraversalProfile, stallings_service
from Service.WordMeasureErrors import InputError, InternalConsistencyError, ResourceCapError
from Service.WordService import Modulus, Word, word_service

# 設置日誌記錄
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FringeElement:
    """邊緣中的一個子群：其核心圖、w 在其上的走訪次數與標準鍵"""
    graph: CoreGraph
    profile: Optional[TraversalProfile]
    key: bytes

    @property
    def rank(self) -> int:
        return self.graph.rank


class _PartitionWalker:
    """
    以受限增長字串列舉基底圖頂點的分割，只保留商圖仍為摺疊圖的分割。
    每指派一個頂點即檢查 (區塊, 標籤) 的出入邊是否唯一，衝突即剪枝
    """

    def __init__(self, base: CoreGraph):
        self.base = base
        self.size = base.num_vertices
        # 兩端點中較大編號為 i 的邊，在指派頂點 i 時檢查
        self.closing: List[List[Edge]] = [[] for _ in range(self.size)]
        for src, dst, label in base.edges:
            self.closing[max(src, dst)].append((src, dst, label))

    def prefixes(self, depth: int) -> List[Tuple[int, ...]]:
        """長度為 depth 的所有受限增長字串（依字典序）"""
        depth = max(1, min(depth, self.size))
        found: List[Tuple[int, ...]] = []

        def extend(prefix: Tuple[int, ...], count: int):
            if len(prefix) == depth:
                found.append(prefix)
                return
            for block in range(count + 1):
                extend(prefix + (block,), max(count, block + 1))

        extend((0,), 1)
        return found

    def walk(self, prefix: Tuple[int, ...]) -> List[Tuple[int, ...]]:
        """列舉以 prefix 開頭且不需再摺疊的分割"""
        blocks = [0] * self.size
        out_map: Dict[Tuple[int, int], int] = {}
        in_map: Dict[Tuple[int, int], int] = {}
        results: List[Tuple[int, ...]] = []

        def undo(added):
            for table, key in added:
                del table[key]

        def assign(vertex: int, block: int):
            blocks[vertex] = block
            added = []
            for src, dst, label in self.closing[vertex]:
                block_src, block_dst = blocks[src], blocks[dst]
                target = out_map.get((block_src, label))
                if target is None:
                    out_map[(block_src, label)] = block_dst
                    added.append((out_map, (block_src, label)))
                elif target != block_dst:
                    undo(added)
                    return None
                source = in_map.get((block_dst, label))
                if source is None:
                    in_map[(block_dst, label)] = block_src
                    added.append((in_map, (block_dst, label)))
                elif source != block_src:
                    undo(added)
                    return None
            return added

        def descend(vertex: int, count: int):
            if vertex == self.size:
                results.append(tuple(blocks))
                return
            for block in range(count + 1):
                added = assign(vertex, block)
                if added is None:
                    continue
                descend(vertex + 1, max(count, block + 1))
                undo(added)

        count = 0
        for vertex, block in enumerate(prefix):
            if block > count or assign(vertex, block) is None:
                return []
            count = max(count, block + 1)
        descend(len(prefix), count)
        return results

    def quotient(self, blocks: Tuple[int, ...]) -> CoreGraph:
        edges = {(blocks[src], blocks[dst], label) for src, dst, label in self.base.edges}
        pre = PreGraph(max(blocks) + 1, tuple(sorted(edges)), self.base.ambient_rank)
        return stallings_service.fold(pre)


class FringeService:
    """
    邊緣枚舉服務類別
    分割列舉可依受限增長字串前綴分片並行，結果依固定順序合併
    """

    def __init__(self, max_word_length: int = None, shard_depth: int = None, threads: int = None):
        config = get_config()
        fringe_config = config.get('fringe', {})
        self.max_word_length = max_word_length or fringe_config.get('max_word_length', 16)
        self.shard_depth = shard_depth or fringe_config.get('shard_depth', 3)
        self.threads = threads or config.get('threads', 1)
        fringe_cache.max_entries = fringe_config.get('cache_entries', fringe_cache.max_entries)

    def _check_cap(self, size: int, what: str):
        if size > self.max_word_length:
            raise ResourceCapError(
                f"{what} 大小 {size} 超過上限 {self.max_word_length}（可用 WORDMEASURE_MAX_WORD_LENGTH 調整）"
            )
        if size >= self.max_word_length - 2:
            logger.warning(f"{what} 大小 {size} 接近上限 {self.max_word_length}，枚舉可能很慢")

    def _enumerate_quotients(self, base: CoreGraph, threads: Optional[int]) -> List[CoreGraph]:
        walker = _PartitionWalker(base)
        shards = walker.prefixes(self.shard_depth)

        def run_shard(prefix):
            return [walker.quotient(blocks) for blocks in walker.walk(prefix)]

        processor = async_processor.with_workers(threads or self.threads)
        graphs: List[CoreGraph] = []
        for shard in processor.batch_process(run_shard, shards):
            graphs.extend(shard)
        logger.debug(f"{len(shards)} 個分片共產生 {len(graphs)} 個分割")
        return graphs

    def _collect(self, graphs: Sequence[CoreGraph], word: Optional[Word]) -> List[FringeElement]:
        elements: Dict[bytes, FringeElement] = {}
        for graph in graphs:
            key = stallings_service.canonical_key(graph)
            if key in elements:
                continue
            profile = None
            if word is not None:
                profile = stallings_service.membership_and_profile(word, graph)
                if profile is None or not profile.covers_every_edge:
                    raise InternalConsistencyError(f"{word} 未走訪商圖的每條邊")
            elements[key] = FringeElement(graph, profile, key)
        return sorted(elements.values(), key=lambda e: (e.rank, e.graph.num_vertices, e.key))

    def enumerate_fringe(self, word: Word, threads: int = None) -> List[FringeElement]:
        """
        列舉 [⟨w⟩,∞)_X

        Args:
            word (Word): 非空且循環約化的字詞
            threads (int, optional): 分片執行緒數

        Returns:
            list: 依 (rank, 頂點數, 鍵) 排序的邊緣元素
        """
        if word.is_empty:
            raise InputError("空字詞的邊緣未定義")
        if not word_service.is_cyclically_reduced(word):
            raise InputError(f"字詞必須循環約化: {word}")
        self._check_cap(len(word), "字詞長度")

        cache_key = ('word', word.letters, word.ambient_rank)
        cached = fringe_cache.get(cache_key)
        if cached is not None:
            return cached

        base = stallings_service.core_graph_of_word(word)
        elements = self._collect(self._enumerate_quotients(base, threads), word)
        fringe_cache.set(cache_key, elements)
        logger.info(f"邊緣枚舉完成: {word} 共 {len(elements)} 個子群")
        return elements

    def q_m(self, word: Word, modulus: Modulus, threads: int = None) -> List[FringeElement]:
        """每條邊有號走訪次數皆 ≡ 0 (mod m) 的邊緣元素"""
        return [element for element in self.enumerate_fringe(word, threads) if element.profile.divisible_by(modulus)]

    def enumerate_subgroup_fringe(self, generators: Sequence[Word], threads: int = None) -> List[FringeElement]:
        """
        列舉 [H,∞)_X：對子群核心圖的頂點做同樣的分割列舉
        """
        base = stallings_service.core_graph_of_subgroup(generators)
        self._check_cap(base.num_vertices, "核心圖頂點數")

        cache_key = ('subgroup', stallings_service.canonical_key(base))
        cached = fringe_cache.get(cache_key)
        if cached is not None:
            return cached

        elements = self._collect(self._enumerate_quotients(base, threads), None)
        fringe_cache.set(cache_key, elements)
        logger.info(f"子群邊緣枚舉完成: rank {base.rank} 共 {len(elements)} 個子群")
        return elements


# 全域邊緣枚舉服務實例
fringe_service = FringeService()
