# ==========================================================
# 核心圖服務
# 建構、摺疊、查詢有限生成子群的核心圖，並取得基底與走訪次數
# ==========================================================

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from Service.WordService import Letter, Modulus, Word, word_service
from Service.WordMeasureErrors import InputError, NotMemberError

# 設置日誌記錄
logger = logging.getLogger(__name__)

# (起點, 終點, 標籤 1..r)
Edge = Tuple[int, int, int]


@dataclass(frozen=True)
class PreGraph:
    """尚未摺疊的有根標籤多重圖，根為頂點 0"""
    num_vertices: int
    edges: Tuple[Edge, ...]
    ambient_rank: int


@dataclass(frozen=True)
class CoreGraph:
    """
    摺疊後的核心圖

    頂點為 0..V-1 的稠密編號（根為 0），邊依標準順序排列。
    out_table / in_table 以 v*r + label - 1 索引，值為邊編號或 -1
    """
    num_vertices: int
    edges: Tuple[Edge, ...]
    ambient_rank: int
    out_table: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    in_table: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = self.ambient_rank
        out_table = [-1] * (self.num_vertices * r)
        in_table = [-1] * (self.num_vertices * r)
        for position, (src, dst, label) in enumerate(self.edges):
            out_table[src * r + label - 1] = position
            in_table[dst * r + label - 1] = position
        object.__setattr__(self, 'out_table', tuple(out_table))
        object.__setattr__(self, 'in_table', tuple(in_table))

    @property
    def rank(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    def label_counts(self) -> Tuple[int, ...]:
        """#E_i：每個標籤的邊數"""
        counts = [0] * self.ambient_rank
        for _, _, label in self.edges:
            counts[label - 1] += 1
        return tuple(counts)

    def step(self, vertex: int, letter: Letter) -> int:
        """沿字母走一步，回傳使用的邊編號（-1 表示無路）"""
        index, sign = letter
        table = self.out_table if sign > 0 else self.in_table
        return table[vertex * self.ambient_rank + index - 1]


@dataclass(frozen=True)
class TraversalProfile:
    """閉路徑在每條邊上的有號與無號走訪次數（依 CoreGraph.edges 順序）"""
    signed: Tuple[int, ...]
    unsigned: Tuple[int, ...]

    def divisible_by(self, modulus: Modulus) -> bool:
        """每條邊的有號次數皆 ≡ 0 (mod m)"""
        return all(modulus.annihilates(count) for count in self.signed)

    @property
    def covers_every_edge(self) -> bool:
        return all(count >= 1 for count in self.unsigned)


def _canonical_form(num_vertices: int, edges: Iterable[Edge], ambient_rank: int) -> Tuple[int, Tuple[Edge, ...]]:
    """
    從根做廣度優先重新編號，鄰居依 (標籤, 出邊先於入邊) 順序拜訪。
    輸入必須已摺疊；無法從根到達的頂點會被捨棄
    """
    out_map: Dict[Tuple[int, int], int] = {}
    in_map: Dict[Tuple[int, int], int] = {}
    edge_list = list(edges)
    for src, dst, label in edge_list:
        out_map[(src, label)] = dst
        in_map[(dst, label)] = src

    relabel = {0: 0}
    queue = deque([0])
    while queue:
        vertex = queue.popleft()
        for label in range(1, ambient_rank + 1):
            for neighbour in (out_map.get((vertex, label)), in_map.get((vertex, label))):
                if neighbour is not None and neighbour not in relabel:
                    relabel[neighbour] = len(relabel)
                    queue.append(neighbour)

    renamed = sorted(
        (relabel[src], relabel[dst], label)
        for src, dst, label in edge_list
        if src in relabel and dst in relabel
    )
    return len(relabel), tuple(renamed)


class StallingsGraphService:
    """
    核心圖服務類別
    所有操作皆為純函數，CoreGraph 建立後不可變更
    """

    def fold(self, graph: PreGraph) -> CoreGraph:
        """
        摺疊直到每個頂點每個標籤至多一條出邊與一條入邊，
        再修剪懸掛樹（不移除根），最後以標準順序重新編號。
        結果與摺疊順序無關

        Args:
            graph (PreGraph): 有根標籤多重圖

        Returns:
            CoreGraph: 摺疊後的核心圖
        """
        parent = list(range(graph.num_vertices))

        def find(vertex: int) -> int:
            while parent[vertex] != vertex:
                parent[vertex] = parent[parent[vertex]]
                vertex = parent[vertex]
            return vertex

        def union(a: int, b: int) -> bool:
            a, b = find(a), find(b)
            if a == b:
                return False
            # 保持根為代表元
            if b == 0 or (a != 0 and b < a):
                a, b = b, a
            parent[b] = a
            return True

        merged = True
        while merged:
            merged = False
            out_seen: Dict[Tuple[int, int], int] = {}
            in_seen: Dict[Tuple[int, int], int] = {}
            for src, dst, label in graph.edges:
                src, dst = find(src), find(dst)
                target = out_seen.setdefault((src, label), dst)
                if find(target) != dst and union(target, dst):
                    merged = True
                    continue
                source = in_seen.setdefault((dst, label), src)
                if find(source) != src and union(source, src):
                    merged = True

        edges = {(find(src), find(dst), label) for src, dst, label in graph.edges}
        edges = self._trim_hanging_trees(edges)
        num_vertices, canonical_edges = _canonical_form(graph.num_vertices, edges, graph.ambient_rank)
        return CoreGraph(num_vertices, canonical_edges, graph.ambient_rank)

    def _trim_hanging_trees(self, edges: set) -> set:
        """反覆移除度數 1 的非根頂點"""
        degree: Dict[int, int] = {}
        incident: Dict[int, List[Edge]] = {}
        for edge in edges:
            src, dst, _ = edge
            for vertex in (src, dst):
                degree[vertex] = degree.get(vertex, 0) + 1
                incident.setdefault(vertex, []).append(edge)

        edges = set(edges)
        leaves = deque(v for v, d in degree.items() if v != 0 and d == 1)
        while leaves:
            leaf = leaves.popleft()
            for edge in incident[leaf]:
                if edge not in edges:
                    continue
                edges.discard(edge)
                for vertex in (edge[0], edge[1]):
                    degree[vertex] -= 1
                    if vertex != 0 and vertex != leaf and degree[vertex] == 1:
                        leaves.append(vertex)
        return edges

    def core_graph_of_word(self, word: Word) -> CoreGraph:
        """
        ⟨w⟩ 的核心圖：沿 w 拼出的有根環再摺疊

        Args:
            word (Word): 非空且循環約化的字詞
        """
        if word.is_empty:
            raise InputError("空字詞沒有環圖，平凡子群需由呼叫端另行處理")
        if not word_service.is_cyclically_reduced(word):
            raise InputError(f"字詞必須循環約化: {word}")
        length = len(word)
        edges = []
        for position, (index, sign) in enumerate(word.letters):
            here, there = position, (position + 1) % length
            edges.append((here, there, index) if sign > 0 else (there, here, index))
        return self.fold(PreGraph(length, tuple(edges), word.ambient_rank))

    def core_graph_of_subgroup(self, generators: Sequence[Word]) -> CoreGraph:
        """
        以各生成元的環在根處相接，再摺疊並修剪（根的度數可為 1）
        """
        nontrivial = [g for g in generators if not g.is_empty]
        if not nontrivial:
            raise InputError("子群生成元全為平凡元素")
        ambient_rank = max(g.ambient_rank for g in generators)

        edges: List[Edge] = []
        num_vertices = 1
        for generator in nontrivial:
            length = len(generator)
            path = [0] + list(range(num_vertices, num_vertices + length - 1)) + [0]
            num_vertices += length - 1
            for position, (index, sign) in enumerate(generator.letters):
                here, there = path[position], path[position + 1]
                edges.append((here, there, index) if sign > 0 else (there, here, index))

        graph = self.fold(PreGraph(num_vertices, tuple(edges), ambient_rank))
        logger.debug(f"子群核心圖: {graph.num_vertices} 個頂點, {len(graph.edges)} 條邊, rank {graph.rank}")
        return graph

    def trivial_graph(self, ambient_rank: int = 1) -> CoreGraph:
        return CoreGraph(1, (), ambient_rank)

    def rank(self, graph: CoreGraph) -> int:
        """#邊 − #頂點 + 1"""
        return graph.rank

    def membership_and_profile(self, word: Word, graph: CoreGraph) -> Optional[TraversalProfile]:
        """
        從根依字母走訪；路徑存在且回到根時回傳每條邊的走訪次數，否則回傳 None（不屬於子群）
        """
        if word.ambient_rank > graph.ambient_rank:
            if any(index > graph.ambient_rank for index, _ in word.letters):
                return None
        signed = [0] * len(graph.edges)
        unsigned = [0] * len(graph.edges)
        vertex = 0
        for letter in word.letters:
            edge = graph.step(vertex, letter)
            if edge < 0:
                return None
            src, dst, _ = graph.edges[edge]
            if letter[1] > 0:
                signed[edge] += 1
                vertex = dst
            else:
                signed[edge] -= 1
                vertex = src
            unsigned[edge] += 1
        if vertex != 0:
            return None
        return TraversalProfile(tuple(signed), tuple(unsigned))

    def _spanning_tree(self, graph: CoreGraph) -> Tuple[List[Tuple[Letter, ...]], List[bool]]:
        """
        廣度優先生成樹；同一頂點的邊依標籤、再依另一端頂點編號處理

        Returns:
            tuple: (根到各頂點的字母路徑, 每條邊是否為樹邊)
        """
        r = graph.ambient_rank
        paths: List[Optional[Tuple[Letter, ...]]] = [None] * graph.num_vertices
        paths[0] = ()
        is_tree = [False] * len(graph.edges)
        queue = deque([0])
        while queue:
            vertex = queue.popleft()
            for label in range(1, r + 1):
                candidates = []
                for sign in (1, -1):
                    edge = graph.step(vertex, (label, sign))
                    if edge >= 0:
                        src, dst, _ = graph.edges[edge]
                        candidates.append((dst if sign > 0 else src, sign, edge))
                for neighbour, sign, edge in sorted(candidates, key=lambda c: (c[0], -c[1])):
                    if paths[neighbour] is None:
                        paths[neighbour] = paths[vertex] + ((label, sign),)
                        is_tree[edge] = True
                        queue.append(neighbour)
        return paths, is_tree

    def spanning_tree_basis(self, graph: CoreGraph) -> List[Word]:
        """
        每條非樹邊 e 對應基底元素：根 → origin(e)、跨越 e、再經樹回到根

        Returns:
            list: 長度為 rank 的自由基底
        """
        paths, is_tree = self._spanning_tree(graph)
        basis = []
        for edge, (src, dst, label) in enumerate(graph.edges):
            if is_tree[edge]:
                continue
            back = tuple((index, -sign) for index, sign in reversed(paths[dst]))
            basis.append(Word.from_letters(paths[src] + ((label, 1),) + back, graph.ambient_rank))
        return basis

    def rewrite_in_basis(self, word: Word, graph: CoreGraph) -> Word:
        """
        將 w 改寫為 spanning_tree_basis 上的字詞（字母 b_j 對應第 j 條非樹邊）

        Raises:
            NotMemberError: w 不屬於該子群
        """
        if self.membership_and_profile(word, graph) is None:
            raise NotMemberError(f"{word} 不屬於此核心圖所代表的子群")
        _, is_tree = self._spanning_tree(graph)
        basis_index: Dict[int, int] = {}
        for edge in range(len(graph.edges)):
            if not is_tree[edge]:
                basis_index[edge] = len(basis_index) + 1

        letters: List[Letter] = []
        vertex = 0
        for letter in word.letters:
            edge = graph.step(vertex, letter)
            src, dst, _ = graph.edges[edge]
            vertex = dst if letter[1] > 0 else src
            if edge in basis_index:
                letters.append((basis_index[edge], letter[1]))
        return Word.from_letters(letters, max(graph.rank, 1))

    def canonical_key(self, graph: CoreGraph) -> bytes:
        """
        保根、保標籤同構不變的位元組鍵
        """
        num_vertices, edges = _canonical_form(graph.num_vertices, graph.edges, graph.ambient_rank)
        body = ';'.join(f"{src},{dst},{label}" for src, dst, label in edges)
        return f"{graph.ambient_rank}|{num_vertices}|{body}".encode('ascii')

    def to_adjacency_text(self, graph: CoreGraph) -> str:
        """除錯輸出：每行一條邊 `src dst label`，根為頂點 0"""
        return '\n'.join(f"{src} {dst} {label}" for src, dst, label in graph.edges)

    def from_adjacency_text(self, text: str, ambient_rank: Optional[int] = None) -> CoreGraph:
        """讀回 to_adjacency_text 的輸出並摺疊"""
        edges = []
        for line in text.strip().splitlines():
            parts = line.split()
            if len(parts) != 3:
                raise InputError(f"無法解析的邊: {line!r}")
            edges.append(tuple(int(part) for part in parts))
        if not edges:
            return self.trivial_graph(ambient_rank or 1)
        num_vertices = 1 + max(max(src, dst) for src, dst, _ in edges)
        rank = ambient_rank or max(label for _, _, label in edges)
        return self.fold(PreGraph(num_vertices, tuple(edges), rank))


# 全域核心圖服務實例
stallings_service = StallingsGraphService()
