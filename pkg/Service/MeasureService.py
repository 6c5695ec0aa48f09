# ==========================================================
# 字詞測度服務
# 組合精確跡公式，萃取 χ_m、π 與二階不變量，計算長度下界並執行曲面字詞檢驗
# ==========================================================

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from Service.FringeService import FringeElement, fringe_service
from Service.PerformanceMonitor import performance_monitor
from Service.RationalFunctionService import RationalFunction, ratfun_service
from Service.SamplerService import GroupFamily, GroupSpec, sampler_service
from Service.StallingsGraphService import stallings_service
from Service.WordMeasureErrors import InputError, InternalConsistencyError
from Service.WordService import INFINITY, Modulus, Word, word_service

# 設置日誌記錄
logger = logging.getLogger(__name__)


def _exponent_value(value: Optional[int], infinite: str):
    return infinite if value is None else value


class Orientation(Enum):
    ORIENTABLE = 'orientable'
    NONORIENTABLE = 'nonorientable'


@dataclass(frozen=True)
class Witness:
    """Q_m 中最小 rank 的子群：其自由基底與 rank"""
    basis: Tuple[Word, ...]
    rank: int

    def to_payload(self) -> Dict:
        return {"rank": self.rank, "basis": [str(b) for b in self.basis]}


@dataclass(frozen=True)
class ChiReport:
    """
    χ_m(w) 報告；chi / chi2 為 None 表示 −∞
    """
    modulus: Modulus
    chi: Optional[int]
    leading_coefficient: int
    witnesses: Tuple[Witness, ...]
    chi2: Optional[int]
    c2: int
    unique_ae_flag: bool
    trace: RationalFunction

    def to_payload(self) -> Dict:
        return {
            "m": str(self.modulus),
            "chi": _exponent_value(self.chi, "-inf"),
            "C": self.leading_coefficient,
            "witnesses": [w.to_payload() for w in self.witnesses],
            "chi2": _exponent_value(self.chi2, "-inf"),
            "c2": self.c2,
            "unique_ae": self.unique_ae_flag,
            "trace": self.trace.to_payload(),
        }


@dataclass(frozen=True)
class PrimitivityRank:
    """π 為 None 表示 ∞"""
    pi: Optional[int]
    coefficient: int
    remainder: RationalFunction

    def to_payload(self) -> Dict:
        return {
            "pi": _exponent_value(self.pi, "inf"),
            "C": self.coefficient,
            "remainder": self.remainder.to_payload(),
        }


@dataclass(frozen=True)
class LengthBounds:
    """cl 與 min(sql, 2cl) 的下界；None 表示該長度為 ∞"""
    chi_infinity: Optional[int]
    chi_two: Optional[int]
    cl_lower: Optional[int]
    mixed_lower: Optional[int]

    def to_payload(self) -> Dict:
        return {
            "chi_inf": _exponent_value(self.chi_infinity, "-inf"),
            "chi_2": _exponent_value(self.chi_two, "-inf"),
            "cl_lower": _exponent_value(self.cl_lower, "inf"),
            "min_sql_2cl_lower": _exponent_value(self.mixed_lower, "inf"),
        }


@dataclass(frozen=True)
class SurfaceCheck:
    name: str
    passed: bool
    evidence: str


@dataclass(frozen=True)
class MonteCarloOptions:
    """曲面檢驗的蒙地卡羅子檢驗參數"""
    dimension: int = 10
    samples: int = 100000
    seed: int = 12345
    band: float = 4.0
    chains: int = 1


@dataclass(frozen=True)
class SurfaceVerdict:
    """
    曲面字詞必要條件檢驗結果；CONSISTENT 只表示所有可檢查的必要條件成立
    """
    orientation: Orientation
    genus: int
    checks: Tuple[SurfaceCheck, ...] = field(default_factory=tuple)

    @property
    def overall(self) -> str:
        return "CONSISTENT" if all(check.passed for check in self.checks) else "INCONSISTENT"

    def to_payload(self) -> Dict:
        return {
            "orientation": self.orientation.value,
            "genus": self.genus,
            "checks": [{"check": c.name, "passed": c.passed, "evidence": c.evidence} for c in self.checks],
            "overall": self.overall,
            "meaning": "consistent with necessary conditions" if self.overall == "CONSISTENT"
                       else "a necessary condition fails",
        }


class MeasureService:
    """
    字詞測度服務類別
    (chi, C) 同時由 Q_m 的 rank 與有理函數首項計算，兩者不一致即為內部錯誤
    """

    def _fringe_terms(self, word: Word, modulus: Modulus, threads: int = None) -> List[FringeElement]:
        core, _ = word_service.cyclic_reduce(word)
        return fringe_service.q_m(core, modulus, threads)

    @performance_monitor.timing_decorator("trace_rational")
    def trace_rational(self, word: Word, modulus: Modulus, threads: int = None) -> RationalFunction:
        """
        Σ_{H ∈ Q_m(w)} L_H(N)

        Args:
            word (Word): 字詞（可為空字詞）
            modulus (Modulus): m ∈ Z≥1 ∪ {∞}

        Returns:
            RationalFunction: 空字詞為 N；Q_m 為空時為零函數
        """
        if word.is_empty:
            return RationalFunction.power_of_n(1)
        elements = self._fringe_terms(word, modulus, threads)
        return ratfun_service.sum_terms(ratfun_service.l_term(e.graph, word.ambient_rank) for e in elements)

    def coarse_validity_bound(self, word: Word) -> int:
        """⌈½ maxᵢ #Eᵢ(⟨w⟩)⌉，較 n_min 寬鬆的有效範圍參考值"""
        if word.is_empty:
            return 1
        core, _ = word_service.cyclic_reduce(word)
        graph = stallings_service.core_graph_of_word(core)
        return max(1, math.ceil(max(graph.label_counts()) / 2))

    def _witness(self, element: FringeElement, conjugator: Word) -> Witness:
        basis = stallings_service.spanning_tree_basis(element.graph)
        if not conjugator.is_empty:
            basis = [conjugator * b * conjugator.inverse() for b in basis]
        return Witness(tuple(basis), element.rank)

    def chi_report(self, word: Word, modulus: Modulus, threads: int = None) -> ChiReport:
        """
        χ_m(w)、首項係數 C、最小 rank 見證子群與二階資料

        Raises:
            InputError: m = 1（請改用 primitivity_rank）
            InternalConsistencyError: 組合與解析的 (chi, C) 不一致
        """
        if modulus.value == 1:
            raise InputError("m=1 沒有 χ 報告，請改用 pi 命令（primitivity_rank）")

        trace = self.trace_rational(word, modulus, threads)
        if word.is_empty:
            witness = Witness((), 0)
            return ChiReport(modulus, 1, 1, (witness,), None, 0, True, trace)

        core, conjugator = word_service.cyclic_reduce(word)
        elements = fringe_service.q_m(core, modulus, threads)

        # 組合計算：Q_m 中最小的 rank
        if elements:
            minimal_rank = min(e.rank for e in elements)
            minimal = [e for e in elements if e.rank == minimal_rank]
            chi_combinatorial, count_combinatorial = 1 - minimal_rank, len(minimal)
        else:
            minimal = []
            chi_combinatorial, count_combinatorial = None, 0

        # 解析計算：有理函數的首項
        prefix = ratfun_service.laurent_prefix(trace, 2) if not trace.is_zero else None
        if prefix:
            exponent, coefficient = prefix.leading
            if coefficient.denominator != 1:
                raise InternalConsistencyError(f"首項係數不是整數: {coefficient}")
            chi_analytic, count_analytic = exponent, int(coefficient)
        else:
            chi_analytic, count_analytic = None, 0

        if (chi_combinatorial, count_combinatorial) != (chi_analytic, count_analytic):
            raise InternalConsistencyError(
                f"{word} m={modulus}: 組合結果 (chi={chi_combinatorial}, C={count_combinatorial}) "
                f"與解析結果 (chi={chi_analytic}, C={count_analytic}) 不一致"
            )

        chi, count = chi_analytic, count_analytic
        if chi is None:
            chi2, c2, unique = None, 0, False
        elif count >= 2:
            chi2, c2, unique = chi, count - 1, False
        elif trace.is_power_of_n(chi):
            chi2, c2, unique = None, 0, True
        else:
            if len(prefix) < 2:
                raise InternalConsistencyError(f"{word} m={modulus}: 展開缺少第二項")
            chi2, second = prefix[1]
            if second.denominator != 1 or second <= 0:
                raise InternalConsistencyError(f"{word} m={modulus}: 第二項係數 {second} 不是正整數")
            c2, unique = int(second), False

        witnesses = tuple(self._witness(e, conjugator) for e in minimal)
        logger.debug(f"{word} m={modulus}: chi={chi}, C={count}, chi2={chi2}, c2={c2}")
        return ChiReport(modulus, chi, count, witnesses, chi2, c2, unique, trace)

    def primitivity_rank(self, word: Word, threads: int = None) -> PrimitivityRank:
        """
        由 tr_w(S_N) − 1 的首項讀出 π(w) 與 C；餘項為零時 π = ∞
        """
        if word.is_empty:
            raise InputError("空字詞沒有 primitivity rank")
        remainder = self.trace_rational(word, Modulus(1), threads) - 1
        return PrimitivityRank(*self._leading_gap(remainder), remainder)

    def _leading_gap(self, remainder: RationalFunction) -> Tuple[Optional[int], int]:
        if remainder.is_zero:
            return None, 0
        exponent, coefficient = ratfun_service.laurent_prefix(remainder, 1).leading
        if coefficient.denominator != 1 or coefficient <= 0:
            raise InternalConsistencyError(f"餘項首項係數 {coefficient} 不是正整數")
        return 1 - exponent, int(coefficient)

    def expected_fixed_points_subgroup(self, generators: Sequence[Word], threads: int = None) -> RationalFunction:
        """
        隨機子群像的共同不動點期望值：Σ_{J ∈ [H,∞)_X} L_J(N)
        """
        elements = fringe_service.enumerate_subgroup_fringe(generators, threads)
        ambient_rank = max(g.ambient_rank for g in generators)
        return ratfun_service.sum_terms(ratfun_service.l_term(e.graph, ambient_rank) for e in elements)

    def subgroup_primitivity_rank(self, generators: Sequence[Word], threads: int = None) -> PrimitivityRank:
        """
        期望不動點數減去 N^{1−rank(H)} 後的首項；餘項為零表示 H 為自由因子
        """
        graph = stallings_service.core_graph_of_subgroup(generators)
        total = self.expected_fixed_points_subgroup(generators, threads)
        remainder = total - RationalFunction.power_of_n(1 - graph.rank)
        return PrimitivityRank(*self._leading_gap(remainder), remainder)

    def length_bounds(self, word: Word, threads: int = None) -> LengthBounds:
        """
        cl(w) ≥ ⌈(1 − χ_∞)/2⌉，min(sql, 2cl) ≥ 1 − χ₂
        """
        chi_infinity = self.chi_report(word, INFINITY, threads).chi
        chi_two = self.chi_report(word, Modulus(2), threads).chi
        cl_lower = None if chi_infinity is None else max(0, math.ceil(Fraction(1 - chi_infinity, 2)))
        mixed_lower = None if chi_two is None else max(0, 1 - chi_two)
        return LengthBounds(chi_infinity, chi_two, cl_lower, mixed_lower)

    def _rewrite_exponents(self, element: FringeElement, core: Word) -> Tuple[int, ...]:
        rewritten = stallings_service.rewrite_in_basis(core, element.graph)
        return word_service.exponent_vector(rewritten)[:element.rank]

    def _monte_carlo_check(self, word: Word, family: GroupFamily, target: Fraction,
                           options: MonteCarloOptions) -> SurfaceCheck:
        spec = GroupSpec(family, options.dimension)
        estimate = sampler_service.estimate_trace(word, spec, options.samples, options.seed, options.chains)
        expected = float(target)
        passed = estimate.within(expected, options.band)
        evidence = (f"mean={estimate.mean.real:.6f}{estimate.mean.imag:+.6f}i, target={expected:.6f}, "
                    f"stderr=({estimate.stderr[0]:.2e}, {estimate.stderr[1]:.2e}), band={options.band}")
        return SurfaceCheck(f"monte_carlo_{family.value}", passed, evidence)

    def surface_type(self, word: Word) -> Tuple[Orientation, int]:
        """
        每個出現的字母恰出現兩次時，黏合 |w| 邊形的對應邊得到閉曲面，字詞與該曲面的標準曲面字詞 Aut-等價

        Returns:
            tuple: (可定向性, genus)

        Raises:
            InputError: 空字詞，或有字母出現次數不是 2
        """
        counts = word_service.letter_counts(word)
        if word.is_empty or any(count not in (0, 2) for count in counts):
            raise InputError(f"{word} 不是每個字母恰出現兩次，無法由黏合判定曲面類型")

        # 第 t 個字母連接多邊形頂點 t 與 t+1；正字母由 t 指向 t+1
        length = len(word)
        parent = list(range(length))

        def find(vertex: int) -> int:
            while parent[vertex] != vertex:
                parent[vertex] = parent[parent[vertex]]
                vertex = parent[vertex]
            return vertex

        ends: Dict[int, List[Tuple[int, int]]] = {}
        letter_signs: Dict[int, List[int]] = {}
        for position, (index, sign) in enumerate(word.letters):
            tail, head = position, (position + 1) % length
            ends.setdefault(index, []).append((tail, head) if sign > 0 else (head, tail))
            letter_signs.setdefault(index, []).append(sign)
        for (tail_a, head_a), (tail_b, head_b) in ends.values():
            parent[find(tail_a)] = find(tail_b)
            parent[find(head_a)] = find(head_b)

        vertices = len({find(v) for v in range(length)})
        euler = vertices - len(ends) + 1
        # 同號出現兩次的字母使黏合反轉方向
        nonorientable = any(len(set(signs)) == 1 for signs in letter_signs.values())
        if nonorientable:
            genus, orientation = 2 - euler, Orientation.NONORIENTABLE
        else:
            genus, orientation = (2 - euler) // 2, Orientation.ORIENTABLE
        if genus < 1:
            raise InternalConsistencyError(f"{word} 黏合得到球面")
        logger.debug(f"{word} 黏合結果: {orientation.value}, genus={genus}")
        return orientation, genus

    def surface_test(self, word: Word, genus: Optional[int] = None, orientation: Optional[Orientation] = None,
                     monte_carlo: Optional[MonteCarloOptions] = None, finite_m: bool = False,
                     threads: int = None) -> SurfaceVerdict:
        """
        曲面字詞的必要條件檢驗

        Args:
            word (Word): 待檢驗字詞
            genus (int, optional): g ≥ 1；與 orientation 同時省略時由 surface_type 判定
            orientation (Orientation, optional): 可定向或不可定向
            monte_carlo (MonteCarloOptions, optional): 提供時加入 U(N)/O(N) 蒙地卡羅子檢驗
            finite_m (bool): 以 m = |w|+1 的 C_m≀S_N 取代 S¹≀S_N

        Returns:
            SurfaceVerdict: 每項檢驗與整體判定
        """
        if genus is None and orientation is None:
            orientation, genus = self.surface_type(word)
        elif genus is None or orientation is None:
            raise InputError("genus 與曲面類型必須同時指定或同時省略")
        if genus < 1:
            raise InputError(f"genus 必須 ≥ 1: {genus}")
        core, _ = word_service.cyclic_reduce(word)
        vector = word_service.exponent_vector(word)
        circle = Modulus(len(core) + 1) if finite_m else INFINITY
        checks: List[SurfaceCheck] = []

        if orientation is Orientation.ORIENTABLE:
            exponent = 1 - 2 * genus
            checks.append(SurfaceCheck("exponent_vector_zero", all(v == 0 for v in vector), f"exponents={list(vector)}"))

            trace = self.trace_rational(word, circle, threads)
            target = RationalFunction.power_of_n(exponent)
            checks.append(SurfaceCheck("trace_circle_equals_power", trace == target,
                                       f"m={circle}, trace={trace}, expected=N^{exponent}"))

            found = None
            if not core.is_empty:
                for element in fringe_service.q_m(core, circle, threads):
                    if element.rank == 2 * genus and all(e == 0 for e in self._rewrite_exponents(element, core)):
                        found = element
                        break
            checks.append(SurfaceCheck("commutator_witness", found is not None,
                                       self._witness_evidence(found, 2 * genus)))

            if monte_carlo is not None:
                target_value = Fraction(1, monte_carlo.dimension ** (2 * genus - 1))
                checks.append(self._monte_carlo_check(word, GroupFamily.UNITARY, target_value, monte_carlo))
        else:
            exponent = 1 - genus
            even = all(v % 2 == 0 for v in vector)
            nonzero = any(v != 0 for v in vector)
            checks.append(SurfaceCheck("exponent_vector_even_nonzero", even and nonzero, f"exponents={list(vector)}"))

            trace_circle = self.trace_rational(word, circle, threads)
            checks.append(SurfaceCheck("trace_circle_vanishes", trace_circle.is_zero, f"m={circle}, trace={trace_circle}"))

            trace_two = self.trace_rational(word, Modulus(2), threads)
            target = RationalFunction.power_of_n(exponent)
            checks.append(SurfaceCheck("trace_m2_equals_power", trace_two == target,
                                       f"trace={trace_two}, expected=N^{exponent}"))

            found = None
            if not core.is_empty:
                for element in fringe_service.q_m(core, Modulus(2), threads):
                    if element.rank == genus and all(e % 2 == 0 for e in self._rewrite_exponents(element, core)):
                        found = element
                        break
            checks.append(SurfaceCheck("square_witness", found is not None, self._witness_evidence(found, genus)))

            if monte_carlo is not None:
                target_value = Fraction(1, monte_carlo.dimension ** (genus - 1))
                checks.append(self._monte_carlo_check(word, GroupFamily.ORTHOGONAL, target_value, monte_carlo))

        verdict = SurfaceVerdict(orientation, genus, tuple(checks))
        logger.info(f"曲面檢驗 {word} g={genus} {orientation.value}: {verdict.overall}")
        return verdict

    def _witness_evidence(self, element: Optional[FringeElement], rank: int) -> str:
        if element is None:
            return f"no rank-{rank} witness"
        basis = ', '.join(str(b) for b in stallings_service.spanning_tree_basis(element.graph))
        return f"witness basis: {basis}"


# 全域字詞測度服務實例
measure_service = MeasureService()
