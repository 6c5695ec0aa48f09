# ==========================================================
# 取樣服務
# S_N、C_m≀S_N、S¹≀S_N、U(N)、O(N) 上的 Haar 取樣、蒙地卡羅跡估計
# 以及小群上的窮舉驗證
# ==========================================================

import logging
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from Service.AsyncProcessor import async_processor
from Service.WordMeasureErrors import InputError, ResourceCapError
from Service.WordService import Word

# 設置日誌記錄
logger = logging.getLogger(__name__)

GENERATOR_NAME = 'numpy.random.Philox + SeedSequence.spawn'


class GroupFamily(Enum):
    SYM = 'sym'
    WREATH = 'wreath'
    CIRCLE = 'circle'
    UNITARY = 'u'
    ORTHOGONAL = 'o'


class S3Irrep(Enum):
    TRIVIAL = 'trivial'
    SIGN = 'sign'
    STANDARD2 = 'standard2'


# S₃ 特徵標表，類別順序：單位元、對換、3-循環
_S3_CHARACTER_TABLE = {
    S3Irrep.TRIVIAL: (1, 1, 1),
    S3Irrep.SIGN: (1, -1, 1),
    S3Irrep.STANDARD2: (2, 0, -1),
}
# 依不動點數決定 S₃ 的共軛類
_S3_CLASS_BY_FIXED_POINTS = {3: 0, 1: 1, 0: 2}


@dataclass(frozen=True)
class GroupSpec:
    """群族與維度 N；WREATH 需要 m ≥ 2"""
    family: GroupFamily
    dimension: int
    m: Optional[int] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError(f"維度必須 ≥ 1: {self.dimension}")
        if self.family is GroupFamily.WREATH and (self.m is None or self.m < 2):
            raise InputError(f"wreath 需要 m ≥ 2: {self.m}")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """
        解析 sym:N、wreath:M:N、circle:N、u:N、o:N
        """
        parts = text.strip().lower().split(':')
        try:
            family = GroupFamily(parts[0])
            if family is GroupFamily.WREATH:
                if len(parts) != 3:
                    raise ValueError
                return cls(family, int(parts[2]), int(parts[1]))
            if len(parts) != 2:
                raise ValueError
            return cls(family, int(parts[1]))
        except ValueError:
            raise InputError(f"無法解析群規格: {text}（格式如 sym:5、wreath:2:5、circle:5、u:10、o:8）")

    def __str__(self) -> str:
        if self.family is GroupFamily.WREATH:
            return f"wreath:{self.m}:{self.dimension}"
        return f"{self.family.value}:{self.dimension}"


@dataclass(frozen=True)
class TraceEstimate:
    """蒙地卡羅跡估計；stderr 為實部與虛部各自的標準誤"""
    mean: complex
    stderr: Tuple[float, float]
    samples: int
    seed: int
    chains: int = 1

    def within(self, target: complex, band: float) -> bool:
        """實部與虛部皆落在 band 個標準誤之內"""
        target = complex(target)
        tolerance_re = band * max(self.stderr[0], 1e-12)
        tolerance_im = band * max(self.stderr[1], 1e-12)
        return (abs(self.mean.real - target.real) <= tolerance_re
                and abs(self.mean.imag - target.imag) <= tolerance_im)

    def to_payload(self) -> Dict:
        return {
            "mean_real": float(self.mean.real),
            "mean_imag": float(self.mean.imag),
            "stderr_real": float(self.stderr[0]),
            "stderr_imag": float(self.stderr[1]),
            "samples": self.samples,
            "seed": self.seed,
            "chains": self.chains,
            "generator": GENERATOR_NAME,
        }


@dataclass(frozen=True)
class DecayPoint:
    dimension: int
    estimate: TraceEstimate


@dataclass(frozen=True)
class DecayReport:
    """不同 N 下的估計與 log-log 斜率（僅供參考，不做判定）"""
    points: Tuple[DecayPoint, ...]
    pairwise_slopes: Tuple[Optional[float], ...]
    fitted_slope: Optional[float]

    def to_payload(self) -> Dict:
        return {
            "points": [{"dimension": p.dimension, **p.estimate.to_payload()} for p in self.points],
            "pairwise_slopes": list(self.pairwise_slopes),
            "fitted_slope": self.fitted_slope,
        }


def _walk(letters: Sequence[Tuple[int, int]], perms, inverses, start: int, multiplicity=None) -> int:
    """
    沿字詞走訪置換矩陣的列；multiplicity 不為 None 時累計每個相位變數的有號次數
    """
    row = start
    for index, sign in letters:
        if sign > 0:
            if multiplicity is not None:
                multiplicity[(index, row)] = multiplicity.get((index, row), 0) + 1
            row = perms[index - 1][row]
        else:
            row = inverses[index - 1][row]
            if multiplicity is not None:
                multiplicity[(index, row)] = multiplicity.get((index, row), 0) - 1
    return row


def _inverse(perm: Tuple[int, ...]) -> Tuple[int, ...]:
    inverse = [0] * len(perm)
    for source, target in enumerate(perm):
        inverse[target] = source
    return tuple(inverse)


class SamplerService:
    """
    取樣服務類別
    Haar 取樣使用 Philox 計數器型產生器，鏈的子種子由 SeedSequence.spawn 導出
    """

    def __init__(self):
        config = get_config()
        self.monte_carlo = config.get('monte_carlo', {})
        self.max_evaluations = config.get('oracle', {}).get('max_evaluations', 10 ** 8)
        self.threads = config.get('threads', 1)

    # ---------- Haar 取樣 ----------

    def haar_batch(self, spec: GroupSpec, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        一次抽取 size 個 Haar 隨機元素

        Returns:
            np.ndarray: 形狀 (size, N, N)
        """
        n = spec.dimension
        if spec.family is GroupFamily.UNITARY:
            z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / np.sqrt(2)
            q, r = np.linalg.qr(z)
            d = np.diagonal(r, axis1=-2, axis2=-1)
            return q * (d / np.abs(d))[:, np.newaxis, :]
        if spec.family is GroupFamily.ORTHOGONAL:
            z = rng.standard_normal((size, n, n))
            q, r = np.linalg.qr(z)
            d = np.diagonal(r, axis1=-2, axis2=-1)
            return q * np.sign(d)[:, np.newaxis, :]

        perms = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
        if spec.family is GroupFamily.SYM:
            phases = np.ones((size, n))
        elif spec.family is GroupFamily.WREATH:
            phases = np.exp(2j * np.pi * rng.integers(0, spec.m, size=(size, n)) / spec.m)
        else:
            phases = np.exp(2j * np.pi * rng.random((size, n)))
        matrices = np.zeros((size, n, n), dtype=phases.dtype)
        batch_index = np.arange(size)[:, np.newaxis]
        row_index = np.arange(n)[np.newaxis, :]
        matrices[batch_index, row_index, perms] = phases
        return matrices

    def haar_element(self, spec: GroupSpec, rng: np.random.Generator) -> np.ndarray:
        return self.haar_batch(spec, rng, 1)[0]

    def _word_traces(self, word: Word, spec: GroupSpec, rng: np.random.Generator, size: int) -> np.ndarray:
        if word.is_empty:
            return np.full(size, complex(spec.dimension))
        generators = [self.haar_batch(spec, rng, size) for _ in range(word.ambient_rank)]
        product = None
        for index, sign in word.letters:
            matrix = generators[index - 1]
            if sign < 0:
                matrix = np.conj(np.swapaxes(matrix, -1, -2))
            product = matrix if product is None else product @ matrix
        return np.trace(product, axis1=-2, axis2=-1).astype(complex)

    def estimate_trace(self, word: Word, spec: GroupSpec, samples: int = None, seed: int = None,
                       chains: int = None, batch_size: int = None, threads: int = None) -> TraceEstimate:
        """
        E[tr w(g₁,…,g_r)] 的蒙地卡羅估計

        Args:
            word (Word): 字詞
            spec (GroupSpec): 群規格
            samples (int): 樣本數（≥ 1）
            seed (int): 主種子
            chains (int): 獨立鏈數，子種子由 SeedSequence(seed).spawn(chains) 導出
            batch_size (int): 每批抽樣數
            threads (int): 執行緒數，不影響結果

        Returns:
            TraceEstimate: 給定 (seed, samples, chains) 時結果完全可重現
        """
        samples = samples if samples is not None else self.monte_carlo.get('samples', 100000)
        seed = seed if seed is not None else self.monte_carlo.get('seed', 12345)
        chains = chains or self.monte_carlo.get('chains', 1)
        batch_size = batch_size or self.monte_carlo.get('batch_size', 2048)
        if samples < 1:
            raise InputError(f"樣本數必須 ≥ 1: {samples}")
        if chains < 1 or chains > samples:
            raise InputError(f"鏈數必須介於 1 與樣本數之間: {chains}")

        counts = [samples // chains + (1 if k < samples % chains else 0) for k in range(chains)]
        seeds = np.random.SeedSequence(seed).spawn(chains)

        def run_chain(job):
            seed_sequence, count = job
            rng = np.random.Generator(np.random.Philox(seed_sequence))
            traces = []
            remaining = count
            while remaining > 0:
                size = min(batch_size, remaining)
                traces.append(self._word_traces(word, spec, rng, size))
                remaining -= size
            return np.concatenate(traces)

        processor = async_processor.with_workers(threads or self.threads)
        values = np.concatenate(processor.batch_process(run_chain, list(zip(seeds, counts))))
        mean = complex(values.mean())
        if samples > 1:
            stderr = (float(values.real.std(ddof=1) / np.sqrt(samples)),
                      float(values.imag.std(ddof=1) / np.sqrt(samples)))
        else:
            stderr = (0.0, 0.0)
        logger.info(f"{word} 於 {spec}: 平均 {mean.real:.5f}{mean.imag:+.5f}i ({samples} 個樣本)")
        return TraceEstimate(mean, stderr, samples, seed, chains)

    def observed_decay(self, word: Word, family: GroupFamily, dimensions: Sequence[int],
                       samples: int = None, seed: int = None) -> DecayReport:
        """
        多個 N 下的估計與 log|tr| 對 log N 的斜率
        """
        points = tuple(DecayPoint(n, self.estimate_trace(word, GroupSpec(family, n), samples, seed))
                       for n in dimensions)
        magnitudes = [abs(p.estimate.mean) for p in points]

        pairwise: List[Optional[float]] = []
        for left, right in zip(range(len(points)), range(1, len(points))):
            if magnitudes[left] > 0 and magnitudes[right] > 0:
                pairwise.append(float((np.log(magnitudes[right]) - np.log(magnitudes[left]))
                                      / (np.log(points[right].dimension) - np.log(points[left].dimension))))
            else:
                pairwise.append(None)

        usable = [(p.dimension, m) for p, m in zip(points, magnitudes) if m > 0]
        fitted = None
        if len(usable) >= 2:
            xs = np.log([d for d, _ in usable])
            ys = np.log([m for _, m in usable])
            fitted = float(np.polyfit(xs, ys, 1)[0])
        return DecayReport(points, tuple(pairwise), fitted)

    # ---------- 窮舉驗證 ----------

    def _check_evaluations(self, total: int, max_evaluations: Optional[int]):
        cap = max_evaluations or self.max_evaluations
        if total > cap:
            raise ResourceCapError(f"窮舉需要 {total} 次求值，超過上限 {cap}（可用 WORDMEASURE_MAX_EVALUATIONS 調整）")

    def _over_tuples(self, rank: int, dimension: int, func, threads: int = None) -> List:
        """
        對所有置換組 (σ₁,…,σ_r) 求 func，依第一個置換分片並行，依序合併
        """
        perms = list(itertools.permutations(range(dimension)))
        inverses = {perm: _inverse(perm) for perm in perms}

        def run_outer(first):
            results = []
            for rest in itertools.product(perms, repeat=rank - 1):
                chosen = (first,) + rest
                results.append(func(chosen, tuple(inverses[p] for p in chosen)))
            return results

        processor = async_processor.with_workers(threads or self.threads)
        return [value for shard in processor.batch_process(run_outer, perms) for value in shard]

    def exhaustive_trace(self, word: Word, m: int, dimension: int, max_evaluations: int = None,
                         threads: int = None) -> Fraction:
        """
        C_m≀S_N 上 tr w 的精確平均（m=1 即 S_N 上的期望不動點數）

        相位在每個單項式上解析積分：所有相位變數的有號次數 ≡ 0 (mod m) 時平均為 1，否則為 0

        Args:
            word (Word): 字詞
            m (int): 有限模數 ≥ 1
            dimension (int): N
            threads (int): 執行緒數，不影響結果

        Returns:
            Fraction: 精確平均
        """
        if m < 1:
            raise InputError(f"窮舉只支援有限模數 m ≥ 1: {m}")
        if dimension < 1:
            raise InputError(f"維度必須 ≥ 1: {dimension}")
        rank = word.ambient_rank
        self._check_evaluations((m ** dimension * math.factorial(dimension)) ** rank, max_evaluations)
        if word.is_empty:
            return Fraction(dimension)

        def closed_monomials(perms, inverses):
            total = 0
            for start in range(dimension):
                multiplicity: Dict[Tuple[int, int], int] = {}
                if _walk(word.letters, perms, inverses, start, multiplicity) != start:
                    continue
                if all(count % m == 0 for count in multiplicity.values()):
                    total += 1
            return total

        values = self._over_tuples(rank, dimension, closed_monomials, threads)
        return Fraction(sum(values), len(values))

    def exhaustive_word_distribution(self, word: Word, dimension: int,
                                     max_evaluations: int = None, threads: int = None) -> Dict[Tuple[int, ...], Fraction]:
        """
        w(σ⃗) 在 S_N^r 上的完整分佈，以像置換為鍵
        """
        rank = word.ambient_rank
        self._check_evaluations(math.factorial(dimension) ** rank, max_evaluations)

        def image(perms, inverses):
            return tuple(_walk(word.letters, perms, inverses, start) for start in range(dimension))

        counts = Counter(self._over_tuples(rank, dimension, image, threads))
        total = sum(counts.values())
        return {perm: Fraction(count, total) for perm, count in sorted(counts.items())}

    def exhaustive_fixed_points_subgroup(self, generators: Sequence[Word], dimension: int,
                                         max_evaluations: int = None, threads: int = None) -> Fraction:
        """
        Hom(F_r, S_N) 上子群所有元素共同不動點數的精確平均
        """
        rank = max(g.ambient_rank for g in generators)
        self._check_evaluations(math.factorial(dimension) ** rank, max_evaluations)

        def common_fixed(perms, inverses):
            return sum(
                1 for start in range(dimension)
                if all(_walk(g.letters, perms, inverses, start) == start for g in generators)
            )

        values = self._over_tuples(rank, dimension, common_fixed, threads)
        return Fraction(sum(values), len(values))

    def s3_character_expectation(self, word: Word, irrep: S3Irrep, threads: int = None) -> Fraction:
        """
        以 S₃ 特徵標表窮舉 ψ(w(g⃗)) 的精確平均
        """
        if word.ambient_rank > 6:
            raise InputError(f"S₃ 窮舉最多支援 6 個生成元: {word.ambient_rank}")
        values = _S3_CHARACTER_TABLE[irrep]

        def character(perms, inverses):
            fixed = sum(1 for start in range(3) if _walk(word.letters, perms, inverses, start) == start)
            return values[_S3_CLASS_BY_FIXED_POINTS[fixed]]

        results = self._over_tuples(word.ambient_rank, 3, character, threads)
        return Fraction(sum(results), len(results))


# 全域取樣服務實例
sampler_service = SamplerService()
