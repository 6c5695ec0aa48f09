# ==========================================================
# 有理函數服務
# N 的單變數有理函數精確運算與 N → ∞ 的 Laurent 展開
# ==========================================================

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Tuple

import sympy as sym
from sympy import Poly, QQ

from Service.SimpleCache import polynomial_cache
from Service.StallingsGraphService import CoreGraph
from Service.WordMeasureErrors import EvaluationRangeError, InputError

# 設置日誌記錄
logger = logging.getLogger(__name__)

N = sym.Symbol('N')


def _poly(expr) -> Poly:
    return Poly(expr, N, domain=QQ)


def _to_fraction(coefficient) -> Fraction:
    rational = sym.Rational(coefficient)
    return Fraction(int(rational.p), int(rational.q))


def _horner(coefficients: List[Fraction], value: Fraction) -> Fraction:
    total = Fraction(0)
    for coefficient in coefficients:
        total = total * value + coefficient
    return total


class RationalFunction:
    """
    精確有理函數 num/den 與有效門檻 n_min

    正規化後分母為首一多項式、分子分母互質，零函數表示為 0/1
    """

    __slots__ = ('num', 'den', 'n_min')

    def __init__(self, num, den=1, n_min: int = 1):
        num = num if isinstance(num, Poly) else _poly(num)
        den = den if isinstance(den, Poly) else _poly(den)
        if den.is_zero:
            raise InputError("分母不可為零")
        if num.is_zero:
            num, den = _poly(0), _poly(1)
        else:
            divisor = num.gcd(den)
            num, den = num.exquo(divisor), den.exquo(divisor)
            num = num * _poly(1 / den.LC())
            den = den.monic()
        self.num = num
        self.den = den
        self.n_min = int(n_min)

    # ---------- 建構 ----------

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(0, 1, 1)

    @classmethod
    def constant(cls, value) -> "RationalFunction":
        return cls(sym.Rational(value), 1, 1)

    @classmethod
    def power_of_n(cls, exponent: int, n_min: int = 1) -> "RationalFunction":
        """N^k，k 可為負"""
        if exponent >= 0:
            return cls(N ** exponent, 1, n_min)
        return cls(1, N ** (-exponent), n_min)

    # ---------- 運算 ----------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den,
                                max(self.n_min, other.n_min))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.n_min)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den, max(self.n_min, other.n_min))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        # n_min 不參與比較
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((tuple(self.num.all_coeffs()), tuple(self.den.all_coeffs())))

    # ---------- 查詢 ----------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_power_of_n(self, exponent: int) -> bool:
        """是否恰為 N^k"""
        return self == RationalFunction.power_of_n(exponent)

    def numerator_coefficients(self) -> List[Fraction]:
        """由高次到低次"""
        return [_to_fraction(c) for c in self.num.all_coeffs()]

    def denominator_coefficients(self) -> List[Fraction]:
        return [_to_fraction(c) for c in self.den.all_coeffs()]

    def evaluate_at(self, value: int) -> Fraction:
        """
        在整數 N 求精確值

        Raises:
            EvaluationRangeError: N < n_min 或分母為零
        """
        if value < self.n_min:
            raise EvaluationRangeError(f"N={value} 小於有效門檻 n_min={self.n_min}")
        point = Fraction(value)
        denominator = _horner(self.denominator_coefficients(), point)
        if denominator == 0:
            raise EvaluationRangeError(f"分母在 N={value} 為零")
        return _horner(self.numerator_coefficients(), point) / denominator

    def numerator_text(self) -> str:
        return str(self.num.as_expr())

    def denominator_text(self) -> str:
        return str(self.den.as_expr())

    def __str__(self) -> str:
        if self.den.degree() == 0:
            return self.numerator_text()
        return f"({self.numerator_text()}) / ({self.denominator_text()})"

    def __repr__(self) -> str:
        return f"RationalFunction({self}, n_min={self.n_min})"

    def to_payload(self) -> Dict:
        """JSON 輸出：精確係數一律以字串表示"""
        return {
            "numerator": self.numerator_text(),
            "denominator": self.denominator_text(),
            "expression": f"({self.numerator_text()}) / ({self.denominator_text()})",
            "numerator_coefficients": [str(c) for c in self.numerator_coefficients()],
            "denominator_coefficients": [str(c) for c in self.denominator_coefficients()],
            "n_min": self.n_min,
        }


@dataclass(frozen=True)
class LaurentPrefix:
    """N → ∞ 展開的前幾項：(指數, 係數)，指數嚴格遞減且係數非零"""
    terms: Tuple[Tuple[int, Fraction], ...]

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, position: int) -> Tuple[int, Fraction]:
        return self.terms[position]

    @property
    def leading(self):
        return self.terms[0] if self.terms else None

    def partial_sum(self, value: float) -> float:
        return sum(float(coefficient) * value ** exponent for exponent, coefficient in self.terms)

    def to_payload(self) -> List[Dict]:
        return [{"exponent": exponent, "coefficient": str(coefficient)} for exponent, coefficient in self.terms]


class RationalFunctionService:
    """
    有理函數服務類別
    負責下降階乘項 L 與 Laurent 展開
    """

    @polynomial_cache.cache_decorator()
    def falling_factorial(self, length: int) -> Poly:
        """N(N−1)⋯(N−length+1)"""
        return reduce(lambda acc, k: acc * _poly(N - k), range(length), _poly(1))

    def l_term(self, graph: CoreGraph, ambient_rank: int = None) -> RationalFunction:
        """
        N(N−1)⋯(N−#V+1) / ∏ᵢ N(N−1)⋯(N−#Eᵢ+1)

        Args:
            graph (CoreGraph): 摺疊後的核心圖
            ambient_rank (int, optional): r，預設取核心圖的 ambient_rank

        Returns:
            RationalFunction: n_min = maxᵢ #Eᵢ
        """
        counts = list(graph.label_counts())
        if ambient_rank is not None and ambient_rank > len(counts):
            counts += [0] * (ambient_rank - len(counts))
        denominator = reduce(lambda acc, count: acc * self.falling_factorial(count), counts, _poly(1))
        return RationalFunction(self.falling_factorial(graph.num_vertices), denominator,
                                max(max(counts, default=1), 1))

    def sum_terms(self, terms: Iterable[RationalFunction]) -> RationalFunction:
        """依輸入順序加總（固定的歸約順序）"""
        return reduce(lambda acc, term: acc + term, terms, RationalFunction.zero())

    def laurent_prefix(self, function: RationalFunction, depth: int) -> LaurentPrefix:
        """
        以反轉多項式的長除法求 N → ∞ 展開的前 depth 個非零項

        Args:
            function (RationalFunction): 有理函數
            depth (int): 需要的非零項數（≥ 1）

        Returns:
            LaurentPrefix: 展開有限時可少於 depth 項；零函數回傳空串列
        """
        if depth < 1:
            raise InputError(f"depth 必須 ≥ 1: {depth}")
        if function.is_zero:
            return LaurentPrefix(())

        numerator = function.numerator_coefficients()
        denominator = function.denominator_coefficients()
        p, q = len(numerator) - 1, len(denominator) - 1
        # 分母為首一多項式，denominator[0] == 1
        series: List[Fraction] = []
        terms: List[Tuple[int, Fraction]] = []
        k = 0
        while len(terms) < depth:
            value = numerator[k] if k <= p else Fraction(0)
            for j in range(1, min(k, q) + 1):
                value -= denominator[j] * series[k - j]
            series.append(value)
            if value != 0:
                terms.append((p - q - k, value))
            if k >= p and (q == 0 or all(c == 0 for c in series[-q:])):
                break
            k += 1
        return LaurentPrefix(tuple(terms))


# 全域有理函數服務實例
ratfun_service = RationalFunctionService()
