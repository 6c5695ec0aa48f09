"""
大範圍掃描：組合與解析結果一致、窮舉與公式一致、模數穩定、蒙地卡羅佐證
執行時間較長，以 slow 標記
"""
import pytest

from Service.FringeService import fringe_service
from Service.MeasureService import measure_service
from Service.RationalFunctionService import ratfun_service
from Service.SamplerService import GroupFamily, GroupSpec, sampler_service
from Service.WordMeasureErrors import EvaluationRangeError
from Service.WordService import INFINITY, Modulus, word_service

pytestmark = pytest.mark.slow

MODULI = [Modulus(2), Modulus(3), INFINITY]


def words_up_to(length, cyclically_reduced=False):
    for size in range(1, length + 1):
        yield from word_service.reduced_words(2, size, cyclically_reduced)


@pytest.mark.parametrize("modulus", MODULI, ids=str)
def test_minimal_rank_matches_leading_term(modulus):
    mismatches = []
    for word in words_up_to(8, cyclically_reduced=True):
        elements = fringe_service.q_m(word, modulus)
        trace = measure_service.trace_rational(word, modulus)
        if not elements:
            if not trace.is_zero:
                mismatches.append(str(word))
            continue
        minimal_rank = min(e.rank for e in elements)
        count = sum(1 for e in elements if e.rank == minimal_rank)
        if ratfun_service.laurent_prefix(trace, 1).leading != (1 - minimal_rank, count):
            mismatches.append(str(word))
    assert mismatches == []



@pytest.mark.parametrize("modulus", MODULI, ids=str)
def test_chi_report_second_order_invariants(modulus):
    violations = []
    for word in words_up_to(8, cyclically_reduced=True):
        report = measure_service.chi_report(word, modulus)
        if report.chi is None:
            continue
        pure = report.trace.is_power_of_n(report.chi)
        if report.unique_ae_flag != pure:
            violations.append(f"{word}: unique_ae")
        elif not pure and report.c2 < 1:
            violations.append(f"{word}: c2={report.c2}")
        elif report.leading_coefficient == 1 and not pure and report.chi2 >= report.chi:
            violations.append(f"{word}: chi2={report.chi2}")
    assert violations == []

@pytest.mark.parametrize("m", [2, 3])
def test_exhaustive_oracle_matches_formula(m):
    mismatches = []
    for word in words_up_to(5):
        trace = measure_service.trace_rational(word, Modulus(m))
        for dimension in (1, 2, 3):
            try:
                expected = trace.evaluate_at(dimension)
            except EvaluationRangeError:
                continue
            if sampler_service.exhaustive_trace(word, m, dimension) != expected:
                mismatches.append((str(word), dimension))
    assert mismatches == []


def test_large_modulus_stabilizes():
    for word in words_up_to(6):
        stable = Modulus(len(word) + 1)
        assert measure_service.trace_rational(word, stable) == measure_service.trace_rational(word, INFINITY), str(word)


@pytest.mark.parametrize("text,group,target", [
    ("xyXY", "u:10", 0.1),
    ("xx", "u:8", 0.0),
    ("xx", "o:8", 1.0),
    ("xxyyyxxY", "wreath:2:5", 0.55),
    ("xxyy", "o:10", 0.1),
])
def test_monte_carlo_corroborates_exact_values(text, group, target):
    word = word_service.parse_word(text)
    estimate = sampler_service.estimate_trace(word, GroupSpec.parse(group), samples=100000, seed=12345)
    assert estimate.within(target, 4.0)


def test_genus_two_decay_is_reported():
    report = sampler_service.observed_decay(word_service.surface_word(2), GroupFamily.UNITARY,
                                            [4, 8, 16, 32], samples=2000, seed=12345)
    assert len(report.points) == 4
    assert len(report.pairwise_slopes) == 3
