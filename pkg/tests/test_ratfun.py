from fractions import Fraction

import pytest

from Service.RationalFunctionService import N, RationalFunction, ratfun_service
from Service.SimpleCache import polynomial_cache
from Service.StallingsGraphService import stallings_service
from Service.WordMeasureErrors import EvaluationRangeError, InputError
from Service.WordService import word_service


@pytest.fixture
def sample():
    """(3N − 4) / (N² − N)"""
    return RationalFunction(3 * N - 4, N ** 2 - N, n_min=2)


def test_l_term_of_bouquet(power):
    bouquet = stallings_service.core_graph_of_subgroup(word_service.parse_words(["x", "y"]))
    term = ratfun_service.l_term(bouquet)
    assert term == power(-1)
    assert term.n_min == 1


def test_l_term_of_word_graph():
    graph = stallings_service.core_graph_of_word(word_service.parse_word("x1x1x2x2"))
    term = ratfun_service.l_term(graph)
    assert term == RationalFunction((N - 2) * (N - 3), N * (N - 1))
    assert term.n_min == 2


def test_l_term_pads_missing_labels(power):
    graph = stallings_service.core_graph_of_subgroup([word_service.parse_word("x")])
    assert ratfun_service.l_term(graph, ambient_rank=3) == power(0)


def test_falling_factorial():
    assert RationalFunction(ratfun_service.falling_factorial(3)) == RationalFunction(N ** 3 - 3 * N ** 2 + 2 * N)
    assert RationalFunction(ratfun_service.falling_factorial(0)) == 1


def test_falling_factorial_is_cached():
    polynomial_cache.clear()
    first = ratfun_service.falling_factorial(4)
    assert ratfun_service.falling_factorial(4) is first
    stats = polynomial_cache.get_stats()
    assert (stats["hits"], stats["misses"]) == (1, 1)
    assert stats["cache_size"] == 1


def test_normalization():
    f = RationalFunction(2 * N - 2, 2 * N ** 2 - 2 * N)
    assert f == RationalFunction(1, N)
    assert f.numerator_coefficients() == [Fraction(1)]
    assert f.denominator_coefficients() == [Fraction(1), Fraction(0)]

    g = RationalFunction(1, 2 * N)
    assert g.numerator_coefficients() == [Fraction(1, 2)]
    assert g.denominator_coefficients() == [Fraction(1), Fraction(0)]


def test_zero_function():
    zero = RationalFunction(0, N ** 2)
    assert zero.is_zero
    assert zero == RationalFunction.zero()
    assert zero.to_payload()["numerator"] == "0"
    assert zero.to_payload()["denominator"] == "1"
    assert len(ratfun_service.laurent_prefix(zero, 3)) == 0


def test_arithmetic(power):
    assert power(-1) + power(-1) == RationalFunction(2, N)
    assert power(1) * power(-1) == 1
    assert power(0) - Fraction(1, 2) == RationalFunction.constant(Fraction(1, 2))
    assert 1 - power(0) == 0
    assert -power(2) + power(2) == 0
    assert (power(-1, n_min=3) + power(0)).n_min == 3


def test_equality_ignores_n_min(power):
    assert power(-1, n_min=5) == power(-1)
    assert hash(power(-1, n_min=5)) == hash(power(-1))
    assert power(-1).is_power_of_n(-1)
    assert not power(-1).is_power_of_n(-2)


def test_sum_terms(power):
    assert ratfun_service.sum_terms([]) == 0
    assert ratfun_service.sum_terms([power(-1), power(-1), power(0)]) == RationalFunction(N + 2, N)


def test_evaluate_at(sample):
    assert sample.evaluate_at(2) == 1
    assert sample.evaluate_at(4) == Fraction(2, 3)
    with pytest.raises(EvaluationRangeError):
        sample.evaluate_at(1)


def test_evaluate_at_pole():
    with pytest.raises(EvaluationRangeError):
        RationalFunction(1, N - 3).evaluate_at(3)


def test_payload(sample):
    payload = sample.to_payload()
    assert payload["numerator"] == "3*N - 4"
    assert payload["denominator"] == "N**2 - N"
    assert payload["expression"] == "(3*N - 4) / (N**2 - N)"
    assert payload["numerator_coefficients"] == ["3", "-4"]
    assert payload["denominator_coefficients"] == ["1", "-1", "0"]
    assert payload["n_min"] == 2


def test_laurent_prefix(sample):
    prefix = ratfun_service.laurent_prefix(sample, 4)
    assert prefix.terms == ((-1, 3), (-2, -1), (-3, -1), (-4, -1))
    assert prefix.leading == (-1, 3)


def test_laurent_prefix_of_geometric_series():
    prefix = ratfun_service.laurent_prefix(RationalFunction(N, N - 1), 3)
    assert prefix.terms == ((0, 1), (-1, 1), (-2, 1))


def test_laurent_prefix_of_polynomial_terminates():
    prefix = ratfun_service.laurent_prefix(RationalFunction(N ** 2 + 1), 5)
    assert prefix.terms == ((2, 1), (0, 1))


def test_laurent_prefix_requires_positive_depth(sample):
    with pytest.raises(InputError):
        ratfun_service.laurent_prefix(sample, 0)


@pytest.mark.parametrize("value", [10, 100, 1000])
def test_laurent_truncation_error(sample, value):
    prefix = ratfun_service.laurent_prefix(sample, 2)
    partial = sum(coefficient * Fraction(value) ** exponent for exponent, coefficient in prefix.terms)
    remainder = sample.evaluate_at(value) - partial
    assert remainder == Fraction(-1, value ** 2 * (value - 1))
    assert abs(remainder) <= Fraction(2, value ** 3)


def test_partial_sum_is_float(sample):
    prefix = ratfun_service.laurent_prefix(sample, 3)
    assert prefix.partial_sum(100.0) == pytest.approx(float(sample.evaluate_at(100)), rel=1e-5)
