from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from Service.MeasureService import measure_service
from Service.SamplerService import GroupFamily, GroupSpec, S3Irrep, TraceEstimate, sampler_service
from Service.WordMeasureErrors import InputError, ResourceCapError
from Service.WordService import Modulus, word_service


def rng(seed=0):
    return np.random.Generator(np.random.Philox(seed))


@pytest.mark.parametrize("text,family,dimension,m", [
    ("sym:5", GroupFamily.SYM, 5, None),
    ("wreath:2:5", GroupFamily.WREATH, 5, 2),
    ("circle:3", GroupFamily.CIRCLE, 3, None),
    ("u:10", GroupFamily.UNITARY, 10, None),
    ("O:8", GroupFamily.ORTHOGONAL, 8, None),
])
def test_group_spec_parse(text, family, dimension, m):
    spec = GroupSpec.parse(text)
    assert (spec.family, spec.dimension, spec.m) == (family, dimension, m)
    assert GroupSpec.parse(str(spec)) == spec


@pytest.mark.parametrize("text", ["sym", "wreath:5", "wreath:1:5", "u:0", "gl:3", "sym:x"])
def test_group_spec_rejects(text):
    with pytest.raises(InputError):
        GroupSpec.parse(text)


def test_symmetric_group_of_degree_one():
    batch = sampler_service.haar_batch(GroupSpec(GroupFamily.SYM, 1), rng(), 50)
    assert np.all(batch == 1)


def test_wreath_of_degree_one_is_balanced():
    batch = sampler_service.haar_batch(GroupSpec(GroupFamily.WREATH, 1, 2), rng(1), 20000)
    values = np.round(batch[:, 0, 0].real).astype(int)
    assert set(values.tolist()) == {-1, 1}
    frequency = np.mean(values == 1)
    assert abs(frequency - 0.5) < 4 * np.sqrt(0.25 / 20000)


@pytest.mark.parametrize("family", [GroupFamily.SYM, GroupFamily.WREATH, GroupFamily.CIRCLE])
def test_permutation_families_are_monomial(family):
    spec = GroupSpec(family, 4, 3 if family is GroupFamily.WREATH else None)
    batch = sampler_service.haar_batch(spec, rng(2), 100)
    nonzero = np.abs(batch) > 1e-12
    assert np.all(nonzero.sum(axis=1) == 1)
    assert np.all(nonzero.sum(axis=2) == 1)
    assert np.allclose(np.abs(batch[nonzero]), 1.0)
    if family is GroupFamily.WREATH:
        assert np.allclose(batch[nonzero] ** 3, 1.0)


def test_unitary_samples_are_unitary():
    batch = sampler_service.haar_batch(GroupSpec(GroupFamily.UNITARY, 4), rng(3), 200)
    identity = np.eye(4)
    products = np.conj(np.swapaxes(batch, -1, -2)) @ batch
    assert np.max(np.abs(products - identity)) < 1e-12


def test_unitary_entry_second_moment():
    samples = 100000
    batch = sampler_service.haar_batch(GroupSpec(GroupFamily.UNITARY, 4), rng(4), samples)
    squares = np.abs(batch[:, 0, 0]) ** 2
    stderr = squares.std(ddof=1) / np.sqrt(samples)
    assert abs(squares.mean() - 0.25) < 4 * stderr


def test_orthogonal_samples_are_orthogonal():
    batch = sampler_service.haar_batch(GroupSpec(GroupFamily.ORTHOGONAL, 5), rng(5), 200)
    assert batch.dtype.kind == 'f'
    products = np.swapaxes(batch, -1, -2) @ batch
    assert np.max(np.abs(products - np.eye(5))) < 1e-12


def test_permutations_of_three_are_uniform():
    samples = 60000
    batch = sampler_service.haar_batch(GroupSpec(GroupFamily.SYM, 3), rng(6), samples)
    images = Counter(tuple(np.argmax(matrix, axis=1)) for matrix in batch)
    assert len(images) == 6
    expected = samples / 6
    chi_square = sum((count - expected) ** 2 / expected for count in images.values())
    # 5 個自由度的 0.9999 分位數約為 25.7
    assert chi_square < 25.7


def test_haar_element_shape():
    assert sampler_service.haar_element(GroupSpec(GroupFamily.UNITARY, 3), rng()).shape == (3, 3)


def test_estimate_is_reproducible(parse):
    word = parse("xyXY")
    spec = GroupSpec(GroupFamily.UNITARY, 3)
    first = sampler_service.estimate_trace(word, spec, samples=500, seed=11)
    second = sampler_service.estimate_trace(word, spec, samples=500, seed=11)
    assert first == second
    assert first.to_payload() == second.to_payload()


def test_threads_do_not_change_estimate(parse):
    word = parse("xxY")
    spec = GroupSpec(GroupFamily.ORTHOGONAL, 3)
    single = sampler_service.estimate_trace(word, spec, samples=900, seed=3, chains=3, threads=1)
    parallel = sampler_service.estimate_trace(word, spec, samples=900, seed=3, chains=3, threads=3)
    assert single == parallel
    assert single.chains == 3


def test_batch_size_does_not_change_single_chain_count(parse):
    estimate = sampler_service.estimate_trace(parse("x"), GroupSpec(GroupFamily.SYM, 4), samples=100, seed=1,
                                              batch_size=7)
    assert estimate.samples == 100


def test_empty_word_estimate_is_dimension(parse):
    estimate = sampler_service.estimate_trace(parse(""), GroupSpec(GroupFamily.UNITARY, 6), samples=10, seed=0)
    assert estimate.mean == 6
    assert estimate.stderr == (0.0, 0.0)


def test_estimate_rejects_bad_sizes(parse):
    spec = GroupSpec(GroupFamily.SYM, 3)
    with pytest.raises(InputError):
        sampler_service.estimate_trace(parse("x"), spec, samples=0, seed=0)
    with pytest.raises(InputError):
        sampler_service.estimate_trace(parse("x"), spec, samples=2, seed=0, chains=3)


def test_single_permutation_fixed_points(parse):
    estimate = sampler_service.estimate_trace(parse("x"), GroupSpec(GroupFamily.SYM, 5), samples=20000, seed=8)
    assert estimate.within(1.0, 4.0)


def test_within_band():
    estimate = TraceEstimate(complex(1.0, 0.0), (0.1, 0.0), 100, 0)
    assert estimate.within(1.3, 4.0)
    assert not estimate.within(1.5, 4.0)
    assert not estimate.within(complex(1.0, 0.01), 4.0)


@pytest.mark.parametrize("text,m,dimension,expected", [
    ("xxyy", 2, 2, Fraction(1, 2)),
    ("xyXY", 2, 2, Fraction(1, 2)),
    ("x", 2, 1, Fraction(0)),
    ("", 3, 2, Fraction(2)),
])
def test_exhaustive_trace(parse, text, m, dimension, expected):
    assert sampler_service.exhaustive_trace(parse(text), m, dimension) == expected


@pytest.mark.parametrize("dimension", [1, 2, 3, 4, 5])
def test_exhaustive_fixed_points_of_one_permutation(parse, dimension):
    assert sampler_service.exhaustive_trace(parse("x"), 1, dimension) == 1


@pytest.mark.parametrize("dimension", [2, 3, 4, 5])
def test_exhaustive_fixed_points_of_square(parse, dimension):
    assert sampler_service.exhaustive_trace(parse("xx"), 1, dimension) == 2


@pytest.mark.parametrize("text,m", [("xxyyyxxY", 2), ("xxyy", 3), ("xyXY", 2), ("xxY", 2)])
@pytest.mark.parametrize("dimension", [2, 3])
def test_exhaustive_matches_formula(parse, text, m, dimension):
    word = parse(text)
    trace = measure_service.trace_rational(word, Modulus(m))
    if dimension < trace.n_min:
        pytest.skip("below n_min")
    assert sampler_service.exhaustive_trace(word, m, dimension) == trace.evaluate_at(dimension)


def test_exhaustive_oracles_honour_thread_count(parse, monkeypatch):
    from Service.AsyncProcessor import async_processor

    requested = []
    original = async_processor.with_workers

    def recording(max_workers):
        requested.append(max_workers)
        return original(max_workers)

    monkeypatch.setattr(async_processor, "with_workers", recording)
    word = parse("xxyyyxxY")
    assert sampler_service.exhaustive_trace(word, 2, 3, threads=3) == sampler_service.exhaustive_trace(word, 2, 3)
    assert sampler_service.exhaustive_fixed_points_subgroup([parse("xx"), parse("y", 2)], 3, threads=2) == \
        sampler_service.exhaustive_fixed_points_subgroup([parse("xx"), parse("y", 2)], 3)
    assert requested[0] == 3
    assert requested[2] == 2


def test_exhaustive_cap(parse):
    with pytest.raises(ResourceCapError):
        sampler_service.exhaustive_trace(parse("xy"), 3, 4, max_evaluations=1000)
    with pytest.raises(InputError):
        sampler_service.exhaustive_trace(parse("x"), 0, 2)


@pytest.mark.parametrize("dimension", [3, 4])
def test_commutator_and_squares_induce_same_measure(parse, dimension):
    commutator = sampler_service.exhaustive_word_distribution(parse("xyXY"), dimension)
    squares = sampler_service.exhaustive_word_distribution(parse("xxyy"), dimension)
    assert commutator == squares
    assert sum(commutator.values()) == 1


def test_commutator_and_squares_separated_by_circle(parse):
    assert measure_service.trace_rational(parse("xyXY"), Modulus(3)).evaluate_at(3) == Fraction(1, 3)
    assert sampler_service.exhaustive_trace(parse("xyXY"), 3, 3) == Fraction(1, 3)
    assert sampler_service.exhaustive_trace(parse("xxyy"), 3, 3) == 0


@pytest.mark.parametrize("text,irrep,expected", [
    ("xyXY", S3Irrep.STANDARD2, Fraction(1, 2)),
    ("xx", S3Irrep.SIGN, Fraction(1)),
    ("xx", S3Irrep.TRIVIAL, Fraction(1)),
])
def test_s3_character_expectation(parse, text, irrep, expected):
    assert sampler_service.s3_character_expectation(parse(text), irrep) == expected


def test_s3_character_of_genus_two():
    word = word_service.surface_word(2)
    assert sampler_service.s3_character_expectation(word, S3Irrep.STANDARD2) == Fraction(1, 8)


def test_s3_character_rejects_large_rank(parse):
    with pytest.raises(InputError):
        sampler_service.s3_character_expectation(parse("x7"), S3Irrep.SIGN)


@pytest.mark.parametrize("dimension", [2, 3, 4])
def test_subgroup_fixed_points_oracle(dimension):
    generators = word_service.parse_words(["xx", "y"])
    expected = measure_service.expected_fixed_points_subgroup(generators).evaluate_at(dimension)
    assert sampler_service.exhaustive_fixed_points_subgroup(generators, dimension) == expected
    assert expected == Fraction(2, dimension)


def test_observed_decay_reports_slopes(parse):
    report = sampler_service.observed_decay(parse("xyXY"), GroupFamily.UNITARY, [2, 4, 8], samples=2000, seed=5)
    assert [point.dimension for point in report.points] == [2, 4, 8]
    assert len(report.pairwise_slopes) == 2
    assert report.fitted_slope is not None
    payload = report.to_payload()
    assert payload["points"][0]["dimension"] == 2
