import pytest

from Service.FringeService import FringeService, fringe_service
from Service.StallingsGraphService import stallings_service
from Service.WordMeasureErrors import InputError, ResourceCapError
from Service.WordService import INFINITY, Modulus, word_service


def keys(elements):
    return [element.key for element in elements]


@pytest.mark.parametrize("text,size", [
    ("x", 1),
    ("xx", 2),
    ("xxyy", 7),
])
def test_fringe_sizes(parse, text, size):
    assert len(fringe_service.enumerate_fringe(parse(text))) == size


def test_fringe_of_square_is_square_and_cyclic():
    elements = fringe_service.enumerate_fringe(word_service.parse_word("xx"))
    assert [element.graph.num_vertices for element in elements] == [1, 2]
    assert all(element.rank == 1 for element in elements)


def test_q_m_of_x2y2(parse):
    word = parse("xxyy")
    bouquet = stallings_service.canonical_key(stallings_service.core_graph_of_subgroup([parse("x", 2), parse("y", 2)]))
    assert keys(fringe_service.q_m(word, Modulus(2))) == [bouquet]
    assert fringe_service.q_m(word, Modulus(3)) == []
    assert fringe_service.q_m(word, INFINITY) == []
    assert len(fringe_service.q_m(word, Modulus(1))) == 7


def test_commutator_q_inf_contains_bouquet(parse):
    bouquet = stallings_service.canonical_key(stallings_service.core_graph_of_subgroup([parse("x", 2), parse("y", 2)]))
    assert bouquet in keys(fringe_service.q_m(parse("xyXY"), INFINITY))


@pytest.mark.parametrize("text", ["xxyy", "xyXY", "xxyyy", "xyxY"])
def test_every_element_contains_the_word(parse, text):
    word = parse(text)
    for element in fringe_service.enumerate_fringe(word):
        assert element.profile is not None
        assert element.profile.covers_every_edge
        assert stallings_service.membership_and_profile(word, element.graph) == element.profile
        assert 1 <= element.rank <= len(word)


@pytest.mark.parametrize("text", ["xxyy", "xyXY", "xxyxY"])
@pytest.mark.parametrize("m", ["2", "3", "inf"])
def test_signed_counts_match_rewrite_exponents(parse, text, m):
    word = parse(text)
    modulus = Modulus.parse(m)
    for element in fringe_service.enumerate_fringe(word):
        rewritten = stallings_service.rewrite_in_basis(word, element.graph)
        assert element.profile.divisible_by(modulus) == word_service.ambient_km_member(rewritten, modulus)


def test_rotation_preserves_fringe_shape(parse):
    word = parse("xxyxY")
    shapes = []
    for shift in range(len(word)):
        elements = fringe_service.enumerate_fringe(word.rotate(shift))
        shapes.append(sorted((e.rank, e.graph.num_vertices, e.graph.label_counts()) for e in elements))
    assert all(shape == shapes[0] for shape in shapes)


def test_fringe_is_sorted_by_rank(parse):
    elements = fringe_service.enumerate_fringe(parse("xyXY"))
    ranks = [element.rank for element in elements]
    assert ranks == sorted(ranks)
    assert len(set(keys(elements))) == len(elements)


def test_word_length_cap(parse):
    capped = FringeService(max_word_length=4)
    with pytest.raises(ResourceCapError):
        capped.enumerate_fringe(parse("xxyyy"))
    assert len(capped.enumerate_fringe(parse("xxyy"))) == 7


def test_rejects_empty_and_unreduced_words(parse):
    with pytest.raises(InputError):
        fringe_service.enumerate_fringe(parse(""))
    with pytest.raises(InputError):
        fringe_service.enumerate_fringe(parse("xyX"))


def test_threads_do_not_change_result(parse, fresh_cache):
    word = parse("xxyyXY")
    single = keys(fringe_service.enumerate_fringe(word, threads=1))
    fresh_cache.clear()
    parallel = keys(fringe_service.enumerate_fringe(word, threads=4))
    assert single == parallel


def test_results_are_cached(parse, fresh_cache):
    word = parse("xxyy")
    first = fringe_service.enumerate_fringe(word)
    assert fringe_service.enumerate_fringe(word) is first
    assert fresh_cache.get_stats()["hits"] == 1


def test_subgroup_fringe():
    generators = word_service.parse_words(["xx", "y"])
    elements = fringe_service.enumerate_subgroup_fringe(generators)
    assert len(elements) == 2
    assert [element.rank for element in elements] == [2, 2]
    assert all(element.profile is None for element in elements)
