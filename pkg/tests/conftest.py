import pytest

from Service.RationalFunctionService import N, RationalFunction
from Service.SimpleCache import fringe_cache
from Service.WordService import word_service


@pytest.fixture
def parse():
    """把字詞文字解析成 Word"""
    def _parse(text, rank=None):
        return word_service.parse_word(text, rank)
    return _parse


@pytest.fixture
def power():
    """N^k"""
    return RationalFunction.power_of_n


@pytest.fixture
def symbol():
    return N


@pytest.fixture
def fresh_cache():
    fringe_cache.clear()
    yield fringe_cache
    fringe_cache.clear()
