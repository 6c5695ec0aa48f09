# ==========================================================
# 字詞服務
# 自由群 F_r 中字詞的解析、約化、序列化與阿貝爾化
# ==========================================================

import logging
import re
import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from Service.WordMeasureErrors import InputError, WordParseError

# 設置日誌記錄
logger = logging.getLogger(__name__)

# (生成元編號 1..r, 正負號 ±1)
Letter = Tuple[int, int]

_NUMBERED_TOKEN = re.compile(r'([xX])(\d+)')
_SHORT_ALPHABET = 'xyz'
_LONG_ALPHABET = 'abcdefghijklmnopqrstuvwxyz'


def free_reduce(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    """以堆疊消去相鄰的 x x⁻¹，結果即為約化不動點"""
    stack: List[Letter] = []
    for index, sign in letters:
        if stack and stack[-1] == (index, -sign):
            stack.pop()
        else:
            stack.append((index, sign))
    return tuple(stack)


@dataclass(frozen=True)
class Modulus:
    """
    模數 m ∈ Z≥1 ∪ {∞}
    m=1 為對稱群情形，value=None 代表 ∞（S¹≀S_N 與交換子核）
    """
    value: Optional[int] = None

    def __post_init__(self):
        if self.value is not None and self.value < 1:
            raise InputError(f"模數必須為正整數或 inf: {self.value}")

    @classmethod
    def parse(cls, text) -> "Modulus":
        if isinstance(text, Modulus):
            return text
        token = str(text).strip().lower()
        if token in ('inf', 'infinity', '∞'):
            return INFINITY
        try:
            return cls(int(token))
        except ValueError:
            raise InputError(f"無法解析模數: {text}")

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def annihilates(self, count: int) -> bool:
        """count ≡ 0 (mod m)；m=∞ 時要求 count = 0"""
        if self.value is None:
            return count == 0
        return count % self.value == 0

    def __str__(self) -> str:
        return 'inf' if self.value is None else str(self.value)


INFINITY = Modulus(None)


@dataclass(frozen=True)
class Word:
    """
    F_r 中的約化字詞

    letters 中每個字母為 (生成元編號, 正負號)，ambient_rank 為 r
    """
    letters: Tuple[Letter, ...]
    ambient_rank: int

    def __post_init__(self):
        object.__setattr__(self, 'letters', tuple(tuple(letter) for letter in self.letters))
        if self.ambient_rank < 1:
            raise InputError(f"ambient_rank 必須 ≥ 1: {self.ambient_rank}")
        for index, sign in self.letters:
            if sign not in (1, -1):
                raise InputError(f"字母正負號不合法: {sign}")
            if not 1 <= index <= self.ambient_rank:
                raise InputError(f"生成元編號 {index} 超出 ambient_rank {self.ambient_rank}")
        if free_reduce(self.letters) != self.letters:
            raise InputError("字詞未約化")

    @classmethod
    def from_letters(cls, letters: Sequence[Letter], ambient_rank: Optional[int] = None) -> "Word":
        """由任意字母序列建立約化字詞"""
        reduced = free_reduce(letters)
        if ambient_rank is None:
            ambient_rank = max((index for index, _ in letters), default=1)
        return cls(reduced, ambient_rank)

    @classmethod
    def identity(cls, ambient_rank: int = 1) -> "Word":
        return cls((), ambient_rank)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_empty(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return Word(tuple((index, -sign) for index, sign in reversed(self.letters)), self.ambient_rank)

    def __mul__(self, other: "Word") -> "Word":
        return Word.from_letters(self.letters + other.letters, max(self.ambient_rank, other.ambient_rank))

    def rotate(self, shift: int) -> "Word":
        """循環移位（呼叫端須保證字詞已循環約化）"""
        if not self.letters:
            return self
        shift %= len(self.letters)
        return Word(self.letters[shift:] + self.letters[:shift], self.ambient_rank)

    def __str__(self) -> str:
        return word_service.serialize(self)


class WordService:
    """
    字詞服務類別
    負責解析、序列化、循環約化與阿貝爾化
    """

    def parse_word(self, text: str, ambient_rank: Optional[int] = None) -> Word:
        """
        解析字詞文字並自由約化

        單字母形式：小寫為生成元、大寫為反元素；只用到 x、y、z 時對應 1..3，否則 a..z 對應 1..26
        編號形式：x3、X3；兩種形式不可混用

        Args:
            text (str): 字詞文字，空字串或 "1" 代表單位元
            ambient_rank (int, optional): r，預設為出現的最大生成元編號

        Returns:
            Word: 約化後的字詞
        """
        return self.parse_words([text], ambient_rank)[0]

    def parse_words(self, texts: Sequence[str], ambient_rank: Optional[int] = None) -> List[Word]:
        """
        解析多個字詞（如子群生成元），單字母形式在所有字詞間共用同一套字母對應
        """
        cleaned = [re.sub(r'[\s*.·]', '', text or '') for text in texts]
        cleaned = ['' if text == '1' else text for text in cleaned]

        numbered = [any(ch.isdigit() for ch in text) for text in cleaned]
        if any(numbered) and not all(numbered[i] or cleaned[i] == '' for i in range(len(cleaned))):
            raise WordParseError("單字母形式與編號形式不可混用")

        if any(numbered):
            parsed = [self._parse_numbered(text) for text in cleaned]
        else:
            used = {ch.lower() for text in cleaned for ch in text}
            for ch in sorted(used):
                if ch not in _LONG_ALPHABET:
                    raise WordParseError(f"未知的字元: {ch!r}")
            # 只用到 x、y、z 時對應 1..3，否則 a..z 對應 1..26
            alphabet = _SHORT_ALPHABET if used <= set(_SHORT_ALPHABET) else _LONG_ALPHABET
            mapping = {ch: position + 1 for position, ch in enumerate(alphabet)}
            parsed = [
                [(mapping[ch.lower()], 1 if ch.islower() else -1) for ch in text]
                for text in cleaned
            ]

        largest = max((index for letters in parsed for index, _ in letters), default=1)
        if ambient_rank is None:
            ambient_rank = largest
        elif ambient_rank < 1:
            raise InputError(f"ambient_rank 必須 ≥ 1: {ambient_rank}")
        elif largest > ambient_rank:
            raise WordParseError(f"生成元編號 {largest} 超出 ambient_rank {ambient_rank}")

        return [Word(free_reduce(letters), ambient_rank) for letters in parsed]

    def _parse_numbered(self, text: str) -> List[Letter]:
        letters: List[Letter] = []
        position = 0
        for match in _NUMBERED_TOKEN.finditer(text):
            if match.start() != position:
                raise WordParseError(f"無法解析的片段: {text[position:match.start()]!r}")
            index = int(match.group(2))
            if index < 1:
                raise WordParseError(f"編號生成元必須 ≥ 1: {match.group(0)}")
            letters.append((index, 1 if match.group(1) == 'x' else -1))
            position = match.end()
        if position != len(text):
            raise WordParseError(f"無法解析的片段: {text[position:]!r}")
        return letters

    def serialize(self, word: Word) -> str:
        """
        序列化字詞；生成元都在 1..3 時用 xyz，否則用 a..z
        r > 26 或生成元都在 24..26（a..z 形式會被讀回 1..3）時輸出編號形式
        """
        if word.is_empty:
            return '1'
        indices = {index for index, _ in word.letters}
        if word.ambient_rank > 26 or min(indices) > len(_LONG_ALPHABET) - len(_SHORT_ALPHABET):
            return ''.join(f"{'x' if sign > 0 else 'X'}{index}" for index, sign in word.letters)
        largest = max(indices)
        alphabet = _SHORT_ALPHABET if largest <= len(_SHORT_ALPHABET) else _LONG_ALPHABET
        return ''.join(
            alphabet[index - 1] if sign > 0 else alphabet[index - 1].upper()
            for index, sign in word.letters
        )

    def cyclic_reduce(self, word: Word) -> Tuple[Word, Word]:
        """
        循環約化

        Returns:
            tuple: (w', u)，滿足 w = u w' u⁻¹
        """
        letters = word.letters
        start, end = 0, len(letters) - 1
        while start < end and letters[start] == (letters[end][0], -letters[end][1]):
            start += 1
            end -= 1
        core = Word(letters[start:end + 1], word.ambient_rank)
        conjugator = Word(letters[:start], word.ambient_rank)
        return core, conjugator

    def is_cyclically_reduced(self, word: Word) -> bool:
        letters = word.letters
        return len(letters) < 2 or letters[0] != (letters[-1][0], -letters[-1][1])

    def exponent_vector(self, word: Word) -> Tuple[int, ...]:
        """w 在 Z^r 中的像"""
        vector = [0] * word.ambient_rank
        for index, sign in word.letters:
            vector[index - 1] += sign
        return tuple(vector)

    def ambient_km_member(self, word: Word, modulus: Modulus) -> bool:
        """w ∈ K_m(F_r)：每個分量 ≡ 0 (mod m)"""
        return all(modulus.annihilates(component) for component in self.exponent_vector(word))

    def letter_counts(self, word: Word) -> Tuple[int, ...]:
        """各生成元出現次數（不計正負號）"""
        counts = [0] * word.ambient_rank
        for index, _ in word.letters:
            counts[index - 1] += 1
        return tuple(counts)

    def surface_word(self, genus: int, orientable: bool = True) -> Word:
        """
        曲面字詞：[x₁,y₁]⋯[x_g,y_g] 或 x₁²⋯x_g²
        """
        if genus < 1:
            raise InputError(f"genus 必須 ≥ 1: {genus}")
        letters: List[Letter] = []
        if orientable:
            for k in range(genus):
                x, y = 2 * k + 1, 2 * k + 2
                letters += [(x, 1), (y, 1), (x, -1), (y, -1)]
            return Word(tuple(letters), 2 * genus)
        for k in range(genus):
            letters += [(k + 1, 1), (k + 1, 1)]
        return Word(tuple(letters), genus)

    def reduced_words(self, ambient_rank: int, length: int, cyclically_reduced: bool = False) -> Iterator[Word]:
        """
        依字典序列舉長度恰為 length 的約化字詞
        """
        alphabet = [(index, sign) for index in range(1, ambient_rank + 1) for sign in (1, -1)]
        if length == 0:
            yield Word.identity(ambient_rank)
            return
        for letters in itertools.product(alphabet, repeat=length):
            if any(letters[t + 1] == (letters[t][0], -letters[t][1]) for t in range(length - 1)):
                continue
            word = Word(letters, ambient_rank)
            if cyclically_reduced and not self.is_cyclically_reduced(word):
                continue
            yield word


# 全域字詞服務實例
word_service = WordService()
