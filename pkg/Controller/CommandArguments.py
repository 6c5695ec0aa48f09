"""
子命令共用的參數定義與輸入回顯
"""
import argparse
from typing import Any, Dict, List

from Service.WordService import Word, word_service


def add_word_arguments(parser: argparse.ArgumentParser):
    """--word 與 --rank"""
    parser.add_argument('--word', required=True, help='字詞，例如 xxyyyxxY 或 x1x1X2')
    parser.add_argument('--rank', type=int, default=None, help='ambient rank r（預設為出現的最大生成元編號）')


def parse_word_argument(args) -> Word:
    return word_service.parse_word(args.word, args.rank)


def word_input(args, word: Word) -> Dict[str, Any]:
    """輸入回顯：原始文字、正規化字詞與 r"""
    return {
        "word": args.word,
        "normalized": str(word),
        "ambient_rank": word.ambient_rank,
        "length": len(word),
    }


def split_list(text: str) -> List[str]:
    """以逗號分隔的清單"""
    return [item.strip() for item in text.split(',')]
