"""
字詞測度計算的例外類別
每個例外類別帶有對應的命令列結束代碼
"""


class WordMeasureError(Exception):
    """所有計算錯誤的基底類別"""
    exit_code = 1


class InputError(WordMeasureError):
    """輸入不合法（字詞、參數、前置條件）"""
    exit_code = 2


class WordParseError(InputError):
    """字詞文字無法解析"""


class EvaluationRangeError(InputError):
    """在 n_min 以下求值有理函數"""


class NotMemberError(InputError):
    """字詞不屬於核心圖所代表的子群"""


class ResourceCapError(WordMeasureError):
    """超過設定的資源上限（字詞長度、窮舉次數）"""
    exit_code = 3


class InternalConsistencyError(WordMeasureError):
    """組合計算與解析計算結果不一致"""
    exit_code = 1
