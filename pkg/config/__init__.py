import json
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# 環境變數覆寫對照: (環境變數, 區段, 鍵, 型別)
_ENV_OVERRIDES = [
    ('WORDMEASURE_MAX_WORD_LENGTH', 'fringe', 'max_word_length', int),
    ('WORDMEASURE_MAX_EVALUATIONS', 'oracle', 'max_evaluations', int),
    ('WORDMEASURE_LOG_LEVEL', 'logging', 'level', str),
]

def get_config():
    """
    載入配置檔案

    Returns:
        dict: 配置檔案的內容（已套用環境變數覆寫）
    """
    config_path = Path(__file__).parent / 'config.json'
    with open(config_path, 'r', encoding='utf-8') as f:
        config = json.load(f)

    # Override resource caps with environment variables
    for env_name, section, key, cast in _ENV_OVERRIDES:
        value = os.getenv(env_name)
        if value:
            config.setdefault(section, {})[key] = cast(value)

    threads = os.getenv('WORDMEASURE_THREADS')
    if threads:
        config['threads'] = int(threads)

    return config
