import argparse
import logging
import sys

from config import get_config

# 日誌格式
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: str = None):
    """設置日誌記錄，一律輸出到標準錯誤，標準輸出只留給結果"""
    level = (level or get_config().get('logging', {}).get('level', 'WARNING')).upper()
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    root.setLevel(level)


def create_parser() -> argparse.ArgumentParser:
    """建立命令列解析器，共用參數由各子命令繼承"""
    config = get_config()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'plain'], default='json', help='輸出格式')
    common.add_argument('--threads', type=int, default=config.get('threads', 1), help='並行執行緒數（預設 1，結果確定）')
    common.add_argument('--log-level', default=None, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])

    parser = argparse.ArgumentParser(
        prog='wordmeasure',
        description='廣義對稱群上字詞測度的精確計算與統計驗證',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    # 初始化子命令設定
    from Controller import register_commands
    register_commands(subparsers, common)
    return parser


def run(argv=None) -> int:
    """
    執行一個子命令

    Returns:
        int: 0 成功、2 輸入錯誤、3 超過資源上限、1 內部錯誤
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    configure_logging(args.log_level)
    if args.threads is None or args.threads < 1:
        print(f"error: InputError: --threads 必須 ≥ 1: {args.threads}", file=sys.stderr)
        return 2

    from Service.PerformanceMonitor import performance_monitor
    from Service.ResponseEnvelopeService import response_envelope_service

    exit_code, payload = args.handler(args)
    if exit_code:
        return exit_code

    envelope = response_envelope_service.build(
        args.command,
        payload["input"],
        payload["parameters"],
        payload["result"],
        performance_monitor.last_elapsed,
    )
    response_envelope_service.emit(envelope, args.format)
    logging.getLogger(__name__).debug(f"效能統計: {performance_monitor.get_performance_stats()}")
    return 0
