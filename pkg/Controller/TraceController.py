import logging

from Controller.CommandArguments import add_word_arguments, parse_word_argument, word_input
from Service.CommandErrorHandler import CommandErrorHandler
from Service.MeasureService import measure_service
from Service.PerformanceMonitor import performance_monitor
from Service.RationalFunctionService import ratfun_service
from Service.WordService import Modulus

error_handler = CommandErrorHandler(__name__)

# 設置日誌記錄
logger = logging.getLogger(__name__)

# Laurent 展開輸出的項數
EXPANSION_DEPTH = 3


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("trace")
def handle_trace(args):
    """精確跡有理函數 tr_w(C_m≀S_N)"""
    word = parse_word_argument(args)
    modulus = Modulus.parse(args.m)
    trace = measure_service.trace_rational(word, modulus, args.threads)

    result = trace.to_payload()
    result["coarse_validity_bound"] = measure_service.coarse_validity_bound(word)
    result["expansion"] = ratfun_service.laurent_prefix(trace, EXPANSION_DEPTH).to_payload()
    return {
        "input": word_input(args, word),
        "parameters": {"m": str(modulus)},
        "result": result,
    }


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("chi")
def handle_chi(args):
    """χ_m(w)、C、見證子群與二階資料"""
    word = parse_word_argument(args)
    modulus = Modulus.parse(args.m)
    report = measure_service.chi_report(word, modulus, args.threads)
    return {
        "input": word_input(args, word),
        "parameters": {"m": str(modulus)},
        "result": report.to_payload(),
    }


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("pi")
def handle_pi(args):
    """primitivity rank π(w)"""
    word = parse_word_argument(args)
    rank = measure_service.primitivity_rank(word, args.threads)
    return {
        "input": word_input(args, word),
        "parameters": {},
        "result": rank.to_payload(),
    }


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("bounds")
def handle_bounds(args):
    """cl 與 min(sql, 2cl) 下界"""
    word = parse_word_argument(args)
    bounds = measure_service.length_bounds(word, args.threads)
    return {
        "input": word_input(args, word),
        "parameters": {},
        "result": bounds.to_payload(),
    }


def register(subparsers, common):
    trace_parser = subparsers.add_parser(
        'trace', parents=[common], help='精確跡有理函數',
        description='精確跡有理函數；分子與分母以 sympy 運算式輸出，例如 "3*N - 4" 與 "N**2 - N"',
    )
    add_word_arguments(trace_parser)
    trace_parser.add_argument('--m', required=True, help='模數：正整數或 inf（1 表示 S_N）')
    trace_parser.set_defaults(handler=handle_trace)

    chi_parser = subparsers.add_parser('chi', parents=[common], help='χ_m 與見證子群')
    add_word_arguments(chi_parser)
    chi_parser.add_argument('--m', required=True, help='模數：≥ 2 的整數或 inf')
    chi_parser.set_defaults(handler=handle_chi)

    pi_parser = subparsers.add_parser('pi', parents=[common], help='primitivity rank')
    add_word_arguments(pi_parser)
    pi_parser.set_defaults(handler=handle_pi)

    bounds_parser = subparsers.add_parser('bounds', parents=[common], help='交換子長度與平方長度下界')
    add_word_arguments(bounds_parser)
    bounds_parser.set_defaults(handler=handle_bounds)
