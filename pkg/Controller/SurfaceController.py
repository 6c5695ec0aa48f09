import logging

from Controller.CommandArguments import add_word_arguments, parse_word_argument, word_input
from Service.CommandErrorHandler import CommandErrorHandler
from Service.MeasureService import MonteCarloOptions, Orientation, measure_service
from Service.PerformanceMonitor import performance_monitor
from config import get_config

error_handler = CommandErrorHandler(__name__)

# 設置日誌記錄
logger = logging.getLogger(__name__)


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("surface-test")
def handle_surface_test(args):
    """曲面字詞必要條件檢驗"""
    word = parse_word_argument(args)
    orientation = None
    if args.nonorientable:
        orientation = Orientation.NONORIENTABLE
    elif args.orientable:
        orientation = Orientation.ORIENTABLE

    defaults = get_config().get('monte_carlo', {})
    options = None
    parameters = {"finite_m": args.finite_m, "type_from_gluing": args.genus is None and orientation is None}
    if args.mc:
        options = MonteCarloOptions(
            dimension=args.dim or defaults.get('dimension', 10),
            samples=args.samples or defaults.get('samples', 100000),
            seed=args.seed if args.seed is not None else defaults.get('seed', 12345),
            band=args.band or defaults.get('band', 4.0),
            chains=args.chains or defaults.get('chains', 1),
        )
        parameters["monte_carlo"] = {
            "dim": options.dimension,
            "samples": options.samples,
            "seed": options.seed,
            "band": options.band,
            "chains": options.chains,
        }

    verdict = measure_service.surface_test(word, args.genus, orientation, options, args.finite_m, args.threads)
    parameters.update(genus=verdict.genus, orientation=verdict.orientation.value)
    return {
        "input": word_input(args, word),
        "parameters": parameters,
        "result": verdict.to_payload(),
    }


def register(subparsers, common):
    surface_parser = subparsers.add_parser('surface-test', parents=[common], help='曲面字詞必要條件檢驗')
    add_word_arguments(surface_parser)
    surface_parser.add_argument('--genus', type=int, default=None, help='genus g ≥ 1；與定向同時省略時由多邊形黏合判定')
    orientation = surface_parser.add_mutually_exclusive_group()
    orientation.add_argument('--orientable', action='store_true')
    orientation.add_argument('--nonorientable', action='store_true')
    surface_parser.add_argument('--finite-m', action='store_true', help='以 C_m≀S_N（m = |w|+1）取代 S¹≀S_N')
    surface_parser.add_argument('--mc', action='store_true', help='加入 U(N)/O(N) 蒙地卡羅子檢驗')
    surface_parser.add_argument('--dim', type=int, default=None)
    surface_parser.add_argument('--samples', type=int, default=None)
    surface_parser.add_argument('--seed', type=int, default=None)
    surface_parser.add_argument('--band', type=float, default=None, help='容許的標準誤倍數')
    surface_parser.add_argument('--chains', type=int, default=None)
    surface_parser.set_defaults(handler=handle_surface_test)
