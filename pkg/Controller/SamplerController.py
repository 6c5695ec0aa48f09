import logging

from Controller.CommandArguments import add_word_arguments, parse_word_argument, split_list, word_input
from Service.CommandErrorHandler import CommandErrorHandler
from Service.MeasureService import measure_service
from Service.PerformanceMonitor import performance_monitor
from Service.SamplerService import GroupFamily, GroupSpec, S3Irrep, sampler_service
from Service.WordMeasureErrors import InputError
from Service.WordService import INFINITY, Modulus
from config import get_config

error_handler = CommandErrorHandler(__name__)

# 設置日誌記錄
logger = logging.getLogger(__name__)


def _exact_target(word, spec: GroupSpec, threads):
    """置換型群族在 N ≥ n_min 時有精確的公式值"""
    if spec.family is GroupFamily.SYM:
        modulus = Modulus(1)
    elif spec.family is GroupFamily.WREATH:
        modulus = Modulus(spec.m)
    elif spec.family is GroupFamily.CIRCLE:
        modulus = INFINITY
    else:
        return None
    trace = measure_service.trace_rational(word, modulus, threads)
    if spec.dimension < trace.n_min:
        return None
    return trace.evaluate_at(spec.dimension)


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("sample")
def handle_sample(args):
    """蒙地卡羅跡估計"""
    word = parse_word_argument(args)
    spec = GroupSpec.parse(args.group)
    defaults = get_config().get('monte_carlo', {})
    band = args.band or defaults.get('band', 4.0)

    estimate = sampler_service.estimate_trace(word, spec, args.samples, args.seed, args.chains,
                                              args.batch_size, args.threads)
    result = estimate.to_payload()
    target = _exact_target(word, spec, args.threads)
    if target is not None:
        result["exact_target"] = str(target)
        result["within_band"] = estimate.within(float(target), band)
    return {
        "input": word_input(args, word),
        "parameters": {"group": str(spec), "band": band},
        "result": result,
    }


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("oracle")
def handle_oracle(args):
    """小群窮舉：C_m≀S_N 上的精確平均跡，並與公式比較"""
    word = parse_word_argument(args)
    modulus = Modulus.parse(args.m)
    if modulus.is_infinite:
        raise InputError("窮舉只支援有限模數")

    exact = sampler_service.exhaustive_trace(word, modulus.value, args.dim, threads=args.threads)
    trace = measure_service.trace_rational(word, modulus, args.threads)
    result = {"exhaustive": str(exact)}
    if args.dim >= trace.n_min:
        formula = trace.evaluate_at(args.dim)
        result["formula"] = str(formula)
        result["agrees"] = formula == exact
    else:
        result["formula"] = None
        result["note"] = f"N={args.dim} below n_min={trace.n_min}"

    if args.distribution:
        distribution = sampler_service.exhaustive_word_distribution(word, args.dim, threads=args.threads)
        result["distribution"] = {
            ' '.join(str(point + 1) for point in perm): str(probability)
            for perm, probability in distribution.items()
        }
    if args.irrep is not None:
        irrep = S3Irrep(args.irrep)
        result["s3_character"] = {
            "irrep": irrep.value,
            "expectation": str(sampler_service.s3_character_expectation(word, irrep, args.threads)),
        }
    return {
        "input": word_input(args, word),
        "parameters": {"m": str(modulus), "dim": args.dim},
        "result": result,
    }


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("decay")
def handle_decay(args):
    """多個 N 的 log-log 斜率報告（不做判定）"""
    word = parse_word_argument(args)
    family = GroupFamily(args.family)
    if family not in (GroupFamily.UNITARY, GroupFamily.ORTHOGONAL):
        raise InputError(f"decay 只支援 u 或 o: {args.family}")
    dimensions = [int(d) for d in split_list(args.dims)]
    report = sampler_service.observed_decay(word, family, dimensions, args.samples, args.seed)
    return {
        "input": word_input(args, word),
        "parameters": {"family": family.value, "dims": dimensions},
        "result": report.to_payload(),
    }


def register(subparsers, common):
    sample_parser = subparsers.add_parser('sample', parents=[common], help='蒙地卡羅跡估計')
    add_word_arguments(sample_parser)
    sample_parser.add_argument('--group', required=True, help='sym:N、wreath:M:N、circle:N、u:N、o:N')
    sample_parser.add_argument('--samples', type=int, default=None)
    sample_parser.add_argument('--seed', type=int, default=None)
    sample_parser.add_argument('--chains', type=int, default=None)
    sample_parser.add_argument('--batch-size', type=int, default=None)
    sample_parser.add_argument('--band', type=float, default=None)
    sample_parser.set_defaults(handler=handle_sample)

    oracle_parser = subparsers.add_parser('oracle', parents=[common], help='小群窮舉驗證')
    add_word_arguments(oracle_parser)
    oracle_parser.add_argument('--m', required=True, help='有限模數 m ≥ 1')
    oracle_parser.add_argument('--dim', type=int, required=True, help='N')
    oracle_parser.add_argument('--distribution', action='store_true', help='輸出 S_N 上 w(σ⃗) 的完整分佈')
    oracle_parser.add_argument('--irrep', choices=[i.value for i in S3Irrep], default=None,
                               help='S₃ 不可約特徵標的期望值')
    oracle_parser.set_defaults(handler=handle_oracle)

    decay_parser = subparsers.add_parser('decay', parents=[common], help='U(N)/O(N) 上的衰減斜率')
    add_word_arguments(decay_parser)
    decay_parser.add_argument('--family', choices=['u', 'o'], default='u')
    decay_parser.add_argument('--dims', default='4,8,16,32')
    decay_parser.add_argument('--samples', type=int, default=None)
    decay_parser.add_argument('--seed', type=int, default=None)
    decay_parser.set_defaults(handler=handle_decay)
