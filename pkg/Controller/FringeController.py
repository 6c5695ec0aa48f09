import logging

from Controller.CommandArguments import add_word_arguments, parse_word_argument, split_list, word_input
from Service.CommandErrorHandler import CommandErrorHandler
from Service.FringeService import fringe_service
from Service.MeasureService import measure_service
from Service.PerformanceMonitor import performance_monitor
from Service.SamplerService import sampler_service
from Service.StallingsGraphService import stallings_service
from Service.WordMeasureErrors import InputError
from Service.WordService import Modulus, word_service

error_handler = CommandErrorHandler(__name__)

# 設置日誌記錄
logger = logging.getLogger(__name__)


def _describe(element, core):
    """列出單一邊緣元素：基底、走訪次數與鄰接表"""
    description = {
        "rank": element.rank,
        "vertices": element.graph.num_vertices,
        "edges_per_label": list(element.graph.label_counts()),
        "basis": [str(b) for b in stallings_service.spanning_tree_basis(element.graph)],
        "adjacency": stallings_service.to_adjacency_text(element.graph).splitlines(),
    }
    if element.profile is not None:
        description["signed_counts"] = list(element.profile.signed)
        description["unsigned_counts"] = list(element.profile.unsigned)
        description["rewrite"] = str(stallings_service.rewrite_in_basis(core, element.graph))
    return description


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("fringe")
def handle_fringe(args):
    """列舉 [⟨w⟩,∞)_X，可選擇以 --m 篩選 Q_m(w)"""
    word = parse_word_argument(args)
    core, _ = word_service.cyclic_reduce(word)
    elements = fringe_service.enumerate_fringe(core, args.threads)

    result = {"cyclic_core": str(core), "fringe_size": len(elements)}
    parameters = {"list": args.list}
    selected = elements
    if args.m is not None:
        modulus = Modulus.parse(args.m)
        selected = fringe_service.q_m(core, modulus, args.threads)
        parameters["m"] = str(modulus)
        result["q_m_size"] = len(selected)
    if args.list:
        result["elements"] = [_describe(element, core) for element in selected]
    return {
        "input": word_input(args, word),
        "parameters": parameters,
        "result": result,
    }


@error_handler.command_error_handler()
@performance_monitor.timing_decorator("subgroup-fix")
def handle_subgroup_fix(args):
    """隨機子群像的期望共同不動點數"""
    texts = split_list(args.gens)
    generators = word_service.parse_words(texts, args.rank)
    if all(g.is_empty for g in generators):
        raise InputError("子群生成元全為平凡元素")
    graph = stallings_service.core_graph_of_subgroup(generators)
    expected = measure_service.expected_fixed_points_subgroup(generators, args.threads)
    primitivity = measure_service.subgroup_primitivity_rank(generators, args.threads)

    result = expected.to_payload()
    result["subgroup_rank"] = graph.rank
    result["free_factor"] = primitivity.pi is None
    result["pi"] = primitivity.to_payload()["pi"]
    result["C"] = primitivity.coefficient
    result["fringe_size"] = len(fringe_service.enumerate_subgroup_fringe(generators, args.threads))

    parameters = {}
    if args.oracle_dim is not None:
        exact = sampler_service.exhaustive_fixed_points_subgroup(generators, args.oracle_dim, threads=args.threads)
        parameters["oracle_dim"] = args.oracle_dim
        result["oracle"] = str(exact)
        if args.oracle_dim >= expected.n_min:
            result["oracle_agrees"] = expected.evaluate_at(args.oracle_dim) == exact

    return {
        "input": {
            "gens": texts,
            "normalized": [str(g) for g in generators],
            "ambient_rank": generators[0].ambient_rank,
        },
        "parameters": parameters,
        "result": result,
    }


def register(subparsers, common):
    fringe_parser = subparsers.add_parser('fringe', parents=[common], help='列舉邊緣 [⟨w⟩,∞)_X')
    add_word_arguments(fringe_parser)
    fringe_parser.add_argument('--m', default=None, help='只保留 Q_m(w) 的元素')
    fringe_parser.add_argument('--list', action='store_true', help='列出每個子群的基底與鄰接表')
    fringe_parser.set_defaults(handler=handle_fringe)

    fix_parser = subparsers.add_parser('subgroup-fix', parents=[common], help='子群的期望共同不動點數')
    fix_parser.add_argument('--gens', required=True, help='以逗號分隔的生成元，例如 xx,y')
    fix_parser.add_argument('--rank', type=int, default=None, help='ambient rank r')
    fix_parser.add_argument('--oracle-dim', type=int, default=None, help='同時以 S_N 窮舉驗證此 N')
    fix_parser.set_defaults(handler=handle_subgroup_fix)
