import sys
import json
import argparse
import logging

from compat_match import analysis, config, constants, constructions, document, experiments, solvers
from compat_match import graph as gm
from compat_match.errors import BudgetExceededError, CertificateError, CompatMatchError, NotMaximalError
from compat_match.graph import Matching
from compat_match.render import render_svg
'''

cmatch CLI for compatible matchings of noncrossing geometric graphs

'''

logger = logging.getLogger('cmatch')


class CommandFailed(Exception):
    """Carries the exit code of a command that ran but did not succeed."""
    def __init__(self, message, exit_code):
        super().__init__(message)
        self.exit_code = exit_code


def setup_logging(debug: bool):
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG if debug else logging.INFO)
    if any(handler.get_name() == 'cmatch' for handler in root_logger.handlers):
        return
    root_handler = logging.StreamHandler()
    root_handler.set_name('cmatch')
    root_handler.setFormatter(logging.Formatter('%(asctime)s: %(message)s'))
    root_logger.addHandler(root_handler)


def emit(text: str, out: str = None):
    """Print text, or write it to out once the command has succeeded."""
    if out:
        document.write_text(out, text)
        logger.info("Wrote {}".format(out))
    else:
        sys.stdout.write(text)


def format_pairs(matching: Matching) -> str:
    return json.dumps([list(pair) for pair in matching])


def cmd_generate(args) -> int:
    certificate = constructions.generate(args.family, tuple(args.params), args.seed)
    instance = document.from_certificate(certificate, args.seed if args.family.startswith('random-') else None)
    logger.info("{}{}: n={} m={} |M|={}".format(args.family, tuple(args.params), certificate.graph.n,
                                               certificate.graph.m, len(certificate.matching)))
    emit(document.dumps(instance), args.out)
    return constants.EXIT_OK


def cmd_solve(args) -> int:
    instance = document.read_document(args.file)
    graph = instance.graph
    budget = args.budget or config.default_budget()
    if args.mode == 'greedy':
        matching = solvers.greedy_maximal(graph, solvers.GreedyStrategy(args.strategy, args.seed))
        result = solvers.SolveResult(matching, len(matching), constants.STATUS_FEASIBLE, 0, 0.0)
    elif args.mode == 'min-maximal':
        result = solvers.min_maximal(graph, budget)
    elif args.mode == 'max':
        result = solvers.max_compatible(graph, budget)
    elif args.mode == 'perfect':
        result = solvers.has_perfect_compatible(graph, budget)
    else:
        matchings = solvers.enumerate_maximal(graph, budget)
        for matching in matchings:
            print(format_pairs(matching))
        low, high = solvers.extremes(matchings)
        print("maximal matchings: {} (sizes {} to {})".format(len(matchings), low, high))
        return constants.EXIT_OK
    print("objective: {}".format(result.objective))
    print("status: {}".format(result.status))
    print("matching: {}".format(format_pairs(result.matching)))
    logger.debug("{} nodes in {:.3f}s".format(result.nodes_explored, result.elapsed))
    if result.status == constants.STATUS_INFEASIBLE:
        raise CommandFailed("No compatible perfect matching exists", constants.EXIT_INFEASIBLE)
    if result.status == constants.STATUS_BUDGET:
        raise CommandFailed("Node budget {} exhausted".format(budget), constants.EXIT_BUDGET)
    if args.out:
        metadata = dict(instance.metadata)
        metadata['solve-mode'] = args.mode
        metadata['solve-status'] = result.status
        emit(document.dumps(document.InstanceDocument(graph, result.matching, metadata)), args.out)
    return constants.EXIT_OK


def analyze(instance: document.InstanceDocument) -> dict:
    graph = instance.graph
    matching = instance.matching or Matching()
    gm.require_compatible(graph, matching)
    parameters = analysis.lemma1_parameters(graph, matching)
    check = analysis.lemma1_check(graph, matching, parameters)
    bound = analysis.bound_report(graph, len(matching))
    graph_class = analysis.regularity_class(graph)
    result = {'parameters': parameters.as_dict(),
              'lemma1': {'lhs': check.lhs, 'rhs': check.rhs, 'slack': check.slack, 'holds': check.holds},
              'class': graph_class,
              'bound': {'class': bound.graph_class, 'lower-bound': bound.lower_bound,
                        'satisfied': bound.satisfied, 'slack': bound.slack}}
    if graph.general_position:
        result['chain'] = analysis.lemma1_chain(graph, matching)
    if graph_class in (constants.CLASS_POINT_SET, constants.CLASS_MATCHING) or analysis.is_two_regular(graph_class):
        result['regular'] = analysis.regular_bound_certificate(graph, matching)
    if graph_class == constants.CLASS_POLYGON and graph.n >= 4:
        result['polygon-faces'] = analysis.polygon_face_facts(graph, matching)
    return result


def cmd_analyze(args) -> int:
    result = analyze(document.read_document(args.file))
    if args.json:
        print(json.dumps(document.json_value(result), indent=2))
        return constants.EXIT_OK
    p, check, bound = result['parameters'], result['lemma1'], result['bound']
    print("i={} Δ={} σ={} ν={} r_u={} r_m={}; lhs={} rhs={} {}".format(
        p['i'], p['delta'], p['sigma'], p['nu'], p['r_u'], p['r_m'], check['lhs'], check['rhs'],
        'holds' if check['holds'] else 'violated'))
    print("class: {}".format(result['class']))
    if bound['lower-bound'] is None:
        print("lower bound: none")
    else:
        print("lower bound: {} ({}), slack {}".format(
            bound['lower-bound'], 'satisfied' if bound['satisfied'] else 'violated', bound['slack']))
    return constants.EXIT_OK


def cmd_render(args) -> int:
    instance = document.read_document(args.file)
    subdivision = None
    if args.show_subdivision:
        subdivision = analysis.build_convex_subdivision(instance.graph, instance.matching or Matching())
    emit(render_svg(instance.graph, instance.matching, subdivision), args.out)
    return constants.EXIT_OK


def cmd_experiment(args) -> int:
    summary = experiments.run_suite(args.suite, args.count, args.seed, args.workers, args.budget, args.max_n)
    emit(experiments.to_csv(summary.rows), args.out)
    line = experiments.summary_line(summary)
    if summary.violations:
        raise CommandFailed(line, constants.EXIT_VIOLATIONS)
    logger.info(line)
    return constants.EXIT_OK


class CliParser(argparse.ArgumentParser):
    """Usage errors exit with 1, leaving 2 to certificate failures."""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(constants.EXIT_USAGE, "{}: error: {}\n".format(self.prog, message))


def positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("{} is not a positive integer".format(value))
    return number


def build_parser() -> argparse.ArgumentParser:
    main_parser = CliParser(description='Compatible matchings of noncrossing geometric graphs')
    main_parser.add_argument('--debug', action='store_true', help='Turn up log level')
    main_parser.add_argument('--version', action='store_true', help='Print version and exit.')
    sub_parser = main_parser.add_subparsers(dest='command', help=None)

    generate_parser = sub_parser.add_parser('generate', help='Generate a certified instance of a family.')
    generate_parser.add_argument('family', choices=constants.FAMILIES)
    generate_parser.add_argument('params', type=int, nargs='*', help='Family parameters, n for the random families')
    generate_parser.add_argument('--seed', type=int, default=0, help='Seed for the random families')
    generate_parser.add_argument('--out', type=str, help='Write the instance document here instead of stdout')
    generate_parser.set_defaults(handler=cmd_generate)

    solve_parser = sub_parser.add_parser('solve', help='Run a solver on an instance document.')
    solve_parser.add_argument('mode', choices=constants.SOLVE_MODES)
    solve_parser.add_argument('file', type=str)
    solve_parser.add_argument('--budget', type=positive_int, help='Node budget for the exact solvers')
    solve_parser.add_argument('--strategy', choices=constants.GREEDY_ORDERINGS, default=constants.ORDER_LEXICOGRAPHIC)
    solve_parser.add_argument('--seed', type=int, default=0, help='Seed for the seeded-random greedy ordering')
    solve_parser.add_argument('--out', type=str, help='Write the document with the solution matching here')
    solve_parser.set_defaults(handler=cmd_solve)

    analyze_parser = sub_parser.add_parser('analyze', help='Evaluate the counting inequality and class bound.')
    analyze_parser.add_argument('file', type=str)
    analyze_parser.add_argument('--json', action='store_true', help='Machine-readable output')
    analyze_parser.set_defaults(handler=cmd_analyze)

    render_parser = sub_parser.add_parser('render', help='Draw an instance as SVG.')
    render_parser.add_argument('file', type=str)
    render_parser.add_argument('--out', type=str, required=True)
    render_parser.add_argument('--show-subdivision', action='store_true', help='Draw the convex subdivision in gray')
    render_parser.set_defaults(handler=cmd_render)

    experiment_parser = sub_parser.add_parser('experiment', help='Run a seeded experiment suite.')
    experiment_parser.add_argument('suite', choices=constants.SUITES)
    experiment_parser.add_argument('--count', type=int, help='Random instances in the suite')
    experiment_parser.add_argument('--seed', type=int, default=0)
    experiment_parser.add_argument('--workers', type=positive_int, help='Parallel workers')
    experiment_parser.add_argument('--budget', type=positive_int, help='Node budget per solver call')
    experiment_parser.add_argument('--max-n', type=positive_int, help='Largest random instance')
    experiment_parser.add_argument('--out', type=str, help='CSV path instead of stdout')
    experiment_parser.set_defaults(handler=cmd_experiment)
    return main_parser


_EXIT_CODES = [(CertificateError, constants.EXIT_CERTIFICATE),
               (BudgetExceededError, constants.EXIT_BUDGET),
               (NotMaximalError, constants.EXIT_NOT_MAXIMAL),
               (CompatMatchError, constants.EXIT_USAGE),
               (OSError, constants.EXIT_USAGE)]


def main(argv=None) -> int:
    main_parser = build_parser()
    args = main_parser.parse_args(argv)
    setup_logging(args.debug)
    if args.version is True:
        print("compat_match v{}".format(config.version))
        return constants.EXIT_OK
    if args.command is None:
        main_parser.print_help()
        return constants.EXIT_USAGE
    try:
        return args.handler(args)
    except CommandFailed as err:
        logger.error(str(err))
        return err.exit_code
    except tuple(error for error, _ in _EXIT_CODES) as err:
        exit_code = next(code for error, code in _EXIT_CODES if isinstance(err, error))
        logger.error("error: {}".format(err))
        return exit_code


if __name__ == '__main__':
    sys.exit(main())
