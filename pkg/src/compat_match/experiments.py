"""
Batch experiments over seeded instance corpora.

Each suite turns a base seed and a count into a deterministic list of instances, evaluates them
(in parallel when asked) and writes one ExperimentRow per instance, in instance-id order.
"""
import logging
from dataclasses import astuple, dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm.contrib.concurrent import thread_map

from compat_match import analysis, config, constants, constructions, document, solvers
from compat_match.errors import BudgetExceededError, CompatMatchError, ParameterRangeError
from compat_match.graph import GeometricGraph, Matching

logger = logging.getLogger('compat_match.experiments')

STATUS_OK = 'ok'
VIOLATION_PREFIX = 'violation'


@dataclass(frozen=True)
class ExperimentRow:
    instance_id: int
    graph_class: str
    n: int
    m: int
    mm: Optional[int]
    d: Optional[int]
    greedy_size: int
    lower_bound: Optional[Fraction]
    lemma1_slack: Optional[int]
    status: str

    @property
    def violation(self) -> bool:
        return self.status.startswith(VIOLATION_PREFIX)


@dataclass(frozen=True)
class Instance:
    instance_id: int
    label: str
    graph: GeometricGraph
    matching: Optional[Matching] = None
    expected: Optional[Dict[str, object]] = None


@dataclass(frozen=True)
class ExperimentSummary:
    suite: str
    rows: List[ExperimentRow]

    @property
    def violations(self) -> int:
        return sum(1 for row in self.rows if row.violation)

    @property
    def budget_exceeded(self) -> int:
        return sum(1 for row in self.rows if row.status == constants.STATUS_BUDGET)


def _status(failed: List[str]) -> str:
    if not failed:
        return STATUS_OK
    return '{}: {}'.format(VIOLATION_PREFIX, ' '.join(failed))


# random corpus shared by the sweeps: one class per instance id, in rotation
_RANDOM_CLASSES = [('random-points', 1, 1), ('random-segments', 2, 2),
                   ('random-cycles', 3, 1), ('random-polygon', 4, 1)]


def _random_size(rng: np.random.Generator, low: int, step: int, max_n: int) -> int:
    high = max_n - (max_n - low) % step
    if high < low:
        raise ParameterRangeError("max_n={} is below the smallest size {}".format(max_n, low))
    return low + step * int(rng.integers(0, (high - low) // step + 1))


def random_corpus(count: int, seed: int, max_n: Optional[int] = None) -> List[Instance]:
    """count random instances, the class rotating with the id and n drawn from the id's own seed."""
    max_n = max_n or int(config.experiment_settings()['max_n'])
    corpus = []
    for instance_id in range(count):
        family, low, step = _RANDOM_CLASSES[instance_id % len(_RANDOM_CLASSES)]
        instance_seed = seed + instance_id
        n = _random_size(np.random.default_rng(instance_seed), low, step, max_n)
        certificate = constructions.generate(family, (n,), instance_seed)
        corpus.append(Instance(instance_id, family, certificate.graph))
    return corpus


def _lemma1_slack(graph: GeometricGraph, matchings: List[Matching]) -> Tuple[Optional[int], List[str]]:
    failed = []
    slack = None
    for matching in matchings:
        check = analysis.lemma1_check(graph, matching)
        slack = check.slack if slack is None else min(slack, check.slack)
        if not check.holds:
            failed.append('lemma1{}'.format(list(matching.pairs)))
    return slack, failed


def _bound_failures(graph: GeometricGraph, size: Optional[int]) -> List[str]:
    if size is None:
        return []
    report = analysis.bound_report(graph, size)
    return [] if report.satisfied else ['bound']


def _row(instance: Instance, mm, d, greedy: int, lemma1_slack, failed: List[str]) -> ExperimentRow:
    graph = instance.graph
    bound = analysis.lower_bound(graph).lower_bound
    return ExperimentRow(instance.instance_id, analysis.regularity_class(graph), graph.n, graph.m,
                         mm, d, greedy, bound, lemma1_slack, _status(failed))


def _subdivision_failures(graph: GeometricGraph, matching: Matching) -> List[str]:
    report = analysis.build_convex_subdivision(graph, matching)
    failed = ['subdivision-{}'.format(name) for name, ok in sorted(report.checks.items()) if not ok]
    if not analysis.lemma1_chain(graph, matching, report)['holds']:
        failed.append('chain')
    return failed


def _face_failures(graph: GeometricGraph, matchings: List[Matching]) -> List[str]:
    if analysis.regularity_class(graph) != constants.CLASS_POLYGON or graph.n < 4:
        return []
    failed = []
    for matching in matchings:
        facts = analysis.polygon_face_facts(graph, matching)
        failed.extend('face-{}{}'.format(name, list(matching.pairs)) for name, ok in sorted(facts.items()) if not ok)
    return failed


def evaluate_lemma1(instance: Instance, budget: int) -> ExperimentRow:
    """Every maximal matching checked against the inequality (and the face facts on polygons),
    the greedy one also subdivided."""
    graph = instance.graph
    maximal = solvers.enumerate_maximal(graph, budget)
    mm, d = solvers.extremes(maximal)
    greedy = solvers.greedy_maximal(graph)
    slack, failed = _lemma1_slack(graph, maximal)
    failed.extend(_face_failures(graph, maximal))
    if graph.general_position:
        failed.extend(_subdivision_failures(graph, greedy))
    failed.extend(_bound_failures(graph, mm))
    return _row(instance, mm, d, len(greedy), slack, failed)


def evaluate_bounds(instance: Instance, budget: int) -> ExperimentRow:
    """mm(G) against the class bound; tight instances must meet it with less than one edge to spare."""
    graph = instance.graph
    greedy = solvers.greedy_maximal(graph)
    expected = instance.expected or dict()
    d = None
    if instance.matching is not None and not expected.get('exact'):
        # too large for the exact solvers: the certified matching stands in for mm
        matching = instance.matching
    else:
        result = solvers.min_maximal(graph, budget)
        if result.status != constants.STATUS_OPTIMAL:
            raise BudgetExceededError("min-maximal stopped at {} nodes".format(result.nodes_explored),
                                      result.nodes_explored, result.matching)
        matching = result.matching
        d = solvers.max_compatible(graph, budget).objective
    mm = len(matching)
    slack, failed = _lemma1_slack(graph, [matching])
    failed.extend(_bound_failures(graph, mm))
    if expected.get('tight'):
        bound = analysis.lower_bound(graph).lower_bound
        if bound is None or mm - bound >= 1:
            failed.append('not-tight')
    failed.extend(_face_failures(graph, [matching]))
    return _row(instance, mm, d, len(greedy), slack, failed)


def evaluate_oracle(instance: Instance, budget: int) -> ExperimentRow:
    """Branch and bound answers against the extremes of the full enumeration."""
    graph = instance.graph
    maximal = solvers.enumerate_maximal(graph, budget)
    low, high = solvers.extremes(maximal)
    mm = solvers.min_maximal(graph, budget)
    d = solvers.max_compatible(graph, budget)
    perfect = solvers.has_perfect_compatible(graph, budget)
    greedy = solvers.greedy_maximal(graph)
    failed = []
    if mm.objective != low:
        failed.append('mm={}!={}'.format(mm.objective, low))
    if d.objective != high:
        failed.append('d={}!={}'.format(d.objective, high))
    expect_perfect = graph.n % 2 == 0 and high == graph.n // 2
    if (perfect.status == constants.STATUS_OPTIMAL) != expect_perfect:
        failed.append('perfect={}'.format(perfect.status))
    if not low <= len(greedy) <= high:
        failed.append('greedy')
    return _row(instance, mm.objective, d.objective, len(greedy), None, failed)


def evaluate_perfect(instance: Instance, budget: int) -> ExperimentRow:
    """Decision against enumeration; fixtures also carry the expected answer and forced pairs."""
    graph = instance.graph
    decision = solvers.has_perfect_compatible(graph, budget)
    perfect = solvers.enumerate_perfect_compatible(graph, budget)
    greedy = solvers.greedy_maximal(graph)
    failed = []
    feasible = decision.status == constants.STATUS_OPTIMAL
    if feasible != bool(perfect):
        failed.append('decision-{}-enumerated-{}'.format(decision.status, len(perfect)))
    expected = instance.expected or dict()
    if 'feasible' in expected and expected['feasible'] != feasible:
        failed.append('expected-{}'.format('feasible' if expected['feasible'] else 'infeasible'))
    for pair in expected.get('forced', ()):
        if any(tuple(pair) not in solution for solution in perfect):
            failed.append('forced{}'.format(tuple(pair)))
    d = graph.n // 2 if perfect else None
    return _row(instance, None, d, len(greedy), None, failed)


def evaluate_family(instance: Instance, budget: int) -> ExperimentRow:
    """A certified construction: its matching size against the bound, the inequality when maximal."""
    graph, matching = instance.graph, instance.matching
    greedy = solvers.greedy_maximal(graph)
    slack, failed = None, []
    if instance.expected.get('maximal'):
        slack, failed = _lemma1_slack(graph, [matching])
        failed.extend(_bound_failures(graph, len(matching)))
    return _row(instance, len(matching), None, len(greedy), slack, failed)


def bounds_corpus(count: int, seed: int, max_n: Optional[int] = None) -> List[Instance]:
    """The random corpus followed by the tight families."""
    max_n = max_n or int(config.experiment_settings()['max_n'])
    corpus = random_corpus(count, seed, max_n)
    tight = [('points-tight', (k,), True) for k in (1, 2, 3)]
    tight += [('matching-tight', (k,), True) for k in (2, 3)]
    tight += [('cycles-tight', (0,), True), ('polygon-tight', (1,), True), ('polygon-tight', (3,), True)]
    for offset, (family, params, is_tight) in enumerate(tight):
        certificate = constructions.generate(family, params, seed)
        expected = {'tight': is_tight, 'exact': certificate.graph.n <= max_n}
        corpus.append(Instance(count + offset, '{}{}'.format(family, params), certificate.graph,
                               certificate.matching, expected))
    return corpus


def perfect_corpus(count: int, seed: int, max_n: Optional[int] = None) -> List[Instance]:
    """Convex polygons (never feasible), the twin-peaks fixture, then the random corpus."""
    fixtures = []
    for n in (4, 6, 8, 10, 12):
        certificate = constructions.generate('convex-polygon', (n,))
        fixtures.append(('convex-polygon({},)'.format(n), certificate.graph, {'feasible': False}))
    twin = constructions.generate('twin-peaks', ())
    fixtures.append(('twin-peaks', twin.graph,
                     {'feasible': True, 'forced': twin.claims[constants.CLAIM_FORCED_PAIRS]}))
    corpus = [Instance(k, label, graph, None, expected) for k, (label, graph, expected) in enumerate(fixtures)]
    for instance in random_corpus(count, seed, max_n):
        corpus.append(Instance(len(fixtures) + instance.instance_id, instance.label, instance.graph))
    return corpus


def families_corpus(count: int, seed: int, max_n: Optional[int] = None) -> List[Instance]:
    """Every certified family at a few small parameters; count and max_n do not apply."""
    params = [('convex-polygon', (5,)), ('points-tight', (2,)), ('points-tight', (10,)),
              ('matching-tight', (2,)), ('cycles-tight', (0,)), ('polygon-tight', (1,)),
              ('polygon-tight', (3,)), ('lemma4', (50, 64)), ('lemma4', (50, 63)), ('twin-peaks', ())]
    corpus = []
    for instance_id, (family, values) in enumerate(params):
        certificate = constructions.generate(family, values, seed)
        expected = {'maximal': bool(certificate.claims.get(constants.CLAIM_MAXIMAL))}
        corpus.append(Instance(instance_id, '{}{}'.format(family, values), certificate.graph,
                               certificate.matching, expected))
    return corpus


_SUITES: Dict[str, Tuple[Callable, Callable]] = {
    'lemma1-sweep': (random_corpus, evaluate_lemma1),
    'bounds-sweep': (bounds_corpus, evaluate_bounds),
    'oracle-equivalence': (random_corpus, evaluate_oracle),
    'perfect-corpus': (perfect_corpus, evaluate_perfect),
    'families': (families_corpus, evaluate_family),
}


def _evaluate_safely(evaluate: Callable, instance: Instance, budget: int) -> ExperimentRow:
    try:
        return evaluate(instance, budget)
    except BudgetExceededError as err:
        logger.warning("Instance {} ({}): {}".format(instance.instance_id, instance.label, err))
        status = constants.STATUS_BUDGET
    except CompatMatchError as err:
        logger.error("Instance {} ({}): {}".format(instance.instance_id, instance.label, err))
        status = '{}: {}'.format(VIOLATION_PREFIX, type(err).__name__)
    graph = instance.graph
    return ExperimentRow(instance.instance_id, analysis.regularity_class(graph), graph.n, graph.m,
                         None, None, len(solvers.greedy_maximal(graph)),
                         analysis.lower_bound(graph).lower_bound, None, status)


def run_suite(suite: str, count: Optional[int] = None, seed: int = 0, workers: Optional[int] = None,
              budget: Optional[int] = None, max_n: Optional[int] = None, progress: bool = True) -> ExperimentSummary:
    if suite not in _SUITES:
        raise ParameterRangeError("Unknown suite {!r}; choose from {}".format(suite, ', '.join(constants.SUITES)))
    settings = config.experiment_settings()
    count = int(settings['count']) if count is None else count
    workers = int(settings['workers']) if workers is None else workers
    budget = budget or config.default_budget()
    if count < 0 or workers < 1:
        raise ParameterRangeError("count must be >= 0 and workers >= 1, got {} and {}".format(count, workers))
    build, evaluate = _SUITES[suite]
    instances = build(count, seed, max_n)
    logger.info("Suite {}: {} instances, seed {}, {} workers".format(suite, len(instances), seed, workers))
    # thread_map keeps the input order, so rows come back sorted by instance id
    rows = thread_map(lambda instance: _evaluate_safely(evaluate, instance, budget), instances,
                      total=len(instances), desc=suite, max_workers=workers, disable=not progress)
    summary = ExperimentSummary(suite, list(rows))
    for row in summary.rows:
        if row.violation:
            logger.error("Instance {} violates: {}".format(row.instance_id, row.status))
    return summary


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, Fraction):
        return str(value)
    return value


def to_frame(rows: List[ExperimentRow]) -> pd.DataFrame:
    return pd.DataFrame([[_cell(value) for value in astuple(row)] for row in rows],
                        columns=constants.EXPERIMENT_COLUMNS)


def to_csv(rows: List[ExperimentRow]) -> str:
    return to_frame(rows).to_csv(index=False, lineterminator='\n')


def write_csv(rows: List[ExperimentRow], path: str):
    document.write_text(path, to_csv(rows))


def summary_line(summary: ExperimentSummary) -> str:
    line = "{}: {} instances, {} violations".format(summary.suite, len(summary.rows), summary.violations)
    if summary.budget_exceeded:
        line += ", {} over budget".format(summary.budget_exceeded)
    return line
