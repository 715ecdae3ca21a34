"""
Exact search over compatible matchings.

Every search works on the free vertex pairs of a graph (pairs whose segment avoids the drawing)
and a conflict relation between them: two pairs conflict when they share a vertex or their
segments cross or overlap. Compatible matchings are exactly the conflict-free sets of pairs.
Sets of pairs are Python ints used as bitmasks over the sorted pair list.
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from compat_match import config, constants, geometry
from compat_match import graph as gm
from compat_match.analysis import lower_bound
from compat_match.errors import BudgetExceededError, ParameterRangeError
from compat_match.graph import GeometricGraph, Matching

logger = logging.getLogger('compat_match.solvers')


@dataclass(frozen=True)
class SolveResult:
    matching: Matching
    objective: int
    status: str
    nodes_explored: int
    elapsed: float


@dataclass(frozen=True)
class GreedyStrategy:
    ordering: str = constants.ORDER_LEXICOGRAPHIC
    seed: int = 0

    def __post_init__(self):
        if self.ordering not in constants.GREEDY_ORDERINGS:
            raise ParameterRangeError("Unknown greedy ordering '{}'".format(self.ordering))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Budget(object):
    def __init__(self, limit: Optional[int]):
        self.limit = config.default_budget() if limit is None else int(limit)
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExceededError("Node budget of {} exhausted".format(self.limit), nodes=self.nodes)


class CandidateSpace(object):
    """Free pairs of a graph with their pairwise conflicts."""

    def __init__(self, graph: GeometricGraph):
        self.graph = graph
        self.pairs: List[gm.Pair] = list(graph.free_pairs)
        self.index = {pair: k for k, pair in enumerate(self.pairs)}
        count = len(self.pairs)
        conflicts = [0] * count
        by_vertex = [0] * graph.n
        for k, (u, v) in enumerate(self.pairs):
            by_vertex[u] |= 1 << k
            by_vertex[v] |= 1 << k
        for k, first in enumerate(self.pairs):
            a, b = graph.segment(first)
            for j in range(k + 1, count):
                second = self.pairs[j]
                if set(first) & set(second):
                    clash = True
                else:
                    c, d = graph.segment(second)
                    clash = geometry.classify_segments(a, b, c, d) not in geometry.NONCROSSING_RELATIONS
                if clash:
                    conflicts[k] |= 1 << j
                    conflicts[j] |= 1 << k
        self.conflicts = conflicts
        self.by_vertex = by_vertex
        self.full = (1 << count) - 1
        logger.debug("Candidate space: {} free pairs on {} vertices".format(count, graph.n))

    def matching(self, mask: int) -> Matching:
        return Matching(tuple(self.pairs[k] for k in _bits(mask)))

    def mask(self, matching: Matching) -> int:
        return sum(1 << self.index[pair] for pair in matching)

    def closed(self, k: int) -> int:
        return self.conflicts[k] | (1 << k)

    def dominated(self, mask: int) -> int:
        covered = mask
        for k in _bits(mask):
            covered |= self.conflicts[k]
        return covered


def _order_candidates(graph: GeometricGraph, candidates, strategy: GreedyStrategy):
    if strategy.ordering == constants.ORDER_LEXICOGRAPHIC:
        return sorted(candidates)
    if strategy.ordering == constants.ORDER_SHORTEST:
        return sorted(candidates, key=lambda pair: (geometry.squared_distance(*graph.segment(pair)), pair))
    if strategy.ordering == constants.ORDER_LONGEST:
        return sorted(candidates, key=lambda pair: (-geometry.squared_distance(*graph.segment(pair)), pair))
    ordered = sorted(candidates)
    permutation = np.random.default_rng(strategy.seed).permutation(len(ordered))
    return [ordered[k] for k in permutation]


def greedy_maximal(graph: GeometricGraph, strategy: Optional[GreedyStrategy] = None) -> Matching:
    """Add the first remaining candidate under the ordering until none is left."""
    strategy = strategy or GreedyStrategy()
    remaining = _order_candidates(graph, gm.compatible_candidates(graph, Matching()), strategy)
    chosen = []
    while remaining:
        pair = remaining.pop(0)
        chosen.append(pair)
        a, b = graph.segment(pair)
        kept = []
        for other in remaining:
            if set(other) & set(pair):
                continue
            c, d = graph.segment(other)
            if geometry.classify_segments(a, b, c, d) in geometry.NONCROSSING_RELATIONS:
                kept.append(other)
        remaining = kept
    matching = Matching(tuple(chosen))
    logger.debug("Greedy ({}, seed {}) picked {} pairs".format(strategy.ordering, strategy.seed, len(matching)))
    return matching


def enumerate_maximal(graph: GeometricGraph, node_budget: Optional[int] = None,
                      space: Optional[CandidateSpace] = None) -> List[Matching]:
    """Every maximal compatible matching exactly once, sorted by canonical pair list."""
    space = space or CandidateSpace(graph)
    budget = _Budget(node_budget)
    compatible = [space.full & ~space.closed(k) for k in range(len(space.pairs))]
    found = []

    # Bron-Kerbosch with pivoting on the compatibility relation
    def expand(chosen: int, open_set: int, closed_set: int):
        budget.tick()
        if not open_set and not closed_set:
            found.append(chosen)
            return
        pivot = max(_bits(open_set | closed_set), key=lambda k: (bin(open_set & compatible[k]).count('1'), -k))
        for k in list(_bits(open_set & ~compatible[pivot])):
            expand(chosen | (1 << k), open_set & compatible[k], closed_set & compatible[k])
            open_set &= ~(1 << k)
            closed_set |= 1 << k

    expand(0, space.full, 0)
    matchings = sorted((space.matching(mask) for mask in found), key=lambda matching: matching.pairs)
    logger.debug("Enumerated {} maximal matchings in {} nodes".format(len(matchings), budget.nodes))
    return matchings


def _proven_floor(graph: GeometricGraph) -> int:
    if not graph.general_position:
        return 0
    bound = lower_bound(graph).lower_bound
    if bound is None or bound <= 0:
        return 0
    return math.ceil(bound)


def min_maximal(graph: GeometricGraph, node_budget: Optional[int] = None,
                space: Optional[CandidateSpace] = None) -> SolveResult:
    """mm(G): branch on the lowest candidate not yet blocked, over the pairs that would block it."""
    started = time.perf_counter()
    space = space or CandidateSpace(graph)
    budget = _Budget(node_budget)
    incumbent = space.mask(greedy_maximal(graph))
    best = [bin(incumbent).count('1'), incumbent]
    floor = _proven_floor(graph)

    def search(chosen: int, size: int, dominated: int, available: int):
        budget.tick()
        undominated = space.full & ~dominated
        if not undominated:
            if size < best[0]:
                best[0], best[1] = size, chosen
            return
        if size + 1 >= best[0]:
            return
        lowest = (undominated & -undominated).bit_length() - 1
        options = space.closed(lowest) & available
        for k in _bits(options):
            search(chosen | (1 << k), size + 1, dominated | space.closed(k), available & ~space.closed(k))
            available &= ~(1 << k)
            if best[0] <= floor:
                return

    status = constants.STATUS_OPTIMAL
    if best[0] > floor:
        try:
            search(0, 0, 0, space.full)
        except BudgetExceededError:
            logger.warning("Minimum maximal search stopped after {} nodes; returning incumbent".format(budget.nodes))
            status = constants.STATUS_FEASIBLE
    matching = space.matching(best[1])
    return SolveResult(matching, len(matching), status, budget.nodes, time.perf_counter() - started)


def max_compatible(graph: GeometricGraph, node_budget: Optional[int] = None,
                   space: Optional[CandidateSpace] = None) -> SolveResult:
    """d(G): include or exclude the lowest available pair, bounded by the free vertices left."""
    started = time.perf_counter()
    space = space or CandidateSpace(graph)
    budget = _Budget(node_budget)
    incumbent = space.mask(greedy_maximal(graph))
    best = [bin(incumbent).count('1'), incumbent]

    def optimistic(available: int) -> int:
        touched = set()
        for k in _bits(available):
            touched.update(space.pairs[k])
        return min(bin(available).count('1'), len(touched) // 2)

    def search(chosen: int, size: int, available: int):
        budget.tick()
        if not available:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + optimistic(available) <= best[0]:
            return
        k = (available & -available).bit_length() - 1
        search(chosen | (1 << k), size + 1, available & ~space.closed(k))
        search(chosen, size, available & ~(1 << k))

    status = constants.STATUS_OPTIMAL
    try:
        search(0, 0, space.full)
    except BudgetExceededError:
        logger.warning("Maximum compatible search stopped after {} nodes; returning incumbent".format(budget.nodes))
        status = constants.STATUS_BUDGET
    matching = space.matching(best[1])
    return SolveResult(matching, len(matching), status, budget.nodes, time.perf_counter() - started)


def _perfect_search(space: CandidateSpace, budget: _Budget, stop_at_first: bool) -> List[int]:
    n = space.graph.n
    solutions = []

    def search(chosen: int, matched: int, available: int) -> bool:
        budget.tick()
        if matched == (1 << n) - 1:
            solutions.append(chosen)
            return stop_at_first
        for v in range(n):
            if not (matched >> v) & 1 and not available & space.by_vertex[v]:
                return False
        lowest = next(v for v in range(n) if not (matched >> v) & 1)
        for k in _bits(available & space.by_vertex[lowest]):
            u, w = space.pairs[k]
            if search(chosen | (1 << k), matched | (1 << u) | (1 << w), available & ~space.closed(k)):
                return True
        return False

    if n % 2 == 0:
        search(0, 0, space.full)
    return solutions


def has_perfect_compatible(graph: GeometricGraph, node_budget: Optional[int] = None,
                           space: Optional[CandidateSpace] = None) -> SolveResult:
    started = time.perf_counter()
    if graph.n % 2 == 1:
        return SolveResult(Matching(), 0, constants.STATUS_INFEASIBLE, 0, time.perf_counter() - started)
    space = space or CandidateSpace(graph)
    budget = _Budget(node_budget)
    try:
        solutions = _perfect_search(space, budget, stop_at_first=True)
    except BudgetExceededError:
        logger.warning("Perfect matching search stopped after {} nodes".format(budget.nodes))
        return SolveResult(Matching(), 0, constants.STATUS_BUDGET, budget.nodes, time.perf_counter() - started)
    if not solutions:
        return SolveResult(Matching(), 0, constants.STATUS_INFEASIBLE, budget.nodes, time.perf_counter() - started)
    matching = space.matching(solutions[0])
    return SolveResult(matching, len(matching), constants.STATUS_OPTIMAL, budget.nodes, time.perf_counter() - started)


def enumerate_perfect_compatible(graph: GeometricGraph, node_budget: Optional[int] = None,
                                 space: Optional[CandidateSpace] = None) -> List[Matching]:
    if graph.n % 2 == 1:
        return []
    space = space or CandidateSpace(graph)
    solutions = _perfect_search(space, _Budget(node_budget), stop_at_first=False)
    return sorted((space.matching(mask) for mask in solutions), key=lambda matching: matching.pairs)


def count_perfect_compatible(graph: GeometricGraph, node_budget: Optional[int] = None,
                             space: Optional[CandidateSpace] = None) -> int:
    return len(enumerate_perfect_compatible(graph, node_budget, space))


def extremes(matchings: List[Matching]) -> Tuple[int, int]:
    sizes = [len(matching) for matching in matchings]
    return min(sizes), max(sizes)
