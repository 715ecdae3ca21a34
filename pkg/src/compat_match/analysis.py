"""
Counting parameters of a graph with a maximal compatible matching, the convex subdivision
used to bound them, and the lower bounds they imply for regular graphs and polygons.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from compat_match import constants, geometry
from compat_match import graph as gm
from compat_match.errors import GeneralPositionError, GraphClassError, NotMaximalError
from compat_match.geometry import Point
from compat_match.graph import GeometricGraph, Matching

logger = logging.getLogger('compat_match.analysis')


@dataclass(frozen=True)
class Lemma1Parameters:
    i: int
    delta: int
    sigma: int
    nu: int
    r_u: int
    r_m: int

    def as_dict(self) -> dict:
        return {'i': self.i, 'delta': self.delta, 'sigma': self.sigma,
                'nu': self.nu, 'r_u': self.r_u, 'r_m': self.r_m}


@dataclass(frozen=True)
class Lemma1Check:
    lhs: int
    rhs: int
    slack: int
    holds: bool


@dataclass(frozen=True)
class SubdivisionReport:
    D: GeometricGraph
    V_D: int
    E_D: int
    F_D: int
    F_histogram: Dict[int, int]
    added_edges: Tuple[Tuple[int, int], ...]
    rectangle: Tuple[int, int, int, int]
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def F(self, count: int) -> int:
        return self.F_histogram.get(count, 0)


@dataclass(frozen=True)
class BoundReport:
    graph_class: str
    lower_bound: Optional[Fraction]
    matching_size: Optional[int] = None
    satisfied: Optional[bool] = None
    slack: Optional[Fraction] = None


def _prepare(graph: GeometricGraph, matching: Matching) -> GeometricGraph:
    gm.require_compatible(graph, matching)
    graph.require_general_position()
    return gm.union_graph(graph, matching)


def lemma1_parameters(graph: GeometricGraph, matching: Matching) -> Lemma1Parameters:
    union = _prepare(graph, matching)
    matched = matching.vertices

    isolated = sum(1 for u in range(union.n) if union.degree(u) == 0)

    delta = 0
    for face in gm.faces(graph):
        if face.is_triangle() and not (face.incident_vertices & matched):
            delta += 1

    sigma = 0
    for face in gm.faces(union):
        incident = face.incident_vertices
        if incident and incident <= matched:
            sigma += 1

    reflex = gm.reflex_vertices(union)
    r_u = sum(1 for u in reflex.vertices if u not in matched)
    r_m = sum(1 for u in reflex.vertices if u in matched)

    nu = 0
    for u, v in graph.edges:
        for unmatched, other in ((u, v), (v, u)):
            if unmatched in matched or other not in matched:
                continue
            if any(other in angle for angle in reflex.angles.get(unmatched, ())):
                nu += 1

    parameters = Lemma1Parameters(isolated, delta, sigma, nu, r_u, r_m)
    logger.debug("Counting parameters {}".format(parameters))
    return parameters


def lemma1_check(graph: GeometricGraph, matching: Matching,
                 parameters: Optional[Lemma1Parameters] = None) -> Lemma1Check:
    """Evaluate 2n + nu + 2 sigma - r_u - 2 r_m - sum of matched degrees - delta - 2 <= 2|M|."""
    if not gm.is_maximal(graph, matching):
        raise NotMaximalError("The inequality is only asserted for maximal compatible matchings")
    if parameters is None:
        parameters = lemma1_parameters(graph, matching)
    matched_degree = sum(graph.degree(u) for u in matching.vertices)
    lhs = (2 * graph.n + parameters.nu + 2 * parameters.sigma - parameters.r_u
           - 2 * parameters.r_m - matched_degree - parameters.delta - 2)
    rhs = 2 * len(matching)
    return Lemma1Check(lhs, rhs, rhs - lhs, lhs <= rhs)


class _Subdivider(object):
    """Incrementally builds the convex subdivision; points are exact, edges are index pairs."""

    def __init__(self, points: List[Point], edges):
        self.points = list(points)
        self.edges = set(gm.normalize_pair(u, v) for u, v in edges)
        self.added = []

    def shoot(self, origin: int, direction: Point):
        """First point hit by the ray, as (t, edge) when it lies inside an edge, or None when a vertex
        is met first or nothing is hit."""
        o = self.points[origin]
        best_edge = None
        best_t = None
        for c_index, e_index in self.edges:
            if origin in (c_index, e_index):
                continue
            c = self.points[c_index]
            e = self.points[e_index]
            span = e - c
            denom = direction.x * span.y - direction.y * span.x
            if denom == 0:
                continue
            offset = c - o
            t = (offset.x * span.y - offset.y * span.x) / denom
            s = (offset.x * direction.y - offset.y * direction.x) / denom
            if t <= 0 or s <= 0 or s >= 1:
                continue
            if best_t is None or t < best_t:
                best_t = t
                best_edge = (c_index, e_index)
        if best_t is None:
            return None
        for index, p in enumerate(self.points):
            if index == origin:
                continue
            rel = p - o
            if rel.x * direction.y - rel.y * direction.x != 0:
                continue
            t = rel.x * direction.x + rel.y * direction.y
            squared = direction.x * direction.x + direction.y * direction.y
            if t > 0 and t / squared <= best_t:
                return None
        return best_t, best_edge

    def place(self, origin: int, direction: Point, hit):
        t, edge = hit
        o = self.points[origin]
        new_point = Point(o.x + t * direction.x, o.y + t * direction.y)
        new_index = len(self.points)
        self.points.append(new_point)
        self.edges.remove(edge)
        self.edges.add(gm.normalize_pair(edge[0], new_index))
        self.edges.add(gm.normalize_pair(new_index, edge[1]))
        ray = gm.normalize_pair(origin, new_index)
        self.edges.add(ray)
        self.added.append(ray)


def _candidate_weights(limit: int = 12):
    """Positive integer weight pairs in a fixed order: small sums first."""
    for total in range(2, limit + 2):
        for alpha in range(1, total):
            yield alpha, total - alpha


def _candidate_directions(limit: int = 8):
    for size in range(1, limit + 1):
        for dx in range(-size, size + 1):
            for dy in (size - abs(dx), abs(dx) - size):
                if dx != 0 or dy != 0:
                    yield Point(dx, dy)


def _rectangle(points: List[Point], margins):
    min_x, min_y, max_x, max_y = geometry.bounding_box(points)
    left, bottom, right, top = margins
    return [Point(min_x - left, min_y - bottom), Point(max_x + right, min_y - bottom),
            Point(max_x + right, max_y + top), Point(min_x - left, max_y + top)]


# rectangle margins tried in turn; the first is the one-unit enclosing box
_MARGINS = [(1, 1, 1, 1), (1, Fraction(4, 3), Fraction(6, 5), Fraction(8, 7)),
            (Fraction(3, 2), Fraction(5, 3), Fraction(7, 5), Fraction(9, 7))]


def build_convex_subdivision(graph: GeometricGraph, matching: Matching) -> SubdivisionReport:
    if not gm.is_maximal(graph, matching):
        raise NotMaximalError("The convex subdivision is defined for maximal compatible matchings")
    union = _prepare(graph, matching)
    parameters = lemma1_parameters(graph, matching)
    reflex = gm.reflex_vertices(union)
    for margins in _MARGINS:
        subdivider = _try_subdivide(union, reflex, margins)
        if subdivider is not None:
            break
    else:
        raise GeneralPositionError("No ray placement avoids every vertex of the subdivision")
    return _report(graph, matching, parameters, subdivider)


def _try_subdivide(union: GeometricGraph, reflex: gm.ReflexInfo, margins) -> Optional[_Subdivider]:
    n = union.n
    corners = _rectangle(list(union.points), margins)
    subdivider = _Subdivider(list(union.points) + corners,
                             list(union.edges) + [(n + k, n + (k + 1) % 4) for k in range(4)])
    points = union.points

    # a 2 pi angle leaves no choice: the cut must continue the single edge
    for u in sorted(reflex.angles):
        if union.degree(u) != 1:
            continue
        (neighbor, _), = reflex.angles[u]
        direction = points[u] - points[neighbor]
        hit = subdivider.shoot(u, direction)
        if hit is None:
            logger.debug("Cut continuing edge ({}, {}) meets a vertex with margins {}".format(neighbor, u, margins))
            return None
        subdivider.place(u, direction, hit)

    for u in range(n):
        if union.degree(u) != 0:
            continue
        for direction in _candidate_directions():
            forward = subdivider.shoot(u, direction)
            backward = subdivider.shoot(u, Point(-direction.x, -direction.y))
            if forward is not None and backward is not None:
                subdivider.place(u, direction, forward)
                subdivider.place(u, Point(-direction.x, -direction.y), backward)
                break
        else:
            logger.debug("No admissible cut through isolated vertex {}".format(u))
            return None

    for u in sorted(reflex.angles):
        if union.degree(u) < 2:
            continue
        (first, second), = reflex.angles[u]
        to_first = points[first] - points[u]
        to_second = points[second] - points[u]
        for alpha, beta in _candidate_weights():
            direction = Point(-(alpha * to_first.x + beta * to_second.x), -(alpha * to_first.y + beta * to_second.y))
            hit = subdivider.shoot(u, direction)
            if hit is not None:
                subdivider.place(u, direction, hit)
                break
        else:
            logger.debug("No admissible cut for the reflex angle at {}".format(u))
            return None
    return subdivider


def _is_convex_walk(lattice, walk) -> bool:
    if len(set(walk)) != len(walk) or len(walk) < 3:
        return False
    for k, u in enumerate(walk):
        a = lattice[walk[k - 1]]
        b = lattice[u]
        c = lattice[walk[(k + 1) % len(walk)]]
        if geometry.cross(a, b, c) < 0:
            return False
    return True


def _report(graph: GeometricGraph, matching: Matching, parameters: Lemma1Parameters,
            subdivider: _Subdivider) -> SubdivisionReport:
    n = graph.n
    D = GeometricGraph(tuple(subdivider.points), tuple(sorted(subdivider.edges)))
    D_faces = gm.faces(D, require_general_position=False)
    unmatched = set(matching.unmatched(n))
    histogram = dict()
    bounded_convex = True
    for face in D_faces:
        count = len(face.incident_vertices & unmatched)
        histogram[count] = histogram.get(count, 0) + 1
        if not face.is_outer and not _is_convex_walk(D.lattice, face.outer_walk):
            bounded_convex = False

    p = parameters
    V_D, E_D, F_D = D.n, D.m, len(D_faces)
    reflex_total = p.r_u + p.r_m
    weighted = sum(count * faces for count, faces in histogram.items())
    unmatched_degree = sum(graph.degree(u) for u in unmatched)
    checks = {
        'vertex-count': V_D == n + reflex_total + 2 * p.i + 4,
        'edge-count': E_D == graph.m + len(matching) + 2 * (reflex_total + 2 * p.i) + 4,
        'euler': F_D == E_D - V_D + 2,
        'connected': len(D.components) == 1,
        'weighted-incidences': weighted == 2 * p.i + p.r_u + unmatched_degree,
        'three-unmatched-faces': histogram.get(3, 0) == p.delta,
        'no-crowded-faces': all(faces == 0 for count, faces in histogram.items() if count >= 4),
        'one-unmatched-faces': histogram.get(1, 0) >= 2 * p.i + p.nu,
        'zero-unmatched-faces': histogram.get(0, 0) >= 1 + p.sigma,
        'bounded-faces-convex': bounded_convex,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.error("Convex subdivision checks failed: {}".format(', '.join(failed)))
    rectangle = (n, n + 1, n + 2, n + 3)
    return SubdivisionReport(D, V_D, E_D, F_D, dict(sorted(histogram.items())),
                             tuple(subdivider.added), rectangle, checks)


def lemma1_chain(graph: GeometricGraph, matching: Matching, report: Optional[SubdivisionReport] = None) -> dict:
    """Intermediate quantities of the counting argument behind the inequality."""
    parameters = lemma1_parameters(graph, matching)
    if report is None:
        report = build_convex_subdivision(graph, matching)
    F0, F1, F3 = report.F(0), report.F(1), report.F(3)
    F2 = report.F_D - F0 - F1 - F3
    unmatched = matching.unmatched(graph.n)
    incidences = 2 * parameters.i + parameters.r_u + sum(graph.degree(u) for u in unmatched)
    upper = (2 * graph.m - 2 * graph.n + 2 * len(matching) + 2 * parameters.i + 2 * parameters.r_m
             + 2 * parameters.r_u + parameters.delta - parameters.nu - 2 * parameters.sigma + 2)
    return {
        'F_D': report.F_D, 'F_0': F0, 'F_1': F1, 'F_2': F2, 'F_3': F3,
        'incidences': incidences,
        'weighted-faces': F1 + 2 * F2 + 3 * F3,
        'two-F_D-form': 2 * report.F_D - 2 * F0 - F1 + parameters.delta,
        'upper-bound': upper,
        'holds': incidences == F1 + 2 * F2 + 3 * F3 <= upper,
    }


def regularity_class(graph: GeometricGraph) -> str:
    degrees = set(graph.degrees())
    if graph.n == 0 or len(degrees) != 1:
        return constants.CLASS_OTHER
    degree = degrees.pop()
    if degree == 0:
        return constants.CLASS_POINT_SET
    if degree == 1:
        return constants.CLASS_MATCHING
    if degree == 2:
        if len(graph.components) == 1:
            return constants.CLASS_POLYGON
        return constants.CLASS_CYCLES
    return constants.CLASS_OTHER


def is_two_regular(graph_class: str) -> bool:
    return graph_class in (constants.CLASS_CYCLES, constants.CLASS_POLYGON)


_BOUND_CLASS = {constants.CLASS_POINT_SET: constants.BOUND_POINT_SET,
                constants.CLASS_MATCHING: constants.BOUND_PERFECT_MATCHING,
                constants.CLASS_CYCLES: constants.BOUND_DISJOINT_POLYGONS,
                constants.CLASS_POLYGON: constants.BOUND_POLYGON,
                constants.CLASS_OTHER: constants.BOUND_OTHER}


def lower_bound(graph: GeometricGraph) -> BoundReport:
    """Lower bound on every maximal compatible matching, or None when no bound applies."""
    graph_class = regularity_class(graph)
    n = graph.n
    bound = None
    if graph_class == constants.CLASS_POINT_SET:
        bound = Fraction(n - 1, 3)
    elif graph_class == constants.CLASS_MATCHING:
        bound = Fraction(n - 2, 6)
    elif graph_class == constants.CLASS_CYCLES:
        bound = Fraction(n - 3, 11)
    elif graph_class == constants.CLASS_POLYGON and n >= 4:
        bound = max(Fraction(n, 7), Fraction(n - 3, 11))
    return BoundReport(_BOUND_CLASS[graph_class], bound)


def bound_report(graph: GeometricGraph, matching_size: int) -> BoundReport:
    template = lower_bound(graph)
    if template.lower_bound is None:
        return BoundReport(template.graph_class, None, matching_size, True, None)
    slack = matching_size - template.lower_bound
    return BoundReport(template.graph_class, template.lower_bound, matching_size, slack >= 0, slack)


def regular_bound_certificate(graph: GeometricGraph, matching: Matching) -> dict:
    """The inequality specialised to a regular class, next to the general one."""
    graph_class = regularity_class(graph)
    n = graph.n
    k = len(matching)
    if graph_class == constants.CLASS_POINT_SET:
        lhs = Fraction(2 * n - 4 * k - 2)
    elif graph_class == constants.CLASS_MATCHING:
        lhs = Fraction(n - 4 * k - 2)
    elif is_two_regular(graph_class):
        lhs = n - 6 * k - Fraction(n - 2 * k, 3) - 2
    else:
        raise GraphClassError("No specialised inequality for class {}".format(graph_class))
    general = lemma1_check(graph, matching)
    return {'class': graph_class, 'lhs': lhs, 'rhs': 2 * k, 'holds': lhs <= 2 * k,
            'general-lhs': general.lhs, 'general-holds': general.holds}


def polygon_face_facts(graph: GeometricGraph, matching: Matching) -> Dict[str, bool]:
    if regularity_class(graph) != constants.CLASS_POLYGON or graph.n < 4:
        raise GraphClassError("Face facts apply to polygons with at least four vertices")
    if not gm.is_maximal(graph, matching):
        raise NotMaximalError("Face facts apply to maximal compatible matchings")
    parameters = lemma1_parameters(graph, matching)
    union = gm.union_graph(graph, matching)
    k = len(matching)
    return {
        'faces': len(gm.faces(union)) == 2 + k,
        'nu-plus-sigma': parameters.nu + parameters.sigma >= 2 + k,
        'unmatched-reflex': parameters.r_u == graph.n - 2 * k,
        'no-unmatched-triangles': parameters.delta == 0,
    }
