"""
Instance families with known maximal compatible matchings.

Every generator returns a ConstructionCertificate whose claims are re-verified before it is
handed out; placements that only work "close enough" are found by shrinking an offset until
the verifier accepts.
"""
import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from compat_match import config, constants, document, geometry, solvers
from compat_match import graph as gm
from compat_match.analysis import regularity_class
from compat_match.errors import CertificateError, GeneralPositionError, ParameterRangeError
from compat_match.geometry import Point
from compat_match.graph import GeometricGraph, Matching

logger = logging.getLogger('compat_match.constructions')


@dataclass(frozen=True)
class ConstructionCertificate:
    graph: GeometricGraph
    matching: Matching
    claims: Dict[str, object]
    roles: Dict[str, Tuple[int, ...]] = field(default_factory=dict)
    generator: str = ''
    params: Tuple = ()


def make_claims(graph: GeometricGraph, matching: Matching, maximal: Optional[bool] = True) -> Dict[str, object]:
    claims = {constants.CLAIM_N: graph.n,
              constants.CLAIM_M: graph.m,
              constants.CLAIM_MATCHING_SIZE: len(matching),
              constants.CLAIM_CLASS: regularity_class(graph)}
    if maximal is not None:
        claims[constants.CLAIM_MAXIMAL] = maximal
    return claims


def verify_certificate(certificate: ConstructionCertificate) -> ConstructionCertificate:
    """Recompute every claim from scratch; raise CertificateError on the first mismatch."""
    graph, matching, claims = certificate.graph, certificate.matching, certificate.claims
    report = gm.validate_graph(graph)
    if not report:
        raise CertificateError("Invalid graph: {}".format(report.message))
    if not graph.general_position:
        raise CertificateError("Vertices {} are not in general position".format(
            geometry.find_collinear_triple(graph.lattice)))
    if max((v for pair in matching for v in pair), default=-1) >= graph.n:
        raise CertificateError("Matching refers to a vertex outside the graph")
    problem = gm.find_incompatibility(graph, matching)
    if problem is not None:
        raise CertificateError("Matching pair {} is not compatible: {}".format(*problem))
    observed = {constants.CLAIM_N: graph.n,
                constants.CLAIM_M: graph.m,
                constants.CLAIM_MATCHING_SIZE: len(matching),
                constants.CLAIM_CLASS: regularity_class(graph)}
    for key, value in observed.items():
        if key in claims and claims[key] != value:
            raise CertificateError("Claim {}={} but the instance has {}".format(key, claims[key], value))
    if constants.CLAIM_MAXIMAL in claims:
        candidates = gm.compatible_candidates(graph, matching, checked=False)
        if bool(claims[constants.CLAIM_MAXIMAL]) != (not candidates):
            raise CertificateError("Claim {}={} does not hold, candidates {}".format(
                constants.CLAIM_MAXIMAL, claims[constants.CLAIM_MAXIMAL], candidates[:5]))
    if constants.CLAIM_FORCED_PAIRS in claims:
        perfect = solvers.enumerate_perfect_compatible(graph)
        count = claims.get(constants.CLAIM_PERFECT_COUNT, len(perfect))
        if not perfect or count != len(perfect):
            raise CertificateError("Claimed {} perfect matchings, found {}".format(count, len(perfect)))
        missing = [pair for pair in claims[constants.CLAIM_FORCED_PAIRS]
                   if any(tuple(pair) not in solution for solution in perfect)]
        if missing:
            raise CertificateError("Pairs {} are not in every perfect matching".format(missing))
    logger.debug("Verified {}{}: n={} m={} |M|={}".format(
        certificate.generator, certificate.params, graph.n, graph.m, len(matching)))
    return certificate


def _certify(name: str, params: Tuple, points, edges, pairs, maximal: Optional[bool] = True,
             roles: Optional[Dict[str, Tuple[int, ...]]] = None, **extra) -> ConstructionCertificate:
    graph = GeometricGraph(tuple(points), tuple(edges))
    matching = Matching(tuple(pairs))
    claims = make_claims(graph, matching, maximal)
    claims.update(extra)
    return verify_certificate(ConstructionCertificate(graph, matching, claims, roles or dict(), name, params))


def _settle(name: str, build: Callable[[Fraction, int], ConstructionCertificate],
            start: Fraction) -> ConstructionCertificate:
    """Call build(scale, attempt) with a halving scale until the certificate verifies."""
    steps = int(config.generator_settings()['shrink_max_steps'])
    last_error = None
    for step in range(steps):
        scale = start / (2 ** step)
        for attempt in range(3):
            try:
                return build(scale, attempt)
            except (CertificateError, GeneralPositionError) as err:
                last_error = err
                logger.debug("{}: scale {} attempt {} rejected: {}".format(name, scale, attempt, err))
    logger.error("{}: no verified placement after {} shrink steps".format(name, steps))
    raise CertificateError("{} could not be realised: {}".format(name, last_error))


def circle_point(angle: float) -> Point:
    """A rational point exactly on the unit circle, close to the given angle in (-pi, pi)."""
    t = Fraction(math.tan(angle / 2)).limit_denominator(10 ** 6)
    return Point((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))


def regular_polygon(count: int, radius=1, phase: float = 0.0) -> List[Point]:
    """count rational points in counterclockwise order on a circle around the origin."""
    radius = geometry.coordinate(radius)
    points = []
    for j in range(count):
        angle = -math.pi + (2 * j + 1) * math.pi / count + phase
        angle = math.remainder(angle, 2 * math.pi)
        points.append(circle_point(angle).scale(radius))
    return points


def _side_frame(a: Point, b: Point):
    """Local coordinates along side ab (a to b) and towards its right-hand side."""
    dx, dy = b.x - a.x, b.y - a.y

    def at(along, out) -> Point:
        along = geometry.coordinate(along)
        out = geometry.coordinate(out)
        return Point(a.x + along * dx + out * dy, a.y + along * dy - out * dx)
    return at


def _corner(c: Point, a: Point, b: Point, s, t) -> Point:
    """c + s (a - c) + t (b - c)."""
    return c + (a - c).scale(s) + (b - c).scale(t)


def gen_convex_polygon(n: int) -> ConstructionCertificate:
    if n < 3:
        raise ParameterRangeError("A polygon needs at least 3 vertices, got {}".format(n))
    points = [Point(i, i * i) for i in range(n)]
    edges = [(i, (i + 1) % n) for i in range(n)]
    return _certify('convex-polygon', (n,), points, edges, (), maximal=(n == 3))


def gen_points_tight(k: int) -> ConstructionCertificate:
    """3k+1 points on a parabola; chord (3j, 3j+2) caps point 3j+1 off from everything else."""
    if k < 1:
        raise ParameterRangeError("points-tight needs k >= 1, got {}".format(k))
    points = [Point(i, i * i) for i in range(3 * k + 1)]
    pairs = [(3 * j, 3 * j + 2) for j in range(k)]
    return _certify('points-tight', (k,), points, (), pairs)


def gen_matching_tight(k: int) -> ConstructionCertificate:
    """1-regular graph on 6k+2 vertices with a maximal compatible matching of size k.

    A convex 2k-gon alternates graph sides and matching sides; one segment sits inside it and
    one short segment hugs every side from outside. k=1 has no such instance.
    """
    if k < 2:
        raise ParameterRangeError("matching-tight needs k >= 2, got {}".format(k))

    def build(scale: Fraction, attempt: int) -> ConstructionCertificate:
        corners = regular_polygon(2 * k)
        points = list(corners)
        edges = [(2 * j + 1, (2 * j + 2) % (2 * k)) for j in range(k)]
        pairs = [(2 * j, 2 * j + 1) for j in range(k)]
        center = Point(sum(p.x for p in corners) / (2 * k), sum(p.y for p in corners) / (2 * k))
        offset = (corners[1] - corners[0]).scale(Fraction(1, 8)) + Point(Fraction(attempt, 97), Fraction(1, 53))
        points.extend([center - offset, center + offset])
        edges.append((2 * k, 2 * k + 1))
        for j in range(2 * k):
            at = _side_frame(corners[j], corners[(j + 1) % (2 * k)])
            base = len(points)
            points.extend([at(Fraction(1, 4), scale), at(Fraction(3, 4) + Fraction(attempt, 101), scale)])
            edges.append((base, base + 1))
        return _certify('matching-tight', (k,), points, edges, pairs)

    return _settle('matching-tight', build, Fraction(1, 8 * k))


def gen_cycles_tight(r: int) -> ConstructionCertificate:
    """2-regular graph on 36+11r vertices with a maximal compatible matching of size r+3.

    Two concentric k-gons (k = r+3) joined by k matching spokes; the faces between them are
    quadrilaterals with one reflex corner. Small triangles of unmatched vertices sit in the two
    convex corners of every quadrilateral that cannot see each other, inside the inner k-gon,
    and outside every side of the outer k-gon.
    """
    if r < 0:
        raise ParameterRangeError("cycles-tight needs r >= 0, got {}".format(r))
    k = r + 3
    half = math.pi / k
    apothem = math.cos(half)
    ratio = 2 * apothem - 1 / apothem
    rho = Fraction((max(ratio, 0.0) + apothem) / 2).limit_denominator(10 ** 6)

    def build(scale: Fraction, attempt: int) -> ConstructionCertificate:
        outer = regular_polygon(k)
        inner = regular_polygon(k, rho, phase=half)
        points = outer + inner
        edges = [(j, (j + 1) % k) for j in range(k)] + [(k + j, k + (j + 1) % k) for j in range(k)]
        pairs = [(j, k + j) for j in range(k)]

        def triangle(corners):
            base = len(points)
            points.extend(corners)
            edges.extend([(base, base + 1), (base + 1, base + 2), (base, base + 2)])

        nudge = Fraction(attempt, 89)
        center = Point(nudge * scale * rho, Fraction(1, 7) * scale * rho)
        triangle([center + Point(scale * rho, 0),
                  center + Point(-scale * rho / 2, scale * rho),
                  center + Point(-scale * rho / 2, -scale * rho)])
        for j in range(k):
            nxt = (j + 1) % k
            o_here, o_next, i_here, i_next = outer[j], outer[nxt], inner[j], inner[nxt]
            triangle([_corner(o_here, o_next, i_here, scale, scale),
                      _corner(o_here, o_next, i_here, 2 * scale, scale),
                      _corner(o_here, o_next, i_here, scale, 2 * scale + nudge * scale)])
            triangle([_corner(i_next, i_here, o_next, scale, scale),
                      _corner(i_next, i_here, o_next, 2 * scale, scale),
                      _corner(i_next, i_here, o_next, scale, 2 * scale)])
            at = _side_frame(o_here, o_next)
            triangle([at(Fraction(1, 2) - scale, scale), at(Fraction(1, 2) + scale, scale),
                      at(Fraction(1, 2) + nudge * scale, 2 * scale)])
        return _certify('cycles-tight', (r,), points, edges, pairs)

    return _settle('cycles-tight', build, Fraction(1, 4 * k * k))


def _round_away(value: float) -> int:
    """Nearest integer, halves away from zero."""
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


def gen_polygon_tight(k: int) -> ConstructionCertificate:
    """Simple polygon on 14k vertices with a maximal compatible matching of size 2k.

    An outer run of 8k vertices on a 300 degree arc faces an inner run of 4k-1 hooks, one in
    the sliver between every other outer edge and the chords next to it, so each hook sees only
    its two outer neighbours and the hooks around it. Hooks are matched in groups of four: the
    middle two through the inside of the polygon around a two-vertex detour, the outer two by a
    door segment through the gap of the arc. The last group has three hooks and closes its door
    against one extra vertex outside the gap.
    """
    if k < 1:
        raise ParameterRangeError("polygon-tight needs k >= 1, got {}".format(k))
    radius = 100000
    outer_count, hook_count = 8 * k, 4 * k - 1
    step = (300 / (outer_count - 1)) * math.pi / 180
    outer = []
    for i in range(outer_count):
        angle = 30 * math.pi / 180 + i * step
        outer.append((_round_away(radius * math.cos(angle)), _round_away(radius * math.sin(angle))))
    # halfway between an outer edge and the chords that skip one of its ends
    depth = (math.cos(step) / math.cos(step / 2) + math.cos(step / 2)) / 2 / math.cos(step / 2)
    hooks = {}
    for i in range(1, hook_count + 1):
        (ax, ay), (bx, by) = outer[2 * i - 1], outer[2 * i]
        hooks[i] = (_round_away((ax + bx) / 2 * depth), _round_away((ay + by) / 2 * depth))
    # upper hook of each pair matched inside, mapped to the point its detour leans towards
    targets = {}
    for j in range(k - 1):
        first, last = hooks[4 * j + 1], hooks[4 * j + 4]
        targets[4 * j + 3] = ((first[0] + last[0]) / 2, (first[1] + last[1]) / 2)
    targets[4 * k - 2] = (0.0, 0.0)

    points = [Point(x, y) for x, y in outer]
    index, detours = dict(), []
    for i in range(hook_count, 0, -1):
        index[i] = len(points)
        points.append(Point(*hooks[i]))
        if i in targets:
            (hx, hy), (gx, gy), (tx, ty) = hooks[i], hooks[i - 1], targets[i]
            for s in (1, 2):
                ex, ey = hx + (gx - hx) * s / 3, hy + (gy - hy) * s / 3
                detours.append(len(points))
                points.append(Point(_round_away((ex + tx) / 2), _round_away((ey + ty) / 2)))
    door_end = len(points)
    points.append(Point(_round_away(1.1 * radius), _round_away(0.15 * radius)))

    n = len(points)
    edges = [(i, (i + 1) % n) for i in range(n)]
    pairs = [(index[i], index[i - 1]) for i in sorted(targets)]
    pairs += [(index[4 * j + 1], index[4 * j + 4]) for j in range(k - 1)]
    pairs.append((index[hook_count], door_end))
    matched = {v for pair in pairs for v in pair}
    roles = {'outer': tuple(range(outer_count)),
             'hooks': tuple(index[i] for i in range(1, hook_count + 1)),
             'detours': tuple(detours),
             'door-end': (door_end,),
             'unmatched': tuple(v for v in range(n) if v not in matched)}
    return _certify('polygon-tight', (k,), points, edges, pairs, roles=roles)


def _lemma4_parameters(n: int, m: int) -> Tuple[int, int, int]:
    """k, the number of edges beyond 2n+3-13k, and the number of cap vertices."""
    if n < 5 or 10 * m < 7 * n + 95 or m > 2 * n + 2:
        raise ParameterRangeError("lemma4 needs n >= 5 and (7n+95)/10 <= m <= 2n+2, got n={} m={}".format(n, m))
    k = -(-(2 * n - m + 3) // 13)
    if m + k > 3 * n - 6:
        raise ParameterRangeError("lemma4({}, {}): {} edges and {} matching pairs are not planar on {} vertices".format(
            n, m, m, k, n))
    cap_vertices = n - 10 * k + 6
    if cap_vertices < 2:
        raise ParameterRangeError("lemma4({}, {}) leaves {} vertices for the cap".format(n, m, cap_vertices))
    return k, m - (2 * n + 3 - 13 * k), cap_vertices


def _split_triangles(points: List[Point], triangles: List[Tuple[int, int, int]], index: int, edges: List):
    """Insert points[index] into the triangle strictly containing it."""
    p = points[index]
    for t, (a, b, c) in enumerate(triangles):
        turns = {geometry.orientation(points[a], points[b], p), geometry.orientation(points[b], points[c], p),
                 geometry.orientation(points[c], points[a], p)}
        if len(turns) == 1 and geometry.Orientation.COLLINEAR not in turns:
            triangles[t:t + 1] = [(a, b, index), (b, c, index), (c, a, index)]
            edges.extend([(a, index), (b, index), (c, index)])
            return
    raise GeneralPositionError("Interior point {} is not strictly inside a triangle".format(index))


def _nudge(point: Point, index: int, attempt: int, step: Fraction) -> Point:
    """Shift point by less than step, pseudo-randomly in index and attempt."""
    dx = (index * 7919 + attempt * 104729) % 1009 - 504
    dy = (index * 6151 + attempt * 3571) % 1013 - 506
    return point + Point(step * Fraction(dx, 1009), step * Fraction(dy, 1013))


def _cap_profile(count: int) -> List[Tuple[Fraction, Fraction]]:
    """(along, out) for count points in convex position above a side, with a single top point.

    The out coordinate falls off faster than the lines from the top point to both side ends, so
    only the top point can lie on the hull of the side and the cap together.
    """
    left = (count - 1) // 2
    right = count - 1 - left
    offsets = [-Fraction(left - i, 4 * left) for i in range(left)] + [Fraction(0)]
    offsets += [Fraction(i + 1, 4 * right) for i in range(right)]
    return [(Fraction(1, 2) + d, 2 - 5 * abs(d) - 8 * d * d) for d in offsets]


def _fill_edges(points: List[Point], edges: List, pairs: List, count: int) -> List[Tuple[int, int]]:
    """Up to count shortest segments that cross neither the drawing nor each other."""
    drawn = GeometricGraph(tuple(points), tuple(edges) + tuple(pairs))
    length = lambda pair: (geometry.squared_distance(points[pair[0]], points[pair[1]]), pair)
    added = []
    for pair in sorted(drawn.free_pairs, key=length):
        if len(added) == count:
            break
        if not any(_crossing(points, pair, other) for other in added):
            added.append(pair)
    return added


def gen_lemma4(n: int, m: int) -> ConstructionCertificate:
    """Graph on n vertices and m edges with a maximal compatible matching of size ceil((2n-m+3)/13).

    A perfect matching on 2k convex points with a fan triangulation; one isolated edge per fan
    triangle; one isolated edge hugging every outer side but the last. These 10k-6 vertices carry
    7k-6 edges. A triangulated convex cap of the remaining n-10k+6 vertices hugs the last side
    and carries 2n-20k+9 edges; each of the m-(2n+3-13k) missing edges comes from moving a cap
    vertex inside the cap. When the cap is too small for that, the rest are the shortest
    segments that still cross nothing; they only block, so maximality is unaffected.
    """
    k, extra, cap_vertices = _lemma4_parameters(n, m)
    interior = min(extra, max(cap_vertices - 3, 0))
    hull = cap_vertices - interior
    size = 2 * k

    def build(scale: Fraction, attempt: int) -> ConstructionCertificate:
        corners = regular_polygon(size)
        points = list(corners)
        pairs = [(2 * j, 2 * j + 1) for j in range(k)]
        edges = []
        if k > 1:
            edges.extend((2 * j + 1, (2 * j + 2) % size) for j in range(k))
            edges.extend((0, j) for j in range(2, size - 1))
        for j in range(1, size - 1):
            center = Point((corners[0].x + corners[j].x + corners[j + 1].x) / 3,
                           (corners[0].y + corners[j].y + corners[j + 1].y) / 3)
            offset = (corners[j + 1] - corners[j]).scale(Fraction(1, 8))
            points.extend([center - offset, center + offset])
            edges.append((len(points) - 2, len(points) - 1))
        for j in range(size - 1):
            at = _side_frame(corners[j], corners[(j + 1) % size])
            points.extend([at(Fraction(1, 4), scale), at(Fraction(3, 4), scale / 4)])
            edges.append((len(points) - 2, len(points) - 1))
        base = len(points)

        at = _side_frame(corners[size - 1], corners[0])
        points.extend(at(along, scale * out) for along, out in _cap_profile(hull))
        edges.extend((base + j, base + j + 1) for j in range(hull - 1))
        edges.extend((base, base + j) for j in range(2, hull))
        triangles = [(base, base + j, base + j + 1) for j in range(1, hull - 1)]
        for _ in range(interior):
            a, b, c = max(triangles, key=lambda t: abs(geometry.cross(points[t[0]], points[t[1]], points[t[2]])))
            points.append(Point((points[a].x + points[b].x + points[c].x) / 3,
                                (points[a].y + points[b].y + points[c].y) / 3))
            _split_triangles(points, triangles, len(points) - 1, edges)

        step = scale / (1000 * (cap_vertices + 1) ** 2)
        points = [_nudge(p, index, attempt, step) for index, p in enumerate(points)]
        missing = m - len(edges)
        filler = _fill_edges(points, edges, pairs, missing) if missing else []
        if len(filler) < missing:
            raise ParameterRangeError("lemma4({}, {}): only {} of {} missing edges fit without crossings".format(
                n, m, len(filler), missing))
        roles = {'matched': tuple(range(size)), 'base': tuple(range(base)), 'cap': tuple(range(base, n))}
        return _certify('lemma4', (n, m), points, edges + filler, pairs, roles=roles,
                        **{'k': k, 'cap-interior': interior, 'filler-edges': len(filler)})

    logger.info("lemma4({}, {}): k={}, cap of {} hull and {} interior vertices, {} filler edges".format(
        n, m, k, hull, interior, extra - interior))
    return _settle('lemma4', build, Fraction(1, 8 * k))


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _random_lattice_points(rng: np.random.Generator, count: int, taken: List[Point]) -> List[Point]:
    """count fresh integer points in general position with each other and with taken."""
    span = int(config.generator_settings()['random_coordinate_range'])
    retries = int(config.generator_settings()['random_polygon_retries'])
    chosen = []
    for _ in range(retries):
        if len(chosen) == count:
            return chosen
        x, y = (int(value) for value in rng.integers(0, span, size=2))
        candidate = Point(x, y)
        if geometry.is_general_position(taken + chosen + [candidate]):
            chosen.append(candidate)
    raise CertificateError("Could not place {} points in general position".format(count))


def _crossing(points: List[Point], first, second) -> bool:
    return geometry.classify_segments(points[first[0]], points[first[1]], points[second[0]],
                                      points[second[1]]) not in geometry.NONCROSSING_RELATIONS


def _untangle(points: List[Point], order: List[int]) -> List[int]:
    """2-opt: reverse the stretch between two crossing cycle edges until none cross."""
    retries = int(config.generator_settings()['random_polygon_retries'])
    size = len(order)
    for _ in range(retries):
        found = False
        for a in range(size):
            for b in range(a + 2, size):
                if a == 0 and b == size - 1:
                    continue
                first = (order[a], order[a + 1])
                second = (order[b], order[(b + 1) % size])
                if _crossing(points, first, second):
                    order[a + 1:b + 1] = reversed(order[a + 1:b + 1])
                    found = True
                    break
            if found:
                break
        if not found:
            return order
    raise CertificateError("2-opt did not untangle a {}-cycle".format(size))


def random_point_set(n: int, seed: int) -> GeometricGraph:
    if n < 1:
        raise ParameterRangeError("random-points needs n >= 1, got {}".format(n))
    return GeometricGraph(tuple(_random_lattice_points(_rng(seed), n, [])))


def random_polygon(n: int, seed: int) -> GeometricGraph:
    if n < 3:
        raise ParameterRangeError("random-polygon needs n >= 3, got {}".format(n))
    rng = _rng(seed)
    points = _random_lattice_points(rng, n, [])
    order = _untangle(points, [int(v) for v in rng.permutation(n)])
    return GeometricGraph(tuple(points), tuple((order[j], order[(j + 1) % n]) for j in range(n)))


def random_segments(n: int, seed: int) -> GeometricGraph:
    if n < 2 or n % 2:
        raise ParameterRangeError("random-segments needs an even n >= 2, got {}".format(n))
    rng = _rng(seed)
    retries = int(config.generator_settings()['random_polygon_retries'])
    points, edges = [], []
    for _ in range(retries):
        if len(points) == n:
            return GeometricGraph(tuple(points), tuple(edges))
        pair = _random_lattice_points(rng, 2, points)
        trial = points + pair
        segment = (len(points), len(points) + 1)
        if any(_crossing(trial, segment, edge) for edge in edges):
            continue
        if any(geometry.in_relative_interior(pair[0], pair[1], p) for p in points):
            continue
        points, edges = trial, edges + [segment]
    raise CertificateError("Could not place {} disjoint segments".format(n // 2))


def random_disjoint_cycles(n: int, seed: int) -> GeometricGraph:
    """Disjoint simple polygons, each with at least three vertices, possibly nested."""
    if n < 3:
        raise ParameterRangeError("random-cycles needs n >= 3, got {}".format(n))
    rng = _rng(seed)
    sizes = []
    left = n
    while left >= 6 and rng.random() < 0.6:
        size = int(rng.integers(3, left - 2))
        sizes.append(size)
        left -= size
    sizes.append(left)
    retries = int(config.generator_settings()['random_polygon_retries'])
    points, edges = [], []
    for size in sizes:
        for _ in range(retries):
            fresh = _random_lattice_points(rng, size, points)
            trial = points + fresh
            order = _untangle(trial, [len(points) + int(v) for v in rng.permutation(size)])
            cycle = [(order[j], order[(j + 1) % size]) for j in range(size)]
            if any(_crossing(trial, new, old) for new in cycle for old in edges):
                continue
            points, edges = trial, edges + cycle
            break
        else:
            raise CertificateError("Could not place a {}-cycle disjoint from the others".format(size))
    return GeometricGraph(tuple(points), tuple(edges))


FIXTURE_DIR = os.path.join(os.path.dirname(__file__), 'fixtures')

FIXTURES = ('twin-peaks', 'face-counts', 'polygon-tight-base', 'cycles-tight-base')


def load_fixture(name: str) -> document.InstanceDocument:
    """Packaged instance document fixtures/<name>.json, with '-' written as '_' in the file name."""
    if name not in FIXTURES:
        raise ParameterRangeError("Unknown fixture {!r}; choose from {}".format(name, ', '.join(FIXTURES)))
    return document.read_document(os.path.join(FIXTURE_DIR, name.replace('-', '_') + '.json'))


def sole_partners(graph: GeometricGraph, vertex: int) -> Tuple[int, ...]:
    """Vertices that can be paired with vertex on its own, given no other pairs."""
    partners = set()
    for u, v in gm.compatible_candidates(graph, Matching(), checked=False):
        if vertex == u:
            partners.add(v)
        elif vertex == v:
            partners.add(u)
    return tuple(sorted(partners))


def gen_twin_peaks() -> ConstructionCertificate:
    """The twin-peaks gadget: a 12-vertex polygon whose two top vertices have a fixed partner.

    Each vertex tagged 'below' sits under its 'top' vertex and can see no other nonadjacent
    vertex, so every compatible perfect matching pairs them. The remaining squares can only pair
    among themselves or with the two bottom vertices.
    """
    fixture = load_fixture('twin-peaks')
    graph, metadata = fixture.graph, fixture.metadata
    roles = {role: tuple(vertices) for role, vertices in metadata[constants.META_ROLES].items()}
    for top, below in zip(roles['top'], roles['below']):
        if sole_partners(graph, below) != (top,):
            raise CertificateError("twin-peaks: vertex {} sees {}, expected only {}".format(
                below, sole_partners(graph, below), top))
    forced = tuple(tuple(sorted(pair)) for pair in metadata[constants.CLAIM_FORCED_PAIRS])
    certificate = _certify('twin-peaks', (), graph.points, graph.edges, fixture.matching.pairs, roles=roles,
                           **{constants.CLAIM_PERFECT_COUNT: metadata[constants.CLAIM_PERFECT_COUNT],
                              constants.CLAIM_FORCED_PAIRS: forced})
    logger.info("twin-peaks: {} perfect matchings, forced {}".format(
        certificate.claims[constants.CLAIM_PERFECT_COUNT], forced))
    return certificate


_CERTIFIED = {'convex-polygon': (gen_convex_polygon, 1),
              'points-tight': (gen_points_tight, 1),
              'matching-tight': (gen_matching_tight, 1),
              'cycles-tight': (gen_cycles_tight, 1),
              'polygon-tight': (gen_polygon_tight, 1),
              'lemma4': (gen_lemma4, 2),
              'twin-peaks': (gen_twin_peaks, 0)}

_RANDOM = {'random-polygon': random_polygon,
           'random-points': random_point_set,
           'random-segments': random_segments,
           'random-cycles': random_disjoint_cycles}


def generate(family: str, params: Tuple[int, ...], seed: int = 0) -> ConstructionCertificate:
    """Build one instance of a named family; random families take n and use seed."""
    if family in _CERTIFIED:
        generator, arity = _CERTIFIED[family]
        if len(params) != arity:
            raise ParameterRangeError("{} takes {} parameter(s), got {}".format(family, arity, len(params)))
        return generator(*params)
    if family in _RANDOM:
        if len(params) != 1:
            raise ParameterRangeError("{} takes n, got {} parameter(s)".format(family, len(params)))
        graph = _RANDOM[family](params[0], seed)
        return verify_certificate(ConstructionCertificate(graph, Matching(), make_claims(graph, Matching(), None),
                                                          dict(), family, tuple(params)))
    raise ParameterRangeError("Unknown family {!r}; choose from {}".format(family, ', '.join(constants.FAMILIES)))
