"""
Noncrossing geometric graphs, matchings over them, and the plane structure of their drawings.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from compat_match import geometry
from compat_match.errors import GeneralPositionError, IncompatibleMatchingError
from compat_match.geometry import NONCROSSING_RELATIONS, Point

logger = logging.getLogger('compat_match.graph')

Pair = Tuple[int, int]


def normalize_pair(u: int, v: int) -> Pair:
    u = int(u)
    v = int(v)
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class GeometricGraph:
    """Indexed points and straight-line edges; edges are kept as sorted index pairs."""
    points: Tuple[Point, ...]
    edges: Tuple[Pair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple(p if isinstance(p, Point) else Point(*p) for p in self.points))
        object.__setattr__(self, 'edges', tuple(sorted(normalize_pair(u, v) for u, v in self.edges)))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> FrozenSet[Pair]:
        return frozenset(self.edges)

    @cached_property
    def lattice(self) -> List[geometry.LatticePoint]:
        return geometry.to_lattice(self.points)

    @cached_property
    def general_position(self) -> bool:
        return geometry.is_general_position(self.lattice)

    @cached_property
    def adjacency(self) -> Dict[int, List[int]]:
        adjacency = {u: [] for u in range(self.n)}
        for u, v in self.edge_set:
            adjacency[u].append(v)
            adjacency[v].append(u)
        for u in adjacency:
            adjacency[u].sort()
        return adjacency

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def degrees(self) -> List[int]:
        return [self.degree(u) for u in range(self.n)]

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self.n))
        nx_graph.add_edges_from(self.edge_set)
        return nx_graph

    @cached_property
    def components(self) -> List[List[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        return sorted(sorted(component) for component in nx.connected_components(self.to_networkx()))

    @cached_property
    def rotation(self) -> Dict[int, List[int]]:
        """Neighbors of every vertex in counterclockwise order from the positive x axis."""
        lattice = self.lattice
        rotation = dict()
        for u, neighbors in self.adjacency.items():
            order = geometry.sort_radially(lattice[u], [lattice[v] for v in neighbors])
            rotation[u] = [neighbors[i] for i in order]
        return rotation

    def segment(self, pair: Pair):
        return self.lattice[pair[0]], self.lattice[pair[1]]

    def require_general_position(self):
        if not self.general_position:
            triple = geometry.find_collinear_triple(self.lattice)
            raise GeneralPositionError("Vertices {} are collinear or coincident".format(triple))

    @cached_property
    def free_pairs(self) -> Tuple[Pair, ...]:
        """Vertex pairs whose segment avoids the drawing of the graph: not an edge, crossing no edge,
        containing no vertex. These are the pairs a vertex 'sees' in the polygon sense."""
        free = []
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if self._segment_avoids_graph(u, v):
                    free.append((u, v))
        logger.debug("{} of {} vertex pairs are free".format(len(free), self.n * (self.n - 1) // 2))
        return tuple(free)

    @cached_property
    def free_pair_set(self) -> FrozenSet[Pair]:
        return frozenset(self.free_pairs)

    def _segment_avoids_graph(self, u: int, v: int) -> bool:
        if (u, v) in self.edge_set:
            return False
        lattice = self.lattice
        a, b = lattice[u], lattice[v]
        if a == b:
            return False
        for edge in self.edges:
            c, d = lattice[edge[0]], lattice[edge[1]]
            if geometry.classify_segments(a, b, c, d) not in NONCROSSING_RELATIONS:
                return False
        if not self.general_position:
            for w, p in enumerate(lattice):
                if w != u and w != v and geometry.in_relative_interior(a, b, p):
                    return False
        return True


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint index pairs, kept sorted (the canonical form)."""
    pairs: Tuple[Pair, ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted(set(normalize_pair(u, v) for u, v in self.pairs)))
        seen = set()
        for u, v in pairs:
            if u == v:
                raise IncompatibleMatchingError("Matching pair ({}, {}) is a loop".format(u, v), pair=(u, v))
            if u in seen or v in seen:
                raise IncompatibleMatchingError("Matching pairs share vertex in ({}, {})".format(u, v), pair=(u, v))
            seen.update((u, v))
        object.__setattr__(self, 'pairs', pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair):
        return normalize_pair(*pair) in self.pair_set

    @cached_property
    def pair_set(self) -> FrozenSet[Pair]:
        return frozenset(self.pairs)

    @cached_property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(v for pair in self.pairs for v in pair)

    def unmatched(self, n: int) -> List[int]:
        return [u for u in range(n) if u not in self.vertices]

    def add(self, u: int, v: int) -> 'Matching':
        return Matching(self.pairs + (normalize_pair(u, v),))

    def without(self, pair: Pair) -> 'Matching':
        pair = normalize_pair(*pair)
        return Matching(tuple(p for p in self.pairs if p != pair))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = ''
    pair: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def validate_graph(graph: GeometricGraph) -> ValidationReport:
    """Check index validity, distinct points, distinct edges, noncrossing edges and
    that no edge passes through a vertex."""
    n = graph.n
    for u, v in graph.edges:
        if not (0 <= u < n and 0 <= v < n):
            return ValidationReport(False, "edge ({}, {}) has an index outside 0..{}".format(u, v, n - 1), (u, v))
        if u == v:
            return ValidationReport(False, "edge ({}, {}) is a loop".format(u, v), (u, v))
    seen_points = dict()
    for index, point in enumerate(graph.points):
        if point in seen_points:
            return ValidationReport(False, "points {} and {} coincide".format(seen_points[point], index),
                                    (seen_points[point], index))
        seen_points[point] = index
    for k in range(1, len(graph.edges)):
        if graph.edges[k] == graph.edges[k - 1]:
            return ValidationReport(False, "edge {} is listed twice".format(graph.edges[k]), (graph.edges[k],) * 2)
    lattice = graph.lattice
    for i, first in enumerate(graph.edges):
        a, b = lattice[first[0]], lattice[first[1]]
        for second in graph.edges[i + 1:]:
            relation = geometry.classify_segments(a, b, lattice[second[0]], lattice[second[1]])
            if relation not in NONCROSSING_RELATIONS:
                return ValidationReport(False, "edges {} and {} are in relation {}".format(
                    first, second, relation.value), (first, second))
        for w, p in enumerate(lattice):
            if geometry.in_relative_interior(a, b, p):
                return ValidationReport(False, "vertex {} lies inside edge {}".format(w, first), (first, w))
    return ValidationReport(True)


def is_compatible_edge(graph: GeometricGraph, matching: Matching, u: int, v: int) -> bool:
    if not (0 <= u < graph.n and 0 <= v < graph.n) or u == v:
        raise ValueError("({}, {}) is not a valid vertex pair for a graph on {} vertices".format(u, v, graph.n))
    pair = normalize_pair(u, v)
    if u in matching.vertices or v in matching.vertices:
        return False
    if not graph._segment_avoids_graph(*pair):
        return False
    return _avoids_matching(graph, matching, pair)


def _avoids_matching(graph: GeometricGraph, matching: Iterable[Pair], pair: Pair) -> bool:
    a, b = graph.segment(pair)
    for other in matching:
        if other == pair:
            continue
        c, d = graph.segment(other)
        if geometry.classify_segments(a, b, c, d) not in NONCROSSING_RELATIONS:
            return False
    return True


def find_incompatibility(graph: GeometricGraph, matching: Matching):
    """The first matching pair that breaks compatibility with a short reason, or None."""
    for pair in matching:
        if not (0 <= pair[0] < graph.n and 0 <= pair[1] < graph.n):
            return pair, "index outside the graph"
        if pair in graph.edge_set:
            return pair, "already an edge of the graph"
        if not graph._segment_avoids_graph(*pair):
            return pair, "crosses or touches the graph"
    pairs = matching.pairs
    for i, first in enumerate(pairs):
        a, b = graph.segment(first)
        for second in pairs[i + 1:]:
            c, d = graph.segment(second)
            if geometry.classify_segments(a, b, c, d) not in NONCROSSING_RELATIONS:
                return first, "crosses matching pair {}".format(second)
    return None


def is_compatible_matching(graph: GeometricGraph, matching: Matching) -> bool:
    return find_incompatibility(graph, matching) is None


def require_compatible(graph: GeometricGraph, matching: Matching):
    problem = find_incompatibility(graph, matching)
    if problem is not None:
        pair, reason = problem
        raise IncompatibleMatchingError("Matching pair {} is not compatible: {}".format(pair, reason), pair=pair)


def compatible_candidates(graph: GeometricGraph, matching: Matching, checked: bool = True) -> List[Pair]:
    """Sorted pairs that can be added to the matching; empty iff the matching is maximal."""
    if checked:
        require_compatible(graph, matching)
    lattice = graph.lattice
    obstacles = [(lattice[u], lattice[v]) for u, v in graph.edges + matching.pairs]
    free_vertices = matching.unmatched(graph.n)
    candidates = []
    for i, u in enumerate(free_vertices):
        for v in free_vertices[i + 1:]:
            if (u, v) in graph.edge_set:
                continue
            a, b = lattice[u], lattice[v]
            blocked = False
            for k, (c, d) in enumerate(obstacles):
                if geometry.classify_segments(a, b, c, d) not in NONCROSSING_RELATIONS:
                    # neighbouring pairs tend to hit the same obstacle
                    obstacles.insert(0, obstacles.pop(k))
                    blocked = True
                    break
            if not blocked and not graph.general_position:
                blocked = any(geometry.in_relative_interior(a, b, p)
                              for w, p in enumerate(lattice) if w != u and w != v)
            if not blocked:
                candidates.append((u, v))
    return candidates


def is_maximal(graph: GeometricGraph, matching: Matching) -> bool:
    if not is_compatible_matching(graph, matching):
        return False
    return not compatible_candidates(graph, matching, checked=False)


def sees(graph: GeometricGraph, u: int, v: int) -> bool:
    """True iff the relative interior of segment uv avoids the drawing of the graph."""
    return graph._segment_avoids_graph(*normalize_pair(u, v))


def union_graph(graph: GeometricGraph, matching: Matching) -> GeometricGraph:
    require_compatible(graph, matching)
    return GeometricGraph(graph.points, graph.edges + matching.pairs)


@dataclass(frozen=True)
class ReflexInfo:
    """Reflex angles of a drawing; an angle is (first, second), the ccw sweep from edge u-first to u-second."""
    vertices: FrozenSet[int]
    flags: Tuple[bool, ...]
    angles: Dict[int, Tuple[Tuple[int, int], ...]] = field(default_factory=dict)


def reflex_vertices(graph: GeometricGraph) -> ReflexInfo:
    graph.require_general_position()
    lattice = graph.lattice
    flags = []
    angles = dict()
    for u in range(graph.n):
        ring = graph.rotation[u]
        reflex = []
        if len(ring) == 1:
            reflex.append((ring[0], ring[0]))
        elif len(ring) >= 2:
            for k, first in enumerate(ring):
                second = ring[(k + 1) % len(ring)]
                if geometry.is_reflex_turn(lattice[first] - lattice[u], lattice[second] - lattice[u]):
                    reflex.append((first, second))
            if len(ring) == 2 and len(reflex) != 1:
                raise AssertionError("degree-2 vertex {} has {} reflex angles".format(u, len(reflex)))
        flags.append(bool(reflex))
        if reflex:
            angles[u] = tuple(reflex)
    return ReflexInfo(frozenset(u for u, flag in enumerate(flags) if flag), tuple(flags), angles)


@dataclass(frozen=True)
class Face:
    """A face of a plane straight-line drawing.

    boundary_cycles holds the face's own outer walk first (absent for the unbounded face),
    then the outer walks of components nested in it; an isolated vertex is a walk of length one.
    """
    boundary_cycles: Tuple[Tuple[int, ...], ...]
    is_outer: bool = False

    @cached_property
    def incident_vertices(self) -> FrozenSet[int]:
        return frozenset(v for walk in self.boundary_cycles for v in walk)

    @property
    def outer_walk(self) -> Optional[Tuple[int, ...]]:
        if self.is_outer:
            return None
        return self.boundary_cycles[0]

    def is_triangle(self) -> bool:
        """Bounded face bounded by a single 3-cycle with nothing nested inside."""
        return (not self.is_outer and len(self.boundary_cycles) == 1
                and len(self.boundary_cycles[0]) == 3)

    def half_edges(self) -> List[Pair]:
        directed = []
        for walk in self.boundary_cycles:
            if len(walk) < 2:
                continue
            for k, u in enumerate(walk):
                directed.append((u, walk[(k + 1) % len(walk)]))
        return directed


def _twice_area(lattice, walk) -> int:
    total = 0
    for k, u in enumerate(walk):
        p = lattice[u]
        q = lattice[walk[(k + 1) % len(walk)]]
        total += p.x * q.y - q.x * p.y
    return total


def _contains(lattice, walk, point) -> bool:
    """Crossing-number test; point is never on the walk."""
    inside = False
    for k, u in enumerate(walk):
        p = lattice[u]
        q = lattice[walk[(k + 1) % len(walk)]]
        if (p.y > point.y) != (q.y > point.y):
            # sign of the x offset of the crossing relative to point, kept in integers
            lhs = (point.x - p.x) * (q.y - p.y)
            rhs = (q.x - p.x) * (point.y - p.y)
            if (q.y - p.y > 0 and lhs < rhs) or (q.y - p.y < 0 and lhs > rhs):
                inside = not inside
    return inside


def trace_walks(graph: GeometricGraph):
    """Assign every directed edge to a boundary walk; faces lie to the left of their walks."""
    rotation = graph.rotation
    position = {u: {v: k for k, v in enumerate(ring)} for u, ring in rotation.items()}
    walk_of = dict()
    walks = []
    for u in range(graph.n):
        for v in rotation[u]:
            if (u, v) in walk_of:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in walk_of:
                walk_of[(a, b)] = len(walks)
                walk.append(a)
                ring = rotation[b]
                # the clockwise successor of a around b
                c = ring[(position[b][a] - 1) % len(ring)]
                a, b = b, c
            walks.append(tuple(walk))
    return walk_of, walks


def faces(graph: GeometricGraph, require_general_position: bool = True) -> List[Face]:
    """Faces of the drawing with nested components and isolated vertices attached to the face containing them.

    Bounded faces come first, ordered by their outer walk; the unbounded face is last.
    """
    if require_general_position:
        graph.require_general_position()
    lattice = graph.lattice
    walk_of, walks = trace_walks(graph)

    component_outer = []
    for component in graph.components:
        anchor = min(component, key=lambda u: (lattice[u].y, lattice[u].x))
        ring = graph.rotation[anchor]
        if not ring:
            component_outer.append(((anchor,), anchor, None))
        else:
            index = walk_of[(anchor, ring[-1])]
            component_outer.append((walks[index], anchor, index))

    outer_indices = {index for _, _, index in component_outer if index is not None}
    bounded = [(index, walk) for index, walk in enumerate(walks) if index not in outer_indices]
    areas = {index: _twice_area(lattice, walk) for index, walk in bounded}

    nested = {index: [] for index, _ in bounded}
    top_level = []
    for walk, anchor, own in component_outer:
        point = lattice[anchor]
        host = None
        for index, bounded_walk in bounded:
            if anchor in bounded_walk:
                continue
            if _contains(lattice, bounded_walk, point):
                if host is None or areas[index] < areas[host]:
                    host = index
        if host is None:
            top_level.append(walk)
        else:
            nested[host].append(walk)

    result = [Face(tuple([walk] + sorted(nested[index])), False)
              for index, walk in sorted(bounded, key=lambda item: item[1])]
    result.append(Face(tuple(sorted(top_level)), True))
    expected = graph.m - graph.n + 1 + len(graph.components)
    if len(result) != expected:
        raise AssertionError("face count {} differs from Euler count {}".format(len(result), expected))
    return result


def face_incidences(graph: GeometricGraph, face_list: Sequence[Face]) -> Dict[Pair, List[int]]:
    """For every edge, the indices of the faces whose boundary contains it (twice for a bridge)."""
    incidences = {edge: [] for edge in graph.edge_set}
    for index, face in enumerate(face_list):
        for u, v in face.half_edges():
            incidences[normalize_pair(u, v)].append(index)
    return incidences
