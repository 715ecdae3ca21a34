"""
Exact geometric predicates over rational coordinates.

Coordinates are ``fractions.Fraction`` values, which are always stored in lowest
terms with a positive denominator. Only float_orientation, kept as a cross-check, touches
floating point.
"""
import logging
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from functools import cmp_to_key
from math import lcm
from typing import List, NamedTuple, Sequence

import numpy as np

from compat_match.errors import CoincidentPointError, DegenerateSegmentError

logger = logging.getLogger('compat_match.geometry')


def coordinate(value) -> Fraction:
    """Coerce an int, Fraction, (numerator, denominator) pair or rational string to a Coordinate."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (tuple, list)):
        numerator, denominator = value
        if int(denominator) <= 0:
            raise ValueError("Coordinate denominator must be positive, got {}".format(denominator))
        return Fraction(int(numerator), int(denominator))
    if isinstance(value, float):
        raise TypeError("Floating point coordinates are not accepted; pass a Fraction or a string")
    return Fraction(value)


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'x', coordinate(self.x))
        object.__setattr__(self, 'y', coordinate(self.y))

    def __add__(self, other: 'Point') -> 'Point':
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: 'Point') -> 'Point':
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, factor) -> 'Point':
        factor = coordinate(factor)
        return Point(self.x * factor, self.y * factor)

    def __repr__(self):
        return "Point({}, {})".format(self.x, self.y)


def midpoint(p: Point, q: Point) -> Point:
    return Point((p.x + q.x) / 2, (p.y + q.y) / 2)


def lerp(p: Point, q: Point, t) -> Point:
    """Point p + t (q - p)."""
    t = coordinate(t)
    return Point(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))


def squared_distance(p: Point, q: Point) -> Fraction:
    dx = q.x - p.x
    dy = q.y - p.y
    return dx * dx + dy * dy


class Orientation(IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


class SegmentRelation(Enum):
    DISJOINT = 'disjoint'
    SHARE_ONE_ENDPOINT = 'share-one-endpoint'
    PROPER_CROSSING = 'proper-crossing'
    ENDPOINT_IN_INTERIOR = 'endpoint-in-interior'
    COLLINEAR_OVERLAP = 'collinear-overlap'
    IDENTICAL = 'identical'


# relations that two edges of a noncrossing drawing may have
NONCROSSING_RELATIONS = (SegmentRelation.DISJOINT, SegmentRelation.SHARE_ONE_ENDPOINT)


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """z component of (a - o) x (b - o)."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    det = cross(p, q, r)
    if det > 0:
        return Orientation.COUNTERCLOCKWISE
    if det < 0:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def float_orientation(p: Point, q: Point, r: Point) -> Orientation:
    """orientation() from a double precision determinant; agrees with it on small, well separated inputs."""
    det = np.linalg.det(np.array([[float(p.x), float(p.y), 1.0],
                                  [float(q.x), float(q.y), 1.0],
                                  [float(r.x), float(r.y), 1.0]]))
    return Orientation(int(np.sign(round(det, 9))))


def _within_box(a: Point, b: Point, p: Point) -> bool:
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def on_segment(a: Point, b: Point, p: Point) -> bool:
    """True iff p lies on the closed segment ab."""
    return orientation(a, b, p) == Orientation.COLLINEAR and _within_box(a, b, p)


def in_relative_interior(a: Point, b: Point, p: Point) -> bool:
    """True iff p lies on segment ab but is neither endpoint."""
    return p != a and p != b and on_segment(a, b, p)


def classify_segments(a: Point, b: Point, c: Point, d: Point) -> SegmentRelation:
    if a == b or c == d:
        raise DegenerateSegmentError("Degenerate segment: {} - {} vs {} - {}".format(a, b, c, d))
    if {a, b} == {c, d}:
        return SegmentRelation.IDENTICAL
    if (max(a.x, b.x) < min(c.x, d.x) or max(c.x, d.x) < min(a.x, b.x) or
            max(a.y, b.y) < min(c.y, d.y) or max(c.y, d.y) < min(a.y, b.y)):
        return SegmentRelation.DISJOINT

    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)

    if o1 == o2 == o3 == o4 == Orientation.COLLINEAR:
        # project onto the axis along which the common line is not constant
        if a.x != b.x:
            key = lambda p: p.x
        else:
            key = lambda p: p.y
        low = max(min(key(a), key(b)), min(key(c), key(d)))
        high = min(max(key(a), key(b)), max(key(c), key(d)))
        if low > high:
            return SegmentRelation.DISJOINT
        if low == high:
            return SegmentRelation.SHARE_ONE_ENDPOINT
        return SegmentRelation.COLLINEAR_OVERLAP

    if a in (c, d) or b in (c, d):
        return SegmentRelation.SHARE_ONE_ENDPOINT

    if o1 * o2 < 0 and o3 * o4 < 0:
        return SegmentRelation.PROPER_CROSSING

    if ((o1 == Orientation.COLLINEAR and _within_box(a, b, c)) or
            (o2 == Orientation.COLLINEAR and _within_box(a, b, d)) or
            (o3 == Orientation.COLLINEAR and _within_box(c, d, a)) or
            (o4 == Orientation.COLLINEAR and _within_box(c, d, b))):
        return SegmentRelation.ENDPOINT_IN_INTERIOR

    return SegmentRelation.DISJOINT


def _line_key(origin: Point, other: Point):
    dx = other.x - origin.x
    dy = other.y - origin.y
    if dx == 0:
        return None
    return Fraction(dy) / dx


def is_general_position(points: Sequence[Point]) -> bool:
    """True iff the points are pairwise distinct and no three are collinear."""
    if len(set(points)) != len(points):
        return False
    # a collinear triple shows up as two later points on one line through an earlier point
    for i, origin in enumerate(points):
        seen = set()
        for other in points[i + 1:]:
            key = _line_key(origin, other)
            if key in seen:
                return False
            seen.add(key)
    return True


def find_collinear_triple(points: Sequence[Point]):
    """Index triple (i, j, k) of a collinear or coincident configuration, or None."""
    for i, origin in enumerate(points):
        seen = dict()
        for j in range(i + 1, len(points)):
            if points[j] == origin:
                return (i, j, j)
            key = _line_key(origin, points[j])
            if key in seen:
                return (i, seen[key], j)
            seen[key] = j
    return None


def _half_plane(direction: Point) -> int:
    """0 for directions in [0, pi), 1 for [pi, 2pi), measured from the positive x axis."""
    if direction.y > 0 or (direction.y == 0 and direction.x > 0):
        return 0
    return 1


def compare_directions(u: Point, v: Point) -> int:
    """Counterclockwise order of two nonzero direction vectors starting at the positive x axis."""
    half_u = _half_plane(u)
    half_v = _half_plane(v)
    if half_u != half_v:
        return half_u - half_v
    det = u.x * v.y - u.y * v.x
    if det > 0:
        return -1
    if det < 0:
        return 1
    return 0


def sort_radially(center: Point, neighbors: Sequence[Point]) -> List[int]:
    """Indices of neighbors in counterclockwise order around center, starting at the positive x axis."""
    directions = []
    for neighbor in neighbors:
        if neighbor == center:
            raise CoincidentPointError("Neighbor {} coincides with center".format(neighbor))
        directions.append(neighbor - center)
    return sorted(range(len(neighbors)),
                  key=cmp_to_key(lambda i, j: compare_directions(directions[i], directions[j])))


def is_reflex_turn(incoming: Point, outgoing: Point) -> bool:
    """True iff rotating counterclockwise from direction incoming to direction outgoing sweeps more than pi.

    Equal directions sweep a full turn.
    """
    det = incoming.x * outgoing.y - incoming.y * outgoing.x
    if det < 0:
        return True
    if det == 0:
        # opposite directions sweep exactly pi, equal directions sweep 2 pi
        return incoming.x * outgoing.x + incoming.y * outgoing.y > 0
    return False


def bounding_box(points: Sequence[Point]):
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return min(xs), min(ys), max(xs), max(ys)


class LatticePoint(NamedTuple):
    """Integer stand-in for a Point, used to run the same predicates with machine integers."""
    x: int
    y: int

    def __sub__(self, other):
        return LatticePoint(self.x - other.x, self.y - other.y)


def to_lattice(points: Sequence[Point]) -> List[LatticePoint]:
    """Scale all points by the least common denominator of their coordinates.

    Orientation, containment and radial order are invariant under this scaling.
    """
    scale = 1
    for p in points:
        scale = lcm(scale, p.x.denominator, p.y.denominator)
    return [LatticePoint(int(p.x * scale), int(p.y * scale)) for p in points]
