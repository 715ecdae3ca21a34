"""SVG drawings of an instance: graph edges, matching edges and optionally the convex subdivision."""
import logging
from typing import Iterable, List, Optional, Tuple

from compat_match import config
from compat_match.analysis import SubdivisionReport
from compat_match.geometry import Point, bounding_box
from compat_match.graph import GeometricGraph, Matching

logger = logging.getLogger('compat_match.render')

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(size)d" height="%(size)d" viewBox="0 0 %(size)d %(size)d">
<rect x="0" y="0" width="%(size)d" height="%(size)d" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""


class Canvas(object):
    """Maps exact coordinates into a square view box, y axis pointing up."""
    def __init__(self, points: Iterable[Point], settings: Optional[dict] = None):
        self.settings = settings or config.svg_settings()
        self.size = int(self.settings['view_box'])
        points = list(points) or [Point(0, 0)]
        min_x, min_y, max_x, max_y = bounding_box(points)
        self.origin = (min_x, min_y)
        span = max(max_x - min_x, max_y - min_y)
        inner = self.size * (1 - 2 * float(self.settings['margin']))
        self.factor = inner / float(span) if span else 0.0
        # centre the drawing along the shorter side
        self.offset = (self.size - self.factor * float(max_x - min_x)) / 2, \
                      (self.size - self.factor * float(max_y - min_y)) / 2
        self.commands: List[str] = []

    def map(self, point: Point) -> Tuple[float, float]:
        x = self.offset[0] + self.factor * float(point.x - self.origin[0])
        y = self.size - (self.offset[1] + self.factor * float(point.y - self.origin[1]))
        return x, y

    def line(self, p: Point, q: Point, color: str, width: float = 1.5):
        (x1, y1), (x2, y2) = self.map(p), self.map(q)
        self.commands.append(
            '<line x1="%.3f" y1="%.3f" x2="%.3f" y2="%.3f" style="stroke:%s;stroke-width:%.1f"/>'
            % (x1, y1, x2, y2, color, width))

    def vertex(self, p: Point, filled: bool):
        x, y = self.map(p)
        fill = '#000000' if filled else '#ffffff'
        self.commands.append(
            '<circle cx="%.3f" cy="%.3f" r="%d" style="fill:%s;stroke:#000000;stroke-width:1.0"/>'
            % (x, y, int(self.settings['vertex_radius']), fill))

    def text(self) -> str:
        return PREAMBLE % {'size': self.size} + ''.join(command + '\n' for command in self.commands) + POSTAMBLE


def render_svg(graph: GeometricGraph, matching: Optional[Matching] = None,
               subdivision: Optional[SubdivisionReport] = None) -> str:
    """Deterministic SVG text: subdivision cuts gray, graph edges black, matching red, vertices on top."""
    matching = matching or Matching()
    points = list(graph.points)
    if subdivision is not None:
        points.extend(subdivision.D.points)
    canvas = Canvas(points)
    settings = canvas.settings
    if subdivision is not None:
        D = subdivision.D
        drawn = graph.edge_set | matching.pair_set
        for u, v in D.edges:
            if u < graph.n and v < graph.n and (u, v) in drawn:
                continue
            canvas.line(D.points[u], D.points[v], settings['subdivision_color'], 1.0)
    for u, v in graph.edges:
        canvas.line(graph.points[u], graph.points[v], settings['graph_color'])
    for u, v in matching:
        canvas.line(graph.points[u], graph.points[v], settings['matching_color'])
    for index, point in enumerate(graph.points):
        canvas.vertex(point, index in matching.vertices)
    logger.debug("Rendered {} vertices, {} edges, {} matching edges".format(graph.n, graph.m, len(matching)))
    return canvas.text()
