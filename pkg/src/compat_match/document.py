"""
Instance documents: a geometric graph, an optional matching and free-form metadata as JSON.

Coordinates are written as [x, y] when both are integers and as
[x-numerator, x-denominator, y-numerator, y-denominator] otherwise, so rational values survive
a round trip exactly.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from tempfile import NamedTemporaryFile
from typing import Dict, List, Optional

from compat_match import constants
from compat_match.errors import CompatMatchError, DocumentError
from compat_match.geometry import Point
from compat_match.graph import GeometricGraph, Matching

logger = logging.getLogger('compat_match.document')


@dataclass(frozen=True)
class InstanceDocument:
    graph: GeometricGraph
    matching: Optional[Matching] = None
    metadata: Dict[str, object] = field(default_factory=dict)


def point_to_json(point: Point) -> List[int]:
    if point.x.denominator == 1 and point.y.denominator == 1:
        return [point.x.numerator, point.y.numerator]
    return [point.x.numerator, point.x.denominator, point.y.numerator, point.y.denominator]


def point_from_json(item) -> Point:
    if not isinstance(item, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in item):
        raise DocumentError("Point {!r} is not a list of integers".format(item))
    if len(item) == 2:
        return Point(item[0], item[1])
    if len(item) == 4:
        if item[1] <= 0 or item[3] <= 0:
            raise DocumentError("Point {!r} has a non-positive denominator".format(item))
        return Point(Fraction(item[0], item[1]), Fraction(item[2], item[3]))
    raise DocumentError("Point {!r} needs 2 or 4 integers".format(item))


def _pairs_from_json(items, n: int, what: str) -> List[tuple]:
    if not isinstance(items, list):
        raise DocumentError("{} must be a list of index pairs".format(what))
    pairs = []
    for item in items:
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)):
            raise DocumentError("{} entry {!r} is not an index pair".format(what, item))
        if not all(0 <= v < n for v in item):
            raise DocumentError("{} entry {!r} refers to a vertex outside 0..{}".format(what, item, n - 1))
        pairs.append(tuple(item))
    return pairs


def to_json(document: InstanceDocument) -> dict:
    content = {constants.DOC_FORMAT_VERSION: constants.FORMAT_VERSION,
               constants.DOC_POINTS: [point_to_json(p) for p in document.graph.points],
               constants.DOC_EDGES: [list(edge) for edge in document.graph.edges]}
    if document.matching is not None:
        content[constants.DOC_MATCHING] = [list(pair) for pair in document.matching]
    content[constants.DOC_METADATA] = dict(document.metadata)
    return content


def from_json(content) -> InstanceDocument:
    if not isinstance(content, dict):
        raise DocumentError("An instance document must be a JSON object")
    version = content.get(constants.DOC_FORMAT_VERSION)
    if version != constants.FORMAT_VERSION:
        raise DocumentError("Unsupported {} {!r}, expected {}".format(
            constants.DOC_FORMAT_VERSION, version, constants.FORMAT_VERSION))
    if constants.DOC_POINTS not in content or not isinstance(content[constants.DOC_POINTS], list):
        raise DocumentError("Document has no '{}' list".format(constants.DOC_POINTS))
    points = [point_from_json(item) for item in content[constants.DOC_POINTS]]
    edges = _pairs_from_json(content.get(constants.DOC_EDGES, []), len(points), constants.DOC_EDGES)
    metadata = content.get(constants.DOC_METADATA, dict())
    if not isinstance(metadata, dict):
        raise DocumentError("'{}' must be a JSON object".format(constants.DOC_METADATA))
    try:
        graph = GeometricGraph(tuple(points), tuple(edges))
        matching = None
        if constants.DOC_MATCHING in content:
            pairs = _pairs_from_json(content[constants.DOC_MATCHING], len(points), constants.DOC_MATCHING)
            matching = Matching(tuple(pairs))
    except CompatMatchError as err:
        raise DocumentError(str(err)) from err
    return InstanceDocument(graph, matching, metadata)


def dumps(document: InstanceDocument) -> str:
    """Canonical text: fixed key order, two-space indent, trailing newline."""
    return json.dumps(to_json(document), indent=2) + '\n'


def loads(text: str) -> InstanceDocument:
    try:
        content = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentError("Not valid JSON: {}".format(err)) from err
    return from_json(content)


def read_document(path: str) -> InstanceDocument:
    try:
        with open(path, 'r', encoding='utf-8') as document_file:
            text = document_file.read()
    except OSError as err:
        raise DocumentError("Cannot read {}: {}".format(path, err)) from err
    return loads(text)


def write_text(path: str, text: str):
    """Write through a temporary file in the target directory, then rename over path."""
    directory = os.path.dirname(os.path.abspath(path))
    with NamedTemporaryFile('w', encoding='utf-8', newline='\n', dir=directory, delete=False,
                            prefix='.', suffix='.tmp') as temporary:
        temporary.write(text)
        name = temporary.name
    try:
        os.replace(name, path)
    except OSError:
        os.unlink(name)
        raise
    logger.debug("Wrote {} ({} bytes)".format(path, len(text)))


def write_document(document: InstanceDocument, path: str):
    write_text(path, dumps(document))


def json_value(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    if isinstance(value, dict):
        return {str(k): json_value(v) for k, v in value.items()}
    return value


def from_certificate(certificate, seed: Optional[int] = None) -> InstanceDocument:
    """Document for a generated instance, its claims and roles carried in the metadata."""
    metadata = {constants.META_GENERATOR: certificate.generator,
                constants.META_PARAMS: list(certificate.params)}
    if seed is not None:
        metadata[constants.META_SEED] = seed
    metadata.update((key, json_value(value)) for key, value in certificate.claims.items())
    if certificate.roles:
        metadata[constants.META_ROLES] = json_value(certificate.roles)
    return InstanceDocument(certificate.graph, certificate.matching, metadata)
