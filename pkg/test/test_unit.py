import os
import sys
import json
from fractions import Fraction
from io import StringIO
from tempfile import TemporaryDirectory
from unittest import TestCase, mock

import numpy as np

import cmatch
from compat_match import analysis, config, constants, constructions, document, geometry, solvers
from compat_match import graph as gm
from compat_match.errors import (CertificateError, DocumentError, IncompatibleMatchingError,
                                 NotMaximalError, ParameterRangeError)
from compat_match.geometry import Point, SegmentRelation
from compat_match.graph import GeometricGraph, Matching
from compat_match.render import render_svg

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def square_polygon() -> GeometricGraph:
    return GeometricGraph(tuple(SQUARE), ((0, 1), (1, 2), (2, 3), (3, 0)))


def triangle() -> GeometricGraph:
    return GeometricGraph(((0, 0), (4, 0), (1, 3)), ((0, 1), (1, 2), (0, 2)))


def random_triples(count: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    for values in rng.integers(-50, 50, size=(count, 6)):
        p, q, r = (Point(int(values[j]), int(values[j + 1])) for j in (0, 2, 4))
        if p != q and q != r and p != r:
            yield p, q, r


class test_geometry(TestCase):
    def test_orientation(self):
        self.assertEqual(geometry.orientation(Point(0, 0), Point(1, 0), Point(0, 1)),
                         geometry.Orientation.COUNTERCLOCKWISE)
        self.assertEqual(geometry.orientation(Point(0, 0), Point(0, 1), Point(1, 0)),
                         geometry.Orientation.CLOCKWISE)
        self.assertEqual(geometry.orientation(Point(0, 0), Point(1, 1), Point(3, 3)),
                         geometry.Orientation.COLLINEAR)

    def test_classify_segments(self):
        classify = geometry.classify_segments
        self.assertEqual(classify(Point(0, 0), Point(2, 2), Point(0, 2), Point(2, 0)), SegmentRelation.PROPER_CROSSING)
        self.assertEqual(classify(Point(0, 0), Point(1, 0), Point(1, 0), Point(1, 1)),
                         SegmentRelation.SHARE_ONE_ENDPOINT)
        self.assertEqual(classify(Point(0, 0), Point(1, 0), Point(0, 1), Point(1, 1)), SegmentRelation.DISJOINT)
        self.assertEqual(classify(Point(0, 0), Point(2, 0), Point(1, 0), Point(1, 1)),
                         SegmentRelation.ENDPOINT_IN_INTERIOR)
        self.assertEqual(classify(Point(0, 0), Point(2, 0), Point(1, 0), Point(3, 0)),
                         SegmentRelation.COLLINEAR_OVERLAP)

    def test_exact_rationals(self):
        p = Point(Fraction(1, 3), Fraction(2, 7))
        self.assertEqual(p.x * 3, 1)
        self.assertTrue(geometry.is_general_position([Point(0, 0), Point(1, 0), Point(0, 1)]))
        self.assertFalse(geometry.is_general_position([Point(0, 0), Point(1, 1), Point(Fraction(1, 2), Fraction(1, 2))]))

    def test_orientation_antisymmetry(self):
        for p, q, r in random_triples(200):
            turn = geometry.orientation(p, q, r)
            self.assertEqual(geometry.orientation(q, p, r), -turn)
            self.assertEqual(geometry.orientation(p, r, q), -turn)
            self.assertEqual(geometry.orientation(q, r, p), turn)

    def test_float_orientation_agrees(self):
        for p, q, r in random_triples(200):
            self.assertEqual(geometry.float_orientation(p, q, r), geometry.orientation(p, q, r))
        self.assertEqual(geometry.float_orientation(Point(0, 0), Point(1, 1), Point(3, 3)),
                         geometry.Orientation.COLLINEAR)

    def test_classify_symmetry(self):
        classify = geometry.classify_segments
        segments = [(Point(0, 0), Point(2, 2)), (Point(0, 2), Point(2, 0)), (Point(1, 0), Point(1, 1)),
                    (Point(0, 0), Point(2, 0)), (Point(1, 0), Point(3, 0)), (Point(2, 2), Point(3, 5))]
        segments += [(p, q) for p, q, _ in random_triples(40)]
        for a, b in segments:
            for c, d in segments:
                relation = classify(a, b, c, d)
                self.assertEqual(classify(c, d, a, b), relation)
                self.assertEqual(classify(b, a, d, c), relation)


class test_graph(TestCase):
    def test_validate_rejects_crossing_edges(self):
        crossing = GeometricGraph(tuple(SQUARE), ((0, 2), (1, 3)))
        report = gm.validate_graph(crossing)
        self.assertFalse(report)
        self.assertTrue(gm.validate_graph(square_polygon()))

    def test_matching_rejects_shared_vertex(self):
        with self.assertRaises(IncompatibleMatchingError):
            Matching(((0, 1), (1, 2)))

    def test_square_candidates(self):
        square = square_polygon()
        self.assertEqual(gm.compatible_candidates(square, Matching()), [(0, 2), (1, 3)])
        self.assertTrue(gm.is_maximal(square, Matching(((0, 2),))))
        self.assertFalse(gm.is_maximal(square, Matching()))
        self.assertFalse(gm.is_compatible_matching(square, Matching(((0, 1),))))

    def test_faces(self):
        square = square_polygon()
        self.assertEqual(len(gm.faces(square)), 2)
        self.assertEqual(len(gm.faces(gm.union_graph(square, Matching(((0, 2),))))), 3)

    def test_sees(self):
        square = square_polygon()
        self.assertTrue(gm.sees(square, 0, 2))
        self.assertFalse(gm.sees(square, 0, 1))


class test_analysis(TestCase):
    def test_square_with_diagonal(self):
        square, diagonal = square_polygon(), Matching(((0, 2),))
        parameters = analysis.lemma1_parameters(square, diagonal)
        self.assertEqual(parameters.as_dict(), {'i': 0, 'delta': 0, 'sigma': 0, 'nu': 4, 'r_u': 2, 'r_m': 2})
        check = analysis.lemma1_check(square, diagonal, parameters)
        self.assertEqual((check.lhs, check.rhs, check.slack, check.holds), (0, 2, 2, True))

    def test_not_maximal(self):
        with self.assertRaises(NotMaximalError):
            analysis.lemma1_check(square_polygon(), Matching())

    def test_regularity_and_bounds(self):
        points = GeometricGraph(tuple((i, i * i) for i in range(7)))
        self.assertEqual(analysis.regularity_class(points), constants.CLASS_POINT_SET)
        self.assertEqual(analysis.lower_bound(points).lower_bound, 2)
        self.assertEqual(analysis.regularity_class(square_polygon()), constants.CLASS_POLYGON)
        self.assertEqual(analysis.lower_bound(square_polygon()).lower_bound, Fraction(4, 7))
        self.assertEqual(analysis.regularity_class(triangle()), constants.CLASS_POLYGON)
        self.assertIsNone(analysis.lower_bound(triangle()).lower_bound)
        report = analysis.bound_report(points, 1)
        self.assertFalse(report.satisfied)
        self.assertEqual(report.slack, -1)

    def test_polygon_face_facts(self):
        facts = analysis.polygon_face_facts(square_polygon(), Matching(((0, 2),)))
        self.assertTrue(all(facts.values()))

    def test_one_regular_reflex_counts(self):
        # every vertex of a perfect matching graph has degree 1 in G and so a reflex angle in G+M
        for seed in range(4):
            graph = constructions.random_segments(6, seed)
            for matching in solvers.enumerate_maximal(graph):
                parameters = analysis.lemma1_parameters(graph, matching)
                self.assertEqual(parameters.r_u + parameters.r_m, graph.n)
                self.assertEqual(parameters.delta, 0)

    def test_two_regular_reflex_counts(self):
        for seed in range(4):
            graph = constructions.random_disjoint_cycles(7, seed)
            for matching in solvers.enumerate_maximal(graph):
                parameters = analysis.lemma1_parameters(graph, matching)
                unmatched = graph.n - 2 * len(matching)
                self.assertEqual(parameters.r_u, unmatched)
                self.assertLessEqual(3 * parameters.delta, unmatched)

    def test_subdivision(self):
        report = analysis.build_convex_subdivision(square_polygon(), Matching(((0, 2),)))
        self.assertTrue(report.ok, report.checks)
        self.assertEqual(report.F(4), 0)
        self.assertTrue(analysis.lemma1_chain(square_polygon(), Matching(((0, 2),)), report)['holds'])


class test_solvers(TestCase):
    def test_square(self):
        square = square_polygon()
        result = solvers.min_maximal(square)
        self.assertEqual(result.objective, 1)
        self.assertEqual(result.status, constants.STATUS_OPTIMAL)
        self.assertEqual(solvers.max_compatible(square).objective, 1)
        self.assertEqual(len(solvers.enumerate_maximal(square)), 2)

    def test_triangle(self):
        self.assertEqual(len(solvers.greedy_maximal(triangle())), 0)

    def test_perfect(self):
        self.assertEqual(solvers.has_perfect_compatible(square_polygon()).status, constants.STATUS_INFEASIBLE)
        points = GeometricGraph(tuple(SQUARE))
        result = solvers.has_perfect_compatible(points)
        self.assertEqual(result.status, constants.STATUS_OPTIMAL)
        self.assertEqual(len(result.matching), 2)
        # two pairs of opposite sides; the diagonals cross
        self.assertEqual(solvers.count_perfect_compatible(points), 2)

    def test_max_compatible_budget(self):
        hexagon = constructions.generate('convex-polygon', (6,)).graph
        result = solvers.max_compatible(hexagon, node_budget=1)
        self.assertEqual(result.status, constants.STATUS_BUDGET)
        # the greedy incumbent comes back
        self.assertTrue(gm.is_maximal(hexagon, result.matching))
        self.assertLessEqual(len(result.matching), 2)
        self.assertEqual(solvers.max_compatible(hexagon).status, constants.STATUS_OPTIMAL)

    def test_odd_n_is_infeasible(self):
        self.assertEqual(solvers.has_perfect_compatible(triangle()).status, constants.STATUS_INFEASIBLE)

    def test_greedy_strategy(self):
        with self.assertRaises(ParameterRangeError):
            solvers.GreedyStrategy('alphabetical')
        points = GeometricGraph(tuple((i, i * i) for i in range(6)))
        for ordering in constants.GREEDY_ORDERINGS:
            matching = solvers.greedy_maximal(points, solvers.GreedyStrategy(ordering, 3))
            self.assertTrue(gm.is_maximal(points, matching))


class test_constructions(TestCase):
    def test_points_tight(self):
        certificate = constructions.gen_points_tight(2)
        self.assertEqual(certificate.graph.n, 7)
        self.assertEqual(len(certificate.matching), 2)
        self.assertTrue(certificate.claims[constants.CLAIM_MAXIMAL])

    def test_polygon_tight(self):
        certificate = constructions.gen_polygon_tight(1)
        self.assertEqual(certificate.graph.n, 14)
        self.assertEqual(len(certificate.matching), 2)
        self.assertTrue(gm.is_maximal(certificate.graph, certificate.matching))
        self.assertEqual(analysis.lower_bound(certificate.graph).lower_bound, 2)
        self.assertEqual(len(certificate.roles['detours']), 2)
        self.assertEqual(certificate.roles['door-end'], (13,))

    def test_parameter_ranges(self):
        with self.assertRaises(ParameterRangeError):
            constructions.generate('convex-polygon', (2,))
        with self.assertRaises(ParameterRangeError):
            constructions.generate('matching-tight', (1,))
        with self.assertRaises(ParameterRangeError):
            constructions.generate('points-tight', (1, 2))
        with self.assertRaises(ParameterRangeError):
            constructions.generate('spiral', (3,))

    def test_false_claim_is_rejected(self):
        certificate = constructions.gen_points_tight(1)
        claims = dict(certificate.claims)
        claims[constants.CLAIM_MATCHING_SIZE] = 2
        with self.assertRaises(CertificateError):
            constructions.verify_certificate(constructions.ConstructionCertificate(
                certificate.graph, certificate.matching, claims, generator='points-tight', params=(1,)))

    def test_random_families_are_seeded(self):
        first = constructions.generate('random-polygon', (8,), 5)
        second = constructions.generate('random-polygon', (8,), 5)
        self.assertEqual(first.graph, second.graph)
        self.assertEqual(first.graph.n, 8)
        self.assertEqual(analysis.regularity_class(first.graph), constants.CLASS_POLYGON)
        segments = constructions.generate('random-segments', (6,), 2).graph
        self.assertEqual(analysis.regularity_class(segments), constants.CLASS_MATCHING)


class test_document(TestCase):
    def test_round_trip(self):
        graph = GeometricGraph(((0, 0), (Fraction(1, 2), 3), (2, Fraction(-5, 3))), ((0, 1),))
        instance = document.InstanceDocument(graph, Matching(((1, 2),)), {'note': 'x'})
        text = document.dumps(instance)
        content = json.loads(text)
        self.assertEqual(content['points'], [[0, 0], [1, 2, 3, 1], [2, 1, -5, 3]])
        again = document.loads(text)
        self.assertEqual(again.graph, graph)
        self.assertEqual(again.matching, instance.matching)
        self.assertEqual(document.dumps(again), text)

    def test_bad_documents(self):
        with self.assertRaises(DocumentError):
            document.loads('{')
        with self.assertRaises(DocumentError):
            document.loads(json.dumps({'format-version': 2, 'points': []}))
        with self.assertRaises(DocumentError):
            document.loads(json.dumps({'format-version': 1, 'points': [[0, 0], [1, 1]], 'edges': [[0, 5]]}))
        with self.assertRaises(DocumentError):
            document.loads(json.dumps({'format-version': 1, 'points': [[0, 1, 0, 0]]}))

    def test_write_is_atomic(self):
        with TemporaryDirectory() as directory:
            path = os.path.join(directory, 'square.json')
            document.write_document(document.InstanceDocument(square_polygon()), path)
            self.assertEqual(os.listdir(directory), ['square.json'])
            self.assertEqual(document.read_document(path).graph, square_polygon())


class test_render(TestCase):
    def test_square_with_diagonal(self):
        svg = render_svg(square_polygon(), Matching(((0, 2),)))
        self.assertEqual(svg.count('stroke:#000000;stroke-width:1.5'), 4)
        self.assertEqual(svg.count('stroke:#d62728'), 1)
        self.assertEqual(svg.count('<circle'), 4)
        self.assertEqual(svg.count('fill:#000000;'), 2)
        self.assertEqual(svg, render_svg(square_polygon(), Matching(((0, 2),))))

    def test_subdivision_in_gray(self):
        square, diagonal = square_polygon(), Matching(((0, 2),))
        report = analysis.build_convex_subdivision(square, diagonal)
        svg = render_svg(square, diagonal, report)
        self.assertGreater(svg.count('stroke:#999999'), 0)


class test_config(TestCase):
    def test_budget_override(self):
        with mock.patch.dict(os.environ, {constants.BUDGET_ENV_VAR: '1234'}):
            self.assertEqual(config.default_budget(), 1234)
        with mock.patch.dict(os.environ, {constants.BUDGET_ENV_VAR: 'lots'}):
            self.assertEqual(config.default_budget(), 10 ** 7)

    def test_settings(self):
        self.assertEqual(config.svg_settings()['view_box'], 1000)
        self.assertEqual(config.experiment_settings()['max_n'], 10)


class test_cli(TestCase):
    def run_cli(self, *argv):
        orig_sysout = sys.stdout
        sys.stdout = my_stdout = StringIO()
        try:
            code = cmatch.main(list(argv))
        finally:
            sys.stdout = orig_sysout
        return code, my_stdout.getvalue()

    def test_version(self):
        code, output = self.run_cli('--version')
        self.assertEqual(code, 0)
        self.assertEqual(output.strip(), 'compat_match v{}'.format(config.version))

    def test_generate_parameter_error(self):
        code, output = self.run_cli('generate', 'convex-polygon', '2')
        self.assertEqual(code, constants.EXIT_USAGE)
        self.assertEqual(output, '')

    def test_generate_and_solve(self):
        with TemporaryDirectory() as directory:
            path = os.path.join(directory, 'hexagon.json')
            self.assertEqual(self.run_cli('generate', 'convex-polygon', '6', '--out', path)[0], 0)
            code, output = self.run_cli('solve', 'perfect', path)
            self.assertEqual(code, constants.EXIT_INFEASIBLE)
            self.assertIn('status: infeasible', output)
            code, output = self.run_cli('solve', 'max', path, '--budget', '1')
            self.assertEqual(code, constants.EXIT_BUDGET)
            self.assertIn('status: budget-exceeded', output)

    def test_solve_and_analyze_square(self):
        with TemporaryDirectory() as directory:
            path = os.path.join(directory, 'square.json')
            solved = os.path.join(directory, 'solved.json')
            document.write_document(document.InstanceDocument(square_polygon()), path)
            code, output = self.run_cli('solve', 'min-maximal', path, '--out', solved)
            self.assertEqual(code, 0)
            self.assertIn('objective: 1', output)
            code, output = self.run_cli('analyze', solved)
            self.assertEqual(code, 0)
            self.assertIn('i=0 Δ=0 σ=0 ν=4 r_u=2 r_m=2; lhs=0 rhs=2 holds', output)
            code, output = self.run_cli('analyze', solved, '--json')
            self.assertEqual(json.loads(output)['polygon-faces']['faces'], True)
            self.assertEqual(self.run_cli('analyze', path)[0], constants.EXIT_NOT_MAXIMAL)

    def test_missing_file(self):
        self.assertEqual(self.run_cli('render', 'no-such-file.json', '--out', 'x.svg')[0], constants.EXIT_USAGE)
        self.assertFalse(os.path.exists('x.svg'))

    def test_bad_arguments_exit_with_usage_code(self):
        with self.assertRaises(SystemExit) as raised:
            cmatch.build_parser().parse_args(['solve', 'fastest', 'x.json'])
        self.assertEqual(raised.exception.code, constants.EXIT_USAGE)
