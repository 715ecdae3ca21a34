import os
import sys
import math
from io import StringIO
from functools import lru_cache
from tempfile import TemporaryDirectory
from unittest import TestCase, mock

import cmatch
from compat_match import analysis, constants, constructions, experiments, solvers
from compat_match import graph as gm
from compat_match.errors import ParameterRangeError


@lru_cache(maxsize=1)
def _twin_peaks():
    return constructions.generate('twin-peaks', ())


class test_sweeps(TestCase):
    """The experiment suites at reduced sizes; every row must come back clean."""

    def run_suite(self, suite, count, max_n=8, seed=1):
        summary = experiments.run_suite(suite, count, seed, workers=2, max_n=max_n, progress=False)
        self.assertEqual(summary.violations, 0, [row.status for row in summary.rows if row.violation])
        self.assertEqual(summary.budget_exceeded, 0)
        ids = [row.instance_id for row in summary.rows]
        self.assertEqual(ids, sorted(ids))
        return summary

    def test_lemma1_sweep(self):
        summary = self.run_suite('lemma1-sweep', 24)
        self.assertEqual(len(summary.rows), 24)
        classes = {row.graph_class for row in summary.rows}
        self.assertTrue({constants.CLASS_POINT_SET, constants.CLASS_MATCHING} <= classes)
        for row in summary.rows:
            self.assertLessEqual(row.mm, row.greedy_size)
            self.assertLessEqual(row.greedy_size, row.d)
            self.assertGreaterEqual(row.lemma1_slack, 0)
            if row.lower_bound is not None:
                self.assertGreaterEqual(row.mm, row.lower_bound)

    def test_face_facts_on_every_maximal_matching(self):
        for n in range(4, 10):
            for seed in range(3):
                graph = constructions.random_polygon(n, seed)
                for matching in solvers.enumerate_maximal(graph):
                    facts = analysis.polygon_face_facts(graph, matching)
                    self.assertTrue(all(facts.values()), (n, seed, matching.pairs, facts))

    def test_lemma1_sweep_reports_face_failures(self):
        graph = constructions.random_polygon(6, 0)
        instance = experiments.Instance(0, 'random-polygon(6,)', graph)
        with mock.patch.object(analysis, 'polygon_face_facts', return_value={'faces': False}):
            row = experiments.evaluate_lemma1(instance, 10 ** 6)
        self.assertTrue(row.violation)
        self.assertIn('face-faces', row.status)
        self.assertFalse(experiments.evaluate_lemma1(instance, 10 ** 6).violation)

    def test_bounds_sweep(self):
        summary = self.run_suite('bounds-sweep', 8)
        tight = summary.rows[8:]
        # points-tight 1..3 first: mm equals the bound exactly
        for k, row in zip((1, 2, 3), tight[:3]):
            self.assertEqual(row.mm, k)
            self.assertEqual(row.lower_bound, k)
        self.assertEqual(tight[5].n, 36)
        self.assertEqual(tight[5].mm, 3)
        # polygon-tight 1 and 3: n/7 matching edges
        self.assertEqual([(row.n, row.mm, row.lower_bound) for row in tight[6:]], [(14, 2, 2), (42, 6, 6)])

    def test_oracle_equivalence(self):
        summary = self.run_suite('oracle-equivalence', 16)
        self.assertEqual(len(summary.rows), 16)

    def test_perfect_corpus(self):
        summary = self.run_suite('perfect-corpus', 8)
        for row in summary.rows[:5]:
            self.assertEqual(row.d, None)
        self.assertEqual(summary.rows[5].d, summary.rows[5].n // 2)

    def test_families(self):
        summary = self.run_suite('families', 0)
        self.assertEqual(len(summary.rows), 10)

    def test_csv_is_deterministic(self):
        first = experiments.to_csv(experiments.run_suite('oracle-equivalence', 6, 3, workers=3, max_n=7,
                                                         progress=False).rows)
        second = experiments.to_csv(experiments.run_suite('oracle-equivalence', 6, 3, workers=1, max_n=7,
                                                          progress=False).rows)
        self.assertEqual(first, second)
        lines = first.split('\n')
        self.assertEqual(lines[0], ','.join(constants.EXPERIMENT_COLUMNS))
        self.assertEqual(len(lines), 8)
        self.assertEqual(lines[-1], '')


class test_tight_families(TestCase):
    def test_points_tight_exhaustive(self):
        for k in (1, 2, 3):
            certificate = constructions.generate('points-tight', (k,))
            self.assertEqual(certificate.graph.n, 3 * k + 1)
            self.assertEqual(solvers.min_maximal(certificate.graph).objective, k)

    def test_matching_tight(self):
        certificate = constructions.generate('matching-tight', (2,))
        graph = certificate.graph
        self.assertEqual((graph.n, len(certificate.matching)), (14, 2))
        self.assertEqual(analysis.regularity_class(graph), constants.CLASS_MATCHING)
        self.assertEqual(analysis.lower_bound(graph).lower_bound, 2)
        self.assertEqual(solvers.min_maximal(graph).objective, 2)

    def test_cycles_tight(self):
        certificate = constructions.generate('cycles-tight', (0,))
        graph = certificate.graph
        self.assertEqual((graph.n, len(certificate.matching)), (36, 3))
        self.assertEqual(analysis.regularity_class(graph), constants.CLASS_CYCLES)
        self.assertTrue(gm.is_maximal(graph, certificate.matching))
        self.assertEqual(analysis.lower_bound(graph).lower_bound, len(certificate.matching))
        self.assertTrue(analysis.lemma1_check(graph, certificate.matching).holds)

    def test_large_certificates(self):
        for family, k, n, size in (('points-tight', 50, 151, 50), ('matching-tight', 20, 122, 20),
                                   ('cycles-tight', 4, 80, 7)):
            certificate = constructions.generate(family, (k,))
            self.assertEqual((certificate.graph.n, len(certificate.matching)), (n, size))
            self.assertTrue(certificate.claims[constants.CLAIM_MAXIMAL])

    def test_polygon_tight(self):
        for k, n in ((1, 14), (3, 42)):
            certificate = constructions.generate('polygon-tight', (k,))
            graph, matching = certificate.graph, certificate.matching
            self.assertEqual((graph.n, len(matching)), (n, 2 * k))
            self.assertEqual(analysis.regularity_class(graph), constants.CLASS_POLYGON)
            self.assertTrue(gm.is_maximal(graph, matching))
            report = analysis.bound_report(graph, len(matching))
            self.assertTrue(report.satisfied)
            self.assertEqual(report.slack, 0)
            self.assertTrue(all(analysis.polygon_face_facts(graph, matching).values()))
            self.assertTrue(analysis.lemma1_check(graph, matching).holds)
            self.assertEqual(len(certificate.roles['unmatched']), graph.n - 4 * k)
            self.assertEqual(len(certificate.roles['hooks']), 4 * k - 1)

    def test_matching_tight_has_no_single_edge_instance(self):
        # eight vertices and one matching edge would force that edge onto a graph edge
        for seed in range(20):
            graph = constructions.random_segments(8, seed)
            self.assertGreaterEqual(solvers.min_maximal(graph).objective, 2)

    def test_cycles_tight_has_no_single_edge_instance(self):
        # fourteen vertices and one matching edge would need four empty unmatched triangles
        for seed in range(10):
            graph = constructions.random_disjoint_cycles(14, seed)
            self.assertGreaterEqual(solvers.min_maximal(graph).objective, 2)


class test_lemma4(TestCase):
    # (n, m): both ends of the valid range and points between
    SAMPLES = ((10, 17), (10, 19), (10, 22), (13, 19), (13, 23), (13, 28), (20, 24), (20, 29), (20, 30),
               (20, 42), (40, 38), (40, 55), (40, 82), (77, 64), (77, 100), (77, 156))

    def check(self, certificate, n, m):
        graph, matching = certificate.graph, certificate.matching
        self.assertEqual((graph.n, graph.m), (n, m))
        self.assertEqual(len(matching), math.ceil((2 * n - m + 3) / 13))
        self.assertTrue(gm.is_maximal(graph, matching))

    def test_reference_instances(self):
        for m, size in ((64, 3), (63, 4)):
            certificate = constructions.generate('lemma4', (50, m))
            self.check(certificate, 50, m)
            self.assertEqual(len(certificate.matching), size)

    def test_across_the_range(self):
        for m in range(45, 103, 3):
            self.check(constructions.generate('lemma4', (50, m)), 50, m)

    def test_small_and_large_n(self):
        for n, m in self.SAMPLES:
            self.check(constructions.generate('lemma4', (n, m)), n, m)

    def test_part_counts(self):
        for n, m in ((77, 100), (77, 156), (40, 82), (50, 64)):
            certificate = constructions.generate('lemma4', (n, m))
            graph, k = certificate.graph, certificate.claims['k']
            self.assertEqual(certificate.claims['filler-edges'], 0)
            base, cap = set(certificate.roles['base']), set(certificate.roles['cap'])
            self.assertEqual(len(base), 10 * k - 6)
            self.assertEqual(len(cap), n - 10 * k + 6)
            self.assertEqual(sum(1 for u, v in graph.edges if u in base and v in base), 7 * k - 6)
            cap_edges = sum(1 for u, v in graph.edges if u in cap and v in cap)
            self.assertEqual(cap_edges - certificate.claims['cap-interior'], 2 * n - 20 * k + 9)
            self.assertEqual(cap_edges + 7 * k - 6, m)
            self.assertEqual(set(certificate.roles['matched']), {v for pair in certificate.matching for v in pair})

    def test_filler_edges_complete_small_caps(self):
        certificate = constructions.generate('lemma4', (10, 22))
        self.assertEqual(certificate.claims['cap-interior'], 3)
        self.assertEqual(certificate.claims['filler-edges'], 9)
        # every gap is filled: graph plus matching is a triangulation with four hull vertices
        self.assertEqual(certificate.graph.m + len(certificate.matching), 3 * 10 - 3 - 4)

    def test_out_of_range(self):
        for n, m in ((50, 40), (50, 103), (4, 12), (6, 14)):
            with self.assertRaises(ValueError):
                constructions.generate('lemma4', (n, m))


class test_perfect_matchings(TestCase):
    def test_convex_polygons_are_infeasible(self):
        for n in (4, 6, 8, 10, 12):
            graph = constructions.generate('convex-polygon', (n,)).graph
            self.assertEqual(solvers.has_perfect_compatible(graph).status, constants.STATUS_INFEASIBLE)
            self.assertEqual(solvers.count_perfect_compatible(graph), 0)

    def test_twin_peaks_forced_pairs(self):
        certificate = _twin_peaks()
        graph, roles = certificate.graph, certificate.roles
        self.assertEqual(graph.n, 12)
        self.assertEqual(analysis.regularity_class(graph), constants.CLASS_POLYGON)
        self.assertEqual(solvers.has_perfect_compatible(graph).status, constants.STATUS_OPTIMAL)
        perfect = solvers.enumerate_perfect_compatible(graph)
        self.assertEqual(len(perfect), certificate.claims[constants.CLAIM_PERFECT_COUNT])
        forced = certificate.claims[constants.CLAIM_FORCED_PAIRS]
        self.assertEqual(len(forced), 2)
        for solution in perfect:
            for pair in forced:
                self.assertIn(pair, solution)
        for top, below in zip(roles['top'], roles['below']):
            self.assertIn(tuple(sorted((top, below))), forced)
            self.assertEqual(constructions.sole_partners(graph, below), (top,))
            self.assertGreater(graph.points[top].y, graph.points[below].y)

    def test_twin_peaks_roles(self):
        certificate = _twin_peaks()
        graph, roles = certificate.graph, certificate.roles
        self.assertEqual(len(roles['squares']), 8)
        self.assertEqual(sorted(roles['squares'] + roles['below'] + roles['bottom']), list(range(graph.n)))
        by_height = sorted(range(graph.n), key=lambda v: graph.points[v].y)
        self.assertEqual(sorted(roles['top']), sorted(by_height[-2:]))
        self.assertEqual(sorted(roles['bottom']), sorted(by_height[:2]))
        self.assertTrue(set(roles['top']) <= set(roles['squares']))

    def test_twin_peaks_bottoms_pair_with_squares(self):
        certificate = _twin_peaks()
        roles = certificate.roles
        squares = set(roles['squares']) - set(roles['top'])
        for solution in solvers.enumerate_perfect_compatible(certificate.graph):
            for u, v in solution:
                if u in roles['bottom'] or v in roles['bottom']:
                    self.assertTrue({u, v} & squares, (u, v))
                if u in squares or v in squares:
                    self.assertTrue({u, v} <= squares | set(roles['bottom']), (u, v))


class test_fixtures(TestCase):
    def test_every_fixture_loads(self):
        for name in constructions.FIXTURES:
            fixture = constructions.load_fixture(name)
            self.assertEqual(fixture.metadata['fixture'], name)
            self.assertTrue(fixture.graph.general_position)
            self.assertIsNone(gm.find_incompatibility(fixture.graph, fixture.matching))

    def test_unknown_fixture(self):
        with self.assertRaises(ParameterRangeError):
            constructions.load_fixture('no-such-fixture')

    def test_face_counts(self):
        fixture = constructions.load_fixture('face-counts')
        graph, matching = fixture.graph, fixture.matching
        self.assertTrue(gm.is_maximal(graph, matching))
        parameters = analysis.lemma1_parameters(graph, matching)
        self.assertEqual(parameters.as_dict(), fixture.metadata['counts'])
        self.assertEqual(parameters.as_dict(), {'i': 1, 'delta': 1, 'sigma': 2, 'nu': 10, 'r_u': 11, 'r_m': 10})
        self.assertTrue(analysis.lemma1_check(graph, matching).holds)

    def test_tight_bases(self):
        for name, graph_class, n, size in (('polygon-tight-base', constants.CLASS_POLYGON, 14, 2),
                                           ('cycles-tight-base', constants.CLASS_CYCLES, 36, 3)):
            fixture = constructions.load_fixture(name)
            graph, matching = fixture.graph, fixture.matching
            self.assertEqual((graph.n, len(matching)), (n, size))
            self.assertEqual(analysis.regularity_class(graph), graph_class)
            self.assertTrue(gm.is_maximal(graph, matching))
            self.assertEqual(analysis.lower_bound(graph).lower_bound, size)
            self.assertEqual(analysis.lemma1_check(graph, matching).slack, 0)


class test_cli_determinism(TestCase):
    def run_cli(self, *argv):
        orig_sysout = sys.stdout
        sys.stdout = StringIO()
        try:
            return cmatch.main(list(argv))
        finally:
            sys.stdout = orig_sysout

    def read(self, path):
        with open(path, 'rb') as output_file:
            return output_file.read()

    def test_experiment_and_render_outputs(self):
        with TemporaryDirectory() as directory:
            outputs = []
            for run in range(3):
                csv_path = os.path.join(directory, 'sweep-{}.csv'.format(run))
                doc_path = os.path.join(directory, 'polygon-{}.json'.format(run))
                svg_path = os.path.join(directory, 'polygon-{}.svg'.format(run))
                self.assertEqual(self.run_cli('experiment', 'lemma1-sweep', '--count', '8', '--seed', '1',
                                              '--max-n', '7', '--workers', '2', '--out', csv_path), 0)
                self.assertEqual(self.run_cli('generate', 'polygon-tight', '1', '--out', doc_path), 0)
                self.assertEqual(self.run_cli('render', doc_path, '--out', svg_path, '--show-subdivision'), 0)
                outputs.append((self.read(csv_path), self.read(doc_path), self.read(svg_path)))
            self.assertEqual(outputs[0], outputs[1])
            self.assertEqual(outputs[1], outputs[2])
