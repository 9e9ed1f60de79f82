import csv
from io import StringIO

import networkx as nx
import numpy as np

from django.test import SimpleTestCase

from ..helpers.topology import (
    coverage_fractions,
    fit_shape,
    hop_distances,
    reserve_tiers,
    tier_counts,
    unit_disk_graph,
)
from ..helpers.writers import UnicodeWriter, write_reports_csv
from ..metrics import CSV_COLUMNS
from ..overhead import rreq_overhead
from .testdata import create_report, line_positions


class TestUnitDiskGraph(SimpleTestCase):
    def test_line(self):
        graph = unit_disk_graph(np.array(line_positions(5)), 150)
        self.assertEqual(sorted(graph.edges()), [(0, 1), (1, 2), (2, 3), (3, 4)])

    def test_dead_nodes_are_left_out(self):
        alive = np.array([True, True, False, True, True])
        graph = unit_disk_graph(np.array(line_positions(5)), 150, alive)
        self.assertNotIn(2, graph)
        self.assertFalse(nx.is_connected(graph))

    def test_matches_pairwise_distances(self):
        rng = np.random.default_rng(4)
        positions = rng.uniform(0, 500, size=(30, 2))
        graph = unit_disk_graph(positions, 120)
        for a in range(30):
            for b in range(a + 1, 30):
                close = np.hypot(*(positions[a] - positions[b])) <= 120
                self.assertEqual(graph.has_edge(a, b), close)


class TestShapeFitting(SimpleTestCase):
    def setUp(self):
        self.graph = unit_disk_graph(np.array(line_positions(5)), 150)

    def test_hop_distances(self):
        self.assertEqual(hop_distances(self.graph, 0), {0: 0, 1: 1, 2: 2, 3: 3, 4: 4})

    def test_tiers(self):
        self.assertEqual(tier_counts(self.graph, 0, 4), [1, 1, 1])
        self.assertEqual(reserve_tiers(self.graph, 0, 2), [1, 1, 1])

    def test_coverage_fractions(self):
        # ends have one neighbor, the three inner nodes two
        self.assertEqual(coverage_fractions(self.graph), {2: 0.6, 3: 0.0, 4: 0.0})

    def test_fit_shape_on_line(self):
        shape = fit_shape(self.graph, 0, 4, formula_mode="tiered")
        self.assertEqual(shape.nodes, 5)
        self.assertEqual(shape.hops, 4)
        self.assertEqual(shape.tier_neighbors, (1, 1, 1))
        self.assertEqual(shape.formula_mode, "tiered")
        self.assertGreaterEqual(rreq_overhead(shape), 0)

    def test_fit_shape_uses_default_formula_mode(self):
        shape = fit_shape(self.graph, 0, 1)
        self.assertEqual(shape.formula_mode, "literal")

    def test_no_path(self):
        graph = unit_disk_graph(np.array(line_positions(3) + [[900, 50]]), 150)
        self.assertIsNone(fit_shape(graph, 0, 3))

    def test_same_node(self):
        self.assertIsNone(fit_shape(self.graph, 2, 2))


class TestWriters(SimpleTestCase):
    def test_none_becomes_empty_cell(self):
        stream = StringIO()
        UnicodeWriter(stream).writerow(["a", None, 1.5])
        self.assertEqual(stream.getvalue(), "a,,1.5\r\n")

    def test_reports_csv(self):
        stream = StringIO()
        reports = [
            create_report(seed=1, data_delivered=1, bytes_delivered=512, delays=[0.2]),
            create_report(seed=2),
        ]
        self.assertEqual(write_reports_csv(stream, reports), 2)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], "# schema_version=1")
        rows = list(csv.reader(lines[1:]))
        self.assertEqual(tuple(rows[0]), CSV_COLUMNS)
        self.assertEqual(rows[1][:3], ["1", "test", "aodv"])
        self.assertEqual(rows[1][CSV_COLUMNS.index("mean_delay_s")], "0.2")
        self.assertEqual(rows[2][CSV_COLUMNS.index("mean_delay_s")], "")
        self.assertEqual(rows[1][CSV_COLUMNS.index("throughput_bps")], "40.96")

    def test_reports_csv_with_axis_values(self):
        stream = StringIO()
        reports = [create_report(seed=1), create_report(seed=1)]
        values = [2.0, {"speed": 5, "pause": 0}]
        write_reports_csv(stream, reports, axis="mobility", values=values)
        rows = list(csv.reader(stream.getvalue().splitlines()[1:]))
        self.assertEqual(rows[0][len(CSV_COLUMNS) :], ["axis", "axis_value"])
        self.assertEqual(rows[1][-2:], ["mobility", "2.0"])
        self.assertEqual(rows[2][-1], '{"pause": 0, "speed": 5}')

    def test_axis_values_must_match_reports(self):
        with self.assertRaises(ValueError):
            write_reports_csv(StringIO(), [create_report()], axis="traffic", values=[])
