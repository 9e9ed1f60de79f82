import json
import tempfile
from collections import Counter, defaultdict
from pathlib import Path

import numpy as np

from django.test import SimpleTestCase

from ..constants import EventKind
from ..engine.scenario import ScenarioConfig, TrafficConfig, load_scenario
from ..engine.simulator import Simulator, run_scenario
from .testdata import create_line_scenario, create_scenario, line_positions


class TestSimulatorBasics(SimpleTestCase):
    def test_empty_scenario_has_empty_trace(self):
        scenario = ScenarioConfig(node_count=3, traffic=TrafficConfig(flows=0))
        result = Simulator(scenario).run_until()
        self.assertEqual(result.trace, [])
        self.assertEqual(result.report.data_sent, 0)

    def test_limit_is_respected(self):
        result = Simulator(create_line_scenario(5)).run_until(0.5)
        self.assertEqual(result.trace, [])
        self.assertEqual(result.report.data_sent, 0)
        self.assertEqual(result.report.duration, 0.5)

    def test_neighbors(self):
        simulator = Simulator(create_scenario(line_positions(3)))
        self.assertEqual(simulator.neighbors(1).tolist(), [0, 2])
        self.assertEqual(simulator.neighbors(0).tolist(), [1])

    def test_neighbors_of_dead_node(self):
        simulator = Simulator(create_scenario(line_positions(3)))
        simulator.alive[1] = False
        self.assertEqual(simulator.neighbors(1).tolist(), [])
        self.assertEqual(simulator.neighbors(0).tolist(), [])

    def test_single_hop_delay(self):
        flow = {"source": 0, "destination": 1, "start": 1.0, "rate": 4.0, "packets": 2}
        report = run_scenario(create_scenario(line_positions(2), [flow]), "aodv").report
        self.assertEqual(report.data_delivered, 2)
        first, second = report.delays
        # per hop latency plus 512 bytes at 2 Mbit/s
        self.assertAlmostEqual(second, 0.003048, places=9)
        self.assertGreater(first, second)

    def test_report_identity(self):
        report = run_scenario(load_scenario("static-line-5"), "dsr", seed=7).report
        self.assertEqual(report.scenario_id, "static-line-5")
        self.assertEqual(report.protocol, "dsr")
        self.assertEqual(report.seed, 7)
        self.assertEqual(report.nodes, 5)


class TestDeterminism(SimpleTestCase):
    def setUp(self):
        self.scenario = load_scenario("mobility-50").replace(duration=15.0)

    def test_same_seed_gives_identical_trace(self):
        first = run_scenario(self.scenario, "aodv", seed=42, record_trace=True)
        second = run_scenario(self.scenario, "aodv", seed=42, record_trace=True)
        self.assertEqual(first.digest, second.digest)
        self.assertEqual(
            [record.to_json() for record in first.trace],
            [record.to_json() for record in second.trace],
        )
        self.assertEqual(first.report.to_dict(), second.report.to_dict())

    def test_full_run_reports_are_byte_identical(self):
        scenario = load_scenario("mobility-50")
        first, second = (
            json.dumps(
                run_scenario(scenario, "aodv", seed=42).report.to_dict(),
                indent=2,
                sort_keys=True,
            ).encode("utf-8")
            for _ in range(2)
        )
        self.assertEqual(first, second)

    def test_other_seed_gives_other_trace(self):
        first = run_scenario(self.scenario, "aodv", seed=42)
        second = run_scenario(self.scenario, "aodv", seed=43)
        self.assertNotEqual(first.digest, second.digest)

    def test_digest_does_not_depend_on_recording(self):
        recorded = run_scenario(self.scenario, "dymo", seed=42, record_trace=True)
        plain = run_scenario(self.scenario, "dymo", seed=42, record_trace=False)
        self.assertEqual(recorded.digest, plain.digest)
        self.assertEqual(plain.trace, [])

    def test_mobility_is_bounded_by_speed(self):
        simulator = Simulator(self.scenario, seed=42)
        start = simulator.positions.copy()
        simulator.run_until(10.0)
        moved = np.hypot(*(simulator.positions - start).T)
        self.assertTrue((moved <= self.scenario.speed * 10.0 + 1e-9).all())


class TestFailures(SimpleTestCase):
    FLOW = {"source": 0, "destination": 4, "start": 1.0, "rate": 4.0}

    def test_blackout_over_whole_area(self):
        scenario = create_scenario(
            line_positions(5),
            [self.FLOW],
            duration=10,
            blackouts=[{"region": [0, 0, 1000, 1000], "start": 5.0}],
        )
        result = run_scenario(scenario, "aodv", record_trace=True)
        transmits = [r for r in result.trace if r.kind == EventKind.TRANSMIT]
        self.assertTrue(transmits)
        self.assertTrue(all(record.time < 5.0 for record in transmits))
        fails = [r for r in result.trace if r.kind == EventKind.FAIL]
        self.assertEqual(sorted(record.node for record in fails), [0, 1, 2, 3, 4])

    def test_node_lifetime(self):
        scenario = create_scenario(
            line_positions(5), [self.FLOW], duration=10, lifetimes={"2": 3.0}
        )
        result = run_scenario(scenario, "aodv", record_trace=True)
        by_node = [
            record
            for record in result.trace
            if record.kind == EventKind.TRANSMIT and record.node == 2
        ]
        self.assertTrue(by_node)
        self.assertTrue(all(record.time <= 3.0 for record in by_node))

    def test_no_receptions_at_failed_node(self):
        scenario = create_scenario(
            line_positions(5), [self.FLOW], duration=10, lifetimes={"2": 3.0}
        )
        result = run_scenario(scenario, "aodv", record_trace=True)
        received = [
            record.time
            for record in result.trace
            if record.kind == EventKind.RECEIVE and record.node == 2
        ]
        self.assertTrue(received)
        self.assertTrue(all(time < 3.0 for time in received))

    def test_no_receptions_inside_blackout(self):
        scenario = create_scenario(
            line_positions(5),
            [self.FLOW],
            duration=10,
            blackouts=[{"region": [150, 0, 250, 100], "start": 2.0, "end": 4.0}],
        )
        result = run_scenario(scenario, "aodv", record_trace=True)
        received = [
            record.time
            for record in result.trace
            if record.kind == EventKind.RECEIVE and record.node == 2
        ]
        self.assertTrue(any(time < 2.0 for time in received))
        self.assertTrue(any(time >= 4.0 for time in received))
        self.assertFalse([time for time in received if 2.0 <= time < 4.0])

    def test_blackout_ends(self):
        scenario = create_scenario(
            line_positions(5),
            [self.FLOW],
            duration=10,
            blackouts=[{"region": [150, 0, 250, 100], "start": 2.0, "end": 4.0}],
        )
        result = run_scenario(scenario, "aodv", record_trace=True)
        changes = [
            (record.kind, record.node)
            for record in result.trace
            if record.kind in (EventKind.FAIL, EventKind.RECOVER)
        ]
        self.assertEqual(changes, [("fail", 2), ("recover", 2)])

    def test_no_failures(self):
        result = run_scenario(create_line_scenario(5), "aodv", record_trace=True)
        self.assertFalse(
            [r for r in result.trace if r.kind in (EventKind.FAIL, EventKind.RECOVER)]
        )


class TestTrace(SimpleTestCase):
    def test_write_trace(self):
        result = run_scenario(load_scenario("static-line-5"), "aodv", record_trace=True)
        with tempfile.TemporaryDirectory() as tmp_dir:
            path = Path(tmp_dir) / "trace" / "run.ndjson"
            result.write_trace(path)
            lines = path.read_text().splitlines()
        self.assertEqual(len(lines), len(result.trace))
        first = json.loads(lines[0])
        self.assertEqual(first["kind"], "transmit")
        self.assertEqual(first["packet_kind"], "RREQ")
        self.assertEqual(first["node"], 0)

    def test_receptions_follow_their_transmissions(self):
        scenario = load_scenario("static-grid-25")
        latency = scenario.radio.per_hop_latency
        for protocol in ("aodv", "dsr", "dymo"):
            result = run_scenario(scenario, protocol, record_trace=True)
            sent = defaultdict(list)
            received = Counter()
            for record in result.trace:
                if record.kind == EventKind.TRANSMIT:
                    sent[(record.node, record.uid)].append(record.time)
                elif record.kind == EventKind.RECEIVE:
                    key = (record.peer, record.uid)
                    received[(record.node,) + key] += 1
                    self.assertTrue(
                        any(time + latency <= record.time + 1e-12 for time in sent[key]),
                        (protocol, record),
                    )
            self.assertTrue(received, protocol)
            # one transmission reaches each neighbor at most once
            for (node, peer, uid), count in received.items():
                self.assertLessEqual(count, len(sent[(peer, uid)]), (protocol, node))
