import os
from unittest import skipUnless

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from ..constants import PacketKind
from ..engine.scenario import load_scenario
from ..engine.simulator import run_scenario
from ..metrics import (
    TREND_CLAIMS,
    MetricsCollector,
    RunReport,
    end_to_end_delay,
    evaluate_trends,
    normalized_routing_load,
    paper_end_to_end_delay,
    paper_routing_load,
    throughput,
)
from ..protocols.packets import Packet
from ..sweeps import load_sweep
from .testdata import create_report


def control_counts(**kwargs) -> dict:
    counts = {str(kind): 0 for kind in PacketKind.control_kinds()}
    counts.update(kwargs)
    return counts


class TestThroughput(SimpleTestCase):
    def test_bits_per_second(self):
        report = create_report(data_delivered=100, bytes_delivered=100 * 512)
        self.assertEqual(throughput(report), 4096)

    def test_nothing_delivered(self):
        self.assertEqual(throughput(create_report()), 0)

    def test_zero_duration(self):
        with self.assertRaises(ValidationError):
            throughput(RunReport(duration=0))


class TestDelay(SimpleTestCase):
    def test_mean(self):
        report = create_report(data_delivered=2, delays=[0.1, 0.3])
        self.assertAlmostEqual(end_to_end_delay(report), 0.2)

    def test_nothing_delivered(self):
        self.assertIsNone(end_to_end_delay(create_report()))
        self.assertIsNone(paper_end_to_end_delay(create_report()))

    def test_round_trip_form(self):
        report = create_report(data_sent=4, data_delivered=2, delays=[0.1, 0.3])
        self.assertAlmostEqual(paper_end_to_end_delay(report), 0.8)


class TestRoutingLoad(SimpleTestCase):
    def test_ratio(self):
        report = create_report(
            data_delivered=25, control_counts=control_counts(RREQ=30, HELLO=20)
        )
        self.assertEqual(normalized_routing_load(report), 2.0)

    def test_no_control_packets(self):
        report = create_report(data_delivered=5)
        self.assertEqual(normalized_routing_load(report), 0)

    def test_nothing_delivered(self):
        report = create_report(control_counts=control_counts(RREQ=9))
        self.assertIsNone(normalized_routing_load(report))
        self.assertEqual(report.control_total, 9)

    def test_transmission_form(self):
        report = create_report(
            data_sent=10, data_transmissions=30, control_counts=control_counts(RREQ=5)
        )
        self.assertEqual(paper_routing_load(report), 25)


class TestMetricsCollector(SimpleTestCase):
    def _data(self, data_id, sent_at=1.0):
        return Packet(
            kind=PacketKind.DATA,
            origin=0,
            destination=1,
            uid=data_id,
            payload_size=512,
            data_id=data_id,
            sent_at=sent_at,
            path=(0, 1),
        )

    def test_counts(self):
        collector = MetricsCollector()
        collector.on_transmit(Packet(kind=PacketKind.RREQ, origin=0, destination=1, uid=9))
        collector.on_transmit(self._data(1))
        collector.on_data_sent(self._data(1))
        self.assertTrue(collector.on_delivered(self._data(1), 1.5))
        collector.on_drop("no_route")
        report = collector.build_report(10.0, scenario_id="x", protocol="aodv")
        self.assertEqual(report.control_counts[PacketKind.RREQ], 1)
        self.assertEqual(report.data_transmissions, 1)
        self.assertEqual(report.data_delivered, 1)
        self.assertEqual(report.delays, [0.5])
        self.assertEqual(report.drops, {"no_route": 1})
        self.assertEqual(report.throughput_bps, 512 * 8 / 10.0)

    def test_duplicate_delivery(self):
        collector = MetricsCollector()
        collector.on_delivered(self._data(1), 2.0)
        self.assertFalse(collector.on_delivered(self._data(1), 3.0))
        report = collector.build_report(10.0)
        self.assertEqual(report.data_delivered, 1)
        self.assertEqual(report.drops["duplicate"], 1)

    def test_report_round_trip(self):
        collector = MetricsCollector()
        collector.on_delivered(self._data(1), 2.0)
        report = collector.build_report(10.0, scenario_id="x", seed=3)
        self.assertEqual(RunReport.from_dict(report.to_dict()), report)

    def test_csv_row_blanks_missing_values(self):
        row = create_report().csv_row()
        self.assertEqual(row[7], "")
        self.assertEqual(row[8], "")


class TestEvaluateTrends(SimpleTestCase):
    def test_majority_of_seeds(self):
        reports = {
            "aodv": [
                create_report(protocol="aodv", control_counts=control_counts(RREQ=10)),
                create_report(protocol="aodv", control_counts=control_counts(RREQ=10)),
                create_report(protocol="aodv", control_counts=control_counts(RREQ=1)),
            ],
            "dymo": [
                create_report(protocol="dymo", control_counts=control_counts(RREQ=5)),
                create_report(protocol="dymo", control_counts=control_counts(RREQ=5)),
                create_report(protocol="dymo", control_counts=control_counts(RREQ=5)),
            ],
        }
        result = evaluate_trends(reports)
        self.assertEqual(set(result), set(TREND_CLAIMS))
        claim = result["dymo_lower_overhead_than_aodv"]
        self.assertEqual(claim["holds"], 2)
        self.assertEqual(claim["seeds"], 3)
        self.assertTrue(claim["passed"])

    def test_missing_protocol_does_not_pass(self):
        result = evaluate_trends({"aodv": [create_report()]})
        self.assertFalse(result["aodv_delay_at_least_dsr"]["passed"])

    def test_delay_claim_needs_deliveries(self):
        reports = {
            "aodv": [create_report(protocol="aodv")],
            "dsr": [create_report(protocol="dsr", data_delivered=1, delays=[0.1])],
        }
        self.assertFalse(evaluate_trends(reports)["aodv_delay_at_least_dsr"]["passed"])


@skipUnless(os.environ.get("OVERHEADLAB_TREND_TESTS"), "slow protocol comparison")
class TestProtocolTrends(SimpleTestCase):
    def test_trends_on_mobile_network(self):
        scenario = load_scenario("mobility-50")
        reports = {
            protocol: [
                run_scenario(scenario, protocol, seed=seed).report for seed in range(1, 6)
            ]
            for protocol in ("aodv", "dsr", "dymo")
        }
        result = evaluate_trends(reports)
        for claim, outcome in result.items():
            self.assertTrue(outcome["passed"], (claim, outcome))

    def test_trends_over_scalability_sweep(self):
        spec = load_sweep("scalability-sweep")
        for value in spec.values:
            scenario = spec.scenario_for(value)
            reports = {
                protocol: [
                    run_scenario(scenario, protocol, seed=seed).report
                    for seed in sorted(spec.seeds)
                ]
                for protocol in spec.protocols
            }
            for claim, outcome in evaluate_trends(reports).items():
                self.assertTrue(outcome["passed"], (value, claim, outcome))
