from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from ..sweeps import SweepSpec, load_sweep, summarize
from .testdata import create_report


def sweep_data(**kwargs) -> dict:
    data = {
        "name": "small",
        "scenario": "static-line-5",
        "axis": "traffic",
        "values": [1.0, 2.0],
        "seeds": [2, 1],
        "protocols": ["dymo", "aodv", "dsr"],
    }
    data.update(kwargs)
    return data


class TestSweepSpec(SimpleTestCase):
    def test_bundled_sweep(self):
        spec = load_sweep("scalability-sweep")
        self.assertEqual(spec.axis, "scalability")
        self.assertEqual(spec.run_count, 45)
        self.assertEqual(spec.base.name, "mobility-50")

    def test_cells_are_ordered(self):
        spec = SweepSpec.from_dict(sweep_data())
        cells = list(spec.cells())
        self.assertEqual(len(cells), 12)
        self.assertEqual(
            [(cell.value, cell.protocol, cell.seed) for cell in cells[:4]],
            [(1.0, "aodv", 1), (1.0, "aodv", 2), (1.0, "dsr", 1), (1.0, "dsr", 2)],
        )
        self.assertEqual(cells[-1].axis_index, 1)

    def test_scalability_values(self):
        spec = SweepSpec.from_dict(
            sweep_data(scenario="mobility-50", axis="scalability", values=[20, 50])
        )
        scenario = spec.scenario_for(20)
        self.assertEqual(scenario.node_count, 20)
        self.assertEqual(scenario.name, "mobility-50-n20")

    def test_scalability_value_must_be_node_count(self):
        with self.assertRaises(ValidationError):
            SweepSpec.from_dict(
                sweep_data(scenario="mobility-50", axis="scalability", values=[1])
            )

    def test_mobility_values(self):
        spec = SweepSpec.from_dict(
            sweep_data(
                scenario="mobility-50", axis="mobility", values=[5, {"speed": 10, "pause": 2}]
            )
        )
        self.assertEqual(spec.scenario_for(5).speed, 5.0)
        scenario = spec.scenario_for({"speed": 10, "pause": 2})
        self.assertEqual((scenario.speed, scenario.pause), (10.0, 2.0))

    def test_traffic_values_change_every_flow(self):
        spec = SweepSpec.from_dict(sweep_data())
        scenario = spec.scenario_for(2.0)
        self.assertEqual(scenario.traffic.rate, 2.0)
        self.assertEqual({flow.rate for flow in scenario.traffic.explicit}, {2.0})

    def test_inline_scenario(self):
        spec = SweepSpec.from_dict(
            sweep_data(scenario={"name": "inline", "node_count": 10}, protocols=["aodv"])
        )
        self.assertEqual(spec.base.name, "inline")

    def test_validation(self):
        for changes in (
            {"axis": "weather"},
            {"values": []},
            {"seeds": [-1]},
            {"protocols": ["olsr"]},
        ):
            with self.assertRaises(ValidationError, msg=changes):
                SweepSpec.from_dict(sweep_data(**changes))

    def test_missing_key(self):
        data = sweep_data()
        del data["seeds"]
        with self.assertRaisesMessage(ValidationError, "sweep is missing seeds"):
            SweepSpec.from_dict(data)

    def test_scenario_is_not_a_sweep(self):
        with self.assertRaises(ValidationError):
            load_sweep("static-line-5")

    def test_to_dict_round_trip(self):
        spec = SweepSpec.from_dict(sweep_data())
        self.assertEqual(SweepSpec.from_dict(spec.to_dict()), spec)


class TestSummarize(SimpleTestCase):
    def test_mean_and_stdev(self):
        rows = [
            (20, "aodv", create_report(bytes_delivered=1000)),
            (20, "aodv", create_report(bytes_delivered=3000)),
            (20, "dsr", create_report(bytes_delivered=500)),
        ]
        summary = summarize(rows)
        self.assertEqual(len(summary), 2)
        aodv, dsr = summary
        self.assertEqual(aodv["runs"], 2)
        self.assertEqual(aodv["throughput_bps"]["mean"], 160.0)
        self.assertAlmostEqual(aodv["throughput_bps"]["stdev"], 113.13708498984761)
        self.assertEqual(dsr["throughput_bps"]["stdev"], 0.0)

    def test_undefined_metrics_are_left_out(self):
        summary = summarize([(1, "aodv", create_report())])
        self.assertIsNone(summary[0]["mean_delay_s"])
        self.assertEqual(summary[0]["control_total"]["mean"], 0)
