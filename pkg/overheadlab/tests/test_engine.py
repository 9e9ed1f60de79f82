import numpy as np

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from ..engine.events import EventQueue, SchedulingError, Timer
from ..engine.mobility import RandomWaypoint
from ..engine.radio import RadioModel
from ..engine.scenario import (
    Blackout,
    FlowSpec,
    ScenarioConfig,
    TrafficConfig,
    bundled_scenarios,
    grid_positions,
    load_scenario,
)


class TestEventQueue(SimpleTestCase):
    def test_orders_by_time(self):
        queue = EventQueue()
        queue.schedule(2.0, 0, "b")
        queue.schedule(1.0, 0, "a")
        self.assertEqual([queue.pop().kind, queue.pop().kind], ["a", "b"])

    def test_same_time_in_schedule_order(self):
        queue = EventQueue()
        for kind in ("first", "second", "third"):
            queue.schedule(1.0, 0, kind)
        self.assertEqual([queue.pop().kind for _ in range(3)], ["first", "second", "third"])

    def test_event_at_now_runs_before_later_events(self):
        queue = EventQueue()
        queue.schedule(1.0, 0, "later")
        queue.schedule(0.0, 0, "now")
        self.assertEqual(queue.pop().kind, "now")

    def test_past_event_is_an_error(self):
        queue = EventQueue()
        queue.schedule(5.0, 0, "a")
        queue.pop()
        with self.assertRaises(SchedulingError):
            queue.schedule(4.0, 0, "b")

    def test_clock_follows_popped_events(self):
        queue = EventQueue()
        queue.schedule(3.5, 0, "a")
        self.assertEqual(queue.peek_time(), 3.5)
        queue.pop()
        self.assertEqual(queue.now, 3.5)
        self.assertFalse(queue)
        self.assertIsNone(queue.peek_time())

    def test_timer_cancel(self):
        timer = Timer(name="x")
        timer.cancel()
        self.assertTrue(timer.cancelled)


class TestRadioModel(SimpleTestCase):
    def setUp(self):
        self.positions = np.array([[0.0, 0.0], [100.0, 0.0], [200.0, 0.0]])
        self.alive = np.ones(3, dtype=bool)

    def test_line_with_short_range(self):
        radio = RadioModel(range=150)
        self.assertEqual(
            np.flatnonzero(radio.neighbor_mask(self.positions, self.alive, 1)).tolist(),
            [0, 2],
        )
        self.assertEqual(
            np.flatnonzero(radio.neighbor_mask(self.positions, self.alive, 0)).tolist(),
            [1],
        )

    def test_line_with_long_range(self):
        radio = RadioModel(range=250)
        for node in range(3):
            mask = radio.neighbor_mask(self.positions, self.alive, node)
            self.assertEqual(mask.sum(), 2)

    def test_failed_middle_node(self):
        radio = RadioModel(range=150)
        self.alive[1] = False
        self.assertFalse(radio.neighbor_mask(self.positions, self.alive, 0).any())
        self.assertFalse(radio.neighbor_mask(self.positions, self.alive, 2).any())

    def test_transmission_delay(self):
        self.assertAlmostEqual(RadioModel().transmission_delay(512), 0.003048)

    def test_validation(self):
        with self.assertRaises(ValidationError):
            RadioModel(range=0)
        with self.assertRaises(ValidationError):
            RadioModel(loss_probability=1.5)
        with self.assertRaises(ValidationError):
            RadioModel.from_dict({"power": 1})


class TestRandomWaypoint(SimpleTestCase):
    def _create(self, speed=2.0, pause=0.0, seed=1, count=10):
        rngs = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]
        start = np.random.default_rng(seed).uniform(0, 500, size=(count, 2))
        return start, RandomWaypoint(start, (500.0, 500.0), speed, pause, rngs)

    def test_static_when_speed_zero(self):
        start, mobility = self._create(speed=0.0)
        self.assertTrue(np.array_equal(mobility.step(100.0), start))

    def test_displacement_is_bounded_by_speed(self):
        start, mobility = self._create(speed=2.0)
        previous = start
        for now in np.arange(0.5, 10.5, 0.5):
            positions = mobility.step(float(now))
            step = np.hypot(*(positions - previous).T)
            self.assertTrue((step <= 2.0 * 0.5 + 1e-9).all())
            previous = positions
        self.assertTrue((np.hypot(*(previous - start).T) <= 20.0 + 1e-9).all())

    def test_stays_inside_area(self):
        _, mobility = self._create(speed=20.0)
        for now in range(1, 200):
            positions = mobility.step(float(now))
            self.assertTrue(((positions >= 0) & (positions <= 500)).all())

    def test_long_pause_freezes_after_arrival(self):
        _, mobility = self._create(speed=50.0, pause=1000.0)
        arrival = float(mobility._arrival.max())
        frozen = mobility.step(arrival + 1)
        self.assertTrue(np.allclose(mobility.step(arrival + 500), frozen))

    def test_streams_are_independent_per_node(self):
        _, first = self._create(seed=4, count=10)
        _, second = self._create(seed=4, count=10)
        self.assertTrue(np.array_equal(first.step(30.0), second.step(30.0)))


class TestScenario(SimpleTestCase):
    def test_bundled_scenarios_load(self):
        names = bundled_scenarios()
        self.assertIn("static-line-5", names)
        for name in ("static-line-5", "static-grid-25", "mobility-50"):
            scenario = load_scenario(name)
            self.assertEqual(scenario.name, name)

    def test_static_line(self):
        scenario = load_scenario("static-line-5")
        self.assertTrue(scenario.is_static)
        self.assertEqual(scenario.node_count, 5)
        self.assertEqual(scenario.traffic.explicit[0].packets, 1)

    def test_sweep_is_not_a_scenario(self):
        with self.assertRaises(ValidationError):
            load_scenario("scalability-sweep")

    def test_unknown_scenario(self):
        with self.assertRaisesMessage(ValidationError, "unknown scenario"):
            load_scenario("does-not-exist")

    def test_unknown_field(self):
        with self.assertRaisesMessage(ValidationError, "unknown scenario field(s): colour"):
            ScenarioConfig.from_dict({"colour": "red"})

    def test_positions_must_match_node_count(self):
        with self.assertRaises(ValidationError):
            ScenarioConfig.from_dict({"positions": [[0, 0], [1, 1]], "node_count": 3})

    def test_flow_must_reference_known_nodes(self):
        with self.assertRaises(ValidationError):
            ScenarioConfig.from_dict(
                {
                    "node_count": 3,
                    "traffic": {"flow_specs": [{"source": 0, "destination": 7}]},
                }
            )

    def test_negative_speed(self):
        with self.assertRaises(ValidationError):
            ScenarioConfig.from_dict({"speed": -1})

    def test_grid_positions(self):
        positions = grid_positions(4, (200.0, 200.0))
        self.assertEqual(positions.tolist(), [[50, 50], [150, 50], [50, 150], [150, 150]])

    def test_blackout(self):
        blackout = Blackout.from_dict({"region": [0, 0, 10, 10], "start": 5, "end": 8})
        self.assertFalse(blackout.is_active(4.9))
        self.assertTrue(blackout.is_active(5))
        self.assertFalse(blackout.is_active(8))
        covered = blackout.covers(np.array([[5.0, 5.0], [20.0, 5.0]]))
        self.assertEqual(covered.tolist(), [True, False])

    def test_blackout_needs_region(self):
        with self.assertRaises(ValidationError):
            Blackout.from_dict({"region": [0, 0]})

    def test_blackout_region_must_be_numbers(self):
        with self.assertRaisesMessage(ValidationError, "blackout region"):
            Blackout.from_dict({"region": [0, 0, "ten", 10]})
        with self.assertRaises(ValidationError):
            Blackout.from_dict({"region": [0, 0, None, 10]})

    def test_lifetimes_must_be_numbers_per_node_id(self):
        for lifetimes in ({"1": "soon"}, {"first": 3.0}, [3.0], {"1": None}):
            with self.assertRaises(ValidationError, msg=lifetimes):
                ScenarioConfig.from_dict({"node_count": 3, "lifetimes": lifetimes})

    def test_positions_must_be_numbers(self):
        with self.assertRaises(ValidationError):
            ScenarioConfig.from_dict({"positions": [[0, 0], ["a", 1]]})
        with self.assertRaises(ValidationError):
            ScenarioConfig.from_dict({"positions": [[0, 0, 0]]})

    def test_flow_send_times(self):
        flow = FlowSpec(source=0, destination=1, start=1.0, rate=4.0, packets=3)
        self.assertEqual(
            [flow.send_time(index, 100) for index in range(4)], [1.0, 1.25, 1.5, None]
        )
        open_flow = FlowSpec(source=0, destination=1, start=1.0, rate=1.0)
        self.assertIsNone(open_flow.send_time(10, 10.5))

    def test_random_flows_are_reproducible(self):
        traffic = TrafficConfig(flows=5)
        first = traffic.build_flows(20, np.random.default_rng(3))
        second = traffic.build_flows(20, np.random.default_rng(3))
        self.assertEqual(first, second)
        for flow in first:
            self.assertNotEqual(flow.source, flow.destination)

    def test_to_dict_round_trip(self):
        scenario = load_scenario("static-grid-25")
        self.assertEqual(ScenarioConfig.from_dict(scenario.to_dict()), scenario)
