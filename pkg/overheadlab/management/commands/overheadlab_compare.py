import logging

import numpy as np

from django.core.exceptions import ValidationError

from app_utils.logging import LoggerAddTag

from ... import __title__
from ...constants import PacketKind
from ...engine.scenario import load_scenario
from ...engine.simulator import Simulator
from ...helpers.topology import fit_shape, unit_disk_graph
from ...overhead import (
    MonitoredRoute,
    coerce_routes,
    hello_overhead_route_discrete,
    rrep_overhead,
    rreq_overhead,
)
from ...protocols.profiles import get_profile
from ..base import (
    OverheadLabCommand,
    add_formula_mode_argument,
    load_json_file,
)

logger = LoggerAddTag(logging.getLogger(__name__), __title__)


def relative_delta(model: float, simulated: float):
    if model == 0:
        return None if simulated else 0.0
    return (simulated - model) / model


class Command(OverheadLabCommand):
    help = (
        "Compare the overhead predicted by the analytic model with the "
        "control packets counted in a simulation of the same scenario"
    )

    def add_arguments(self, parser):
        parser.add_argument("scenario", help="bundled scenario name or JSON file")
        parser.add_argument(
            "--params",
            default=None,
            help="JSON object with model overrides: p, hops, routes",
        )
        parser.add_argument("--seed", type=int, default=None, help="random seed")
        parser.add_argument("--protocol", default=None, help="protocol profile")
        parser.add_argument(
            "--allow-mobile",
            action="store_true",
            help="compare a mobile scenario although the model assumes no breaks",
        )
        add_formula_mode_argument(parser)
        self.add_out_argument(parser)

    def _model_params(self, options) -> dict:
        if not options["params"]:
            return {}
        params = load_json_file(options["params"])
        if not isinstance(params, dict):
            raise ValidationError("params file must hold an object")
        unknown = set(params) - {"p", "hops", "routes"}
        if unknown:
            raise ValidationError(
                "unknown param field(s): %s" % ", ".join(sorted(unknown))
            )
        return params

    def run(self, *args, **options):
        scenario = load_scenario(options["scenario"])
        if not scenario.is_static and not options["allow_mobile"]:
            raise ValidationError(
                "scenario %s is mobile, the model assumes static routes; "
                "use --allow-mobile to compare anyway" % scenario.name
            )
        model_params = self._model_params(options)
        profile = get_profile(options["protocol"] or scenario.protocol, scenario.profiles)
        simulator = Simulator(
            scenario, profile=profile, seed=options["seed"], record_trace=False
        )
        graph = unit_disk_graph(
            simulator.positions, scenario.radio.range, self._alive_at_start(simulator)
        )
        params = simulator.params
        model = {"rreq": 0.0, "rrep": 0.0}
        fitted = []
        routes = []
        for flow in simulator.flows:
            shape = fit_shape(
                graph,
                flow.source,
                flow.destination,
                p=model_params.get("p", 1.0),
                formula_mode=options["formula_mode"],
            )
            if shape is None:
                continue
            expected_hops = model_params.get("hops")
            if expected_hops is not None and expected_hops != shape.hops:
                message = "flow %d -> %d: hops %s given, topology has %d" % (
                    flow.source,
                    flow.destination,
                    expected_hops,
                    shape.hops,
                )
                logger.warning(message)
                self.stdout.write(self.style.WARNING("warning: %s" % message))
            model["rreq"] += rreq_overhead(shape)
            model["rrep"] += rrep_overhead(shape)
            fitted.append(shape.to_dict())
            routes.append(
                MonitoredRoute(
                    links=shape.hops,
                    lifetime=params.route_life_time + self._active_span(flow, scenario),
                    interval=params.hello_interval,
                )
            )
        if "routes" in model_params:
            routes = coerce_routes(model_params["routes"])
        if profile.hello_monitoring:
            model["hello"] = float(
                sum(hello_overhead_route_discrete(route) for route in routes)
            )
        else:
            model["hello"] = 0.0
        model["total"] = model["rreq"] + model["rrep"] + model["hello"]

        report = simulator.run_until().report
        counts = report.control_counts
        simulated = {
            "rreq": counts[PacketKind.RREQ],
            "rrep": counts[PacketKind.RREP],
            "hello": counts[PacketKind.HELLO],
        }
        simulated["total"] = sum(simulated.values())
        rows = []
        for key in ("rreq", "rrep", "hello", "total"):
            rows.append(
                [
                    key,
                    model[key],
                    simulated[key],
                    simulated[key] - model[key],
                    relative_delta(model[key], simulated[key]),
                ]
            )
        self.stdout.write(
            "%s with %s, seed %d" % (scenario.name, profile.name, simulator.seed)
        )
        self.write_table(["kind", "model", "simulated", "delta", "relative"], rows)
        if options["out"]:
            self.write_json(
                self.output_dir(options)
                / ("%s-%s-compare.json" % (scenario.name, profile.name)),
                {
                    "scenario": scenario.name,
                    "protocol": profile.name,
                    "seed": simulator.seed,
                    "fitted_shapes": fitted,
                    "routes": [route.to_dict() for route in routes],
                    "model": model,
                    "simulated": simulated,
                },
            )

    @staticmethod
    def _alive_at_start(simulator) -> np.ndarray:
        alive = simulator.lifetimes > 0
        for blackout in simulator.scenario.blackouts:
            if blackout.is_active(0.0):
                alive &= ~blackout.covers(simulator.positions)
        return alive

    @staticmethod
    def _active_span(flow, scenario) -> float:
        """Time between the first and the last packet of a flow."""
        first = flow.send_time(0, scenario.duration)
        if first is None:
            return 0.0
        index = flow.packets
        if index is None:
            stop = scenario.duration if flow.stop is None else flow.stop
            index = int(np.floor((min(stop, scenario.duration) - flow.start) * flow.rate))
            index += 1
        last = None
        while last is None and index > 0:
            index -= 1
            last = flow.send_time(index, scenario.duration)
        return last - first
