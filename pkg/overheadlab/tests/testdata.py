"""Shared factories for scenarios, shapes and reports used in tests."""
import json
from functools import lru_cache
from pathlib import Path
from typing import List, Sequence

import networkx as nx
import numpy as np

from ..engine.scenario import (
    ScenarioConfig,
    bundled_scenarios,
    load_document,
    load_scenario,
)
from ..engine.simulator import SimulationResult, run_scenario
from ..helpers.topology import unit_disk_graph
from ..metrics import RunReport
from ..models import Sweep
from ..overhead import MonitoredRoute, NetworkShape
from ..sweeps import SweepSpec

_currentdir = Path(__file__).resolve().parent


def line_positions(count: int, spacing: float = 100.0, y: float = 50.0) -> list:
    return [[index * spacing, y] for index in range(count)]


def create_scenario(
    positions: Sequence,
    flows: Sequence = (),
    radio_range: float = 150.0,
    duration: float = 30.0,
    routing: dict = None,
    **kwargs
) -> ScenarioConfig:
    """Static scenario with explicit positions and flows.

    Flows are (source, destination) tuples or flow dicts. Flows given as
    tuples send one packet at t = 1.
    """
    width = max(x for x, _ in positions) + 50
    height = max(y for _, y in positions) + 50
    flow_specs = [
        flow
        if isinstance(flow, dict)
        else {"source": flow[0], "destination": flow[1], "start": 1.0, "packets": 1}
        for flow in flows
    ]
    data = {
        "name": kwargs.pop("name", "test"),
        "area": [width, height],
        "positions": [list(pos) for pos in positions],
        "radio": {"range": radio_range, **kwargs.pop("radio", {})},
        "traffic": {"flows": 0, "flow_specs": flow_specs},
        "routing": routing or {},
        "duration": duration,
    }
    data.update(kwargs)
    return ScenarioConfig.from_dict(data)


def create_line_scenario(count: int = 5, flows=((0, 4),), **kwargs) -> ScenarioConfig:
    return create_scenario(line_positions(count), flows, **kwargs)


@lru_cache(maxsize=None)
def random_graph_positions(
    count: int = 100,
    nodes: int = 20,
    size: float = 600.0,
    radio_range: float = 200.0,
    seed: int = 21,
) -> tuple:
    """Node positions of count random connected unit disk graphs."""
    rng = np.random.default_rng(seed)
    graphs = []
    while len(graphs) < count:
        positions = rng.uniform(0, size, size=(nodes, 2)).round(1)
        if nx.is_connected(unit_disk_graph(positions, radio_range)):
            graphs.append(positions.tolist())
    return tuple(graphs)


def library_scenarios() -> List[str]:
    """Names of the bundled scenarios without the sweeps."""
    return [name for name in bundled_scenarios() if "axis" not in load_document(name)]


@lru_cache(maxsize=None)
def library_run(name: str, protocol: str, seed: int) -> SimulationResult:
    """Run of a bundled scenario, shared between tests."""
    return run_scenario(load_scenario(name), protocol, seed=seed)


def create_shape(**kwargs) -> NetworkShape:
    """The small reference shape: n=10, H=1, p=1, all coverage indices 1."""
    params = {"nodes": 10, "hops": 1, "p": 1.0, "formula_mode": "literal"}
    params.update(kwargs)
    return NetworkShape(**params)


def create_route(links: int = 1, lifetime: float = 10.0, interval: float = 1.0):
    return MonitoredRoute(links=links, lifetime=lifetime, interval=interval)


def create_report(**kwargs) -> RunReport:
    params = {
        "scenario_id": "test",
        "protocol": "aodv",
        "seed": 1,
        "nodes": 5,
        "duration": 100.0,
    }
    params.update(kwargs)
    return RunReport(**params).finalize()


def write_json(path: Path, data) -> str:
    with Path(path).open("w", encoding="utf-8") as file:
        json.dump(data, file)
    return str(path)


def model_fixture_rows() -> list:
    with (_currentdir / "testdata_params.json").open("r", encoding="utf-8") as file:
        return json.load(file)


def create_sweep(**kwargs) -> Sweep:
    """Stored sweep over static-line-5, by default 2 rates x 2 seeds x 2 protocols."""
    data = {
        "name": "small",
        "scenario": "static-line-5",
        "axis": "traffic",
        "values": [1.0, 2.0],
        "seeds": [1, 2],
        "protocols": ["dsr", "aodv"],
    }
    data.update(kwargs)
    return Sweep.objects.create_from_spec(SweepSpec.from_dict(data))
