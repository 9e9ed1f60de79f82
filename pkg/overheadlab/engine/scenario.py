"""Scenario configuration of one simulation run."""
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from django.core.exceptions import ValidationError

from ..constants import Placement
from .radio import RadioModel

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def _number(data: Mapping, key: str, default, minimum=None, strict=False) -> float:
    value = data.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError("%s must be a number" % key, code="invalid")
    if not math.isfinite(value):
        raise ValidationError("%s must be finite" % key, code="invalid")
    if minimum is not None and (value <= minimum if strict else value < minimum):
        raise ValidationError(
            "%s must be %s %s" % (key, ">" if strict else ">=", minimum), code="invalid"
        )
    return value


def _as_float(value, what: str) -> float:
    if (
        isinstance(value, bool)
        or not isinstance(value, (int, float))
        or not math.isfinite(value)
    ):
        raise ValidationError("%s must be a finite number" % what, code="invalid")
    return float(value)


def _lifetimes(data: Mapping) -> Dict[int, float]:
    lifetimes = data.get("lifetimes", {})
    if not isinstance(lifetimes, Mapping):
        raise ValidationError("lifetimes must map node ids to seconds", code="invalid")
    result = {}
    for node, value in lifetimes.items():
        try:
            node_id = int(node)
        except (TypeError, ValueError):
            raise ValidationError(
                "lifetimes: %r is not a node id" % (node,), code="invalid"
            ) from None
        result[node_id] = _as_float(value, "lifetime of node %s" % node)
    return result


def _integer(data: Mapping, key: str, default, minimum=None) -> int:
    value = data.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError("%s must be an integer" % key, code="invalid")
    if minimum is not None and value < minimum:
        raise ValidationError("%s must be >= %s" % (key, minimum), code="invalid")
    return value


@dataclass(frozen=True)
class Blackout:
    """Rectangular region where nodes are down between start and end."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float
    start: float = 0.0
    end: Optional[float] = None

    def __post_init__(self):
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValidationError("blackout region is empty", code="invalid")
        if self.end is not None and self.end <= self.start:
            raise ValidationError("blackout end must be after start", code="invalid")

    def is_active(self, now: float) -> bool:
        return self.start <= now and (self.end is None or now < self.end)

    def covers(self, positions: np.ndarray) -> np.ndarray:
        x, y = positions[:, 0], positions[:, 1]
        return (
            (x >= self.x_min) & (x <= self.x_max) & (y >= self.y_min) & (y <= self.y_max)
        )

    @classmethod
    def from_dict(cls, data: Mapping) -> "Blackout":
        region = data.get("region")
        if not isinstance(region, (list, tuple)) or len(region) != 4:
            raise ValidationError(
                "blackout region must be [x_min, y_min, x_max, y_max]", code="invalid"
            )
        return cls(
            *[_as_float(value, "blackout region") for value in region],
            start=_number(data, "start", 0.0, minimum=0),
            end=_number(data, "end", None),
        )

    def to_dict(self) -> dict:
        return {
            "region": [self.x_min, self.y_min, self.x_max, self.y_max],
            "start": self.start,
            "end": self.end,
        }


@dataclass(frozen=True)
class FlowSpec:
    """Constant bit rate flow between two nodes."""

    source: int
    destination: int
    start: float = 1.0
    stop: Optional[float] = None
    rate: float = 4.0
    packet_size: int = 512
    packets: Optional[int] = None

    def send_time(self, index: int, duration: float) -> Optional[float]:
        """Time of the index-th packet or None when the flow is over."""
        if self.packets is not None and index >= self.packets:
            return None
        time = self.start + index / self.rate
        stop = duration if self.stop is None else min(self.stop, duration)
        if time > stop:
            return None
        return time

    @classmethod
    def from_dict(cls, data: Mapping) -> "FlowSpec":
        for key in ("source", "destination"):
            if data.get(key) is None:
                raise ValidationError("flow is missing %s" % key, code="required")
        return cls(
            source=_integer(data, "source", None, minimum=0),
            destination=_integer(data, "destination", None, minimum=0),
            start=_number(data, "start", 1.0, minimum=0),
            stop=_number(data, "stop", None),
            rate=_number(data, "rate", 4.0, minimum=0, strict=True),
            packet_size=_integer(data, "packet_size", 512, minimum=1),
            packets=_integer(data, "packets", None, minimum=0),
        )

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "destination": self.destination,
            "start": self.start,
            "stop": self.stop,
            "rate": self.rate,
            "packet_size": self.packet_size,
            "packets": self.packets,
        }


@dataclass(frozen=True)
class TrafficConfig:
    """Application traffic: explicit flows or randomly drawn CBR flows."""

    flows: int = 10
    rate: float = 4.0
    packet_size: int = 512
    start: float = 1.0
    stop: Optional[float] = None
    explicit: Tuple[FlowSpec, ...] = ()

    def build_flows(self, node_count: int, rng: np.random.Generator) -> List[FlowSpec]:
        if self.explicit:
            return list(self.explicit)
        if node_count < 2:
            return []
        flows = []
        for _ in range(self.flows):
            source, destination = rng.choice(node_count, size=2, replace=False)
            flows.append(
                FlowSpec(
                    source=int(source),
                    destination=int(destination),
                    start=self.start + float(rng.uniform(0.0, 1.0 / self.rate)),
                    stop=self.stop,
                    rate=self.rate,
                    packet_size=self.packet_size,
                )
            )
        return flows

    @classmethod
    def from_dict(cls, data: Mapping) -> "TrafficConfig":
        explicit = tuple(FlowSpec.from_dict(flow) for flow in data.get("flow_specs", ()))
        return cls(
            flows=_integer(data, "flows", 10, minimum=0),
            rate=_number(data, "rate", 4.0, minimum=0, strict=True),
            packet_size=_integer(data, "packet_size", 512, minimum=1),
            start=_number(data, "start", 1.0, minimum=0),
            stop=_number(data, "stop", None),
            explicit=explicit,
        )

    def to_dict(self) -> dict:
        return {
            "flows": self.flows,
            "rate": self.rate,
            "packet_size": self.packet_size,
            "start": self.start,
            "stop": self.stop,
            "flow_specs": [flow.to_dict() for flow in self.explicit],
        }


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything that determines one simulation run, together with the seed."""

    name: str = "custom"
    area: Tuple[float, float] = (1000.0, 1000.0)
    node_count: int = 50
    placement: str = Placement.UNIFORM_RANDOM
    positions: Optional[Tuple[Tuple[float, float], ...]] = None
    speed: float = 0.0
    pause: float = 0.0
    radio: RadioModel = field(default_factory=RadioModel)
    blackouts: Tuple[Blackout, ...] = ()
    lifetimes: Dict[int, float] = field(default_factory=dict)
    traffic: TrafficConfig = field(default_factory=TrafficConfig)
    duration: float = 100.0
    seed: int = 1
    protocol: str = "aodv"
    routing: Dict[str, object] = field(default_factory=dict)
    profiles: Dict[str, dict] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.area) != 2 or min(self.area) <= 0:
            raise ValidationError("area must be two positive lengths", code="invalid")
        if self.node_count < 1:
            raise ValidationError("node_count must be >= 1", code="invalid")
        if self.placement not in Placement.values:
            raise ValidationError(
                "placement must be one of %s" % Placement.values, code="invalid"
            )
        if self.positions is not None:
            if len(self.positions) != self.node_count:
                raise ValidationError(
                    "positions must hold node_count = %d entries" % self.node_count,
                    code="invalid",
                )
            for x, y in self.positions:
                if not (0 <= x <= self.area[0] and 0 <= y <= self.area[1]):
                    raise ValidationError(
                        "position (%s, %s) outside area" % (x, y), code="invalid"
                    )
        if self.speed < 0 or self.pause < 0:
            raise ValidationError("speed and pause must be >= 0", code="invalid")
        if not self.duration > 0:
            raise ValidationError("duration must be > 0", code="invalid")
        for node, lifetime in self.lifetimes.items():
            if not 0 <= node < self.node_count:
                raise ValidationError("lifetime for unknown node %s" % node)
            if lifetime < 0:
                raise ValidationError("lifetime of node %s must be >= 0" % node)
        for flow in self.traffic.explicit:
            for node in (flow.source, flow.destination):
                if not 0 <= node < self.node_count:
                    raise ValidationError("flow references unknown node %s" % node)

    @property
    def is_static(self) -> bool:
        return self.speed == 0

    def initial_positions(self, rng: np.random.Generator) -> np.ndarray:
        if self.positions is not None:
            return np.array(self.positions, dtype=float)
        if self.placement == Placement.GRID:
            return grid_positions(self.node_count, self.area)
        return rng.uniform((0.0, 0.0), self.area, size=(self.node_count, 2))

    def replace(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ScenarioConfig":
        if not isinstance(data, Mapping):
            raise ValidationError("scenario must be a JSON object", code="invalid")
        known = {
            "name",
            "area",
            "node_count",
            "placement",
            "positions",
            "speed",
            "pause",
            "radio",
            "blackouts",
            "lifetimes",
            "traffic",
            "duration",
            "seed",
            "protocol",
            "routing",
            "profiles",
            "description",
        }
        unknown = set(data) - known
        if unknown:
            raise ValidationError(
                "unknown scenario field(s): %s" % ", ".join(sorted(unknown)),
                code="invalid",
            )
        positions = data.get("positions")
        if positions is not None:
            if not isinstance(positions, (list, tuple)) or not all(
                isinstance(pos, (list, tuple)) and len(pos) == 2 for pos in positions
            ):
                raise ValidationError(
                    "positions must be a list of [x, y]", code="invalid"
                )
            positions = tuple(
                (_as_float(x, "position"), _as_float(y, "position"))
                for x, y in positions
            )
        node_count = _integer(
            data, "node_count", len(positions) if positions else 50, minimum=1
        )
        blackouts = data.get("blackouts", ())
        if not isinstance(blackouts, (list, tuple)) or not all(
            isinstance(obj, Mapping) for obj in blackouts
        ):
            raise ValidationError("blackouts must be a list of objects", code="invalid")
        area = data.get("area", (1000.0, 1000.0))
        if not isinstance(area, (list, tuple)) or len(area) != 2:
            raise ValidationError("area must be [width, height]", code="invalid")
        return cls(
            name=str(data.get("name", "custom")),
            area=(_as_float(area[0], "area"), _as_float(area[1], "area")),
            node_count=node_count,
            placement=data.get("placement", Placement.UNIFORM_RANDOM),
            positions=positions,
            speed=_number(data, "speed", 0.0, minimum=0),
            pause=_number(data, "pause", 0.0, minimum=0),
            radio=RadioModel.from_dict(data.get("radio", {})),
            blackouts=tuple(Blackout.from_dict(obj) for obj in blackouts),
            lifetimes=_lifetimes(data),
            traffic=TrafficConfig.from_dict(data.get("traffic", {})),
            duration=_number(data, "duration", 100.0, minimum=0, strict=True),
            seed=_integer(data, "seed", 1, minimum=0),
            protocol=str(data.get("protocol", "aodv")),
            routing=dict(data.get("routing", {})),
            profiles=dict(data.get("profiles", {})),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "area": list(self.area),
            "node_count": self.node_count,
            "placement": str(self.placement),
            "positions": [list(pos) for pos in self.positions]
            if self.positions is not None
            else None,
            "speed": self.speed,
            "pause": self.pause,
            "radio": self.radio.to_dict(),
            "blackouts": [blackout.to_dict() for blackout in self.blackouts],
            "lifetimes": {str(k): v for k, v in sorted(self.lifetimes.items())},
            "traffic": self.traffic.to_dict(),
            "duration": self.duration,
            "seed": self.seed,
            "protocol": self.protocol,
            "routing": dict(self.routing),
            "profiles": dict(self.profiles),
        }


def grid_positions(node_count: int, area: Tuple[float, float]) -> np.ndarray:
    """Nodes at the centers of an almost square grid of cells, row by row."""
    columns = math.ceil(math.sqrt(node_count))
    rows = math.ceil(node_count / columns)
    dx, dy = area[0] / columns, area[1] / rows
    index = np.arange(node_count)
    return np.column_stack(
        ((index % columns + 0.5) * dx, (index // columns + 0.5) * dy)
    )


def bundled_scenarios() -> List[str]:
    return sorted(path.stem for path in SCENARIO_DIR.glob("*.json"))


def load_document(name_or_path: str) -> dict:
    """Load a JSON document by bundled scenario name or by file path."""
    path = Path(name_or_path)
    bundled = SCENARIO_DIR / ("%s.json" % name_or_path)
    if bundled.is_file():
        path = bundled
    elif not path.is_file():
        raise ValidationError(
            "unknown scenario %s, bundled ones are: %s"
            % (name_or_path, ", ".join(bundled_scenarios())),
            code="not_found",
        )
    try:
        with path.open("r", encoding="utf-8") as file:
            return json.load(file)
    except json.JSONDecodeError as ex:
        raise ValidationError("%s is not valid JSON: %s" % (path, ex), code="invalid")


def load_scenario(name_or_path: str) -> ScenarioConfig:
    data = load_document(name_or_path)
    if "scenario" in data and "axis" in data:
        raise ValidationError(
            "%s is a sweep, not a scenario" % name_or_path, code="invalid"
        )
    data.setdefault("name", Path(name_or_path).stem)
    return ScenarioConfig.from_dict(data)
