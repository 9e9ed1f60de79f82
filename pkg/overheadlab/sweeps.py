"""Parameter sweeps: many simulation runs over one varied scenario axis."""
import logging
from dataclasses import dataclass, replace
from typing import Any, Iterator, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np

from django.core.exceptions import ValidationError

from app_utils.logging import LoggerAddTag

from . import __title__
from .constants import SweepAxis
from .engine.scenario import ScenarioConfig, load_document
from .metrics import RunReport
from .protocols.profiles import get_profile

logger = LoggerAddTag(logging.getLogger(__name__), __title__)

SUMMARY_METRICS = ("throughput_bps", "mean_delay_s", "nrl", "control_total")


class SweepCell(NamedTuple):
    axis_index: int
    value: Any
    protocol: str
    seed: int


@dataclass(frozen=True)
class SweepSpec:
    """One axis of variation over a base scenario."""

    name: str
    axis: str
    values: Tuple[Any, ...]
    seeds: Tuple[int, ...]
    protocols: Tuple[str, ...]
    base: ScenarioConfig

    def __post_init__(self):
        if self.axis not in SweepAxis.values:
            raise ValidationError(
                "axis must be one of %s" % SweepAxis.values, code="invalid"
            )
        for name in ("values", "seeds", "protocols"):
            if not getattr(self, name):
                raise ValidationError("%s must not be empty" % name, code="invalid")
        for seed in self.seeds:
            if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
                raise ValidationError("seeds must be integers >= 0", code="invalid")
        for protocol in self.protocols:
            get_profile(protocol, self.base.profiles)
        for value in self.values:
            self.scenario_for(value)

    @property
    def run_count(self) -> int:
        return len(self.values) * len(self.seeds) * len(self.protocols)

    def cells(self) -> Iterator[SweepCell]:
        """All runs ordered by axis value, protocol and seed."""
        for axis_index, value in enumerate(self.values):
            for protocol in sorted(self.protocols):
                for seed in sorted(self.seeds):
                    yield SweepCell(axis_index, value, protocol, seed)

    def scenario_for(self, value) -> ScenarioConfig:
        """The base scenario with the axis set to value."""
        base = self.base
        if self.axis == SweepAxis.SCALABILITY:
            if isinstance(value, bool) or not isinstance(value, int) or value < 2:
                raise ValidationError(
                    "scalability values must be node counts >= 2", code="invalid"
                )
            return base.replace(
                node_count=value, positions=None, name="%s-n%d" % (base.name, value)
            )
        if self.axis == SweepAxis.MOBILITY:
            if isinstance(value, Mapping):
                speed = value.get("speed", base.speed)
                pause = value.get("pause", base.pause)
            else:
                speed, pause = value, base.pause
            for number in (speed, pause):
                if isinstance(number, bool) or not isinstance(number, (int, float)):
                    raise ValidationError(
                        "mobility values must be speeds or {speed, pause}",
                        code="invalid",
                    )
            return base.replace(speed=float(speed), pause=float(pause))
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            raise ValidationError("traffic values must be rates > 0", code="invalid")
        return base.replace(traffic=_with_rate(base.traffic, float(value)))

    @classmethod
    def from_dict(cls, data: Mapping) -> "SweepSpec":
        if not isinstance(data, Mapping):
            raise ValidationError("sweep must be a JSON object", code="invalid")
        for key in ("scenario", "axis", "values", "seeds", "protocols"):
            if key not in data:
                raise ValidationError("sweep is missing %s" % key, code="required")
        scenario = data["scenario"]
        if isinstance(scenario, str):
            document = load_document(scenario)
            document.setdefault("name", scenario)
            scenario = document
        return cls(
            name=str(data.get("name", "sweep")),
            axis=data["axis"],
            values=tuple(data["values"]),
            seeds=tuple(data["seeds"]),
            protocols=tuple(str(protocol) for protocol in data["protocols"]),
            base=ScenarioConfig.from_dict(scenario),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "axis": str(self.axis),
            "values": list(self.values),
            "seeds": list(self.seeds),
            "protocols": list(self.protocols),
            "scenario": self.base.to_dict(),
        }


def _with_rate(traffic, rate: float):
    return replace(
        traffic,
        rate=rate,
        explicit=tuple(replace(flow, rate=rate) for flow in traffic.explicit),
    )


def load_sweep(name_or_path: str) -> SweepSpec:
    data = load_document(name_or_path)
    if "axis" not in data:
        raise ValidationError("%s is not a sweep" % name_or_path, code="invalid")
    return SweepSpec.from_dict(data)


def summarize(rows: Sequence[Tuple[Any, str, RunReport]]) -> List[dict]:
    """Mean and standard deviation per (axis value, protocol) cell.

    rows must be ordered by axis value and protocol. Metrics a run could not
    define, like the delay without deliveries, are left out of the statistics.
    """
    groups = {}
    for value, protocol, report in rows:
        key = (repr(value), protocol)
        groups.setdefault(key, (value, protocol, []))[2].append(report)
    summary = []
    for value, protocol, reports in groups.values():
        entry = {"value": value, "protocol": protocol, "runs": len(reports)}
        for metric in SUMMARY_METRICS:
            samples = [
                getattr(report, metric)
                for report in reports
                if getattr(report, metric) is not None
            ]
            if samples:
                stdev = np.std(samples, ddof=1) if len(samples) > 1 else 0.0
                entry[metric] = {
                    "mean": float(np.mean(samples)),
                    "stdev": float(stdev),
                    "samples": len(samples),
                }
            else:
                entry[metric] = None
        summary.append(entry)
    return summary
