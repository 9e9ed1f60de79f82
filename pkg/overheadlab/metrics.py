"""Throughput, delay and routing load of simulation runs."""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from django.core.exceptions import ValidationError

from app_utils.logging import LoggerAddTag

from . import __title__
from .constants import PacketKind

logger = LoggerAddTag(logging.getLogger(__name__), __title__)

CSV_COLUMNS = (
    "seed",
    "scenario_id",
    "protocol",
    "nodes",
    "speed",
    "pause",
    "throughput_bps",
    "mean_delay_s",
    "nrl",
    "rreq",
    "rrep",
    "rerr",
    "hello",
    "ack",
    "throughput_pps",
)


def _empty_control_counts() -> Dict[str, int]:
    return {str(kind): 0 for kind in PacketKind.control_kinds()}


@dataclass
class RunReport:
    """Counters and metrics of one simulation run."""

    scenario_id: str = ""
    protocol: str = ""
    seed: int = 0
    nodes: int = 0
    speed: float = 0.0
    pause: float = 0.0
    duration: float = 0.0
    data_sent: int = 0
    data_delivered: int = 0
    bytes_delivered: int = 0
    data_transmissions: int = 0
    control_counts: Dict[str, int] = field(default_factory=_empty_control_counts)
    delays: List[float] = field(default_factory=list)
    drops: Dict[str, int] = field(default_factory=dict)
    gratuitous_rreps: int = 0
    trace_digest: str = ""
    throughput_bps: float = 0.0
    throughput_pps: float = 0.0
    mean_delay_s: Optional[float] = None
    paper_ed_s: Optional[float] = None
    nrl: Optional[float] = None
    paper_routing_load: float = 0.0

    @property
    def control_total(self) -> int:
        return sum(self.control_counts.values())

    def finalize(self) -> "RunReport":
        """Compute the derived metrics from the counters."""
        self.throughput_bps = throughput(self)
        self.throughput_pps = self.data_delivered / self.duration
        self.mean_delay_s = end_to_end_delay(self)
        self.paper_ed_s = paper_end_to_end_delay(self)
        self.nrl = normalized_routing_load(self)
        self.paper_routing_load = paper_routing_load(self)
        return self

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "protocol": self.protocol,
            "seed": self.seed,
            "nodes": self.nodes,
            "speed": self.speed,
            "pause": self.pause,
            "duration": self.duration,
            "data_sent": self.data_sent,
            "data_delivered": self.data_delivered,
            "bytes_delivered": self.bytes_delivered,
            "data_transmissions": self.data_transmissions,
            "control_counts": dict(self.control_counts),
            "control_total": self.control_total,
            "delays": list(self.delays),
            "drops": dict(sorted(self.drops.items())),
            "gratuitous_rreps": self.gratuitous_rreps,
            "trace_digest": self.trace_digest,
            "throughput_bps": self.throughput_bps,
            "throughput_pps": self.throughput_pps,
            "mean_delay_s": self.mean_delay_s,
            "paper_ed_s": self.paper_ed_s,
            "nrl": self.nrl,
            "paper_routing_load": self.paper_routing_load,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RunReport":
        params = dict(data)
        params.pop("control_total", None)
        return cls(**params)

    def csv_row(self) -> list:
        return [
            self.seed,
            self.scenario_id,
            self.protocol,
            self.nodes,
            self.speed,
            self.pause,
            self.throughput_bps,
            "" if self.mean_delay_s is None else self.mean_delay_s,
            "" if self.nrl is None else self.nrl,
            self.control_counts[PacketKind.RREQ],
            self.control_counts[PacketKind.RREP],
            self.control_counts[PacketKind.RERR],
            self.control_counts[PacketKind.HELLO],
            self.control_counts[PacketKind.ACK],
            self.throughput_pps,
        ]


def throughput(report: RunReport) -> float:
    """Delivered bits per second."""
    if not report.duration > 0:
        raise ValidationError("duration must be > 0", code="invalid")
    return report.bytes_delivered * 8 / report.duration


def end_to_end_delay(report: RunReport) -> Optional[float]:
    """Mean one-way delay from application enqueue to delivery or None."""
    if not report.delays:
        return None
    return float(np.mean(report.delays))


def paper_end_to_end_delay(report: RunReport) -> Optional[float]:
    """(transmitted * RTT) / received with RTT taken as twice the mean delay."""
    mean_delay = end_to_end_delay(report)
    if mean_delay is None or not report.data_delivered:
        return None
    return report.data_sent * 2 * mean_delay / report.data_delivered


def normalized_routing_load(report: RunReport) -> Optional[float]:
    """Control transmissions per delivered data packet or None."""
    if not report.data_delivered:
        return None
    return report.control_total / report.data_delivered


def paper_routing_load(report: RunReport) -> int:
    """(routing + data transmissions) - data packets sent."""
    return report.control_total + report.data_transmissions - report.data_sent


class MetricsCollector:
    """Collects counters during a run."""

    def __init__(self) -> None:
        self.control_counts = _empty_control_counts()
        self.data_transmissions = 0
        self.data_sent = 0
        self.bytes_delivered = 0
        self.gratuitous_rreps = 0
        self.drops = Counter()
        self.delays: Dict[int, float] = {}
        self.delivered_paths: Dict[int, tuple] = {}

    def on_transmit(self, packet) -> None:
        if packet.is_control:
            self.control_counts[packet.kind] += 1
        else:
            self.data_transmissions += 1

    def on_data_sent(self, packet) -> None:
        self.data_sent += 1

    def on_delivered(self, packet, now: float) -> bool:
        """Record a delivery. Returns False for a duplicate."""
        if packet.data_id in self.delays:
            self.drops["duplicate"] += 1
            return False
        self.delays[packet.data_id] = now - packet.sent_at
        self.delivered_paths[packet.data_id] = tuple(packet.path)
        self.bytes_delivered += packet.payload_size
        return True

    def on_drop(self, reason: str) -> None:
        self.drops[reason] += 1

    def on_gratuitous_rrep(self) -> None:
        self.gratuitous_rreps += 1

    def build_report(self, duration: float, **identity) -> RunReport:
        report = RunReport(
            duration=duration,
            data_sent=self.data_sent,
            data_delivered=len(self.delays),
            bytes_delivered=self.bytes_delivered,
            data_transmissions=self.data_transmissions,
            control_counts=dict(self.control_counts),
            delays=list(self.delays.values()),
            drops=dict(self.drops),
            gratuitous_rreps=self.gratuitous_rreps,
            **identity,
        )
        return report.finalize()


TREND_CLAIMS = {
    "dymo_lower_overhead_than_aodv": ("dymo", "aodv"),
    "dsr_throughput_at_least_dymo": ("dsr", "dymo"),
    "aodv_delay_at_least_dsr": ("aodv", "dsr"),
}


def _claim_holds(claim: str, first: RunReport, second: RunReport) -> bool:
    if claim == "dymo_lower_overhead_than_aodv":
        return first.control_total < second.control_total
    if claim == "dsr_throughput_at_least_dymo":
        return first.throughput_bps >= second.throughput_bps
    if first.mean_delay_s is None or second.mean_delay_s is None:
        return False
    return first.mean_delay_s >= second.mean_delay_s


def evaluate_trends(reports: Mapping[str, Sequence[RunReport]]) -> dict:
    """Check the protocol comparison claims seed by seed.

    reports maps a protocol name to its reports, aligned by seed. A claim
    passes when it holds for a strict majority of seeds.
    """
    result = {}
    for claim, (first, second) in TREND_CLAIMS.items():
        pairs = list(zip(reports.get(first, ()), reports.get(second, ())))
        holds = sum(_claim_holds(claim, a, b) for a, b in pairs)
        result[claim] = {
            "holds": holds,
            "seeds": len(pairs),
            "passed": bool(pairs) and holds * 2 > len(pairs),
        }
        logger.info("Trend %s holds in %d of %d seeds", claim, holds, len(pairs))
    return result
