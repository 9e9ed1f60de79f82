"""Closed-form control overhead of reactive route discovery and link monitoring.

All counts are expectations in packets and therefore real-valued.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from django.core.exceptions import ValidationError

from app_utils.logging import LoggerAddTag

from . import __title__
from .app_settings import OVERHEADLAB_FORMULA_MODE
from .constants import FormulaMode

logger = LoggerAddTag(logging.getLogger(__name__), __title__)

COVERAGE_INDICES = (2, 3, 4)

# tolerance for the floor in the discrete HELLO count, e.g. 0.3 / 0.1
FLOOR_TOLERANCE = 1e-9


def _default_coverage() -> dict:
    return {i: 1.0 for i in COVERAGE_INDICES}


@dataclass(frozen=True)
class NetworkShape:
    """Analytic parameters of the modeled network.

    nodes: node count
    hops: expected hop count from source to destination
    p: forwarding / connectivity probability
    coverage: additional coverage index per neighbor count 2, 3 and 4
    tier_neighbors: expected neighbors at hop tiers 1 .. hops - 1
    tier_reserve: neighbor counts for the tiers beyond the current hop count,
        only consumed when the hop count itself is varied
    """

    nodes: int
    hops: int
    p: float = 1.0
    coverage: Mapping[int, float] = field(default_factory=_default_coverage)
    tier_neighbors: Tuple[float, ...] = ()
    formula_mode: str = OVERHEADLAB_FORMULA_MODE
    tier_reserve: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tier_neighbors", tuple(self.tier_neighbors))
        object.__setattr__(self, "tier_reserve", tuple(self.tier_reserve))
        coverage = _default_coverage()
        coverage.update({int(k): v for k, v in dict(self.coverage).items()})
        object.__setattr__(self, "coverage", coverage)
        self.validate()

    def validate(self) -> None:
        if isinstance(self.nodes, bool) or not isinstance(self.nodes, int):
            raise ValidationError("nodes must be an integer", code="invalid")
        if self.nodes < 2:
            raise ValidationError("nodes must be >= 2", code="invalid")
        if isinstance(self.hops, bool) or not isinstance(self.hops, int):
            raise ValidationError("hops must be an integer", code="invalid")
        if self.hops < 1:
            raise ValidationError("hops must be >= 1", code="invalid")
        if not _is_real(self.p) or not 0.0 <= self.p <= 1.0:
            raise ValidationError("p out of [0,1]", code="invalid")
        if set(self.coverage) != set(COVERAGE_INDICES):
            raise ValidationError(
                "coverage keys must be exactly %s" % list(COVERAGE_INDICES),
                code="invalid",
            )
        for index, value in self.coverage.items():
            if not _is_real(value) or value < 0:
                raise ValidationError(
                    "coverage[%d] must be >= 0" % index, code="invalid"
                )
        if len(self.tier_neighbors) != self.hops - 1:
            raise ValidationError(
                "tier_neighbors must hold hops - 1 = %d values, got %d"
                % (self.hops - 1, len(self.tier_neighbors)),
                code="invalid",
            )
        for name in ("tier_neighbors", "tier_reserve"):
            for value in getattr(self, name):
                if not _is_real(value) or value < 0:
                    raise ValidationError(
                        "%s values must be >= 0" % name, code="invalid"
                    )
        if self.formula_mode not in FormulaMode.values:
            raise ValidationError(
                "formula_mode must be one of %s" % FormulaMode.values, code="invalid"
            )

    @property
    def tier_total(self) -> float:
        return float(sum(self.tier_neighbors))

    @property
    def coverage_vector(self) -> np.ndarray:
        return np.array([self.coverage[i] for i in COVERAGE_INDICES], dtype=float)

    def with_hops(self, hops: int) -> "NetworkShape":
        """Return this shape with a different hop count.

        Tiers for a larger hop count are taken from tier_reserve.
        """
        tiers = self.tier_neighbors + self.tier_reserve
        if hops - 1 > len(tiers):
            raise ValidationError(
                "hops %d exceeds configured tier data (%d tiers available)"
                % (hops, len(tiers)),
                code="missing_tiers",
            )
        return NetworkShape(
            nodes=self.nodes,
            hops=hops,
            p=self.p,
            coverage=self.coverage,
            tier_neighbors=tiers[: hops - 1],
            formula_mode=self.formula_mode,
            tier_reserve=tiers[hops - 1 :],
        )

    @classmethod
    def from_dict(cls, data: Mapping, formula_mode: str = None) -> "NetworkShape":
        known = {
            "nodes",
            "hops",
            "p",
            "coverage",
            "tier_neighbors",
            "formula_mode",
            "tier_reserve",
        }
        missing = {"nodes", "hops"} - set(data)
        if missing:
            raise ValidationError(
                "missing field(s): %s" % ", ".join(sorted(missing)), code="required"
            )
        params = {key: value for key, value in data.items() if key in known}
        if formula_mode:
            params["formula_mode"] = formula_mode
        return cls(**params)

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "hops": self.hops,
            "p": self.p,
            "coverage": {str(k): v for k, v in sorted(self.coverage.items())},
            "tier_neighbors": list(self.tier_neighbors),
            "formula_mode": str(self.formula_mode),
            "tier_reserve": list(self.tier_reserve),
        }


@dataclass(frozen=True)
class MonitoredRoute:
    """Maintenance parameters of one established route."""

    links: int
    lifetime: float
    interval: float

    def __post_init__(self):
        if isinstance(self.links, bool) or not isinstance(self.links, int):
            raise ValidationError("links must be an integer", code="invalid")
        if self.links < 1:
            raise ValidationError("links must be >= 1", code="invalid")
        if not _is_real(self.lifetime) or self.lifetime < 0:
            raise ValidationError("lifetime must be >= 0", code="invalid")
        if not _is_real(self.interval) or self.interval <= 0:
            raise ValidationError("interval must be > 0", code="invalid")

    @classmethod
    def from_dict(cls, data: Mapping) -> "MonitoredRoute":
        try:
            return cls(
                links=data["links"], lifetime=data["lifetime"], interval=data["interval"]
            )
        except KeyError as ex:
            raise ValidationError("missing field: %s" % ex.args[0], code="required")

    def to_dict(self) -> dict:
        return {"links": self.links, "lifetime": self.lifetime, "interval": self.interval}


@dataclass(frozen=True)
class OverheadBreakdown:
    rreq: float
    rrep: float
    discovery: float
    hello: float
    total: float

    @classmethod
    def from_parts(cls, rreq: float, rrep: float, hello: float) -> "OverheadBreakdown":
        discovery = rreq + rrep
        return cls(
            rreq=rreq, rrep=rrep, discovery=discovery, hello=hello, total=discovery + hello
        )

    def to_dict(self) -> dict:
        return {
            "rreq": self.rreq,
            "rrep": self.rrep,
            "discovery": self.discovery,
            "hello": self.hello,
            "total": self.total,
        }


def _is_real(value) -> bool:
    return (
        isinstance(value, (int, float))
        and not isinstance(value, bool)
        and math.isfinite(value)
    )


def tier_factor(hops: int, formula_mode: str) -> float:
    """Sum over tiers k = 1..hops of the per-tier broadcast factor."""
    if formula_mode == FormulaMode.TIERED:
        return float(sum(4 * 3 ** (k - 1) for k in range(1, hops + 1)))
    return float(hops * 4 * 3 ** (hops - 1))


def coverage_brackets(nodes: float, tier_total: float) -> np.ndarray:
    """Bracket terms (nodes - 1 - i) - tier_total for i = 2, 3, 4, unclamped."""
    return (nodes - 1 - np.array(COVERAGE_INDICES, dtype=float)) - tier_total


def rreq_value(
    nodes: float,
    hops: int,
    p: float,
    coverage: np.ndarray,
    tier_total: float,
    formula_mode: str,
) -> float:
    """Request overhead for a real-valued node count, negative brackets clamped."""
    brackets = np.maximum(coverage_brackets(nodes, tier_total), 0.0)
    return tier_factor(hops, formula_mode) * float(np.dot(brackets, coverage)) * p


def rrep_value(nodes: float, hops: int, p: float) -> float:
    """Reply overhead for a real-valued node count, never below the hop count."""
    return max(float(hops), hops + hops / 2 * (nodes - hops - 2) * p)


def rreq_overhead(shape: NetworkShape) -> float:
    """Expected number of route request transmissions of one discovery."""
    shape.validate()
    return rreq_value(
        shape.nodes,
        shape.hops,
        shape.p,
        shape.coverage_vector,
        shape.tier_total,
        shape.formula_mode,
    )


def rrep_overhead(shape: NetworkShape) -> float:
    """Expected number of route reply transmissions of one discovery."""
    shape.validate()
    return rrep_value(shape.nodes, shape.hops, shape.p)


def discovery_overhead(shape: NetworkShape) -> float:
    return rreq_overhead(shape) + rrep_overhead(shape)


def hello_overhead_route(route: MonitoredRoute) -> float:
    """HELLO messages needed to monitor one route: 2 per link per interval."""
    return 2 * (route.lifetime / route.interval) * route.links


def hello_overhead_route_discrete(route: MonitoredRoute) -> int:
    """HELLO messages actually emitted when beacons fire at whole intervals."""
    periods = math.floor(route.lifetime / route.interval + FLOOR_TOLERANCE)
    return 2 * route.links * periods


def coerce_routes(routes: Iterable) -> List[MonitoredRoute]:
    """Turn a sequence of routes or route dicts into validated routes.

    Errors name the position of the offending route.
    """
    result = []
    for index, route in enumerate(routes or ()):
        try:
            if not isinstance(route, MonitoredRoute):
                route = MonitoredRoute.from_dict(route)
        except (ValidationError, TypeError) as ex:
            message = "; ".join(ex.messages) if hasattr(ex, "messages") else str(ex)
            raise ValidationError(
                "route %d: %s" % (index, message), code="invalid_route"
            )
        result.append(route)
    return result


def hello_overhead_total(routes: Sequence) -> float:
    return float(sum(hello_overhead_route(route) for route in coerce_routes(routes)))


def aggregate_overhead(shape: NetworkShape, routes: Sequence) -> OverheadBreakdown:
    """Aggregate overhead of discovery plus link monitoring."""
    breakdown = OverheadBreakdown.from_parts(
        rreq=rreq_overhead(shape),
        rrep=rrep_overhead(shape),
        hello=hello_overhead_total(routes),
    )
    logger.debug("Aggregate overhead for %s: %s", shape, breakdown)
    return breakdown
