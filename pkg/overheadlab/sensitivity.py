"""Rate of change of the aggregate overhead with respect to n, H, T and t."""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from django.core.exceptions import ValidationError

from app_utils.logging import LoggerAddTag

from . import __title__
from .app_settings import OVERHEADLAB_FD_MIN_STEP, OVERHEADLAB_FD_RELATIVE_STEP
from .constants import DerivativeMethod
from .overhead import (
    MonitoredRoute,
    NetworkShape,
    coerce_routes,
    coverage_brackets,
    discovery_overhead,
    rrep_value,
    rreq_value,
    tier_factor,
)

logger = LoggerAddTag(logging.getLogger(__name__), __title__)

PARAMETERS = ("n", "H", "T", "t")


@dataclass(frozen=True)
class ParamDelta:
    dn: float = 0.0
    dH: float = 0.0
    dT: float = 0.0
    dt: float = 0.0

    def __post_init__(self):
        for name in ("dn", "dH", "dT", "dt"):
            value = getattr(self, name)
            if (
                isinstance(value, bool)
                or not isinstance(value, (int, float))
                or not math.isfinite(value)
            ):
                raise ValidationError("%s must be a finite number" % name, code="invalid")

    @classmethod
    def parse(cls, text: str) -> "ParamDelta":
        """Parse a delta spec like ``dn=1,dT=0.5``."""
        values = {}
        for part in (text or "").split(","):
            part = part.strip()
            if not part:
                continue
            key, sep, raw = part.partition("=")
            key = key.strip()
            if not sep or key not in ("dn", "dH", "dT", "dt"):
                raise ValidationError("invalid delta component: %s" % part)
            try:
                values[key] = float(raw)
            except ValueError:
                raise ValidationError("%s must be a finite number" % key)
        return cls(**values)

    @classmethod
    def from_dict(cls, data) -> "ParamDelta":
        if not isinstance(data, dict):
            raise ValidationError("delta must be an object", code="invalid")
        unknown = set(data) - {"dn", "dH", "dT", "dt"}
        if unknown:
            raise ValidationError(
                "unknown delta component(s): %s" % ", ".join(sorted(unknown)),
                code="invalid",
            )
        return cls(**data)

    def as_dict(self) -> Dict[str, float]:
        return {"n": self.dn, "H": self.dH, "T": self.dT, "t": self.dt}

    def scaled(self, factor: float) -> "ParamDelta":
        return ParamDelta(
            dn=self.dn * factor,
            dH=self.dH * factor,
            dT=self.dT * factor,
            dt=self.dt * factor,
        )


@dataclass
class SensitivityReport:
    partials: Dict[str, Optional[float]]
    method: str
    total_differential: float
    flags: List[str] = field(default_factory=list)
    delta: ParamDelta = field(default_factory=ParamDelta)

    def to_dict(self) -> dict:
        return {
            "method": str(self.method),
            "partials": dict(self.partials),
            "delta": self.delta.as_dict(),
            "total_differential": self.total_differential,
            "flags": list(self.flags),
        }


def fd_step(value: float) -> float:
    """Default central difference step for a parameter value."""
    return max(OVERHEADLAB_FD_RELATIVE_STEP * abs(value), OVERHEADLAB_FD_MIN_STEP)


def finite_difference(fn: Callable[[float], float], point: float, step: float) -> float:
    """Central difference of fn at point.

    Raises ValidationError when step is not positive or fn is undefined at a
    shifted point.
    """
    if not step > 0:
        raise ValidationError("step must be > 0", code="invalid")
    values = []
    for x in (point + step, point - step):
        try:
            values.append(float(fn(x)))
        except ValidationError as ex:
            raise ValidationError(
                "domain violation at %s: %s" % (x, "; ".join(ex.messages)),
                code="domain",
            )
        except (ValueError, ZeroDivisionError, ArithmeticError) as ex:
            raise ValidationError("domain violation at %s: %s" % (x, ex), code="domain")
    return (values[0] - values[1]) / (2 * step)


def _validate_method(method: str) -> str:
    if method not in DerivativeMethod.values:
        raise ValidationError(
            "method must be one of %s" % DerivativeMethod.values, code="invalid"
        )
    return method


def _discovery_at_nodes(shape: NetworkShape, nodes: float) -> float:
    return rreq_value(
        nodes,
        shape.hops,
        shape.p,
        shape.coverage_vector,
        shape.tier_total,
        shape.formula_mode,
    ) + rrep_value(nodes, shape.hops, shape.p)


def nodes_clamp_flags(shape: NetworkShape) -> List[str]:
    """Flags for clamp boundaries that lie within one finite-difference step of n."""
    if shape.p == 0:
        return []
    step = fd_step(shape.nodes)
    flags = []
    brackets = coverage_brackets(shape.nodes, shape.tier_total)
    near_kink = (np.abs(brackets) <= step) & (shape.coverage_vector > 0)
    for index in np.flatnonzero(near_kink):
        flags.append("n: request term %d at clamp boundary" % (index + 2))
    if abs(shape.nodes - shape.hops - 2) <= step:
        flags.append("n: reply term at clamp boundary")
    return flags


def partial_wrt_nodes(
    shape: NetworkShape,
    routes: Sequence = (),
    method: str = DerivativeMethod.ANALYTIC,
) -> float:
    """Rate of change with respect to the node count.

    The analytic form is the right derivative of the implemented function, so
    clamped bracket terms contribute only once they are non-negative.
    """
    _validate_method(method)
    shape.validate()
    coerce_routes(routes)
    hops, p = shape.hops, shape.p
    coverage = shape.coverage_vector
    flags = nodes_clamp_flags(shape)
    if flags:
        logger.warning("Non-smooth point for %s: %s", shape, ", ".join(flags))

    if method == DerivativeMethod.PAPER_LITERAL:
        indices = np.array((2, 3, 4), dtype=float)
        inner = float(np.dot((-indices) - shape.tier_total, coverage)) * p
        return hops * 4 * 3 ** (hops - 1) * inner + hops + hops / 2 * (-hops - 2) * p

    if method == DerivativeMethod.FINITE_DIFFERENCE:
        return finite_difference(
            lambda n: _discovery_at_nodes(shape, n), float(shape.nodes), fd_step(shape.nodes)
        )

    active = coverage_brackets(shape.nodes, shape.tier_total) >= 0
    rreq_slope = tier_factor(hops, shape.formula_mode) * p * float(coverage[active].sum())
    rrep_slope = hops / 2 * p if shape.nodes - hops - 2 >= 0 else 0.0
    return rreq_slope + rrep_slope


def partial_wrt_hops(
    shape: NetworkShape,
    routes: Sequence = (),
    method: str = DerivativeMethod.ANALYTIC,
) -> float:
    """Rate of change with respect to the hop count.

    Hop counts are integers, so everything but the printed form is the forward
    difference R(H + 1) - R(H). Needs tier data for H + 1.
    """
    _validate_method(method)
    shape.validate()
    coerce_routes(routes)
    if method == DerivativeMethod.PAPER_LITERAL:
        hops, p, nodes = shape.hops, shape.p, shape.nodes
        inner = float(
            np.dot(coverage_brackets(nodes, shape.tier_total), shape.coverage_vector)
        ) * p
        return (
            hops * 4 * 3 ** (hops - 1)
            + (hops - 1) * 3 ** (hops - 1) * inner
            + 1
            + 0.5 * (nodes - 3) * p
        )
    return discovery_overhead(shape.with_hops(shape.hops + 1)) - discovery_overhead(
        shape
    )


def _hello_shifted(routes: List[MonitoredRoute], d_lifetime=0.0, d_interval=0.0):
    total = 0.0
    for index, route in enumerate(routes):
        interval = route.interval + d_interval
        if interval <= 0:
            raise ValidationError(
                "route %d: interval must be > 0" % index, code="invalid_route"
            )
        total += 2 * ((route.lifetime + d_lifetime) / interval) * route.links
    return total


def partial_wrt_lifetime(
    routes: Sequence, method: str = DerivativeMethod.ANALYTIC
) -> float:
    """Rate of change of HELLO overhead when every route lifetime grows."""
    _validate_method(method)
    routes = coerce_routes(routes)
    if not routes:
        return 0.0
    if method == DerivativeMethod.FINITE_DIFFERENCE:
        step = fd_step(max(route.lifetime for route in routes))
        return finite_difference(lambda d: _hello_shifted(routes, d_lifetime=d), 0.0, step)
    return float(sum(2 / route.interval * route.links for route in routes))


def partial_wrt_interval(
    routes: Sequence, method: str = DerivativeMethod.ANALYTIC
) -> float:
    """Rate of change of HELLO overhead when every HELLO interval grows."""
    _validate_method(method)
    routes = coerce_routes(routes)
    if not routes:
        return 0.0
    if method == DerivativeMethod.FINITE_DIFFERENCE:
        step = fd_step(min(route.interval for route in routes))
        return finite_difference(lambda d: _hello_shifted(routes, d_interval=d), 0.0, step)
    return float(
        sum(-2 * (route.lifetime / route.interval ** 2) * route.links for route in routes)
    )


def total_differential(
    shape: NetworkShape,
    routes: Sequence,
    delta: ParamDelta,
    method: str = DerivativeMethod.ANALYTIC,
) -> SensitivityReport:
    """First order change of the aggregate overhead for a parameter delta.

    When the H + 1 tier data is missing and dH is zero the H partial is left
    out and flagged instead of failing the whole report.
    """
    _validate_method(method)
    routes = coerce_routes(routes)
    flags = nodes_clamp_flags(shape)
    partials = {"n": partial_wrt_nodes(shape, routes, method)}
    try:
        partials["H"] = partial_wrt_hops(shape, routes, method)
    except ValidationError as ex:
        if delta.dH != 0 or getattr(ex, "code", None) != "missing_tiers":
            raise
        partials["H"] = None
        flags.append("H: no tier data for H + 1")
    partials["T"] = partial_wrt_lifetime(routes, method)
    partials["t"] = partial_wrt_interval(routes, method)

    components = delta.as_dict()
    total = sum(
        partials[name] * components[name]
        for name in PARAMETERS
        if partials[name] is not None
    )
    return SensitivityReport(
        partials=partials,
        method=method,
        total_differential=float(total),
        flags=flags,
        delta=delta,
    )


def compare_methods(
    shape: NetworkShape, routes: Sequence, delta: ParamDelta
) -> Dict[str, SensitivityReport]:
    """Reports for all derivative methods, keyed by method."""
    return {
        method: total_differential(shape, routes, delta, method)
        for method in DerivativeMethod.values
    }
