from dataclasses import asdict, dataclass, fields
from typing import Mapping

from django.core.exceptions import ValidationError

from ..app_settings import (
    OVERHEADLAB_ACK_TIMEOUT,
    OVERHEADLAB_ALLOWED_HELLO_LOSS,
    OVERHEADLAB_BACKOFF_MULTIPLIER,
    OVERHEADLAB_BUFFER_SIZE,
    OVERHEADLAB_DUPLICATE_WINDOW,
    OVERHEADLAB_HELLO_INTERVAL,
    OVERHEADLAB_LOCAL_ADD_TTL,
    OVERHEADLAB_NET_TRAVERSAL_TIME,
    OVERHEADLAB_NETWORK_TTL,
    OVERHEADLAB_ROUTE_LIFE_TIME,
    OVERHEADLAB_RREQ_RETRIES,
    OVERHEADLAB_TTL_INCREMENT,
    OVERHEADLAB_TTL_START,
    OVERHEADLAB_TTL_THRESHOLD,
)


@dataclass(frozen=True)
class RoutingParameters:
    """Timers and limits of the reactive engine, shared by all profiles."""

    ttl_start: int = OVERHEADLAB_TTL_START
    ttl_increment: int = OVERHEADLAB_TTL_INCREMENT
    ttl_threshold: int = OVERHEADLAB_TTL_THRESHOLD
    network_ttl: int = OVERHEADLAB_NETWORK_TTL
    rreq_retries: int = OVERHEADLAB_RREQ_RETRIES
    net_traversal_time: float = OVERHEADLAB_NET_TRAVERSAL_TIME
    backoff_multiplier: float = OVERHEADLAB_BACKOFF_MULTIPLIER
    hello_interval: float = OVERHEADLAB_HELLO_INTERVAL
    allowed_hello_loss: int = OVERHEADLAB_ALLOWED_HELLO_LOSS
    route_life_time: float = OVERHEADLAB_ROUTE_LIFE_TIME
    duplicate_window: float = OVERHEADLAB_DUPLICATE_WINDOW
    buffer_size: int = OVERHEADLAB_BUFFER_SIZE
    ack_timeout: float = OVERHEADLAB_ACK_TIMEOUT
    local_add_ttl: int = OVERHEADLAB_LOCAL_ADD_TTL
    timeout_buffer: int = 2
    max_destination_replies: int = 3
    route_cache_size: int = 8
    expanding_ring: bool = True

    def __post_init__(self):
        for name in ("ttl_start", "ttl_increment", "ttl_threshold", "network_ttl"):
            if getattr(self, name) < 1:
                raise ValidationError("routing.%s must be >= 1" % name, code="invalid")
        if self.ttl_threshold > self.network_ttl:
            raise ValidationError(
                "routing.ttl_threshold must not exceed network_ttl", code="invalid"
            )
        for name in (
            "net_traversal_time",
            "hello_interval",
            "route_life_time",
            "ack_timeout",
        ):
            if not getattr(self, name) > 0:
                raise ValidationError("routing.%s must be > 0" % name, code="invalid")
        for name in (
            "rreq_retries",
            "duplicate_window",
            "local_add_ttl",
            "timeout_buffer",
        ):
            if getattr(self, name) < 0:
                raise ValidationError("routing.%s must be >= 0" % name, code="invalid")
        for name in ("allowed_hello_loss", "buffer_size", "max_destination_replies"):
            if getattr(self, name) < 1:
                raise ValidationError("routing.%s must be >= 1" % name, code="invalid")
        if self.backoff_multiplier < 1:
            raise ValidationError(
                "routing.backoff_multiplier must be >= 1", code="invalid"
            )

    @property
    def node_traversal_time(self) -> float:
        return self.net_traversal_time / (2 * self.network_ttl)

    def ring_traversal_time(self, ttl: int) -> float:
        return 2 * self.node_traversal_time * (ttl + self.timeout_buffer)

    @classmethod
    def from_overrides(cls, overrides: Mapping = None) -> "RoutingParameters":
        overrides = dict(overrides or {})
        unknown = set(overrides) - {f.name for f in fields(cls)}
        if unknown:
            raise ValidationError(
                "unknown routing parameter(s): %s" % ", ".join(sorted(unknown)),
                code="invalid",
            )
        params = {}
        for name, value in overrides.items():
            default = getattr(cls, name)
            if isinstance(default, bool):
                if not isinstance(value, bool):
                    raise ValidationError("routing.%s must be true or false" % name)
            elif isinstance(default, int):
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValidationError("routing.%s must be an integer" % name)
            elif isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError("routing.%s must be a number" % name)
            else:
                value = float(value)
            params[name] = value
        return cls(**params)

    def to_dict(self) -> dict:
        return asdict(self)
