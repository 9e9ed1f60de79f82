"""Expanding ring search with binary exponential backoff at network-wide TTL."""
from dataclasses import dataclass

from .params import RoutingParameters


@dataclass
class ErsState:
    params: RoutingParameters
    ttl_current: int
    expanding: bool = True
    rreq_retries_max: int = 0
    retries_used: int = 0

    @classmethod
    def for_discovery(cls, params: RoutingParameters) -> "ErsState":
        return cls(
            params=params,
            ttl_current=params.ttl_start if params.expanding_ring else params.network_ttl,
            expanding=params.expanding_ring,
            rreq_retries_max=params.rreq_retries,
        )

    @classmethod
    def for_repair(cls, params: RoutingParameters, ttl: int) -> "ErsState":
        """Single bounded ring without retries."""
        return cls(
            params=params,
            ttl_current=min(ttl, params.network_ttl),
            expanding=False,
            rreq_retries_max=0,
        )

    @property
    def is_network_wide(self) -> bool:
        return self.ttl_current >= self.params.network_ttl

    def wait_time(self) -> float:
        """Seconds to wait for a reply to the current request."""
        if not self.is_network_wide:
            return self.params.ring_traversal_time(self.ttl_current)
        return (
            self.params.net_traversal_time
            * self.params.backoff_multiplier ** self.retries_used
        )

    def escalate(self) -> bool:
        """Move to the next attempt. False when the search is exhausted."""
        if self.expanding and not self.is_network_wide:
            ttl = self.ttl_current + self.params.ttl_increment
            self.ttl_current = (
                ttl if ttl <= self.params.ttl_threshold else self.params.network_ttl
            )
            return True
        if self.retries_used < self.rreq_retries_max:
            self.retries_used += 1
            return True
        return False
