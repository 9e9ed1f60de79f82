from dataclasses import dataclass

import numpy as np

from django.core.exceptions import ValidationError


@dataclass(frozen=True)
class RadioModel:
    """Unit-disk radio with fixed per-hop latency and independent loss.

    range: meters
    per_hop_latency: seconds added to every transmission
    loss_probability: chance that one receiver misses one transmission
    bandwidth_bps: used for the serialization delay of a packet
    """

    range: float = 250.0
    per_hop_latency: float = 0.001
    loss_probability: float = 0.0
    bandwidth_bps: float = 2e6

    def __post_init__(self):
        if not self.range > 0:
            raise ValidationError("radio.range must be > 0", code="invalid")
        if self.per_hop_latency < 0:
            raise ValidationError("radio.per_hop_latency must be >= 0", code="invalid")
        if not 0.0 <= self.loss_probability <= 1.0:
            raise ValidationError(
                "radio.loss_probability out of [0,1]", code="invalid"
            )
        if not self.bandwidth_bps > 0:
            raise ValidationError("radio.bandwidth_bps must be > 0", code="invalid")

    def transmission_delay(self, size_bytes: int) -> float:
        return self.per_hop_latency + size_bytes * 8 / self.bandwidth_bps

    def neighbor_mask(
        self, positions: np.ndarray, alive: np.ndarray, node: int
    ) -> np.ndarray:
        """Boolean mask of alive nodes within range of node, excluding node."""
        distances = np.hypot(*(positions - positions[node]).T)
        mask = (distances <= self.range) & alive
        mask[node] = False
        return mask

    @classmethod
    def from_dict(cls, data: dict) -> "RadioModel":
        unknown = set(data) - {
            "range",
            "per_hop_latency",
            "loss_probability",
            "bandwidth_bps",
        }
        if unknown:
            raise ValidationError(
                "unknown radio field(s): %s" % ", ".join(sorted(unknown))
            )
        try:
            return cls(**{key: float(value) for key, value in data.items()})
        except (TypeError, ValueError) as ex:
            raise ValidationError("invalid radio settings: %s" % ex)

    def to_dict(self) -> dict:
        return {
            "range": self.range,
            "per_hop_latency": self.per_hop_latency,
            "loss_probability": self.loss_probability,
            "bandwidth_bps": self.bandwidth_bps,
        }
