from dataclasses import dataclass, replace
from typing import Optional, Tuple

from ..constants import (
    PACKET_BASE_SIZES,
    RERR_ENTRY_BYTES,
    SOURCE_ROUTE_ENTRY_BYTES,
    PacketKind,
)


@dataclass(frozen=True)
class Packet:
    """A control or data packet.

    Packets are immutable; forwarding creates a modified copy.

    For RREQ and DATA, origin and destination are the ends of the discovery or
    flow. For RREP, origin is the node the route leads to and destination the
    node that asked for it. source_route holds the node list from the
    requesting node onward, only for source routing profiles. path is the list
    of nodes a DATA packet has traversed so far, ending with its current holder.
    """

    kind: str
    origin: int
    destination: int
    uid: int
    previous_hop: Optional[int] = None
    next_hop: Optional[int] = None
    rreq_id: Optional[Tuple[int, int]] = None
    origin_seq: int = 0
    dest_seq: int = 0
    ttl: int = 0
    initial_ttl: int = 0
    hop_count: int = 0
    source_route: Optional[Tuple[int, ...]] = None
    payload_size: int = 0
    gratuitous: bool = False
    data_id: Optional[int] = None
    sent_at: Optional[float] = None
    path: Tuple[int, ...] = ()
    unreachable: Tuple[Tuple[int, int], ...] = ()
    broken_link: Optional[Tuple[int, int]] = None
    acked_uid: Optional[int] = None

    @property
    def size(self) -> int:
        """Size in bytes as sent over the air."""
        size = PACKET_BASE_SIZES[self.kind] + self.payload_size
        if self.source_route:
            size += SOURCE_ROUTE_ENTRY_BYTES * len(self.source_route)
        if self.kind == PacketKind.RERR:
            size += RERR_ENTRY_BYTES * len(self.unreachable)
        return size

    @property
    def is_control(self) -> bool:
        return self.kind != PacketKind.DATA

    def is_malformed(self) -> bool:
        return (
            self.kind not in PacketKind.values
            or self.ttl < 0
            or self.hop_count < 0
            or (self.initial_ttl and self.hop_count > self.initial_ttl)
        )

    def copy(self, **changes) -> "Packet":
        return replace(self, **changes)

    def next_in_route(self, node: int) -> Optional[int]:
        """Node after node in the source route or None."""
        route = self.source_route or ()
        if node not in route:
            return None
        index = route.index(node)
        return route[index + 1] if index + 1 < len(route) else None

    def previous_in_route(self, node: int) -> Optional[int]:
        route = self.source_route or ()
        if node not in route:
            return None
        index = route.index(node)
        return route[index - 1] if index > 0 else None
