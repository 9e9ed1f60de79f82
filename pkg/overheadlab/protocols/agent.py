"""Generalized reactive routing engine run by every node.

Route discovery, route maintenance and data forwarding follow one state
machine; the protocol profile switches individual features on or off.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, Optional, Set, Tuple

from app_utils.logging import LoggerAddTag

from .. import __title__
from ..constants import PacketKind
from ..engine.events import Timer
from .ers import ErsState
from .packets import Packet
from .params import RoutingParameters
from .profiles import ProtocolProfile
from .routes import RouteEntry, RouteTable

logger = LoggerAddTag(logging.getLogger(__name__), __title__)

RREQ_TIMEOUT = "rreq_timeout"
HELLO_TICK = "hello_tick"
ACK_TIMEOUT = "ack_timeout"
LINK_FAILURE = "link_failure"

TIME_TOLERANCE = 1e-9


@dataclass
class Discovery:
    """A route search in progress for one destination."""

    destination: int
    ers: ErsState
    repair: bool = False
    # upstream origins waiting for a repaired route
    origins: Set[int] = field(default_factory=set)
    timer: Optional[Timer] = None
    attempts: int = 0


@dataclass
class LinkMonitor:
    """HELLO exchange with one route neighbor, ticking at start + k * interval."""

    peer: int
    start: float
    end: float
    last_heard: float
    ticks: int = 0
    timer: Optional[Timer] = None


class ReactiveAgent:
    """Routing state and behavior of one node.

    network is the simulator the node lives in. It provides the clock,
    transmissions, timers and accounting.
    """

    def __init__(
        self,
        node_id: int,
        network,
        profile: ProtocolProfile,
        params: RoutingParameters,
    ) -> None:
        self.node_id = node_id
        self.network = network
        self.profile = profile
        self.params = params
        self.generation = 0
        self.rreq_counter = 0
        self._clear()

    def __repr__(self) -> str:
        return "%s(node=%d, profile=%s)" % (
            self.__class__.__name__,
            self.node_id,
            self.profile.name,
        )

    def _clear(self) -> None:
        self.routes = RouteTable(
            self.node_id,
            multi=self.profile.route_cache_multi,
            cache_size=self.params.route_cache_size,
        )
        self.seq = 0
        self.seen_rreqs: Dict[Tuple[int, int], float] = {}
        self.replied: Dict[Tuple[int, int], Set[int]] = {}
        self.buffers: Dict[int, Deque[Packet]] = {}
        self.discoveries: Dict[int, Discovery] = {}
        self.monitors: Dict[int, LinkMonitor] = {}
        self.pending_acks: Dict[int, Timer] = {}
        self.active_sources: Dict[int, float] = {}
        # links known broken, normalized as (low, high), until expiry
        self.broken_links: Dict[Tuple[int, int], float] = {}

    def reset(self) -> None:
        """Forget all state, as after a power failure. Pending timers go stale."""
        for destination in sorted(self.buffers):
            self._drop_buffer(destination, "node_failed")
        self.generation += 1
        self._clear()

    @property
    def now(self) -> float:
        return self.network.now

    @property
    def _source_routing(self) -> bool:
        return self.profile.source_routing

    # application side

    def send_data(self, packet: Packet) -> None:
        """Hand a DATA packet created at this node to the routing layer."""
        packet = packet.copy(path=(self.node_id,))
        if packet.destination == self.node_id:
            self.network.deliver(self.node_id, packet)
            return
        self.active_sources[packet.destination] = self.now
        route = self.usable_route(packet.destination)
        if route:
            self._transmit_data(packet, route)
        else:
            self._buffer(packet)
            self.originate_route_request(packet.destination)

    def usable_route(self, destination: int) -> Optional[RouteEntry]:
        """Route this node may use for its own traffic without a new search.

        Source routing profiles without route reuse only trust routes they
        discovered themselves.
        """
        entry = self.routes.lookup(destination, self.now)
        if entry is None:
            return None
        if (
            entry.established
            or self.profile.reuse_cached_routes
            or not self._source_routing
        ):
            return entry
        return None

    def _is_active_source(self, destination: int) -> bool:
        last_sent = self.active_sources.get(destination)
        return (
            last_sent is not None
            and self.now - last_sent <= self.params.route_life_time
        )

    def _buffer(self, packet: Packet) -> None:
        queue = self.buffers.setdefault(packet.destination, deque())
        if len(queue) >= self.params.buffer_size:
            self.network.drop("buffer_overflow", queue.popleft())
        queue.append(packet)

    def _drop_buffer(self, destination: int, reason: str) -> None:
        for packet in self.buffers.pop(destination, ()):
            self.network.drop(reason, packet)

    def _flush_buffer(self, destination: int) -> None:
        queue = self.buffers.get(destination)
        if not queue:
            return
        entry = self.routes.lookup(destination, self.now)
        if entry is None:
            return
        del self.buffers[destination]
        for packet in queue:
            self._transmit_data(packet, entry)

    # route discovery

    def originate_route_request(
        self,
        destination: int,
        repair: bool = False,
        origins=(),
        ttl: int = None,
    ) -> None:
        """Start a route search unless one is already running."""
        discovery = self.discoveries.get(destination)
        if discovery:
            discovery.origins.update(origins)
            return
        if repair:
            ers = ErsState.for_repair(self.params, ttl)
        else:
            ers = ErsState.for_discovery(self.params)
        discovery = Discovery(
            destination=destination, ers=ers, repair=repair, origins=set(origins)
        )
        self.discoveries[destination] = discovery
        logger.debug(
            "Node %d: %s route search for %d",
            self.node_id,
            "repair" if repair else "new",
            destination,
        )
        self._send_rreq(discovery)

    def _send_rreq(self, discovery: Discovery) -> None:
        now = self.now
        self.seq += 1
        self.rreq_counter += 1
        rreq_id = (self.node_id, self.rreq_counter)
        self.seen_rreqs[rreq_id] = now + self.params.duplicate_window
        ttl = discovery.ers.ttl_current
        packet = Packet(
            kind=PacketKind.RREQ,
            origin=self.node_id,
            destination=discovery.destination,
            uid=self.network.new_uid(),
            previous_hop=self.node_id,
            rreq_id=rreq_id,
            origin_seq=self.seq,
            dest_seq=self.routes.known_seq(discovery.destination),
            ttl=ttl,
            initial_ttl=ttl,
            source_route=(self.node_id,) if self._source_routing else None,
        )
        discovery.attempts += 1
        self.network.broadcast(self.node_id, packet)
        discovery.timer = self.network.set_timer(
            self.node_id,
            now + discovery.ers.wait_time(),
            RREQ_TIMEOUT,
            discovery.destination,
        )

    def _on_rreq_timeout(self, destination: int, timer: Timer) -> None:
        discovery = self.discoveries.get(destination)
        if discovery is None or discovery.timer is not timer:
            return
        if discovery.ers.escalate():
            self._send_rreq(discovery)
            return
        del self.discoveries[destination]
        logger.debug(
            "Node %d: no route to %d after %d requests",
            self.node_id,
            destination,
            discovery.attempts,
        )
        self._drop_buffer(destination, "no_route")
        if discovery.origins:
            self._send_rerr(destination, discovery.origins, broken=None)

    def _complete_discovery(self, destination: int) -> None:
        discovery = self.discoveries.pop(destination, None)
        if discovery and discovery.timer:
            discovery.timer.cancel()
        self._flush_buffer(destination)

    def _is_duplicate(self, rreq_id: Tuple[int, int]) -> bool:
        expiry = self.seen_rreqs.get(rreq_id)
        return expiry is not None and expiry > self.now

    def handle_rreq(self, packet: Packet, sender: int) -> None:
        now = self.now
        rreq_id = packet.rreq_id
        is_destination = packet.destination == self.node_id
        if self._is_duplicate(rreq_id):
            if is_destination and self.profile.route_cache_multi:
                self._reply_again(packet, sender)
            return
        self.seen_rreqs[rreq_id] = now + self.params.duplicate_window
        if packet.origin == self.node_id:
            return
        if self._source_routing:
            route = packet.source_route or ()
            if (
                not route
                or route[0] != packet.origin
                or route[-1] != sender
                or self.node_id in route
            ):
                self.network.drop("malformed", packet)
                return
        self._learn_reverse_route(packet, sender)
        if is_destination:
            self.seq = max(self.seq, packet.dest_seq)
            self.replied[rreq_id] = {sender}
            self._send_rrep(packet, sender)
            return
        if self.profile.grat_rrep and self._reply_from_table(packet, sender):
            return
        if packet.ttl - 1 <= 0:
            return
        self.network.broadcast(
            self.node_id,
            packet.copy(
                ttl=packet.ttl - 1,
                hop_count=packet.hop_count + 1,
                previous_hop=self.node_id,
                source_route=packet.source_route + (self.node_id,)
                if self._source_routing
                else None,
            ),
        )

    def _learn_reverse_route(self, packet: Packet, sender: int) -> None:
        if self._source_routing:
            self._offer_path(
                (self.node_id,) + tuple(reversed(packet.source_route)),
                seq=packet.origin_seq,
            )
            return
        self.routes.offer(
            RouteEntry(
                destination=packet.origin,
                next_hop=sender,
                hop_count=packet.hop_count + 1,
                expiry=self.now + self.params.route_life_time,
                dest_seq=packet.origin_seq,
            ),
            self.now,
        )

    def _offer_path(
        self, path: Tuple[int, ...], seq: int = 0, established: bool = False
    ) -> None:
        """Store routes along path, which starts at this node."""
        expiry = self.now + self.params.route_life_time
        target = path[-1]
        for hops in range(1, len(path)):
            destination = path[hops]
            self.routes.offer(
                RouteEntry(
                    destination=destination,
                    next_hop=path[1],
                    hop_count=hops,
                    expiry=expiry,
                    dest_seq=seq if destination == target else 0,
                    path=tuple(path[: hops + 1]),
                    established=established and destination == target,
                    learned=self.now,
                ),
                self.now,
            )

    def _send_rrep(self, request: Packet, sender: int) -> None:
        """Answer a request as its destination."""
        route = None
        if self._source_routing:
            route = request.source_route + (self.node_id,)
        reply = Packet(
            kind=PacketKind.RREP,
            origin=self.node_id,
            destination=request.origin,
            uid=self.network.new_uid(),
            previous_hop=self.node_id,
            dest_seq=self.seq,
            source_route=route,
        )
        self._start_monitor(sender)
        self.network.unicast(self.node_id, reply, sender)

    def _reply_again(self, request: Packet, sender: int) -> None:
        """Answer another copy of a request that came over a different neighbor."""
        replied = self.replied.setdefault(request.rreq_id, set())
        if sender in replied or len(replied) >= self.params.max_destination_replies:
            return
        route = request.source_route or ()
        if not route or route[-1] != sender or self.node_id in route:
            return
        replied.add(sender)
        self._learn_reverse_route(request, sender)
        self._send_rrep(request, sender)

    def _reply_from_table(self, request: Packet, sender: int) -> bool:
        """Answer a request on behalf of its destination. True when answered."""
        entry = self.routes.lookup(request.destination, self.now)
        if entry is None or entry.dest_seq < request.dest_seq:
            return False
        route = None
        if self._source_routing:
            route = request.source_route + entry.path
            if len(set(route)) != len(route):
                return False
        elif entry.next_hop == sender:
            return False
        reply = Packet(
            kind=PacketKind.RREP,
            origin=request.destination,
            destination=request.origin,
            uid=self.network.new_uid(),
            previous_hop=self.node_id,
            dest_seq=entry.dest_seq,
            hop_count=entry.hop_count,
            source_route=route,
            gratuitous=True,
        )
        self.network.note_gratuitous_rrep()
        self._start_monitor(sender)
        self.network.unicast(self.node_id, reply, sender)
        return True

    def handle_rrep(self, packet: Packet, sender: int) -> None:
        if self._source_routing:
            self._handle_source_routed_rrep(packet, sender)
            return
        now = self.now
        is_requester = packet.destination == self.node_id
        self.routes.offer(
            RouteEntry(
                destination=packet.origin,
                next_hop=sender,
                hop_count=packet.hop_count + 1,
                expiry=now + self.params.route_life_time,
                dest_seq=packet.dest_seq,
                established=is_requester,
            ),
            now,
        )
        self._start_monitor(sender)
        if is_requester:
            self._complete_discovery(packet.origin)
            return
        reverse = self.routes.lookup(packet.destination, now)
        if reverse is None:
            self.network.drop("no_reverse_route", packet)
            return
        reverse.expiry = max(reverse.expiry, now + self.params.route_life_time)
        self._start_monitor(reverse.next_hop)
        self.network.unicast(
            self.node_id,
            packet.copy(hop_count=packet.hop_count + 1, previous_hop=self.node_id),
            reverse.next_hop,
        )

    def _handle_source_routed_rrep(self, packet: Packet, sender: int) -> None:
        route = packet.source_route or ()
        if self.node_id not in route:
            self.network.drop("malformed", packet)
            return
        index = route.index(self.node_id)
        if index + 1 >= len(route) or route[index + 1] != sender:
            self.network.drop("malformed", packet)
            return
        if packet.gratuitous and self._uses_broken_link(route):
            self.network.drop("stale_route", packet)
            return
        if not packet.gratuitous:
            self._confirm_links(route)
        is_requester = index == 0
        self._offer_path(route[index:], seq=packet.dest_seq, established=is_requester)
        if index > 0:
            self._offer_path(tuple(reversed(route[: index + 1])))
        self._start_monitor(sender)
        if is_requester:
            self._complete_discovery(packet.origin)
            return
        previous = packet.previous_in_route(self.node_id)
        self._start_monitor(previous)
        self.network.unicast(
            self.node_id,
            packet.copy(hop_count=packet.hop_count + 1, previous_hop=self.node_id),
            previous,
        )

    # data forwarding

    def _transmit_data(self, packet: Packet, entry: RouteEntry) -> None:
        if self._source_routing:
            if packet.source_route is None or packet.origin == self.node_id:
                packet = packet.copy(source_route=entry.path)
            next_hop = packet.next_in_route(self.node_id)
        else:
            next_hop = entry.next_hop
        if next_hop is None:
            self.network.drop("malformed", packet)
            return
        if next_hop in packet.path:
            self.network.drop("loop", packet)
            return
        entry.expiry = max(entry.expiry, self.now + self.params.route_life_time)
        if packet.origin != self.node_id:
            entry.origins.add(packet.origin)
        self._send_data_hop(packet, next_hop)

    def _send_data_hop(self, packet: Packet, next_hop: int) -> None:
        self._start_monitor(next_hop)
        outgoing = packet.copy(previous_hop=self.node_id, next_hop=next_hop)
        if self.profile.ack_monitoring:
            self.pending_acks[packet.uid] = self.network.set_timer(
                self.node_id,
                self.now + self.params.ack_timeout,
                ACK_TIMEOUT,
                (outgoing, next_hop),
            )
        self.network.unicast(self.node_id, outgoing, next_hop)

    def handle_data(self, packet: Packet, sender: int) -> None:
        packet = packet.copy(
            path=packet.path + (self.node_id,), hop_count=packet.hop_count + 1
        )
        if self.profile.ack_monitoring:
            self.network.unicast(
                self.node_id,
                Packet(
                    kind=PacketKind.ACK,
                    origin=self.node_id,
                    destination=sender,
                    uid=self.network.new_uid(),
                    previous_hop=self.node_id,
                    acked_uid=packet.uid,
                ),
                sender,
            )
        self._start_monitor(sender)
        if self._source_routing:
            route = packet.source_route or ()
            if self.node_id not in route:
                self.network.drop("malformed", packet)
                return
            index = route.index(self.node_id)
            if index > 0:
                self._offer_path(tuple(reversed(route[: index + 1])))
        else:
            self.routes.refresh(packet.origin, self.now, self.params.route_life_time)
        if packet.destination == self.node_id:
            self.network.deliver(self.node_id, packet)
            return
        self.forward_data(packet)

    def forward_data(self, packet: Packet) -> None:
        """Pass a DATA packet on toward its destination or buffer it."""
        if self._source_routing:
            next_hop = packet.next_in_route(self.node_id)
            if next_hop is None:
                self.network.drop("malformed", packet)
            elif next_hop in packet.path:
                self.network.drop("loop", packet)
            else:
                self._send_data_hop(packet, next_hop)
            return
        entry = self.routes.lookup(packet.destination, self.now)
        if entry:
            self._transmit_data(packet, entry)
            return
        discovery = self.discoveries.get(packet.destination)
        if discovery is not None:
            discovery.origins.add(packet.origin)
            self._buffer(packet)
            return
        self.network.drop("no_route", packet)
        self._send_rerr(packet.destination, {packet.origin}, broken=None)

    def handle_ack(self, packet: Packet, sender: int) -> None:
        timer = self.pending_acks.pop(packet.acked_uid, None)
        if timer:
            timer.cancel()

    # route maintenance

    def _start_monitor(self, peer: int) -> None:
        """Start or prolong HELLO monitoring of the link to peer."""
        if not self.profile.hello_monitoring:
            return
        now = self.now
        end = now + self.params.route_life_time
        monitor = self.monitors.get(peer)
        if monitor:
            monitor.end = max(monitor.end, end)
            return
        monitor = LinkMonitor(peer=peer, start=now, end=end, last_heard=now)
        self.monitors[peer] = monitor
        self._schedule_tick(monitor)

    def _schedule_tick(self, monitor: LinkMonitor) -> None:
        monitor.timer = self.network.set_timer(
            self.node_id,
            monitor.start + (monitor.ticks + 1) * self.params.hello_interval,
            HELLO_TICK,
            monitor.peer,
        )

    def _on_monitor_tick(self, peer: int, timer: Timer) -> None:
        monitor = self.monitors.get(peer)
        if monitor is None or monitor.timer is not timer:
            return
        self.monitor_links(monitor)

    def monitor_links(self, monitor: LinkMonitor) -> None:
        """One HELLO period of a link: check the peer, then beacon."""
        now = self.now
        if now > monitor.end + TIME_TOLERANCE:
            del self.monitors[monitor.peer]
            return
        monitor.ticks += 1
        silence = now - monitor.last_heard
        limit = self.params.allowed_hello_loss * self.params.hello_interval
        if silence > limit + TIME_TOLERANCE and self.routes.has_next_hop(
            monitor.peer, now
        ):
            logger.debug(
                "Node %d: no HELLO from %d for %.3f s", self.node_id, monitor.peer, silence
            )
            self.handle_link_break(monitor.peer)
            return
        self.network.broadcast(
            self.node_id,
            Packet(
                kind=PacketKind.HELLO,
                origin=self.node_id,
                destination=monitor.peer,
                uid=self.network.new_uid(),
                previous_hop=self.node_id,
            ),
        )
        self._schedule_tick(monitor)

    def handle_hello(self, packet: Packet, sender: int) -> None:
        """Nothing to do beyond the liveness update done on every reception."""

    def on_link_failure(self, next_hop: int, packet: Packet) -> None:
        """The radio could not deliver packet to next_hop."""
        self.handle_link_break(next_hop, packet)

    def handle_link_break(self, broken: int, packet: Packet = None) -> None:
        """React to the loss of the link to broken.

        packet is the one that could not be delivered, if any.
        """
        self.monitors.pop(broken, None)
        back_path = None
        if self._source_routing:
            affected = self._forget_link(self.node_id, broken)
            if packet is not None and packet.kind == PacketKind.DATA:
                back_path = tuple(reversed(packet.path))
        else:
            affected = self.routes.invalidate_next_hop(broken)
        logger.debug(
            "Node %d: link to %d broken, %d routes affected",
            self.node_id,
            broken,
            len(affected),
        )
        destinations: Dict[int, Set[int]] = {}
        for entry in affected:
            destinations.setdefault(entry.destination, set()).update(entry.origins)
        if packet is not None and packet.kind == PacketKind.DATA:
            origins = destinations.setdefault(packet.destination, set())
            if packet.origin != self.node_id:
                origins.add(packet.origin)
            self._recover_packet(packet)
        for destination in sorted(destinations):
            self._repair_or_report(
                destination,
                destinations[destination] - {self.node_id},
                broken,
                back_path=back_path,
            )

    def _forget_link(self, a: int, b: int) -> list:
        """Drop every cached route over the link a - b and keep it out for a while."""
        self.broken_links[(min(a, b), max(a, b))] = (
            self.now + self.params.route_life_time
        )
        return self.routes.remove_link(a, b)

    def _uses_broken_link(self, path: Tuple[int, ...]) -> bool:
        for a, b in zip(path, path[1:]):
            expiry = self.broken_links.get((min(a, b), max(a, b)))
            if expiry is not None and expiry > self.now:
                return True
        return False

    def _confirm_links(self, path: Tuple[int, ...]) -> None:
        for a, b in zip(path, path[1:]):
            self.broken_links.pop((min(a, b), max(a, b)), None)

    def _recover_packet(self, packet: Packet) -> None:
        """Re-send, buffer or drop a DATA packet that hit a broken link."""
        if packet.origin == self.node_id:
            route = self.usable_route(packet.destination)
            if route:
                self._transmit_data(packet, route)
            else:
                self._buffer(packet)
            return
        if self.profile.local_repair and not self._source_routing:
            self._buffer(packet)
            return
        if self.profile.route_cache_multi:
            # the alternative must not revisit a node the packet passed
            alternative = self.routes.lookup(
                packet.destination, self.now, exclude=packet.path[:-1]
            )
            if alternative:
                salvaged = packet.copy(source_route=packet.path + alternative.path[1:])
                self._send_data_hop(salvaged, alternative.next_hop)
                return
        self.network.drop("link_break", packet)

    def _repair_or_report(
        self, destination: int, origins: Set[int], broken, back_path=None
    ) -> None:
        if self._is_active_source(destination) and self.usable_route(destination) is None:
            self.originate_route_request(destination)
        if not origins:
            return
        if self.profile.local_repair and not self._source_routing:
            if self.routes.lookup(destination, self.now) is None:
                entry = self.routes.get(destination, self.now)
                hops = entry.hop_count if entry else 1
                self.originate_route_request(
                    destination,
                    repair=True,
                    origins=origins,
                    ttl=max(1, hops) + self.params.local_add_ttl,
                )
            return
        self._send_rerr(destination, origins, broken, back_path=back_path)

    def _send_rerr(self, destination: int, origins, broken, back_path=None) -> None:
        """Tell each origin that destination can no longer be reached from here.

        With source routing, an origin at the end of back_path (the reversed
        route of the packet that failed) is reached over that path.
        """
        seq = self.routes.known_seq(destination)
        for origin in sorted(origins):
            if origin == self.node_id:
                continue
            if (
                self._source_routing
                and back_path
                and len(back_path) > 1
                and back_path[-1] == origin
            ):
                route, next_hop = back_path, back_path[1]
            else:
                entry = self.routes.lookup(origin, self.now)
                if entry is None:
                    self.network.drop("rerr_no_route")
                    continue
                route, next_hop = entry.path, entry.next_hop
            self.network.unicast(
                self.node_id,
                Packet(
                    kind=PacketKind.RERR,
                    origin=self.node_id,
                    destination=origin,
                    uid=self.network.new_uid(),
                    previous_hop=self.node_id,
                    unreachable=((destination, seq),),
                    broken_link=(self.node_id, broken) if broken is not None else None,
                    source_route=route if self._source_routing else None,
                ),
                next_hop,
            )

    def handle_rerr(self, packet: Packet, sender: int) -> None:
        now = self.now
        if self._source_routing:
            if packet.broken_link:
                self._forget_link(*packet.broken_link)
        else:
            for destination, seq in packet.unreachable:
                entry = self.routes.get(destination, now)
                if entry and entry.valid and entry.next_hop == sender:
                    entry.valid = False
                    entry.dest_seq = max(entry.dest_seq, seq)
        if packet.destination == self.node_id:
            for destination, _ in packet.unreachable:
                if (
                    self._is_active_source(destination)
                    and self.usable_route(destination) is None
                ):
                    logger.debug(
                        "Node %d: route error for %d, searching again",
                        self.node_id,
                        destination,
                    )
                    self.originate_route_request(destination)
            return
        if self._source_routing:
            next_hop = packet.next_in_route(self.node_id)
        else:
            entry = self.routes.lookup(packet.destination, now)
            next_hop = entry.next_hop if entry else None
        if next_hop is None:
            self.network.drop("rerr_no_route", packet)
            return
        self.network.unicast(
            self.node_id, packet.copy(previous_hop=self.node_id), next_hop
        )

    def _learn_from_overheard(self, packet: Packet, sender: int) -> None:
        if packet.kind == PacketKind.RERR:
            if packet.broken_link:
                self._forget_link(*packet.broken_link)
            return
        if packet.kind not in (PacketKind.DATA, PacketKind.RREP):
            return
        route = packet.source_route or ()
        if sender not in route or self.node_id in route:
            return
        self._confirm_links((self.node_id, sender))
        index = route.index(sender)
        paths = [(self.node_id,) + route[index:]]
        if index > 0:
            paths.append((self.node_id,) + tuple(reversed(route[: index + 1])))
        for path in paths:
            # packets still in flight carry routes over links known to be gone
            if not self._uses_broken_link(path):
                self._offer_path(path)

    # dispatch

    def receive(self, packet: Packet, sender: int, overheard: bool = False) -> None:
        if packet.is_malformed():
            self.network.drop("malformed", packet)
            return
        if overheard:
            if self.profile.promiscuous:
                self._learn_from_overheard(packet, sender)
            return
        monitor = self.monitors.get(sender)
        if monitor:
            monitor.last_heard = self.now
        handler = {
            PacketKind.RREQ: self.handle_rreq,
            PacketKind.RREP: self.handle_rrep,
            PacketKind.RERR: self.handle_rerr,
            PacketKind.HELLO: self.handle_hello,
            PacketKind.ACK: self.handle_ack,
            PacketKind.DATA: self.handle_data,
        }[packet.kind]
        handler(packet, sender)

    def on_timer(self, timer: Timer) -> None:
        if timer.name == RREQ_TIMEOUT:
            self._on_rreq_timeout(timer.data, timer)
        elif timer.name == HELLO_TICK:
            self._on_monitor_tick(timer.data, timer)
        elif timer.name == ACK_TIMEOUT:
            packet, next_hop = timer.data
            if self.pending_acks.get(packet.uid) is timer:
                del self.pending_acks[packet.uid]
                self.handle_link_break(next_hop, packet)
        elif timer.name == LINK_FAILURE:
            next_hop, packet = timer.data
            self.on_link_failure(next_hop, packet)
        else:
            raise ValueError("unknown timer %s" % timer.name)
