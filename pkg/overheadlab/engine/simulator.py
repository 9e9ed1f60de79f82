"""Deterministic discrete-event simulation of a mobile ad hoc network."""
import hashlib
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from app_utils.logging import LoggerAddTag

from .. import __title__
from ..constants import EventKind, PacketKind
from ..metrics import MetricsCollector, RunReport
from ..protocols.agent import LINK_FAILURE, ReactiveAgent
from ..protocols.packets import Packet
from ..protocols.params import RoutingParameters
from ..protocols.profiles import ProtocolProfile, get_profile
from .events import EventQueue, Timer
from .mobility import RandomWaypoint
from .scenario import ScenarioConfig

logger = LoggerAddTag(logging.getLogger(__name__), __title__)


@dataclass(frozen=True)
class TraceRecord:
    """One line of the event trace.

    peer is the next hop of a unicast transmission or the sender of a
    reception.
    """

    time: float
    node: int
    kind: str
    packet_kind: Optional[str] = None
    src: Optional[int] = None
    dst: Optional[int] = None
    ttl: Optional[int] = None
    hop_count: Optional[int] = None
    uid: Optional[int] = None
    peer: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class SimulationResult:
    report: RunReport
    trace: List[TraceRecord]
    digest: str
    agents: List[ReactiveAgent]
    delivered_paths: Dict[int, tuple]

    def write_trace(self, path) -> None:
        """Write the trace as one JSON object per line."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as file:
            for record in self.trace:
                file.write(record.to_json())
                file.write("\n")


class Simulator:
    """Runs one scenario with one protocol profile and one seed.

    Randomness comes from four independent streams derived from the seed:
    node placement, mobility (one child stream per node), traffic and
    packet loss. Equal inputs give an identical event trace.
    """

    def __init__(
        self,
        scenario: ScenarioConfig,
        profile: ProtocolProfile = None,
        seed: int = None,
        record_trace: bool = True,
        params: RoutingParameters = None,
    ) -> None:
        self.scenario = scenario
        self.profile = profile or get_profile(scenario.protocol, scenario.profiles)
        self.seed = scenario.seed if seed is None else seed
        self.params = params or RoutingParameters.from_overrides(scenario.routing)
        self.radio = scenario.radio
        self.record_trace = record_trace
        placement_seq, mobility_seq, traffic_seq, loss_seq = np.random.SeedSequence(
            self.seed
        ).spawn(4)
        self.positions = scenario.initial_positions(
            np.random.default_rng(placement_seq)
        )
        node_count = scenario.node_count
        self.mobility = None
        if not scenario.is_static:
            self.mobility = RandomWaypoint(
                self.positions,
                scenario.area,
                scenario.speed,
                scenario.pause,
                [np.random.default_rng(seq) for seq in mobility_seq.spawn(node_count)],
            )
        self._loss_rng = np.random.default_rng(loss_seq)
        self.alive = np.ones(node_count, dtype=bool)
        self.lifetimes = np.full(node_count, np.inf)
        for node, lifetime in scenario.lifetimes.items():
            self.lifetimes[node] = lifetime
        self.queue = EventQueue()
        self.metrics = MetricsCollector()
        self.trace: List[TraceRecord] = []
        self._hash = hashlib.sha256()
        self._uids = 0
        self._data_ids = 0
        self.agents = [
            ReactiveAgent(node, self, self.profile, self.params)
            for node in range(node_count)
        ]
        self.flows = scenario.traffic.build_flows(
            node_count, np.random.default_rng(traffic_seq)
        )
        self._schedule_initial_events()

    def __repr__(self) -> str:
        return "%s(scenario=%s, profile=%s, seed=%s)" % (
            self.__class__.__name__,
            self.scenario.name,
            self.profile.name,
            self.seed,
        )

    def _schedule_initial_events(self) -> None:
        for index, flow in enumerate(self.flows):
            time = flow.send_time(0, self.scenario.duration)
            if time is not None:
                self.queue.schedule(time, flow.source, EventKind.TRAFFIC, (index, 0))
        for node, lifetime in enumerate(self.lifetimes):
            if np.isfinite(lifetime):
                self.queue.schedule(float(lifetime), node, EventKind.FAIL)
        for blackout in self.scenario.blackouts:
            self.queue.schedule(blackout.start, None, EventKind.FAIL)
            if blackout.end is not None:
                self.queue.schedule(blackout.end, None, EventKind.RECOVER)

    @property
    def now(self) -> float:
        return self.queue.now

    # state of the world

    def _sync(self, now: float) -> None:
        if self.mobility is not None:
            self.positions = self.mobility.step(now)
        self.apply_failures(now)

    def apply_failures(self, now: float) -> None:
        """Update which nodes are up. Nodes going down or up lose their state."""
        alive = now < self.lifetimes
        for blackout in self.scenario.blackouts:
            if blackout.is_active(now):
                alive &= ~blackout.covers(self.positions)
        for node in np.flatnonzero(alive != self.alive):
            node = int(node)
            kind = EventKind.RECOVER if alive[node] else EventKind.FAIL
            self._record(TraceRecord(time=now, node=node, kind=str(kind)))
            logger.debug("t=%.4f node %d %s", now, node, kind)
            self.agents[node].reset()
        self.alive = alive

    def neighbors(self, node: int) -> np.ndarray:
        """Alive nodes within radio range of node, in ascending order."""
        if not self.alive[node]:
            return np.array([], dtype=int)
        return np.flatnonzero(self.radio.neighbor_mask(self.positions, self.alive, node))

    def _record(self, record: TraceRecord) -> None:
        line = record.to_json()
        self._hash.update(line.encode("utf-8"))
        self._hash.update(b"\n")
        if self.record_trace:
            self.trace.append(record)

    def _record_packet(self, kind: str, node: int, packet: Packet, peer=None) -> None:
        self._record(
            TraceRecord(
                time=self.now,
                node=node,
                kind=str(kind),
                packet_kind=str(packet.kind),
                src=packet.origin,
                dst=packet.destination,
                ttl=packet.ttl,
                hop_count=packet.hop_count,
                uid=packet.uid,
                peer=peer,
            )
        )

    def _is_lost(self) -> bool:
        probability = self.radio.loss_probability
        return probability > 0 and self._loss_rng.random() < probability

    # services for the agents

    def new_uid(self) -> int:
        self._uids += 1
        return self._uids

    def broadcast(self, node: int, packet: Packet) -> None:
        """Send packet to every neighbor of node in one transmission."""
        if not self.alive[node]:
            return
        self._record_packet(EventKind.TRANSMIT, node, packet)
        self.metrics.on_transmit(packet)
        arrival = self.now + self.radio.transmission_delay(packet.size)
        for neighbor in self.neighbors(node):
            if self._is_lost():
                continue
            self.queue.schedule(
                arrival, int(neighbor), EventKind.RECEIVE, (packet, node, False)
            )

    def unicast(self, node: int, packet: Packet, next_hop: int) -> None:
        """Send packet to next_hop. Other promiscuous neighbors overhear it."""
        if not self.alive[node]:
            return
        self._record_packet(EventKind.TRANSMIT, node, packet, peer=next_hop)
        self.metrics.on_transmit(packet)
        arrival = self.now + self.radio.transmission_delay(packet.size)
        neighbors = self.neighbors(node)
        reachable = next_hop in neighbors
        if reachable and not self._is_lost():
            self.queue.schedule(
                arrival, next_hop, EventKind.RECEIVE, (packet, node, False)
            )
        elif self.profile.link_layer_feedback:
            self.set_timer(node, arrival, LINK_FAILURE, (next_hop, packet))
        if self.profile.promiscuous:
            for neighbor in neighbors:
                if neighbor != next_hop and not self._is_lost():
                    self.queue.schedule(
                        arrival, int(neighbor), EventKind.RECEIVE, (packet, node, True)
                    )

    def set_timer(self, node: int, at: float, name: str, data=None) -> Timer:
        timer = Timer(name=name, data=data, generation=self.agents[node].generation)
        self.queue.schedule(max(at, self.now), node, EventKind.TIMER, timer)
        return timer

    def deliver(self, node: int, packet: Packet) -> None:
        if self.metrics.on_delivered(packet, self.now):
            logger.debug(
                "t=%.4f data %s delivered at %d over %s",
                self.now,
                packet.data_id,
                node,
                packet.path,
            )

    def drop(self, reason: str, packet: Packet = None) -> None:
        self.metrics.on_drop(reason)
        if packet is not None and packet.kind == PacketKind.DATA:
            logger.debug("t=%.4f data %s dropped: %s", self.now, packet.data_id, reason)

    def note_gratuitous_rrep(self) -> None:
        self.metrics.on_gratuitous_rrep()

    # event loop

    def _on_traffic(self, node: int, payload) -> None:
        index, count = payload
        flow = self.flows[index]
        if self.alive[node]:
            self._data_ids += 1
            packet = Packet(
                kind=PacketKind.DATA,
                origin=flow.source,
                destination=flow.destination,
                uid=self.new_uid(),
                payload_size=flow.packet_size,
                data_id=self._data_ids,
                sent_at=self.now,
            )
            self.metrics.on_data_sent(packet)
            self.agents[node].send_data(packet)
        time = flow.send_time(count + 1, self.scenario.duration)
        if time is not None:
            self.queue.schedule(time, node, EventKind.TRAFFIC, (index, count + 1))

    def _dispatch(self, event) -> None:
        if event.kind == EventKind.TRAFFIC:
            self._on_traffic(event.node, event.payload)
        elif event.kind == EventKind.RECEIVE:
            if self.alive[event.node]:
                packet, sender, overheard = event.payload
                self._record_packet(EventKind.RECEIVE, event.node, packet, peer=sender)
                self.agents[event.node].receive(packet, sender, overheard)
        elif event.kind == EventKind.TIMER:
            timer = event.payload
            agent = self.agents[event.node]
            if (
                not timer.cancelled
                and timer.generation == agent.generation
                and self.alive[event.node]
            ):
                agent.on_timer(timer)
        elif event.kind not in (EventKind.FAIL, EventKind.RECOVER):
            raise ValueError("unknown event kind %s" % event.kind)

    def run_until(self, limit: float = None) -> SimulationResult:
        """Process events up to limit, by default the scenario duration."""
        limit = self.scenario.duration if limit is None else limit
        logger.info("Running %r until t=%s", self, limit)
        while self.queue and self.queue.peek_time() <= limit:
            event = self.queue.pop()
            self._sync(event.time)
            self._dispatch(event)
        report = self.metrics.build_report(
            limit,
            scenario_id=self.scenario.name,
            protocol=self.profile.name,
            seed=self.seed,
            nodes=self.scenario.node_count,
            speed=self.scenario.speed,
            pause=self.scenario.pause,
        )
        report.trace_digest = self._hash.hexdigest()
        logger.info(
            "Finished %r: %d of %d delivered, %d control packets",
            self,
            report.data_delivered,
            report.data_sent,
            report.control_total,
        )
        return SimulationResult(
            report=report,
            trace=list(self.trace),
            digest=report.trace_digest,
            agents=self.agents,
            delivered_paths=dict(self.metrics.delivered_paths),
        )


def run_scenario(
    scenario: ScenarioConfig,
    protocol: str = None,
    seed: int = None,
    record_trace: bool = False,
) -> SimulationResult:
    """Shortcut for one complete run."""
    profile = get_profile(protocol or scenario.protocol, scenario.profiles)
    return Simulator(
        scenario, profile=profile, seed=seed, record_trace=record_trace
    ).run_until()
