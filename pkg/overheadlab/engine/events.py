import heapq
import itertools
from dataclasses import dataclass, field
from typing import Any, List, Optional


class SchedulingError(RuntimeError):
    """An event was scheduled before the current simulation clock."""


@dataclass(order=True, frozen=True)
class SimEvent:
    time: float
    seq: int
    node: Optional[int] = field(default=None, compare=False)
    kind: str = field(default="", compare=False)
    payload: Any = field(default=None, compare=False)


@dataclass(eq=False)
class Timer:
    """Handle of a scheduled agent timer.

    A timer fires only when it was not cancelled and still belongs to the
    generation of the agent that set it.
    """

    name: str
    data: Any = None
    generation: int = 0
    cancelled: bool = False

    def cancel(self) -> None:
        self.cancelled = True


class EventQueue:
    """Priority queue of events ordered by (time, seq)."""

    def __init__(self) -> None:
        self._heap: List[SimEvent] = []
        self._counter = itertools.count()
        self.now = 0.0

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def schedule(
        self, time: float, node: Optional[int], kind: str, payload: Any = None
    ) -> SimEvent:
        if time < self.now:
            raise SchedulingError(
                "event %s for node %s at %r is before the clock at %r"
                % (kind, node, time, self.now)
            )
        event = SimEvent(
            time=time, seq=next(self._counter), node=node, kind=kind, payload=payload
        )
        heapq.heappush(self._heap, event)
        return event

    def peek_time(self) -> Optional[float]:
        return self._heap[0].time if self._heap else None

    def pop(self) -> SimEvent:
        event = heapq.heappop(self._heap)
        self.now = event.time
        return event
