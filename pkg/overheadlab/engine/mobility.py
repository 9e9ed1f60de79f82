from typing import Sequence, Tuple

import numpy as np


class RandomWaypoint:
    """Random waypoint movement inside a rectangular area.

    Each node travels in a straight line to a uniformly drawn waypoint at
    constant speed, pauses there, then draws the next waypoint. Every node has
    its own random stream, so one node's path does not depend on the others.
    """

    def __init__(
        self,
        positions: np.ndarray,
        area: Tuple[float, float],
        speed: float,
        pause: float,
        rngs: Sequence[np.random.Generator],
    ) -> None:
        self.area = np.asarray(area, dtype=float)
        self.speed = float(speed)
        self.pause = float(pause)
        self._rngs = list(rngs)
        self.positions = np.array(positions, dtype=float)
        node_count = len(self.positions)
        self._origin = self.positions.copy()
        self._leg_start = np.zeros(node_count)
        self._waypoint = self.positions.copy()
        self._arrival = np.zeros(node_count)
        self._now = 0.0
        if self.speed > 0:
            for node in range(node_count):
                self._start_leg(node, 0.0)

    def _start_leg(self, node: int, start: float) -> None:
        self._origin[node] = self._waypoint[node]
        self._leg_start[node] = start
        self._waypoint[node] = self._rngs[node].uniform((0.0, 0.0), self.area)
        distance = float(np.hypot(*(self._waypoint[node] - self._origin[node])))
        self._arrival[node] = start + distance / self.speed

    def step(self, now: float) -> np.ndarray:
        """Advance all nodes to time now and return their positions."""
        if self.speed <= 0 or now <= self._now:
            return self.positions
        for node in np.flatnonzero(self._arrival + self.pause <= now):
            while self._arrival[node] + self.pause <= now:
                self._start_leg(node, self._arrival[node] + self.pause)
        travel = self._arrival - self._leg_start
        elapsed = now - self._leg_start
        fraction = np.divide(
            elapsed, travel, out=np.ones_like(elapsed), where=travel > 0
        )
        fraction = np.clip(fraction, 0.0, 1.0)
        self.positions = (
            self._origin + (self._waypoint - self._origin) * fraction[:, np.newaxis]
        )
        self._now = now
        return self.positions
