"""Event queue with deterministic (time, phase, sequence) ordering."""

import heapq
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, List, Optional


class Phase(IntEnum):
    """Processing order of events sharing a timestamp."""

    VEHICLE_ARRIVAL = 0
    TRAVELER_DECISION = 1
    DISPATCH_TICK = 2
    REBALANCE_TICK = 3
    DAY_END = 4


@dataclass(order=True)
class SimEvent:
    time: float
    phase: Phase
    seq: int
    kind: str = field(compare=False)
    payload: Any = field(default=None, compare=False)


class EventQueue:
    def __init__(self):
        self._heap: List[SimEvent] = []
        self._seq = 0
        self.now = float("-inf")

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, time: float, phase: Phase, kind: str, payload: Any = None) -> SimEvent:
        if time < self.now:
            raise ValueError(f"cannot schedule {kind} at {time} before current time {self.now}")
        event = SimEvent(float(time), phase, self._seq, kind, payload)
        self._seq += 1
        heapq.heappush(self._heap, event)
        return event

    def pop(self) -> Optional[SimEvent]:
        if not self._heap:
            return None
        event = heapq.heappop(self._heap)
        self.now = event.time
        return event

    def peek_time(self) -> Optional[float]:
        return self._heap[0].time if self._heap else None
