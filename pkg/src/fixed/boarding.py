"""FIX vehicle trips, stop queues and FIFO boarding with denied-boarding bookkeeping."""

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from src.core.invariants import InvariantChecker
from src.fixed.lines import FixLine
from src.fixed.vehicles import Cabin, OnboardPassenger, dwell_time


@dataclass
class QueueEntry:
    traveler_id: str
    lines: FrozenSet[str]
    joined_at: float
    seq: int
    denied_since: Optional[float] = None


class StopQueue:
    """Per-stop FIFO queues of travelers waiting for FIX lines."""

    def __init__(self):
        self._queues: Dict[str, List[QueueEntry]] = defaultdict(list)
        self._seq = 0

    def join(self, stop_id: str, traveler_id: str, lines: FrozenSet[str], now: float) -> QueueEntry:
        entry = QueueEntry(traveler_id, frozenset(lines), now, self._seq)
        self._seq += 1
        self._queues[stop_id].append(entry)
        return entry

    def waiting(self, stop_id: str) -> List[QueueEntry]:
        return list(self._queues.get(stop_id, []))

    def remove(self, stop_id: str, entries: List[QueueEntry]):
        if not entries:
            return
        gone = {e.seq for e in entries}
        self._queues[stop_id] = [e for e in self._queues[stop_id] if e.seq not in gone]


@dataclass
class VehicleTripState:
    """One FIX trip of a line; a virtual vehicle per trip."""

    line: FixLine
    trip_id: str
    cabin: Cabin
    stop_index: int = 0
    boardings: int = 0
    alightings: int = 0

    @classmethod
    def start(cls, line: FixLine, trip_id: str) -> "VehicleTripState":
        return cls(line=line, trip_id=trip_id, cabin=Cabin(line.vehicle_type))

    @property
    def current_stop(self) -> str:
        return self.line.stops[self.stop_index]

    @property
    def at_terminal(self) -> bool:
        return self.stop_index == len(self.line.stops) - 1

    @property
    def next_link(self) -> Optional[str]:
        return None if self.at_terminal else self.line.links[self.stop_index]


@dataclass
class ArrivalOutcome:
    boarded: List[Tuple[QueueEntry, OnboardPassenger]]
    alighted: List[OnboardPassenger]
    denied: List[QueueEntry]
    dwell: float


def process_vehicle_arrival(trip: VehicleTripState, stop_id: str, queue: StopQueue, now: float,
                            wants_to_board: Callable[[QueueEntry], bool],
                            choose_alight: Callable[[QueueEntry], str],
                            checker: Optional[InvariantChecker] = None) -> ArrivalOutcome:
    """Serve one stop: alight, reseat, admit willing travelers FIFO, compute dwell.

    Args:
        trip: Vehicle trip currently at the stop
        stop_id: The stop
        queue: Stop queues
        now: Arrival time
        wants_to_board: Boarding decision of a queued traveler for this vehicle
        choose_alight: Alighting decision, taken immediately after boarding
        checker: Optional invariant checker

    Returns:
        Boarded, alighted and denied travelers with the dwell time
    """
    checker = checker or InvariantChecker(enabled=False)
    if trip.current_stop != stop_id:
        raise ValueError(f"trip {trip.trip_id} is at {trip.current_stop}, not {stop_id}")

    alighted = trip.cabin.alight_at(stop_id, force_all=trip.at_terminal)
    trip.cabin.reseat()

    boarded: List[Tuple[QueueEntry, OnboardPassenger]] = []
    denied: List[QueueEntry] = []
    if not trip.at_terminal:
        for entry in queue.waiting(stop_id):
            if trip.line.id not in entry.lines:
                continue
            if not wants_to_board(entry):
                continue
            if trip.cabin.has_room:
                passenger = trip.cabin.board(entry.traveler_id, now, stop_id)
                passenger.alight_stop = choose_alight(entry)
                boarded.append((entry, passenger))
            else:
                if entry.denied_since is None:
                    entry.denied_since = now
                denied.append(entry)
        queue.remove(stop_id, [entry for entry, _ in boarded])

    order = [entry.seq for entry, _ in boarded]
    checker.check(order == sorted(order), "fifo_boarding", {"trip": trip.trip_id, "stop": stop_id})
    checker.check(trip.cabin.load <= trip.cabin.vehicle_type.capacity, "capacity",
                  {"trip": trip.trip_id, "load": trip.cabin.load})

    trip.boardings += len(boarded)
    trip.alightings += len(alighted)
    if trip.at_terminal:
        checker.check(trip.boardings == trip.alightings, "trip_conservation",
                      {"trip": trip.trip_id, "boardings": trip.boardings, "alightings": trip.alightings})

    return ArrivalOutcome(boarded, alighted, denied, dwell_time(len(boarded), len(alighted)))
