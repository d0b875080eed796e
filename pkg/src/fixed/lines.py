"""Fixed lines and timetable dispatching."""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.fixed.vehicles import DWELL_INTERCEPT, VehicleType
from src.network.network import Network


@dataclass(frozen=True)
class FixLine:
    """A fixed route with a headway or an explicit departure list."""

    id: str
    stops: Tuple[str, ...]
    links: Tuple[str, ...]
    vehicle_type: VehicleType
    headway: Optional[float] = None
    departures: Tuple[float, ...] = ()
    offset: float = 0.0
    base: Optional[str] = None  # directions of one service share a base line

    def __post_init__(self):
        if len(self.stops) < 2:
            raise ValueError(f"line {self.id}: needs at least two stops")
        if len(self.links) != len(self.stops) - 1:
            raise ValueError(f"line {self.id}: link count must equal stop count - 1")
        if self.headway is None and not self.departures:
            raise ValueError(f"line {self.id}: headway or departures required")
        if self.headway is not None and self.headway <= 0:
            raise ValueError(f"line {self.id}: headway must be > 0")
        if any(b <= a for a, b in zip(self.departures[:-1], self.departures[1:])):
            raise ValueError(f"line {self.id}: departures must be strictly increasing")

    def validate_route(self, net: Network):
        for (a, b), link_id in zip(zip(self.stops[:-1], self.stops[1:]), self.links):
            link = net.road_links.get(link_id)
            if link is None or link.from_stop != a or link.to_stop != b:
                raise ValueError(f"line {self.id}: link {link_id} does not connect {a}->{b}")

    @property
    def base_line(self) -> str:
        return self.base or self.id

    @property
    def mean_headway(self) -> float:
        if self.headway is not None:
            return self.headway
        if len(self.departures) < 2:
            return math.inf
        return (self.departures[-1] - self.departures[0]) / (len(self.departures) - 1)

    def index_of(self, stop_id: str) -> int:
        return self.stops.index(stop_id)

    def free_flow_between(self, net: Network, board_stop: str, alight_stop: str) -> float:
        i, j = self.index_of(board_stop), self.index_of(alight_stop)
        return float(sum(net.road_links[link_id].free_flow_time for link_id in self.links[i:j]))

    def route_time(self, net: Network) -> float:
        return self.free_flow_between(net, self.stops[0], self.stops[-1])


@dataclass(frozen=True, order=True)
class TripStart:
    departure: float
    line_id: str
    trip_id: str


def combined_headway(lines: List[FixLine]) -> float:
    """Headway of a set of lines served as common lines: 1 / sum(1/h)."""
    frequency = sum(1.0 / line.mean_headway for line in lines if math.isfinite(line.mean_headway))
    return 1.0 / frequency if frequency > 0 else math.inf


def warmup_span(line: FixLine, net: Network) -> float:
    """Lead time that puts evenly spaced vehicles along the whole line before demand starts."""
    return line.route_time(net) + DWELL_INTERCEPT * len(line.stops) + line.mean_headway


def dispatch_timetable(line: FixLine, window_start: float, window_end: float,
                       net: Optional[Network] = None, warmup: bool = False) -> List[TripStart]:
    """Trip starts of a line over a demand window.

    Args:
        line: The fixed line
        window_start: Start of the demand window (seconds)
        window_end: End of the demand window (seconds, exclusive)
        net: Network, required when warm-up is requested
        warmup: Start headway-based trips early so vehicles are already
            spread along the line at the planned headway when demand starts

    Returns:
        One trip start per departure, ordered by departure time
    """
    if line.departures:
        times = [t for t in line.departures if t < window_end]
    else:
        lead = warmup_span(line, net) if warmup and net is not None else 0.0
        first_k = math.ceil((window_start - lead - line.offset) / line.headway)
        times = []
        k = first_k
        while True:
            t = line.offset + k * line.headway
            if t >= window_end:
                break
            times.append(float(t))
            k += 1
    return [TripStart(t, line.id, f"{line.id}#{i:04d}") for i, t in enumerate(times)]
