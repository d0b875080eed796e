"""Physical network: stops, road links with stochastic running times, walk links."""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from src.core.logger import get_component_logger


DEFAULT_WALK_SPEED = 1.333  # m/s, 4.8 km/h
ROUTE_TIME_RESOLUTION = 1e-3  # s; route ties are compared on whole ticks of this size


@dataclass(frozen=True)
class Stop:
    """A stop (or location) of the network."""

    id: str
    name: str
    x: float = 0.0
    y: float = 0.0
    tag: Optional[str] = None  # corridor / branch, drives OD categories


@dataclass(frozen=True)
class RunningTimeDistribution:
    """Link running time distribution.

    Log-normal parameters are (mu, sigma) of the logarithm of the running time.
    """

    kind: str = "constant"  # constant | lognormal
    value: float = 0.0
    mu: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind == "constant":
            if self.value <= 0:
                raise ValueError(f"constant running time must be > 0, got {self.value}")
        elif self.kind == "lognormal":
            if self.sigma < 0 or not math.isfinite(self.mu):
                raise ValueError(f"invalid log-normal parameters mu={self.mu} sigma={self.sigma}")
        else:
            raise ValueError(f"unknown running time distribution: {self.kind}")

    @property
    def median(self) -> float:
        return self.value if self.kind == "constant" else math.exp(self.mu)

    @property
    def mean(self) -> float:
        if self.kind == "constant":
            return self.value
        return math.exp(self.mu + 0.5 * self.sigma ** 2)

    def sample(self, rng: np.random.Generator) -> float:
        if self.kind == "constant" or self.sigma == 0:
            return self.median
        return float(rng.lognormal(self.mu, self.sigma))


@dataclass(frozen=True)
class RoadLink:
    """Directed road link between two stops."""

    id: str
    from_stop: str
    to_stop: str
    length: float
    running_time: RunningTimeDistribution
    free_flow: Optional[float] = None

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"link {self.id}: length must be > 0")

    @property
    def free_flow_time(self) -> float:
        """Free-flow traversal time; defaults to the distribution median."""
        return self.free_flow if self.free_flow is not None else self.running_time.median


@dataclass(frozen=True)
class WalkLink:
    """Walking connection between two stops; a zero-distance self-link means staying."""

    from_stop: str
    to_stop: str
    distance: float = 0.0

    def __post_init__(self):
        if self.distance < 0:
            raise ValueError(f"walk link {self.from_stop}->{self.to_stop}: negative distance")


@dataclass(frozen=True)
class Route:
    """Result of a shortest-route query."""

    origin: str
    destination: str
    links: Tuple[str, ...] = ()
    stops: Tuple[str, ...] = ()
    free_flow_time: float = 0.0
    reachable: bool = True

    @classmethod
    def unreachable(cls, origin: str, destination: str) -> "Route":
        return cls(origin, destination, reachable=False, free_flow_time=math.inf)


def _ticks(seconds: float) -> int:
    return int(round(seconds / ROUTE_TIME_RESOLUTION))


@dataclass
class Network:
    """Stops, road links and walk links with an adjacency index."""

    stops: Dict[str, Stop]
    road_links: Dict[str, RoadLink]
    walk_links: Dict[Tuple[str, str], WalkLink] = field(default_factory=dict)

    def __post_init__(self):
        self.logger = get_component_logger("network")
        for link in self.road_links.values():
            for stop_id in (link.from_stop, link.to_stop):
                if stop_id not in self.stops:
                    raise ValueError(f"road link {link.id} references unknown stop {stop_id}")
        for key, walk in self.walk_links.items():
            for stop_id in key:
                if stop_id not in self.stops:
                    raise ValueError(f"walk link {key} references unknown stop {stop_id}")
        for stop_id in self.stops:
            self.walk_links.setdefault((stop_id, stop_id), WalkLink(stop_id, stop_id, 0.0))

        self.graph = nx.MultiDiGraph()
        self.graph.add_nodes_from(sorted(self.stops))
        for link_id in sorted(self.road_links):
            link = self.road_links[link_id]
            self.graph.add_edge(link.from_stop, link.to_stop, key=link.id, weight=link.free_flow_time,
                                ticks=_ticks(link.free_flow_time))

        self._walk_out: Dict[str, List[WalkLink]] = {}
        for key in sorted(self.walk_links):
            self._walk_out.setdefault(key[0], []).append(self.walk_links[key])
        self._route_cache: Dict[Tuple[str, str], Route] = {}

    def walks_from(self, stop_id: str, max_distance: float = math.inf) -> List[WalkLink]:
        """Walk links leaving a stop within a distance cap, self-link included."""
        return [w for w in self._walk_out.get(stop_id, []) if w.distance <= max_distance]

    def walk_link(self, from_stop: str, to_stop: str) -> Optional[WalkLink]:
        return self.walk_links.get((from_stop, to_stop))

    def link_between(self, from_stop: str, to_stop: str) -> RoadLink:
        """Fastest direct link between adjacent stops (smallest id on ties)."""
        candidates = self.graph.get_edge_data(from_stop, to_stop)
        if not candidates:
            raise KeyError(f"no road link {from_stop}->{to_stop}")
        best = min(candidates, key=lambda k: (candidates[k]["ticks"], k))
        return self.road_links[best]

    def shortest_route(self, origin: str, destination: str) -> Route:
        """Minimal free-flow route, ties broken on the lexicographic link-id sequence."""
        key = (origin, destination)
        if key in self._route_cache:
            return self._route_cache[key]
        route = shortest_route(self, origin, destination)
        self._route_cache[key] = route
        return route

    def route_time(self, origin: str, destination: str) -> float:
        return self.shortest_route(origin, destination).free_flow_time

    def route_length(self, route: Route) -> float:
        return sum(self.road_links[link_id].length for link_id in route.links)


def shortest_route(net: Network, origin: str, dest: str) -> Route:
    """Compute the free-flow shortest route between two stops.

    Link times are summed as integer ticks, so routes whose float sums differ
    only by rounding count as ties.

    Args:
        net: Network to search
        origin: Origin stop id
        dest: Destination stop id

    Returns:
        Route with ordered link ids and free-flow time; an unreachable
        route when no path exists
    """
    if origin not in net.stops or dest not in net.stops:
        raise KeyError(f"unknown stop in route query {origin}->{dest}")
    if origin == dest:
        return Route(origin, dest, (), (origin,), 0.0)

    try:
        stop_paths = list(nx.all_shortest_paths(net.graph, origin, dest, weight="ticks"))
    except nx.NetworkXNoPath:
        return Route.unreachable(origin, dest)

    best: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None
    for stop_path in stop_paths:
        links = tuple(net.link_between(a, b).id for a, b in zip(stop_path[:-1], stop_path[1:]))
        if best is None or links < best[0]:
            best = (links, tuple(stop_path))

    links, stops = best
    time = float(sum(net.road_links[link_id].free_flow_time for link_id in links))
    return Route(origin, dest, links, stops, time)


def sample_running_time(link: RoadLink, rng: np.random.Generator) -> float:
    """Draw a realized running time for a road link."""
    return link.running_time.sample(rng)


def walk_time(link: WalkLink, speed: float = DEFAULT_WALK_SPEED,
              rng: Optional[np.random.Generator] = None, variability: float = 0.0) -> float:
    """Walking time over a walk link.

    Without a random stream (or with zero variability) this is the anticipated
    time distance/speed; otherwise the anticipated time is scaled by a
    log-normal multiplier with unit mean and coefficient of variation
    ``variability``.
    """
    if speed <= 0:
        raise ValueError("walking speed must be > 0")
    if link.distance == 0:
        return 0.0
    anticipated = link.distance / speed
    if rng is None or variability <= 0:
        return anticipated
    sigma2 = math.log1p(variability ** 2)
    return anticipated * float(rng.lognormal(-0.5 * sigma2, math.sqrt(sigma2)))


def flex_route_table(net: Network, area: Iterable[str]) -> Dict[Tuple[str, str], Route]:
    """Pre-generate shortest free-flow routes between all pairs of service-area stops."""
    stops = sorted(set(area))
    table: Dict[Tuple[str, str], Route] = {}
    for origin in stops:
        for dest in stops:
            if origin == dest:
                continue
            route = net.shortest_route(origin, dest)
            if route.reachable:
                table[(origin, dest)] = route
    net.logger.info("flex_routes", "FLEX route table generated", {
        "area_stops": len(stops),
        "routes": len(table),
    })
    return table
