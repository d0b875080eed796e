"""Physical network: stops, road and walk links, shortest routes."""

from src.network.network import (
    DEFAULT_WALK_SPEED,
    Network,
    RoadLink,
    Route,
    RunningTimeDistribution,
    Stop,
    WalkLink,
    flex_route_table,
    sample_running_time,
    shortest_route,
    walk_time,
)

__all__ = [
    "DEFAULT_WALK_SPEED",
    "Network",
    "RoadLink",
    "Route",
    "RunningTimeDistribution",
    "Stop",
    "WalkLink",
    "flex_route_table",
    "sample_running_time",
    "shortest_route",
    "walk_time",
]
