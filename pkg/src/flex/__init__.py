"""On-demand FLEX fleet: requests, trip-plans, assignment and rebalancing."""

from src.flex.fleet import (
    FleetState,
    FlexVehicle,
    VehicleStatus,
    assignment_call,
    rebalancing_call,
)
from src.flex.plans import (
    PlanBook,
    Request,
    TripPlan,
    Visit,
    cumulative_wait,
    feasible_insertion,
    insert_request,
    submit_request,
)

__all__ = [
    "FleetState",
    "FlexVehicle",
    "PlanBook",
    "Request",
    "TripPlan",
    "VehicleStatus",
    "Visit",
    "assignment_call",
    "cumulative_wait",
    "feasible_insertion",
    "insert_request",
    "rebalancing_call",
    "submit_request",
]
