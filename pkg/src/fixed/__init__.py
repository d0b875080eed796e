"""Fixed-line supply: lines, timetables, vehicles, FIFO boarding."""

from src.fixed.boarding import (
    ArrivalOutcome,
    QueueEntry,
    StopQueue,
    VehicleTripState,
    process_vehicle_arrival,
)
from src.fixed.lines import FixLine, TripStart, combined_headway, dispatch_timetable, warmup_span
from src.fixed.vehicles import Cabin, OnboardPassenger, VehicleType, dwell_time

__all__ = [
    "ArrivalOutcome",
    "Cabin",
    "FixLine",
    "OnboardPassenger",
    "QueueEntry",
    "StopQueue",
    "TripStart",
    "VehicleTripState",
    "VehicleType",
    "combined_headway",
    "dispatch_timetable",
    "dwell_time",
    "process_vehicle_arrival",
    "warmup_span",
]
