"""Discrete-event core: events, traveler state machine and the within-day simulation."""

from src.engine.events import EventQueue, Phase, SimEvent
from src.engine.simulation import DayResult, DaySimulation, ServiceStats, TravelerOutcome, run_day
from src.engine.traveler import ALLOWED_TRANSITIONS, TravelerAgent, TravelerState
from src.engine.world import DemandModel, FlexSetup, SimulationWorld, TravelerSpec, available_path_types

__all__ = [
    "ALLOWED_TRANSITIONS",
    "DayResult",
    "DaySimulation",
    "DemandModel",
    "EventQueue",
    "FlexSetup",
    "Phase",
    "ServiceStats",
    "SimEvent",
    "SimulationWorld",
    "TravelerAgent",
    "TravelerOutcome",
    "TravelerSpec",
    "TravelerState",
    "available_path_types",
    "run_day",
]
