"""Anticipations, experience weighting and day-to-day learning."""

from src.learning.crowding import CrowdingCurve, crowding_multiplier, weighted_ivt, weighted_wait
from src.learning.experience import (
    InVehicleInterval,
    Quantity,
    RealizedLegExperience,
    Sharing,
    experience_group,
    od_key,
)
from src.learning.ledger import (
    ExperienceLedger,
    LedgerEntry,
    anticipate,
    build_priors,
    collect_day,
    learning_curve_rows,
    msa_update,
)

__all__ = [
    "CrowdingCurve",
    "ExperienceLedger",
    "InVehicleInterval",
    "LedgerEntry",
    "Quantity",
    "RealizedLegExperience",
    "Sharing",
    "anticipate",
    "build_priors",
    "collect_day",
    "crowding_multiplier",
    "experience_group",
    "learning_curve_rows",
    "msa_update",
    "od_key",
    "weighted_ivt",
    "weighted_wait",
]
