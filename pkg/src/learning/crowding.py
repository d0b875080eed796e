"""Crowding multipliers and denied-boarding weighting of realized experiences."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.learning.experience import RealizedLegExperience


@dataclass(frozen=True)
class CrowdingCurve:
    """Piecewise-linear in-vehicle time multipliers over the load factor, flat outside.

    Load factor is passengers on board over seats.
    """

    seated_load_factors: Tuple[float, ...] = (0.5, 2.0)
    seated_multipliers: Tuple[float, ...] = (0.95, 1.71)
    standing_load_factors: Tuple[float, ...] = (1.0, 2.0)
    standing_multipliers: Tuple[float, ...] = (1.78, 2.69)
    denied: float = 3.5

    def __post_init__(self):
        for xs, ys, label in ((self.seated_load_factors, self.seated_multipliers, "seated"),
                              (self.standing_load_factors, self.standing_multipliers, "standing")):
            if len(xs) != len(ys) or not xs:
                raise ValueError(f"{label} curve needs matching breakpoints and multipliers")
            if any(b <= a for a, b in zip(xs[:-1], xs[1:])):
                raise ValueError(f"{label} load-factor breakpoints must increase")
            if any(b < a for a, b in zip(ys[:-1], ys[1:])):
                raise ValueError(f"{label} multipliers must be non-decreasing")
            if min(ys) <= 0:
                raise ValueError(f"{label} multipliers must be > 0")
        if self.denied < 1:
            raise ValueError("denied-boarding penalty must be >= 1")


def crowding_multiplier(load_factor: float, seated: bool, curve: CrowdingCurve) -> float:
    if load_factor < 0:
        raise ValueError("load factor must be >= 0")
    if seated:
        return float(np.interp(load_factor, curve.seated_load_factors, curve.seated_multipliers))
    return float(np.interp(load_factor, curve.standing_load_factors, curve.standing_multipliers))


def weighted_wait(exp: RealizedLegExperience, curve: CrowdingCurve) -> float:
    """Nominal wait plus the denied-boarding wait scaled by the penalty."""
    return exp.nominal_wait + curve.denied * exp.denied_wait


def weighted_ivt(exp: RealizedLegExperience, curve: CrowdingCurve) -> float:
    """Sum of in-vehicle sub-intervals, each scaled by its crowding multiplier."""
    return float(sum(
        interval.duration * crowding_multiplier(interval.load_factor, interval.seated, curve)
        for interval in exp.intervals
    ))
