"""Generalized travel cost utilities of path alternatives."""

from dataclasses import dataclass
from typing import Protocol

from src.learning.experience import Quantity
from src.network.network import DEFAULT_WALK_SPEED
from src.paths.alternatives import Mode, PathAlternative


# Calibrated so the toy day-1 binary logit gives a 72% FLEX share
DEFAULT_BETA_IVT = -0.0015742


class Anticipations(Protocol):
    def anticipate(self, group: str, component: str, quantity: Quantity) -> float:
        ...


@dataclass(frozen=True)
class ModeWeights:
    """Value-of-time parameters of one mode (utils per second, utils per transfer)."""

    wait: float
    ivt: float
    walk: float
    transfer: float = 0.0

    def __post_init__(self):
        if self.ivt == 0:
            raise ValueError("beta_ivt must be nonzero")
        if max(self.wait, self.ivt, self.walk, self.transfer) > 0:
            raise ValueError("value-of-time parameters are disutilities and must be <= 0")


@dataclass(frozen=True)
class ValueOfTime:
    fix: ModeWeights
    flex: ModeWeights
    walk_speed: float = DEFAULT_WALK_SPEED

    @classmethod
    def calibrated(cls, beta_ivt: float = DEFAULT_BETA_IVT, wait_ratio: float = 2.0,
                   walk_ratio: float = 1.0, transfer_minutes: float = 5.0,
                   walk_speed: float = DEFAULT_WALK_SPEED) -> "ValueOfTime":
        """Same weights for both modes, built from ratios to the in-vehicle time weight."""
        weights = ModeWeights(
            wait=wait_ratio * beta_ivt,
            ivt=beta_ivt,
            walk=walk_ratio * beta_ivt,
            transfer=transfer_minutes * 60.0 * beta_ivt,
        )
        return cls(fix=weights, flex=weights, walk_speed=walk_speed)

    def for_mode(self, mode: Mode) -> ModeWeights:
        return self.fix if mode is Mode.FIX else self.flex


def path_utility(path: PathAlternative, ledger: Anticipations, group: str, vot: ValueOfTime) -> float:
    """Anticipated utility of a path for one experience group.

    Waiting and in-vehicle times come from the ledger (prior or accumulated
    experience); walking times are static distance over walking speed. Each
    leg, its access walk and the transfer onto it use the weights of the
    leg's mode. The egress walk uses the last leg's mode.

    Args:
        path: Path alternative
        ledger: Anticipation source
        group: Experience group of the traveler
        vot: Value-of-time parameters

    Returns:
        Utility v_i (<= 0)
    """
    distances = path.walk_distances or (0.0,) * len(path.walks)
    utility = 0.0
    weights = vot.fix
    for j, leg in enumerate(path.legs):
        weights = vot.for_mode(leg.mode)
        utility += weights.wait * ledger.anticipate(group, leg.key, Quantity.WAIT)
        utility += weights.ivt * ledger.anticipate(group, leg.key, Quantity.IVT)
        utility += weights.walk * distances[j] / vot.walk_speed
        if j > 0:
            utility += weights.transfer
    utility += weights.walk * distances[-1] / vot.walk_speed
    return utility
