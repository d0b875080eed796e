"""Logsums, MNL probabilities and choice sampling shared by every decision category."""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, List, Sequence

import numpy as np

from src.core.logger import get_component_logger
from src.paths.alternatives import PathAlternative


class DecisionKind(str, Enum):
    CONNECTION = "connection"
    MODE = "mode"
    DROPOFF = "dropoff"
    BOARD = "board"
    ALIGHT = "alight"


@dataclass
class ActionAlternative:
    """An offered action with its path-set and logsum utility."""

    kind: DecisionKind
    label: Any
    paths: List[PathAlternative] = field(default_factory=list)
    utility: float = 0.0


def action_logsum(utilities: Sequence[float]) -> float:
    """ln sum exp over the path utilities of an action, max-shift stabilized.

    Args:
        utilities: Utilities of the paths in the action's path-set

    Returns:
        Logsum utility; exactly the input for a singleton
    """
    values = np.asarray(utilities, dtype=float)
    if values.size == 0:
        raise ValueError("empty path-set: action is not offered")
    if values.size == 1:
        return float(values[0])
    top = values.max()
    return float(top + np.log(np.exp(values - top).sum()))


def mnl_probabilities(utilities: Sequence[float]) -> np.ndarray:
    values = np.asarray(utilities, dtype=float)
    if values.size == 0:
        raise ValueError("no actions to choose from")
    weights = np.exp(values - values.max())
    return weights / weights.sum()


def sample_choice(probabilities: Sequence[float], rng: np.random.Generator) -> int:
    """Inverse-CDF draw. A single action is returned without consuming a draw."""
    probs = np.asarray(probabilities, dtype=float)
    if probs.size == 1:
        return 0
    u = rng.random()
    index = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    return min(index, probs.size - 1)


class DecisionModel:
    """MNL choice over offered actions, with an optional per-decision trace."""

    def __init__(self, trace: bool = False):
        self.trace = trace
        self.logger = get_component_logger("decisions")
        self.counts: Counter = Counter()

    def choose(self, traveler_id: str, actions: List[ActionAlternative],
               rng: np.random.Generator) -> ActionAlternative:
        if not actions:
            raise ValueError(f"traveler {traveler_id}: no actions offered")
        utilities = [a.utility for a in actions]
        probs = mnl_probabilities(utilities)
        index = sample_choice(probs, rng)
        kind = actions[0].kind
        self.counts[kind] += 1
        if self.trace:
            self.logger.debug("decision", f"{kind.value} decision", {
                "traveler": traveler_id,
                "alternatives": [str(a.label) for a in actions],
                "utilities": [round(u, 6) for u in utilities],
                "probabilities": [round(float(p), 6) for p in probs],
                "chosen": str(actions[index].label),
            })
        return actions[index]
