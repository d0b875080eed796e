"""Utilities, logsums and MNL choice."""

from src.choice.mnl import (
    ActionAlternative,
    DecisionKind,
    DecisionModel,
    action_logsum,
    mnl_probabilities,
    sample_choice,
)
from src.choice.utility import DEFAULT_BETA_IVT, ModeWeights, ValueOfTime, path_utility

__all__ = [
    "DEFAULT_BETA_IVT",
    "ActionAlternative",
    "DecisionKind",
    "DecisionModel",
    "ModeWeights",
    "ValueOfTime",
    "action_logsum",
    "mnl_probabilities",
    "path_utility",
    "sample_choice",
]
