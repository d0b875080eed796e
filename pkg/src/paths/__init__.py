"""Path alternatives, choice-set generation and action-conditioned path-sets."""

from src.paths.alternatives import (
    FLEX_SERVICE,
    ChoiceSetFilters,
    GlobalPathSet,
    Mode,
    PathAlternative,
    ServiceRef,
    TransitLeg,
    mode_of_leg,
)
from src.paths.generation import (
    ChoiceSetGenerator,
    build_fix_legs,
    build_flex_legs,
    describe_paths,
    dominates,
    generate_choice_sets,
    od_category,
)
from src.paths.path_sets import (
    alight_sets,
    awaited_lines,
    board_stay_partition,
    connection_sets,
    continuation,
    dropoff_sets,
    mode_sets,
)

__all__ = [
    "FLEX_SERVICE",
    "ChoiceSetFilters",
    "ChoiceSetGenerator",
    "GlobalPathSet",
    "Mode",
    "PathAlternative",
    "ServiceRef",
    "TransitLeg",
    "alight_sets",
    "awaited_lines",
    "board_stay_partition",
    "build_fix_legs",
    "build_flex_legs",
    "connection_sets",
    "continuation",
    "describe_paths",
    "dominates",
    "dropoff_sets",
    "generate_choice_sets",
    "mode_of_leg",
    "mode_sets",
    "od_category",
]
