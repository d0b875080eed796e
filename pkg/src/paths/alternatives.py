"""Path alternatives: alternating walk / stop / transit-leg sequences with set-valued FIX legs."""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple


class Mode(str, Enum):
    FIX = "fix"
    FLEX = "flex"


FLEX_SERVICE = "flex"


@dataclass(frozen=True, order=True)
class ServiceRef:
    """A transit service a leg can be ridden on: a FIX line or the FLEX operator."""

    id: str
    mode: Mode


@dataclass(frozen=True)
class TransitLeg:
    """Transit component L_j with its boarding set S_2j and alighting set S_2j+1."""

    board_stops: FrozenSet[str]
    services: FrozenSet[ServiceRef]
    alight_stops: FrozenSet[str]
    free_flow_time: float = 0.0
    headway: float = math.inf

    def __post_init__(self):
        if not self.board_stops or not self.services or not self.alight_stops:
            raise ValueError("transit leg components must be nonempty")
        modes = {s.mode for s in self.services}
        if len(modes) > 1:
            raise ValueError("a leg cannot mix FIX and FLEX services")
        if Mode.FLEX in modes and (len(self.board_stops) > 1 or len(self.alight_stops) > 1
                                   or len(self.services) > 1):
            raise ValueError("FLEX leg components must be singletons")

    @property
    def mode(self) -> Mode:
        return mode_of_leg(self)

    @cached_property
    def service_ids(self) -> FrozenSet[str]:
        return frozenset(s.id for s in self.services)

    @cached_property
    def key(self) -> str:
        """Stable path-component identifier used by the experience ledger."""
        services = "+".join(sorted(self.service_ids))
        board = "|".join(sorted(self.board_stops))
        alight = "|".join(sorted(self.alight_stops))
        return f"{self.mode.value}:{services}:{board}>{alight}"


def mode_of_leg(leg: TransitLeg) -> Mode:
    """FIX iff every member service has a fixed route and schedule."""
    if not leg.services:
        raise ValueError("empty transit component")
    modes = {s.mode for s in leg.services}
    if len(modes) > 1:
        raise ValueError("mixed FIX/FLEX membership in one leg")
    return Mode.FIX if modes == {Mode.FIX} else Mode.FLEX


WalkKey = Tuple[str, str]


@dataclass(frozen=True)
class PathAlternative:
    """Path i = {o, W1, S2, L1, S3, ..., S2n, Ln, S2n+1, Wn+1, d}.

    ``walks[j]`` is the walk set preceding ``legs[j]``; the last walk set
    leads to the destination. ``walk_distances`` holds one distance per walk set.
    """

    origin: str
    destination: str
    walks: Tuple[FrozenSet[WalkKey], ...]
    legs: Tuple[TransitLeg, ...]
    walk_distances: Tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.walks) != len(self.legs) + 1:
            raise ValueError("a path needs one more walk set than transit legs")
        if self.walk_distances and len(self.walk_distances) != len(self.walks):
            raise ValueError("one walk distance per walk set")
        for prev, nxt in zip(self.legs[:-1], self.legs[1:]):
            if prev.mode is Mode.FLEX and nxt.mode is Mode.FLEX:
                raise ValueError("consecutive FLEX legs are not allowed")
        starts = [frozenset([self.origin])] + [leg.alight_stops for leg in self.legs]
        ends = [leg.board_stops for leg in self.legs] + [frozenset([self.destination])]
        for walk_set, start, end in zip(self.walks, starts, ends):
            if not walk_set:
                raise ValueError("empty walk component")
            for a, b in walk_set:
                if a not in start or b not in end:
                    raise ValueError(f"walk {a}->{b} breaks stop/walk/transit alternation")

    @property
    def n_legs(self) -> int:
        return len(self.legs)

    @property
    def n_transfers(self) -> int:
        return max(0, len(self.legs) - 1)

    @property
    def modes(self) -> Tuple[Mode, ...]:
        return tuple(leg.mode for leg in self.legs)

    @cached_property
    def path_type(self) -> str:
        return "-".join(m.value.upper() for m in self.modes) or "WALK"

    @property
    def total_walk_distance(self) -> float:
        return float(sum(self.walk_distances)) if self.walk_distances else 0.0

    @property
    def free_flow_time(self) -> float:
        return float(sum(leg.free_flow_time for leg in self.legs))

    @cached_property
    def key(self) -> str:
        return " ".join([self.origin, *(leg.key for leg in self.legs), self.destination])

    def suffix(self, at_stop: str) -> "PathAlternative":
        """The remainder of the path after alighting the first leg at ``at_stop``."""
        if at_stop not in self.legs[0].alight_stops:
            raise ValueError(f"{at_stop} does not terminate the first leg")
        walks = tuple(
            frozenset(w for w in walk_set if w[0] == at_stop) if i == 0 else walk_set
            for i, walk_set in enumerate(self.walks[1:])
        )
        return PathAlternative(at_stop, self.destination, walks, self.legs[1:],
                               self.walk_distances[1:] if self.walk_distances else ())

    def describe(self) -> str:
        legs = ", ".join(leg.key for leg in self.legs)
        modes = "-".join(m.value for m in self.modes)
        return f"{self.origin}, [{legs}], {self.destination}, {self.n_transfers}, {modes}"


@dataclass
class ChoiceSetFilters:
    """Filtering rules for choice-set generation."""

    max_transfers: int = 1
    max_walk_distance: float = math.inf
    allowed_types: Optional[Dict[str, List[str]]] = None
    dominance_pruning: bool = False
    merge_epsilon: float = 0.0
    transfer_stops: Optional[FrozenSet[str]] = None

    def __post_init__(self):
        if self.max_transfers < 0:
            raise ValueError("max_transfers must be >= 0")

    def allows_type(self, category: str, path_type: str) -> bool:
        if self.allowed_types is None:
            return True
        allowed = self.allowed_types.get(category)
        if allowed is None:
            return True
        return path_type in allowed


@dataclass
class GlobalPathSet:
    """Path alternatives per OD pair."""

    paths: Dict[Tuple[str, str], Tuple[PathAlternative, ...]] = field(default_factory=dict)
    categories: Dict[Tuple[str, str], str] = field(default_factory=dict)

    def get(self, origin: str, destination: str) -> Tuple[PathAlternative, ...]:
        return self.paths.get((origin, destination), ())

    def category(self, origin: str, destination: str) -> str:
        return self.categories.get((origin, destination), "ALL")

    def ods(self) -> List[Tuple[str, str]]:
        return sorted(self.paths)

    def all_legs(self) -> List[TransitLeg]:
        seen: Dict[str, TransitLeg] = {}
        for od in self.ods():
            for path in self.paths[od]:
                for leg in path.legs:
                    seen.setdefault(leg.key, leg)
        return [seen[k] for k in sorted(seen)]

    def describe(self) -> List[str]:
        """Diagnostic listing, one path per line."""
        return [path.describe() for od in self.ods() for path in self.paths[od]]
