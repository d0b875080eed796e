"""Action-conditioned path-sets for connection, mode, drop-off, boarding and alighting decisions."""

from typing import Callable, Dict, FrozenSet, Iterable, List, Sequence, Tuple

from src.paths.alternatives import Mode, PathAlternative


def _bucket(paths: Iterable[PathAlternative],
            members: Callable[[PathAlternative], FrozenSet[str]]) -> Dict[str, List[PathAlternative]]:
    buckets: Dict[str, List[PathAlternative]] = {}
    for path in paths:
        for key in sorted(members(path)):
            buckets.setdefault(key, []).append(path)
    return {key: buckets[key] for key in sorted(buckets)}


def connection_sets(paths: Sequence[PathAlternative]) -> Dict[str, List[PathAlternative]]:
    """Paths per candidate connection stop s+ (membership in the first boarding set)."""
    return _bucket((p for p in paths if p.legs), lambda p: p.legs[0].board_stops)


def mode_sets(bucket: Sequence[PathAlternative]) -> Dict[Mode, List[PathAlternative]]:
    """Partition of a connection bucket by the mode of the first leg."""
    cells: Dict[Mode, List[PathAlternative]] = {Mode.FIX: [], Mode.FLEX: []}
    for path in bucket:
        cells[path.legs[0].mode].append(path)
    return cells


def dropoff_sets(bucket: Sequence[PathAlternative]) -> Dict[str, List[PathAlternative]]:
    """FLEX paths per candidate drop-off stop s- (membership in the first alighting set)."""
    return _bucket(bucket, lambda p: p.legs[0].alight_stops)


def board_stay_partition(bucket: Sequence[PathAlternative],
                         arriving_line: str) -> Tuple[List[PathAlternative], List[PathAlternative]]:
    """Split waiting-for-FIX paths into those boarding the arriving line and the rest."""
    board: List[PathAlternative] = []
    stay: List[PathAlternative] = []
    for path in bucket:
        (board if arriving_line in path.legs[0].service_ids else stay).append(path)
    return board, stay


def alight_sets(boarded: Sequence[PathAlternative]) -> Dict[str, List[PathAlternative]]:
    """Paths of the boarded set per candidate alighting stop."""
    return _bucket(boarded, lambda p: p.legs[0].alight_stops)


def continuation(paths: Sequence[PathAlternative], at_stop: str) -> List[PathAlternative]:
    """Remaining path alternatives after leaving the first leg at ``at_stop``."""
    seen = set()
    remainder: List[PathAlternative] = []
    for path in paths:
        if at_stop not in path.legs[0].alight_stops:
            continue
        rest = path.suffix(at_stop)
        if rest not in seen:
            seen.add(rest)
            remainder.append(rest)
    return remainder


def awaited_lines(fix_bucket: Sequence[PathAlternative]) -> FrozenSet[str]:
    """Lines a traveler waiting for FIX considers relevant."""
    return frozenset(line for path in fix_bucket for line in path.legs[0].service_ids)
