"""Choice-set generation: enumerate walk/FIX/FLEX compositions per OD and filter them."""

import time
from collections import defaultdict
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple

from src.core.exceptions import ChoiceSetError
from src.core.logger import get_component_logger
from src.fixed.lines import FixLine, combined_headway
from src.network.network import Network, Route
from src.paths.alternatives import (
    FLEX_SERVICE,
    ChoiceSetFilters,
    GlobalPathSet,
    Mode,
    PathAlternative,
    ServiceRef,
    TransitLeg,
)


def od_category(net: Network, origin: str, destination: str) -> str:
    """C2C / C2B / B2C / B2B from stop tags; ALL when stops are untagged."""
    tags = (net.stops[origin].tag, net.stops[destination].tag)
    if None in tags:
        return "ALL"
    letter = {"corridor": "C", "branch": "B"}
    if tags[0] not in letter or tags[1] not in letter:
        return "ALL"
    return f"{letter[tags[0]]}2{letter[tags[1]]}"


def build_fix_legs(net: Network, lines: Sequence[FixLine], epsilon: float = 0.0) -> List[TransitLeg]:
    """Elementary FIX legs, with common lines merged into set-valued legs.

    Lines between the same boarding and alighting stops merge when their
    free-flow leg times differ by at most ``epsilon`` seconds.
    """
    by_pair: Dict[Tuple[str, str], List[Tuple[float, FixLine]]] = defaultdict(list)
    for line in sorted(lines, key=lambda l: l.id):
        for i, board in enumerate(line.stops[:-1]):
            for alight in line.stops[i + 1:]:
                by_pair[(board, alight)].append((line.free_flow_between(net, board, alight), line))

    legs: List[TransitLeg] = []
    for (board, alight) in sorted(by_pair):
        options = sorted(by_pair[(board, alight)], key=lambda item: (item[0], item[1].id))
        cluster: List[Tuple[float, FixLine]] = []
        for item in options + [None]:
            if item is not None and (not cluster or item[0] - cluster[0][0] <= epsilon):
                cluster.append(item)
                continue
            if cluster:
                members = [line for _, line in cluster]
                legs.append(TransitLeg(
                    board_stops=frozenset([board]),
                    services=frozenset(ServiceRef(line.id, Mode.FIX) for line in members),
                    alight_stops=frozenset([alight]),
                    free_flow_time=cluster[0][0],
                    headway=combined_headway(members),
                ))
            cluster = [item] if item is not None else []
    return legs


def build_flex_legs(routes: Mapping[Tuple[str, str], Route]) -> List[TransitLeg]:
    return [
        TransitLeg(
            board_stops=frozenset([a]),
            services=frozenset([ServiceRef(FLEX_SERVICE, Mode.FLEX)]),
            alight_stops=frozenset([b]),
            free_flow_time=routes[(a, b)].free_flow_time,
        )
        for (a, b) in sorted(routes)
    ]


def dominates(q: PathAlternative, p: PathAlternative) -> bool:
    """q dominates p: no worse on walking, transfers and free-flow time, better on one."""
    no_worse = (q.total_walk_distance <= p.total_walk_distance
                and q.n_transfers <= p.n_transfers
                and q.free_flow_time <= p.free_flow_time)
    better = (q.total_walk_distance < p.total_walk_distance
              or q.n_transfers < p.n_transfers
              or q.free_flow_time < p.free_flow_time)
    return no_worse and better


def _prune_dominated(paths: List[PathAlternative]) -> List[PathAlternative]:
    return [p for p in paths if not any(dominates(q, p) for q in paths if q is not p)]


class ChoiceSetGenerator:
    """Enumerates path alternatives over a leg catalogue."""

    def __init__(self, net: Network, lines: Sequence[FixLine],
                 flex_routes: Mapping[Tuple[str, str], Route], filters: ChoiceSetFilters):
        self.net = net
        self.filters = filters
        self.legs = build_fix_legs(net, lines, filters.merge_epsilon) + build_flex_legs(flex_routes)
        self.legs_from: Dict[str, List[TransitLeg]] = defaultdict(list)
        for leg in self.legs:
            for stop in sorted(leg.board_stops):
                self.legs_from[stop].append(leg)

    def _walks(self, stop: str) -> List[Tuple[str, float]]:
        return [(w.to_stop, w.distance) for w in self.net.walks_from(stop, self.filters.max_walk_distance)]

    def enumerate_paths(self, origin: str, destination: str) -> List[PathAlternative]:
        max_legs = self.filters.max_transfers + 1
        transfer_stops = self.filters.transfer_stops
        into_dest = {w.from_stop: w.distance for key, w in self.net.walk_links.items()
                     if key[1] == destination and w.distance <= self.filters.max_walk_distance}
        found: List[PathAlternative] = []

        def extend(at: str, walks: List[Tuple[str, str]], dists: List[float],
                   legs: List[TransitLeg], visited: Set[str]):
            if legs and at in into_dest:
                found.append(PathAlternative(
                    origin, destination,
                    tuple(frozenset([w]) for w in walks + [(at, destination)]),
                    tuple(legs),
                    tuple(dists + [into_dest[at]]),
                ))
            if len(legs) >= max_legs:
                return
            for board, distance in self._walks(at):
                if board != at and board in visited:
                    continue
                if legs and transfer_stops is not None and (at not in transfer_stops or board not in transfer_stops):
                    continue
                for leg in self.legs_from.get(board, []):
                    if legs and legs[-1].mode is Mode.FLEX and leg.mode is Mode.FLEX:
                        continue
                    alight = next(iter(leg.alight_stops))
                    if alight in visited or alight == board:
                        continue
                    if len(legs) + 1 == max_legs and alight not in into_dest:
                        continue
                    extend(alight, walks + [(at, board)], dists + [distance], legs + [leg],
                           visited | {board, alight})

        extend(origin, [], [], [], {origin})
        return found

    def generate(self, ods: Iterable[Tuple[str, str]]) -> GlobalPathSet:
        logger = get_component_logger("paths")
        start = time.time()
        result = GlobalPathSet()
        empty: List[Tuple[str, str]] = []
        for origin, destination in sorted(set(ods)):
            if origin == destination:
                continue
            category = od_category(self.net, origin, destination)
            paths = [p for p in self.enumerate_paths(origin, destination)
                     if self.filters.allows_type(category, p.path_type)]
            if self.filters.dominance_pruning:
                paths = _prune_dominated(paths)
            unique: Dict[str, PathAlternative] = {}
            for path in paths:
                unique.setdefault(path.key, path)
            if not unique:
                empty.append((origin, destination))
                continue
            result.paths[(origin, destination)] = tuple(unique[k] for k in sorted(unique))
            result.categories[(origin, destination)] = category

        if empty:
            listing = ", ".join(f"{o}->{d}" for o, d in empty)
            raise ChoiceSetError(f"{len(empty)} OD pair(s) without path alternatives: {listing}")

        logger.log_performance("generate_choice_sets", start, {
            "ods": len(result.paths),
            "paths": sum(len(v) for v in result.paths.values()),
        })
        return result


def generate_choice_sets(net: Network, lines: Sequence[FixLine], flex_routes: Mapping[Tuple[str, str], Route],
                         filters: ChoiceSetFilters, ods: Iterable[Tuple[str, str]]) -> GlobalPathSet:
    """Generate the global path set for all ODs with demand.

    Args:
        net: Network
        lines: FIX lines
        flex_routes: Pre-generated FLEX shortest routes of the service area
        filters: Choice-set filters
        ods: OD pairs with demand

    Returns:
        Path alternatives per OD

    Raises:
        ChoiceSetError: if any OD is left without alternatives
    """
    return ChoiceSetGenerator(net, lines, flex_routes, filters).generate(ods)


def describe_paths(path_set: GlobalPathSet) -> List[str]:
    """Diagnostic listing: one line per path with o, components, d, transfers and modes."""
    header = [f"# {len(path_set.ods())} OD pairs"]
    rows: List[str] = []
    for od in path_set.ods():
        category = path_set.category(*od)
        for path in path_set.paths[od]:
            rows.append(f"{category}\t{path.describe()}")
    return header + rows
