"""
Viability of species sets over a food web, and the minimum viable extension.

A set is viable when every member survives inside it: an OR species needs to
be a sink or to keep at least one prey, an AND species needs all of its prey.
"""
import logging
from typing import Iterator, List, Optional

import networkx as nx

from app.core.config import SolverLimits
from app.core.exceptions.local_exceptions import (
    CapacityExceededError,
    InfeasibleExtensionError,
    UnknownSpeciesError,
    UnsupportedInstanceError,
)
from app.infrastructure.run_tracer.run_trace import RunTrace
from app.schemas.instance import FoodWeb
from app.schemas.solve_report import DepthInfo
from app.schemas.species_set import SpeciesSet, iter_bits, lex_smaller

logger = logging.getLogger(__name__)


def survives(web: FoodWeb, index: int, kept: int) -> bool:
    """Whether species `index` stays viable when the species in `kept` are kept."""
    prey = web.successors(index)
    if web.and_mask >> index & 1:
        return prey & ~kept == 0
    return prey == 0 or prey & kept != 0


def _check_mask(web: FoodWeb, species: SpeciesSet) -> int:
    if species.mask >> web.size:
        raise UnknownSpeciesError(str(species.mask.bit_length() - 1))
    return species.mask


def is_viable(species: SpeciesSet, web: FoodWeb) -> bool:
    kept = _check_mask(web, species)
    return all(survives(web, i, kept) for i in iter_bits(kept))


def viable_core(species: SpeciesSet, web: FoodWeb) -> SpeciesSet:
    """Largest viable subset of `species`: the members that can still feed down to a sink."""
    kept = _check_mask(web, species)
    core = 0
    for index in reversed(web.topological_order):
        if kept >> index & 1 and survives(web, index, core):
            core |= 1 << index
    return SpeciesSet(core)


def truncated_depth(web: FoodWeb, k: int) -> DepthInfo:
    """Node count of the longest predator-to-sink chain, capped at the budget."""
    if k < 1:
        raise ValueError("truncated depth needs a budget of at least 1")
    longest = nx.dag_longest_path_length(web.graph()) + 1
    return DepthInfo(d=min(longest, k), longest_path_len=longest)


def _better(candidate: int, incumbent: Optional[int]) -> bool:
    return incumbent is None or lex_smaller(candidate, incumbent)


def viable_extension(
    species: SpeciesSet,
    web: FoodWeb,
    selected: SpeciesSet = SpeciesSet(),
    limits: Optional[SolverLimits] = None,
    trace: Optional[RunTrace] = None,
) -> SpeciesSet:
    """
    Minimum-cardinality viable superset of `selected | species`.

    Members already feeding down to a sink inside the base are merged into one
    terminal; the remaining members (starters) are connected to it by a
    minimum node-weighted Steiner arborescence, found by dynamic programming
    over starter subsets. Among equally small answers each DP cell keeps the
    lexicographically smallest set of added species.
    """
    if web.has_and_nodes:
        raise UnsupportedInstanceError("viable_extension")
    limits = limits or SolverLimits()

    base = _check_mask(web, species) | _check_mask(web, selected)
    core = viable_core(SpeciesSet(base), web).mask
    starters = list(iter_bits(base & ~core))
    if trace is not None:
        trace.count_steiner()
    if not starters:
        return SpeciesSet(base)
    if len(starters) > limits.steiner_max_starters:
        raise CapacityExceededError("steiner_max_starters", len(starters), limits.steiner_max_starters)

    n = web.size
    terminal = n
    full = (1 << len(starters)) - 1
    order = web.topological_order
    reaches_terminal = core | web.sink_mask

    # dp[T][v]: best mask of added species connecting starters T to node v
    dp: List[List[Optional[int]]] = [[None] * (n + 1) for _ in range(full + 1)]

    def merge(subset: int, node: int) -> None:
        low = subset & -subset
        best = dp[subset][node]
        part = (subset - 1) & subset
        while part:
            if part & low:
                left, right = dp[part][node], dp[subset ^ part][node]
                if left is not None and right is not None:
                    joined = left | right
                    if _better(joined, best):
                        best = joined
            part = (part - 1) & subset
        dp[subset][node] = best

    for subset in range(1, full + 1):
        if subset & (subset - 1) == 0:
            dp[subset][starters[subset.bit_length() - 1]] = 0
        for node in order:
            merge(subset, node)
            here = dp[subset][node]
            if here is None:
                continue
            for prey in iter_bits(web.successors(node)):
                grown = here if base >> prey & 1 else here | 1 << prey
                if _better(grown, dp[subset][prey]):
                    dp[subset][prey] = grown
            if reaches_terminal >> node & 1 and _better(here, dp[subset][terminal]):
                dp[subset][terminal] = here
        merge(subset, terminal)

    added = dp[full][terminal]
    if added is None:
        raise InfeasibleExtensionError(internal_context={"starters": starters})

    logger.debug(f"Extended {len(starters)} starter(s) with {added.bit_count()} species")
    return SpeciesSet(base | added)


def cost(
    added: SpeciesSet,
    base: SpeciesSet,
    web: FoodWeb,
    limits: Optional[SolverLimits] = None,
    trace: Optional[RunTrace] = None,
) -> int:
    """Species the viable extension of `base | added` holds beyond |base|."""
    return len(viable_extension(added, web, base, limits=limits, trace=trace)) - len(base)


def iter_viable_sets(web: FoodWeb, max_size: int, cap: Optional[int] = None) -> Iterator[SpeciesSet]:
    """
    Every viable set with at most `max_size` members, smallest first and
    lexicographically within a size. Raises once more than `cap` sets exist.
    """
    found = list(_viable_masks(web, max_size, cap))
    found.sort(key=lambda mask: (mask.bit_count(), tuple(iter_bits(mask))))
    for mask in found:
        yield SpeciesSet(mask)


def _viable_masks(web: FoodWeb, max_size: int, cap: Optional[int]) -> Iterator[int]:
    # prey are decided before their predators, so each inclusion test is final
    order = list(reversed(web.topological_order))
    produced = 0

    def walk(position: int, chosen: int, size: int) -> Iterator[int]:
        nonlocal produced
        if position == len(order) or size == max_size:
            produced += 1
            if cap is not None and produced > cap:
                raise CapacityExceededError("max_seeds", f">{cap}", cap)
            yield chosen
            return
        index = order[position]
        if survives(web, index, chosen):
            yield from walk(position + 1, chosen | 1 << index, size + 1)
        yield from walk(position + 1, chosen, size)

    yield from walk(0, 0, 0)


class ViabilityService:
    """Viability operations bound to one set of solver limits."""

    def __init__(self, limits: SolverLimits):
        self.limits = limits

    def is_viable(self, species: SpeciesSet, web: FoodWeb) -> bool:
        return is_viable(species, web)

    def viable_core(self, species: SpeciesSet, web: FoodWeb) -> SpeciesSet:
        return viable_core(species, web)

    def truncated_depth(self, web: FoodWeb, k: int) -> DepthInfo:
        return truncated_depth(web, k)

    def viable_extension(
        self, species: SpeciesSet, web: FoodWeb, selected: SpeciesSet = SpeciesSet(),
        trace: Optional[RunTrace] = None,
    ) -> SpeciesSet:
        return viable_extension(species, web, selected, limits=self.limits, trace=trace)

    def cost(self, added: SpeciesSet, base: SpeciesSet, web: FoodWeb, trace: Optional[RunTrace] = None) -> int:
        return cost(added, base, web, limits=self.limits, trace=trace)

    def iter_viable_sets(self, web: FoodWeb, max_size: int) -> Iterator[SpeciesSet]:
        return iter_viable_sets(web, max_size, cap=self.limits.max_seeds)
