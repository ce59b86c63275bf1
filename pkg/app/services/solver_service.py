"""
Solvers for choosing a viable species set of at most k members with maximum
objective value.

    faller     add the best unit-cost species until the budget is used
    greedy_p   ratio greedy over candidate sets of up to p species, guarded by
               the best single p-set
    enum_p     the ratio greedy restarted from every small viable seed
    exact      branch and bound over viable sets

All of them break ties deterministically, so identical inputs give identical
reports.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from app.core.config import SolverLimits
from app.core.exceptions import exception_constants
from app.core.exceptions.local_exceptions import (
    CapacityExceededError,
    InvalidParameterError,
    UnsupportedInstanceError,
)
from app.infrastructure.run_tracer.run_trace import RunTrace
from app.schemas.instance import FoodWeb, Instance
from app.schemas.solve_report import (
    Algorithm,
    Decomposition,
    DecompositionPair,
    SolveReport,
    SolverConfig,
)
from app.schemas.species_set import SpeciesSet, iter_bits
from app.services.pd_oracle import CountingOracle, SubmodularOracle
from app.services.viability_service import (
    survives,
    is_viable,
    iter_viable_sets,
    truncated_depth,
    viable_extension,
)

logger = logging.getLogger(__name__)


class _Run:
    """Per-run bookkeeping shared by the solvers."""

    def __init__(
        self,
        algorithm: Algorithm,
        instance: Instance,
        oracle: SubmodularOracle,
        budget: Optional[int],
        limits: Optional[SolverLimits],
        p: Optional[int] = None,
    ):
        if p is not None and p < 1:
            raise InvalidParameterError(exception_constants.INVALID_PARAMETER.format(name="p", requirement="at least 1"))
        k = instance.budget if budget is None else budget
        if k < 0:
            raise InvalidParameterError(exception_constants.INVALID_PARAMETER.format(name="k", requirement="non-negative"))

        self.algorithm = algorithm
        self.instance = instance
        self.web: FoodWeb = instance.web
        self.oracle = CountingOracle(oracle)
        self.k = k
        self.p = p
        self.limits = limits or SolverLimits()
        self.trace = RunTrace(algorithm=algorithm.value).mark_started()

    def value(self, mask: int) -> int:
        return self.oracle.value(SpeciesSet(mask))

    def extend(self, added: int, base: int) -> int:
        self.trace.count_steiner()
        return viable_extension(SpeciesSet(added), self.web, SpeciesSet(base), limits=self.limits).mask

    def tick(self) -> None:
        self.trace.count_iteration()
        self.trace.check_deadline(self.limits.max_seconds)

    def report(self, chosen: int, **extra) -> SolveReport:
        self.trace.oracle_calls = self.oracle.calls
        self.trace.mark_finished()
        species = SpeciesSet(chosen)
        report = SolveReport(
            algorithm=self.algorithm,
            p=self.p,
            k=self.k,
            chosen=species,
            value=self.oracle.value(species),
            viable=is_viable(species, self.web),
            trace=self.trace,
            **extra,
        )
        logger.info(
            f"{self.algorithm.value}: value={report.value} |S|={len(species)} k={self.k} "
            f"iterations={self.trace.iterations} oracle_calls={self.trace.oracle_calls} "
            f"steiner_calls={self.trace.steiner_calls} elapsed_ms={self.trace.elapsed_ms}"
        )
        return report


def _standard_only(instance: Instance, operation: str) -> None:
    if instance.web.has_and_nodes:
        raise UnsupportedInstanceError(operation)


# ---- Faller greedy -----------------------------------------------------------


def solve_faller(
    instance: Instance,
    oracle: SubmodularOracle,
    budget: Optional[int] = None,
    limits: Optional[SolverLimits] = None,
) -> SolveReport:
    _standard_only(instance, Algorithm.FALLER.value)
    run = _Run(Algorithm.FALLER, instance, oracle, budget, limits)
    web = run.web
    chosen = 0

    while chosen.bit_count() < run.k:
        run.tick()
        current = run.value(chosen)
        best_index, best_gain = None, -1
        for index in range(web.size):
            if chosen >> index & 1 or not survives(web, index, chosen):
                continue
            gain = run.value(chosen | 1 << index) - current
            if gain > best_gain:
                best_index, best_gain = index, gain
        if best_index is None:
            logger.debug("faller: no unit-cost species left")
            break
        chosen |= 1 << best_index
        logger.debug(f"faller: add {instance.species[best_index]} gain={best_gain}")

    return run.report(chosen)


# ---- ratio greedy ------------------------------------------------------------


def _candidate_count(n: int, p: int) -> int:
    return sum(math.comb(n, size) for size in range(1, min(p, n) + 1))


def _candidates(n: int, p: int) -> Iterable[int]:
    """Every set of 1..p species, in lexicographic order of the sorted index sequence."""
    combos = [combo for size in range(1, min(p, n) + 1) for combo in combinations(range(n), size)]
    for combo in sorted(combos):
        yield sum(1 << i for i in combo)


Evaluation = Optional[Tuple[int, int, int]]  # (extension, species added, gain)


class _RatioGreedy:
    """The ratio-greedy loop, restartable from any viable start set."""

    def __init__(self, run: _Run, p: int, threads: int = 1):
        self.run = run
        self.p = p
        self.threads = threads
        n = run.web.size
        total = _candidate_count(n, p)
        if total > run.limits.max_candidates:
            raise CapacityExceededError("max_candidates", total, run.limits.max_candidates)
        self.candidates: List[int] = list(_candidates(n, p))

    def _evaluate(self, selected: int, current: int) -> Callable[[int], Evaluation]:
        run = self.run

        def evaluate(candidate: int) -> Evaluation:
            gain = run.value(candidate | selected) - current
            if gain <= 0:
                return None
            extension = viable_extension(
                SpeciesSet(candidate), run.web, SpeciesSet(selected), limits=run.limits
            ).mask
            return extension, extension.bit_count() - selected.bit_count(), gain

        return evaluate

    def step(self, selected: int) -> Optional[int]:
        """Next selected set, or None when no candidate fits and gains."""
        run = self.run
        residual = run.k - selected.bit_count()
        current = run.value(selected)
        evaluate = self._evaluate(selected, current)
        # sets inside `selected` or with more new species than the budget left are never feasible
        feasible = [c for c in self.candidates if c & ~selected and (c & ~selected).bit_count() <= residual]

        if self.threads > 1 and len(feasible) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(evaluate, feasible, chunksize=64))
        else:
            results = [evaluate(candidate) for candidate in feasible]
        run.trace.count_steiner(sum(result is not None for result in results))

        best: Evaluation = None
        for result in results:
            if result is None or result[1] > residual:
                continue
            if best is None:
                best = result
                continue
            _, spent, gain = result
            _, best_spent, best_gain = best
            lhs, rhs = gain * best_spent, best_gain * spent
            if lhs > rhs or (lhs == rhs and spent < best_spent):
                best = result
        if best is None:
            return None
        return best[0]

    def run_from(self, selected: int, memo: Optional[Dict[int, int]] = None) -> int:
        visited: List[int] = []
        while selected.bit_count() < self.run.k:
            if memo is not None and selected in memo:
                selected = memo[selected]
                break
            visited.append(selected)
            self.run.tick()
            following = self.step(selected)
            if following is None:
                break
            logger.debug(f"ratio greedy: {selected.bit_count()} -> {following.bit_count()} species")
            selected = following
        if memo is not None:
            for state in visited:
                memo[state] = selected
        return selected


def solve_greedy_p(
    instance: Instance,
    oracle: SubmodularOracle,
    p: int,
    budget: Optional[int] = None,
    limits: Optional[SolverLimits] = None,
    threads: int = 1,
) -> SolveReport:
    _standard_only(instance, Algorithm.GREEDY_P.value)
    run = _Run(Algorithm.GREEDY_P, instance, oracle, budget, limits, p=p)
    greedy = _RatioGreedy(run, p, threads)

    # best single candidate whose extension fits the budget
    guard, guard_value = 0, -1
    for candidate in greedy.candidates:
        if candidate.bit_count() > run.k:
            continue
        extension = run.extend(candidate, 0)
        if extension.bit_count() > run.k:
            continue
        candidate_value = run.value(candidate)
        if candidate_value > guard_value:
            guard, guard_value = extension, candidate_value
    logger.debug(f"greedy_p: guard set of {guard.bit_count()} species, candidate value {max(guard_value, 0)}")

    final = greedy.run_from(0)
    greedy_value = run.value(final)
    chosen = final if greedy_value > run.value(guard) else guard
    return run.report(chosen, greedy_value=greedy_value)


def solve_enum_p(
    instance: Instance,
    oracle: SubmodularOracle,
    p: int,
    budget: Optional[int] = None,
    limits: Optional[SolverLimits] = None,
    threads: int = 1,
) -> SolveReport:
    _standard_only(instance, Algorithm.ENUM_P.value)
    run = _Run(Algorithm.ENUM_P, instance, oracle, budget, limits, p=p)
    greedy = _RatioGreedy(run, p, threads)

    d = truncated_depth(run.web, max(run.k, 1)).d
    bound = min(3 * p + 3 * d - 3, run.k)
    cap = run.limits.max_seeds
    try:
        seeds = [seed.mask for seed in iter_viable_sets(run.web, bound, cap=cap)]
    except CapacityExceededError as e:
        raise CapacityExceededError(
            "max_seeds",
            f"more than {cap} viable seeds of size <= {bound}",
            cap,
        ) from e
    logger.debug(f"enum_p: {len(seeds)} viable seeds of size <= {bound}")

    memo: Dict[int, int] = {}
    best, best_value = 0, -1
    for seed in seeds:
        final = greedy.run_from(seed, memo)
        final_value = run.value(final)
        if final_value > best_value:
            best, best_value = final, final_value
    return run.report(best, seeds=len(seeds))


# ---- exact -------------------------------------------------------------------


def solve_exact(
    instance: Instance,
    oracle: SubmodularOracle,
    budget: Optional[int] = None,
    limits: Optional[SolverLimits] = None,
) -> SolveReport:
    """
    Depth-first search over viable sets, prey decided before predators so every
    partial selection is itself viable. A branch is cut when neither the whole
    still-admissible remainder nor the best r singletons could beat the
    incumbent.
    """
    run = _Run(Algorithm.EXACT, instance, oracle, budget, limits)
    web = run.web
    cap = run.limits.exact_max_species
    if web.size > cap:
        raise CapacityExceededError("exact_max_species", web.size, cap)

    order = list(reversed(web.topological_order))
    singles = [run.value(1 << i) for i in range(web.size)]

    best, best_value = 0, 0

    def admissible(position: int, chosen: int, room: int) -> int:
        # undecided species some completion within the budget could still keep;
        # need[i] is a lower bound on the species added to keep i
        open_ = 0
        need: Dict[int, int] = {}
        for index in order[position:]:
            prey = web.successors(index)
            if web.and_mask >> index & 1:
                missing = prey & ~chosen
                if missing & ~open_:
                    continue
                cheapest = 1 + max([missing.bit_count()] + [need[q] for q in iter_bits(missing)])
            elif prey == 0 or prey & chosen:
                cheapest = 1
            else:
                reachable = prey & open_
                if not reachable:
                    continue
                cheapest = 1 + min(need[q] for q in iter_bits(reachable))
            if cheapest <= room:
                open_ |= 1 << index
                need[index] = cheapest
        return open_

    def search(position: int, chosen: int, chosen_value: int) -> None:
        nonlocal best, best_value
        run.tick()
        if chosen_value > best_value:
            best, best_value = chosen, chosen_value
        room = run.k - chosen.bit_count()
        if position == len(order) or room == 0:
            return

        open_ = admissible(position, chosen, room)
        if not open_:
            return
        top = sorted((singles[i] for i in iter_bits(open_)), reverse=True)[:room]
        if chosen_value + sum(top) <= best_value:
            return
        if run.value(chosen | open_) <= best_value:
            return

        index = order[position]
        if open_ >> index & 1:
            grown = chosen | 1 << index
            search(position + 1, grown, run.value(grown))
        search(position + 1, chosen, chosen_value)

    search(0, 0, 0)
    return run.report(best)


# ---- decomposition -----------------------------------------------------------


def decompose(species: SpeciesSet, web: FoodWeb, p: int, k: int) -> Decomposition:
    """
    Split a viable set into blocks of p species, each made viable by the
    species on the depth-first stack when the block was closed.

    The search runs on the prey-to-predator graph restricted to `species`,
    rooted at a virtual node above every sink; a species joins the open block
    when it is popped.
    """
    if web.has_and_nodes:
        raise UnsupportedInstanceError("decompose")
    if p < 1:
        raise InvalidParameterError(exception_constants.INVALID_PARAMETER.format(name="p", requirement="at least 1"))
    if not is_viable(species, web):
        raise InvalidParameterError(exception_constants.ORIGIN_NOT_VIABLE)
    if len(species) > k:
        raise InvalidParameterError(exception_constants.ORIGIN_OVER_BUDGET.format(size=len(species), budget=k))

    mask = species.mask
    root = -1

    def predators(node: int) -> Iterable[int]:
        if node == root:
            return iter_bits(mask & web.sink_mask)
        return iter_bits(web.predecessors(node) & mask)

    pairs: List[DecompositionPair] = []
    block = 0
    visited = {root}
    stack: List[Tuple[int, Iterable[int]]] = [(root, iter(predators(root)))]
    while stack:
        node, pending = stack[-1]
        following = next((child for child in pending if child not in visited), None)
        if following is not None:
            visited.add(following)
            stack.append((following, iter(predators(following))))
            continue
        stack.pop()
        if node == root:
            break
        block |= 1 << node
        if block.bit_count() == p:
            helpers = sum(1 << entry for entry, _ in stack if entry != root)
            pairs.append(DecompositionPair(block=SpeciesSet(block), helpers=SpeciesSet(helpers)))
            block = 0
    if block:
        pairs.append(DecompositionPair(block=SpeciesSet(block), helpers=SpeciesSet()))

    return Decomposition(pairs=tuple(pairs))


# ---- service -----------------------------------------------------------------


class SolverService:
    """Dispatches a solve to the configured algorithm."""

    def __init__(self, limits: SolverLimits, threads: int = 1):
        self.limits = limits
        self.threads = threads

    def solve(
        self,
        instance: Instance,
        oracle: SubmodularOracle,
        config: SolverConfig,
        budget: Optional[int] = None,
    ) -> SolveReport:
        limits = config.limits or self.limits
        threads = config.threads or self.threads
        logger.info(f"Solving n={instance.n} k={instance.budget} with {config.algorithm.value} p={config.p}")

        if config.algorithm is Algorithm.FALLER:
            return solve_faller(instance, oracle, budget=budget, limits=limits)
        if config.algorithm is Algorithm.GREEDY_P:
            return solve_greedy_p(instance, oracle, config.p, budget=budget, limits=limits, threads=threads)
        if config.algorithm is Algorithm.ENUM_P:
            return solve_enum_p(instance, oracle, config.p, budget=budget, limits=limits, threads=threads)
        return solve_exact(instance, oracle, budget=budget, limits=limits)

    def decompose(self, species: SpeciesSet, web: FoodWeb, p: int, k: int) -> Decomposition:
        return decompose(species, web, p, k)
