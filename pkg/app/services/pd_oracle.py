"""
Set-function oracles the solvers maximise.

Solvers only ever see the `SubmodularOracle` protocol, so anything with an
integer `value` over species bitmasks can be plugged in. `PdOracle` is the
phylogenetic-diversity objective; `AdditiveOracle` and `CachedOracle` cover the
additive special case and memoisation.
"""
import logging
import threading
from collections import OrderedDict
from typing import List, Protocol, Sequence, Tuple, runtime_checkable

from app.core.exceptions.local_exceptions import UnknownSpeciesError
from app.schemas.instance import PhyloTree
from app.schemas.species_set import SpeciesSet, iter_bits

logger = logging.getLogger(__name__)


@runtime_checkable
class SubmodularOracle(Protocol):
    """Normalised, monotone, submodular set function over species 0..n-1."""

    def value(self, species: SpeciesSet) -> int: ...

    def marginal(self, added: SpeciesSet, base: SpeciesSet) -> int: ...

    def ground_size(self) -> int: ...


class _OracleBase:
    _n: int

    def ground_size(self) -> int:
        return self._n

    def marginal(self, added: SpeciesSet, base: SpeciesSet) -> int:
        return self.value(added | base) - self.value(base)

    def _check(self, species: SpeciesSet) -> int:
        mask = species.mask
        if mask >> self._n:
            raise UnknownSpeciesError(str(mask.bit_length() - 1))
        return mask


class PdOracle(_OracleBase):
    """
    Phylogenetic diversity: total weight of the tree edges on the root paths of
    the chosen leaves.

    Each leaf's root path is precomputed as a bitmask over edge positions, so
    one query is an OR over the chosen leaves plus a weighted popcount.
    """

    def __init__(self, tree: PhyloTree, species: Sequence[str]):
        self._tree = tree
        self._n = len(species)
        self._edges: Tuple[Tuple[str, str, int], ...] = tuple(
            (edge.parent, edge.child, edge.weight) for edge in tree.edges
        )
        position = {child: i for i, (_, child, _) in enumerate(self._edges)}
        self._weights: Tuple[int, ...] = tuple(weight for _, _, weight in self._edges)

        paths: List[int] = []
        for name in species:
            mask = 0
            node = name
            while (above := tree.parent(node)) is not None:
                mask |= 1 << position[node]
                node = above[0]
            paths.append(mask)
        self._paths = tuple(paths)
        logger.debug(f"PD oracle ready: {self._n} leaves, {len(self._edges)} edges")

    def edge_mask(self, species: SpeciesSet) -> int:
        covered = 0
        for index in iter_bits(self._check(species)):
            covered |= self._paths[index]
        return covered

    def edge_cover(self, species: SpeciesSet) -> List[Tuple[str, str, int]]:
        """The (parent, child, weight) tree edges spanned by `species` plus the root."""
        return [self._edges[i] for i in iter_bits(self.edge_mask(species))]

    def value(self, species: SpeciesSet) -> int:
        weights = self._weights
        return sum(weights[i] for i in iter_bits(self.edge_mask(species)))


class AdditiveOracle(_OracleBase):
    """value(S) = sum of per-species weights."""

    def __init__(self, weights: Sequence[int]):
        if any(w < 0 for w in weights):
            raise ValueError("additive weights must be non-negative")
        self._weights = tuple(weights)
        self._n = len(self._weights)

    def value(self, species: SpeciesSet) -> int:
        return sum(self._weights[i] for i in iter_bits(self._check(species)))


class CachedOracle(_OracleBase):
    """Bounded LRU memo in front of another oracle; safe to share between threads."""

    def __init__(self, inner: SubmodularOracle, maxsize: int = 4096):
        if maxsize < 1:
            raise ValueError("cache size must be at least 1")
        self._inner = inner
        self._n = inner.ground_size()
        self._maxsize = maxsize
        self._entries: "OrderedDict[int, int]" = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def value(self, species: SpeciesSet) -> int:
        key = species.mask
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                self.hits += 1
                return self._entries[key]
        result = self._inner.value(species)
        with self._lock:
            self.misses += 1
            self._entries[key] = result
            self._entries.move_to_end(key)
            while len(self._entries) > self._maxsize:
                self._entries.popitem(last=False)
        return result

    @property
    def size(self) -> int:
        return len(self._entries)


class CountingOracle(_OracleBase):
    """Counts value queries; solvers wrap their oracle in one per run."""

    def __init__(self, inner: SubmodularOracle):
        self._inner = inner
        self._n = inner.ground_size()
        self._lock = threading.Lock()
        self.calls = 0

    def value(self, species: SpeciesSet) -> int:
        with self._lock:
            self.calls += 1
        return self._inner.value(species)


class OracleBuilder:
    """Builds the PD oracle of an instance, memoised when a cache size is configured."""

    def __init__(self, cache_size: int = 0):
        self.cache_size = cache_size

    def build(self, instance) -> SubmodularOracle:
        oracle: SubmodularOracle = PdOracle(instance.tree, instance.species)
        if self.cache_size:
            oracle = CachedOracle(oracle, maxsize=self.cache_size)
        return oracle
