"""
Test utilities: a seeded random instance factory and brute-force reference
answers the solvers are checked against.
"""
import random
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from app.schemas.instance import FoodWeb, Instance
from app.schemas.species_set import SpeciesSet
from app.services.pd_oracle import SubmodularOracle


def species_names(n: int) -> List[str]:
    """Zero-padded names, so name order and index order agree."""
    return [f"s{i:02d}" for i in range(n)]


class InstanceFactory:
    """Random trees, webs and instances drawn from one seeded generator."""

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def tree_edges(self, names: Sequence[str], max_weight: int = 20) -> List[Dict[str, object]]:
        """Random rooted tree over `names`: repeatedly hang 2-3 free nodes under a new inner node."""
        rng = self.rng
        free = list(names)
        edges: List[Dict[str, object]] = []
        inner = 0
        while len(free) > 3 or (len(free) > 1 and rng.random() < 0.5):
            size = min(len(free), rng.choice((2, 2, 3)))
            picked = rng.sample(free, size)
            inner += 1
            parent = f"i{inner}"
            for child in picked:
                free.remove(child)
                edges.append({"parent": parent, "child": child, "weight": rng.randint(0, max_weight)})
            free.append(parent)
        if len(free) == 1 and free[0] not in names:
            # lift the last inner node's children straight onto the root
            top = free[0]
            for edge in edges:
                if edge["parent"] == top:
                    edge["parent"] = "r"
        else:
            for child in free:
                edges.append({"parent": "r", "child": child, "weight": rng.randint(0, max_weight)})
        return edges

    def web_arcs(self, names: Sequence[str], density: float = 0.3) -> List[Tuple[str, str]]:
        """Random DAG: arcs only run forward along a random permutation."""
        order = list(names)
        self.rng.shuffle(order)
        return [
            (order[i], order[j])
            for i in range(len(order))
            for j in range(i + 1, len(order))
            if self.rng.random() < density
        ]

    def instance(
        self,
        n: int,
        k: int,
        density: float = 0.3,
        max_weight: int = 20,
        and_nodes: Sequence[str] = (),
    ) -> Instance:
        names = species_names(n)
        return Instance.build(
            tree={"root": "r", "edges": self.tree_edges(names, max_weight)},
            web={"species": names, "arcs": self.web_arcs(names, density), "and_nodes": tuple(and_nodes)},
            budget=k,
            generalized=bool(and_nodes),
        )

    def subset(self, n: int, max_size: Optional[int] = None) -> SpeciesSet:
        size = self.rng.randint(0, n if max_size is None else min(n, max_size))
        return SpeciesSet.of(self.rng.sample(range(n), size))


# ---- brute force ---------------------------------------------------------------


def all_masks(n: int, max_size: Optional[int] = None) -> Iterator[int]:
    limit = n if max_size is None else min(n, max_size)
    for size in range(limit + 1):
        for combo in combinations(range(n), size):
            yield sum(1 << i for i in combo)


def reaches_sink(web: FoodWeb, mask: int) -> bool:
    """OR viability by reachability: every member has a path to a sink inside the set."""
    graph = web.graph()
    members = [i for i in range(web.size) if mask >> i & 1]
    inside = graph.subgraph(members)
    sinks = {i for i in members if graph.out_degree(i) == 0}
    for member in members:
        if member in sinks:
            continue
        if not sinks & nx.descendants(inside, member):
            return False
    return True


def brute_viable(web: FoodWeb, mask: int) -> bool:
    """Viability straight from the definition, AND nodes included."""
    for i in range(web.size):
        if not mask >> i & 1:
            continue
        prey = web.successors(i)
        if web.and_mask >> i & 1:
            if prey & ~mask:
                return False
        elif prey and not prey & mask:
            return False
    return True


def brute_extension_size(web: FoodWeb, base: int) -> Optional[int]:
    """Smallest viable superset size of `base`, None when none exists."""
    best = None
    for mask in all_masks(web.size):
        if mask & base == base and brute_viable(web, mask):
            size = mask.bit_count()
            if best is None or size < best:
                best = size
    return best


def brute_optimum(instance: Instance, oracle: SubmodularOracle, k: Optional[int] = None) -> int:
    budget = instance.budget if k is None else k
    return max(
        oracle.value(SpeciesSet(mask))
        for mask in all_masks(instance.n, budget)
        if brute_viable(instance.web, mask)
    )


def brute_pd(instance: Instance, species: SpeciesSet) -> int:
    """PD by walking every chosen leaf up to the root, counting each edge once."""
    counted = set()
    for index in species:
        node = instance.species[index]
        while (above := instance.tree.parent(node)) is not None:
            counted.add((above[0], node, above[1]))
            node = above[0]
    return sum(weight for _, _, weight in counted)
