from __future__ import annotations

from enum import Enum
from typing import Annotated, Dict, Iterable, List, Optional, Tuple

import networkx as nx
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    StringConstraints,
    ValidationError,
    field_validator,
    model_validator,
)

from app.core.exceptions import exception_constants
from app.core.exceptions.local_exceptions import InvalidInstanceError, UnknownSpeciesError
from app.schemas.species_set import SpeciesSet, iter_bits

MAX_WEIGHT = 2**63 - 1

SpeciesName = Annotated[str, StringConstraints(pattern=r"^[A-Za-z0-9_]+$")]


class ViabilityMode(str, Enum):
    OR = "OR"
    AND = "AND"


class SpeciesId(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: SpeciesName
    index: int = Field(..., ge=0)


class TreeEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    parent: SpeciesName
    child: SpeciesName
    weight: int = Field(..., ge=0, le=MAX_WEIGHT, strict=True)


class PhyloTree(BaseModel):
    """
    Rooted, edge-weighted tree whose leaves are the species.

    Edges are held sorted by (parent, child), so children are always visited in
    name order and two equal trees compare equal whatever order they were built in.
    """

    model_config = ConfigDict(frozen=True)

    root: SpeciesName = "r"
    edges: Tuple[TreeEdge, ...]

    _children: Dict[str, Tuple[str, ...]] = PrivateAttr(default_factory=dict)
    _parent: Dict[str, Tuple[str, int]] = PrivateAttr(default_factory=dict)
    _leaves: Tuple[str, ...] = PrivateAttr(default=())

    @field_validator("edges", mode="after")
    @classmethod
    def _canonical_edges(cls, v: Tuple[TreeEdge, ...]) -> Tuple[TreeEdge, ...]:
        return tuple(sorted(v, key=lambda edge: (edge.parent, edge.child)))

    @model_validator(mode="after")
    def _check_shape(self) -> "PhyloTree":
        children: Dict[str, List[str]] = {self.root: []}
        parent: Dict[str, Tuple[str, int]] = {}

        for edge in self.edges:
            if edge.child == self.root or edge.child in parent:
                raise ValueError(exception_constants.TREE_DUPLICATE_NAME.format(name=edge.child))
            parent[edge.child] = (edge.parent, edge.weight)
            children.setdefault(edge.parent, []).append(edge.child)
            children.setdefault(edge.child, [])

        # every node must hang below the root
        seen = {self.root}
        stack = [self.root]
        while stack:
            for child in children[stack.pop()]:
                seen.add(child)
                stack.append(child)
        if len(seen) != len(children):
            raise ValueError(exception_constants.TREE_NOT_A_TREE)

        leaves: List[str] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            kids = children[node]
            if not kids:
                leaves.append(node)
                continue
            if len(kids) < 2:
                raise ValueError(
                    exception_constants.TREE_ARITY.format(node=node, children=len(kids))
                )
            stack.extend(reversed(kids))

        self._children = {node: tuple(kids) for node, kids in children.items()}
        self._parent = parent
        self._leaves = tuple(leaves)
        return self

    @property
    def leaves(self) -> Tuple[str, ...]:
        return self._leaves

    @property
    def nodes(self) -> Tuple[str, ...]:
        return tuple(self._children)

    def children(self, node: str) -> Tuple[str, ...]:
        return self._children[node]

    def parent(self, node: str) -> Optional[Tuple[str, int]]:
        """(parent, weight of the edge above `node`), None for the root."""
        return self._parent.get(node)

    @property
    def total_weight(self) -> int:
        return sum(edge.weight for edge in self.edges)


class FoodWeb(BaseModel):
    """
    Acyclic dependency graph over the species. An arc (predator, prey) means the
    predator survives only through its prey.

    Species are held in canonical (sorted) order; a species' position is its
    index everywhere else in the toolkit.
    """

    model_config = ConfigDict(frozen=True)

    species: Tuple[SpeciesName, ...]
    arcs: Tuple[Tuple[SpeciesName, SpeciesName], ...] = ()
    and_nodes: Tuple[SpeciesName, ...] = ()

    _index: Dict[str, int] = PrivateAttr(default_factory=dict)
    _successors: Tuple[int, ...] = PrivateAttr(default=())
    _predecessors: Tuple[int, ...] = PrivateAttr(default=())
    _topological: Tuple[int, ...] = PrivateAttr(default=())
    _sink_mask: int = PrivateAttr(default=0)
    _and_mask: int = PrivateAttr(default=0)

    @field_validator("species", mode="after")
    @classmethod
    def _canonical_species(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        if len(set(v)) != len(v):
            duplicate = next(name for name in v if v.count(name) > 1)
            raise ValueError(exception_constants.TREE_DUPLICATE_NAME.format(name=duplicate))
        return tuple(sorted(v))

    @field_validator("arcs", mode="after")
    @classmethod
    def _canonical_arcs(cls, v):
        return tuple(sorted(set(v)))

    @field_validator("and_nodes", mode="after")
    @classmethod
    def _canonical_and(cls, v):
        return tuple(sorted(set(v)))

    @model_validator(mode="after")
    def _check_graph(self) -> "FoodWeb":
        index = {name: i for i, name in enumerate(self.species)}

        for name in self.and_nodes:
            if name not in index:
                raise ValueError(exception_constants.WEB_UNKNOWN_SPECIES.format(name=name))

        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.species)))
        for predator, prey in self.arcs:
            for name in (predator, prey):
                if name not in index:
                    raise ValueError(exception_constants.WEB_UNKNOWN_SPECIES.format(name=name))
            if predator == prey:
                raise ValueError(exception_constants.WEB_SELF_LOOP.format(name=predator))
            graph.add_edge(index[predator], index[prey])

        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            rendered = " -> ".join(self.species[u] for u, _ in cycle)
            raise ValueError(exception_constants.WEB_CYCLE.format(cycle=rendered))

        successors = [0] * len(self.species)
        predecessors = [0] * len(self.species)
        for u, v in graph.edges:
            successors[u] |= 1 << v
            predecessors[v] |= 1 << u

        self._index = index
        self._successors = tuple(successors)
        self._predecessors = tuple(predecessors)
        self._topological = tuple(nx.lexicographical_topological_sort(graph))
        self._sink_mask = sum(1 << i for i, succ in enumerate(successors) if not succ)
        self._and_mask = sum(1 << index[name] for name in self.and_nodes)
        return self

    # ---- lookups ----

    @property
    def size(self) -> int:
        return len(self.species)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSpeciesError(name) from None

    def successors(self, index: int) -> int:
        """Bitmask of the prey of `index`."""
        return self._successors[index]

    def predecessors(self, index: int) -> int:
        """Bitmask of the predators of `index`."""
        return self._predecessors[index]

    def mode(self, index: int) -> ViabilityMode:
        return ViabilityMode.AND if self._and_mask >> index & 1 else ViabilityMode.OR

    @property
    def topological_order(self) -> Tuple[int, ...]:
        """Predators before their prey; ties broken by smallest index."""
        return self._topological

    @property
    def sink_mask(self) -> int:
        return self._sink_mask

    @property
    def and_mask(self) -> int:
        return self._and_mask

    @property
    def has_and_nodes(self) -> bool:
        return self._and_mask != 0

    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.size))
        for u, succ in enumerate(self._successors):
            graph.add_edges_from((u, v) for v in iter_bits(succ))
        return graph


class Instance(BaseModel):
    """Phylogenetic tree, food web and budget: the unit of solving."""

    model_config = ConfigDict(frozen=True)

    tree: PhyloTree
    web: FoodWeb
    budget: int = Field(..., ge=1)
    generalized: bool = False
    provenance: Tuple[Tuple[str, str], ...] = ()

    @field_validator("provenance", mode="after")
    @classmethod
    def _canonical_provenance(cls, v):
        return tuple(sorted(v))

    @model_validator(mode="after")
    def _check_agreement(self) -> "Instance":
        if tuple(sorted(self.tree.leaves)) != self.web.species:
            raise ValueError(exception_constants.INSTANCE_SPECIES_MISMATCH)
        if self.web.has_and_nodes and not self.generalized:
            raise ValueError(exception_constants.WEB_AND_ON_STANDARD)
        return self

    @classmethod
    def build(cls, **data) -> "Instance":
        """Validates like the constructor but raises the toolkit's own error type."""
        return build_validated(cls, **data)

    # ---- species helpers ----

    @property
    def species(self) -> Tuple[str, ...]:
        return self.web.species

    @property
    def n(self) -> int:
        return self.web.size

    @property
    def species_ids(self) -> List[SpeciesId]:
        return [SpeciesId(name=name, index=i) for i, name in enumerate(self.species)]

    def index_of(self, name: str) -> int:
        return self.web.index_of(name)

    def species_set(self, names: Iterable[str]) -> SpeciesSet:
        return SpeciesSet.of(self.index_of(name) for name in names)

    def names_of(self, species: SpeciesSet) -> List[str]:
        self.check_set(species)
        return [self.species[i] for i in species]

    def check_set(self, species: SpeciesSet) -> SpeciesSet:
        if species.mask >> self.n:
            stray = max(species.members)
            raise UnknownSpeciesError(str(stray))
        return species

    @property
    def everyone(self) -> SpeciesSet:
        return SpeciesSet((1 << self.n) - 1)


def first_error(error: ValidationError) -> str:
    details = error.errors(include_url=False)
    if not details:
        return str(error)
    message = details[0].get("msg", str(error))
    return message.removeprefix("Value error, ")


def build_validated(model: type, **data):
    """Construct `model`, turning pydantic's ValidationError into InvalidInstanceError."""
    try:
        return model(**data)
    except ValidationError as e:
        raise InvalidInstanceError(
            exception_constants.INSTANCE_INVALID.format(reason=first_error(e)),
            internal_context={"model": model.__name__, "errors": e.errors(include_url=False)},
        ) from e
