from __future__ import annotations

import re
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

_VERTEX = re.compile(r"^[A-Za-z0-9]+$")


class CoverageInput(BaseModel):
    """Weighted Max Coverage: pick k of the sets, maximise covered weight. Elements are 1..n."""

    model_config = ConfigDict(frozen=True)

    weights: Tuple[int, ...] = Field(..., min_length=1)
    sets: Tuple[Tuple[int, ...], ...] = Field(..., min_length=1)
    k: int = Field(..., ge=1)

    @field_validator("weights")
    @classmethod
    def _non_negative(cls, v):
        if any(w < 0 for w in v):
            raise ValueError("element weights must be non-negative")
        return v

    @field_validator("sets")
    @classmethod
    def _canonical_sets(cls, v):
        return tuple(tuple(sorted(set(members))) for members in v)

    @model_validator(mode="after")
    def _sets_within_domain(self) -> "CoverageInput":
        for i, members in enumerate(self.sets, start=1):
            for element in members:
                if not 1 <= element <= self.n:
                    raise ValueError(f"set {i} holds element {element} outside 1..{self.n}")
        return self

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def m(self) -> int:
        return len(self.sets)


class VertexCoverInput(BaseModel):
    """
    Max Vertex Cover: pick k vertices, maximise the number of covered edges.

    Vertex order is the order vertices were first listed; each vertex's incident
    edges are numbered 1..degree by ascending position of the neighbour.
    """

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[str, ...] = Field(..., min_length=1)
    edges: Tuple[Tuple[str, str], ...] = Field(..., min_length=1)
    k: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _simple_graph(self) -> "VertexCoverInput":
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        for name in self.vertices:
            if not _VERTEX.match(name):
                raise ValueError(f"vertex name '{name}' must use only letters and digits")
        position = {v: i for i, v in enumerate(self.vertices)}
        seen = set()
        for u, v in self.edges:
            if u not in position or v not in position:
                raise ValueError(f"edge {u}-{v} names an unknown vertex")
            if u == v:
                raise ValueError(f"self-loop on {u}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"edge {u}-{v} is listed twice")
            seen.add(key)
        return self

    def neighbours(self, vertex: str) -> List[str]:
        position = {v: i for i, v in enumerate(self.vertices)}
        found = [b if a == vertex else a for a, b in self.edges if vertex in (a, b)]
        return sorted(found, key=position.__getitem__)

    def degree(self, vertex: str) -> int:
        return sum(vertex in edge for edge in self.edges)

    @computed_field
    @property
    def max_degree(self) -> int:
        return max(self.degree(v) for v in self.vertices)

    def edge_key(self, u: str, v: str) -> Tuple[str, str]:
        """Canonical (earlier, later) endpoint order of an edge."""
        position: Dict[str, int] = {x: i for i, x in enumerate(self.vertices)}
        return (u, v) if position[u] < position[v] else (v, u)


class CnfInput(BaseModel):
    """3-CNF formula. Literals are non-zero ints, DIMACS style; -j negates variable j."""

    model_config = ConfigDict(frozen=True)

    variables: int = Field(..., ge=0)
    clauses: Tuple[Tuple[int, int, int], ...] = ()

    @model_validator(mode="after")
    def _proper_clauses(self) -> "CnfInput":
        for i, clause in enumerate(self.clauses, start=1):
            used = [abs(lit) for lit in clause]
            if 0 in used:
                raise ValueError(f"clause {i} holds the literal 0")
            if any(var > self.variables for var in used):
                raise ValueError(f"clause {i} names a variable above {self.variables}")
            if len(set(used)) != 3:
                raise ValueError(f"clause {i} repeats a variable")
        return self

    @property
    def n(self) -> int:
        return self.variables

    @property
    def m(self) -> int:
        return len(self.clauses)
