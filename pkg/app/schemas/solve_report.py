from __future__ import annotations

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import SolverLimits
from app.infrastructure.run_tracer.run_trace import RunTrace
from app.schemas.species_set import SpeciesSet


class Algorithm(str, Enum):
    FALLER = "faller"
    GREEDY_P = "greedy_p"
    ENUM_P = "enum_p"
    EXACT = "exact"


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    algorithm: Algorithm
    p: int = Field(default=1, ge=1)
    threads: Optional[int] = Field(default=None, ge=1, le=64)
    limits: Optional[SolverLimits] = None


class DepthInfo(BaseModel):
    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    longest_path_len: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _d_not_above_path(self) -> "DepthInfo":
        if self.d > self.longest_path_len:
            raise ValueError("truncated depth cannot exceed the longest path")
        return self


class SolveReport(BaseModel):
    """What a solver returns: the chosen set, its value and how the run went."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    algorithm: Algorithm
    p: Optional[int] = None
    k: int = Field(..., ge=0)
    chosen: SpeciesSet
    value: int = Field(..., ge=0)
    viable: bool
    greedy_value: Optional[int] = Field(
        default=None,
        description="Value of the ratio-greedy phase alone (greedy_p only).",
    )
    seeds: Optional[int] = Field(default=None, description="Viable seeds visited (enum_p only).")
    trace: RunTrace = Field(default_factory=RunTrace)

    @property
    def iterations(self) -> int:
        return self.trace.iterations

    @property
    def oracle_calls(self) -> int:
        return self.trace.oracle_calls

    @property
    def steiner_calls(self) -> int:
        return self.trace.steiner_calls

    @property
    def elapsed_ms(self) -> int:
        return self.trace.elapsed_ms or 0


class DecompositionPair(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    block: SpeciesSet
    helpers: SpeciesSet

    @property
    def union(self) -> SpeciesSet:
        return self.block | self.helpers


class Decomposition(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pairs: Tuple[DecompositionPair, ...] = ()

    @property
    def total_size(self) -> int:
        return sum(len(pair.union) for pair in self.pairs)


def approximation_floor(algorithm: Algorithm, p: int, d: int) -> Optional[float]:
    """
    Worst-case value/optimum guarantee of `algorithm` for parameter p and
    truncated depth d. Faller carries none.
    """
    if algorithm is Algorithm.EXACT:
        return 1.0
    if algorithm is Algorithm.FALLER:
        return None
    bound = 1.0 - math.exp(-p / (p + d - 1))
    return bound / 2 if algorithm is Algorithm.GREEDY_P else bound


class JsonReport(BaseModel):
    """Stable machine-readable view of a run, one JSON object per line."""

    algorithm: str
    p: Optional[int] = None
    k: int
    d: int
    n: int
    value: int
    set: List[str]
    viable: bool
    optimum: Optional[int] = None
    ratio: Optional[float] = None
    floor: Optional[float] = None
    verdict: Optional[str] = None
    elapsed_ms: int
