"""
Instance generators that encode Max Coverage, Max Vertex Cover and 3-SAT as
viable-diversity instances, plus brute-force solvers for the source problems
so each encoding can be checked end to end.

Species naming:
    maxcov        e{j} for element j, s{i}_{j} for link j of set i's chain
    vertexcover   v_{v}_{i} for copy i of vertex v, w_{v}_{i} for its chain
                  partner, f_{u}_{v} for the inner node of edge uv
    sat           c{i} per clause, x{j} / nx{j} / cx{j} per variable, t
"""
import logging
from enum import Enum
from itertools import combinations, product
from typing import Dict, List, Optional, Tuple

from app.core.config import SolverLimits
from app.core.exceptions import exception_constants
from app.core.exceptions.local_exceptions import CapacityExceededError, InvalidParameterError
from app.infrastructure.formats.source_formats import parse_coverage, parse_dimacs, parse_edge_list
from app.schemas.instance import Instance
from app.schemas.reduction_inputs import CnfInput, CoverageInput, VertexCoverInput

logger = logging.getLogger(__name__)

ROOT = "r"

Edge = Dict[str, object]


def _star(weights: Dict[str, int]) -> List[Edge]:
    return [{"parent": ROOT, "child": name, "weight": weight} for name, weight in weights.items()]


def _instance(edges: List[Edge], arcs: List[Tuple[str, str]], budget: int, provenance: Dict[str, object],
              and_nodes: Tuple[str, ...] = ()) -> Instance:
    species = sorted({edge["child"] for edge in edges} - {edge["parent"] for edge in edges})
    return Instance.build(
        tree={"root": ROOT, "edges": edges},
        web={"species": species, "arcs": arcs, "and_nodes": and_nodes},
        budget=budget,
        generalized=bool(and_nodes),
        provenance=tuple((key, str(value)) for key, value in provenance.items()),
    )


# ---- Max Coverage ------------------------------------------------------------


def generate_maxcov(source: CoverageInput) -> Instance:
    """
    Every element becomes a species weighted like the element; every set a
    chain of n species whose top feeds on the set's elements. A budget of
    (k+1)·n leaves room for k chains and all elements they cover.

    An element no set holds has no prey, so it would survive alone; it is
    weighted 0 since no choice of sets can cover it.
    """
    n = source.n
    coverable = set().union(*source.sets)
    weights = {f"e{j}": source.weights[j - 1] if j in coverable else 0 for j in range(1, n + 1)}
    arcs: List[Tuple[str, str]] = []
    for i, members in enumerate(source.sets, start=1):
        for j in range(1, n + 1):
            weights[f"s{i}_{j}"] = 0
        arcs += [(f"e{j}", f"s{i}_{n}") for j in members]
        arcs += [(f"s{i}_{j + 1}", f"s{i}_{j}") for j in range(1, n)]

    instance = _instance(
        _star(weights), arcs, (source.k + 1) * n,
        {"source": "maxcov", "n": n, "m": source.m, "k": source.k},
    )
    logger.info(f"maxcov: {instance.n} species, budget {instance.budget}")
    return instance


def solve_maxcov_exact(source: CoverageInput, limits: Optional[SolverLimits] = None) -> int:
    limits = limits or SolverLimits()
    if source.m > limits.maxcov_max_sets:
        raise CapacityExceededError("maxcov_max_sets", source.m, limits.maxcov_max_sets)
    best = 0
    for chosen in combinations(source.sets, min(source.k, source.m)):
        covered = set().union(*chosen)
        best = max(best, sum(source.weights[j - 1] for j in covered))
    return best


# ---- Max Vertex Cover --------------------------------------------------------


def generate_vertexcover(source: VertexCoverInput) -> Instance:
    """
    Γ copies v_1..v_Γ of every vertex; copy i hangs below the inner node of the
    vertex's i-th edge, or below the root once the edges run out. Chain
    partners w_1..w_Γ carry no weight and make a copy viable only together with
    the whole chain. Budget 2kΓ.
    """
    gamma = source.max_degree
    edges: List[Edge] = []
    arcs: List[Tuple[str, str]] = []

    for u, v in source.edges:
        a, b = source.edge_key(u, v)
        edges.append({"parent": ROOT, "child": f"f_{a}_{b}", "weight": 1})

    for vertex in source.vertices:
        incident = source.neighbours(vertex)
        for i in range(1, gamma + 1):
            copy, partner = f"v_{vertex}_{i}", f"w_{vertex}_{i}"
            if i <= len(incident):
                a, b = source.edge_key(vertex, incident[i - 1])
                edges.append({"parent": f"f_{a}_{b}", "child": copy, "weight": 1})
            else:
                edges.append({"parent": ROOT, "child": copy, "weight": 1})
            edges.append({"parent": ROOT, "child": partner, "weight": 0})
            arcs.append((copy, f"w_{vertex}_{gamma}"))
            if i > 1:
                arcs.append((partner, f"w_{vertex}_{i - 1}"))

    instance = _instance(
        edges, arcs, 2 * source.k * gamma,
        {"source": "vertexcover", "vertices": len(source.vertices), "edges": len(source.edges),
         "k": source.k, "max_degree": gamma},
    )
    logger.info(f"vertexcover: {instance.n} species, budget {instance.budget}, Γ={gamma}")
    return instance


def solve_vc_exact(source: VertexCoverInput, limits: Optional[SolverLimits] = None) -> int:
    """Most edges k vertices can touch."""
    limits = limits or SolverLimits()
    if len(source.vertices) > limits.vc_max_vertices:
        raise CapacityExceededError("vc_max_vertices", len(source.vertices), limits.vc_max_vertices)
    best = 0
    for chosen in combinations(source.vertices, min(source.k, len(source.vertices))):
        picked = set(chosen)
        best = max(best, sum(1 for u, v in source.edges if u in picked or v in picked))
    return best


# ---- 3-SAT -------------------------------------------------------------------


def generate_sat(source: CnfInput) -> Instance:
    """
    Only `t` carries weight, and `t` needs every clause species and every
    variable gadget cx{j}. A gadget needs x{j} or nx{j}, a clause needs one of
    its literals, and the budget 2n+m+1 leaves no room for both literals of
    every variable, so `t` survives exactly when the formula is satisfiable.
    """
    weights: Dict[str, int] = {"t": 1}
    arcs: List[Tuple[str, str]] = []
    for j in range(1, source.n + 1):
        weights.update({f"x{j}": 0, f"nx{j}": 0, f"cx{j}": 0})
        arcs += [(f"cx{j}", f"x{j}"), (f"cx{j}", f"nx{j}"), ("t", f"cx{j}")]
    for i, clause in enumerate(source.clauses, start=1):
        weights[f"c{i}"] = 0
        arcs += [(f"c{i}", _literal(lit)) for lit in clause]
        arcs.append(("t", f"c{i}"))

    if len(weights) < 2:
        # a bare `t` would leave the root with a single child
        weights["x0"] = 0

    instance = _instance(
        _star(weights), arcs, 2 * source.n + source.m + 1,
        {"source": "sat", "variables": source.n, "clauses": source.m},
        and_nodes=("t",),
    )
    logger.info(f"sat: {instance.n} species, budget {instance.budget}")
    return instance


def _literal(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"nx{-lit}"


def solve_sat_exact(source: CnfInput, limits: Optional[SolverLimits] = None) -> bool:
    """Truth-table satisfiability."""
    limits = limits or SolverLimits()
    if source.n > limits.sat_max_variables:
        raise CapacityExceededError("sat_max_variables", source.n, limits.sat_max_variables)
    for assignment in product((False, True), repeat=source.n):
        if all(any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in source.clauses):
            return True
    return False


# ---- lower-bound family ------------------------------------------------------


def faller_ratio_family(c: int) -> Instance:
    """
    Two weight-1 sinks x1, x2 and a weight-c species z that survives only with
    the worthless y. With k=2 the unit-cost greedy takes x1, x2 (value 2) while
    {y, z} is worth c.
    """
    if c <= 2:
        raise InvalidParameterError(exception_constants.INVALID_PARAMETER.format(name="C", requirement="above 2"))
    return _instance(
        _star({"x1": 1, "x2": 1, "y": 0, "z": c}), [("z", "y")], 2,
        {"source": "faller_family", "C": c},
    )


class ReductionKind(str, Enum):
    MAXCOV = "maxcov"
    VC = "vc"
    SAT = "sat"


class ReductionService:
    """Reads a source problem and encodes it as an instance."""

    def generate(self, kind: ReductionKind, text: str, k: Optional[int] = None) -> Instance:
        if kind is ReductionKind.SAT:
            return generate_sat(parse_dimacs(text))
        if k is None:
            raise InvalidParameterError(
                exception_constants.INVALID_PARAMETER.format(name="k", requirement=f"given for {kind.value}")
            )
        if kind is ReductionKind.MAXCOV:
            return generate_maxcov(parse_coverage(text, k))
        return generate_vertexcover(parse_edge_list(text, k))
