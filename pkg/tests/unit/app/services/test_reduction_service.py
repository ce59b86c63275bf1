import random
from itertools import combinations_with_replacement, permutations, product

import networkx as nx
import pytest

from app.core.config import SolverLimits
from app.core.exceptions.local_exceptions import CapacityExceededError, InvalidParameterError
from app.schemas.reduction_inputs import CnfInput, CoverageInput, VertexCoverInput
from app.schemas.species_set import SpeciesSet
from app.services.pd_oracle import AdditiveOracle, PdOracle
from app.services.reduction_service import (
    ReductionKind,
    ReductionService,
    faller_ratio_family,
    generate_maxcov,
    generate_sat,
    generate_vertexcover,
    solve_maxcov_exact,
    solve_sat_exact,
    solve_vc_exact,
)
from app.services.solver_service import solve_exact
from app.services.viability_service import truncated_depth

COVERAGE = CoverageInput(weights=(1, 1, 1, 1), sets=((1, 2, 3), (2, 4), (1, 3, 4)), k=2)
GRAPH = VertexCoverInput(
    vertices=("a", "b", "c", "d"), edges=(("a", "b"), ("a", "c"), ("b", "c"), ("c", "d")), k=1
)
FORMULA = CnfInput(variables=4, clauses=((1, 2, 3), (2, -3, -4), (2, 3, 4)))


def _exact_pd(instance, limits=None):
    return solve_exact(instance, PdOracle(instance.tree, instance.species), limits=limits).value


class TestMaxCoverage:
    def test_coverage_structure(self):
        instance = generate_maxcov(COVERAGE)
        assert instance.n == 16
        assert instance.budget == 12
        assert ("e1", "s1_4") in instance.web.arcs
        assert ("s1_2", "s1_1") in instance.web.arcs
        assert dict(instance.provenance)["source"] == "maxcov"
        assert not instance.generalized

    def test_coverage_optimum(self):
        assert solve_maxcov_exact(COVERAGE) == 4

    def test_pd_is_additive(self):
        instance = generate_maxcov(COVERAGE)
        oracle = PdOracle(instance.tree, instance.species)
        weights = [1 if name.startswith("e") else 0 for name in instance.species]
        additive = AdditiveOracle(weights)
        rng = random.Random(5)
        for _ in range(200):
            species = SpeciesSet(rng.getrandbits(instance.n))
            assert oracle.value(species) == additive.value(species)

    def test_set_cap(self):
        with pytest.raises(CapacityExceededError):
            solve_maxcov_exact(COVERAGE, SolverLimits(maxcov_max_sets=2))

    def test_uncovered_element_has_no_weight(self):
        source = CoverageInput(weights=(1, 1), sets=((1,),), k=1)
        instance = generate_maxcov(source)
        assert instance.tree.parent("e2") == ("r", 0)
        assert instance.tree.parent("e1") == ("r", 1)
        assert _exact_pd(instance) == solve_maxcov_exact(source) == 1

    def test_empty_set_covers_nothing(self):
        source = CoverageInput(weights=(2, 1), sets=((), (2,)), k=1)
        assert _exact_pd(generate_maxcov(source)) == solve_maxcov_exact(source) == 1

    @staticmethod
    def _relabel(weights, sets, perm):
        moved = [0] * len(weights)
        for element, weight in enumerate(weights, start=1):
            moved[perm[element - 1] - 1] = weight
        relabelled = tuple(sorted(tuple(sorted(perm[e - 1] for e in members)) for members in sets))
        return tuple(moved), relabelled

    @classmethod
    def _inputs(cls):
        # every family of one to three subsets of 1..n, n <= 4, empty sets allowed and
        # weights in {1, 2}; one family per orbit under renaming the elements
        seen = set()
        for n in range(1, 5):
            subsets = [tuple(e for e in range(1, n + 1) if bits >> (e - 1) & 1) for bits in range(1 << n)]
            renamings = list(permutations(range(1, n + 1)))
            for m in range(1, 4):
                for sets in combinations_with_replacement(subsets, m):
                    if not any(sets):
                        continue
                    for weights in product((1, 2), repeat=n):
                        key = min(cls._relabel(weights, sets, perm) for perm in renamings)
                        if key in seen:
                            continue
                        seen.add(key)
                        for k in (1, 2):
                            yield CoverageInput(weights=weights, sets=sets, k=k)

    def test_corpus_reaches_every_shape(self):
        inputs = list(self._inputs())
        assert {(source.n, source.m, source.k) for source in inputs} == {
            (n, m, k) for n in range(1, 5) for m in range(1, 4) for k in (1, 2)
        }
        assert any(() in source.sets for source in inputs)
        assert any(set().union(*source.sets) != set(range(1, source.n + 1)) for source in inputs)

    @pytest.mark.slow
    def test_round_trip(self):
        for source in self._inputs():
            assert _exact_pd(generate_maxcov(source)) == solve_maxcov_exact(source), source


class TestVertexCover:
    def test_graph_structure(self):
        instance = generate_vertexcover(GRAPH)
        inner = [node for node in instance.tree.nodes if node.startswith("f_")]
        assert instance.n == 24
        assert len(inner) == 4
        assert instance.budget == 6
        assert truncated_depth(instance.web, instance.budget).longest_path_len == 4
        assert instance.tree.parent("v_c_3") == ("f_c_d", 1)
        assert instance.tree.parent("v_d_2") == ("r", 1)
        assert instance.tree.parent("w_a_1") == ("r", 0)

    def test_graph_optimum(self):
        assert solve_vc_exact(GRAPH) == 3

    def test_single_edge(self):
        source = VertexCoverInput(vertices=("a", "b"), edges=(("a", "b"),), k=1)
        instance = generate_vertexcover(source)
        assert (instance.n, instance.budget) == (4, 2)
        assert _exact_pd(instance) == 2

    def test_vertex_cap(self):
        with pytest.raises(CapacityExceededError):
            solve_vc_exact(GRAPH, SolverLimits(vc_max_vertices=3))

    @staticmethod
    def _graphs():
        for graph in nx.graph_atlas_g():
            size = graph.number_of_nodes()
            if size < 2 or size > 5 or not nx.is_connected(graph):
                continue
            vertices = tuple(f"v{node}" for node in graph.nodes)
            edges = tuple((f"v{u}", f"v{v}") for u, v in graph.edges)
            for k in (1, 2):
                yield VertexCoverInput(vertices=vertices, edges=edges, k=k)

    def test_corpus_holds_every_connected_graph(self):
        sources = list(self._graphs())
        # connected graphs on 2, 3, 4 and 5 vertices: 1 + 2 + 6 + 21
        assert len(sources) == 2 * 30
        assert any(len(source.vertices) == 5 and source.max_degree == 4 and source.k == 2 for source in sources)

    @pytest.mark.slow
    def test_round_trip(self):
        limits = SolverLimits(exact_max_species=40)
        for source in self._graphs():
            instance = generate_vertexcover(source)
            expected = solve_vc_exact(source) + source.k * source.max_degree
            assert _exact_pd(instance, limits) == expected, source


class TestSat:
    def test_formula_structure(self):
        instance = generate_sat(FORMULA)
        assert instance.n == 16
        assert instance.budget == 12
        assert instance.generalized
        assert instance.web.and_nodes == ("t",)
        assert instance.tree.parent("t") == ("r", 1)
        assert ("c2", "nx3") in instance.web.arcs

    def test_formula_satisfiable(self):
        assert solve_sat_exact(FORMULA)
        assert _exact_pd(generate_sat(FORMULA)) == 1

    def test_unsatisfiable(self):
        clauses = tuple(
            (a * 1, b * 2, c * 3) for a, b, c in product((1, -1), repeat=3)
        )
        source = CnfInput(variables=3, clauses=clauses)
        assert not solve_sat_exact(source)
        assert _exact_pd(generate_sat(source)) == 0

    def test_empty_formula(self):
        instance = generate_sat(CnfInput(variables=0))
        assert instance.species == ("t", "x0")
        assert _exact_pd(instance) == 1

    def test_variable_cap(self):
        with pytest.raises(CapacityExceededError):
            solve_sat_exact(FORMULA, SolverLimits(sat_max_variables=3))

    @staticmethod
    def _formulas():
        rng = random.Random(71)
        for _ in range(240):
            n = rng.randint(3, 5)
            m = rng.randint(1, 4)
            clauses = tuple(
                tuple(var if rng.random() < 0.5 else -var for var in rng.sample(range(1, n + 1), 3))
                for _ in range(m)
            )
            yield CnfInput(variables=n, clauses=clauses)

    @pytest.mark.slow
    def test_round_trip(self):
        outcomes = set()
        for source in self._formulas():
            satisfiable = solve_sat_exact(source)
            outcomes.add(satisfiable)
            assert (_exact_pd(generate_sat(source)) > 0) == satisfiable, source
        assert True in outcomes


class TestFallerFamily:
    def test_shape(self):
        instance = faller_ratio_family(10)
        assert instance.species == ("x1", "x2", "y", "z")
        assert instance.budget == 2
        assert instance.web.arcs == (("z", "y"),)

    def test_c_above_two(self):
        with pytest.raises(InvalidParameterError):
            faller_ratio_family(2)


class TestReductionService:
    def test_generate_each_kind(self, fixtures_dir):
        service = ReductionService()
        read = lambda name: (fixtures_dir / name).read_text()
        assert service.generate(ReductionKind.MAXCOV, read("coverage.cov"), k=2).budget == 12
        assert service.generate(ReductionKind.VC, read("graph.edges"), k=1).n == 24
        assert service.generate(ReductionKind.SAT, read("formula.cnf")).n == 16

    def test_k_required(self, fixtures_dir):
        with pytest.raises(InvalidParameterError):
            ReductionService().generate(ReductionKind.MAXCOV, (fixtures_dir / "coverage.cov").read_text())
