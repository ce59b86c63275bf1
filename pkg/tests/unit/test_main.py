"""
Test cases for the command line
"""
import json

import pytest

from app.core.exceptions.base_exceptions import ExitCode
from app.infrastructure.formats.instance_format import parse_instance
from app.main import build_container, cli


def _json(result):
    payload = json.loads(result.stdout)
    payload.pop("elapsed_ms")
    return payload


def _assert_golden(payload, path):
    expected = json.loads(path.read_text())
    assert list(payload) == list(expected)
    for key, value in expected.items():
        if isinstance(value, float):
            assert payload[key] == pytest.approx(value)
        else:
            assert payload[key] == value


class TestSolve:
    def test_faller_golden(self, runner, decoy_path, golden_dir):
        result = runner.invoke(cli, ["solve", str(decoy_path), "--algorithm", "faller", "--json"])
        assert result.exit_code == ExitCode.SUCCESS, result.output
        _assert_golden(_json(result), golden_dir / "decoy_faller.json")

    def test_exact_golden(self, runner, decoy_path, golden_dir):
        result = runner.invoke(cli, ["solve", str(decoy_path), "--algorithm", "exact", "--json"])
        assert result.exit_code == ExitCode.SUCCESS, result.output
        _assert_golden(_json(result), golden_dir / "decoy_exact.json")

    @pytest.mark.parametrize("algorithm", ["greedy_p", "enum_p"])
    def test_ratio_algorithms(self, runner, decoy_path, algorithm):
        result = runner.invoke(cli, ["solve", str(decoy_path), "--algorithm", algorithm, "--p", "1", "--json"])
        assert result.exit_code == ExitCode.SUCCESS, result.output
        payload = _json(result)
        assert payload["value"] == 10
        assert payload["p"] == 1

    def test_plain_output(self, runner, decoy_path):
        result = runner.invoke(cli, ["solve", str(decoy_path)])
        assert result.exit_code == ExitCode.SUCCESS
        lines = dict(line.split(None, 1) for line in result.stdout.splitlines())
        assert lines["value"] == "10"
        assert lines["set"] == "y,z"

    def test_deterministic(self, runner, five_species_path):
        args = ["solve", str(five_species_path), "--algorithm", "enum_p", "--p", "2", "--json"]
        first, second = runner.invoke(cli, args), runner.invoke(cli, args)
        assert _json(first) == _json(second)

    def test_threads_and_cache(self, runner, five_species_path):
        base = ["solve", str(five_species_path), "--algorithm", "greedy_p", "--p", "2", "--json"]
        plain = runner.invoke(cli, base)
        tuned = runner.invoke(cli, ["--threads", "4", "--cache-size", "128"] + base)
        assert tuned.exit_code == ExitCode.SUCCESS
        assert _json(plain) == _json(tuned)

    def test_seed_cap_exit_code(self, runner, five_species_path):
        result = runner.invoke(cli, ["solve", str(five_species_path), "--algorithm", "enum_p", "--seed-cap", "3"])
        assert result.exit_code == ExitCode.INFEASIBLE
        assert "max_seeds" in result.stderr

    def test_missing_file(self, runner, temp_directory):
        result = runner.invoke(cli, ["solve", str(temp_directory / "nope.inst")])
        assert result.exit_code == ExitCode.INPUT_ERROR
        assert "error: [INSTANCEFORMATERROR]" in result.stderr

    def test_malformed_instance(self, runner, temp_directory):
        path = temp_directory / "bad.inst"
        path.write_text("[tree]\n(a:1,b);\n[web]\n[budget]\n1\n")
        result = runner.invoke(cli, ["solve", str(path)])
        assert result.exit_code == ExitCode.INPUT_ERROR
        assert "line 2" in result.stderr

    def test_undecodable_file(self, runner, temp_directory):
        path = temp_directory / "latin.inst"
        path.write_bytes(b"[tree]\n(a:1,\xff:2);\n")
        result = runner.invoke(cli, ["pd", str(path), "--set", "a"])
        assert result.exit_code == ExitCode.INPUT_ERROR
        assert not isinstance(result.exception, UnicodeDecodeError)
        assert "not UTF-8 text" in result.stderr
        assert "line 2, column 6" in result.stderr

    def test_unknown_algorithm(self, runner, five_species_path):
        result = runner.invoke(cli, ["solve", str(five_species_path), "--algorithm", "magic"])
        assert result.exit_code == ExitCode.INPUT_ERROR

    def test_generalized_instance_needs_exact(self, runner, fixtures_dir, temp_directory):
        out = temp_directory / "sat.inst"
        generated = runner.invoke(cli, ["generate", "sat", str(fixtures_dir / "formula.cnf"), "-o", str(out)])
        assert generated.exit_code == ExitCode.SUCCESS

        rejected = runner.invoke(cli, ["solve", str(out), "--algorithm", "greedy_p"])
        assert rejected.exit_code == ExitCode.INPUT_ERROR

        solved = runner.invoke(cli, ["solve", str(out), "--algorithm", "exact", "--json"])
        assert solved.exit_code == ExitCode.SUCCESS
        assert _json(solved)["value"] == 1


class TestVerify:
    def test_greedy_p_golden(self, runner, decoy_path, golden_dir):
        result = runner.invoke(cli, ["verify", str(decoy_path), "--algorithm", "greedy_p", "--p", "1", "--json"])
        assert result.exit_code == ExitCode.SUCCESS, result.output
        _assert_golden(_json(result), golden_dir / "decoy_verify_greedy_p.json")

    def test_faller_report_only(self, runner, decoy_path):
        result = runner.invoke(cli, ["verify", str(decoy_path), "--algorithm", "faller", "--json"])
        payload = _json(result)
        assert payload["ratio"] == pytest.approx(0.2)
        assert "floor" not in payload
        assert payload["verdict"] == "REPORT"


class TestInspect:
    @pytest.mark.parametrize("members,expected", [("A,D,E", "false"), ("A,B", "true"), ("A,B,D", "true")])
    def test_check(self, runner, five_species_path, members, expected):
        result = runner.invoke(cli, ["check", str(five_species_path), "--set", members])
        assert result.exit_code == ExitCode.SUCCESS
        assert result.stdout.strip() == expected

    def test_check_json(self, runner, five_species_path):
        result = runner.invoke(cli, ["check", str(five_species_path), "--set", "B,A", "--json"])
        assert json.loads(result.stdout) == {"set": ["A", "B"], "viable": True}

    def test_check_unknown_species(self, runner, five_species_path):
        result = runner.invoke(cli, ["check", str(five_species_path), "--set", "A,Q"])
        assert result.exit_code == ExitCode.INPUT_ERROR
        assert "'Q'" in result.stderr

    def test_pd(self, runner, five_species_path):
        result = runner.invoke(cli, ["pd", str(five_species_path), "--set", "A,B"])
        assert result.stdout.strip() == "4"

    def test_pd_explain(self, runner, five_species_path):
        result = runner.invoke(cli, ["pd", str(five_species_path), "--set", "A,B", "--explain", "--json"])
        payload = json.loads(result.stdout)
        assert payload["pd"] == 4
        assert {"parent": "r", "child": "_n1", "weight": 1} in payload["edges"]
        assert sum(edge["weight"] for edge in payload["edges"]) == 4

    def test_extend(self, runner, five_species_path):
        result = runner.invoke(cli, ["extend", str(five_species_path), "--set", "A"])
        assert result.stdout.strip() == "A,B"

    def test_extend_with_base(self, runner, five_species_path):
        result = runner.invoke(cli, ["extend", str(five_species_path), "--set", "A", "--base", "D,E", "--json"])
        payload = json.loads(result.stdout)
        assert payload["extension"] == ["A", "B", "D", "E"]
        assert payload["cost"] == 2

    def test_depth(self, runner, five_species_path):
        result = runner.invoke(cli, ["depth", str(five_species_path)])
        assert result.stdout.strip() == "d=3 longest_path_len=3"

    def test_depth_json_with_budget(self, runner, five_species_path):
        result = runner.invoke(cli, ["depth", str(five_species_path), "--k", "2", "--json"])
        assert json.loads(result.stdout) == {"d": 2, "longest_path_len": 3}


class TestGenerate:
    def test_sat_to_stdout(self, runner, fixtures_dir):
        result = runner.invoke(cli, ["generate", "sat", str(fixtures_dir / "formula.cnf")])
        assert result.exit_code == ExitCode.SUCCESS
        instance = parse_instance(result.stdout)
        assert instance.n == 16
        assert instance.generalized

    def test_maxcov_budget(self, runner, fixtures_dir):
        result = runner.invoke(cli, ["generate", "maxcov", str(fixtures_dir / "coverage.cov"), "--k", "2"])
        assert parse_instance(result.stdout).budget == 12
        assert result.stdout.startswith("#! ")

    def test_vc_written_to_file(self, runner, fixtures_dir, temp_directory):
        out = temp_directory / "vc.inst"
        result = runner.invoke(cli, ["generate", "vc", str(fixtures_dir / "graph.edges"), "--k", "1", "-o", str(out)])
        assert result.exit_code == ExitCode.SUCCESS
        assert parse_instance(out.read_text()).n == 24

    def test_missing_k(self, runner, fixtures_dir):
        result = runner.invoke(cli, ["generate", "maxcov", str(fixtures_dir / "coverage.cov")])
        assert result.exit_code == ExitCode.INPUT_ERROR

    def test_bad_source(self, runner, temp_directory):
        path = temp_directory / "bad.cnf"
        path.write_text("1 2 3 0\n")
        result = runner.invoke(cli, ["generate", "sat", str(path)])
        assert result.exit_code == ExitCode.INPUT_ERROR
        assert "header" in result.stderr


class TestGroup:
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == ExitCode.SUCCESS
        assert "viaphy" in result.stdout

    def test_info_logs_go_to_stderr(self, runner, decoy_path):
        result = runner.invoke(cli, ["--log-level", "info", "solve", str(decoy_path), "--json"])
        assert result.exit_code == ExitCode.SUCCESS
        assert "Loaded instance" in result.stderr
        json.loads(result.stdout)

    def test_build_container_overrides(self):
        container = build_container(threads=3, cache_size=8)
        try:
            assert container.solver_service().threads == 3
            assert container.oracle_builder().cache_size == 8
            assert container.limits() is container.limits()
        finally:
            container.unwire()
