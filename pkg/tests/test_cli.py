"""Tests for the command-line front end: output contract, exit codes,
determinism."""

import json
import os

import pytest

from qtoda.cli import (
    EXIT_BUDGET,
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_USAGE,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out.splitlines()


def parsed(lines):
    return [json.loads(line) for line in lines]


class TestEnumerate:
    def test_basic(self, capsys):
        code, lines = run(capsys, "enumerate", "--n", "3", "--degree", "1,1")
        assert code == EXIT_PASS
        records = parsed(lines)
        points = [r for r in records if "point" in r]
        assert len(points) == 2
        check = [r for r in records if r.get("check")][0]
        assert check["status"] == "pass" and check["count"] == 2
        assert records[-1]["summary"] is True

    def test_single_point(self, capsys):
        code, lines = run(capsys, "enumerate", "--n", "2", "--degree", "5")
        assert code == EXIT_PASS
        assert len([r for r in parsed(lines) if "point" in r]) == 1

    def test_usage_errors(self, capsys):
        assert main(["enumerate", "--n", "1", "--degree", "0"]) == EXIT_USAGE
        capsys.readouterr()
        assert main(["enumerate", "--n", "3", "--degree", "1"]) == EXIT_USAGE
        capsys.readouterr()
        assert main(["enumerate", "--n", "3", "--degree", "x,y"]) == EXIT_USAGE
        capsys.readouterr()
        assert main(["nonsense"]) == EXIT_USAGE


class TestCharacters:
    def test_oracle_equivalence_records(self, capsys):
        code, lines = run(capsys, "characters", "--n", "3", "--degree", "1,1")
        assert code == EXIT_PASS
        records = [r for r in parsed(lines) if r.get("check")]
        assert all(r["status"] == "pass" for r in records)
        tangent = [r for r in records
                   if r["check"] == "tangent-character-oracle-equivalence"]
        assert len(tangent) == 2
        assert all(r["dimension"] == 4 for r in tangent)

    def test_zero_degree(self, capsys):
        code, lines = run(capsys, "characters", "--n", "2", "--degree", "0")
        assert code == EXIT_PASS
        tangent = [r for r in parsed(lines)
                   if r.get("check") == "tangent-character-oracle-equivalence"]
        assert tangent[0]["dimension"] == 0


class TestWhittakerCommand:
    def test_vectors_and_checks(self, capsys):
        code, lines = run(capsys, "whittaker", "--n", "2", "--degree", "2")
        assert code == EXIT_PASS
        records = parsed(lines)
        vectors = [r for r in records if "vector" in r]
        assert {r["vector"] for r in vectors} == {"structure-sheaf", "dual"}
        checks = [r for r in records if r.get("check")]
        assert checks and all(r["status"] == "pass" for r in checks)


class TestTodaCommand:
    def test_default_pairs(self, capsys):
        code, lines = run(capsys, "toda", "--n", "2", "--box", "2")
        assert code == EXIT_PASS
        checks = [r for r in parsed(lines) if r.get("check")]
        names = {r["check"] for r in checks}
        assert names == {"eigen-I-S", "eigen-J-G"}
        assert all(r["status"] == "pass" for r in checks)

    def test_explicit_mismatch_fails(self, capsys):
        code, lines = run(capsys, "toda", "--n", "2", "--box", "3",
                          "--series", "I", "--operator", "G")
        assert code == EXIT_FAIL
        checks = [r for r in parsed(lines) if r.get("check")]
        assert any(r["status"] == "fail" for r in checks)


class TestVerify:
    def test_full_suite_small(self, capsys):
        code, lines = run(capsys, "verify", "--n", "2", "--box", "2",
                          "--seed", "1")
        assert code == EXIT_PASS
        summary = parsed(lines)[-1]
        assert summary["complete"] is True
        assert summary["counts"].get("fail", 0) == 0
        assert summary["counts"]["pass"] > 20

    def test_summation_suite(self, capsys):
        code, lines = run(capsys, "verify", "--n", "4", "--box", "1",
                          "--suite", "summation", "--i", "3", "--seed", "7")
        assert code == EXIT_PASS
        checks = [r for r in parsed(lines) if r.get("check")]
        assert len(checks) == 1 and checks[0]["mode"] == "random"

    def test_unknown_suite_rejected(self, capsys):
        assert main(["verify", "--n", "2", "--box", "1",
                     "--suite", "bogus"]) == EXIT_USAGE

    def test_budget_exceeded(self, capsys, monkeypatch):
        monkeypatch.setenv("QTODA_TIME_BUDGET", "0.000001")
        code, lines = run(capsys, "verify", "--n", "3", "--box", "2",
                          "--suite", "relations")
        assert code == EXIT_BUDGET
        assert parsed(lines)[-1]["complete"] is False

    def test_bad_budget_value(self, capsys, monkeypatch):
        monkeypatch.setenv("QTODA_TIME_BUDGET", "soon")
        assert main(["verify", "--n", "2", "--box", "1"]) == EXIT_USAGE


class TestDeterminism:
    def test_byte_identical_reports(self, tmp_path):
        paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
        for p in paths:
            code = main(["verify", "--n", "2", "--box", "3", "--seed", "11",
                         "--out", str(p)])
            assert code == EXIT_PASS
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_out_file_matches_stdout(self, tmp_path, capsys):
        out = tmp_path / "r.jsonl"
        main(["toda", "--n", "2", "--box", "1", "--out", str(out)])
        capsys.readouterr()
        code = main(["toda", "--n", "2", "--box", "1"])
        stdout = capsys.readouterr().out
        assert out.read_text() == stdout
