"""Acceptance criteria, run once at seed 42 through the verification harness.

Each test prints one line ``criterion N <name>: PASS|FAIL``; the lines are
also collected into the terminal summary.
"""
import json
import subprocess
import sys

import pytest

from schreierlab.config import Config
from schreierlab.report import canonical_dumps
from schreierlab.verify import ALL_NAMES, run_all

SEED = 42
FAST = ["membership_oracle", "family_structure", "averages_mass_bound", "canonical_tree_identity", "threshold_and_witness"]


@pytest.fixture(scope="module")
def suite():
    return run_all(Config(seed=SEED))


def _line(number, report):
    status = "PASS" if report.passed else "FAIL"
    extra = f" (status {report.status})" if report.status not in ("pass", "fail") else ""
    return f"criterion {number:2d} {report.check_name}: {status}{extra} [{report.runtime_ms} ms]"


@pytest.mark.parametrize("number,name", list(enumerate(ALL_NAMES, start=1)), ids=ALL_NAMES)
def test_criterion(suite, acceptance_lines, number, name):
    report = next(r for r in suite.reports if r.check_name == name)
    line = _line(number, report)
    acceptance_lines.append(line)
    print(line)
    assert report.passed, canonical_dumps(report.witnesses)[:2000]


def test_summary_covers_every_criterion(suite):
    assert [r.check_name for r in suite.reports] == ALL_NAMES
    labels = [label for label, _ in suite.summary.observed]
    assert labels == ALL_NAMES
    assert suite.summary.parameters["config"]["seed"] == SEED


def _cli(names):
    proc = subprocess.run(
        [sys.executable, "-m", "schreierlab.cli", "verify", "all", "--seed", str(SEED), "--json",
         "--only", ",".join(names)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_cli_runs_are_byte_identical_and_match_in_process(suite):
    names = FAST + ["determinism"]
    first, second = _cli(names), _cli(names)
    assert first["canonical_sha256"] == second["canonical_sha256"]
    in_process = {r.check_name: r.digest() for r in suite.reports}
    for rep in first["summary"]["observed"]:
        if rep["label"] != "determinism":
            assert rep["value"]["sha256"] == in_process[rep["label"]], rep["label"]
