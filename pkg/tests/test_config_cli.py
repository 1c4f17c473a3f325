import json
import subprocess
import sys
from fractions import Fraction as Q

import pytest

from schreierlab.cli import run
from schreierlab.config import Budget, Config, load_config
from schreierlab.errors import ConfigError

VEC = '{"coords":[{"i":1,"num":1,"den":1},{"i":2,"num":1,"den":1},{"i":3,"num":1,"den":1}]}'


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_missing_config_gives_defaults(tmp_path):
    assert load_config(tmp_path / "absent.yaml") == Config()
    assert load_config(None) == Config()


def test_config_values(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("seed: 42\ntolerance: 1e-12\nbudget:\n  entry_cap: 500\n")
    cfg = load_config(path)
    assert cfg.seed == 42 and cfg.budget.tolerance == Q(1, 10**12) and cfg.budget.entry_cap == 500


@pytest.mark.parametrize("text,field", [
    ("budget: {entry_cap: -1}", "budget.entry_cap"),
    ("tolerance: 2", "tolerance"),
    ("seed: -4", "seed"),
    ("bogus: 1", "bogus"),
    ("ordinal_ceiling: 'w+w'", "ordinal_ceiling"),
])
def test_config_errors_name_the_field(tmp_path, text, field):
    path = tmp_path / "c.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError, match=field):
        load_config(path)


def test_cli_examples(capsys):
    code, out = call(capsys, "norm", "baernstein", "--alpha", "1", "--p", "2", "--vec", VEC, "--json")
    data = json.loads(out)
    assert code == 0 and {"label": "pth_power", "value": "5"} in data["observed"]
    code, out = call(capsys, "schreier", "check", "--alpha", "1", "--set", "{1,2}", "--json")
    assert code == 0 and {"label": "member", "value": False} in json.loads(out)["observed"]
    code, out = call(capsys, "szlenk", "threshold", "--rho", "1", "--p", "2")
    assert code == 0 and "threshold: 6401" in out


def test_cli_embeds_config_and_flags_override(tmp_path, capsys):
    path = tmp_path / "c.yaml"
    path.write_text("seed: 5\nbudget: {coefficient_samples: 7}\n")
    code, out = call(capsys, "szlenk", "verify", "--alpha", "1", "--N", "4", "--p", "2",
                     "--config", str(path), "--seed", "9", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["config"]["seed"] == 9 and data["config"]["coefficient_samples"] == 7
    assert data["parameters"]["seed"] == 9


def test_cli_exit_codes(tmp_path, capsys):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "schreier", "check", "--alpha", "w+w", "--set", "{1}")[0] == 2
    assert call(capsys, "norm", "schreier", "--alpha", "1", "--vec", "{not json")[0] == 2
    code, out = call(capsys, "averages", "generate", "--alpha", "1", "--count", "4", "--json")
    assert code == 3 and json.loads(out)["error"]["kind"] == "budget"
    blocks = '[{"coords":[{"i":2,"num":1},{"i":3,"num":1}]},{"coords":[{"i":4,"num":1},{"i":5,"num":1}]}]'
    code, _ = call(capsys, "dominate", "--blocks", blocks, "--upper-norm", "schreier:1",
                   "--lower-norm", "lp:1", "--C", "1/2")
    assert code == 1
    path = tmp_path / "bad.yaml"
    path.write_text("budget: {nope: 1}")
    code, out = call(capsys, "szlenk", "threshold", "--rho", "1", "--p", "2", "--config", str(path), "--json")
    assert code == 2 and "budget.nope" in json.loads(out)["error"]["message"]


def test_cli_vec_from_file(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text(VEC)
    code, out = call(capsys, "norm", "schreier", "--alpha", "1", "--vec", f"@{path}")
    assert code == 0 and "norm: 2" in out


def test_cli_subcommands_smoke(capsys):
    for argv in (
        ["schreier", "enumerate", "--alpha", "2", "--N", "4"],
        ["schreier", "audit", "--alpha", "w", "--N", "8"],
        ["averages", "generate", "--alpha", "1", "--count", "2"],
        ["averages", "mass-bound", "--alpha", "1", "--count", "2"],
        ["norm", "composite", "--inner", "schreier:1", "--outer", "lp:2", "--vec", VEC],
        ["szlenk", "branches", "--alpha", "1", "--N", "3"],
        ["szlenk", "witness", "--alpha", "1", "--p", "2", "--i1", "2"],
    ):
        assert call(capsys, *argv)[0] == 0, argv


def test_reports_are_byte_identical(capsys):
    argv = ["szlenk", "verify", "--alpha", "2", "--N", "5", "--p", "2", "--seed", "42", "--json"]
    a = json.loads(call(capsys, *argv)[1])
    b = json.loads(call(capsys, *argv)[1])
    a.pop("runtime_ms"), b.pop("runtime_ms")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "schreierlab.cli", "szlenk", "threshold", "--rho", "1", "--p", "2", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["observed"][0]["value"] == 6401


def test_reports_never_contain_floats(capsys):
    code, out = call(capsys, "norm", "baernstein", "--alpha", "1", "--p", "3/2", "--vec", VEC, "--json")
    def walk(v):
        assert not isinstance(v, float)
        if isinstance(v, dict):
            for w in v.values():
                walk(w)
        elif isinstance(v, list):
            for w in v:
                walk(w)
    walk(json.loads(out))
    assert Budget().tolerance == Q(1, 10**12)
