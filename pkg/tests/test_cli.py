import json
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest

from transop.cli import RunOptions, ScenarioError, main, parse_scenario, run

SCENARIOS = resources.files("transop") / "scenarios"


def load(name):
    return parse_scenario((SCENARIOS / f"{name}.json").read_text())


def test_tau_sys2(capsys):
    code = main(["tau", "--scenario", str(SCENARIOS / "sys2_4_1.json")])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["legendre"]["tau"] == pytest.approx(np.log(2), abs=1e-9)
    assert out["direct"]["tau"] == pytest.approx(np.log(2), abs=1e-9)


def test_est_sys2_passes():
    code, text = run("est", load("sys2_1_1"))
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "n,set_size,log_norm,rate,bound"
    assert len(lines) == 41


def test_props_off_support_fails():
    code, text = run("props", load("off_support_sys2"))
    assert code == 1
    assert json.loads(text)["checks"]["homological_identity"] is False


def test_off_support_rejected_elsewhere():
    code, text = run("tau", load("off_support_sys2"))
    assert code == 2


@pytest.mark.parametrize("name", ["sys2_1_1", "sys2_4_1", "sys2_2_3", "sysi3", "sysd4"])
def test_props_pass_on_fixtures(name):
    code, text = run("props", load(name))
    assert code == 0, text


def test_lambda_and_gibbs():
    code, text = run("lambda", load("sys2_2_3"))
    out = json.loads(text)
    assert code == 0
    assert out["lambda"] == pytest.approx(0.5 * (np.log(6) + 0.3 - 0.7), abs=1e-10)
    code, text = run("gibbs", load("sys2_2_3"))
    assert code == 0
    assert json.loads(text)["measure"] == pytest.approx([0.5, 0.5], abs=1e-12)


def test_gibbs_reducible_is_check_failure():
    code, text = run("gibbs", load("sysi3"))
    assert code == 1
    assert json.loads(text)["error"] == "ReducibleOperatorError"


def test_duality_subcommand():
    code, text = run("duality", load("sys2_2_3"))
    assert code == 0
    assert json.loads(text)["pass"] is True


def test_nilpotent_scenario():
    code, text = run("lambda", load("nilp2"))
    assert json.loads(text)["lambda"] == "-inf"
    code, text = run("tau", load("nilp2"))
    out = json.loads(text)
    assert out["legendre"]["tau"] == "-inf" and out["direct"]["tau"] == "-inf"
    code, text = run("est", load("nilp2"))
    assert code in (0, 1)
    assert "-inf" in text


def test_csv_output_flag():
    code, text = run("lambda", load("sys2_1_1"), RunOptions(output="csv"))
    assert code == 0
    assert text.splitlines()[:2] == ["key,value", "lambda,0.0"]


@pytest.mark.parametrize("sub", ["lambda", "tau", "est", "props", "duality"])
def test_byte_identical_runs(sub):
    a = run(sub, load("sys2_2_3"))
    b = run(sub, load("sys2_2_3"))
    assert a == b


@pytest.mark.parametrize("name", ["sys2_1_1", "sys2_2_3", "sysi3", "nilp2", "off_support_sys2"])
def test_round_trip(name):
    sc = load(name)
    again = parse_scenario(sc.to_json())
    assert again.to_json() == sc.to_json()


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"alpha": [1, 0], "operator": []}, "n"),
        ({"n": 2, "alpha": [1], "operator": []}, "alpha"),
        ({"n": 2, "alpha": [1, 0], "operator": [[0, 0, 1.0]]}, "operator[0]"),
        ({"n": 2, "alpha": [1, 0], "operator": [[0, 1, -1.0]]}, "operator[0]"),
        ({"n": 2, "alpha": [1, 0], "operator": [], "measure": [0.5, 0.4]}, "measure"),
        ({"n": 2, "alpha": [1, 0], "operator": [], "potential": [0.0]}, "potential"),
        ({"n": 2, "alpha": [1, 0], "operator": [], "colour": 1}, "colour"),
        ({"n": 2, "alpha": [1, 0], "operator": [], "eps": -1}, "eps"),
    ],
)
def test_parse_errors_name_the_field(doc, field):
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(json.dumps(doc))
    assert field in str(exc.value)


def test_malformed_json():
    with pytest.raises(ScenarioError):
        parse_scenario("{not json")


def test_main_input_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"n": 2, "alpha": [1, 0], "operator": [[0, 0, 1.0]]}))
    assert main(["lambda", "--scenario", str(p)]) == 2
    assert "operator[0]" in capsys.readouterr().err
    assert main(["lambda", "--scenario", str(tmp_path / "missing.json")]) == 2


def test_main_overrides(capsys):
    code = main(["est", "--scenario", str(SCENARIOS / "sys2_1_1.json"), "--eps", "0.5", "--output", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["eps"] == 0.5


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "transop", "lambda", "--scenario", str(SCENARIOS / "sys2_4_1.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambda"] == pytest.approx(np.log(2), abs=1e-12)
