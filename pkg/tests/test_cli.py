import json

import pytest
from typer.testing import CliRunner

from clustertrop.cli import app

runner = CliRunner()

CUBIC_FAN = '{"rays": [{"u": [1, 0], "k": 2}, {"u": [0, 1], "k": 2}, {"u": [-1, -1], "k": 2}]}'
A2_FAN = '{"rays": [{"u": [1, 0], "k": 1}, {"u": [0, 1], "k": 1}, {"u": [-1, -1]}]}'
CUBIC_SEED = '{"skew": [[0, 1, -1], [-1, 0, 1], [1, -1, 0]], "d": [2, 2, 2]}'


def invoke(*args):
    result = runner.invoke(app, list(args))
    assert result.exit_code == 0, result.output
    return result.stdout


def test_classify_cubic():
    log = json.loads(invoke("classify", "--fan", CUBIC_FAN))
    assert log["class"] == "PositiveNonAcyclic(I0*)"
    assert log["kodaira"] == "I0*"
    assert log["charge"] == 6
    assert log["modular_group"]["label"] == "PSL2Z"


def test_classify_from_file(tmp_path):
    path = tmp_path / "a2.yaml"
    path.write_text("rays:\n  - {u: [1, 0], k: 1}\n  - {u: [0, 1], k: 1}\n  - {u: [-1, -1]}\n")
    out = tmp_path / "report.json"
    invoke("classify", "--fan", str(path), "--out", str(out))
    log = json.loads(out.read_text())
    assert log["class"] == "FiniteType(II)"
    assert log["modular_group"]["label"] == "Z5"


def test_charge():
    assert invoke("charge", "--fan", CUBIC_FAN).strip() == "6"
    assert invoke("charge", "--seed", CUBIC_SEED).strip() == "6"


@pytest.mark.parametrize(
    "args",
    [
        ["charge", "--fan", '{"rays": [{"u": [2, 0], "k": 1}]}'],
        ["charge", "--fan", "{rays: [1, 2"],
        ["charge"],
        ["charge", "--fan", A2_FAN, "--seed", CUBIC_SEED],
        ["mutate", "--seed", CUBIC_SEED, "--word", "0,x"],
        ["quiver", "--seed", CUBIC_SEED, "--format", "png"],
    ],
)
def test_input_errors_exit_with_one(args):
    assert runner.invoke(app, args).exit_code == 1


def test_mutate_twice_restores_the_seed():
    once = invoke("mutate", "--seed", CUBIC_SEED, "--word", "1")
    assert json.loads(once)["skew"] != json.loads(CUBIC_SEED)["skew"]
    twice = json.loads(invoke("mutate", "--seed", CUBIC_SEED, "--word", "1,1"))
    assert twice == {
        "skew": [["0", "1", "-1"], ["-1", "0", "1"], ["1", "-1", "0"]],
        "d": ["2", "2", "2"],
        "frozen": [],
    }


def test_frozen_mutation_is_an_input_error():
    assert runner.invoke(app, ["mutate", "--fan", A2_FAN, "--word", "2"]).exit_code == 1


def test_quiver_dot():
    dot = invoke("quiver", "--fan", A2_FAN)
    assert dot.startswith("digraph quiver {")
    assert '0 -> 1 [label="1"];' in dot
    assert "2 [label=\"2 (d=1)\", shape=box];" in dot


def test_monodromy():
    log = json.loads(invoke("monodromy", "--fan", A2_FAN))
    assert log["monodromy_inverse"] == [[1, 1], [-1, 0]]
    assert log["monodromy"] == [[0, -1], [1, 1]]
    assert log["kodaira"] == "II"


def test_develop_csv():
    rows = invoke("develop", "--fan", CUBIC_FAN, "--sheets", "1").strip().splitlines()
    assert rows == ["sheet,ray_index,x,y", "0,0,1,0", "0,1,0,1", "0,2,-1,1", "0,3,-2,1"]


def test_develop_svg_needs_out():
    assert runner.invoke(app, ["develop", "--fan", CUBIC_FAN, "--format", "svg"]).exit_code == 1


def test_trace_one_line():
    traces = json.loads(invoke("trace", "--fan", CUBIC_FAN, "--line", "[0, [1, 1], [1, 0]]"))
    assert len(traces) == 1
    assert traces[0]["verdict"] == "Escapes"
    assert traces[0]["wrap_count"] == 1


def test_qform():
    log = json.loads(invoke("qform", "--fan", CUBIC_FAN))
    assert log["type"] == "D4"
    assert log["rank"] == 4
    assert log["q_eff"] is None


def test_normalize():
    split = json.loads(invoke("normalize", "max-factor", "--fan", CUBIC_FAN))
    assert split["d"] == ["1"] * 6
    same = json.loads(invoke("normalize", "coprime", "--seed", CUBIC_SEED))
    assert same["d"] == ["2", "2", "2"]
    assert runner.invoke(app, ["normalize", "sideways", "--seed", CUBIC_SEED]).exit_code == 1


def test_modular_group():
    log = json.loads(invoke("modular-group", "--fan", A2_FAN))
    assert log["label"] == "Z5"
    assert log["conjecture"] == "verified"
    assert log["generators"]


def test_classify_toric_plane():
    fan = '{"rays": [{"u": [1, 0]}, {"u": [0, 1]}, {"u": [-1, -1]}]}'
    log = json.loads(invoke("classify", "--fan", fan))
    assert log["kodaira"] == "I0"
    assert log["charge"] == 0
    assert log["modular_group"]["label"] == "SL2Z"
