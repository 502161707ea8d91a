import io
import json
from pathlib import Path

import pytest

from relmax import schemas
from relmax.cli import run
from relmax.instances import three_shift_alternation

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def spec(tmp_path):
    path = tmp_path / "three.json"
    path.write_text(json.dumps(three_shift_alternation().to_json()))
    return str(path)


def call(*argv, env_threads=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_beta(spec):
    code, out, _ = call("beta", spec, "--h", "1/2")
    doc = json.loads(out)
    assert code == 0 and doc["beta"] == 0.5 and "measure" in doc
    schemas.validate_result("beta", doc)


def test_beta_infeasible(spec):
    code, out, err = call("beta", spec, "--h", "3/2")
    assert code == 2 and out == ""
    doc = json.loads(err)
    schemas.validate_error(doc)
    assert doc["code"] == "Infeasible"


def test_malformed(tmp_path, spec):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alphabet": 2, "transitions": [[1, 1], [1]]}))
    code, _, err = call("rotation-set", str(bad))
    assert code == 1 and "row 1" in json.loads(err)["message"]
    assert call("beta", spec, "--h", "1/0")[0] == 1
    assert call("beta", spec)[0] == 1
    assert call("rotation-set", str(tmp_path / "missing.json"))[0] == 1
    assert call("nonsense", spec)[0] == 1


def test_rotation_set_constant(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"alphabet": 2, "constraint": {"depth": 0, "dim": 1, "default": ["1/3"]}}))
    code, out, _ = call("rotation-set", str(path))
    assert code == 0 and json.loads(out)["vertices"] == [["1/3"]]


def test_beta_curve_csv(spec):
    code, out, _ = call("beta-curve", spec, "--grid", "11", "--output", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "h,beta" and len(lines) == 12
    for i, line in enumerate(lines[1:]):
        h, b = map(float, line.split(","))
        assert h == pytest.approx(i / 10) and b == pytest.approx(1 - i / 10, abs=1e-9)


def test_beta_curve_outside_points_empty(spec):
    code, out, _ = call("beta-curve", spec, "--lo=-1", "--hi", "1", "--grid", "3", "--output", "csv")
    assert out.splitlines()[1] == "-1.0,"


def test_alpha_curve_csv(spec):
    code, out, _ = call("alpha-curve", spec, "--lo=-3", "--hi", "1", "--grid", "5", "--output", "csv")
    rows = [tuple(map(float, l.split(","))) for l in out.strip().splitlines()[1:]]
    assert rows == [(-3.0, -3.0), (-2.0, -2.0), (-1.0, -1.0), (0.0, -1.0), (1.0, -1.0)]


def test_empty_grid(spec):
    assert call("alpha-curve", spec, "--grid", "0", "--output", "csv")[1] == "c,alpha\n"


def test_threads_do_not_change_bytes(spec, monkeypatch):
    one = call("beta-curve", spec, "--grid", "25", "--threads", "1")[1]
    four = call("beta-curve", spec, "--grid", "25", "--threads", "4")[1]
    monkeypatch.setenv("RELMAX_THREADS", "3")
    env = call("beta-curve", spec, "--grid", "25")[1]
    assert one == four == env


def test_check_is_deterministic(spec):
    a = call("check", spec, "--seed", "5")
    b = call("check", spec, "--seed", "5")
    assert a == b and a[0] == 0
    doc = json.loads(a[1])
    assert doc["passed"] and {f["family"] for f in doc["families"]} >= {"fenchel_inequality", "subaction_residuals"}


@pytest.mark.parametrize(
    "argv",
    [
        ("rotation-set",),
        ("alpha", "--c=-2"),
        ("subaction",),
        ("subaction", "--c", "1"),
        ("trajectory", "--c=-2", "--steps", "50", "--x0", "1"),
        ("periodic", "--r", "1/2", "--K", "6"),
        ("beta-curve", "--grid", "4"),
    ],
)
def test_json_round_trip(spec, argv):
    code, out, _ = call(argv[0], spec, *argv[1:])
    assert code == 0
    doc = json.loads(out)
    schemas.validate_result(argv[0], doc)
    assert json.loads(json.dumps(doc)) == doc


def test_periodic_infeasible(spec):
    code, _, err = call("periodic", spec, "--r", "2", "--K", "3")
    assert code == 2 and json.loads(err)["code"] == "InfeasibleR"


def test_bundled_specs_validate():
    import jsonschema

    for path in DATA.glob("*.json"):
        jsonschema.Draft202012Validator(schemas.SPEC_FILE).validate(json.loads(path.read_text()))
        assert call("check", str(path))[0] == 0
