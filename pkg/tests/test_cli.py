import io
import json
import subprocess
import sys

import pytest

from whitney.cli import (
    EXIT_ASSUMPTION,
    EXIT_BUDGET,
    EXIT_GENERICITY,
    EXIT_INPUT,
    EXIT_OK,
    SCHEMA_VERSION,
    emit_json,
    parse_report,
    run,
)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p

    return _write


def test_immersion_json(problems_dir):
    code, out, err = call("immersion", problems_dir / "s2_twisted.imm", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["dim_A"] == 2
    assert rep["signature_phi_T"] == -2
    assert rep["intersection_number"] == -1
    assert rep["mod2"] is False
    assert rep["assumption_checks"] == {"finite_dim": True, "comaximal": True}
    assert rep["schema_version"] == SCHEMA_VERSION
    assert err == ""


def test_odd_m_with_given_u(problems_dir):
    code, out, _ = call("immersion", problems_dir / "s3_twisted.imm", "--u", "x3 - y3")
    assert code == EXIT_OK
    assert "intersection number I(g): 1 (mod 2)" in out
    code, out, _ = call("immersion", problems_dir / "s3_twisted.imm", "--u", "x3 - y3", "--json")
    rep = json.loads(out)
    assert rep["mod2"] is True and rep["intersection_number"] == 1
    assert rep["u_used"] == "x3 - y3"


def test_dumps(problems_dir):
    code, out, _ = call(
        "immersion", problems_dir / "s2_twisted.imm", "--json",
        "--dump-algebra", "--dump-bezoutian", "--dump-forms",
    )
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["algebra"]["basis"] == ["1", "y3"]
    assert rep["algebra"]["table"][1][1] == ["1", "0"]
    assert rep["bezoutian"] == [["-8", "0"], ["0", "-8"]]
    assert rep["forms"]["phi_T_weights"] == ["-1/8", "0"]
    assert rep["forms"]["phi_T"]["matrix"] == [["-1/8", "0"], ["0", "-1/8"]]
    code, out, _ = call("immersion", problems_dir / "s2_twisted.imm", "--dump-algebra", "--dump-forms")
    assert "e2*e2 = [1, 0]" in out
    assert "phi_T weights: [-1/8, 0]" in out


def test_verify_attaches_oracle(problems_dir):
    code, out, _ = call("immersion", problems_dir / "s2_twisted.imm", "--json", "--verify")
    oracle = json.loads(out)["oracle"]
    assert oracle["sum"] == -2 and len(oracle["zeros"]) == 2 and oracle["regular"]


def test_degree_command(write):
    path = write("cubic.deg", "# three real roots\nvars: x\nh: x^3 - x\n")
    code, out, _ = call("degree", path, "--json", "--u", "x - 1/2")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["kind"] == "degree"
    assert rep["degree_sum"] == 1
    assert rep["degree_sum_halfspace"] == 1
    assert rep["dim_A"] == 3
    code, out, _ = call("degree", path)
    assert "degree sum off V(I): 1" in out


def test_infinite_dimension_exit(write):
    path = write("bad.deg", "vars: x y\nh: x\nh: x*y\n")
    code, out, err = call("degree", path)
    assert code == EXIT_ASSUMPTION
    assert "finite_dim" in err
    code, out, err = call("degree", path, "--json")
    rep = json.loads(out)
    assert rep["assumption_checks"]["finite_dim"] is False
    assert rep["error"]["type"] == "InfiniteDimension"


def test_not_comaximal_exit(write):
    path = write("nc.deg", "vars: x y\nh: x^2\nh: y\ni: x\n")
    code, out, err = call("degree", path, "--json")
    assert code == EXIT_ASSUMPTION
    assert "comaximal" in err
    assert json.loads(out)["assumption_checks"] == {"finite_dim": True, "comaximal": False}


def test_genericity_exit(problems_dir):
    code, _, err = call("immersion", problems_dir / "s3_twisted.imm", "--retries", "0")
    assert code == EXIT_GENERICITY
    assert "genericity" in err


def test_input_errors(write, tmp_path):
    assert call("degree", tmp_path / "missing.deg")[0] == EXIT_INPUT
    path = write("p.deg", "vars: x y\nh: x\nh: y +* 2\n")
    code, _, err = call("degree", path)
    assert code == EXIT_INPUT and "line 3" in err
    path = write("g.imm", "vars: x1 x2 x3\nf: x1^2+x2^2+x3^2-1\ng: x1\ng: x2\ng: x3\n")
    code, _, err = call("immersion", path)
    assert code == EXIT_INPUT and "need 2m = 4 map components" in err
    path = write("kind.deg", "vars: x\nh: x\n")
    assert call("immersion", path)[0] == EXIT_INPUT
    path = write("u.deg", "vars: x\nh: x\n")
    assert call("degree", path, "--u", "2q")[0] == EXIT_INPUT


def test_time_budget(problems_dir):
    code, _, err = call("immersion", problems_dir / "s2_dense.imm", "--time-budget", "0.01")
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_json_round_trip_and_determinism(problems_dir):
    args = ("immersion", problems_dir / "s3_twisted.imm", "--json", "--seed", "11", "--dump-forms")
    _, first, _ = call(*args)
    _, second, _ = call(*args)
    assert first == second
    rep = parse_report(first)
    assert emit_json(rep) == first
    with pytest.raises(ValueError):
        parse_report(json.dumps({"kind": "degree"}))


def test_module_entry_point(problems_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "whitney", "immersion", str(problems_dir / "s2_twisted.imm"), "--json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["intersection_number"] == -1
