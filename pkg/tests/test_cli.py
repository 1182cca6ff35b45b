# tests/test_cli.py
import json

import pytest

from semiinv.cli import run
from semiinv.forms import p_form
from semiinv.polycore import format_poly, parse_poly
from semiinv.ubasis import u_poly


def _run(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr()


def test_dim(capsys):
    code, out = _run(capsys, "dim", "--d", "4", "--g", "6")
    assert code == 0
    assert out.out.strip() == "3"
    code, out = _run(capsys, "dim", "--d", "4", "--g", "6", "--format", "json")
    assert json.loads(out.out) == {"d": 4, "g": 6, "dim": 3}


def test_basis_text(capsys):
    code, out = _run(capsys, "basis", "--jordan", "4:L")
    assert code == 0
    lines = out.out.strip().splitlines()
    assert [line.split(" ")[0] for line in lines] == ["p1", "p2", "p3"]
    assert lines[2].startswith("p3 [L^3]: ")
    assert parse_poly(lines[2].split("]: ", 1)[1]) == p_form(3).poly


def test_basis_certify_json(capsys):
    code, out = _run(
        capsys, "basis", "--jordan", "3:L1,2:L2", "--certify", "--format", "json"
    )
    assert code == 0
    data = json.loads(out.out)
    assert [f["label"] for f in data["forms"]] == ["p1_1", "p2_1", "p1_2", "r1_2"]
    assert data["jacobian_rank"] == 4


def test_check_semi_invariant(capsys):
    p2 = "2*a2*a0 - a1^2 + a1*a0"
    code, out = _run(capsys, "check", "--jordan", "3:L", "--poly", p2)
    assert code == 0
    assert out.out.strip() == "semi-invariant, multiplier L^2"


def test_check_reports_domain_error(capsys):
    code, out = _run(capsys, "check", "--jordan", "3:L", "--poly", "a1")
    assert code == 1
    assert out.out.startswith("error: NotSemiInvariant:")
    code, out = _run(capsys, "check", "--jordan", "3:L", "--poly", "a1", "--format", "json")
    assert code == 1
    error = json.loads(out.out)
    assert error["error"] == "NotSemiInvariant"
    assert error["message"] and isinstance(error["witness"], dict)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nosuchcommand"],
        ["check", "--poly", "a0"],
        ["check", "--jordan", "3:L", "--poly", "a0 +"],
        ["check", "--jordan", "3:Q/2", "--poly", "a0"],
        ["apply", "--op", "Delta", "--poly", "a0"],
        ["decompose", "--u-family", "2", "--poly", "a0", "--denominators", "1"],
        ["u", "--index", "0,-1"],
        ["dim", "--d", "0", "--g", "1"],
        ["dim", "--d", "2", "--g", "1", "--format", "xml"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out = _run(capsys, *argv)
    assert code == 2
    assert out.out == ""


def test_basis_of_larger_blocks(capsys):
    code, _ = _run(capsys, "basis", "--jordan", "4:L")
    assert code == 0
    code, out = _run(capsys, "basis", "--jordan", "6:L", "--format", "json")
    assert code == 0
    forms = json.loads(out.out)["forms"]
    assert [f["label"] for f in forms] == ["p1", "p2", "p3", "p4", "p5"]
    assert parse_poly(forms[4]["poly"]["poly"]) == p_form(5).poly


def test_decompose_json(capsys, quartic):
    poly = f"--poly={format_poly(quartic)}"
    code, out = _run(capsys, "decompose", "--jordan", "4:L", poly, "--format", "json")
    assert code == 0
    data = json.loads(out.out)
    terms = {tuple(t["index"]): t["coeff"] for t in data["terms"]}
    assert terms == {(0, 3, 0): "1", (1, 1, 1): "-1", (0, 0, 2): "1"}
    assert data["denom_exps"] == [2]
    assert parse_poly(data["denominator"]) == parse_poly("a0^2")


def test_decompose_with_fixed_denominators(capsys, quartic):
    poly = f"--poly={format_poly(quartic)}"
    code, out = _run(capsys, "decompose", "--jordan", "4:L", poly, "--denominators", "0")
    assert code == 1
    assert out.out.startswith("error: NoSolution:")


def test_complete_substitution_by_index(capsys):
    code, out = _run(capsys, "complete", "--method", "subst", "--uindex", "0,1")
    assert code == 0
    assert parse_poly(out.out.strip()) == -p_form(2).poly


def test_complete_stroh_json(capsys):
    code, out = _run(
        capsys, "complete", "--method", "stroh", "--uindex", "0,1", "--format", "json"
    )
    assert code == 0
    data = json.loads(out.out)
    assert data["method"] == "stroh"
    assert parse_poly(data["result"]["poly"]) == -p_form(2).poly


def test_apply(capsys):
    code, out = _run(capsys, "apply", "--op", "Delta", "--n", "3", "--poly", "a0")
    assert code == 0
    assert parse_poly(out.out.strip()) == parse_poly("3*a1")
    code, out = _run(capsys, "apply", "--op", "D", "--poly", "a1^2")
    assert parse_poly(out.out.strip()) == parse_poly("2*a1*a0")


def test_u_with_recursion_checks(capsys):
    code, out = _run(capsys, "u", "--index", "1,0", "--check-recursion")
    assert code == 0
    lines = out.out.strip().splitlines()
    assert parse_poly(lines[0]) == u_poly((1, 0))
    assert lines[1:] == ["trailing-zero: holds", "trailing-one: holds"]


def test_ubasis(capsys):
    code, out = _run(capsys, "ubasis", "--d", "2", "--g", "2")
    assert code == 0
    label, poly = out.out.strip().split(" = ")
    assert label == "U_{0,1}"
    assert parse_poly(poly) == u_poly((0, 1))


def test_covariant(capsys):
    code, out = _run(
        capsys, "covariant", "--n", "2", "--source", "a1^2 - 2*a0*a2", "--format", "json"
    )
    assert code == 0
    data = json.loads(out.out)
    assert data["order"] == 0
    assert data["passed"] is True
    assert len(data["coeffs"]) == 1


def test_covariant_negative_order(capsys):
    code, out = _run(capsys, "covariant", "--n", "1", "--source", "a1^2 - 2*a0*a2")
    assert code == 1
    assert out.out.startswith("error: NegativeOrder:")
