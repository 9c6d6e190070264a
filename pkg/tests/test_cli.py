import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from dunklpoly import Polynomial
from dunklpoly.cli import decode_polynomial, encode_polynomial, parse_polynomial, run
from dunklpoly.errors import PolynomialSyntaxError, UnknownVariable

from .conftest import polynomials, x

Z2 = ["--family", "Z2", "--dim", "2", "--kappa", "1/2,1/2"]


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_parse_examples():
    p = parse_polynomial("x1^2*x2 - 1/2*x3", 3)
    assert p == x(3, 1) ** 2 * x(3, 2) - Fraction(1, 2) * x(3, 3)
    assert len(p.terms) == 2
    assert parse_polynomial("3") == 3
    assert parse_polynomial("  3 * x1 ^ 2-x2 ", 2) == parse_polynomial("3*x1^2-x2", 2)
    assert parse_polynomial("-x1 + 2x1", 1) == x(1, 1)
    assert parse_polynomial("x1*x1*x2^0", 2) == x(2, 1) ** 2


def test_parse_dimension_inferred():
    assert parse_polynomial("x3").n == 3


@pytest.mark.parametrize("text,offset", [("x1 +", 4), ("x1 ++ x2", 4), ("3/0", 2), ("x1^", 3), ("y1", 0), ("", 0)])
def test_syntax_errors(text, offset):
    with pytest.raises(PolynomialSyntaxError) as exc:
        parse_polynomial(text, 2)
    assert exc.value.offset == offset
    assert exc.value.expected


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_polynomial("x3", 2)
    with pytest.raises((UnknownVariable, PolynomialSyntaxError)):
        parse_polynomial("x0", 2)


@settings(max_examples=80, deadline=None)
@given(polynomials(3, max_degree=5, max_terms=7))
def test_text_round_trip(p):
    assert parse_polynomial(str(p), 3) == p
    assert decode_polynomial(json.loads(json.dumps(encode_polynomial(p)))) == p


def test_laplacian_example():
    code, out = call("laplacian", *Z2, "--poly", "x1^2+x2^2")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1
    assert decode_polynomial(doc["result"]) == Polynomial.constant(2, 8)
    assert doc["result"]["terms"] == [{"exps": [0, 0], "num": 8, "den": 1}]


def test_apply_is_one_based():
    code, out = call("apply", *Z2, "--poly", "x2^3", "--j", "2")
    assert code == 0
    assert decode_polynomial(json.loads(out)["result"]) == 4 * x(2, 2) ** 2
    assert call("apply", *Z2, "--poly", "x2", "--j", "3")[0] == 2


def test_classify_example():
    code, out = call("classify", *Z2, "--poly", "x1*x2", "--p", "1", "--s", "2", "--samples", "50000")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "deg_eq_s"
    assert doc["report"]["consistent"] is True


def test_classify_is_reproducible(monkeypatch):
    argv = ["classify", *Z2, "--poly", "x1*x2 - x1 + 1", "--p", "1", "--s", "2", "--samples", "20000", "--seed", "5"]
    assert call(*argv)[1] == call(*argv)[1]
    monkeypatch.setenv("DUNKL_SEED", "5")
    assert call(*argv[:-2])[1] == call(*argv)[1]


def test_harmonic_hdecomp_almansi():
    doc = json.loads(call("harmonic", *Z2, "--poly", "x1^2+x2^2")[1])
    assert doc["h_harmonic"] is False and doc["polyharmonic_order"] == 2
    doc = json.loads(call("hdecomp", *Z2, "--poly", "x1^2")[1])
    assert decode_polynomial(doc["parts"][1]["h"]) == Fraction(1, 2)
    doc = json.loads(call("almansi", *Z2, "--poly", "x1^2*x2^2 + x1*x2")[1])
    assert doc["p"] == 3 and len(doc["phi"]) == 3


def test_mean_and_m1():
    doc = json.loads(call("mean", *Z2, "--poly", "x1*x2 + 3")[1])
    assert doc["mean_value"]["passed"] and doc["c"]["exact"] == "2"
    doc = json.loads(call("m1", *Z2, "--poly", "x1^2", "--radii", "1,2")[1])
    assert [row["value"]["exact"] for row in doc["m1"]] == ["1", "32"]


def test_validate(tmp_path):
    data = {"dimension": 1, "roots": [[1], [-1], [2], [-2]], "kappa": [1, 1, 1, 1]}
    path = tmp_path / "roots.json"
    path.write_text(json.dumps(data))
    code, out = call("validate", "--roots-json", str(path))
    doc = json.loads(out)
    assert code == 1 and doc["report"]["passed"] is False
    assert any(c["name"] == "reduced" and not c["passed"] for c in doc["report"]["checks"])
    assert call("validate", "--family", "B", "--dim", "3", "--kappa", "1/2,1")[0] == 0


def test_exit_codes(tmp_path):
    assert call("laplacian", *Z2)[0] == 2
    assert call("laplacian", "--poly", "x1")[0] == 2
    assert call("laplacian", *Z2, "--poly-file", str(tmp_path / "missing.txt"))[0] == 2
    code, out = call("laplacian", *Z2, "--poly", "x1 +")
    err = json.loads(out)["error"]
    assert code == 1 and err["offset"] == 4
    code, out = call("hdecomp", *Z2, "--poly", "x1 + x2^2")
    assert code == 1 and json.loads(out)["error"]["code"]
    assert call("laplacian", "--family", "Z2", "--dim", "2", "--kappa", "1,2,3", "--poly", "x1")[0] == 1
    with pytest.raises(SystemExit) as exc:
        run(["laplacian", "--family", "Q"], io.StringIO())
    assert exc.value.code == 2


def test_negative_kappa_gate():
    argv = ["laplacian", "--family", "Z2", "--dim", "1", "--kappa=-1/4", "--poly", "x1"]
    assert call(*argv)[0] == 1
    code, out = call(*argv, "--unchecked-kappa")
    doc = json.loads(out)
    assert code == 0 and doc["warnings"]


def test_poly_file_and_output(tmp_path):
    src = tmp_path / "f.txt"
    src.write_text("x1*x2\n")
    dest = tmp_path / "out.json"
    code, out = call("harmonic", *Z2, "--poly-file", str(src), "--output", str(dest))
    assert code == 0 and dest.read_text() == out
