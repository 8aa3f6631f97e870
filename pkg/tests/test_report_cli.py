import json
from fractions import Fraction

import pytest
import sympy as sp

from kaehler_blowup_lab._exact import GaussianRational, format_gaussian, parse_gaussian
from kaehler_blowup_lab.cli import main
from kaehler_blowup_lab.report import (
    SUITES,
    AnalysisError,
    Scenario,
    ScenarioError,
    analyze,
    format_table,
    verify_suite,
)

SPORADIC_GROUP = {"circle_weights": [[-2, 1, 1]], "permutations": [[0, 2, 1]]}
TORUS_P2 = {"circle_weights": [[1, 0, 0], [0, 1, 0]]}

TORUS_DOC = {"base": "projective", "m": 2, "group": TORUS_P2,
             "points": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "weights": ["1", "1", "1"]}
SPORADIC_DOC = {"base": "projective", "m": 2, "group": SPORADIC_GROUP,
                "points": [[0, 1, 1], [0, 1, "1+2i"], [0, "1+2i", 1]], "weights": ["?", "?", "?"]}
FOUR_DOC = {"base": "projective", "m": 2, "group": {"circle_weights": [[1, 0, 0]]},
            "points": [[0, 1, 0], [0, 1, "1+1i"], [0, 1, "-2-1i"], [0, 1, 1]], "weights": ["?"] * 4}


# ---------------------------------------------------------------------------
# independent exact checker working from report JSON only


def _sym(x):
    return sp.Rational(x) if not isinstance(x, list) else sp.Rational(x[0]) + sp.I * sp.Rational(x[1])


def _matrix(doc):
    return sp.Matrix([[_sym(x) for x in row] for row in doc])


def _vector(point):
    zs = [parse_gaussian(str(x)) for x in point]
    return sp.Matrix([sp.Rational(z.real) + sp.I * sp.Rational(z.imag) for z in zs])


def _potential(A, z):
    m = A.shape[0] - 1
    q = (z.H * A * z)[0] / (z.H * z)[0]
    return sp.nsimplify(sp.simplify(q - A.trace() / (m + 1)))


def _field_rows(A, z):
    q = (z.H * A * z)[0]
    n2 = (z.H * z)[0]
    v = (A * z) * n2 - z * q
    rows = []
    for c in v:
        c = sp.expand(c)
        rows += [sp.re(c), sp.im(c)]
    return rows


def _recheck(report):
    basis = [_matrix(B) for B in report["algebra"]["h_doubleprime_basis"]]
    pts = [_vector(p) for p in report["scenario"]["points"]]
    M = sp.Matrix([[_potential(B, z) for B in basis] for z in pts])
    ci = report["conditions"]["i"]
    if ci["weights_status"] in ("given", "completed"):
        w = sp.Matrix([[sp.Rational(a) for a in ci["weights"]]])
        assert all(a > 0 for a in w)
        assert w * M == sp.zeros(1, len(basis))
    if ci["certificate"] is not None:
        Y = sum((sp.Rational(c) * B for c, B in zip(ci["certificate"], basis)), sp.zeros(*basis[0].shape))
        vals = [_potential(Y, z) for z in pts]
        assert vals == [sp.Rational(v) for v in ci["certificate_values"]]
        assert all(v >= 0 for v in vals) and any(v > 0 for v in vals)
    ii = report["conditions"]["ii"]
    if ii["holds"] and basis:
        assert M.extract(ii["minor_rows"], list(range(len(basis)))).det() == sp.Rational(ii["minor"]) != 0
    elif not ii["holds"]:
        assert M * sp.Matrix([sp.Rational(k) for k in ii["kernel"]]) == sp.zeros(len(pts), 1)
    iii = report["conditions"]["iii"]
    cols = [sum((_field_rows(B, z) for z in pts), []) for B in basis]
    F = sp.Matrix(cols).T if basis else sp.zeros(0, 0)
    if iii["holds"] and basis:
        assert F.extract(iii["minor_rows"], list(range(len(basis)))).det() == sp.Rational(iii["minor"]) != 0
    elif not iii["holds"]:
        assert F * sp.Matrix([sp.Rational(k) for k in iii["kernel"]]) == sp.zeros(F.rows, 1)


# ---------------------------------------------------------------------------


@pytest.mark.parametrize("text,value", [("1/1+0i", GaussianRational(1, 0)), ("-i", GaussianRational(0, -1)),
                                        ("2/3i", GaussianRational(0, Fraction(2, 3))), ("-2-1i", GaussianRational(-2, -1)),
                                        ("3", GaussianRational(3, 0)), ("1-1/2i", GaussianRational(1, Fraction(-1, 2)))])
def test_gaussian_strings(text, value):
    assert parse_gaussian(text) == value
    assert parse_gaussian(format_gaussian(value)) == value


@pytest.mark.parametrize("bad", ["", "1+", "a+bi", "1/0"])
def test_gaussian_string_errors(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_gaussian(bad)


def test_torus_equal_weights():
    rep = analyze(Scenario.from_json(TORUS_DOC))
    d = rep.data
    assert rep.exit_code == 0 and d["holds"]
    assert d["algebra"]["dim_h_doubleprime"] == 0
    assert d["csc"]["nonconstant"] is False
    assert d["futaki"]["vanishes"] is True
    assert "eps0 not computed" in " ".join(d["notes"])
    _recheck(json.loads(rep.to_json_text()))


def test_sporadic_positive_product_infeasible():
    rep = analyze(Scenario.from_json(SPORADIC_DOC))
    ci = rep.data["conditions"]["i"]
    assert rep.exit_code == 2 and ci["status"] == "infeasible"
    assert ci["certificate"] is not None
    _recheck(json.loads(rep.to_json_text()))


def test_sporadic_negative_product_feasible():
    doc = dict(SPORADIC_DOC, points=[[0, 1, 1], [0, 1, "-1+2i"], [0, "-1+2i", 1]])
    rep = analyze(Scenario.from_json(doc))
    assert rep.exit_code == 0
    _recheck(json.loads(rep.to_json_text()))


def test_four_points_cone():
    rep = analyze(Scenario.from_json(FOUR_DOC))
    ci = rep.data["conditions"]["i"]
    assert ci["integer_ray"] == [5, 3, 6, 2]
    assert ci["weights_status"] == "completed"
    _recheck(json.loads(rep.to_json_text()))
    partial = analyze(Scenario.from_json(dict(FOUR_DOC, weights=["5", "3", "?", "?"])))
    assert partial.data["conditions"]["i"]["weights"] == [5, 3, 6, 2]
    bad = analyze(Scenario.from_json(dict(FOUR_DOC, weights=["1", "3", "5", "2"])))
    assert bad.exit_code == 2 and bad.data["conditions"]["i"]["weights_status"] == "incompatible"


def test_condition_iii_failure_has_kernel():
    # trivial group on P^1, one point: h'' = su(2) has fields vanishing at the point
    doc = {"base": "projective", "m": 1, "points": [[1, 0]], "weights": ["1"]}
    rep = analyze(Scenario.from_json(doc))
    assert rep.exit_code == 2
    assert not rep.data["conditions"]["iii"]["holds"]
    assert rep.data["conditions"]["i"]["weights_status"] == "incompatible"
    _recheck(json.loads(rep.to_json_text()))


def test_reports_byte_identical():
    for doc in (TORUS_DOC, SPORADIC_DOC, FOUR_DOC):
        a = analyze(Scenario.from_json(doc)).to_json_text()
        b = analyze(Scenario.from_json(json.loads(json.dumps(doc)))).to_json_text()
        assert a == b


def test_scenario_roundtrip():
    s = Scenario.from_json(FOUR_DOC)
    assert Scenario.from_json(s.to_json()) == s


@pytest.mark.parametrize("doc", [
    {"base": "projective", "m": 2, "points": [[1, 0, 0], [1, 0, 0]]},
    {"base": "projective", "m": 2, "points": [[1, 0, 0]], "weights": ["1", "2"]},
    {"base": "projective", "m": 2, "points": [[1, 0, 0]], "weights": ["-1"]},
    {"base": "projective", "m": 2, "points": [[1, 0]]},
    {"base": "projective", "m": 2, "points": [], "epsilon_samples": ["2"]},
    {"base": "sphere"},
    {"base": "toric", "m": 2, "points": [7], "weights": ["1/8"]},
    {"base": "ruled", "class": {"alpha": "1"}},
])
def test_scenario_validation(doc):
    with pytest.raises(ScenarioError):
        Scenario.from_json(doc)


def test_toric_and_ruled_bases():
    rep = analyze(Scenario.from_json({"base": "toric", "m": 2, "points": [0, 1, 2], "weights": ["1/8"] * 3}))
    assert rep.data["futaki"]["vanishes"] and rep.exit_code == 0
    rep = analyze(Scenario.from_json({"base": "toric", "m": 2, "points": [0, 1], "weights": ["1/8", "1/8"]}))
    assert not rep.data["futaki"]["vanishes"]
    rep = analyze(Scenario.from_json({"base": "ruled", "class": {"alpha": "1", "beta": "1/2", "lambda": "1/5"}}))
    assert "delpezzo_class" in rep.data


def test_analysis_error_carries_stage():
    err = AnalysisError("moment_at", ValueError("boom"))
    assert "moment_at" in str(err)


def test_suites_pass_except_known_four_point_failure():
    for name in SUITES:
        if name == "burns-simanca":
            continue  # exercised by the acceptance suite
        res = verify_suite(name)
        table = format_table(res)
        assert name in table
        failing = [c.name for c in res.checks if not c.passed]
        if name == "sporadic":
            # the reference four-point weights lie outside the cone; reported, not hidden
            assert failing == ["four points: contains (1,3,5,2)"]
            assert not res.passed
        else:
            assert failing == [] and res.passed
    with pytest.raises(ScenarioError):
        verify_suite("nope")


# ---------------------------------------------------------------------------
# command line


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_cli_analyze_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["analyze", _write(tmp_path, "t.json", TORUS_DOC), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["holds"] is True
    assert main(["analyze", _write(tmp_path, "s.json", SPORADIC_DOC)]) == 2
    assert json.loads(capsys.readouterr().out)["conditions"]["i"]["status"] == "infeasible"
    assert main(["analyze", _write(tmp_path, "bad.json", {"base": "projective", "m": 2, "points": [[1, 0]]})]) == 1
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["analyze", str(tmp_path / "junk.json")]) == 1
    assert main(["analyze", str(tmp_path / "missing.json")]) == 1


def test_cli_polytope(tmp_path, capsys):
    assert main(["polytope", "futaki", "--projective", "2", "--chop", "1:1/8", "--chop", "2:1/8", "--chop", "3:1/8"]) == 0
    assert json.loads(capsys.readouterr().out)["futaki_vanishes"] is True
    assert main(["polytope", "chop", "--projective", "2", "--vertex", "0", "--weight", "1/8"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["volume"] == "63/128" and not d["futaki_vanishes"]
    assert main(["polytope", "chop", "--projective", "2"]) == 1
    assert main(["polytope", "futaki"]) == 1


def test_cli_classes(capsys):
    assert main(["classes", "cremona", "--class", '{"h":"1","e":["1/5","1/7","2/9"]}']) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["square"] == d["image_square"]
    assert main(["classes", "family", "--weights", "1,2", "--m", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["drift_exponent"] == "2/5"
    assert main(["classes", "cremona", "--class", '{"h":"1","e":["1"]}']) == 1


def test_cli_biharmonic(tmp_path, capsys):
    csv_path = tmp_path / "d.csv"
    assert main(["biharmonic", "match", "--m", "3", "--lmax", "12", "--csv", str(csv_path)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["all_nonzero"] and "growth_exponent" in d
    assert csv_path.read_text().startswith("m,l,variant,det")
    assert main(["biharmonic", "match", "--m", "2", "--lmax", "2", "--variant", "constrained"]) == 2
    capsys.readouterr()
    doc = {"m": 2, "lmax": 1, "h": {"0": ["1"], "1": ["0", "2", "0", "0"]}, "k": {"0": ["8"], "1": ["1/3", "0", "0", "0"]}}
    assert main(["biharmonic", "extend", _write(tmp_path, "h.json", doc)]) == 2
    d = json.loads(capsys.readouterr().out)
    assert d["exterior"]["error"] == "exterior_constraint" and "modes" in d["interior"]
    assert main(["biharmonic", "extend"]) == 1


def test_cli_verify(capsys):
    assert main(["verify", "biharmonic"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["verify", "sporadic"]) == 2
    assert "FAIL" in capsys.readouterr().out
