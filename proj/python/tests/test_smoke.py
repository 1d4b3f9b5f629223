import math
from fractions import Fraction

import pytest

import wdvv


def test_normalize_and_zero():
    assert wdvv.normalize("(x + y)^2 - x^2 - y^2") == wdvv.normalize("2*x*y")
    assert wdvv.is_zero("sqrt(x)^2 - x")
    assert not wdvv.is_zero("log(x*y) - log(x)")
    assert wdvv.diff("x^3*y", "x") == wdvv.normalize("3*x^2*y")


def test_scaling_solution_residual():
    assert wdvv.is_zero(wdvv.ferapontov_residual("2*I*sqrt(2)/3*(x*y)^(3/2)"))
    assert wdvv.normalize(wdvv.ferapontov_residual("x^3")) in ("-1", "1")


def test_evaluate_exact_point():
    v = wdvv.evaluate("sqrt(x)*y", {"x": 4, "y": Fraction(1, 3)})
    assert abs(v - 2 / 3) < 1e-15
    with pytest.raises(wdvv.BranchError):
        wdvv.evaluate("log(x - 1)", {"x": Fraction(1, 2)})


def test_determining_degree_2():
    r = wdvv.determining(2)
    assert r["degree"] == 2
    assert len(r["solutions"]) > 0


def test_algebra_report():
    r = wdvv.run_suite("algebra")
    assert r["suite"] == "algebra"
    assert not wdvv.failures(r)
    ids = [c["id"] for c in r["checks"]]
    assert ids == sorted(ids)
    assert sum(i.startswith("algebra.commutator.") for i in ids) == 100


def test_filtered_table_report():
    r = wdvv.run_suite("tables", filter="tetra", jobs=2)
    rows = {c["id"].split(".")[1] for c in r["checks"] if c["id"].startswith("solutions.")}
    assert rows == {"tetra", "tetra_prime"}


def test_bad_inputs(tmp_path):
    with pytest.raises(ValueError):
        wdvv.run_suite("nonsense")
    (tmp_path / "algebra.fix").write_text('[commutator v1\nv1 = "0"\n')
    with pytest.raises(wdvv.FixtureError):
        wdvv.run_suite("algebra", fixtures=str(tmp_path))
