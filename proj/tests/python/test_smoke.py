"""Smoke tests for the python bindings: loading, querying, one-shot
analysis, serialization and error mapping."""

import json
import math
from pathlib import Path

import pytest

import yodo

DATA = Path(__file__).resolve().parents[1] / "data"

XY_TEXT = """\
network xy {
}
variable X {
  type discrete [ 2 ] { x0, x1 };
}
variable Y {
  type discrete [ 2 ] { y0, y1 };
}
probability ( X ) {
  table 0.6, 0.4;
}
probability ( Y | X ) {
  (x0) 0.8, 0.2;
  (x1) 0.1, 0.9;
}
"""


@pytest.fixture(scope="module")
def xy():
    return yodo.parse_bif(XY_TEXT)


def test_load_and_counts(xy):
    assert xy.name == "xy"
    assert xy.variable_count == 2
    assert xy.arc_count == 1
    assert xy.parameter_count == 6
    assert xy.variables == ["X", "Y"]
    assert xy.states("Y") == ["y0", "y1"]
    assert "Y=y1|X=x1" in xy.parameter_names()


def test_load_network_file():
    net = yodo.load_network(str(DATA / "xy.bif"))
    assert net.parameter_count == 6
    assert net.to_bif().startswith("network xy")


def test_probability(xy):
    assert xy.probability("Y=y1") == pytest.approx(0.48, abs=1e-12)
    assert xy.probability("X=x1", ["Y=y1"]) == pytest.approx(0.75, abs=1e-12)


def test_analyze_conditional(xy):
    rep = xy.analyze("X=x1", ["Y=y1"])
    assert rep.probability == pytest.approx(0.75, abs=1e-12)
    assert rep.query == "P(X=x1 | Y=y1)"
    assert rep.induced_width == 1
    assert rep.warnings == []
    assert len(rep.rows) == 6

    row = {r.parameter: r for r in rep.rows}["Y=y1|X=x1"]
    assert not row.degenerate
    assert row.value == pytest.approx(0.9)
    assert row.sens_value == pytest.approx(5.0 / 24.0, abs=1e-12)
    assert row.coefficients == pytest.approx([0.4, 0.0, 0.4, 0.12])
    assert row.vertex == pytest.approx(-0.3 + math.sqrt(0.3), abs=1e-12)
    assert row.proximity == pytest.approx(0.9 - (-0.3 + math.sqrt(0.3)), abs=1e-12)
    assert row.second_deriv == pytest.approx(-25.0 / 72.0, abs=1e-12)
    assert row.max_first_deriv == pytest.approx(10.0 / 3.0, abs=1e-12)
    assert row.monotonicity == "increasing"
    assert row.in_sensitivity_set


def test_analyze_marginal_rows_are_linear(xy):
    rep = xy.analyze("Y=y1")
    assert rep.probability == pytest.approx(0.48, abs=1e-12)
    for row in rep.rows:
        assert row.vertex is None
        assert row.proximity is None
        assert row.second_deriv == 0.0


def test_finite_difference_matches_analysis(xy):
    fd = xy.finite_difference("X=x1", ["Y=y1"], "Y=y1|X=x1")
    assert abs(fd) == pytest.approx(5.0 / 24.0, abs=1e-5)


def test_csv_shape_and_determinism(xy):
    rep = xy.analyze("X=x1", ["Y=y1"])
    csv = rep.to_csv()
    lines = csv.splitlines()
    assert lines[0] == (
        "parameter,value,sens_value,proximity,second_deriv,"
        "max_first_deriv,monotonicity,in_sensitivity_set"
    )
    assert len(lines) == 7
    assert any("0.208333" in line for line in lines)
    assert csv == xy.analyze("X=x1", ["Y=y1"]).to_csv()
    assert len(rep.to_csv(2).splitlines()) == 3


def test_json_output(xy):
    rows = json.loads(xy.analyze("X=x1", ["Y=y1"]).to_json())
    assert len(rows) == 6
    sens = [r["sens_value"] for r in rows]
    assert sens == sorted(sens, reverse=True)
    assert {r["parameter"] for r in rows} == set(xy.parameter_names())


def test_synthesize_deterministic():
    a = yodo.synthesize(kind="dag", nodes=30, seed=7)
    b = yodo.synthesize(kind="dag", nodes=30, seed=7)
    assert a.variable_count == 30
    assert a.to_bif() == b.to_bif()
    assert a.analyze(f"{a.variables[-1]}={a.states(a.variables[-1])[0]}").rows


def test_errors():
    with pytest.raises(RuntimeError):
        yodo.parse_bif("network broken {")
    with pytest.raises(ValueError):
        yodo.parse_bif(XY_TEXT).analyze("NOPE=1")
    with pytest.raises(ValueError):
        yodo.parse_bif(XY_TEXT).finite_difference("Y=y1", [], "NOPE=also")
    with pytest.raises(ValueError):
        yodo.synthesize(kind="mystery")
    with pytest.raises(RuntimeError):
        yodo.load_network("/nonexistent/net.bif")
