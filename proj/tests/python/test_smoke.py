import math
import os

import numpy as np
import pytest

import paraflat


SEC7 = os.environ.get("PARAFLAT_DEMO_CONFIG", os.path.join(os.path.dirname(__file__), "..", "data", "piecewise_rod.json"))


@pytest.fixture(scope="module")
def problem():
    return paraflat.load_problem(SEC7)


def test_coefficients_and_interfaces(problem):
    assert problem.theta(0.5) == pytest.approx(2.0)
    assert problem.theta(0.25) == pytest.approx(1.25)
    assert problem.sigma(0.3) == pytest.approx(1.4)
    np.testing.assert_allclose(problem.interface_points, [0.3, 0.4, 0.5])
    assert problem.bc["alpha0"] == 1.0


def test_semidiscrete_constants(problem):
    sd = problem.semidiscrete(100)
    assert sd["q0"] == 0.0
    assert sd["b_n"] == pytest.approx(2.0)
    assert len(sd["diag"]) == 100
    assert len(sd["sub"]) == 99


def test_steady_state_residual(problem):
    n, f_ss = 200, 0.5
    v = problem.steady_state(n, f_ss)
    sd = problem.semidiscrete(n)
    res = sd["diag"] * v
    res[1:] += sd["sub"] * v[:-1]
    res[:-1] += sd["super"] * v[1:]
    res += sd["B"] * f_ss
    assert np.max(np.abs(res)) < 1e-8 * np.max(np.abs(sd["diag"]))


def test_flat_table_triangular(problem):
    tab = problem.flat_table(20, 10)
    d = tab["d"]
    for j in range(1, 21):
        for k in range(j, 11):
            assert d[j - 1, k] == 0.0
    assert tab["d"][0, 0] == pytest.approx(1.0)
    assert np.all(np.isfinite(tab["a"]))


def test_bump_properties():
    bump = paraflat.GevreyBump(1.5, 0.5)
    assert bump.psi(0.0) == 1.0
    assert bump.psi(0.5) == 0.0
    assert bump.psi(0.25) == pytest.approx(0.5, abs=1e-10)
    assert bump.psi0(0.25) == pytest.approx(math.exp(-16.0), rel=1e-12)
    jet = bump.psi_derivatives(0.0, 8)
    assert jet[0] == 1.0
    assert np.all(jet[1:] == 0.0)


def test_small_composite_plan(problem):
    plan = paraflat.plan_composite(
        problem, n=60, truncation=8, n_sim=120, dt=1e-3, tolerance=5e-2,
        out_samples=101, curves=[1, 5],
    )
    diag = plan["diagnostics"]
    assert diag["verified"]
    assert diag["terminal_error"] < 5e-2
    assert plan["value"][0] == pytest.approx(0.0, abs=1e-9)
    assert set(plan["truncations"].keys()) == {1, 5}


def test_roundtrip_serialization(problem):
    text = problem.serialize()
    back = paraflat.parse_problem(text)
    for x in np.linspace(0.0, 1.0, 97):
        assert back.theta(x) == problem.theta(x)
