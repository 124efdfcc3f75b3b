import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import linalg
from scipy.optimize import linprog

from fpc.admm import AdmmParams, hinge_risk, solve
from fpc.errors import DimensionMismatchError, InstanceTooLargeError
from fpc.features import DesignMatrix, build_design_matrix
from fpc.oracles import (DualSolution, check_kkt, golden_section, prox_oracle, solve_dual_lp,
                         subgradient_baseline)
from fpc.verify import oracle_params, random_instance


def highs_dual(A, y):
    m, n = A.shape
    res = linprog(-np.ones(m), A_eq=(y[:, None] * A).T, b_eq=np.zeros(n),
                  bounds=[(0, 1.0 / m)] * m, method="highs")
    assert res.status == 0
    return -res.fun


def test_single_sample_lp():
    sol = solve_dual_lp(np.array([[1.0]]), np.array([1.0]))
    assert sol.value == 0.0
    np.testing.assert_array_equal(sol.a, [0.0])
    assert hinge_risk(np.array([[1.0]]), np.array([1.0]), np.array([1.0])) == 0.0


def test_symmetric_pair_lp():
    # y = (+1, -1), A = [[1], [-1]]: the constraint a1*1 + a2*1 = 0 forces a = 0,
    # and u = 1 separates both points
    A, y = np.array([[1.0], [-1.0]]), np.array([1.0, -1.0])
    sol = solve_dual_lp(A, y)
    assert sol.value == 0.0
    dm = build_design_matrix(np.array([[1.0], [-1.0]]), np.array([[0.0]]), 1)
    # constant feature only: both labels cannot be fit, optimum is 1 (u = 0)
    assert solve_dual_lp(dm, y).value == pytest.approx(1.0)
    params = oracle_params(2)
    u, _ = solve(build_design_matrix(np.array([[1.0], [-1.0]]), np.array([[0.0]]), 1,
                                     params.alpha, params.beta), y, params)
    assert hinge_risk(dm.A, y, u) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_simplex_matches_highs(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(2, 60)), int(rng.integers(1, 8))
    A = rng.normal(size=(m, n))
    y = rng.choice([-1.0, 1.0], m)
    sol = solve_dual_lp(A, y)
    assert sol.value == pytest.approx(highs_dual(A, y), abs=1e-9)
    # the simplex multipliers are an optimal primal point
    assert hinge_risk(A, y, sol.u) == pytest.approx(sol.value, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_weak_duality(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(30, 4))
    y = rng.choice([-1.0, 1.0], 30)
    value = solve_dual_lp(A, y).value
    for _ in range(20):
        assert value <= hinge_risk(A, y, rng.normal(scale=3.0, size=4)) + 1e-12


def test_lp_size_limit():
    with pytest.raises(InstanceTooLargeError):
        solve_dual_lp(np.ones((501, 1)), np.ones(501))


def test_lp_dimension_check():
    with pytest.raises(DimensionMismatchError):
        solve_dual_lp(np.ones((3, 2)), np.ones(2))


# -- KKT --------------------------------------------------------------------

def tight_pair(seed):
    rng = np.random.default_rng(seed)
    X, y, centers, s = random_instance(rng, m_range=(30, 80), n_max=10)
    params = oracle_params(len(y))
    dm = build_design_matrix(X, centers, s, params.alpha, params.beta)
    u, _ = solve(dm, y, params)
    return dm, y, u, solve_dual_lp(dm, y)


def test_kkt_at_optimum():
    dm, y, u, dual = tight_pair(0)
    rep = check_kkt(dm, y, u, dual)
    assert rep.passed(1e-5)
    assert max(rep.dual_feasibility, rep.stationarity, rep.slackness) < 1e-5


def test_kkt_detects_perturbation():
    dm, y, u, dual = tight_pair(1)
    v = u.copy()
    v[0] += 1.0
    rep = check_kkt(dm, y, v, dual)
    assert max(rep.slackness, abs(rep.duality_gap)) > 1e-3
    assert not rep.passed(1e-5)


def test_kkt_constructed_stationarity_violation():
    A = np.array([[1.0, 0.0], [2.0, 1.0], [0.5, -1.0], [1.0, 1.0]])
    y = np.array([1.0, 1.0, -1.0, 1.0])
    m = 4
    a = np.full(m, 1.0 / (2 * m))
    dual = DualSolution(a, a.copy(), float(a.sum()), np.zeros(2), 0)
    rep = check_kkt(A, y, np.zeros(2), dual)
    assert rep.stationarity == pytest.approx(np.abs(A.T @ (y * a)).max(), rel=0, abs=1e-15)
    assert rep.dual_feasibility == 0.0


def test_kkt_report_json():
    dm, y, u, dual = tight_pair(2)
    assert '"duality_gap"' in check_kkt(dm, y, u, dual).to_json()


# -- subgradient --------------------------------------------------------------

def test_subgradient_zero_region():
    A = np.array([[2.0], [3.0]])
    y = np.ones(2)
    u, trace = subgradient_baseline(A, y, 10, u0=[1.0])
    np.testing.assert_array_equal(u, [1.0])
    assert trace[-1] == 0.0


def test_subgradient_reaches_lp_and_admm_is_faster():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(40, 3))
    y = np.where(A[:, 0] + 0.5 * rng.normal(size=40) > 0, 1.0, -1.0)
    lp = solve_dual_lp(A, y).value
    _, trace = subgradient_baseline(A, y, 100_000)
    assert trace[-1] - lp <= 1e-3
    assert np.all(np.diff(trace) <= 0)
    assert trace[49] - lp > 1e-3
    # ADMM gets into the same 1e-3 band within 50 iterations
    params = oracle_params(40)
    dm = DesignMatrix(A, params.alpha, params.beta,
                      linalg.cho_factor(params.beta * A.T @ A + params.alpha * np.eye(3)))
    _, admm_trace = solve(dm, y, AdmmParams(params.alpha, params.beta, 1e-300, 50))
    assert min(admm_trace.objective) - lp <= 1e-3


def test_subgradient_rejects_bad_rule():
    with pytest.raises(ValueError):
        subgradient_baseline(np.ones((2, 1)), np.ones(2), 5, step="adagrad")


# -- scalar oracle --------------------------------------------------------------

def test_golden_section_quadratic():
    assert golden_section(lambda x: (x - 0.3) ** 2, -5.0, 5.0) == pytest.approx(0.3, abs=1e-7)


def test_prox_oracle_grid_agrees():
    z1, f1 = prox_oracle(1.0, 0.97, 10.0)
    z2, f2 = prox_oracle(1.0, 0.97, 10.0, grid_points=100_001)
    assert f2 <= f1 + 1e-12 and abs(z1 - 1.0) < 1e-8
