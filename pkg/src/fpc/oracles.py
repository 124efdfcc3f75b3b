"""Independent reference solvers used to validate the ADMM path.

* :func:`solve_dual_lp` solves the dual linear program of the hinge-risk
  problem with a small bounded-variable simplex method.
* :func:`check_kkt` measures how far a primal/dual pair is from optimal.
* :func:`subgradient_baseline` is plain subgradient descent on the primal.
* :func:`prox_oracle` minimizes the scalar hinge-prox objective numerically.

None of these touch the ADMM code; they are deliberately simple and slow.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionMismatchError, FpcError, InstanceTooLargeError
from .prox import hinge_objective

LP_MAX_ROWS = 500


@dataclass(frozen=True, eq=False)
class DualSolution:
    """Multipliers of ``max 1^T a  s.t.  a + c = 1/m,  A^T Diag(y) a = 0,  a, c >= 0``.

    ``u`` holds the simplex multipliers of the equality rows, which form an
    optimal primal coefficient vector.
    """

    a: np.ndarray
    c: np.ndarray
    value: float
    u: np.ndarray
    iterations: int


def _labels_matrix(A, y):
    A = np.asarray(A, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if A.ndim != 2 or y.shape != (A.shape[0],):
        raise DimensionMismatchError(f"A of shape {A.shape} with {y.shape} labels")
    return A, y


def _bounded_simplex(E, f, cost, lower, upper, basis, max_iter, tol=1e-10):
    """Maximize ``cost @ x`` s.t. ``E x = f``, ``lower <= x <= upper``.

    Revised simplex with nonbasic variables at either bound. The basis is
    refactorized from scratch every pivot (the row count is tiny). Dantzig
    pricing switches to Bland's rule after a run of degenerate pivots.
    """
    rows, cols = E.shape
    basis = list(basis)
    at_upper = np.zeros(cols, dtype=bool)
    is_basic = np.zeros(cols, dtype=bool)
    is_basic[basis] = True
    fixed = upper - lower <= 0
    degenerate_run = 0
    for it in range(max_iter):
        B = E[:, basis]
        x = np.where(at_upper, upper, lower).astype(float)
        x[basis] = 0.0
        xB = np.linalg.solve(B, f - E @ x)
        x[basis] = xB
        pi = np.linalg.solve(B.T, cost[basis])
        d = cost - E.T @ pi
        scale = 1.0 + np.abs(pi).max() * np.abs(E).max()
        eps = tol * scale
        improving = ~is_basic & ~fixed & (((~at_upper) & (d > eps)) | (at_upper & (d < -eps)))
        candidates = np.flatnonzero(improving)
        if candidates.size == 0:
            return x, pi, it
        bland = degenerate_run > 50
        j = int(candidates[0]) if bland else int(candidates[np.argmax(np.abs(d[candidates]))])
        sigma = -1.0 if at_upper[j] else 1.0
        col = np.linalg.solve(B, E[:, j])
        delta = -sigma * col
        piv_tol = 1e-11 * max(1.0, np.abs(col).max())
        lo_b, up_b = lower[basis], upper[basis]
        ratios = np.full(rows, np.inf)
        dec = delta < -piv_tol
        inc = delta > piv_tol
        ratios[dec] = (xB[dec] - lo_b[dec]) / -delta[dec]
        ratios[inc] = (up_b[inc] - xB[inc]) / delta[inc]
        ratios = np.maximum(ratios, 0.0)
        t_flip = upper[j] - lower[j]
        t_min = ratios.min() if rows else np.inf
        if not np.isfinite(min(t_min, t_flip)):
            raise FpcError("dual LP is unbounded; the box constraints make this impossible")
        if t_flip <= t_min:
            at_upper[j] = not at_upper[j]
            degenerate_run = 0
            continue
        ties = np.flatnonzero(ratios <= t_min + 1e-14 * max(1.0, t_min))
        if bland:
            r = int(ties[np.argmin(np.asarray(basis)[ties])])
        else:
            r = int(ties[np.argmax(np.abs(delta[ties]))])
        leaving = basis[r]
        at_upper[leaving] = bool(inc[r])
        is_basic[leaving] = False
        is_basic[j] = True
        at_upper[j] = False
        basis[r] = j
        degenerate_run = degenerate_run + 1 if t_min <= 1e-15 else 0
    raise FpcError(f"simplex did not terminate in {max_iter} pivots")


def solve_dual_lp(A, y, max_rows: int = LP_MAX_ROWS) -> DualSolution:
    """Solve the dual LP exactly (up to rounding) by the simplex method.

    ``A`` may be a design matrix object or a plain array. Eliminating
    ``c = 1/m - a`` leaves ``n`` equality rows ``(Diag(y) A)^T a = 0`` over the
    box ``0 <= a <= 1/m``; one artificial variable fixed at zero per row
    gives a feasible starting basis at ``a = 0``.
    """
    A = getattr(A, "A", A)
    A, y = _labels_matrix(A, y)
    m, n = A.shape
    if m > max_rows:
        raise InstanceTooLargeError(f"dual LP oracle is limited to m <= {max_rows}, got m={m}")
    if m == 0:
        raise ValueError("empty instance")
    Bt = (y[:, None] * A).T
    E = np.hstack([Bt, np.eye(n)])
    cost = np.concatenate([np.ones(m), np.zeros(n)])
    lower = np.zeros(m + n)
    upper = np.concatenate([np.full(m, 1.0 / m), np.zeros(n)])
    x, pi, iters = _bounded_simplex(E, np.zeros(n), cost, lower, upper,
                                    basis=range(m, m + n), max_iter=50 * (m + n) + 1000)
    a = np.clip(x[:m], 0.0, 1.0 / m)
    if np.abs(x[m:]).max(initial=0.0) > 1e-9:
        raise FpcError("artificial variables left the zero bound; LP reported infeasible")
    c = 1.0 / m - a
    return DualSolution(a, c, float(a.sum()), pi, iters)


@dataclass
class KktReport:
    """Maximum violations of the optimality conditions.

    ``stationarity`` is ``|A^T Diag(y) a|_inf`` and ``slackness`` the larger
    of ``max_i |a_i (1 - xi_i - y_i (Au)_i)|`` and ``max_i |c_i xi_i|``.
    Both scale with the size of ``A``, so :meth:`passed` compares them with
    ``tol * max(1, |A|_inf)``.
    """

    dual_feasibility: float
    stationarity: float
    slackness: float
    primal_objective: float
    dual_objective: float
    duality_gap: float
    a_scale: float

    def passed(self, tol: float) -> bool:
        scaled = tol * max(1.0, self.a_scale)
        return (self.dual_feasibility <= tol and self.stationarity <= scaled
                and self.slackness <= scaled and abs(self.duality_gap) <= tol)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def check_kkt(A, y, u, dual: DualSolution) -> KktReport:
    A = getattr(A, "A", A)
    A, y = _labels_matrix(A, y)
    m, n = A.shape
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (n,) or dual.a.shape != (m,) or dual.c.shape != (m,):
        raise DimensionMismatchError("KKT check: dimensions of u, a, c do not match A")
    a, c = dual.a, dual.c
    margin = y * (A @ u)
    xi = np.maximum(0.0, 1.0 - margin)
    feas = max(float(np.max(-a, initial=0.0)), float(np.max(-c, initial=0.0)),
               float(np.abs(a + c - 1.0 / m).max()))
    stat = float(np.abs(A.T @ (y * a)).max(initial=0.0))
    slack = max(float(np.abs(a * (1.0 - xi - margin)).max()), float(np.abs(c * xi).max()))
    primal = float(xi.mean())
    dual_value = float(a.sum())
    return KktReport(feas, stat, slack, primal, dual_value, primal - dual_value,
                     float(np.abs(A).max(initial=0.0)))


def subgradient_baseline(A, y, iters: int, step: str = "sqrt", step0: float | None = None,
                         u0=None):
    """Subgradient descent on the hinge risk; returns best iterate and trace.

    ``step`` is ``"constant"`` (length ``step0``) or ``"sqrt"``
    (``step0 / sqrt(k)``). The default ``step0`` is ``1 / |A|_2^2`` times m,
    a scale under which one step moves every margin by O(1).
    The trace lists the best objective seen after each iteration.
    """
    A = getattr(A, "A", A)
    A, y = _labels_matrix(A, y)
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if step not in ("constant", "sqrt"):
        raise ValueError(f"unknown step rule {step!r}")
    m, n = A.shape
    if step0 is None:
        step0 = m / max(np.linalg.norm(A, 2) ** 2, 1e-300)
    u = np.zeros(n) if u0 is None else np.array(u0, dtype=np.float64)
    B = y[:, None] * A
    margin = B @ u
    best_u, best = u.copy(), float(np.mean(np.maximum(0.0, 1.0 - margin)))
    trace = []
    for k in range(1, iters + 1):
        active = margin < 1.0
        g = -B[active].sum(axis=0) / m
        t = step0 if step == "constant" else step0 / math.sqrt(k)
        u = u - t * g
        margin = B @ u
        obj = float(np.mean(np.maximum(0.0, 1.0 - margin)))
        if obj < best:
            best, best_u = obj, u.copy()
        trace.append(best)
    return best_u, np.array(trace)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(fun, lo: float, hi: float, xtol: float = 1e-13, max_iter: int = 400) -> float:
    """Minimizer of a unimodal ``fun`` on ``[lo, hi]`` by golden-section search."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(max_iter):
        if hi - lo <= xtol * max(1.0, abs(lo), abs(hi)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = fun(x2)
    return x1 if f1 <= f2 else x2


def prox_bracket(a: float, b: float, gamma: float) -> tuple[float, float]:
    """Interval certain to contain the hinge-prox minimizer.

    The minimizer lies between ``b`` and ``b + a/gamma`` (the loss slope is
    at most ``|a|``), widened by a margin.
    """
    r = 10.0 * abs(a) / gamma + 10.0
    return b - r, b + r


def prox_oracle(a: float, b: float, gamma: float, grid_points: int = 0) -> tuple[float, float]:
    """Numerical minimizer and minimum of ``max(0, 1 - a z) + gamma/2 (z - b)^2``.

    Golden-section search on :func:`prox_bracket`, optionally cross-checked
    against a dense grid; the better of the two is returned.
    """
    lo, hi = prox_bracket(a, b, gamma)
    obj = lambda z: float(hinge_objective(z, a, b, gamma))
    z = golden_section(obj, lo, hi)
    best_z, best = z, obj(z)
    if grid_points:
        grid = np.linspace(lo, hi, grid_points)
        vals = hinge_objective(grid, a, b, gamma)
        i = int(np.argmin(vals))
        if vals[i] < best:
            best_z, best = float(grid[i]), float(vals[i])
    return best_z, best
