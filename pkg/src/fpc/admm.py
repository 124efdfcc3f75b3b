"""Proximal ADMM for hinge-loss empirical risk over a fixed design matrix.

Solves ``min_u (1/m) sum_i (1 - y_i (A u)_i)_+`` through the splitting
``v = A u`` with iterations

    u+ = (beta A^T A + alpha I)^{-1} (alpha u + beta A^T v - A^T w)
    v+ = Hinge_{m beta}(y, A u+ + w / beta)
    w+ = w + beta (A u+ - v+)

and stops on the H-weighted step ``alpha|du|^2 + beta|dv|^2 + |dw|^2/beta``
or an iteration cap, whichever comes first.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, NonFiniteError
from .features import DesignMatrix
from .prox import hinge_labels


@dataclass(frozen=True)
class AdmmParams:
    alpha: float = 1.0
    beta: float = 1.0
    tol: float = 5e-4
    max_iters: int = 5
    # compare the step against tol * (n + 2m) instead of tol
    normalize_tol: bool = False

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iters) < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class AdmmState:
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    k: int = 0

    @classmethod
    def initial(cls, y: np.ndarray, n: int) -> "AdmmState":
        """The default start ``(0, y, 0)``."""
        y = np.asarray(y, dtype=np.float64)
        return cls(np.zeros(n), y.copy(), np.zeros_like(y), 0)

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.u).all() and np.isfinite(self.v).all()
                    and np.isfinite(self.w).all())


class StopReason(str, enum.Enum):
    TOLERANCE = "tolerance"
    MAX_ITERS = "max_iters"


@dataclass
class IterationTrace:
    objective: list = field(default_factory=list)
    h_step_sq: list = field(default_factory=list)
    primal_residual: list = field(default_factory=list)
    stop_reason: StopReason | None = None
    state: AdmmState | None = None

    @property
    def iterations(self) -> int:
        return len(self.h_step_sq)

    @property
    def final_objective(self) -> float:
        return self.objective[-1] if self.objective else float("nan")

    def summary(self) -> dict:
        return {
            "iterations": self.iterations,
            "stop_reason": None if self.stop_reason is None else self.stop_reason.value,
            "objective": self.final_objective,
            "h_step_sq": self.h_step_sq[-1] if self.h_step_sq else None,
            "primal_residual": self.primal_residual[-1] if self.primal_residual else None,
        }

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iter", "objective", "h_step_sq", "primal_residual"])
        for k, row in enumerate(zip(self.objective, self.h_step_sq, self.primal_residual), 1):
            writer.writerow([k, *(repr(float(x)) for x in row)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def hinge_risk(A: np.ndarray, y: np.ndarray, u: np.ndarray) -> float:
    """Empirical hinge risk ``(1/m) sum (1 - y_i (A u)_i)_+``."""
    return float(np.mean(np.maximum(0.0, 1.0 - y * (A @ u))))


def update_u(state: AdmmState, dm: DesignMatrix, params: AdmmParams) -> np.ndarray:
    A = dm.A
    rhs = params.alpha * state.u + A.T @ (params.beta * state.v - state.w)
    return dm.solve_normal(rhs)


def update_v(state: AdmmState, dm: DesignMatrix, params: AdmmParams, y: np.ndarray,
             Au: np.ndarray | None = None) -> np.ndarray:
    """v-step; ``state.u`` must already hold this iteration's u."""
    if Au is None:
        Au = dm.A @ state.u
    m = Au.shape[0]
    return hinge_labels(y, Au + state.w / params.beta, m * params.beta)


def update_w(state: AdmmState, dm: DesignMatrix, params: AdmmParams,
             Au: np.ndarray | None = None) -> np.ndarray:
    """w-step; ``state.u`` and ``state.v`` must already be updated."""
    if Au is None:
        Au = dm.A @ state.u
    return state.w + params.beta * (Au - state.v)


def h_step_norm_sq(prev: AdmmState, nxt: AdmmState, params: AdmmParams) -> float:
    du = nxt.u - prev.u
    dv = nxt.v - prev.v
    dw = nxt.w - prev.w
    return float(params.alpha * (du @ du) + params.beta * (dv @ dv) + (dw @ dw) / params.beta)


def solve(dm: DesignMatrix, y, params: AdmmParams | None = None,
          init: AdmmState | None = None) -> tuple[np.ndarray, IterationTrace]:
    """Run ADMM from ``init`` (default ``(0, y, 0)``).

    ``dm`` must have been factorized with the same alpha and beta as
    ``params``. Returns the final ``u`` and the per-iteration trace; the
    trace also keeps the final ``(u, v, w)`` state.
    """
    params = AdmmParams() if params is None else params
    y = np.asarray(y, dtype=np.float64)
    m, n = dm.A.shape
    if y.shape != (m,):
        raise DimensionMismatchError(f"{y.shape[0]} labels for a design matrix with {m} rows")
    if dm.alpha != params.alpha or dm.beta != params.beta:
        raise ValueError("design matrix was factorized for different alpha/beta")
    state = AdmmState.initial(y, n) if init is None else init
    if state.u.shape != (n,) or state.v.shape != (m,) or state.w.shape != (m,):
        raise DimensionMismatchError("initial state does not match the design matrix")

    threshold = params.tol * (n + 2 * m) if params.normalize_tol else params.tol
    A = dm.A
    alpha, beta = params.alpha, params.beta
    gamma = m * beta
    u, v, w = state.u, state.v, state.w
    trace = IterationTrace()
    k = state.k
    # same arithmetic as update_u / update_v / update_w without the state objects
    for _ in range(int(params.max_iters)):
        u_new = dm.solve_normal(alpha * u + A.T @ (beta * v - w))
        Au = A @ u_new
        v_new = hinge_labels(y, Au + w / beta, gamma)
        w_new = w + beta * (Au - v_new)
        k += 1
        du, dv, dw = u_new - u, v_new - v, w_new - w
        step = float(alpha * (du @ du) + beta * (dv @ dv) + (dw @ dw) / beta)
        if not math.isfinite(step):
            raise NonFiniteError(f"non-finite iterate at k={k}", state=AdmmState(u, v, w, k - 1))
        u, v, w = u_new, v_new, w_new
        r = Au - v
        trace.h_step_sq.append(step)
        trace.objective.append(float(np.maximum(0.0, 1.0 - y * Au).mean()))
        trace.primal_residual.append(math.sqrt(r @ r))
        if step < threshold:
            trace.stop_reason = StopReason.TOLERANCE
            break
    else:
        trace.stop_reason = StopReason.MAX_ITERS
    state = AdmmState(u, v, w, k)
    trace.state = state
    return u, trace
