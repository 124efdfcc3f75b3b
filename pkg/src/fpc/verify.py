"""Self-check suite: prox oracle, step monotonicity, duality gap and KKT.

Every check builds its own random instances from a seed, so a report is
reproducible from ``(seed, sizes)``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .admm import AdmmParams, hinge_risk, solve
from .features import build_design_matrix, generate_centers
from .oracles import check_kkt, prox_oracle, solve_dual_lp
from .prox import hinge_objective, hinge_scalar


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=float)


def random_instance(rng, m_range=(20, 200), n_max=20, degrees=(1, 2), d_range=(1, 4),
                    label_noise=0.3, n_min=1):
    """Small classification instance with polynomial features.

    Inputs are uniform on [-1, 1]^d, labels follow a noisy random linear
    rule, and centers are a random subsample. Returns ``(X, y, centers, s)``
    with between ``n_min`` and ``n_max`` centers.
    """
    while True:
        m = int(rng.integers(m_range[0], m_range[1] + 1))
        d = int(rng.integers(d_range[0], d_range[1] + 1))
        s = int(rng.choice(degrees))
        X = rng.uniform(-1.0, 1.0, (m, d))
        w = rng.normal(size=d)
        y = np.where(X @ w + label_noise * rng.normal(size=m) >= 0, 1.0, -1.0)
        if abs(y.sum()) == m:
            continue
        centers = generate_centers(X, s, "subsample", seed=int(rng.integers(2**31)))
        if n_min <= centers.n <= n_max:
            return X, y, centers, s


def oracle_params(m: int) -> AdmmParams:
    """Step parameters under which small instances converge to tol 1e-12 quickly.

    The loss carries a 1/m factor, so a penalty of order 1/m balances it.
    """
    return AdmmParams(alpha=1e-5, beta=1.0 / m, tol=1e-12, max_iters=200_000)


def check_prox_oracle(samples: int = 10_000, seed=0, prox=hinge_scalar, atol: float = 1e-9,
                      grid_points: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst, violations = -np.inf, 0
    for _ in range(samples):
        a = rng.uniform(-5, 5)
        b = rng.uniform(-5, 5)
        gamma = 10.0 ** rng.uniform(-3, 3)
        z = prox(a, b, gamma)
        _, best = prox_oracle(a, b, gamma, grid_points=grid_points)
        excess = float(hinge_objective(z, a, b, gamma)) - best
        worst = max(worst, excess)
        violations += excess > atol
    return CheckResult("prox_oracle", violations == 0,
                       {"samples": samples, "violations": int(violations), "worst_excess": worst,
                        "atol": atol})


def check_monotonicity(instances: int = 20, iters: int = 200, seed=0,
                       slack: float = 1e-12) -> CheckResult:
    """The H-weighted step never grows, over a grid of alpha and beta."""
    rng = np.random.default_rng(seed)
    alphas, betas = (1e-3, 1.0, 10.0), (1e-2, 1.0, 1e2)
    violations, worst, shortest = 0, -np.inf, iters
    for i in range(instances):
        X, y, centers, s = random_instance(rng, m_range=(20, 500), n_max=30, n_min=3,
                                           degrees=(1, 2, 3))
        params = AdmmParams(alphas[i % 3], betas[(i // 3) % 3], tol=np.finfo(float).tiny,
                            max_iters=iters)
        dm = build_design_matrix(X, centers, s, params.alpha, params.beta)
        _, trace = solve(dm, y, params)
        steps = np.asarray(trace.h_step_sq)
        # an exactly stationary iterate is the only way to stop early here
        shortest = min(shortest, trace.iterations)
        growth = np.diff(steps)
        if growth.size:
            worst = max(worst, float(growth.max()))
            violations += int(np.sum(growth > slack))
    return CheckResult("monotonicity", violations == 0,
                       {"instances": instances, "iterations": iters, "min_iterations": shortest,
                        "violations": violations, "max_growth": worst, "slack": slack})


def check_duality(instances: int = 5, seed=0, gap_tol: float = 1e-6,
                  kkt_tol: float = 1e-5) -> list[CheckResult]:
    """ADMM at tol 1e-12 against the dual LP: gap and KKT residuals."""
    rng = np.random.default_rng(seed)
    gaps, kkt_fail, rows = [], 0, []
    for _ in range(instances):
        X, y, centers, s = random_instance(rng)
        params = oracle_params(len(y))
        dm = build_design_matrix(X, centers, s, params.alpha, params.beta)
        u, trace = solve(dm, y, params)
        dual = solve_dual_lp(dm, y)
        gap = abs(hinge_risk(dm.A, y, u) - dual.value)
        gaps.append(gap)
        report = check_kkt(dm, y, u, dual)
        kkt_fail += not report.passed(kkt_tol)
        rows.append({"m": len(y), "n": centers.n, "iterations": trace.iterations,
                     "stop_reason": trace.stop_reason.value, "gap": gap, "kkt": report.to_dict()})
    return [
        CheckResult("duality_gap", max(gaps) <= gap_tol,
                    {"instances": instances, "max_gap": max(gaps), "gap_tol": gap_tol,
                     "over_tol": sum(g > gap_tol for g in gaps),
                     "capped": sum(r["stop_reason"] == "max_iters" for r in rows)}),
        CheckResult("kkt", kkt_fail == 0,
                    {"instances": instances, "failures": kkt_fail, "tol": kkt_tol, "runs": rows}),
    ]


def run_suite(seed=0, prox_samples: int = 10_000, mono_instances: int = 20,
              dual_instances: int = 5, prox=hinge_scalar) -> SuiteReport:
    checks = [
        check_prox_oracle(prox_samples, seed, prox=prox),
        check_monotonicity(mono_instances, seed=seed),
        *check_duality(dual_instances, seed=seed),
    ]
    return SuiteReport(checks)


def broken_hinge(a: float, b: float, gamma: float) -> float:
    """Hinge prox with the kink branch dropped, for fault-injection runs."""
    a, b = float(a), float(b)
    if a != 0 and a * b <= 1.0 - a * a / gamma:
        return b + a / gamma
    return b
