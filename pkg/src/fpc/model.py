"""Training pipeline, prediction, evaluation and degree selection."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import admm
from .admm import AdmmParams, IterationTrace
from .dataset import Dataset, MinMaxScaling, check_labels, split_dataset
from .errors import DimensionMismatchError, EmptyDatasetError
from .features import CenterScheme, build_design_matrix, generate_centers, kernel_block

S_MAX_CAP = 10


@dataclass(frozen=True, eq=False)
class FpcModel:
    """Trained classifier ``sign(sum_j u_j (1 + eta_j . scale(x))^s)``.

    Centers live in the scaled input space.
    """

    s: int
    centers: np.ndarray
    coefficients: np.ndarray
    scaling: MinMaxScaling
    scheme: CenterScheme = CenterScheme.FIRST_N
    meta: dict = field(default_factory=dict)
    trace: IterationTrace | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.centers.shape[0] != self.coefficients.shape[0]:
            raise DimensionMismatchError("one coefficient per center is required")
        if self.scaling.d != self.centers.shape[1]:
            raise DimensionMismatchError("scaling and centers disagree on the input dimension")

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    @property
    def d(self) -> int:
        return self.centers.shape[1]

    def decision_function(self, X, block_rows: int = 1 << 14) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.d:
            raise DimensionMismatchError(f"model expects {self.d} features, got {X.shape[1]}")
        Z = self.scaling.transform(X)
        out = np.empty(Z.shape[0])
        for start in range(0, Z.shape[0], block_rows):
            Zb = Z[start:start + block_rows]
            out[start:start + block_rows] = kernel_block(Zb, self.centers, self.s) @ self.coefficients
        return out[0] if single else out

    def predict(self, X):
        f = self.decision_function(X)
        labels = np.where(f >= 0, 1, -1)
        return int(labels) if np.ndim(f) == 0 else labels


def _training_part(data: Dataset) -> Dataset:
    return data.subset("train") if data.has_split("train") else data


def train(data: Dataset, s: int, scheme=CenterScheme.FIRST_N, params: AdmmParams | None = None,
          seed=None, n: int | None = None, scale: bool = True, check_centers: bool = True) -> FpcModel:
    """Scale inputs, pick centers, build the design matrix and run ADMM.

    If ``data`` carries split tags only the ``train`` rows are used.
    """
    params = AdmmParams() if params is None else params
    data = _training_part(data)
    check_labels(data.y)
    scheme = CenterScheme.parse(scheme)
    t0 = time.perf_counter()
    scaling = MinMaxScaling.fit(data.X) if scale else MinMaxScaling.identity(data.d)
    Z = scaling.transform(data.X)
    centers = generate_centers(Z, s, scheme, seed=seed, n=n, check=check_centers)
    dm = build_design_matrix(Z, centers, s, params.alpha, params.beta)
    u, trace = admm.solve(dm, data.y, params)
    elapsed = time.perf_counter() - t0
    meta = {
        "m": data.m, "d": data.d, "n": centers.n, "seed": seed,
        "alpha": params.alpha, "beta": params.beta, "tol": params.tol,
        "max_iters": int(params.max_iters), "train_time": elapsed,
        **trace.summary(),
    }
    return FpcModel(int(s), centers.centers.copy(), u.copy(), scaling, scheme, meta, trace)


def predict(model: FpcModel, x):
    """Label(s) in {-1, +1} for one point or a batch; a zero score maps to +1."""
    return model.predict(x)


@dataclass
class EvalReport:
    accuracy: float
    train_time: float
    test_time: float
    sparsity: int
    n_test: int
    true_pos: int
    false_neg: int
    false_pos: int
    true_neg: int
    s: int | None = None

    @property
    def error(self) -> float:
        return 1.0 - self.accuracy / 100.0

    def row(self) -> dict:
        """Columns s, TestAcc, TrainTime, TestTime, sparsity for result tables."""
        return {"s": self.s, "TestAcc": self.accuracy, "TrainTime": self.train_time,
                "TestTime": self.test_time, "sparsity": self.sparsity}

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def evaluate(model: FpcModel, data: Dataset) -> EvalReport:
    if data.has_split("test"):
        data = data.subset("test")
    if data.m == 0:
        raise EmptyDatasetError("evaluation split is empty")
    check_labels(data.y)
    t0 = time.perf_counter()
    pred = model.predict(data.X)
    elapsed = time.perf_counter() - t0
    pos = data.y > 0
    tp = int(np.sum(pos & (pred > 0)))
    fn = int(np.sum(pos & (pred < 0)))
    fp = int(np.sum(~pos & (pred > 0)))
    tn = int(np.sum(~pos & (pred < 0)))
    return EvalReport(100.0 * (tp + tn) / data.m, float(model.meta.get("train_time", 0.0)),
                      elapsed, model.n, data.m, tp, fn, fp, tn, model.s)


def s_max(m: int, d: int, cap: int = S_MAX_CAP) -> int:
    """``min(ceil((m / ln m)^(1/d)), cap)``, never below 1."""
    if m < 2:
        return 1
    return max(1, min(math.ceil((m / math.log(m)) ** (1.0 / d)), cap))


def select_degree(data: Dataset, candidates=None, params: AdmmParams | None = None,
                  scheme=CenterScheme.FIRST_N, seed=None, n_grid=None,
                  fractions=(0.5, 0.25, 0.25)):
    """Pick the degree with the best validation accuracy.

    Uses the ``train``/``validation`` tags of ``data`` when present, otherwise
    a seeded split by ``fractions``. Default candidates are ``1..s_max``.
    With ``n_grid`` every degree is also tried at each explicit center count
    and keeps its best one (outer loop over s, inner over n). Ties go to the
    smaller degree, then the smaller n.

    Returns ``(best_s, reports)`` with one :class:`EvalReport` per degree;
    a report's ``sparsity`` is the center count it used.
    """
    if not (data.has_split("train") and data.has_split("validation")):
        data = split_dataset(data, fractions, seed)
    tr, val = data.subset("train"), data.subset("validation")
    if val.m == 0:
        raise EmptyDatasetError("validation split is empty")
    if candidates is None:
        candidates = range(1, s_max(tr.m, tr.d) + 1)
    candidates = sorted(set(int(s) for s in candidates))
    if not candidates:
        raise ValueError("no candidate degrees")
    reports = {}
    best_s, best_acc = None, -1.0
    for s in candidates:
        ns = [None] if n_grid is None else sorted(set(int(n) for n in n_grid))
        best_here = None
        for n in ns:
            model = train(tr, s, scheme, params, seed=seed, n=n)
            rep = evaluate(model, val)
            if best_here is None or rep.accuracy > best_here.accuracy:
                best_here = rep
        reports[s] = best_here
        if best_here.accuracy > best_acc:
            best_s, best_acc = s, best_here.accuracy
    return best_s, reports
