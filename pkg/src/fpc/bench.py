"""Training-time benchmark over a grid of sample sizes and degrees."""

from __future__ import annotations

import csv
import statistics

import numpy as np

from .admm import AdmmParams
from .features import CenterScheme
from .model import evaluate, train
from .synthetic import NoiseSpec, generate_test, generate_toy

BENCH_COLUMNS = ["m", "s", "n", "rep", "train_time", "iterations", "test_acc"]


def run_bench(ms, ss, reps: int = 3, seed: int = 0, noise: NoiseSpec | None = None,
              params: AdmmParams | None = None, scheme=CenterScheme.FIRST_N,
              m_test: int = 1000) -> list[dict]:
    """Train on toy data for every ``(m, s, rep)`` and record wall time.

    Data depend only on ``(seed, m, rep)``, so accuracy columns are
    reproducible; only the timing columns vary between runs.
    """
    noise = NoiseSpec.parse("global:0.1") if noise is None else noise
    test = generate_test(m_test, seed=[seed, 2])
    rows = []
    for m in ms:
        for rep in range(reps):
            data = generate_toy(int(m), noise, seed=[seed, int(m), rep + 1])
            for s in ss:
                model = train(data, int(s), scheme, params, seed=[seed, rep])
                rows.append({
                    "m": int(m), "s": int(s), "n": model.n, "rep": rep,
                    "train_time": model.meta["train_time"],
                    "iterations": model.meta["iterations"],
                    "test_acc": evaluate(model, test).accuracy,
                })
    return rows


def median_times(rows, key="m") -> dict:
    """Median ``train_time`` per value of ``key``."""
    groups: dict = {}
    for row in rows:
        groups.setdefault(row[key], []).append(row["train_time"])
    return {k: statistics.median(v) for k, v in sorted(groups.items())}


def linear_fit_r2(x, y) -> tuple[float, float, float]:
    """Least-squares line ``y = a + b x``; returns ``(a, b, R^2)``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    b, a = np.polyfit(x, y, 1)
    resid = y - (a + b * x)
    total = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - float(resid @ resid) / float(total) if total > 0 else 1.0
    return float(a), float(b), r2


def write_bench_csv(rows, fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
