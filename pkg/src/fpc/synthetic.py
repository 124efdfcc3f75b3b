"""Two-dimensional toy data with a nonlinear Bayes boundary.

Inputs are uniform on the unit square; a point is labelled +1 when it lies on
or above the curve ``h``. Training labels can be corrupted by three noise
topologies: flips spread over the whole square, flips restricted to a band
around the boundary, and flips restricted to the region outside that band.
Band membership uses the vertical distance ``|x2 - h(x1)|``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset


class NoiseKind(str, enum.Enum):
    BAND_NEAR_BAYES = "band"
    FAR_FROM_BAYES = "far"
    GLOBAL_UNIFORM = "global"


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind = NoiseKind.GLOBAL_UNIFORM
    ratio: float = 0.0
    width: float | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError(f"noise ratio must lie in [0, 1], got {self.ratio}")
        if self.kind is not NoiseKind.GLOBAL_UNIFORM:
            if self.width is None or not 0.0 < self.width <= 1.0:
                raise ValueError(f"{self.kind.value} noise needs a width in (0, 1], got {self.width}")

    @classmethod
    def parse(cls, text: str, seed: int | None = None) -> "NoiseSpec":
        """``none``, ``global:R``, ``band:WIDTH:R`` or ``far:WIDTH:R``."""
        parts = text.strip().lower().split(":")
        if parts[0] in ("none", "clean", ""):
            return cls(NoiseKind.GLOBAL_UNIFORM, 0.0, seed=seed)
        kind = NoiseKind(parts[0])
        try:
            if kind is NoiseKind.GLOBAL_UNIFORM and len(parts) == 2:
                return cls(kind, float(parts[1]), seed=seed)
            if kind is not NoiseKind.GLOBAL_UNIFORM and len(parts) == 3:
                return cls(kind, float(parts[2]), float(parts[1]), seed=seed)
        except ValueError:
            pass
        raise ValueError(f"cannot parse noise specification {text!r}")


def bayes_h(t):
    """Boundary ``((1 - 2t)_+^5 (32 t^2 + 10 t + 1) + 1) / 2`` on [0, 1]."""
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any((t_arr < 0) | (t_arr > 1)) or np.any(np.isnan(t_arr)):
        raise ValueError("bayes_h is defined on [0, 1] only")
    out = (np.maximum(0.0, 1.0 - 2.0 * t_arr) ** 5 * (32.0 * t_arr**2 + 10.0 * t_arr + 1.0) + 1.0) / 2.0
    return float(out) if np.ndim(t) == 0 else out


def bayes_labels(X: np.ndarray) -> np.ndarray:
    return np.where(X[:, 1] >= bayes_h(X[:, 0]), 1.0, -1.0)


def _flip_count(count: int, ratio: float) -> int:
    # guard against 0.29 * 100 == 28.999999999999996
    return int(math.floor(count * ratio + 1e-9))


def generate_toy(m: int, noise: NoiseSpec | None = None, seed=None) -> Dataset:
    """Sample ``m`` labelled points and apply ``noise`` to the labels.

    ``info`` records the flipped row indices, the number of rows in the
    noise region, the in-region ratio and the resulting global noise level.
    """
    if m < 1:
        raise ValueError(f"sample size must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    X = rng.random((m, 2))
    clean = bayes_labels(X)
    y = clean.copy()
    info = {"flipped": np.array([], dtype=np.intp), "region_size": m, "ratio": 0.0, "noise_level": 0.0}
    if noise is not None and noise.ratio > 0:
        noise_rng = rng if noise.seed is None else np.random.default_rng(noise.seed)
        if noise.kind is NoiseKind.GLOBAL_UNIFORM:
            region = np.arange(m)
        else:
            dist = np.abs(X[:, 1] - bayes_h(X[:, 0]))
            inside = dist <= noise.width
            region = np.flatnonzero(inside if noise.kind is NoiseKind.BAND_NEAR_BAYES else ~inside)
        k = _flip_count(region.size, noise.ratio)
        flipped = np.sort(noise_rng.choice(region, size=k, replace=False)) if k else region[:0]
        y[flipped] = -y[flipped]
        info = {"flipped": flipped, "region_size": int(region.size), "ratio": noise.ratio,
                "noise_level": k / m, "kind": noise.kind.value, "width": noise.width}
    info["clean_labels"] = clean
    return Dataset(X, y, info=info)


def generate_test(m: int, seed=None) -> Dataset:
    """Clean sample from the same distribution."""
    return generate_toy(m, None, seed)

