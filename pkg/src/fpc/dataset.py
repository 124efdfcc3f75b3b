"""Labelled datasets, split tags and min-max input scaling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, EmptyDatasetError, InvalidLabelError

SPLIT_TAGS = ("train", "validation", "test")


@dataclass(frozen=True)
class Dataset:
    """Feature rows ``X`` (m x d) with labels ``y`` in {-1, +1}.

    ``split`` optionally tags every row with one of ``SPLIT_TAGS``.
    ``info`` carries generator metadata (flip counts and the like) and is
    never consulted by training.
    """

    X: np.ndarray
    y: np.ndarray
    split: np.ndarray | None = None
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1) if X.size else X.reshape(0, 1)
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if X.ndim != 2:
            raise DimensionMismatchError(f"X must be 2-D, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise DimensionMismatchError(
                f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if self.split is not None:
            split = np.asarray(self.split, dtype=object)
            if split.shape != y.shape:
                raise DimensionMismatchError("split tags must match the number of rows")
            unknown = set(split.tolist()) - set(SPLIT_TAGS)
            if unknown:
                raise ValueError(f"unknown split tags: {sorted(unknown)}")
            object.__setattr__(self, "split", split)

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return self.m

    def subset(self, tag: str) -> "Dataset":
        """Rows carrying split tag ``tag``; row order is preserved."""
        if self.split is None:
            raise ValueError("dataset has no split tags")
        mask = self.split == tag
        return Dataset(self.X[mask], self.y[mask])

    def has_split(self, tag: str) -> bool:
        return self.split is not None and bool(np.any(self.split == tag))


def check_labels(y: np.ndarray) -> None:
    if y.size == 0:
        raise EmptyDatasetError("dataset is empty")
    bad = ~np.isin(y, (-1.0, 1.0))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise InvalidLabelError(f"label {y[i]!r} at row {i} is not in {{-1, +1}}")


def split_dataset(data: Dataset, fractions=(0.5, 0.25, 0.25), seed=None) -> Dataset:
    """Tag rows train/validation/test after a seeded shuffle.

    Rows keep their original order inside each split, so the first-n center
    scheme still sees the file order of the training rows.
    """
    fr = np.asarray(fractions, dtype=float)
    if fr.shape != (3,) or np.any(fr < 0) or not np.isclose(fr.sum(), 1.0):
        raise ValueError(f"split fractions must be three non-negative numbers summing to 1, got {fractions}")
    m = data.m
    perm = np.random.default_rng(seed).permutation(m)
    n_train = int(np.floor(fr[0] * m))
    n_val = int(np.floor(fr[1] * m))
    tags = np.empty(m, dtype=object)
    tags[perm[:n_train]] = "train"
    tags[perm[n_train:n_train + n_val]] = "validation"
    tags[perm[n_train + n_val:]] = "test"
    return Dataset(data.X, data.y, split=tags, info=dict(data.info))


@dataclass(frozen=True)
class MinMaxScaling:
    """Per-dimension affine map of the training box onto [0, 1]^d.

    Constant columns get a unit span so they map to 0 instead of dividing
    by zero.
    """

    lower: np.ndarray
    span: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "MinMaxScaling":
        X = np.asarray(X, dtype=np.float64)
        lo = X.min(axis=0)
        span = X.max(axis=0) - lo
        span = np.where(span > 0, span, 1.0)
        return cls(lo, span)

    @classmethod
    def identity(cls, d: int) -> "MinMaxScaling":
        return cls(np.zeros(d), np.ones(d))

    @property
    def d(self) -> int:
        return self.lower.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.d:
            raise DimensionMismatchError(
                f"expected inputs of dimension {self.d}, got {X.shape[-1]}")
        return (X - self.lower) / self.span
