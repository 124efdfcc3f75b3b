"""Polynomial kernel features: centers, feature dimension and design matrix.

The kernel is ``K_s(x, x') = (1 + x . x')^s``. A model uses ``n`` kernel
sections ``x -> K_s(eta_j, x)`` centered at points ``eta_j``; when the
centers are unisolvent for polynomials of total degree ``s`` these sections
span the whole polynomial space of dimension ``C(s + d, d)``.

Kernel values are computed with a fixed dot-product accumulation order and
integer powers by repeated squaring, so ``kernel_eval`` and every entry of a
design matrix agree bit for bit.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from numpy.polynomial import chebyshev
from scipy import linalg

from .dataset import Dataset
from .errors import DimensionMismatchError, FactorizationError, FeatureDimOverflowError

log = logging.getLogger(__name__)

_potrs = linalg.get_lapack_funcs("potrs", (np.empty(1),))

# Results must fit a signed 64-bit array index.
FEATURE_DIM_LIMIT = 2**63 - 1

# Largest problem on which the unisolvence check is run.
CHECK_MAX_CENTERS = 2000
CHECK_MAX_BASIS = 20000

FUNDAMENTAL_RTOL = 1e-10

# Spawn key of the center-drawing stream. Without it a model trained with
# seed k on data generated from seed k (or [k, 0], which numpy treats as the
# same entropy) would draw "uniform" centers equal to the first inputs.
_CENTER_STREAM = (0x63656E74,)


def center_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=_CENTER_STREAM))


class CenterScheme(str, enum.Enum):
    UNIFORM_RANDOM = "uniform"
    FIRST_N = "firstn"
    RANDOM_SUBSAMPLE = "subsample"

    @classmethod
    def parse(cls, value) -> "CenterScheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "uniform": cls.UNIFORM_RANDOM, "uniformrandom": cls.UNIFORM_RANDOM,
            "scheme1": cls.UNIFORM_RANDOM,
            "firstn": cls.FIRST_N, "first": cls.FIRST_N, "scheme2": cls.FIRST_N,
            "subsample": cls.RANDOM_SUBSAMPLE, "randomsubsample": cls.RANDOM_SUBSAMPLE,
            "random": cls.RANDOM_SUBSAMPLE, "scheme3": cls.RANDOM_SUBSAMPLE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown center scheme {value!r}") from None


def feature_dim(s: int, d: int) -> int:
    """Dimension ``C(s + d, d)`` of d-variate polynomials of degree <= s."""
    if s < 1 or d < 1:
        raise ValueError(f"feature_dim needs s >= 1 and d >= 1, got s={s}, d={d}")
    k = min(s, d)
    top = max(s, d)
    result = 1
    for i in range(1, k + 1):
        # exact at every step: result is C(top + i, i) after the division
        result = result * (top + i) // i
        if result > FEATURE_DIM_LIMIT:
            raise FeatureDimOverflowError(
                f"feature dimension C(s+d, d) for s={s}, d={d} exceeds {FEATURE_DIM_LIMIT}")
    return result


def _int_power(base: np.ndarray, s: int) -> np.ndarray:
    result = None
    while True:
        if s & 1:
            result = base if result is None else result * base
        s >>= 1
        if not s:
            return result
        base = base * base


def _dots(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    out = X[:, 0:1] * C[:, 0]
    for k in range(1, X.shape[1]):
        out += X[:, k:k + 1] * C[:, k]
    return out


def kernel_block(X: np.ndarray, C: np.ndarray, s: int) -> np.ndarray:
    """Matrix of ``(1 + x_i . c_j)^s`` for rows of ``X`` and ``C``."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    C = np.atleast_2d(np.asarray(C, dtype=np.float64))
    if X.shape[1] != C.shape[1]:
        raise DimensionMismatchError(
            f"points of dimension {X.shape[1]} against centers of dimension {C.shape[1]}")
    if s < 1:
        raise ValueError(f"kernel degree must be >= 1, got {s}")
    return _int_power(1.0 + _dots(X, C), int(s))


def kernel_eval(x, x2, s: int) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    x2 = np.asarray(x2, dtype=np.float64).reshape(-1)
    if x.shape != x2.shape:
        raise DimensionMismatchError(f"dimension mismatch: {x.shape[0]} vs {x2.shape[0]}")
    return float(kernel_block(x[None, :], x2[None, :], s)[0, 0])


# -- unisolvence ------------------------------------------------------------

def _multi_indices(s: int, d: int) -> np.ndarray:
    """Exponent vectors of all monomials of total degree <= s in d variables."""
    rows = []
    for deg in range(s + 1):
        for combo in combinations_with_replacement(range(d), deg):
            e = np.zeros(d, dtype=np.intp)
            for var in combo:
                e[var] += 1
            rows.append(e)
    return np.array(rows, dtype=np.intp).reshape(-1, d)


def chebyshev_vandermonde(P: np.ndarray, s: int, box=None) -> np.ndarray:
    """Tensor Chebyshev basis of total degree <= s evaluated at the rows of P.

    Points are mapped affinely onto [-1, 1]^d using ``box = (lower, upper)``
    (default: the bounding box of ``P``). Linear independence of the kernel
    sections is affine invariant, so this is a well-conditioned stand-in for
    the kernel Gram matrix, whose singular values collapse below machine
    precision already around s = 7 in two dimensions.
    """
    P = np.atleast_2d(np.asarray(P, dtype=np.float64))
    lo, hi = (P.min(axis=0), P.max(axis=0)) if box is None else box
    width = np.where(hi > lo, hi - lo, 1.0)
    Z = 2.0 * (P - lo) / width - 1.0
    idx = _multi_indices(s, P.shape[1])
    V = np.ones((P.shape[0], idx.shape[0]))
    for k in range(P.shape[1]):
        Tk = chebyshev.chebvander(Z[:, k], s)
        V *= Tk[:, idx[:, k]]
    return V


def fundamental_ratio(P: np.ndarray, s: int) -> float | None:
    """Smallest over largest singular value of the centers' basis matrix.

    Returns None when the problem is too large to check.
    """
    P = np.atleast_2d(P)
    n, d = P.shape
    N = feature_dim(s, d)
    if n > N:
        return 0.0
    if n > CHECK_MAX_CENTERS or N > CHECK_MAX_BASIS:
        return None
    sv = np.linalg.svd(chebyshev_vandermonde(P, s), compute_uv=False)
    if sv[0] == 0:
        return 0.0
    return float(sv[n - 1] / sv[0])


def is_fundamental_system(P: np.ndarray, s: int, rtol: float = FUNDAMENTAL_RTOL) -> bool:
    ratio = fundamental_ratio(P, s)
    return ratio is None or ratio > rtol


def _greedy_independent(X: np.ndarray, order: np.ndarray, s: int, n: int,
                        rtol: float, chunk: int = 1024) -> np.ndarray:
    """Scan rows of X in ``order`` keeping those not in the span of earlier picks."""
    box = (X.min(axis=0), X.max(axis=0))
    N = feature_dim(s, X.shape[1])
    Q = np.zeros((min(n, N), N))
    kept = []
    for start in range(0, order.shape[0], chunk):
        block = order[start:start + chunk]
        V = chebyshev_vandermonde(X[block], s, box=box)
        for row, i in zip(V, block):
            norm = np.linalg.norm(row)
            if norm == 0:
                continue
            r = row / norm
            k = len(kept)
            for _ in range(2):
                r = r - Q[:k].T @ (Q[:k] @ r)
            res = np.linalg.norm(r)
            if res > rtol:
                Q[k] = r / res
                kept.append(int(i))
                if len(kept) == n:
                    return np.array(kept, dtype=np.intp)
    return np.array(kept, dtype=np.intp)


# -- centers ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CenterSet:
    centers: np.ndarray
    scheme: CenterScheme
    s: int
    indices: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    @property
    def d(self) -> int:
        return self.centers.shape[1]


def generate_centers(data, s: int, scheme=CenterScheme.FIRST_N, seed=None, n: int | None = None,
                     check: bool = True, max_redraws: int = 10) -> CenterSet:
    """Pick ``n = min(C(s + d, d), m)`` kernel centers.

    ``FIRST_N`` takes the leading rows, ``RANDOM_SUBSAMPLE`` draws rows without
    replacement and ``UNIFORM_RANDOM`` samples the bounding box of the inputs.
    An explicit ``n`` overrides the binomial default (still capped at m).

    With ``check`` on, degenerate picks (typically duplicated rows) are
    redrawn, or for ``FIRST_N`` replaced by the next independent rows in file
    order, and a warning is logged.
    """
    X = data.X if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, dtype=np.float64))
    scheme = CenterScheme.parse(scheme)
    m, d = X.shape
    if m < 1:
        raise ValueError("cannot pick centers from an empty dataset")
    dim = feature_dim(s, d)
    n = min(dim, m) if n is None else min(int(n), m)
    if n < 1:
        raise ValueError(f"number of centers must be positive, got {n}")
    rng = center_rng(seed)
    # beyond C(s+d, d) centers cannot be independent, so there is nothing to check
    check = check and n <= dim

    def draw():
        if scheme is CenterScheme.FIRST_N:
            idx = np.arange(n)
            return X[idx], idx
        if scheme is CenterScheme.RANDOM_SUBSAMPLE:
            idx = np.sort(rng.choice(m, size=n, replace=False))
            return X[idx], idx
        lo, hi = X.min(axis=0), X.max(axis=0)
        return lo + (hi - lo) * rng.random((n, d)), None

    for attempt in range(max_redraws if scheme is not CenterScheme.FIRST_N else 1):
        P, idx = draw()
        if not check or is_fundamental_system(P, s):
            return CenterSet(P, scheme, s, idx)
        log.warning("centers drawn by %s (attempt %d) are not a fundamental system for s=%d",
                    scheme.value, attempt + 1, s)

    if scheme is CenterScheme.UNIFORM_RANDOM:
        # the box is degenerate (some coordinate is constant); nothing to redraw into
        log.warning("keeping degenerate uniform centers for s=%d", s)
        return CenterSet(P, scheme, s, None)
    order = np.arange(m) if scheme is CenterScheme.FIRST_N else rng.permutation(m)
    idx = _greedy_independent(X, order, s, n, FUNDAMENTAL_RTOL)
    if idx.size < n:
        log.warning("only %d independent centers available (wanted %d)", idx.size, n)
    if scheme is CenterScheme.RANDOM_SUBSAMPLE:
        idx = np.sort(idx)
    return CenterSet(X[idx], scheme, s, idx)


# -- design matrix ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """``A_ij = K_s(x_i, eta_j)`` plus a Cholesky factor of ``beta A^T A + alpha I``."""

    A: np.ndarray
    alpha: float
    beta: float
    factor: tuple

    @property
    def shape(self):
        return self.A.shape

    def normal_matvec(self, z: np.ndarray) -> np.ndarray:
        """``(beta A^T A + alpha I) z`` by two matrix-vector products."""
        return self.beta * (self.A.T @ (self.A @ z)) + self.alpha * z

    def factor_matvec(self, z: np.ndarray) -> np.ndarray:
        """Apply the stored factorization ``L L^T`` (upper ``U^T U``) to ``z``."""
        c, lower = self.factor
        T = np.tril(c) if lower else np.triu(c)
        return T @ (T.T @ z) if lower else T.T @ (T @ z)

    def solve_normal(self, rhs: np.ndarray) -> np.ndarray:
        c, lower = self.factor
        x, info = _potrs(c, rhs, lower=lower)
        if info != 0:
            raise FactorizationError(f"potrs failed with info={info}")
        return x


def design_block(X: np.ndarray, centers: np.ndarray, s: int, block_rows: int = 1 << 15) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    A = np.empty((X.shape[0], centers.shape[0]))
    for start in range(0, X.shape[0], block_rows):
        stop = start + block_rows
        A[start:stop] = kernel_block(X[start:stop], centers, s)
    return A


def gram_blockwise(A: np.ndarray, block_rows: int = 1 << 15) -> np.ndarray:
    """``A^T A`` accumulated over row blocks in a fixed order."""
    n = A.shape[1]
    G = np.zeros((n, n))
    for start in range(0, A.shape[0], block_rows):
        Ab = A[start:start + block_rows]
        G += Ab.T @ Ab
    return G


def build_design_matrix(data, centers, s: int, alpha: float = 1.0, beta: float = 1.0,
                        block_rows: int = 1 << 15) -> DesignMatrix:
    if not (alpha > 0 and beta > 0):
        raise ValueError(f"alpha and beta must be positive, got alpha={alpha}, beta={beta}")
    X = data.X if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, dtype=np.float64))
    C = centers.centers if isinstance(centers, CenterSet) else np.atleast_2d(centers)
    if X.shape[1] != C.shape[1]:
        raise DimensionMismatchError(
            f"data of dimension {X.shape[1]} against centers of dimension {C.shape[1]}")
    A = design_block(X, C, s, block_rows)
    M = beta * gram_blockwise(A, block_rows)
    M[np.diag_indices_from(M)] += alpha
    try:
        factor = linalg.cho_factor(M, lower=False, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise FactorizationError(
            f"Cholesky factorization of beta*A^T A + alpha*I failed (n={C.shape[0]}, s={s}): {exc}"
        ) from exc
    A.flags.writeable = False
    factor[0].flags.writeable = False
    return DesignMatrix(A, float(alpha), float(beta), factor)
