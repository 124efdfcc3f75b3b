"""Proximal operator of the scalar hinge loss.

``hinge_scalar(a, b, gamma)`` returns the minimizer over z of

    max(0, 1 - a*z) + gamma/2 * (z - b)**2

in closed form. The cases are tested in a fixed order (a == 0, the linear
branch, the kink, the flat branch) so boundary points take the first match;
all branches agree on the boundaries.
"""

import numpy as np

from .errors import DimensionMismatchError


def hinge_objective(z, a, b, gamma):
    return np.maximum(0.0, 1.0 - a * z) + 0.5 * gamma * (z - b) ** 2


def hinge_scalar(a: float, b: float, gamma: float) -> float:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    a, b = float(a), float(b)
    if a == 0:
        return b
    ab = a * b
    if ab <= 1.0 - a * a / gamma:
        return b + a / gamma
    if ab < 1.0:
        return 1.0 / a
    return b


def hinge_vector(y, z, gamma: float) -> np.ndarray:
    """Componentwise ``hinge_scalar(y_i, z_i, gamma)`` for arbitrary real ``y``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    a = np.asarray(y, dtype=np.float64)
    b = np.asarray(z, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"length mismatch: {a.shape} vs {b.shape}")
    ab = a * b
    nz = a != 0
    linear = nz & (ab <= 1.0 - a * a / gamma)
    kink = nz & ~linear & (ab < 1.0)
    out = b.copy()
    out[linear] = b[linear] + a[linear] / gamma
    out[kink] = 1.0 / a[kink]
    return out


def hinge_labels(y: np.ndarray, z: np.ndarray, gamma: float) -> np.ndarray:
    """Fast path of :func:`hinge_vector` for labels in {-1, +1}.

    With ``a*a == 1`` the linear-branch threshold is the constant
    ``1 - 1/gamma`` and the kink value ``1/a`` is the label itself.
    """
    yz = y * z
    return np.where(yz <= 1.0 - 1.0 / gamma, z + y / gamma, np.where(yz < 1.0, y, z))
