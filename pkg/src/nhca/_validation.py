"""Input validation helpers used by the numeric and estimator layers."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonFinite, NotSquare, NotSymmetric


def as_matrix(x, name="matrix"):
    """Coerce to a 2-D float64 array and reject non-finite entries."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={a.ndim}")
    if a.size and not np.isfinite(a).all():
        raise NonFinite(f"{name} contains NaN or infinite entries")
    return a


def as_vector(x, name="vector"):
    a = np.asarray(x, dtype=np.float64).ravel()
    if a.size and not np.isfinite(a).all():
        raise NonFinite(f"{name} contains NaN or infinite entries")
    return a


def check_square(a, name="matrix"):
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {a.shape}")


def check_symmetric(a, name="matrix", rtol=1e-10):
    # Relative gauge: |S - S^T| measured against max(1, |S|_max).
    scale = max(1.0, float(np.abs(a).max()) if a.size else 0.0)
    if a.size and float(np.abs(a - a.T).max()) > rtol * scale:
        raise NotSymmetric(f"{name} is not symmetric within relative tolerance {rtol}")


def symmetrize(a):
    return 0.5 * (a + a.T)
