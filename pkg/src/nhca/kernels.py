"""Kernel functions and Gram-matrix construction for the nonlinear variants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ._validation import as_matrix
from .errors import DimensionMismatch, NonFinite

LINEAR = "linear"
RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    kind: str = LINEAR
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in (LINEAR, RBF):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == RBF and not (np.isfinite(self.gamma) and self.gamma > 0):
            raise NonFinite("gamma must be finite and positive for the RBF kernel")


def gram(x, c, spec: KernelSpec):
    """Gram matrix between the rows of x (m, n) and c (p, n).

    Entry (i, j) is ``x_i . c_j`` for the linear kernel and
    ``exp(-gamma * |x_i - c_j|^2)`` for the RBF kernel.
    """
    x = as_matrix(x, "X")
    c = as_matrix(c, "C")
    if x.shape[1] != c.shape[1]:
        raise DimensionMismatch(f"X has {x.shape[1]} columns, C has {c.shape[1]}")
    if spec.kind == LINEAR:
        return x @ c.T
    # cdist computes (x - c)^2 directly, so identical rows give exact zeros
    # and the diagonal of gram(X, X) is exactly one.
    return np.exp(-spec.gamma * cdist(x, c, "sqeuclidean"))
