"""Dense symmetric eigensolvers and a box-constrained QP solver.

Matrices are plain float64 numpy arrays.  All functions are pure and
deterministic: identical inputs produce bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._validation import as_matrix, check_square, check_symmetric, symmetrize
from .errors import CholeskyFailure, DimensionMismatch, EigenFailure, NonFinite

QP_MAX_ITER = 10000
QP_TOL = 1e-6

# Ridge escalation policy for generalized problems with a (possibly)
# singular right-hand matrix: start at 1e-8 * trace/dim and multiply by 10
# until the Cholesky factorization succeeds, capping at 1e-2 * trace/dim.
RIDGE_BASE_SCALE = 1e-8
RIDGE_MAX_SCALE = 1e-2


@dataclass(frozen=True)
class SymEigResult:
    """Full spectrum of a symmetric problem, eigenvalues ascending.

    ``eigenvectors[:, i]`` is the unit-norm eigenvector paired with
    ``eigenvalues[i]``, sign-normalized so its first nonzero entry is
    positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class BoxQpResult:
    alpha: np.ndarray
    objective: float
    iterations: int
    converged: bool


def _normalize_signs(vectors):
    """Flip each column so its first non-negligible entry is positive."""
    v = vectors.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        thresh = 1e-12 * max(1.0, float(np.abs(col).max()))
        nz = np.nonzero(np.abs(col) > thresh)[0]
        if nz.size and col[nz[0]] < 0:
            v[:, j] = -col
    return v


def sym_eig(s) -> SymEigResult:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending."""
    s = as_matrix(s, "S")
    check_square(s, "S")
    check_symmetric(s, "S")
    values, vectors = np.linalg.eigh(symmetrize(s))
    return SymEigResult(values, _normalize_signs(vectors))


def gen_sym_eig(g, h, ridge=0.0) -> SymEigResult:
    """Solve ``G z = mu (H + ridge*I) z`` for symmetric G and PSD H.

    Reduces to a standard symmetric problem through the Cholesky factor of
    ``H + ridge*I``; raises CholeskyFailure when that shift is not positive
    definite (callers should retry with a larger ridge, see
    :func:`gen_sym_eig_auto`).  Eigenvectors are reported with unit norm in
    the original coordinates.
    """
    g = as_matrix(g, "G")
    h = as_matrix(h, "H")
    check_square(g, "G")
    check_square(h, "H")
    if g.shape != h.shape:
        raise DimensionMismatch(f"G and H must share shape, got {g.shape} vs {h.shape}")
    check_symmetric(g, "G")
    check_symmetric(h, "H")
    if ridge < 0:
        raise ValueError("ridge must be >= 0")

    shifted = symmetrize(h) + ridge * np.eye(h.shape[0])
    try:
        lower = np.linalg.cholesky(shifted)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure(f"H + {ridge:g}*I is not positive definite") from exc

    # C = L^-1 G L^-T shares the pencil's spectrum.
    tmp = scipy.linalg.solve_triangular(lower, symmetrize(g), lower=True)
    reduced = scipy.linalg.solve_triangular(lower, tmp.T, lower=True).T
    values, y = np.linalg.eigh(symmetrize(reduced))
    z = scipy.linalg.solve_triangular(lower.T, y, lower=False)
    norms = np.linalg.norm(z, axis=0)
    norms[norms == 0] = 1.0
    z = z / norms
    if not (np.isfinite(values).all() and np.isfinite(z).all()):
        raise EigenFailure("generalized eigensolve produced non-finite output")
    return SymEigResult(values, _normalize_signs(z))


def default_ridge(h) -> float:
    """Base ridge of the escalation ladder for a given right-hand matrix."""
    h = np.asarray(h, dtype=np.float64)
    tr = float(np.trace(h))
    if tr <= 0.0:
        return 1e-12
    return RIDGE_BASE_SCALE * tr / h.shape[0]


def gen_sym_eig_auto(g, h) -> SymEigResult:
    """gen_sym_eig with the module ridge-escalation policy applied.

    Tries ridge = 1e-8*trace(H)/dim and escalates by factors of 10 up to
    1e-2*trace(H)/dim before giving up.
    """
    ridge = default_ridge(np.asarray(h, dtype=np.float64))
    last = None
    for _ in range(7):  # scales 1e-8 .. 1e-2 inclusive
        try:
            return gen_sym_eig(g, h, ridge)
        except CholeskyFailure as exc:
            last = exc
            ridge *= 10.0
    raise EigenFailure("ridge escalation exhausted without a positive definite shift") from last


def box_qp_maximize(q, c_upper) -> BoxQpResult:
    """Maximize ``e^T a - 0.5 a^T Q a`` over the box ``[0, c_upper]^m``.

    Q must be symmetric positive semidefinite.  Projected gradient ascent
    with a Barzilai-Borwein step and backtracking; converged when the
    projected-gradient infinity norm drops below 1e-6.  On hitting the
    iteration cap the best iterate is returned with ``converged=False``.
    """
    q = as_matrix(q, "Q")
    check_square(q, "Q")
    check_symmetric(q, "Q", rtol=1e-8)
    if not (np.isfinite(c_upper) and c_upper > 0):
        raise NonFinite("c_upper must be a finite positive number")

    m = q.shape[0]
    alpha = np.zeros(m)
    grad = -np.ones(m)  # gradient of F(a) = 0.5 a^T Q a - e^T a at a = 0
    fval = 0.0

    def kkt_residual(a, g):
        r = g.copy()
        at_lo = a <= 0.0
        at_hi = a >= c_upper
        r[at_lo] = np.minimum(g[at_lo], 0.0)
        r[at_hi] = np.maximum(g[at_hi], 0.0)
        return float(np.abs(r).max()) if m else 0.0

    diag_max = float(np.abs(np.diag(q)).max()) if m else 1.0
    step = 1.0 / diag_max if diag_max > 0 else 1.0

    best_alpha = alpha
    best_f = fval
    converged = kkt_residual(alpha, grad) <= QP_TOL
    it = 0
    while not converged and it < QP_MAX_ITER:
        it += 1
        t = step
        while True:
            cand = np.clip(alpha - t * grad, 0.0, c_upper)
            d = cand - alpha
            f_cand = 0.5 * float(cand @ (q @ cand)) - float(cand.sum())
            # Armijo on the projected step; grad @ d <= 0 by the projection property.
            if f_cand <= fval + 1e-4 * float(grad @ d) or t < 1e-16:
                break
            t *= 0.5
        grad_new = q @ cand - 1.0
        s = cand - alpha
        y = grad_new - grad
        sy = float(s @ y)
        step = float(s @ s) / sy if sy > 1e-30 else 1.0 / diag_max if diag_max > 0 else 1.0
        step = min(max(step, 1e-12), 1e12)
        alpha, grad, fval = cand, grad_new, f_cand
        if fval < best_f:
            best_f, best_alpha = fval, alpha
        converged = kkt_residual(alpha, grad) <= QP_TOL

    if fval > best_f:
        alpha = best_alpha
    objective = float(alpha.sum()) - 0.5 * float(alpha @ (q @ alpha))
    return BoxQpResult(alpha, objective, it, converged)


def ridge_solve(s, ridge, rhs):
    """Solve ``(S + ridge*I) X = RHS`` through a Cholesky factorization."""
    s = as_matrix(s, "S")
    check_square(s, "S")
    check_symmetric(s, "S", rtol=1e-8)
    rhs = np.asarray(rhs, dtype=np.float64)
    rhs2d = rhs.reshape(-1, 1) if rhs.ndim == 1 else rhs
    if rhs2d.shape[0] != s.shape[0]:
        raise DimensionMismatch(f"RHS has {rhs2d.shape[0]} rows, expected {s.shape[0]}")
    shifted = symmetrize(s) + ridge * np.eye(s.shape[0])
    try:
        factor = scipy.linalg.cho_factor(shifted, lower=True)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise CholeskyFailure(f"S + {ridge:g}*I is not positive definite") from exc
    x = scipy.linalg.cho_solve(factor, rhs2d)
    return x.ravel() if rhs.ndim == 1 else x
