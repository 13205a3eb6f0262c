"""The four binary nonparallel-hyperplane trainers and the distance scorer.

Each trainer takes the positive-class sample matrix A, the negative-class
sample matrix B, and a HyperParams bundle, and returns a BinaryModel holding
one hyperplane proximal to each class.  A test point is assigned the class
of the nearer plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ._validation import as_matrix, as_vector
from .errors import DegenerateClass, DimensionMismatch, NonFinite, SingularOmega
from .kernels import LINEAR, RBF, KernelSpec, gram
from .numerics import box_qp_maximize, gen_sym_eig_auto, ridge_solve, sym_eig

INPUT_SPACE = "input"
KERNEL_SPACE = "kernel"

GEPSVM = "gepsvm"
REGGEPSVM = "reggepsvm"
IGEPSVM = "igepsvm"
TWSVM = "twsvm"
VARIANTS = (GEPSVM, REGGEPSVM, IGEPSVM, TWSVM)


@dataclass(frozen=True)
class HyperParams:
    """Per-variant regularization and kernel parameters.

    delta : Tikhonov shift used by gepsvm and igepsvm.
    nu1, nu2 : pencil-mixing weights of reggepsvm (may be zero; nu1*nu2 != 1).
    nu : trade-off factor of igepsvm.
    c1, c2 : twsvm box penalties for the two dual problems.
    qp_ridge : shift added to the proximal normal matrix before inversion.
    kernel : kernel used for the fit; ``linear`` trains in input space.
    """

    delta: float = 1e-4
    nu1: float = 0.0
    nu2: float = 0.0
    nu: float = 0.5
    c1: float = 1.0
    c2: float = 1.0
    qp_ridge: float = 1e-7
    kernel: KernelSpec = field(default_factory=KernelSpec)

    def validate(self):
        for name in ("delta", "nu", "c1", "c2", "qp_ridge"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise NonFinite(f"{name} must be finite and positive, got {v!r}")
        for name in ("nu1", "nu2"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise NonFinite(f"{name} must be finite and non-negative, got {v!r}")


@dataclass(frozen=True)
class KernelRef:
    """Reference rows and kernel spec a kernel-space plane is expressed against."""

    reference: np.ndarray
    spec: KernelSpec


@dataclass(frozen=True)
class Hyperplane:
    """A plane ``x.w + b = 0`` (input space) or ``K(x, C).u + b = 0`` (kernel space)."""

    weights: np.ndarray
    offset: float
    space: str = INPUT_SPACE
    kernel_ref: KernelRef | None = None

    def __post_init__(self):
        if (self.space == KERNEL_SPACE) != (self.kernel_ref is not None):
            raise ValueError("kernel_ref must be present exactly when space is 'kernel'")


@dataclass(frozen=True)
class BinaryModel:
    variant: str
    plane_pos: Hyperplane
    plane_neg: Hyperplane
    params: HyperParams
    converged: bool = True


def _augment(x):
    return np.hstack([x, np.ones((x.shape[0], 1))])


def _check_pair(a, b):
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise DegenerateClass("both classes need at least one sample")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"A has {a.shape[1]} columns, B has {b.shape[1]}")
    return a, b


def _plane(z, space=INPUT_SPACE, kernel_ref=None):
    z = np.asarray(z, dtype=np.float64).ravel()
    return Hyperplane(z[:-1].copy(), float(z[-1]), space, kernel_ref)


def _scatter(x):
    """Augmented scatter [X e]^T [X e] of a sample matrix."""
    xe = _augment(x)
    return xe.T @ xe


def fit_gepsvm(a, b, params: HyperParams) -> BinaryModel:
    """Train the generalized-eigenvalue proximal classifier.

    Each plane minimizes the Tikhonov-regularized ratio of its own class
    scatter to the other class scatter; the minimizer is the eigenvector of
    the smallest eigenvalue of the corresponding generalized eigenproblem.

    Parameters
    ----------
    a, b : array-like, shape (m1, n) and (m2, n)
        Samples of the positive and negative class (pre-mapped through the
        kernel Gram matrix when training a kernel surface).
    params : HyperParams
        Only ``delta`` is used.

    Returns
    -------
    BinaryModel with ``plane_pos`` proximal to ``a`` and ``plane_neg``
    proximal to ``b``.
    """
    a, b = _check_pair(a, b)
    params.validate()
    eye = np.eye(a.shape[1] + 1)
    scatter_a = _scatter(a)
    scatter_b = _scatter(b)
    z_pos = gen_sym_eig_auto(scatter_a + params.delta * eye, scatter_b).eigenvectors[:, 0]
    z_neg = gen_sym_eig_auto(scatter_b + params.delta * eye, scatter_a).eigenvectors[:, 0]
    return BinaryModel(GEPSVM, _plane(z_pos), _plane(z_neg), params)


def fit_reggepsvm(a, b, params: HyperParams) -> BinaryModel:
    """Train the regularized variant that yields both planes from one pencil.

    The pencil ``(G + nu1*H) z = lam (H + nu2*G) z`` with G, H the augmented
    class scatters has the same eigenvectors as the plain proximal pencil;
    the minimum-eigenvalue eigenvector gives the positive plane and the
    maximum-eigenvalue eigenvector the negative one.
    """
    a, b = _check_pair(a, b)
    params.validate()
    if abs(params.nu1 * params.nu2 - 1.0) < 1e-12:
        raise SingularOmega("nu1 * nu2 == 1 makes the pencil transform degenerate")
    scatter_a = _scatter(a)
    scatter_b = _scatter(b)
    result = gen_sym_eig_auto(scatter_a + params.nu1 * scatter_b,
                              scatter_b + params.nu2 * scatter_a)
    z_pos = result.eigenvectors[:, 0]
    z_neg = result.eigenvectors[:, -1]
    return BinaryModel(REGGEPSVM, _plane(z_pos), _plane(z_neg), params)


def fit_igepsvm(a, b, params: HyperParams) -> BinaryModel:
    """Train the improved variant built on standard eigendecompositions.

    Replaces the scatter ratio with a weighted difference, so each plane is
    the least-eigenvalue eigenvector of ``(M + delta*I) - nu*H`` with M the
    own-class scatter and H the other-class scatter.
    """
    a, b = _check_pair(a, b)
    params.validate()
    eye = np.eye(a.shape[1] + 1)
    scatter_a = _scatter(a)
    scatter_b = _scatter(b)
    z_pos = sym_eig(scatter_a + params.delta * eye - params.nu * scatter_b).eigenvectors[:, 0]
    z_neg = sym_eig(scatter_b + params.delta * eye - params.nu * scatter_a).eigenvectors[:, 0]
    return BinaryModel(IGEPSVM, _plane(z_pos), _plane(z_neg), params)


def _twsvm_half(own, other, c_bound, qp_ridge):
    """One twin problem: plane proximal to ``own`` pushed off ``other``.

    Solves the box-constrained Wolfe dual ``max e^T a - 0.5 a^T Q a`` with
    ``Q = G (H^T H + ridge*I)^-1 G^T`` (H, G the augmented own/other
    matrices) and recovers the plane from the multipliers.
    """
    h = _augment(own)
    g = _augment(other)
    normal = h.T @ h
    inv_gt = ridge_solve(normal, qp_ridge, g.T)  # (H^T H + ridge I)^-1 G^T
    q = g @ inv_gt
    qp = box_qp_maximize(0.5 * (q + q.T), c_bound)
    z = -inv_gt @ qp.alpha
    return z, qp


def fit_twsvm(a, b, params: HyperParams) -> BinaryModel:
    """Train the twin classifier by solving two small box-constrained duals.

    Each plane minimizes the squared distance to its own class subject to
    unit-margin hinge constraints on the other class; the dual is a box QP
    in the other class's multipliers.  On a dual that hits the iteration cap
    the best iterate is used and the model is flagged ``converged=False``.
    """
    a, b = _check_pair(a, b)
    params.validate()
    z_pos, qp_pos = _twsvm_half(a, b, params.c1, params.qp_ridge)
    z_neg, qp_neg = _twsvm_half(b, a, params.c2, params.qp_ridge)
    return BinaryModel(TWSVM, _plane(z_pos), _plane(z_neg), params,
                       converged=qp_pos.converged and qp_neg.converged)


_FITTERS = {
    GEPSVM: fit_gepsvm,
    REGGEPSVM: fit_reggepsvm,
    IGEPSVM: fit_igepsvm,
    TWSVM: fit_twsvm,
}


def fit_variant(a, b, variant, params: HyperParams) -> BinaryModel:
    """Dispatch on variant name; trains a kernel surface when params ask for RBF."""
    if variant not in _FITTERS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    if params.kernel.kind != LINEAR:
        return fit_kernel_variant(a, b, variant, params, params.kernel)
    return _FITTERS[variant](a, b, params)


def fit_kernel_variant(a, b, variant, params: HyperParams, spec: KernelSpec) -> BinaryModel:
    """Train kernel surfaces ``K(x, C).u + b = 0`` with C the stacked training rows.

    Maps A and B through the Gram matrix against C = [A; B] and runs the
    chosen linear trainer in the mapped space.  Works for any kernel kind,
    including linear (useful to check the kernel path spans the linear one).
    """
    if variant not in _FITTERS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    a, b = _check_pair(a, b)
    reference = np.vstack([a, b])
    ref = KernelRef(reference, spec)
    mapped = _FITTERS[variant](gram(a, reference, spec), gram(b, reference, spec),
                               replace(params, kernel=spec))

    def tag(p):
        return Hyperplane(p.weights, p.offset, KERNEL_SPACE, ref)

    return BinaryModel(variant, tag(mapped.plane_pos), tag(mapped.plane_neg),
                       mapped.params, mapped.converged)


def signed_distance(x, plane: Hyperplane) -> float:
    """Normalized absolute distance of a point from a plane.

    ``|x.w + b| / |w|`` in input space and ``|K(x, C).u + b| / |u|`` in
    kernel space.  A plane with a vanishing normal is infinitely far from
    every point.
    """
    x = as_vector(x, "x")
    if plane.space == KERNEL_SPACE:
        row = gram(x.reshape(1, -1), plane.kernel_ref.reference, plane.kernel_ref.spec)[0]
    else:
        row = x
    if row.shape[0] != plane.weights.shape[0]:
        raise DimensionMismatch(
            f"point maps to dimension {row.shape[0]}, plane has {plane.weights.shape[0]}")
    norm = float(np.linalg.norm(plane.weights))
    if norm == 0.0:
        return float("inf")
    return abs(float(row @ plane.weights) + plane.offset) / norm


def predict_binary(model: BinaryModel, x) -> int:
    """+1 if the point is nearer the positive plane, else -1; ties go to +1."""
    return 1 if signed_distance(x, model.plane_pos) <= signed_distance(x, model.plane_neg) else -1
