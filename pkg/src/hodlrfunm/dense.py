"""Dense linear-algebra kernels used by every other module.

Matrices are plain numpy arrays with complex128 entries (real input is
upcast). All functions are pure: inputs are never mutated.

Functions
---------
householder_qr        full QR factorization, Q square unitary
truncated_svd         SVD truncated at a relative threshold
singular_values       all singular values, descending
funm_eig              f(A) through an eigendecomposition (the brute-force oracle)
eigenvector_cond      condition number of the normalized eigenvector matrix
numerical_range_boundary  boundary points of the field of values
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InvalidInputError, NearDefectiveError

# Diagonalization-based paths refuse eigenvector matrices worse than this.
DEFECTIVE_COND_LIMIT = 1e12


def as_matrix(a, name="matrix"):
    """Validate and return `a` as a finite complex128 2-D array."""
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise InvalidInputError(f"{name} must be a nonempty 2-D array, got shape {m.shape}")
    m = m.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return m


def as_square_matrix(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {m.shape}")
    return m


def is_hermitian(a):
    """Exact Hermitian test; used to pick the symmetric eigensolver path."""
    return bool(np.array_equal(np.asarray(a), np.asarray(a).conj().T))


@dataclass(frozen=True)
class SvdResult:
    """Truncated singular value decomposition M ~ left @ diag(values) @ right^H.

    left is m x r and right is n x r, both with orthonormal columns;
    values holds the r retained singular values in descending order.
    """

    left: np.ndarray
    values: np.ndarray
    right: np.ndarray

    @property
    def rank(self):
        return int(self.values.shape[0])

    def to_dense(self):
        return (self.left * self.values) @ self.right.conj().T


def householder_qr(m):
    """Full QR factorization of a rectangular matrix.

    Returns (q, r) with q unitary of order rows(m) and r upper
    trapezoidal of the same shape as m. Backed by the LAPACK
    Householder factorization.
    """
    a = as_matrix(m)
    q, r = np.linalg.qr(a, mode="complete")
    return q, r


def truncated_svd(m, rel_tol):
    """SVD keeping exactly the singular values strictly above rel_tol * sigma_1.

    rel_tol must lie in [0, 1). A zero matrix yields rank 0. The retained
    triple reconstructs M within sigma_{r+1} in the spectral norm.
    """
    a = as_matrix(m)
    if not (0.0 <= rel_tol < 1.0):
        raise InvalidInputError(f"rel_tol must be in [0, 1), got {rel_tol}")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    r = int(np.count_nonzero(s > rel_tol * s[0])) if s.size and s[0] > 0.0 else 0
    return SvdResult(u[:, :r], s[:r], vh[:r].conj().T)


def singular_values(m):
    """All min(m, n) singular values in descending order."""
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def _eval_on_spectrum(f, lam):
    """Apply a scalar function to an eigenvalue array, tolerating scalar-only f."""
    try:
        out = np.asarray(f(lam), dtype=np.complex128)
        if out.shape == lam.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(x)) for x in lam], dtype=np.complex128)


def _eig_normalized(a):
    """Eigendecomposition with unit-norm eigenvector columns; raises when near defective."""
    lam, v = sla.eig(a)
    v = v / np.linalg.norm(v, axis=0)
    cond = np.linalg.cond(v, 2)
    if not np.isfinite(cond) or cond > DEFECTIVE_COND_LIMIT:
        raise NearDefectiveError(
            f"eigenvector matrix condition {cond:.3e} exceeds {DEFECTIVE_COND_LIMIT:.0e}; "
            "matrix is numerically defective"
        )
    return lam, v, cond


def funm_eig(a, f):
    """Evaluate f(A) by diagonalization: V f(Lambda) V^{-1}.

    Exactly Hermitian input takes the unitary eigh path; anything else
    uses a general eigendecomposition and refuses to proceed when the
    eigenvector matrix condition number exceeds DEFECTIVE_COND_LIMIT.
    Serves as the reference oracle for the contour-based evaluators.
    """
    m = as_square_matrix(a)
    if is_hermitian(m):
        lam, v = np.linalg.eigh(m)
        fw = _eval_on_spectrum(f, lam.astype(np.complex128))
        return (v * fw) @ v.conj().T
    lam, v, _ = _eig_normalized(m)
    fw = _eval_on_spectrum(f, lam)
    b = v * fw
    # f(A) = B V^{-1}, computed as the solution of X V = B.
    return np.linalg.solve(v.T, b.T).T


def eigenvector_cond(a):
    """2-norm condition number of the column-normalized eigenvector matrix.

    Hermitian input returns a value within roundoff of 1. This is an upper
    proxy for the infimum over all diagonalizing similarity transforms, so
    bounds built from it stay valid.
    """
    m = as_square_matrix(a)
    if m.shape[0] == 1:
        return 1.0
    if is_hermitian(m):
        _, v = np.linalg.eigh(m)
        return float(np.linalg.cond(v, 2))
    _, _, cond = _eig_normalized(m)
    return float(cond)


def numerical_range_boundary(a, n_angles=64, return_vectors=False):
    """Boundary points of the numerical range {x^H A x : ||x|| = 1}.

    For each direction angle theta the extreme eigenvector x of the
    Hermitian part of e^{-i theta} A gives the support point x^H A x.
    The returned points lie on the boundary and their convex hull is
    contained in the numerical range.
    """
    m = as_square_matrix(a)
    if n_angles < 1:
        raise InvalidInputError("n_angles must be positive")
    points = np.empty(n_angles, dtype=np.complex128)
    vectors = np.empty((m.shape[0], n_angles), dtype=np.complex128)
    for k in range(n_angles):
        theta = 2.0 * np.pi * k / n_angles
        b = np.exp(-1j * theta) * m
        herm = (b + b.conj().T) / 2.0
        _, v = np.linalg.eigh(herm)
        x = v[:, -1]
        points[k] = x.conj() @ (m @ x)
        vectors[:, k] = x
    if return_vectors:
        return points, vectors
    return points
