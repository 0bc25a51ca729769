"""Dense complex linear-algebra contracts used by every fitting method.

Thin wrappers over LAPACK (via scipy) that pin down the conventions the
rest of the toolkit relies on: V holds right singular vectors as columns,
least squares is the SVD pseudo-inverse with a fixed cutoff, and the
generalized eigensolver filters infinite and spurious eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ComputationError, PencilError

#: Relative singular-value cutoff of the least-squares pseudo-inverse.
LSTSQ_CUTOFF = 1e-13

#: Generalized eigenvalues larger than this are treated as infinite.
INFINITY_CUTOFF = 1e8

#: Finite eigenvalue candidates with a larger backward residual are discarded.
RESIDUAL_TOL = 1e-6


@dataclass
class SvdResult:
    """Thin SVD ``A = U @ diag(singular_values) @ V.conj().T``.

    Columns of U and V are orthonormal; singular values are non-negative
    and non-increasing.
    """

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray


def svd(a) -> SvdResult:
    a = np.asarray(a)
    if a.size == 0:
        raise ValueError("cannot decompose an empty matrix")
    try:
        u, s, vh = scipy.linalg.svd(a, full_matrices=False)
    except scipy.linalg.LinAlgError:
        # gesdd occasionally fails to converge; gesvd is slower but sturdier
        try:
            u, s, vh = scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesvd")
        except scipy.linalg.LinAlgError as exc:
            raise ComputationError("SVD did not converge") from exc
    return SvdResult(U=u, singular_values=s, V=vh.conj().T)


def least_squares(a, b) -> np.ndarray:
    """Minimum-norm least-squares solution of ``a @ x = b``.

    Singular values below ``LSTSQ_CUTOFF * sigma_max`` are treated as zero,
    so rank-deficient systems return the minimum-norm minimiser.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[0] < a.shape[1]:
        raise ValueError(f"system is underdetermined: shape {a.shape}")
    res = svd(a)
    s = res.singular_values
    keep = s > LSTSQ_CUTOFF * s[0] if s[0] > 0 else np.zeros_like(s, dtype=bool)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return res.V @ (inv * (res.U.conj().T @ b))


def smallest_singular_vector(a) -> np.ndarray:
    """Right singular vector of the smallest singular value, unit 2-norm."""
    a = np.asarray(a)
    if a.shape[0] < a.shape[1] or a.shape[1] < 1:
        raise ValueError(f"need rows >= cols >= 1, got shape {a.shape}")
    return svd(a).V[:, -1]


def finite_generalized_eigenvalues(
    m,
    n,
    infinity_cutoff: float = INFINITY_CUTOFF,
    residual_tol: float = RESIDUAL_TOL,
) -> np.ndarray:
    """All finite eigenvalues of the pencil (m, n): det(m - lam * n) = 0.

    Eigenvalues at infinity (vanishing beta in the QZ output, as produced by
    a singular ``n``) are discarded, as are candidates whose magnitude
    exceeds ``infinity_cutoff`` or whose backward residual
    ``|(m - lam n) x| / ((|m| + |lam| |n|) |x|)`` exceeds ``residual_tol``.

    Raises
    ------
    PencilError
        If the pencil is identically singular (an indeterminate 0/0
        eigenvalue shows up in the QZ output).
    """
    m = np.asarray(m, dtype=complex)
    n = np.asarray(n, dtype=complex)
    if m.shape != n.shape or m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("pencil matrices must be square and of equal shape")
    try:
        ab, vr = scipy.linalg.eig(m, n, right=True, homogeneous_eigvals=True)
    except scipy.linalg.LinAlgError as exc:
        raise ComputationError("QZ iteration did not converge") from exc
    alpha, beta = ab
    norm_m = np.linalg.norm(m)
    norm_n = np.linalg.norm(n)
    dim = m.shape[0]
    tiny = dim * np.finfo(float).eps
    indeterminate = (np.abs(alpha) <= tiny * max(norm_m, 1.0)) & (
        np.abs(beta) <= tiny * max(norm_n, 1.0)
    )
    if np.any(indeterminate) and _identically_singular(m, n):
        raise PencilError("pencil is identically singular: det(m - lam n) == 0 for all lam")
    finite = []
    for i in range(dim):
        if indeterminate[i] or np.abs(beta[i]) == 0.0:
            continue
        lam = alpha[i] / beta[i]
        if np.abs(lam) > infinity_cutoff:
            continue
        x = vr[:, i]
        resid = np.linalg.norm(m @ x - lam * (n @ x))
        scale = (norm_m + np.abs(lam) * norm_n) * np.linalg.norm(x)
        if scale > 0 and resid / scale > residual_tol:
            continue
        finite.append(lam)
    return np.asarray(finite, dtype=complex)


def _identically_singular(m, n, probes: int = 3) -> bool:
    # det(m - z n) sampled at a few generic shifts; all zero (relative to a
    # Hadamard-type scale) means the pencil is singular as a polynomial.
    rng = np.random.default_rng(1234)
    for _ in range(probes):
        z = rng.standard_normal() + 1j * rng.standard_normal()
        pencil = m - z * n
        sign, logdet = np.linalg.slogdet(pencil)
        row_norms = np.linalg.norm(pencil, axis=1)
        if np.any(row_norms == 0.0):
            continue
        if sign != 0 and logdet - np.sum(np.log(row_norms)) > np.log(1e-12):
            return False
    return True
