"""Dense real-matrix numerics: numerical rank, column/null spaces, solves,
and the restricted inverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotComplementary, NumericallySingular, ShapeMismatch, SingularMatrix
from .subspace import Subspace, _reorthonormalize, complementarity, COMPLEMENT_TOL

DEFAULT_TOL = 1e-9


def as_matrix(a, name="matrix") -> np.ndarray:
    """Coerce to a finite 2-D float64 array (a copy)."""
    m = np.array(a, dtype=float, copy=True)
    if m.ndim == 1:
        m = m[None, :]
    if m.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise ShapeMismatch(f"{name} must have positive dimensions, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


@dataclass(frozen=True)
class RankDecision:
    """Outcome of a relative singular-value rank test.

    ``leading_gap`` is ``sigma_rank / sigma_1`` (1.0 for the zero matrix) and
    ``trailing_ratio`` is ``sigma_{rank+1} / sigma_1`` (0.0 if there is no
    such singular value or the matrix is zero).
    """

    rank: int
    leading_gap: float
    trailing_ratio: float
    tolerance: float


def _decide(s: np.ndarray, tol: float) -> RankDecision:
    if s.size == 0 or s[0] == 0.0:
        return RankDecision(0, 1.0, 0.0, tol)
    rank = int(np.count_nonzero(s > tol * s[0]))
    trailing = float(s[rank] / s[0]) if rank < s.size else 0.0
    return RankDecision(rank, float(s[rank - 1] / s[0]), trailing, tol)


def numerical_rank(T, tol=DEFAULT_TOL) -> RankDecision:
    """Count singular values above ``tol * sigma_1``."""
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    s = np.linalg.svd(as_matrix(T), compute_uv=False)
    return _decide(s, tol)


def column_space(T, tol=DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical column space ``R(T)``."""
    T = as_matrix(T)
    u, s, _ = np.linalg.svd(T, full_matrices=False)
    rank = _decide(s, tol).rank
    return Subspace(_reorthonormalize(u[:, :rank]))


def null_space(T, tol=DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical null space ``N(T)``."""
    T = as_matrix(T)
    _, s, vt = np.linalg.svd(T, full_matrices=True)
    rank = _decide(s, tol).rank
    return Subspace(_reorthonormalize(vt[rank:].T.copy()))


def row_space(T, tol=DEFAULT_TOL) -> Subspace:
    """Orthogonal complement of the null space."""
    return column_space(as_matrix(T).T, tol)


def solve(A, B, tol=DEFAULT_TOL) -> np.ndarray:
    """Solve ``A X = B`` for square, well-conditioned ``A``.

    Raises
    ------
    SingularMatrix
        If ``sigma_min(A) / sigma_max(A) <= tol``.
    """
    A = as_matrix(A, "A")
    B = np.asarray(B, dtype=float)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"A must be square, got {A.shape}")
    if B.shape[0] != A.shape[0]:
        raise ShapeMismatch(f"B has {B.shape[0]} rows, A has {A.shape[0]}")
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0 or s[-1] / s[0] <= tol:
        raise SingularMatrix(f"condition check failed (sigma ratio {s[-1] / max(s[0], 1e-300):.3e})")
    return np.linalg.solve(A, B)


def oblique_projector_matrix(range_space: Subspace, kernel_space: Subspace) -> np.ndarray:
    """Idempotent matrix with the given range and kernel.

    With ``M = [B_range | B_kernel]`` the projector is
    ``B_range @ (M^-1)[:dim range]``.
    """
    n = range_space.ambient_dim
    if complementarity(range_space, kernel_space) < COMPLEMENT_TOL:
        raise NotComplementary(
            f"range (dim {range_space.dim}) and kernel (dim {kernel_space.dim}) "
            f"do not split R^{n}"
        )
    if range_space.dim == 0:
        return np.zeros((n, n))
    M = np.hstack([range_space.basis, kernel_space.basis])
    coords = solve(M, np.eye(n), tol=COMPLEMENT_TOL / 10)
    return range_space.basis @ coords[: range_space.dim]


def restricted_inverse(T, R: Subspace, N_star: Subspace, tol=DEFAULT_TOL) -> np.ndarray:
    """Inverse of ``T`` on the complement ``R`` of its kernel, zero on ``N_star``.

    The result ``T+`` satisfies ``T+ y = (T|_R)^-1 y`` for ``y`` in ``R(T)`` and
    ``T+ y = 0`` for ``y`` in ``N_star``.  Consequently ``T+ T`` is the
    projector onto ``R`` along ``N(T)`` and ``T T+`` is the projector onto
    ``R(T)`` along ``N_star``.

    Raises
    ------
    NotComplementary
        If ``R`` does not complement ``N(T)`` or ``N_star`` does not
        complement ``R(T)``.
    NumericallySingular
        If ``T`` restricted to ``R`` is ill-conditioned beyond ``tol``.
    """
    T = as_matrix(T)
    rows, cols = T.shape
    if R.ambient_dim != cols or N_star.ambient_dim != rows:
        raise ShapeMismatch("R must live in the domain and N_star in the codomain")
    kernel = null_space(T, tol)
    rng = column_space(T, tol)
    if complementarity(R, kernel) < COMPLEMENT_TOL:
        raise NotComplementary("R is not a complement of N(T)")
    if complementarity(rng, N_star) < COMPLEMENT_TOL:
        raise NotComplementary("N_star is not a complement of R(T)")
    k = R.dim
    if k == 0:
        return np.zeros((cols, rows))
    C = T @ R.basis
    s = np.linalg.svd(C, compute_uv=False)
    if s[-1] <= tol * s[0]:
        raise NumericallySingular(f"T restricted to R has sigma ratio {s[-1] / s[0]:.3e}")
    P = oblique_projector_matrix(rng, N_star)
    coeffs, *_ = np.linalg.lstsq(C, P, rcond=None)
    return R.basis @ coeffs
