"""Tangent spaces of rank strata and the dimension count of each stratum.

The tangent space at ``X`` is ``M(X) = {T : T N(X) in R(X)}``.  Its
dimension is computed here as the nullity of the linear map
``T -> C^T T K`` (``C`` an orthonormal basis of ``R(X)^perp``, ``K`` of
``N(X)``) written out as an explicit matrix on the entries of ``T``.  The
closed form ``(m + n - k) k`` is only ever used as the value to compare
against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalDegeneracy, OutOfRange, ShapeMismatch
from .linalg import DEFAULT_TOL, as_matrix, column_space, null_space, numerical_rank
from .subspace import orthogonal_complement

# a rank decision is ambiguous if some singular value ratio lies this close
# (multiplicatively) to the threshold
_AMBIGUITY_BAND = 1e3


@dataclass(frozen=True)
class TangentSpaceReport:
    base_point_rank: int
    ambient_dim: int
    tangent_dim: int
    complement_dim: int
    formula_dim: int
    residual: float

    @property
    def agrees(self) -> bool:
        return self.tangent_dim == self.formula_dim


def stratum_dim(m: int, n: int, k: int) -> int:
    """Dimension ``(m + n - k) k`` of the rank-k matrices of size m x n."""
    if m < 1 or n < 1 or not 0 <= k <= min(m, n):
        raise OutOfRange(f"need 0 <= k <= min(m, n), got m={m}, n={n}, k={k}")
    return (m + n - k) * k


def _normal_map(X, tol):
    """Matrix of ``T -> C^T T K`` acting on column-major ``vec(T)``."""
    C = orthogonal_complement(column_space(X, tol)).basis
    K = null_space(X, tol).basis
    return np.kron(K.T, C.T), C, K


def tangent_membership(X, T, tol=1e-9, rank_tol=DEFAULT_TOL):
    """Whether ``T`` maps ``N(X)`` into ``R(X)``.

    Returns ``(member, residual)`` with ``residual = ||C^T T K||_F`` and
    ``member`` true iff ``residual <= tol * ||T||_F``.
    """
    X = as_matrix(X, "X")
    T = as_matrix(T, "T")
    if X.shape != T.shape:
        raise ShapeMismatch(f"X has shape {X.shape}, T has {T.shape}")
    C = orthogonal_complement(column_space(X, rank_tol)).basis
    K = null_space(X, rank_tol).basis
    residual = float(np.linalg.norm(C.T @ T @ K))
    return residual <= tol * float(np.linalg.norm(T)), residual


def tangent_space_dim(X, tol=DEFAULT_TOL) -> TangentSpaceReport:
    """Nullity of the normal map at ``X`` together with the closed form.

    Raises
    ------
    NumericalDegeneracy
        If a singular value of ``X`` sits within a factor 1e3 of the rank
        threshold, so that the rank itself is in doubt.
    """
    X = as_matrix(X, "X")
    m, n = X.shape
    s = np.linalg.svd(X, compute_uv=False)
    decision = numerical_rank(X, tol)
    if s[0] > 0:
        r = s / s[0]
        near = (r > tol / _AMBIGUITY_BAND) & (r < tol * _AMBIGUITY_BAND)
        if np.any(near):
            raise NumericalDegeneracy(
                f"rank decision is ambiguous: singular value ratio {r[near][0]:.3e} near tol {tol}"
            )
    k = decision.rank
    A, _, _ = _normal_map(X, tol)
    ambient = m * n
    if A.shape[0] == 0:
        constraint_rank = 0
        residual = 0.0
    else:
        _, sa, vt = np.linalg.svd(A, full_matrices=True)
        constraint_rank = int(np.count_nonzero(sa > 1e-10 * sa[0])) if sa[0] > 0 else 0
        tangent_basis = vt[constraint_rank:].T
        residual = float(np.linalg.norm(A @ tangent_basis, ord=2)) if tangent_basis.size else 0.0
    tangent = ambient - constraint_rank
    return TangentSpaceReport(
        base_point_rank=k,
        ambient_dim=ambient,
        tangent_dim=tangent,
        complement_dim=constraint_rank,
        formula_dim=stratum_dim(m, n, k),
        residual=residual,
    )


def canonical_embeddings(m: int, n: int, k: int):
    """The rank-k pair ``I_k`` (n x m, a map R^m -> R^n) and ``I_k+`` (m x n).

    Both are zero except for ones on the first ``k`` diagonal entries, so
    ``I_k I_k+ I_k = I_k`` and ``I_k+ I_k I_k+ = I_k+`` hold exactly.
    """
    if m < 1 or n < 1 or not 0 <= k <= min(m, n):
        raise OutOfRange(f"need 0 <= k <= min(m, n), got m={m}, n={n}, k={k}")
    Ik = np.zeros((n, m))
    Ik_plus = np.zeros((m, n))
    idx = np.arange(k)
    Ik[idx, idx] = 1.0
    Ik_plus[idx, idx] = 1.0
    return Ik, Ik_plus


def canonical_projectors(m: int, n: int, k: int):
    """``(I_n - I_k I_k+, I_m - I_k+ I_k)``: diagonal 0/1 projectors that kill
    ``R(I_k)`` and ``R(I_k+)`` respectively."""
    Ik, Ik_plus = canonical_embeddings(m, n, k)
    return np.eye(n) - Ik @ Ik_plus, np.eye(m) - Ik_plus @ Ik


def normal_slice_dim(m: int, n: int, k: int) -> int:
    """Dimension of ``{P1 T P2}`` over all ``T`` (n x m) for the canonical
    projectors ``P1, P2``, computed as the rank of ``P2^T (x) P1``."""
    P1, P2 = canonical_projectors(m, n, k)
    op = np.kron(P2.T, P1)
    if not op.any():
        return 0
    return int(np.linalg.matrix_rank(op))


def splits_ambient(m: int, n: int, k: int) -> bool:
    """Whether ``M(I_k)`` and the normal slice together span all n x m matrices
    with trivial intersection."""
    Ik, _ = canonical_embeddings(m, n, k)
    A, _, _ = _normal_map(Ik, DEFAULT_TOL)
    total = m * n
    if A.shape[0] == 0:
        tangent = np.eye(total)
    else:
        _, sa, vt = np.linalg.svd(A, full_matrices=True)
        tangent = vt[int(np.count_nonzero(sa > 1e-10 * sa[0])):].T
    P1, P2 = canonical_projectors(m, n, k)
    op = np.kron(P2.T, P1)
    u, so, _ = np.linalg.svd(op)
    slice_basis = u[:, : int(np.count_nonzero(so > 1e-10))]
    stacked = np.hstack([tangent, slice_basis])
    return stacked.shape[1] == total and np.linalg.matrix_rank(stacked) == total


def stratification_report(m: int, n: int, seed=0):
    """One entry per rank ``k = 0 .. min(m, n)`` for maps ``R^m -> R^n``.

    Each entry is ``(k, stratum_dim, certificate)`` where the certificate
    records the nullity-based tangent dimension at a random rank-k point and
    whether it matches.  A final check confirms that a generic matrix lands
    in the top stratum.
    """
    from .certify import random_stratum_point

    if m < 1 or n < 1:
        raise OutOfRange("m and n must be positive")
    rng = np.random.default_rng(seed)
    entries = []
    for k in range(min(m, n) + 1):
        X = random_stratum_point(n, m, k, seed=int(rng.integers(2**31)))
        report = tangent_space_dim(X)
        entries.append(
            (
                k,
                stratum_dim(m, n, k),
                {
                    "tangent_dim": report.tangent_dim,
                    "rank": report.base_point_rank,
                    "agrees": report.agrees and report.base_point_rank == k,
                },
            )
        )
    generic = rng.standard_normal((n, m))
    top = numerical_rank(generic).rank
    if top != min(m, n):
        raise NumericalDegeneracy("generic sample is not in the top stratum")
    return entries
