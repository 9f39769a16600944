"""Linear subspaces of R^n stored as orthonormal bases, and their arithmetic.

Intersections and sums share one decision rule: a direction counts as common
to two subspaces when its principal angle is below ``ANGLE_TOL`` radians.
Because both operations read the same singular values, the identity
``dim(S1 + S2) = dim S1 + dim S2 - dim(S1 & S2)`` holds exactly for every
call, not just approximately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbientMismatch, DimensionMismatch, NotComplementary

ANGLE_TOL = 1e-7
COMPLEMENT_TOL = 1e-8
ORTHONORMAL_TOL = 1e-12


def _orth(vectors, tol=1e-9):
    """Orthonormal basis of the column span, relative singular-value cut."""
    vectors = np.asarray(vectors, dtype=float)
    n, d = vectors.shape
    if d == 0 or not np.any(vectors):
        return np.zeros((n, 0))
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    keep = int(np.count_nonzero(s > tol * s[0]))
    return u[:, :keep]


def _reorthonormalize(basis):
    # one QR pass removes the rounding left over by SVD-based constructions
    if basis.shape[1] == 0:
        return basis
    q, r = np.linalg.qr(basis)
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of R^ambient_dim given by an orthonormal basis.

    ``basis`` has shape ``(ambient_dim, dim)``; ``dim`` may be zero.  The array
    is stored read-only.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float, copy=True)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-D array")
        if b.shape[1] > b.shape[0]:
            raise ValueError("more basis vectors than ambient dimensions")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis has non-finite entries")
        defect = np.abs(b.T @ b - np.eye(b.shape[1])).max(initial=0.0)
        if defect > ORTHONORMAL_TOL:
            raise ValueError(f"basis is not orthonormal (defect {defect:.2e})")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, tol=1e-9) -> "Subspace":
        """Subspace spanned by the columns of ``vectors``.

        Columns are orthonormalized by SVD; singular values below
        ``tol * sigma_max`` are treated as zero.
        """
        vectors = np.asarray(vectors, dtype=float)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        return cls(_reorthonormalize(_orth(vectors, tol)))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim))

    @classmethod
    def coordinate(cls, ambient_dim: int, *axes: int) -> "Subspace":
        """Span of the listed coordinate axes (0-based)."""
        return cls(np.eye(ambient_dim)[:, list(axes)])

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        return self.basis @ self.basis.T

    def residual(self, vectors) -> np.ndarray:
        """Component of ``vectors`` orthogonal to the subspace."""
        vectors = np.asarray(vectors, dtype=float)
        return vectors - self.basis @ (self.basis.T @ vectors)

    def contains(self, vectors, tol=1e-8) -> bool:
        vectors = np.asarray(vectors, dtype=float)
        scale = max(1.0, float(np.linalg.norm(vectors)))
        return float(np.linalg.norm(self.residual(vectors))) <= tol * scale

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def _check_ambient(s1: Subspace, s2: Subspace):
    if s1.ambient_dim != s2.ambient_dim:
        raise AmbientMismatch(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )


def principal_angles(s1: Subspace, s2: Subspace) -> np.ndarray:
    """Principal angles in ascending order, ``min(dim s1, dim s2)`` of them.

    Small angles are taken from sines and large ones from cosines, which keeps
    both ends of the range accurate.
    """
    _check_ambient(s1, s2)
    a, b = s1.basis, s2.basis
    if a.shape[1] < b.shape[1]:
        a, b = b, a
    if b.shape[1] == 0:
        return np.zeros(0)
    c = a.T @ b
    cos = np.clip(np.linalg.svd(c, compute_uv=False), 0.0, 1.0)
    sin = np.clip(np.linalg.svd(b - a @ c, compute_uv=False)[::-1], 0.0, 1.0)
    return np.where(cos**2 < 0.5, np.arccos(cos), np.arcsin(sin))


def largest_angle(s1: Subspace, s2: Subspace) -> float:
    """Largest principal angle; ``pi/2`` when the dimensions differ."""
    _check_ambient(s1, s2)
    if s1.dim != s2.dim:
        return float(np.pi / 2)
    if s1.dim == 0:
        return 0.0
    return float(principal_angles(s1, s2).max())


def complementarity(s1: Subspace, s2: Subspace) -> float:
    """Smallest singular value of the stacked basis ``[B1 | B2]``.

    Positive exactly when ``s1 (+) s2`` is the whole space; 0 when the
    dimensions do not add up.
    """
    _check_ambient(s1, s2)
    if s1.dim + s2.dim != s1.ambient_dim:
        return 0.0
    if s1.ambient_dim == 0:
        return 1.0
    stacked = np.hstack([s1.basis, s2.basis])
    return float(np.linalg.svd(stacked, compute_uv=False)[-1])


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A certified direct sum ``part_a (+) part_b = R^ambient_dim``."""

    part_a: Subspace
    part_b: Subspace
    sigma_min: float = 0.0

    def __post_init__(self):
        sigma = complementarity(self.part_a, self.part_b)
        if sigma < COMPLEMENT_TOL:
            raise NotComplementary(
                f"subspaces of dims {self.part_a.dim} and {self.part_b.dim} in "
                f"R^{self.part_a.ambient_dim} are not complementary "
                f"(sigma_min {sigma:.3e})"
            )
        object.__setattr__(self, "sigma_min", sigma)

    @property
    def ambient_dim(self) -> int:
        return self.part_a.ambient_dim


def is_complementary(s1: Subspace, s2: Subspace) -> bool:
    return complementarity(s1, s2) >= COMPLEMENT_TOL


def _split_against(s1: Subspace, s2: Subspace):
    """SVD of the part of ``s2`` orthogonal to ``s1``.

    Returns ``(u, sines, vt)`` where the singular values are the sines of the
    principal angles seen from ``s2``.
    """
    m = s1.residual(s2.basis)
    u, sines, vt = np.linalg.svd(m, full_matrices=False)
    return u, sines, vt


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    """Orthonormal basis of ``s1 + s2``."""
    _check_ambient(s1, s2)
    if s2.dim == 0:
        return s1
    u, sines, _ = _split_against(s1, s2)
    new = u[:, sines > np.sin(ANGLE_TOL)]
    new = s1.residual(new)  # sweep out rounding drift toward s1
    extra = _reorthonormalize(new) if new.shape[1] else new
    return Subspace(_reorthonormalize(np.hstack([s1.basis, extra])))


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Orthonormal basis of ``s1 & s2``.

    The directions of ``s2`` whose principal angle to ``s1`` is below
    ``ANGLE_TOL`` are returned, i.e. the right singular vectors of
    ``(I - P1) B2`` with singular value below ``sin(ANGLE_TOL)``.
    """
    _check_ambient(s1, s2)
    if s1.dim == 0 or s2.dim == 0:
        return Subspace.zero(s1.ambient_dim)
    _, sines, vt = _split_against(s1, s2)
    common = vt[sines <= np.sin(ANGLE_TOL)].T
    if common.shape[1] == 0:
        return Subspace.zero(s1.ambient_dim)
    return Subspace(_reorthonormalize(s2.basis @ common))


def orthogonal_complement(s: Subspace) -> Subspace:
    """Orthonormal basis of the orthogonal complement."""
    n, d = s.basis.shape
    if d == 0:
        return Subspace.full(n)
    if d == n:
        return Subspace.zero(n)
    q, _ = np.linalg.qr(s.basis, mode="complete")
    comp = q[:, d:]
    comp = comp - s.basis @ (s.basis.T @ comp)
    return Subspace(_reorthonormalize(comp))


def relative_complement(outer: Subspace, inner: Subspace) -> Subspace:
    """Orthogonal complement of ``inner`` taken inside ``outer``.

    ``inner`` must be (numerically) contained in ``outer``.
    """
    _check_ambient(outer, inner)
    want = outer.dim - inner.dim
    if want < 0:
        raise DimensionMismatch("inner subspace is larger than outer one")
    if want == 0:
        return Subspace.zero(outer.ambient_dim)
    u, _, _ = np.linalg.svd(inner.residual(outer.basis), full_matrices=False)
    comp = inner.residual(u[:, :want])
    return Subspace(_reorthonormalize(comp))


@dataclass(frozen=True, eq=False)
class CommonComplementParts:
    """The pieces of the common-complement construction, kept for inspection.

    ``intersection`` is E1 & E2, ``star1``/``star2`` complete it inside E1 and
    E2, ``outer`` completes E1 + E2 in the ambient space, ``graph`` is the
    graph ``{x + alpha x}`` of the pairing isomorphism ``star1 -> star2``,
    and ``complement = outer (+) graph``.
    """

    intersection: Subspace
    star1: Subspace
    star2: Subspace
    outer: Subspace
    graph: Subspace
    complement: Subspace
    sum_dim: int


def common_complement_parts(e1: Subspace, e2: Subspace) -> CommonComplementParts:
    """Run the common-complement construction and return every ingredient.

    The pairing ``alpha`` sends the i-th principal vector ``u_i`` of ``star1``
    to ``-v_i``, where ``v_i`` is the matching principal vector of ``star2``
    (``u_i . v_i >= 0``).  The graph vector ``u_i - v_i`` is then at least
    45 degrees away from both ``star1`` and ``star2``, so the complement is
    well conditioned even when E1 and E2 nearly touch.
    """
    _check_ambient(e1, e2)
    if e1.dim != e2.dim:
        raise DimensionMismatch(
            f"common complement needs equal dimensions, got {e1.dim} and {e2.dim}"
        )
    n = e1.ambient_dim
    inter = intersect(e1, e2)
    star1 = relative_complement(e1, inter)
    star2 = relative_complement(e2, inter)
    total = subspace_sum(e1, e2)
    outer = orthogonal_complement(total)
    if star1.dim == 0:
        graph = Subspace.zero(n)
    else:
        u, _, vt = np.linalg.svd(star1.basis.T @ star2.basis)
        pu = star1.basis @ u
        pv = star2.basis @ vt.T
        graph = Subspace.span(pu - pv)
    complement = Subspace(_reorthonormalize(np.hstack([outer.basis, graph.basis])))
    return CommonComplementParts(
        intersection=inter,
        star1=star1,
        star2=star2,
        outer=outer,
        graph=graph,
        complement=complement,
        sum_dim=total.dim,
    )


def common_complement(e1: Subspace, e2: Subspace) -> Subspace:
    """A subspace R with ``E1 (+) R = E2 (+) R = R^n``.

    Raises
    ------
    DimensionMismatch
        If ``dim E1 != dim E2``; no common complement exists then.
    """
    return common_complement_parts(e1, e2).complement
