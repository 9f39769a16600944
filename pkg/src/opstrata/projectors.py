"""Oblique projectors and graph operators.

A pair of complementary subspaces ``E* (+) R`` determines the projector onto
``E*`` along ``R``.  Any other complement ``E1`` of ``R`` is the graph
``{x + alpha x : x in E*}`` of a unique linear map ``alpha: E* -> R``, and
the projector onto ``E1`` along ``R`` is obtained from the old one by the
update ``P + alpha P``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotComplementary, ShapeMismatch
from .linalg import oblique_projector_matrix, solve
from .subspace import (
    COMPLEMENT_TOL,
    Subspace,
    _reorthonormalize,
    complementarity,
    largest_angle,
)

_SAME_SPACE_ANGLE = 1e-8


@dataclass(frozen=True, eq=False)
class GraphOperator:
    """Linear map ``alpha`` from ``domain`` into ``codomain``.

    ``coeffs`` has shape ``(codomain.dim, domain.dim)`` and expresses
    ``alpha`` in the two orthonormal bases.
    """

    domain: Subspace
    codomain: Subspace
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, copy=True).reshape(
            self.codomain.dim, self.domain.dim
        )
        if self.domain.ambient_dim != self.codomain.ambient_dim:
            raise ShapeMismatch("domain and codomain must share the ambient space")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def matrix(self) -> np.ndarray:
        """``alpha`` as an ambient matrix, zero on ``domain``'s orthogonal complement."""
        return self.codomain.basis @ self.coeffs @ self.domain.basis.T

    def scaled(self, factor: float) -> "GraphOperator":
        return GraphOperator(self.domain, self.codomain, factor * self.coeffs)


@dataclass(frozen=True, eq=False)
class ObliqueProjector:
    matrix: np.ndarray
    range_space: Subspace
    kernel_space: Subspace

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float, copy=True)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def complement(self) -> "ObliqueProjector":
        """``I - P``: range and kernel swap roles."""
        n = self.matrix.shape[0]
        return ObliqueProjector(np.eye(n) - self.matrix, self.kernel_space, self.range_space)

    def idempotency_defect(self) -> float:
        P = self.matrix
        return float(np.linalg.norm(P @ P - P))


def oblique_projector(range_space: Subspace, kernel_space: Subspace) -> ObliqueProjector:
    """Projector onto ``range_space`` along ``kernel_space``.

    Raises
    ------
    NotComplementary
        If the two subspaces do not split the ambient space.
    """
    matrix = oblique_projector_matrix(range_space, kernel_space)
    return ObliqueProjector(matrix, range_space, kernel_space)


def graph_operator(E1: Subspace, Estar: Subspace, R: Subspace) -> GraphOperator:
    """The unique ``alpha: Estar -> R`` with ``E1 = {x + alpha x : x in Estar}``.

    For each basis vector ``x`` of ``Estar`` the vector ``e`` of ``E1`` with
    ``P e = x`` (``P`` projecting onto ``Estar`` along ``R``) is found, and
    ``alpha x = e - x``.
    """
    for name, S in (("E1", E1), ("Estar", Estar)):
        if complementarity(S, R) < COMPLEMENT_TOL:
            raise NotComplementary(f"{name} is not a complement of R")
    if Estar.dim == 0:
        return GraphOperator(Estar, R, np.zeros((R.dim, 0)))
    P = oblique_projector_matrix(Estar, R)
    # coordinates of P e in the Estar basis, as e ranges over the E1 basis
    G = Estar.basis.T @ P @ E1.basis
    C = solve(G, np.eye(Estar.dim), tol=COMPLEMENT_TOL / 10)
    e = E1.basis @ C
    coeffs = R.basis.T @ (e - Estar.basis)
    return GraphOperator(Estar, R, coeffs)


def graph_subspace(alpha: GraphOperator) -> Subspace:
    """The complement ``{x + alpha x}`` of ``alpha.codomain``."""
    vectors = alpha.domain.basis + alpha.codomain.basis @ alpha.coeffs
    if vectors.shape[1] == 0:
        return alpha.domain
    return Subspace(_reorthonormalize(vectors))


def projector_update(P: ObliqueProjector, alpha: GraphOperator) -> ObliqueProjector:
    """Projector onto the graph of ``alpha`` along ``P``'s kernel: ``P + A P``.

    ``P`` must project onto ``alpha.domain`` along ``alpha.codomain``.
    """
    if (
        P.range_space.dim != alpha.domain.dim
        or P.kernel_space.dim != alpha.codomain.dim
        or P.matrix.shape[0] != alpha.domain.ambient_dim
    ):
        raise ShapeMismatch("alpha does not map P's range into P's kernel")
    if (
        largest_angle(P.range_space, alpha.domain) > _SAME_SPACE_ANGLE
        or largest_angle(P.kernel_space, alpha.codomain) > _SAME_SPACE_ANGLE
    ):
        raise ShapeMismatch("alpha's domain/codomain differ from P's range/kernel")
    matrix = P.matrix + alpha.matrix @ P.matrix
    return ObliqueProjector(matrix, graph_subspace(alpha), P.kernel_space)
