"""Parametrized operator paths and the elementary segment constructors.

A segment is a family ``lam -> matrix`` on ``[0, 1]`` of one of three closed
forms (affine, planar rotation, right-affine) together with the invariants it
claims to preserve.  Segments are re-evaluated from their parameters; samples
are never stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import (
    NoSpareDirection,
    NotComplementary,
    NotInRange,
    NumericallySingular,
    OutOfDomain,
    ShapeMismatch,
)
from .linalg import DEFAULT_TOL, as_matrix, column_space, null_space, numerical_rank, row_space
from .projectors import GraphOperator, graph_operator, oblique_projector
from .subspace import COMPLEMENT_TOL, Subspace, complementarity, orthogonal_complement

JOINT_TOL = 1e-9

INVARIANT_KINDS = (
    "constant_rank",
    "constant_kernel",
    "constant_range",
    "complemented_range",
    "complemented_kernel",
    "invertible",
)


@dataclass(frozen=True, eq=False)
class Invariant:
    """A property a segment claims for every ``lam`` in ``[0, 1]``.

    ``complemented_range`` with subspace ``N`` means ``R(P(lam)) (+) N`` is the
    codomain; ``complemented_kernel`` with ``R`` means ``N(P(lam)) (+) R`` is
    the domain.
    """

    kind: str
    rank: int | None = None
    subspace: Subspace | None = None

    def __post_init__(self):
        if self.kind not in INVARIANT_KINDS:
            raise ValueError(f"unknown invariant kind {self.kind!r}")

    @classmethod
    def constant_rank(cls, k):
        return cls("constant_rank", rank=int(k))

    @classmethod
    def constant_kernel(cls, N):
        return cls("constant_kernel", subspace=N)

    @classmethod
    def constant_range(cls, R):
        return cls("constant_range", subspace=R)

    @classmethod
    def complemented_range(cls, N):
        return cls("complemented_range", subspace=N)

    @classmethod
    def complemented_kernel(cls, R):
        return cls("complemented_kernel", subspace=R)

    @classmethod
    def invertible(cls):
        return cls("invertible")

    def transposed(self) -> "Invariant":
        """The matching claim for the transposed family ``lam -> P(lam).T``."""
        swap = {
            "constant_kernel": "constant_range",
            "constant_range": "constant_kernel",
            "complemented_range": "complemented_kernel",
            "complemented_kernel": "complemented_range",
        }
        if self.kind not in swap:
            return self
        return Invariant(swap[self.kind], subspace=orthogonal_complement(self.subspace))

    def __repr__(self):
        if self.rank is not None:
            return f"{self.kind}({self.rank})"
        if self.subspace is not None:
            return f"{self.kind}(dim {self.subspace.dim})"
        return self.kind


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def _cos_sin(theta):
    c, s = np.cos(theta), np.sin(theta)
    # multiples of pi/2 must land on exact 0/1 so that flips end exactly
    c = np.where(np.abs(c) < 1e-15, 0.0, c)
    s = np.where(np.abs(s) < 1e-15, 0.0, s)
    return c, s


@dataclass(frozen=True, eq=False, kw_only=True)
class PathSegment:
    """Base class; ``reverse`` runs the family backwards (``lam -> 1 - lam``)."""

    invariants: tuple = ()
    provenance: str = ""
    reverse: bool = False

    kind = "segment"

    def __post_init__(self):
        object.__setattr__(self, "invariants", tuple(self.invariants))
        if not self.invariants:
            raise ValueError("a segment must declare at least one invariant")

    @property
    def shape(self):
        raise NotImplementedError

    def _batch(self, lams: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sample(self, lams) -> np.ndarray:
        """Evaluate at every ``lam`` in ``lams``; returns ``(len(lams), rows, cols)``."""
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        if np.any((lams < 0.0) | (lams > 1.0)):
            raise OutOfDomain("segment parameter must lie in [0, 1]")
        if self.reverse:
            lams = 1.0 - lams
        return self._batch(lams)

    def __call__(self, lam: float) -> np.ndarray:
        return self.sample([lam])[0]

    def start(self) -> np.ndarray:
        return self(0.0)

    def end(self) -> np.ndarray:
        return self(1.0)

    def reversed(self) -> "PathSegment":
        return replace(self, reverse=not self.reverse)

    def with_invariants(self, *extra: Invariant) -> "PathSegment":
        have = {repr(i) for i in self.invariants}
        new = tuple(i for i in extra if repr(i) not in have)
        return replace(self, invariants=self.invariants + new)

    def transposed(self) -> "PathSegment":
        raise NotImplementedError


@dataclass(frozen=True, eq=False, kw_only=True)
class AffineSegment(PathSegment):
    """``lam -> base + lam * direction``."""

    base: np.ndarray
    direction: np.ndarray

    kind = "affine"

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "base", _frozen(self.base))
        object.__setattr__(self, "direction", _frozen(self.direction))
        if self.base.shape != self.direction.shape:
            raise ShapeMismatch("base and direction shapes differ")

    @property
    def shape(self):
        return self.base.shape

    def _batch(self, lams):
        return self.base[None] + lams[:, None, None] * self.direction[None]

    def transposed(self):
        return replace(
            self,
            base=self.base.T,
            direction=self.direction.T,
            invariants=tuple(i.transposed() for i in self.invariants),
        )


@dataclass(frozen=True, eq=False, kw_only=True)
class RightAffineSegment(PathSegment):
    """``lam -> left @ (base + lam * direction)``."""

    left: np.ndarray
    base: np.ndarray
    direction: np.ndarray

    kind = "right_affine"

    def __post_init__(self):
        super().__post_init__()
        for name in ("left", "base", "direction"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if self.base.shape != self.direction.shape or self.left.shape[1] != self.base.shape[0]:
            raise ShapeMismatch("incompatible right-affine factors")

    @property
    def shape(self):
        return (self.left.shape[0], self.base.shape[1])

    def _batch(self, lams):
        lb = self.left @ self.base
        ld = self.left @ self.direction
        return lb[None] + lams[:, None, None] * ld[None]

    def transposed(self):
        # (L (A + lam B)).T is affine in lam with the products folded in
        return AffineSegment(
            base=(self.left @ self.base).T,
            direction=(self.left @ self.direction).T,
            invariants=tuple(i.transposed() for i in self.invariants),
            provenance=self.provenance,
            reverse=self.reverse,
        )


def rotation_matrix(n, u, v, theta) -> np.ndarray:
    """Rotation by ``theta`` in the plane of orthonormal ``u, v`` (u toward v)."""
    c, s = _cos_sin(theta)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (
        np.eye(n)
        + (c - 1.0) * (np.outer(u, u) + np.outer(v, v))
        + s * (np.outer(v, u) - np.outer(u, v))
    )


@dataclass(frozen=True, eq=False, kw_only=True)
class RotationSegment(PathSegment):
    """Planar rotation applied to a fixed matrix.

    ``side="left"``: ``lam -> G(lam * angle) @ base``.
    ``side="right"``: ``lam -> base @ G(lam * angle).T``, the transpose of a
    left rotation, so transposing a segment just swaps sides.
    ``G(theta)`` rotates the plane of the orthonormal pair ``(u, v)`` by
    ``theta`` and fixes its orthogonal complement.
    """

    base: np.ndarray
    u: np.ndarray
    v: np.ndarray
    angle: float
    side: str = "left"

    kind = "rotation"

    def __post_init__(self):
        super().__post_init__()
        for name in ("base", "u", "v"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "angle", float(self.angle))
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        n = self.base.shape[0] if self.side == "left" else self.base.shape[1]
        if self.u.shape != (n,) or self.v.shape != (n,):
            raise ShapeMismatch("rotation plane vectors do not match the base")
        gram = np.array([[self.u @ self.u, self.u @ self.v], [self.v @ self.u, self.v @ self.v]])
        if np.abs(gram - np.eye(2)).max() > 1e-10:
            raise ValueError("rotation plane vectors must be orthonormal")

    @property
    def shape(self):
        return self.base.shape

    def _batch(self, lams):
        c, s = _cos_sin(lams * self.angle)
        c = (c - 1.0)[:, None, None]
        s = s[:, None, None]
        T, u, v = self.base, self.u, self.v
        if self.side == "left":
            uT, vT = u @ T, v @ T
            sym = np.outer(u, uT) + np.outer(v, vT)
            skew = np.outer(v, uT) - np.outer(u, vT)
        else:
            Tu, Tv = T @ u, T @ v
            sym = np.outer(Tu, u) + np.outer(Tv, v)
            skew = np.outer(Tu, v) - np.outer(Tv, u)
        return T[None] + c * sym[None] + s * skew[None]

    def transposed(self):
        return replace(
            self,
            base=self.base.T,
            side="right" if self.side == "left" else "left",
            invariants=tuple(i.transposed() for i in self.invariants),
        )


@dataclass(frozen=True, eq=False)
class OperatorPath:
    """Concatenation of segments, each given equal parameter time.

    Segment ``i`` of ``n`` covers ``t`` in ``[i/n, (i+1)/n]``; a joint belongs
    to the earlier segment.
    """

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a path needs at least one segment")
        shape = segs[0].shape
        for i, (a, b) in enumerate(zip(segs, segs[1:])):
            if b.shape != shape:
                raise ShapeMismatch(f"segment {i + 1} has shape {b.shape}, expected {shape}")
            end, start = a.end(), b.start()
            gap = float(np.linalg.norm(end - start))
            if gap > JOINT_TOL * (1.0 + float(np.linalg.norm(end))):
                raise ValueError(f"segments {i} and {i + 1} do not meet (gap {gap:.3e})")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def constant(cls, T, invariants=None, provenance="constant") -> "OperatorPath":
        T = as_matrix(T)
        if invariants is None:
            invariants = (Invariant.constant_rank(numerical_rank(T).rank),)
        seg = AffineSegment(
            base=T, direction=np.zeros_like(T), invariants=invariants, provenance=provenance
        )
        return cls((seg,))

    @classmethod
    def concat(cls, *parts) -> "OperatorPath":
        segs = []
        for p in parts:
            segs.extend(p.segments if isinstance(p, OperatorPath) else [p])
        return cls(tuple(segs))

    @property
    def shape(self):
        return self.segments[0].shape

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def start(self) -> np.ndarray:
        return self.segments[0].start()

    def end(self) -> np.ndarray:
        return self.segments[-1].end()

    def reversed(self) -> "OperatorPath":
        return OperatorPath(tuple(s.reversed() for s in reversed(self.segments)))

    def transposed(self) -> "OperatorPath":
        return OperatorPath(tuple(s.transposed() for s in self.segments))

    def locate(self, t: float):
        """Segment index and local parameter for global time ``t``."""
        if not 0.0 <= t <= 1.0:
            raise OutOfDomain(f"t = {t} is outside [0, 1]")
        n = len(self.segments)
        idx = max(math.ceil(t * n) - 1, 0)
        local = min(max(t * n - idx, 0.0), 1.0)
        return idx, local

    def max_joint_gap(self) -> float:
        gaps = [
            float(np.linalg.norm(a.end() - b.start()))
            for a, b in zip(self.segments, self.segments[1:])
        ]
        return max(gaps, default=0.0)


def evaluate(path: OperatorPath, t: float) -> np.ndarray:
    """Matrix on ``path`` at global time ``t`` in ``[0, 1]``."""
    idx, local = path.locate(float(t))
    return path.segments[idx](local)


# ---------------------------------------------------------------------------
# segment constructors


def seg_range_align(T0, Fstar: Subspace, N: Subspace, tol=DEFAULT_TOL) -> AffineSegment:
    """Slide the range of ``T0`` onto ``Fstar`` keeping the kernel fixed.

    With ``codomain = R(T0) (+) N = Fstar (+) N`` write ``R(T0)`` as the graph
    of ``alpha: Fstar -> N``.  The segment is ``lam -> (P + lam alpha P) T0``
    where ``P`` projects onto ``Fstar`` along ``N``; it runs from ``P T0`` at
    ``lam = 0`` to ``T0`` at ``lam = 1``.  Every point has kernel ``N(T0)`` and
    range ``{y + lam alpha y}``, which is complementary to ``N``.
    """
    T0 = as_matrix(T0, "T0")
    rng = column_space(T0, tol)
    if complementarity(rng, N) < COMPLEMENT_TOL:
        raise NotComplementary("N is not a complement of R(T0)")
    if complementarity(Fstar, N) < COMPLEMENT_TOL:
        raise NotComplementary("N is not a complement of Fstar")
    alpha = graph_operator(rng, Fstar, N)
    P = oblique_projector(Fstar, N).matrix
    PT = P @ T0
    return AffineSegment(
        base=PT,
        direction=alpha.matrix @ PT,
        invariants=(Invariant.constant_kernel(null_space(T0, tol)), Invariant.complemented_range(N)),
        provenance="range alignment",
    )


def seg_kernel_align(T0, R0: Subspace, Estar: Subspace, tol=DEFAULT_TOL) -> RightAffineSegment:
    """Slide the kernel of ``T0`` onto ``Estar`` keeping the range fixed.

    With ``domain = N(T0) (+) R0 = Estar (+) R0`` write ``N(T0)`` as the graph
    of ``alpha: Estar -> R0``.  The segment is
    ``lam -> T0 (I - Q - lam alpha Q)`` with ``Q`` the projector onto
    ``Estar`` along ``R0``; it runs from ``T0 (I - Q)`` (kernel ``Estar``) to
    ``T0``.  The factor in parentheses fixes ``R0`` pointwise, so the range
    stays ``R(T0)``.
    """
    T0 = as_matrix(T0, "T0")
    kernel = null_space(T0, tol)
    if complementarity(kernel, R0) < COMPLEMENT_TOL:
        raise NotComplementary("R0 is not a complement of N(T0)")
    if complementarity(Estar, R0) < COMPLEMENT_TOL:
        raise NotComplementary("R0 is not a complement of Estar")
    alpha = graph_operator(kernel, Estar, R0)
    Q = oblique_projector(Estar, R0).matrix
    n = T0.shape[1]
    return RightAffineSegment(
        left=T0,
        base=np.eye(n) - Q,
        direction=-(alpha.matrix @ Q),
        invariants=(
            Invariant.constant_range(column_space(T0, tol)),
            Invariant.complemented_kernel(R0),
        ),
        provenance="kernel alignment",
    )


def seg_sign_flip(T, flip_dir=None, spare_dir=None, side="codomain", tol=DEFAULT_TOL) -> RotationSegment:
    """Rank-preserving path from ``D_e T`` to ``T`` (``D_e`` reflects ``e``).

    ``side="codomain"``: ``e`` lies in ``R(T)`` and ``f`` is orthogonal to
    ``R(T)``; the path is ``lam -> G(pi lam) D_e T`` with ``G`` rotating the
    ``(e, f)`` plane.  At ``lam = 1`` both ``e`` and ``f`` are negated, which
    undoes the reflection because ``T`` has no ``f`` component.

    ``side="domain"``: ``e`` lies in the row space and ``f`` in ``N(T)``; the
    path is ``lam -> T D_e G(pi lam).T``, the transpose of the codomain
    construction applied to ``T.T``.

    ``e`` defaults to the first basis vector of the range (row space) and ``f``
    to the first basis vector of its orthogonal complement.
    """
    T = as_matrix(T)
    k = numerical_rank(T, tol).rank
    if side == "codomain":
        home = column_space(T, tol)
    elif side == "domain":
        home = row_space(T, tol)
    else:
        raise ValueError("side must be 'codomain' or 'domain'")
    n = home.ambient_dim
    if home.dim == 0:
        raise NotInRange("T is zero; there is nothing to flip")
    if flip_dir is None:
        e = home.basis[:, 0].copy()
    else:
        e = np.asarray(flip_dir, dtype=float).reshape(n)
        e = e / np.linalg.norm(e)
        if not home.contains(e):
            raise NotInRange(f"flip direction is not in the {'range' if side == 'codomain' else 'row space'} of T")
    if spare_dir is None:
        spare = orthogonal_complement(home)
        if spare.dim == 0:
            raise NoSpareDirection(
                f"T has full {'column' if side == 'codomain' else 'row'} rank; no spare direction"
            )
        f = spare.basis[:, 0].copy()
    else:
        f = np.asarray(spare_dir, dtype=float).reshape(n)
        f = f / np.linalg.norm(f)
        if np.linalg.norm(home.basis.T @ f) > 1e-8:
            raise ValueError("spare direction must be orthogonal to the flipped space")
    # keep e exactly unit and f exactly orthogonal to it
    f = f - (f @ e) * e
    f = f / np.linalg.norm(f)
    if side == "codomain":
        base = T - 2.0 * np.outer(e, e @ T)
        fixed = Invariant.constant_kernel(null_space(T, tol))
        rot_side = "left"
    else:
        base = T - 2.0 * np.outer(T @ e, e)
        fixed = Invariant.constant_range(column_space(T, tol))
        rot_side = "right"
    return RotationSegment(
        base=base,
        u=e,
        v=f,
        angle=np.pi,
        side=rot_side,
        invariants=(Invariant.constant_rank(k), fixed),
        provenance=f"sign flip ({side})",
    )


def straight_line_flip_path(Estar: Subspace, R: Subspace, alpha: GraphOperator) -> AffineSegment:
    """The straight-line family ``(1 - 2 lam) P + (1 - lam) alpha P``.

    ``P`` projects onto ``Estar`` along ``R``.  The family starts at the
    projector onto the graph of ``alpha`` and ends at ``-P``.  It is recorded
    because it does *not* stay in the set it is meant to: at ``lam = 1/2``
    it equals ``alpha P / 2``, whose range lies inside ``R``.  The declared
    invariants are the claims that fail (kernel ``R``, range complementing
    ``R``), so a certifier run on it must report a failure.
    """
    if complementarity(Estar, R) < COMPLEMENT_TOL:
        raise NotComplementary("Estar and R are not complementary")
    P = oblique_projector(Estar, R).matrix
    A = alpha.matrix @ P
    return AffineSegment(
        base=P + A,
        direction=-2.0 * P - A,
        invariants=(Invariant.constant_kernel(R), Invariant.complemented_range(R)),
        provenance="straight-line sign flip (defective)",
    )


# ---------------------------------------------------------------------------
# invertible matrices


def gl_connect(Q, tol=DEFAULT_TOL):
    """Path inside the invertible matrices from ``Q`` to ``I`` or ``D``.

    ``D = diag(-1, 1, ..., 1)`` is the target when ``det Q < 0``.  The path is
    a polar segment ``W ((1 - lam) S + lam I)`` from ``Q = W S`` to the
    orthogonal factor ``W``, followed by at most ``n(n-1)/2`` planar
    rotations that reduce ``W`` column by column, last column first, so that
    any leftover sign sits in the first coordinate.  A final straight step of
    rounding size makes the path end at ``I`` or ``D`` exactly.

    Returns
    -------
    (OperatorPath, str)
        The path and ``"identity"`` or ``"reflection"``.
    """
    Q = as_matrix(Q, "Q")
    n = Q.shape[0]
    if Q.shape != (n, n):
        raise ShapeMismatch("Q must be square")
    s = np.linalg.svd(Q, compute_uv=False)
    if s[0] == 0.0 or s[-1] / s[0] <= tol:
        raise NumericallySingular(f"Q is not safely invertible (sigma ratio {s[-1] / max(s[0], 1e-300):.3e})")
    inv = (Invariant.invertible(), Invariant.constant_rank(n))
    segments = []
    W, S = scipy.linalg.polar(Q, side="right")
    current = Q
    if np.linalg.norm(S - np.eye(n)) > 1e-12 * n:
        seg = AffineSegment(
            base=Q,
            direction=W @ (np.eye(n) - S),
            invariants=inv,
            provenance="polar factor homotopy",
        )
        segments.append(seg)
        current = seg.end()
    eye = np.eye(n)
    for j in range(n - 1, 0, -1):
        for i in range(j - 1, -1, -1):
            a, b = current[j, j], current[i, j]
            if abs(b) <= 1e-15 and a > 0:
                continue
            theta = math.atan2(-b, a)
            seg = RotationSegment(
                base=current,
                u=eye[j],
                v=eye[i],
                angle=theta,
                invariants=inv,
                provenance="planar rotation",
            )
            segments.append(seg)
            current = seg.end()
    tag = "reflection" if current[0, 0] < 0 else "identity"
    target = reflection_representative(n) if tag == "reflection" else eye
    if segments and not np.array_equal(current, target):
        # rotations land on the target only to rounding; this step is exact
        # because target - current is computed without error when they are close
        seg = AffineSegment(
            base=current,
            direction=target - current,
            invariants=inv,
            provenance="rounding cleanup",
        )
        segments.append(seg)
    if not segments:
        return OperatorPath.constant(Q, invariants=inv, provenance="already canonical"), tag
    return OperatorPath(tuple(segments)), tag


def reflection_representative(n: int) -> np.ndarray:
    D = np.eye(n)
    D[0, 0] = -1.0
    return D


def canonical_straight_line_flip() -> AffineSegment:
    """The 2x2 instance ``Estar = span e1``, ``R = span e2``, ``alpha: e1 -> e2``."""
    Estar = Subspace.coordinate(2, 0)
    R = Subspace.coordinate(2, 1)
    alpha = GraphOperator(Estar, R, np.array([[1.0]]))
    return straight_line_flip_path(Estar, R, alpha)
