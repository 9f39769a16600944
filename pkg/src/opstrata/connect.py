"""Explicit paths inside rank strata, Fredholm strata and equivalence classes.

Each connector reduces two operators to a common shape with alignment
segments, bridges what is left with an invertible factor acting on a shared
range, and, when that factor has negative determinant, finishes with one
rank-preserving sign flip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ChainInvalid,
    FredholmDataMismatch,
    HypothesisViolated,
    InfeasibleHop,
    NumericalDegeneracy,
    OutOfRange,
    RankMismatch,
    ShapeMismatch,
    StratumDisconnected,
)
from .linalg import (
    DEFAULT_TOL,
    as_matrix,
    column_space,
    null_space,
    numerical_rank,
    restricted_inverse,
)
from .paths import (
    AffineSegment,
    Invariant,
    OperatorPath,
    RotationSegment,
    gl_connect,
    seg_kernel_align,
    seg_range_align,
    seg_sign_flip,
)
from .subspace import (
    COMPLEMENT_TOL,
    common_complement,
    complementarity,
    orthogonal_complement,
)

# relative defect allowed when checking the factorization target = Q base
_FACTOR_TOL = 1e-8


@dataclass(frozen=True)
class StratumSpec:
    """Either ``rank`` (matrices of rank k) or ``fredholm`` (kernel dim m,
    cokernel dim n) inside ``codomain_dim x domain_dim`` matrices."""

    variant: str
    domain_dim: int
    codomain_dim: int
    k: int | None = None
    m: int | None = None
    n: int | None = None

    def __post_init__(self):
        if self.domain_dim < 1 or self.codomain_dim < 1:
            raise OutOfRange("dimensions must be positive")
        if self.variant == "rank":
            if self.k is None or not 0 <= self.k <= min(self.domain_dim, self.codomain_dim):
                raise OutOfRange(f"rank {self.k} impossible for {self.shape} matrices")
        elif self.variant == "fredholm":
            if self.m is None or self.n is None or self.m < 0 or self.n < 0:
                raise OutOfRange("fredholm spec needs nonnegative m and n")
            if self.m > self.domain_dim or self.n > self.codomain_dim:
                raise OutOfRange("kernel or cokernel larger than the space")
            if self.domain_dim - self.m != self.codomain_dim - self.n:
                raise OutOfRange(
                    f"dim E - m = {self.domain_dim - self.m} differs from "
                    f"dim F - n = {self.codomain_dim - self.n}"
                )
        else:
            raise ValueError(f"unknown stratum variant {self.variant!r}")

    @classmethod
    def rank_stratum(cls, k, shape):
        return cls("rank", domain_dim=shape[1], codomain_dim=shape[0], k=int(k))

    @classmethod
    def fredholm(cls, m, n, shape):
        return cls("fredholm", domain_dim=shape[1], codomain_dim=shape[0], m=int(m), n=int(n))

    @classmethod
    def parse(cls, text: str, shape) -> "StratumSpec":
        """Parse ``rank:k`` or ``fredholm:m,n`` for matrices of ``shape``."""
        name, _, args = text.partition(":")
        try:
            values = [int(a) for a in args.split(",")] if args else []
        except ValueError:
            raise ValueError(f"bad stratum {text!r}") from None
        if name == "rank" and len(values) == 1:
            return cls.rank_stratum(values[0], shape)
        if name == "fredholm" and len(values) == 2:
            return cls.fredholm(values[0], values[1], shape)
        raise ValueError(f"bad stratum {text!r}; expected rank:k or fredholm:m,n")

    @property
    def shape(self):
        return (self.codomain_dim, self.domain_dim)

    @property
    def rank(self) -> int:
        if self.variant == "rank":
            return self.k
        return self.domain_dim - self.m

    def __str__(self):
        if self.variant == "rank":
            return f"rank:{self.k}"
        return f"fredholm:{self.m},{self.n}"


# ---------------------------------------------------------------------------
# the invertible bridge shared by all connectors


def _lift(seg, U, base, extra):
    """Turn a k x k segment acting on coordinates of span(U) into ``U q U^T base``."""
    Ut_base = U.T @ base
    if isinstance(seg, AffineSegment):
        lifted = AffineSegment(
            base=U @ seg.base @ Ut_base,
            direction=U @ seg.direction @ Ut_base,
            invariants=extra,
            provenance=f"invertible factor: {seg.provenance}",
            reverse=seg.reverse,
        )
    elif isinstance(seg, RotationSegment) and seg.side == "left":
        lifted = RotationSegment(
            base=U @ seg.base @ Ut_base,
            u=U @ seg.u,
            v=U @ seg.v,
            angle=seg.angle,
            invariants=extra,
            provenance=f"invertible factor: {seg.provenance}",
            reverse=seg.reverse,
        )
    else:
        raise TypeError(f"cannot lift segment of kind {seg.kind}")
    return lifted


def _invertible_bridge(base, target, kernel_complement, range_complement, tol, label):
    """Segments from ``base`` to ``target``, two maps with equal kernel and range.

    ``target = Q base`` with ``Q = target base+`` invertible on ``R(base)``,
    ``base+`` being the inverse of ``base`` on ``kernel_complement`` extended
    by zero on ``range_complement``.  ``Q`` is connected to ``I`` or to a
    reflection inside the invertible maps of ``R(base)``; a reflection is then
    undone by a sign flip through a direction outside the range, or, if the
    range is everything, through a kernel direction.
    """
    k = numerical_rank(base, tol).rank
    rng = column_space(base, tol)
    kernel = null_space(base, tol)
    shared = (
        Invariant.constant_rank(k),
        Invariant.constant_kernel(kernel),
        Invariant.constant_range(rng),
    )
    if k == 0:
        return []
    base_plus = restricted_inverse(base, kernel_complement, range_complement, tol)
    Q_full = target @ base_plus
    defect = np.linalg.norm(Q_full @ base - target)
    if defect > _FACTOR_TOL * max(1.0, np.linalg.norm(target)):
        raise NumericalDegeneracy(f"{label}: target is not Q @ base (defect {defect:.3e})")

    U, _, Vt = np.linalg.svd(base, full_matrices=False)
    U, V = U[:, :k], Vt[:k].T
    q = U.T @ Q_full @ U
    try:
        gl_path, tag = gl_connect(q, tol)
    except ValueError as exc:
        raise NumericalDegeneracy(f"{label}: invertible factor is degenerate ({exc})") from exc

    # forward: target -> ... -> U E U^T base
    forward = [_lift(s, U, base, shared) for s in gl_path.segments]
    if tag == "reflection":
        rows, cols = base.shape
        if k < rows:
            flip = seg_sign_flip(base, flip_dir=U[:, 0], side="codomain", tol=tol)
        elif k < cols:
            # D_u base = base D_v for the leading singular pair (u, v)
            flip = seg_sign_flip(base, flip_dir=V[:, 0], side="domain", tol=tol)
        else:
            raise StratumDisconnected(
                "square invertible maps with determinants of opposite sign "
                "lie in different components"
            )
        forward.append(flip.with_invariants(Invariant.constant_rank(k)))
    return [s.reversed() for s in reversed(forward)]


def _with_rank(segments, k):
    return [s.with_invariants(Invariant.constant_rank(k)) for s in segments]


def _build(segments, label):
    try:
        return OperatorPath(tuple(segments))
    except ValueError as exc:
        raise NumericalDegeneracy(f"{label}: {exc}") from exc


# ---------------------------------------------------------------------------
# connectors


def connect_rank_stratum(T1, T2, tol=DEFAULT_TOL) -> OperatorPath:
    """Path from ``T1`` to ``T2`` through matrices of the same rank k.

    Order of the pieces:

    1. ``T1 -> L1``: kernel alignment onto a common complement ``N0`` of the
       two row spaces, so ``L1 = T1`` on ``R1`` and 0 on ``N0``.
    2. ``L1 -> M``: invertible bridge, ``M = Q L1`` with
       ``Q = M L1+`` invertible on ``R(T1)``, plus a sign flip if needed.
    3. ``M -> L2``: range alignment, ``M`` being ``L2`` projected onto
       ``R(T1)`` along a common complement ``N*`` of the two ranges.
    4. ``L2 -> T2``: kernel alignment, as in step 1.

    Raises
    ------
    RankMismatch
        If the numerical ranks differ.
    StratumDisconnected
        For square invertible inputs whose determinants differ in sign.
    NumericalDegeneracy
        If an intermediate construction loses its certificate.
    """
    T1 = as_matrix(T1, "T1")
    T2 = as_matrix(T2, "T2")
    if T1.shape != T2.shape:
        raise ShapeMismatch(f"shapes differ: {T1.shape} vs {T2.shape}")
    k1 = numerical_rank(T1, tol).rank
    k2 = numerical_rank(T2, tol).rank
    if k1 != k2:
        raise RankMismatch(f"ranks differ: {k1} vs {k2}")
    k = k1
    if np.array_equal(T1, T2):
        return OperatorPath.constant(T1, provenance="identical endpoints")
    if k == 0:
        # both are the zero matrix up to the scale-free rank test
        seg = AffineSegment(
            base=T1,
            direction=T2 - T1,
            invariants=(Invariant.constant_rank(0),),
            provenance="zero stratum",
        )
        return OperatorPath((seg,))

    R1 = orthogonal_complement(null_space(T1, tol))
    R2 = orthogonal_complement(null_space(T2, tol))
    N0 = common_complement(R1, R2)
    to_T1 = seg_kernel_align(T1, R1, N0, tol)
    to_T2 = seg_kernel_align(T2, R2, N0, tol)
    L1, L2 = to_T1.start(), to_T2.start()

    range1 = column_space(T1, tol)
    Nstar = common_complement(range1, column_space(T2, tol))
    to_L2 = seg_range_align(L2, range1, Nstar, tol)
    M = to_L2.start()

    bridge = _invertible_bridge(L1, M, R1, Nstar, tol, "rank stratum")
    segments = [to_T1.reversed(), *bridge, to_L2, to_T2]
    return _build(_with_rank(segments, k), "rank stratum")


def fredholm_data(T, tol=DEFAULT_TOL):
    """``(kernel dim, cokernel dim)`` of ``T``."""
    T = as_matrix(T)
    k = numerical_rank(T, tol).rank
    return T.shape[1] - k, T.shape[0] - k


def connect_fredholm(T1, T2, spec: StratumSpec, tol=DEFAULT_TOL) -> OperatorPath:
    """Path from ``T1`` to ``T2`` keeping kernel dim m and cokernel dim n.

    Ranges are aligned first onto a common complement ``F*`` of the range
    complements, then the kernel of the second map is aligned with that of the
    first across a common complement ``R``, and the remaining invertible factor
    on ``F*`` is bridged.  Needs ``n > 0``, which guarantees a direction
    outside the range for the sign flip.

    Raises
    ------
    FredholmDataMismatch
        If ``n == 0`` or either input does not have kernel dim m and cokernel
        dim n.
    """
    if spec.variant != "fredholm":
        raise FredholmDataMismatch("connect_fredholm needs a fredholm stratum spec")
    if spec.n == 0:
        raise FredholmDataMismatch("cokernel dimension n must be positive")
    T1 = as_matrix(T1, "T1")
    T2 = as_matrix(T2, "T2")
    for name, T in (("T1", T1), ("T2", T2)):
        if T.shape != spec.shape:
            raise FredholmDataMismatch(f"{name} has shape {T.shape}, spec wants {spec.shape}")
        data = fredholm_data(T, tol)
        if data != (spec.m, spec.n):
            raise FredholmDataMismatch(
                f"{name} has kernel/cokernel dims {data}, spec wants {(spec.m, spec.n)}"
            )
    if np.array_equal(T1, T2):
        return OperatorPath.constant(T1, provenance="identical endpoints")
    k = spec.rank

    N1 = orthogonal_complement(column_space(T1, tol))
    N2 = orthogonal_complement(column_space(T2, tol))
    Fstar = common_complement(N1, N2)
    to_T1 = seg_range_align(T1, Fstar, N1, tol)
    to_T2 = seg_range_align(T2, Fstar, N2, tol)
    T1p, T2p = to_T1.start(), to_T2.start()

    kernel1 = null_space(T1, tol)
    R = common_complement(kernel1, null_space(T2, tol))
    to_T2p = seg_kernel_align(T2p, R, kernel1, tol)
    M = to_T2p.start()

    bridge = _invertible_bridge(T1p, M, R, N1, tol, "fredholm stratum")
    segments = [to_T1.reversed(), *bridge, to_T2p, to_T2]
    return _build(_with_rank(segments, k), "fredholm stratum")


# ---------------------------------------------------------------------------
# equivalence classes


@dataclass(frozen=True, eq=False)
class EquivalenceChain:
    """Intermediate kernels/ranges linking two operators, with witnesses.

    ``kernel_witnesses[i]`` complements both the i-th and (i+1)-th entries of
    ``[N(T0), *kernel_chain, N(T*)]``; ``range_witnesses`` do the same for
    ``[R(T0), *range_chain, R(T*)]``.
    """

    kernel_chain: tuple
    range_chain: tuple
    kernel_witnesses: tuple
    range_witnesses: tuple

    def reversed(self) -> "EquivalenceChain":
        """The chain read from ``T*`` back to ``T0``."""
        return EquivalenceChain(
            tuple(reversed(self.kernel_chain)),
            tuple(reversed(self.range_chain)),
            tuple(reversed(self.kernel_witnesses)),
            tuple(reversed(self.range_witnesses)),
        )

    def validate(self, T0, Tstar, tol=DEFAULT_TOL):
        """Raise :class:`ChainInvalid` unless every witness complements its pair."""
        if len(self.kernel_witnesses) != len(self.kernel_chain) + 1:
            raise ChainInvalid("need one kernel witness per adjacent pair")
        if len(self.range_witnesses) != len(self.range_chain) + 1:
            raise ChainInvalid("need one range witness per adjacent pair")
        kseq = [null_space(T0, tol), *self.kernel_chain, null_space(Tstar, tol)]
        rseq = [column_space(T0, tol), *self.range_chain, column_space(Tstar, tol)]
        for label, seq, wits in (("kernel", kseq, self.kernel_witnesses), ("range", rseq, self.range_witnesses)):
            for i, w in enumerate(wits):
                for S in (seq[i], seq[i + 1]):
                    if S.ambient_dim != w.ambient_dim or complementarity(S, w) < COMPLEMENT_TOL:
                        raise ChainInvalid(f"{label} witness {i} does not complement its neighbours")


def _witnesses(seq, label):
    out = []
    for i, (a, b) in enumerate(zip(seq, seq[1:])):
        if a.ambient_dim != b.ambient_dim or a.dim != b.dim:
            raise InfeasibleHop(
                f"{label} hop {i}: subspaces of dim {a.dim} (in R^{a.ambient_dim}) and "
                f"{b.dim} (in R^{b.ambient_dim}) have no common complement"
            )
        out.append(common_complement(a, b))
    return tuple(out)


def build_chain(T0, Tstar, kernel_hops=(), range_hops=(), tol=DEFAULT_TOL) -> EquivalenceChain:
    """Witnesses for the kernel chain ``N(T0), *kernel_hops, N(T*)`` and the
    range chain ``R(T0), *range_hops, R(T*)``.

    Raises
    ------
    InfeasibleHop
        At the first adjacent pair of unequal dimension.
    """
    T0 = as_matrix(T0, "T0")
    Tstar = as_matrix(Tstar, "Tstar")
    if T0.shape != Tstar.shape:
        raise ShapeMismatch("T0 and Tstar must have the same shape")
    kernel_hops, range_hops = tuple(kernel_hops), tuple(range_hops)
    kseq = [null_space(T0, tol), *kernel_hops, null_space(Tstar, tol)]
    rseq = [column_space(T0, tol), *range_hops, column_space(Tstar, tol)]
    return EquivalenceChain(
        kernel_chain=kernel_hops,
        range_chain=range_hops,
        kernel_witnesses=_witnesses(kseq, "kernel"),
        range_witnesses=_witnesses(rseq, "range"),
    )


def connect_equiv_class(T0, Tstar, chain: EquivalenceChain, tol=DEFAULT_TOL) -> OperatorPath:
    """Path from ``T0`` to ``T*`` that walks the chain.

    Kernel hops ``T_k = T_{k-1} P_k`` (``P_k`` projecting onto the witness
    ``R_k`` along ``N_k``) keep the range at ``R(T0)``; range hops
    ``T_{m,i} = P'_i T_{m,i-1}`` (onto ``F_i`` along ``S_i``) keep the kernel
    at ``N_m``.  ``T*`` is then brought to the same kernel and range by one
    kernel and one range alignment, and the invertible bridge closes the gap.

    Raises
    ------
    HypothesisViolated
        If ``R(T0)`` is the whole codomain.
    ChainInvalid
        If the chain does not link ``T0`` and ``T*``.
    """
    T0 = as_matrix(T0, "T0")
    Tstar = as_matrix(Tstar, "Tstar")
    k = numerical_rank(T0, tol).rank
    if k == T0.shape[0]:
        raise HypothesisViolated("R(T0) is the whole codomain; codim R(T0) must be positive")
    chain.validate(T0, Tstar, tol)
    if numerical_rank(Tstar, tol).rank != k:
        raise ChainInvalid("T0 and T* have different ranks")
    if not chain.kernel_chain and not chain.range_chain and np.array_equal(T0, Tstar):
        return OperatorPath.constant(T0, provenance="identical endpoints")

    segments = []
    current = T0
    for Nk, Rk in zip(chain.kernel_chain, chain.kernel_witnesses):
        seg = seg_kernel_align(current, Rk, Nk, tol)
        segments.append(seg.reversed())
        current = seg.start()
    for Fi, Si in zip(chain.range_chain, chain.range_witnesses):
        seg = seg_range_align(current, Fi, Si, tol)
        segments.append(seg.reversed())
        current = seg.start()

    R_last, S_last = chain.kernel_witnesses[-1], chain.range_witnesses[-1]
    N_m = chain.kernel_chain[-1] if chain.kernel_chain else null_space(T0, tol)
    F_n = chain.range_chain[-1] if chain.range_chain else column_space(T0, tol)
    to_Tstar = seg_kernel_align(Tstar, R_last, N_m, tol)
    A = to_Tstar.start()
    to_A = seg_range_align(A, F_n, S_last, tol)
    B = to_A.start()

    bridge = _invertible_bridge(current, B, R_last, S_last, tol, "equivalence class")
    segments += [*bridge, to_A, to_Tstar]
    return _build(_with_rank(segments, k), "equivalence class")
