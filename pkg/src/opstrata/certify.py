"""Sampled certification of operator paths, and seeded instance generators."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .connect import StratumSpec
from .errors import OutOfRange
from .linalg import DEFAULT_TOL
from .paths import OperatorPath
from .subspace import Subspace

# acceptance thresholds
TRAILING_MAX = 1e-8
LEADING_MIN = 1e-6
ANGLE_MAX = 1e-7
COMPLEMENT_MIN = 1e-8
INVERTIBLE_MIN = 1e-6
JOINT_MAX = 1e-9

DEFAULT_SAMPLES = 100


@dataclass
class SegmentRecord:
    segment_index: int
    declared_invariants: list
    provenance: str
    min_leading_gap: float = 1.0
    max_trailing_ratio: float = 0.0
    max_kernel_angle: float = 0.0
    max_range_angle: float = 0.0
    min_complement_sigma: float = float("inf")
    min_inverse_ratio: float = float("inf")
    endpoint_mismatch: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class PathCertificate:
    samples_per_segment: int
    stratum: str
    per_segment: list
    passed: bool
    first_failure: str | None
    wall_time: float

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = self.verdict
        for rec in out["per_segment"]:
            for key, value in rec.items():
                if isinstance(value, float) and not np.isfinite(value):
                    rec[key] = None
        return out

    def worst(self, name: str, reduce=max) -> float:
        values = [getattr(r, name) for r in self.per_segment]
        return reduce(values)


def sample_grid(samples: int) -> np.ndarray:
    """Uniform grid on ``[0, 1]``; the midpoint is always included."""
    grid = np.linspace(0.0, 1.0, samples)
    if samples % 2 == 0:
        grid = np.sort(np.append(grid, 0.5))
    return grid


def _max_angle(bases: np.ndarray, target: Subspace) -> np.ndarray:
    """Largest principal angle between each stacked basis and ``target``.

    Dimensions agree by construction; the sine is ``||(I - P) B||_2``.
    """
    if target.dim == 0:
        return np.zeros(bases.shape[0])
    resid = bases - target.basis @ (target.basis.T @ bases)
    sines = np.linalg.norm(resid, ord=2, axis=(1, 2))
    return np.arcsin(np.clip(sines, 0.0, 1.0))


def _stacked_sigma(bases: np.ndarray, other: Subspace) -> np.ndarray:
    n = other.ambient_dim
    if bases.shape[2] + other.dim != n:
        return np.zeros(bases.shape[0])
    stacked = np.concatenate(
        [bases, np.broadcast_to(other.basis, (bases.shape[0],) + other.basis.shape)], axis=2
    )
    return np.linalg.svd(stacked, compute_uv=False)[:, -1]


def _check_segment(seg, idx, spec: StratumSpec, lams, tol) -> SegmentRecord:
    rec = SegmentRecord(idx, [repr(i) for i in seg.invariants], seg.provenance)
    mats = seg.sample(lams)
    count, rows, cols = mats.shape
    U, s, Vt = np.linalg.svd(mats, full_matrices=True)
    s1 = s[:, 0]
    safe = np.where(s1 > 0, s1, 1.0)
    ratios = s / safe[:, None]
    ratios[s1 == 0] = 0.0
    ranks = np.count_nonzero(ratios > tol, axis=1)

    def fail(msg, where=None):
        if where is not None:
            msg = f"{msg} at lam={lams[where]:.4g}"
        rec.failures.append(f"segment {idx}: {msg}")

    k = spec.rank
    bad = np.flatnonzero(ranks != k)
    if bad.size:
        fail(f"rank {ranks[bad[0]]} instead of {k} ({spec})", bad[0])
    if k > 0:
        lead = ratios[:, k - 1]
        rec.min_leading_gap = float(lead.min())
        if rec.min_leading_gap < LEADING_MIN:
            fail(f"leading gap {rec.min_leading_gap:.3e} < {LEADING_MIN}", int(lead.argmin()))
    if k < s.shape[1]:
        trail = ratios[:, k]
        rec.max_trailing_ratio = float(trail.max())
        if rec.max_trailing_ratio > TRAILING_MAX:
            fail(f"trailing ratio {rec.max_trailing_ratio:.3e} > {TRAILING_MAX}", int(trail.argmax()))
    if bad.size:
        return rec  # subspace checks assume the declared rank

    range_bases = U[:, :, :k]
    kernel_bases = np.transpose(Vt[:, k:, :], (0, 2, 1))
    for inv in seg.invariants:
        if inv.kind == "constant_rank":
            if inv.rank != k:
                fail(f"declares rank {inv.rank} but stratum has rank {k}")
        elif inv.kind in ("constant_kernel", "constant_range"):
            is_kernel = inv.kind == "constant_kernel"
            bases = kernel_bases if is_kernel else range_bases
            if bases.shape[2] != inv.subspace.dim:
                fail(f"{inv.kind}: dimension {bases.shape[2]} vs declared {inv.subspace.dim}")
                continue
            angles = _max_angle(bases, inv.subspace)
            worst = float(angles.max())
            if is_kernel:
                rec.max_kernel_angle = max(rec.max_kernel_angle, worst)
            else:
                rec.max_range_angle = max(rec.max_range_angle, worst)
            if worst > ANGLE_MAX:
                fail(f"{inv.kind} angle {worst:.3e} > {ANGLE_MAX}", int(angles.argmax()))
        elif inv.kind in ("complemented_range", "complemented_kernel"):
            bases = range_bases if inv.kind == "complemented_range" else kernel_bases
            sig = _stacked_sigma(bases, inv.subspace)
            rec.min_complement_sigma = min(rec.min_complement_sigma, float(sig.min()))
            if sig.min() < COMPLEMENT_MIN:
                fail(f"{inv.kind} sigma_min {sig.min():.3e} < {COMPLEMENT_MIN}", int(sig.argmin()))
        elif inv.kind == "invertible":
            if rows != cols:
                fail("invertible declared for a non-square segment")
                continue
            inv_ratio = ratios[:, -1]
            rec.min_inverse_ratio = min(rec.min_inverse_ratio, float(inv_ratio.min()))
            if inv_ratio.min() < INVERTIBLE_MIN:
                fail(f"sigma_min/sigma_max {inv_ratio.min():.3e} < {INVERTIBLE_MIN}", int(inv_ratio.argmin()))
    return rec


def certify(path: OperatorPath, spec: StratumSpec, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL) -> PathCertificate:
    """Sample every segment and check the stratum plus declared invariants.

    Each segment is evaluated on ``sample_grid(samples)``.  Every sample must
    have the stratum's rank with ``trailing_ratio <= 1e-8`` and
    ``leading_gap >= 1e-6``.  Kernel/range constancy is measured by the
    largest principal angle (``<= 1e-7``), complementarity by the smallest
    singular value of the stacked bases (``>= 1e-8``) and invertibility by
    ``sigma_min / sigma_max`` (``>= 1e-6``).  Joints between segments may not
    differ by more than ``1e-9 (1 + ||end||)``.

    Failures are reported in the certificate, never raised.
    """
    if samples < 2:
        raise ValueError("need at least two samples per segment")
    started = time.perf_counter()
    lams = sample_grid(samples)
    records = []
    segs = path.segments
    if path.shape != spec.shape:
        rec = SegmentRecord(0, [], "")
        rec.failures.append(f"path shape {path.shape} does not match stratum shape {spec.shape}")
        records.append(rec)
    else:
        for idx, seg in enumerate(segs):
            rec = _check_segment(seg, idx, spec, lams, tol)
            if idx + 1 < len(segs):
                end = seg.end()
                gap = float(np.linalg.norm(end - segs[idx + 1].start()))
                rec.endpoint_mismatch = gap
                if gap > JOINT_MAX * (1.0 + float(np.linalg.norm(end))):
                    rec.failures.append(f"segment {idx}: joint gap {gap:.3e}")
            records.append(rec)
    failures = [f for r in records for f in r.failures]
    return PathCertificate(
        samples_per_segment=int(lams.size),
        stratum=str(spec),
        per_segment=records,
        passed=not failures,
        first_failure=failures[0] if failures else None,
        wall_time=time.perf_counter() - started,
    )


def random_stratum_point(rows, cols, k, seed=None, min_ratio=1e-3) -> np.ndarray:
    """Seeded ``rows x cols`` matrix of exact rank ``k``.

    Drawn as ``A @ B`` with standard normal ``A`` (rows x k) and ``B``
    (k x cols); draws whose ``sigma_k / sigma_1`` falls below ``min_ratio``
    are rejected and redrawn from the same generator.
    """
    if not 0 <= k <= min(rows, cols):
        raise OutOfRange(f"rank {k} impossible for a {rows}x{cols} matrix")
    rng = np.random.default_rng(seed)
    if k == 0:
        return np.zeros((rows, cols))
    while True:
        T = rng.standard_normal((rows, k)) @ rng.standard_normal((k, cols))
        s = np.linalg.svd(T, compute_uv=False)
        if s[k - 1] / s[0] >= min_ratio:
            return T


def random_subspace(ambient_dim, dim, rng) -> Subspace:
    """Uniformly oriented random subspace."""
    if dim == 0:
        return Subspace.zero(ambient_dim)
    q, _ = np.linalg.qr(rng.standard_normal((ambient_dim, dim)))
    return Subspace(q)
