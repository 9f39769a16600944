import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opstrata import (
    AffineSegment,
    Invariant,
    NoSpareDirection,
    NotComplementary,
    NotInRange,
    NumericallySingular,
    OperatorPath,
    OutOfDomain,
    RightAffineSegment,
    RotationSegment,
    StratumSpec,
    canonical_straight_line_flip,
    certify,
    column_space,
    evaluate,
    gl_connect,
    largest_angle,
    null_space,
    numerical_rank,
    oblique_projector,
    orthogonal_complement,
    random_stratum_point,
    random_subspace,
    reflection_representative,
    seg_kernel_align,
    seg_range_align,
    seg_sign_flip,
)
from opstrata.certify import sample_grid
from opstrata.paths import rotation_matrix

from conftest import e, span

RANK1 = (Invariant.constant_rank(1),)


def affine(A, B, inv=RANK1):
    return AffineSegment(base=np.asarray(A, float), direction=np.asarray(B, float), invariants=inv)


def range_align_instance(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(2, 8, size=2)
    k = int(rng.integers(1, min(m, n) + 1))
    T0 = random_stratum_point(m, n, k, seed=int(rng.integers(2**31)))
    N = random_subspace(m, m - k, rng)
    Fstar = random_subspace(m, k, rng)
    return T0, Fstar, N


def kernel_align_instance(seed):
    T0, Fstar, N = range_align_instance(seed)
    # on the transpose, N has the kernel's dimension and Fstar the row rank
    return T0.T, Fstar, N


class TestSegments:
    def test_affine_endpoints(self):
        s = affine(np.eye(2), [[1.0, 2.0], [3.0, 4.0]], (Invariant.invertible(),))
        assert np.array_equal(s(0.0), np.eye(2))
        assert np.array_equal(s(1.0), np.eye(2) + [[1.0, 2.0], [3.0, 4.0]])

    def test_needs_an_invariant(self):
        with pytest.raises(ValueError):
            AffineSegment(base=np.eye(2), direction=np.eye(2))

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            affine(np.eye(2), np.eye(2)).sample([1.5])

    def test_reversal(self):
        s = affine(np.eye(2), np.eye(2))
        r = s.reversed()
        assert np.array_equal(r(0.0), s(1.0)) and np.array_equal(r(1.0), s(0.0))

    def test_rotation_matrix_is_orthogonal(self):
        G = rotation_matrix(4, e(4, 1).ravel(), e(4, 3).ravel(), 0.3)
        assert np.allclose(G @ G.T, np.eye(4))
        assert np.isclose(np.linalg.det(G), 1.0)

    def test_rotation_segment_matches_closed_form(self, rng):
        T = rng.standard_normal((4, 3))
        u, v = e(4, 0).ravel(), e(4, 2).ravel()
        seg = RotationSegment(base=T, u=u, v=v, angle=1.1, invariants=RANK1)
        for lam in (0.0, 0.25, 1.0):
            assert np.allclose(seg(lam), rotation_matrix(4, u, v, 1.1 * lam) @ T)
        right = RotationSegment(base=T.T, u=u, v=v, angle=1.1, side="right", invariants=RANK1)
        assert np.allclose(right(0.6), seg(0.6).T)

    @given(st.integers(0, 2**31))
    def test_transpose_commutes_with_sampling(self, seed):
        rng = np.random.default_rng(seed)
        L, A, B = (rng.standard_normal((3, 3)) for _ in range(3))
        segs = [
            affine(A, B),
            RightAffineSegment(left=L[:2], base=A, direction=B, invariants=RANK1),
            RotationSegment(base=A, u=e(3, 0).ravel(), v=e(3, 1).ravel(), angle=2.0, invariants=RANK1),
        ]
        lams = np.linspace(0, 1, 7)
        for s in segs:
            assert np.allclose(s.transposed().sample(lams), np.transpose(s.sample(lams), (0, 2, 1)))


class TestOperatorPath:
    def test_two_segment_midpoint(self):
        a = affine(np.zeros((2, 2)), np.eye(2))
        b = affine(np.eye(2), np.eye(2))
        p = OperatorPath((a, b))
        assert np.array_equal(evaluate(p, 0.5), a.end())
        assert np.array_equal(evaluate(p, 0.0), a.start())
        assert np.array_equal(evaluate(p, 1.0), b.end())
        assert np.allclose(evaluate(p, 0.75), 1.5 * np.eye(2))

    def test_rejects_gap(self):
        with pytest.raises(ValueError):
            OperatorPath((affine(np.eye(2), np.eye(2)), affine(np.eye(2), np.eye(2))))

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            evaluate(OperatorPath.constant(np.eye(2)), -0.1)

    def test_reverse_and_transpose(self, rng):
        A = rng.standard_normal((2, 3))
        p = OperatorPath((affine(A, A), affine(2 * A, -A)))
        assert np.array_equal(p.reversed().start(), p.end())
        assert np.allclose(evaluate(p.transposed(), 0.3), evaluate(p, 0.3).T)


class TestRangeAlign:
    def test_small_example(self):
        T0 = np.array([[1.0, 0.0], [1.0, 0.0]])
        seg = seg_range_align(T0, span(e(2, 0)), span(e(2, 1)))
        assert np.allclose(seg(0.0), [[1.0, 0.0], [0.0, 0.0]])
        assert np.allclose(seg(1.0), T0, atol=1e-10)
        kernels = [null_space(M) for M in seg.sample(np.linspace(0, 1, 100))]
        assert all(largest_angle(K, span(e(2, 1))) <= 1e-7 for K in kernels)

    def test_aligned_range_gives_constant_segment(self):
        T0 = random_stratum_point(4, 3, 2, seed=3)
        R = column_space(T0)
        seg = seg_range_align(T0, R, orthogonal_complement(R))
        assert np.linalg.norm(seg.direction) < 1e-12

    def test_not_complementary(self):
        T0 = np.diag([1.0, 0.0])
        with pytest.raises(NotComplementary):
            seg_range_align(T0, span(e(2, 0)), span(e(2, 0)))

    @pytest.mark.parametrize("seed", range(20))
    def test_random_instance_certifies(self, seed):
        T0, Fstar, N = range_align_instance(seed)
        seg = seg_range_align(T0, Fstar, N)
        assert np.linalg.norm(seg.end() - T0) <= 1e-10 * (1 + np.linalg.norm(T0))
        P = oblique_projector(Fstar, N).matrix
        assert np.linalg.norm(seg.start() - P @ T0) <= 1e-10 * (1 + np.linalg.norm(T0))
        k = numerical_rank(T0).rank
        cert = certify(OperatorPath((seg,)), StratumSpec.rank_stratum(k, T0.shape))
        assert cert.passed, cert.first_failure
        assert cert.per_segment[0].max_kernel_angle <= 1e-7
        assert cert.per_segment[0].min_complement_sigma >= 1e-8


class TestKernelAlign:
    def test_small_example(self):
        T0 = np.array([[1.0, 1.0]])
        seg = seg_kernel_align(T0, span(e(2, 0)), span(e(2, 1)))
        assert np.allclose(seg(0.0), [[1.0, 0.0]])
        assert np.allclose(seg(1.0), T0)
        for M in seg.sample(np.linspace(0, 1, 100)):
            assert column_space(M).dim == 1

    def test_aligned_kernel_gives_constant_segment(self):
        T0 = np.diag([1.0, 0.0])
        seg = seg_kernel_align(T0, span(e(2, 0)), null_space(T0))
        assert np.linalg.norm(seg.direction) < 1e-15

    @pytest.mark.parametrize("seed", range(20))
    def test_random_instance_certifies(self, seed):
        T0, R0, Estar = kernel_align_instance(seed)
        seg = seg_kernel_align(T0, R0, Estar)
        assert np.linalg.norm(seg.end() - T0) <= 1e-10 * (1 + np.linalg.norm(T0))
        Q = oblique_projector(R0, Estar).matrix
        assert np.linalg.norm(seg.start() - T0 @ Q) <= 1e-10 * (1 + np.linalg.norm(T0))
        k = numerical_rank(T0).rank
        cert = certify(OperatorPath((seg,)), StratumSpec.rank_stratum(k, T0.shape))
        assert cert.passed, cert.first_failure
        assert cert.per_segment[0].max_range_angle <= 1e-7


class TestSignFlip:
    def test_small_example(self):
        T = np.diag([1.0, 0.0])
        seg = seg_sign_flip(T, e(2, 0), e(2, 1))
        assert np.array_equal(seg(0.0), [[-1.0, 0.0], [0.0, 0.0]])
        assert np.array_equal(seg(1.0), T)
        ranks = {numerical_rank(M).rank for M in seg.sample(np.linspace(0, 1, 100))}
        assert ranks == {1}

    def test_no_spare_direction(self):
        with pytest.raises(NoSpareDirection):
            seg_sign_flip(np.eye(2))

    def test_flip_direction_must_be_in_range(self):
        with pytest.raises(NotInRange):
            seg_sign_flip(np.diag([1.0, 0.0]), e(2, 1))

    @given(st.integers(0, 2**31))
    def test_domain_side_is_transpose_of_codomain_side(self, seed):
        T = random_stratum_point(4, 3, 2, seed=seed)
        dom = seg_sign_flip(T.T, side="domain")
        cod = seg_sign_flip(T, side="codomain")
        lams = np.linspace(0, 1, 9)
        assert np.allclose(dom.sample(lams), np.transpose(cod.sample(lams), (0, 2, 1)))

    @pytest.mark.parametrize("side", ["codomain", "domain"])
    def test_endpoints_exact_and_rank_constant(self, side):
        T = random_stratum_point(5, 5, 3, seed=11)
        seg = seg_sign_flip(T, side=side)
        assert np.linalg.norm(seg.end() - T) <= 1e-14 * np.linalg.norm(T)
        cert = certify(OperatorPath((seg,)), StratumSpec.rank_stratum(3, T.shape))
        assert cert.passed, cert.first_failure


class TestStraightLineFlip:
    def test_endpoints(self):
        seg = canonical_straight_line_flip()
        assert np.array_equal(seg(0.0), [[1.0, 0.0], [1.0, 0.0]])
        assert np.array_equal(seg(1.0), [[-1.0, 0.0], [0.0, 0.0]])

    def test_midpoint_range_falls_into_R(self):
        mid = canonical_straight_line_flip()(0.5)
        assert np.array_equal(mid, [[0.0, 0.0], [0.5, 0.0]])
        assert largest_angle(column_space(mid), span(e(2, 1))) == 0.0

    def test_certification_fails_at_midpoint(self):
        cert = certify(OperatorPath((canonical_straight_line_flip(),)), StratumSpec.rank_stratum(1, (2, 2)))
        assert not cert.passed
        assert "complemented_range" in cert.first_failure
        assert "lam=0.5" in cert.first_failure


class TestGLConnect:
    def test_identity(self):
        path, tag = gl_connect(np.eye(3))
        assert tag == "identity" and len(path) == 1
        assert np.array_equal(path.end(), np.eye(3))

    def test_quarter_rotation(self):
        Q = np.array([[0.0, -1.0], [1.0, 0.0]])
        path, tag = gl_connect(Q)
        assert tag == "identity" and len(path) == 1
        assert isinstance(path.segments[0], RotationSegment)
        dets = np.linalg.det(path.segments[0].sample(np.linspace(0, 1, 100)))
        assert np.allclose(dets, 1.0)
        assert np.array_equal(path.end(), np.eye(2))

    def test_reflection_is_fixed(self):
        path, tag = gl_connect(np.diag([-1.0, 1.0]))
        assert tag == "reflection"
        assert np.array_equal(path.end(), reflection_representative(2))

    def test_singular(self):
        with pytest.raises(NumericallySingular):
            gl_connect(np.diag([1.0, 1e-12]))

    def test_segment_count_bound(self, rng):
        for n in range(1, 9):
            path, _ = gl_connect(rng.standard_normal((n, n)))
            assert len(path) <= n * (n - 1) // 2 + 2

    @given(st.integers(1, 8), st.integers(0, 2**31))
    def test_stays_invertible_and_lands_exactly(self, n, seed):
        Q = np.random.default_rng(seed).standard_normal((n, n))
        if np.linalg.cond(Q) > 1e5:
            return
        path, tag = gl_connect(Q)
        assert np.array_equal(path.start(), Q)
        target = np.eye(n) if np.linalg.det(Q) > 0 else reflection_representative(n)
        assert tag == ("identity" if np.linalg.det(Q) > 0 else "reflection")
        assert np.array_equal(path.end(), target)
        sign = np.sign(np.linalg.det(Q))
        for seg in path:
            mats = seg.sample(sample_grid(100))
            s = np.linalg.svd(mats, compute_uv=False)
            assert (s[:, -1] / s[:, 0]).min() >= 1e-6
            assert np.all(np.sign(np.linalg.det(mats)) == sign)
