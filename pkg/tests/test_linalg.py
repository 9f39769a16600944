import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opstrata import (
    NotComplementary,
    ShapeMismatch,
    SingularMatrix,
    Subspace,
    column_space,
    null_space,
    numerical_rank,
    oblique_projector,
    random_stratum_point,
    restricted_inverse,
    solve,
)
from opstrata.linalg import as_matrix, row_space

from conftest import e, span


class TestNumericalRank:
    def test_zero_matrix(self):
        d = numerical_rank(np.zeros((2, 2)), 1e-9)
        assert (d.rank, d.trailing_ratio) == (0, 0.0)

    def test_identity(self):
        d = numerical_rank(np.eye(2), 1e-9)
        assert d.rank == 2
        assert d.trailing_ratio == 0.0
        assert d.leading_gap == 1.0

    def test_tiny_singular_value_dropped(self):
        d = numerical_rank(np.diag([1.0, 1e-12]), 1e-9)
        assert d.rank == 1
        assert d.trailing_ratio == pytest.approx(1e-12)

    @pytest.mark.parametrize("tol", [0.0, 1.0, -1e-3, 2.0])
    def test_tolerance_must_be_in_unit_interval(self, tol):
        with pytest.raises(ValueError):
            numerical_rank(np.eye(2), tol)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="non-finite"):
            as_matrix([[np.nan, 1.0]])

    def test_rejects_empty(self):
        with pytest.raises(ShapeMismatch):
            as_matrix(np.zeros((0, 2)))

    @given(st.integers(1, 7), st.integers(1, 7), st.data())
    def test_rank_agrees_with_transpose(self, m, n, data):
        k = data.draw(st.integers(0, min(m, n)))
        T = random_stratum_point(m, n, k, seed=data.draw(st.integers(0, 2**31)))
        assert numerical_rank(T).rank == numerical_rank(T.T).rank == k

    @given(st.integers(1, 7), st.integers(1, 7), st.data())
    def test_gap_brackets_tolerance(self, m, n, data):
        k = data.draw(st.integers(1, min(m, n)))
        T = random_stratum_point(m, n, k, seed=data.draw(st.integers(0, 2**31)))
        d = numerical_rank(T, 1e-9)
        assert d.trailing_ratio < d.tolerance <= d.leading_gap


class TestSpaces:
    def test_column_space_examples(self):
        assert column_space(np.diag([1.0, 0.0])).contains(e(2, 0))
        assert column_space(np.diag([1.0, 0.0])).dim == 1
        assert column_space(np.zeros((3, 2))).dim == 0
        c = column_space(np.array([[1.0], [1.0]]))
        assert np.allclose(np.abs(c.basis[:, 0]), 1 / np.sqrt(2))

    def test_null_space_examples(self):
        assert null_space(np.eye(3)).dim == 0
        z = null_space(np.zeros((2, 4)))
        assert z.dim == 4 and z.ambient_dim == 4
        n = null_space(np.array([[1.0, 1.0]]))
        assert n.dim == 1
        assert abs(n.basis[0, 0] + n.basis[1, 0]) < 1e-15

    def test_row_space_is_complement_of_kernel(self, rng):
        T = random_stratum_point(5, 6, 3, seed=1)
        r, k = row_space(T), null_space(T)
        assert r.dim + k.dim == 6
        assert np.linalg.norm(r.basis.T @ k.basis) < 1e-12

    @given(st.integers(1, 8), st.integers(1, 8), st.data())
    def test_bases_are_orthonormal(self, m, n, data):
        k = data.draw(st.integers(0, min(m, n)))
        T = random_stratum_point(m, n, k, seed=data.draw(st.integers(0, 2**31)))
        for s in (column_space(T), null_space(T)):
            assert np.linalg.norm(s.basis.T @ s.basis - np.eye(s.dim)) <= 1e-12
        assert column_space(T).dim == k
        assert null_space(T).dim == n - k
        assert np.linalg.norm(T @ null_space(T).basis) <= 1e-10 * max(np.linalg.norm(T), 1)


class TestSolve:
    def test_identity(self, rng):
        B = rng.standard_normal((3, 2))
        assert np.allclose(solve(np.eye(3), B), B)

    def test_scalar(self):
        assert np.allclose(solve(2 * np.eye(2), np.eye(2)), 0.5 * np.eye(2))

    def test_back_substitution(self):
        X = solve(np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[0.0], [1.0]]))
        assert np.allclose(X.ravel(), [-1.0, 1.0])

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            solve(np.array([[1.0, 1.0], [1.0, 1.0]]), np.eye(2))

    def test_residual(self, rng):
        A = rng.standard_normal((6, 6))
        B = rng.standard_normal((6, 3))
        X = solve(A, B)
        assert np.linalg.norm(A @ X - B) <= 1e-10 * np.linalg.norm(B)


class TestRestrictedInverse:
    def test_examples(self):
        R, Ns = span(e(2, 0)), span(e(2, 1))
        assert np.allclose(restricted_inverse(np.diag([1.0, 0.0]), R, Ns), np.diag([1.0, 0.0]))
        assert np.allclose(restricted_inverse(np.diag([2.0, 0.0]), R, Ns), np.diag([0.5, 0.0]))
        T = np.array([[1.0, 0.0], [1.0, 0.0]])
        Tp = restricted_inverse(T, R, Ns)
        assert np.allclose(Tp, [[1.0, 0.0], [0.0, 0.0]])
        assert np.allclose(Tp @ T, oblique_projector(R, null_space(T)).matrix)

    def test_not_complementary(self):
        T = np.diag([1.0, 0.0])
        with pytest.raises(NotComplementary):
            restricted_inverse(T, span(e(2, 1)), span(e(2, 1)))
        with pytest.raises(NotComplementary):
            restricted_inverse(T, span(e(2, 0)), span(e(2, 0)))

    def test_projector_identities(self, rng):
        for _ in range(50):
            m, n = rng.integers(2, 7, size=2)
            k = int(rng.integers(1, min(m, n) + 1))
            T = random_stratum_point(m, n, k, seed=int(rng.integers(2**31)))
            R = Subspace(np.linalg.qr(rng.standard_normal((n, k)))[0])
            Ns = Subspace(np.linalg.qr(rng.standard_normal((m, m - k)))[0]) if m > k else Subspace.zero(m)
            Tp = restricted_inverse(T, R, Ns)
            scale = np.linalg.norm(T)
            assert np.linalg.norm(T @ Tp @ T - T) <= 1e-9 * scale
            assert np.linalg.norm(Tp @ T @ Tp - Tp) <= 1e-9 * np.linalg.norm(Tp)
            assert np.linalg.norm(Tp @ T - oblique_projector(R, null_space(T)).matrix) <= 1e-9 * (1 + scale)
            assert np.linalg.norm(T @ Tp - oblique_projector(column_space(T), Ns).matrix) <= 1e-9 * (1 + scale)
