import json

import numpy as np
import pytest

from opstrata import (
    AffineSegment,
    Invariant,
    OperatorPath,
    OutOfRange,
    StratumSpec,
    certify,
    connect_rank_stratum,
    numerical_rank,
    random_stratum_point,
    sample_grid,
)

from conftest import e, span


def test_sample_grid_contains_midpoint():
    for samples in (2, 3, 100, 101):
        grid = sample_grid(samples)
        assert 0.5 in grid and grid[0] == 0.0 and grid[-1] == 1.0
        assert np.all(np.diff(grid) > 0)


def test_constant_path_passes():
    T = random_stratum_point(4, 3, 2, seed=0)
    cert = certify(OperatorPath.constant(T), StratumSpec.rank_stratum(2, T.shape))
    assert cert.passed and cert.verdict == "pass" and cert.first_failure is None


def test_connector_output_passes():
    path = connect_rank_stratum(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    cert = certify(path, StratumSpec.rank_stratum(1, (2, 2)))
    assert cert.passed
    assert len(cert.per_segment) == len(path)
    assert cert.worst("max_trailing_ratio") <= 1e-8
    assert cert.worst("min_leading_gap", min) >= 1e-6


def test_rank_drop_is_caught():
    seg = AffineSegment(
        base=np.diag([1.0, 1.0]),
        direction=np.diag([-2.0, 0.0]),
        invariants=(Invariant.constant_rank(2),),
    )
    cert = certify(OperatorPath((seg,)), StratumSpec.rank_stratum(2, (2, 2)))
    assert not cert.passed
    assert "rank 1 instead of 2" in cert.first_failure


def test_wrong_declared_kernel_is_caught():
    seg = AffineSegment(
        base=np.diag([1.0, 0.0]),
        direction=np.zeros((2, 2)),
        invariants=(Invariant.constant_kernel(span(e(2, 0))),),
    )
    cert = certify(OperatorPath((seg,)), StratumSpec.rank_stratum(1, (2, 2)))
    assert not cert.passed and "constant_kernel" in cert.first_failure


def test_invertible_check():
    seg = AffineSegment(
        base=np.eye(2), direction=np.zeros((2, 2)), invariants=(Invariant.invertible(),)
    )
    cert = certify(OperatorPath((seg,)), StratumSpec.rank_stratum(2, (2, 2)))
    assert cert.passed and cert.per_segment[0].min_inverse_ratio == 1.0


def test_shape_mismatch_is_a_failed_verdict():
    cert = certify(OperatorPath.constant(np.eye(2)), StratumSpec.rank_stratum(2, (3, 3)))
    assert not cert.passed and "shape" in cert.first_failure


def test_samples_validated():
    with pytest.raises(ValueError):
        certify(OperatorPath.constant(np.eye(2)), StratumSpec.rank_stratum(2, (2, 2)), samples=1)


def test_deterministic_and_json_ready():
    path = connect_rank_stratum(random_stratum_point(4, 4, 2, seed=1), random_stratum_point(4, 4, 2, seed=2))
    spec = StratumSpec.rank_stratum(2, (4, 4))
    a, b = certify(path, spec).as_dict(), certify(path, spec).as_dict()
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b
    json.dumps(a, allow_nan=False)


class TestRandomStratumPoint:
    def test_zero_rank(self):
        assert not random_stratum_point(3, 4, 0, seed=0).any()

    def test_full_rank(self):
        assert numerical_rank(random_stratum_point(3, 5, 3, seed=0)).rank == 3

    def test_deterministic(self):
        assert np.array_equal(random_stratum_point(4, 4, 2, seed=9), random_stratum_point(4, 4, 2, seed=9))

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            random_stratum_point(2, 3, 3, seed=0)

    def test_conditioning(self):
        for seed in range(20):
            s = np.linalg.svd(random_stratum_point(6, 5, 4, seed=seed), compute_uv=False)
            assert s[3] / s[0] >= 1e-3
