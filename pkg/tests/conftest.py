import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from opstrata import Subspace, random_subspace

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def e(n, *axes):
    """Standard basis vector(s) of R^n as a column matrix."""
    return np.eye(n)[:, list(axes)]


def random_decomposition(rng, n, k):
    """Random ``(range, kernel)`` pair with ``range (+) kernel = R^n``."""
    A = random_subspace(n, k, rng)
    while True:
        B = random_subspace(n, n - k, rng)
        stacked = np.hstack([A.basis, B.basis])
        if stacked.size == 0 or np.linalg.svd(stacked, compute_uv=False)[-1] > 1e-3:
            return A, B


def span(*cols):
    return Subspace.span(np.column_stack(cols))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
