import pytest

from qcx.quadrature import QuadConfig


@pytest.fixture(scope="session")
def tight():
    """Tolerances tight enough for 1e-10-level comparisons."""
    return QuadConfig(abs_tol=1e-14, rel_tol=1e-13)
