import pytest

from smpsim import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load from cache) every JIT kernel before any timed test."""
    _kernels.warmup()
