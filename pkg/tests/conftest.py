"""Shared test setup: compile the numba kernels once up front."""
import pytest

from unital_forge._kernels import warmup
from unital_forge.nearfield import build_nearfield


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # JIT compilation must not be billed to whichever test runs first
    warmup(build_nearfield(2, 3))
