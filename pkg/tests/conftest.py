import numpy as np
import pytest

from fracwr import build_graded_mesh, build_subdomain, caputo_weights
from fracwr.solver import solve_dirichlet_waveform


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed acceptance runs measure math only."""
    sub = build_subdomain(0.0, 1.0, 1.0, 0.25)
    for order in (0.5, 1.5):
        w = caputo_weights(build_graded_mesh(1.0, 4, 1.0), order)
        solve_dirichlet_waveform(sub, w, None, np.ones(4))
