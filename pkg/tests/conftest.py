import pytest

import coupon_lab as cl


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the JIT kernels once so timed assertions measure the math."""
    cl.exact_tail(cl.AlbumSpec(3), 5)
    cl.run_simulation(cl.SimulationConfig(spec=cl.AlbumSpec(2), trials=2, seed=1))
    cl.empirical_transition_check(cl.SimulationConfig(spec=cl.AlbumSpec(2), trials=2, seed=1))
