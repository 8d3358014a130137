import numpy as np
import pytest

from hingedplate import PlateConfig, PlateSystem, uniform_density


@pytest.fixture(scope="session")
def small_cfg():
    """Coarse configuration for structural tests; seconds, not minutes."""
    return PlateConfig(n_modes_x=8, n_basis_y=6, n_quad_x=32, n_quad_y=16)


@pytest.fixture(scope="session")
def default_cfg():
    return PlateConfig()


@pytest.fixture(scope="session")
def small_system(small_cfg):
    return PlateSystem(small_cfg)


@pytest.fixture(scope="session")
def default_system(default_cfg):
    return PlateSystem(default_cfg)


@pytest.fixture(scope="session")
def default_uniform_pair(default_system):
    p = uniform_density(default_system.grid, default_system.rule)
    return default_system.solve_density(p)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
