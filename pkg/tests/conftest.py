import numpy as np
import pytest

from specret import Signal, make_grid


@pytest.fixture(scope="session")
def grid256():
    return make_grid(8.0, 256)


@pytest.fixture(scope="session")
def grid512():
    return make_grid(8.0, 512)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)


def random_signal(grid, rng, localized=True):
    """Complex test signal; localized variants decay at the interval ends."""
    values = rng.standard_normal(grid.L) + 1j * rng.standard_normal(grid.L)
    if localized:
        values = values * np.exp(-0.5 * (grid.t / (grid.T / 3)) ** 2)
    return Signal(grid=grid, values=values)
