import numpy as np
import pytest

from casimir_lab import forms3 as f3


@pytest.fixture(scope="session")
def grid32():
    return f3.Grid(32)


@pytest.fixture(scope="session")
def grid16():
    return f3.Grid(16)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def beltrami(grid32):
    """sin(2*pi*z) dx + cos(2*pi*z) dy: curl eigenfield with helicity 2*pi."""
    return f3.one_form(
        grid32,
        lambda x, y, z: np.sin(2 * np.pi * z),
        lambda x, y, z: np.cos(2 * np.pi * z),
        lambda x, y, z: 0 * z,
    )


@pytest.fixture(scope="session")
def graph_profile(grid32):
    _, _, Z = grid32.meshes
    return f3.Form0(grid32, 0.15 * np.sin(2 * np.pi * Z) + 0.03 * np.cos(4 * np.pi * Z))


@pytest.fixture(scope="session")
def foliated_state(grid32, graph_profile):
    from casimir_lab import foliation as fol

    srng = np.random.default_rng(777)
    scale = f3.Form0(grid32, np.exp(f3.random_scalar_array(grid32, 1, srng, rms=0.05)))
    alpha = fol.graph_foliation_form(grid32, graph_profile, scale)
    return fol.FoliatedState.from_alpha(alpha)
