import numpy as np
import pytest

from qgraph import catalog
from qgraph.charpoly import spectral_model
from qgraph.scattering import assemble
from qgraph.spectra import determine_mu


@pytest.fixture(scope="session")
def step_box():
    """Step in a box at b = 0.3, lambda = 1/2: assembly and model with mu set."""
    asm = assemble(catalog.step_in_box(b=0.3, lam=0.5))
    model = spectral_model(asm)
    return asm, model.with_mu(determine_mu(model))


@pytest.fixture(scope="session")
def free_box():
    asm = assemble(catalog.free_box())
    model = spectral_model(asm)
    return asm, model.with_mu(determine_mu(model))


@pytest.fixture(scope="session")
def chain_regular():
    asm = assemble(catalog.four_vertex_chain(0.2, 0.3))
    model = spectral_model(asm)
    return asm, model.with_mu(determine_mu(model))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
