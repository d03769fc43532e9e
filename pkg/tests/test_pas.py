import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ris_saturation import DomainError, NoDensityError, PasModel, gaussian_q, pas_density
from ris_saturation._quadrature import integrate

deg = math.radians


def total_mass(model):
    grid = np.sort(np.concatenate([np.linspace(0, math.pi, 33), model.breakpoints()]))
    return integrate(lambda t: model.normalization * model.kernel(t), grid, atol=1e-13).real


def test_gaussian_q_values():
    assert gaussian_q(0.0) == 0.5
    assert gaussian_q(40.0) < 1e-300
    # adaptive quadrature of the standard normal tail from 1 to infinity
    assert gaussian_q(1.0) == pytest.approx(0.1586552539314571, rel=1e-12)
    assert gaussian_q(-1.0) == pytest.approx(1 - 0.1586552539314571, rel=1e-12)


@pytest.mark.parametrize("mu", [math.pi / 6, math.pi / 4, math.pi / 2])
@pytest.mark.parametrize("spread", [1, 3, 6, 17, 23, 40])
@pytest.mark.parametrize("factory", [PasModel.gaussian, PasModel.laplacian])
def test_normalization_grid(factory, mu, spread):
    assert total_mass(factory(mu, deg(spread))) == pytest.approx(1.0, abs=1e-8)


def test_gaussian_matches_closed_form_normalization():
    sigma = deg(5)
    model = PasModel.gaussian(math.pi / 2, sigma)
    k_g = 1.0 / (math.sqrt(math.pi) * (1.0 - 2.0 * gaussian_q(math.pi / (2.0 * sigma))))
    assert pas_density(model, math.pi / 2) == pytest.approx(k_g / (math.sqrt(2) * sigma), rel=1e-3)


@given(x=st.floats(1e-6, math.pi / 2 - 1e-6), spread=st.floats(0.5, 45))
@settings(max_examples=40, deadline=None)
def test_symmetric_about_broadside(x, spread):
    for factory in (PasModel.gaussian, PasModel.laplacian):
        m = factory(math.pi / 2, deg(spread))
        a, b = m.density(math.pi / 2 + x), m.density(math.pi / 2 - x)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("factory", [PasModel.gaussian, PasModel.laplacian])
def test_monotone_decay_from_mean(factory):
    m = factory(math.pi / 4, deg(10))
    right = m.density(np.linspace(math.pi / 4, math.pi - 1e-9, 400))
    left = m.density(np.linspace(math.pi / 4, 1e-9, 400))
    assert np.all(np.diff(right) <= 0)
    assert np.all(np.diff(left) <= 0)


def test_tabulated_renormalized():
    m = PasModel.tabulated([0.0, math.pi / 2, math.pi], [0.0, 4.0, 0.0])
    assert total_mass(m) == pytest.approx(1.0, abs=1e-10)
    assert m.density(math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-10)


def test_errors():
    with pytest.raises(NoDensityError):
        PasModel.exponential(0.5).density(1.0)
    m = PasModel.gaussian(1.0, 0.1)
    for bad in (0.0, math.pi, -0.1, 4.0):
        with pytest.raises(DomainError):
            m.density(bad)
    with pytest.raises(DomainError):
        PasModel.gaussian(1.0, deg(0.005))
    with pytest.raises(DomainError):
        PasModel.laplacian(0.0, 0.1)
    with pytest.raises(DomainError):
        PasModel.exponential(1.0)
    with pytest.raises(DomainError):
        PasModel.tabulated([0.0, 1.0], [1.0, -1.0])


def test_models_are_immutable():
    m = PasModel.gaussian(1.0, 0.1)
    with pytest.raises(AttributeError):
        m.mean_angle = 2.0
