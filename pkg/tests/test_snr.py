import math

import numpy as np
import pytest
from scipy import stats

from ris_saturation import (
    ArrayGeometry, GainMatrix, PasModel, SnrConfig, average_snr_analytic, build_covariance,
    correlation_approx, correlation_exact, dft_phase_profile, optimize_phases, sample_cascade,
    sample_ms_ris_channel, simulate_snr,
)
from ris_saturation.phase import steering_vector
from ris_saturation.snr import bs_steering_vector, cascade_channel

deg = math.radians


def setup(model, n, theta_r=math.pi / 2, n_bs=1, budget=1.0, samples=100_000, seed=0):
    geom = ArrayGeometry(n, departure_angle=theta_r)
    cov = build_covariance(correlation_exact(model, geom, n) if model.has_density
                           else correlation_approx(model, geom, n))
    gm = GainMatrix.from_covariance(cov, geom)
    return SnrConfig(n_bs, budget, geom, model, seed, samples), cov, gm


def test_identity_sampling_variance():
    cov = build_covariance([1.0, 0.0, 0.0])
    h = sample_ms_ris_channel(cov, 1, size=100_000)
    var = np.mean(np.abs(h) ** 2, axis=0)
    se = np.std(np.abs(h) ** 2, axis=0) / math.sqrt(h.shape[0])
    assert np.all(np.abs(var - 1) <= 3 * se)


def test_correlated_pair():
    cov = build_covariance([1.0, 0.9 * np.exp(0.4j)])
    h = sample_ms_ris_channel(cov, 2, size=100_000)
    prod = h[:, 0] * np.conj(h[:, 1])
    est = prod.mean()
    se = np.std(prod) / math.sqrt(prod.size)
    assert abs(abs(est) - 0.9) <= 3 * se
    # first row of the covariance is E[h_0 conj(h_l)]
    assert abs(est - cov.matrix[0, 1]) <= 3 * se * math.sqrt(2)


def test_sample_covariance_matches(lap23):
    geom = ArrayGeometry(4)
    cov = build_covariance(correlation_exact(lap23, geom, 4))
    h = sample_ms_ris_channel(cov, 5, size=100_000)
    prod = h[:, :, None] * np.conj(h[:, None, :])
    emp = prod.mean(axis=0)
    se = np.sqrt(np.var(prod.real, axis=0) + np.var(prod.imag, axis=0)) / math.sqrt(h.shape[0])
    assert np.all(np.abs(emp - cov.matrix) <= 5 * se + 1e-12)


def test_sampling_deterministic():
    cov = build_covariance([1.0, 0.5])
    a = sample_ms_ris_channel(cov, 123, size=10)
    b = sample_ms_ris_channel(cov, 123, size=10)
    assert a.tobytes() == b.tobytes()
    assert sample_ms_ris_channel(cov, 123).shape == (2,)


def test_analytic_snr_arithmetic(gauss3):
    cfg, cov, gm = setup(gauss3, 1)
    assert average_snr_analytic(cfg, optimize_phases(gm)) == pytest.approx(1.0)
    cfg = SnrConfig(10, 0.1, ArrayGeometry(100), gauss3)
    assert average_snr_analytic(cfg, 4.0) == pytest.approx(400.0)


def test_linear_in_bs_antennas(gauss3):
    geom = ArrayGeometry(8)
    a = average_snr_analytic(SnrConfig(5, 0.3, geom), 2.5)
    b = average_snr_analytic(SnrConfig(10, 0.3, geom), 2.5)
    assert b == 2 * a


def test_scalar_unit_exponential():
    cfg, cov, gm = setup(PasModel.exponential(0.0), 1)
    res = simulate_snr(cfg, optimize_phases(gm), cov)
    assert abs(res.mean - 1.0) <= 3 * res.std_error
    assert res.cv == pytest.approx(1.0, abs=0.02)


def test_mc_matches_analytic_dft():
    model = PasModel.gaussian(math.pi / 4, deg(6))
    cfg, cov, gm = setup(model, 32, deg(80), n_bs=4, budget=0.5, seed=9)
    prof = dft_phase_profile(gm)
    res = simulate_snr(cfg, prof, cov)
    analytic = average_snr_analytic(cfg, prof)
    assert abs(res.mean - analytic) <= 3 * res.std_error
    assert res.cv == pytest.approx(1.0, abs=0.02)


def test_exponential_law_ks(lap23):
    cfg, cov, gm = setup(lap23, 16, deg(60), n_bs=3, samples=10_000, seed=4)
    res = simulate_snr(cfg, optimize_phases(gm), cov)
    d = stats.kstest(res.samples / res.mean, "expon").statistic
    assert d < 1.63 / math.sqrt(res.n_samples)


def test_cascade_rank_one(gauss3):
    cfg, cov, gm = setup(gauss3, 8, n_bs=6)
    prof = optimize_phases(gm)
    a_b = bs_steering_vector(6)
    for seed in range(20):
        s = sample_cascade(cfg, prof, cov, seed)
        coef = np.vdot(a_b, s.h) / np.vdot(a_b, a_b)
        assert np.linalg.norm(s.h - coef * a_b) <= 1e-10 * max(1.0, np.linalg.norm(s.h))
        assert s.snr_inst >= 0


def test_cascade_matches_matrix_product(lap23):
    cfg, cov, gm = setup(lap23, 5, 1.1, n_bs=3)
    prof = optimize_phases(gm)
    h_r = sample_ms_ris_channel(cov, 7)
    H = np.outer(bs_steering_vector(3), np.conj(steering_vector(cfg.geometry)))
    expected = H @ np.diag(np.exp(1j * prof.angles)) @ h_r
    np.testing.assert_allclose(cascade_channel(cfg, prof, h_r), expected, atol=1e-12)
