"""End-to-end acceptance checks; each prints one PASS/FAIL line in the summary."""

import math
import subprocess
import sys
import time

import numpy as np
from scipy import stats

from ris_saturation import (
    ArrayGeometry, GainMatrix, PasModel, SnrConfig, average_snr_analytic, bound_coth,
    brute_force_oracle, build_covariance, correlation_approx, correlation_sequence,
    dft_phase_profile, family_bound, grid_resolution_bound, instantaneous_benchmark,
    lambda_max, optimize_phases, simulate_snr,
)
from ris_saturation.correlation import approx_magnitudes
from ris_saturation.snr import to_db

deg = math.radians


def random_model(rng, family):
    mu = rng.uniform(0.2, math.pi - 0.2)
    if family == "gaussian":
        return PasModel.gaussian(mu, deg(rng.uniform(1.0, 30.0)))
    if family == "laplacian":
        return PasModel.laplacian(mu, deg(rng.uniform(1.0, 30.0)))
    return PasModel.exponential(rng.uniform(0.05, 0.95), mean_angle=mu)


def random_geometry(rng, n):
    return ArrayGeometry(n, spacing=rng.uniform(0.2, 1.0),
                         departure_angle=rng.uniform(0.1, math.pi - 0.1))


def gain_setup(model, geom, source):
    seq = correlation_sequence(model, geom, geom.n_elements, source=source)
    cov = build_covariance(seq)
    return seq, cov, GainMatrix.from_covariance(cov, geom)


def test_closed_form_two_elements(record):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for k in range(20):
        family = ("gaussian", "laplacian", "exponential")[k % 3]
        model, geom = random_model(rng, family), random_geometry(rng, 2)
        source = "approx" if family == "exponential" else "exact"
        seq, _, gm = gain_setup(model, geom, source)
        zeta = optimize_phases(gm).gain
        worst = max(worst, abs(zeta - (1.0 + abs(seq[1]))))
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-9 and elapsed < 1.0,
           f"max |zeta - (1+|c1|)| = {worst:.2e} over 20 configs, {elapsed:.2f} s")


def test_oracle_equivalence_three_elements(record):
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    ok, worst_excess, worst_slack = True, 0.0, math.inf
    for k in range(10):
        family = ("gaussian", "laplacian", "exponential")[k % 3]
        model, geom = random_model(rng, family), random_geometry(rng, 3)
        source = "approx" if family == "exponential" else "exact"
        _, _, gm = gain_setup(model, geom, source)
        zeta = optimize_phases(gm).gain
        grid = brute_force_oracle(gm, 256).gain
        excess = zeta - grid
        allowed = grid_resolution_bound(zeta, 256)
        ok &= excess >= -1e-12 and excess <= allowed
        worst_excess = max(worst_excess, excess)
        worst_slack = min(worst_slack, allowed - excess)
    elapsed = time.perf_counter() - start
    record(2, ok and elapsed < 120.0,
           f"max zeta - grid = {worst_excess:.2e}, min slack to bound = {worst_slack:.2e}, "
           f"{elapsed:.1f} s")


def test_bound_chain_sweep(record):
    rng = np.random.default_rng(303)
    sizes = (2, 4, 8, 16, 32, 64, 128)
    families = ("gaussian", "laplacian", "exponential")
    start = time.perf_counter()
    failures = []
    for k in range(200):
        family, n = families[k % 3], sizes[k % 7]
        model = random_model(rng, family)
        geom = ArrayGeometry(n, spacing=rng.uniform(0.2, 1.0),
                             departure_angle=rng.uniform(0.1, math.pi - 0.1))
        _, cov, gm = gain_setup(model, geom, "approx")
        zeta = optimize_phases(gm, n_restarts=2, random_state=k).gain
        lam = lambda_max(cov).value
        bound = family_bound(model, geom)
        if not (zeta <= lam * (1 + 1e-10) and lam <= bound + 1e-6 and zeta < n):
            failures.append((k, family, n, zeta, lam, bound))
    elapsed = time.perf_counter() - start
    record(3, not failures and elapsed < 300.0,
           f"{200 - len(failures)}/200 configs satisfy zeta <= lambda_max <= bound, "
           f"zeta < N_r; {elapsed:.1f} s")


def test_saturation_gaussian_six_degrees(record):
    start = time.perf_counter()
    model = PasModel.gaussian(math.pi / 4, deg(6))
    zeta, inst = {}, {}
    for n in (100, 200):
        geom = ArrayGeometry(n, spacing=0.5)
        _, cov, gm = gain_setup(model, geom, "exact")
        zeta[n] = optimize_phases(gm).gain
        inst[n] = instantaneous_benchmark(cov, geom, samples=10_000, seed=n).mean
    elapsed = time.perf_counter() - start
    r_stat, r_inst = zeta[200] / zeta[100], inst[200] / inst[100]
    record(4, r_stat < 1.05 and r_inst > 1.9 and elapsed < 120.0,
           f"zeta ratio {r_stat:.4f} (< 1.05), instantaneous ratio {r_inst:.4f} (> 1.9), "
           f"{elapsed:.1f} s")


def test_eight_db_at_ten_degrees(record):
    start = time.perf_counter()
    geom = ArrayGeometry(100, spacing=0.5)
    values = {}
    for family in ("gaussian", "laplacian"):
        model = getattr(PasModel, family)(math.pi / 2, deg(10))
        _, _, gm = gain_setup(model, geom, "exact")
        values[family] = to_db(optimize_phases(gm).gain)
    elapsed = time.perf_counter() - start
    ok = all(v < 8.0 for v in values.values()) and elapsed < 60.0
    record(5, ok, "zeta = " + ", ".join(f"{k} {v:.3f} dB" for k, v in values.items())
           + f" (each must be < 8 dB), {elapsed:.1f} s")


def test_dft_near_optimal(record):
    worst = 0.0
    for model in (PasModel.gaussian(math.pi / 4, deg(3)), PasModel.laplacian(math.pi / 4, deg(23))):
        for n in (32, 64, 128):
            geom = ArrayGeometry(n, spacing=0.5, departure_angle=deg(80))
            _, _, gm = gain_setup(model, geom, "exact")
            cfg = SnrConfig(10, 0.1, geom)
            best = average_snr_analytic(cfg, optimize_phases(gm))
            dft = average_snr_analytic(cfg, dft_phase_profile(gm))
            worst = max(worst, to_db(best) - to_db(dft))
    record(6, worst < 0.2, f"max DFT loss {worst:.4f} dB over 6 cases (< 0.2 dB)")


def test_monte_carlo_consistency(record):
    rng = np.random.default_rng(707)
    start = time.perf_counter()
    worst_z, pooled = 0.0, []
    for k in range(10):
        family = ("gaussian", "laplacian", "exponential")[k % 3]
        n = (1, 4, 16, 32, 64)[k % 5]
        model, geom = random_model(rng, family), random_geometry(rng, n)
        _, cov, gm = gain_setup(model, geom, "approx")
        profile = optimize_phases(gm, n_restarts=1)
        cfg = SnrConfig(1 + k, 10 ** (rng.uniform(-2, 1)), geom, seed=k, samples=100_000)
        est = simulate_snr(cfg, profile, cov)
        expected = average_snr_analytic(cfg, profile)
        worst_z = max(worst_z, abs(est.mean - expected) / est.std_error)
        pooled.append(est.samples / expected)
    # one test on the pooled, mean-normalized samples keeps the level at 95%
    p_value = stats.kstest(np.concatenate(pooled), "expon").pvalue
    elapsed = time.perf_counter() - start
    record(7, worst_z < 3.0 and p_value > 0.05 and elapsed < 180.0,
           f"max |mean - analytic| = {worst_z:.2f} SE (< 3), pooled KS p = {p_value:.3f} "
           f"(> 0.05), {elapsed:.1f} s")


def test_kms_spectrum(record):
    start = time.perf_counter()
    errs, cross = [], []
    for kappa in (0.5, 0.9):
        cov = build_covariance(correlation_approx(PasModel.exponential(kappa), ArrayGeometry(400), 400))
        top = lambda_max(cov, dense_when_cheaper=False)
        dense = np.linalg.eigvalsh(cov.matrix)[-1]
        limit = (1 + kappa) / (1 - kappa)
        errs.append(abs(top.value - limit) / limit)
        cross.append(abs(top.value - dense) / dense)
    elapsed = time.perf_counter() - start
    ok = max(errs) < 0.02 and max(cross) < 1e-9 and elapsed < 60.0
    record(8, ok, f"max rel. error vs (1+k)/(1-k) {max(errs):.4f} (< 0.02), "
           f"vs dense {max(cross):.1e}, {elapsed:.1f} s")


def test_coth_identity(record):
    start = time.perf_counter()
    cases = [(math.pi / 2, 0.5, 5.0), (math.pi / 4, 0.5, 23.0), (1.0, 0.25, 2.0),
             (2.5, 1.0, 40.0), (math.pi / 3, 0.4, 1.0)]
    lags = np.arange(1, 1_000_001)
    worst = 0.0
    for mu, ratio, spread in cases:
        model = PasModel.laplacian(mu, deg(spread))
        geom = ArrayGeometry(2, spacing=ratio)
        brute = 1.0 + 2.0 * math.fsum(approx_magnitudes(model, ratio, lags))
        worst = max(worst, abs(bound_coth(model, geom) - brute) / brute)
    elapsed = time.perf_counter() - start
    record(9, worst < 1e-4 and elapsed < 30.0,
           f"max rel. difference {worst:.2e} over 5 sets (< 1e-4), {elapsed:.1f} s")


CLI_CONFIGS = {
    "corr": "lags = 16\n",
    "gain-vs-n": "curves = gaussian:6, laplacian:23\nn_elements = 1, 8, 32\n"
                 "benchmark_samples = 1000\n",
    "gain-vs-spread": "spreads = 2, 10, 30\nn_elements = 32\n",
    "snr-vs-n": "curves = gaussian:3\nn_elements = 1, 16\nsamples = 5000\n",
}


def test_cli_determinism(record, tmp_path):
    identical = {}
    for command, text in CLI_CONFIGS.items():
        cfg = tmp_path / f"{command}.cfg"
        cfg.write_text(text)
        outs = []
        for k in range(2):
            out = tmp_path / f"{command}-{k}.csv"
            subprocess.run([sys.executable, "-m", "ris_saturation", command, "--degrees",
                            "--config", str(cfg), "--seed", "11", "--out", str(out)], check=True)
            outs.append(out.read_bytes())
        identical[command] = outs[0] == outs[1] and len(outs[0]) > 0
    record(10, all(identical.values()),
           "byte-identical: " + ", ".join(f"{k}={v}" for k, v in identical.items()))
