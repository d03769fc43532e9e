"""Parameter sweeps behind the CLI subcommands.

Each sweep returns a list of row dictionaries in sweep order; the CLI takes
care of CSV formatting and metadata.
"""

import math

import numpy as np

from .correlation import ArrayGeometry, correlation_approx, correlation_exact, correlation_sequence
from .pas import Family, PasModel
from .phase import GainMatrix, dft_phase_profile, instantaneous_benchmark, optimize_phases
from .snr import SnrConfig, average_snr_analytic, instantaneous_snr, simulate_snr, to_db
from .toeplitz import build_covariance, family_bound, lambda_max


def point_seed(seed, *keys):
    """Deterministic 63-bit seed for one sweep point."""
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(seq.generate_state(1, np.uint64)[0] >> np.uint64(1))


def make_model(family, param, mean_angle):
    """PAS from a family name and its single parameter (spread or kappa)."""
    family = Family(family)
    if family is Family.GAUSSIAN:
        return PasModel.gaussian(mean_angle, param)
    if family is Family.LAPLACIAN:
        return PasModel.laplacian(mean_angle, param)
    if family is Family.EXPONENTIAL:
        return PasModel.exponential(param, mean_angle)
    raise ValueError(f"family {family.value!r} cannot be swept")


def curve_label(family, param):
    family = Family(family)
    if family is Family.EXPONENTIAL:
        return f"exponential_kappa={param:g}"
    return f"{family.value}_spread={math.degrees(param):g}deg"


def _bound_or_nan(model, geom):
    try:
        return family_bound(model, geom)
    except (ArithmeticError, ValueError):
        return math.nan


def correlation_table(model, geom, lags):
    """Exact (when defined) and closed-form correlations side by side."""
    approx = correlation_approx(model, geom, lags) if model.family is not Family.TABULATED else None
    exact = correlation_exact(model, geom, lags) if model.has_density else approx
    rows = []
    for n in range(lags):
        c = exact.coeffs[n]
        row = {"n": n, "re": c.real, "im": c.imag, "abs": abs(c)}
        if approx is not None:
            a = approx.coeffs[n]
            row.update(approx_re=a.real, approx_im=a.imag, approx_abs=abs(a))
        rows.append(row)
    return rows


def gain_vs_n(curves, n_values, *, spacing=0.5, mean_angle=math.pi / 4,
              departure_angle=math.pi / 2, source="exact", n_restarts=5,
              benchmark_samples=2000, seed=0):
    """Beamforming gain against the number of RIS elements."""
    rows = []
    n_top = max(n_values)
    for i, (family, param) in enumerate(curves):
        model = make_model(family, param, mean_angle)
        base = ArrayGeometry(n_top, spacing, 1.0, departure_angle)
        seq = correlation_sequence(model, base, n_top, source)
        bound = _bound_or_nan(model, base)
        for j, n in enumerate(n_values):
            geom = base.with_elements(n)
            cov = build_covariance(seq, n)
            gm = GainMatrix.from_covariance(cov, geom)
            dft = dft_phase_profile(gm)
            opt = optimize_phases(gm, n_restarts=n_restarts, random_state=point_seed(seed, i, j, 0))
            lam = lambda_max(cov).value
            bench = instantaneous_benchmark(cov, geom, benchmark_samples, point_seed(seed, i, j, 1))
            rows.append({
                "curve": curve_label(family, param),
                "N_r": n,
                "zeta": opt.gain,
                "zeta_db": to_db(opt.gain),
                "zeta_dft": dft.gain,
                "zeta_dft_db": to_db(dft.gain),
                "lambda_max": lam,
                "bound": bound,
                "bound_db": to_db(bound) if bound == bound else math.nan,
                "instantaneous": bench.mean,
                "instantaneous_se": bench.std_error,
                "instantaneous_db": to_db(bench.mean),
            })
    return rows


def gain_vs_spread(families, spreads, *, n_elements=100, spacing=0.5, mean_angle=math.pi / 2,
                   departure_angle=math.pi / 2, source="exact", n_restarts=5, seed=0):
    """Beamforming gain against the angular spread at fixed array size."""
    rows = []
    for i, family in enumerate(families):
        for j, spread in enumerate(spreads):
            model = make_model(family, spread, mean_angle)
            geom = ArrayGeometry(n_elements, spacing, 1.0, departure_angle)
            seq = correlation_sequence(model, geom, n_elements, source)
            cov = build_covariance(seq, n_elements)
            gm = GainMatrix.from_covariance(cov, geom)
            opt = optimize_phases(gm, n_restarts=n_restarts, random_state=point_seed(seed, i, j))
            bound = _bound_or_nan(model, geom)
            rows.append({
                "family": Family(family).value,
                "spread_deg": math.degrees(spread),
                "zeta": opt.gain,
                "zeta_db": to_db(opt.gain),
                "lambda_max": lambda_max(cov).value,
                "bound": bound,
                "bound_db": to_db(bound),
            })
    return rows


def snr_vs_n(curves, n_values, *, n_bs=10, link_budget=0.1, spacing=0.5,
             mean_angle=math.pi / 4, departure_angle=math.radians(80), source="exact",
             n_restarts=5, samples=20_000, seed=0):
    """Average SNR against the number of RIS elements.

    One row per (curve, N_r, method) with method in ``numeric`` (optimized
    phases), ``dft`` and ``instantaneous``; ``snr_analytic_db`` is empty for
    the instantaneous benchmark, which has no closed form.
    """
    rows = []
    n_top = max(n_values)
    for i, (family, param) in enumerate(curves):
        model = make_model(family, param, mean_angle)
        base = ArrayGeometry(n_top, spacing, 1.0, departure_angle)
        seq = correlation_sequence(model, base, n_top, source)
        label = curve_label(family, param)
        for j, n in enumerate(n_values):
            geom = base.with_elements(n)
            cov = build_covariance(seq, n)
            gm = GainMatrix.from_covariance(cov, geom)
            profiles = {
                "numeric": optimize_phases(gm, n_restarts=n_restarts,
                                           random_state=point_seed(seed, i, j, 0)),
                "dft": dft_phase_profile(gm),
            }
            for k, (method, profile) in enumerate(profiles.items(), start=1):
                cfg = SnrConfig(n_bs, link_budget, geom, model, point_seed(seed, i, j, k), samples)
                analytic = average_snr_analytic(cfg, profile)
                mc = simulate_snr(cfg, profile, cov)
                rows.append(_snr_row(label, n, method, profile.gain, analytic, mc))
            cfg = SnrConfig(n_bs, link_budget, geom, model, point_seed(seed, i, j, 3), samples)
            mc = instantaneous_snr(cfg, cov)
            rows.append(_snr_row(label, n, "instantaneous", mc.mean / (link_budget * n_bs * n),
                                 None, mc))
    return rows


def _snr_row(label, n, method, zeta, analytic, mc):
    return {
        "curve": label,
        "N_r": n,
        "method": method,
        "zeta": zeta,
        "snr_analytic": analytic if analytic is not None else "",
        "snr_analytic_db": to_db(analytic) if analytic is not None else "",
        "snr_mc": mc.mean,
        "snr_mc_db": to_db(mc.mean),
        "std_err_db": 10.0 / math.log(10.0) * mc.std_error / mc.mean,
        "cv": mc.cv,
    }
