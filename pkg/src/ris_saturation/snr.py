"""Cascade channel, analytic average SNR and its Monte Carlo validation."""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_scalar
from .correlation import ArrayGeometry
from .pas import PasModel
from .phase import PhaseProfile, steering_vector
from .toeplitz import CovarianceMatrix

#: Name of the bit generator behind every random draw in the package.
RNG_NAME = "numpy.random.Philox (Philox4x64-10), SeedSequence substreams"

#: Fixed angle of the BS steering vector; only its norm affects the SNR.
BS_ANGLE = math.pi / 4


def substreams(seed, index):
    """Independent generator for batch ``index`` of a run seeded with ``seed``."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(seq))


def _generator(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(int(seed)))


def sample_ms_ris_channel(cov, seed, size=None):
    """Draw ``h_r ~ CN(0, C_r)`` through the eigen square root of ``cov``.

    Returns shape ``(N,)`` if ``size`` is None else ``(size, N)``.
    """
    rng = _generator(seed)
    n = cov.dimension
    shape = (n,) if size is None else (int(size), n)
    g = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    factor = cov.sqrt_factor()
    return factor @ g if size is None else g @ factor.T


def bs_steering_vector(n_bs_antennas):
    k = np.arange(n_bs_antennas)
    return np.exp(1j * math.pi * k * math.cos(BS_ANGLE))


@dataclass(frozen=True)
class SnrConfig:
    """Link parameters; ``link_budget`` is ``alpha P / sigma^2`` (linear)."""

    n_bs_antennas: int
    link_budget: float
    geometry: ArrayGeometry
    pas: PasModel | None = None
    seed: int = 0
    samples: int = 100_000

    def __post_init__(self):
        object.__setattr__(self, "n_bs_antennas",
                           check_scalar(self.n_bs_antennas, "n_bs_antennas", low=1, integer=True))
        object.__setattr__(self, "link_budget",
                           check_scalar(self.link_budget, "link_budget", low=0.0, closed_low=False))
        object.__setattr__(self, "samples", check_scalar(self.samples, "samples", low=1, integer=True))
        object.__setattr__(self, "seed", check_scalar(self.seed, "seed", low=0, integer=True))


@dataclass(frozen=True, eq=False)
class CascadeSample:
    h_r: np.ndarray
    h: np.ndarray
    snr_inst: float


def cascade_channel(cfg, profile, h_r):
    """``h = a_b a_r^H Psi h_r`` for one or many ``h_r`` realizations (rows)."""
    a_r = steering_vector(cfg.geometry)
    a_b = bs_steering_vector(cfg.n_bs_antennas)
    psi = np.exp(1j * np.asarray(profile.angles if isinstance(profile, PhaseProfile) else profile))
    scalar = np.asarray(h_r) @ (np.conj(a_r) * psi)
    return np.multiply.outer(scalar, a_b)


def sample_cascade(cfg, profile, cov, seed=None):
    """One :class:`CascadeSample` drawn with ``seed`` (defaults to ``cfg.seed``)."""
    h_r = sample_ms_ris_channel(cov, cfg.seed if seed is None else seed)
    h = cascade_channel(cfg, profile, h_r)
    return CascadeSample(h_r, h, float(cfg.link_budget * np.vdot(h, h).real))


def average_snr_analytic(cfg, profile):
    """``(alpha P / sigma^2) N_b N_r zeta``."""
    gain = profile.gain if isinstance(profile, PhaseProfile) else float(profile)
    return cfg.link_budget * cfg.n_bs_antennas * cfg.geometry.n_elements * gain


@dataclass(frozen=True, eq=False)
class SnrEstimate:
    mean: float
    std_error: float
    cv: float
    samples: np.ndarray

    @property
    def n_samples(self):
        return self.samples.size


def simulate_snr(cfg, profile, cov, *, batch=8192):
    """Monte Carlo SNR with the matched combiner ``w ~ h``: ``(alpha P/sigma^2) ||h||^2``."""
    values = []
    remaining, k = cfg.samples, 0
    while remaining > 0:
        size = min(batch, remaining)
        h_r = sample_ms_ris_channel(cov, substreams(cfg.seed, k), size=size)
        h = cascade_channel(cfg, profile, h_r)
        values.append(cfg.link_budget * np.sum(np.abs(h) ** 2, axis=1))
        remaining -= size
        k += 1
    snr = np.concatenate(values)
    mean = float(snr.mean())
    std = float(snr.std(ddof=1)) if snr.size > 1 else 0.0
    return SnrEstimate(mean, std / math.sqrt(snr.size), std / mean if mean > 0 else math.nan, snr)


def instantaneous_snr(cfg, cov, *, batch=8192):
    """Monte Carlo SNR with per-realization phase optimization.

    Co-phasing every element gives ``||h||^2 = N_b (sum_m |h_m|)^2``.
    """
    values = []
    remaining, k = cfg.samples, 0
    while remaining > 0:
        size = min(batch, remaining)
        h_r = sample_ms_ris_channel(cov, substreams(cfg.seed, k), size=size)
        values.append(cfg.link_budget * cfg.n_bs_antennas * np.abs(h_r).sum(axis=1) ** 2)
        remaining -= size
        k += 1
    snr = np.concatenate(values)
    mean = float(snr.mean())
    std = float(snr.std(ddof=1)) if snr.size > 1 else 0.0
    return SnrEstimate(mean, std / math.sqrt(snr.size), std / mean if mean > 0 else math.nan, snr)


def to_db(x):
    return 10.0 * math.log10(x)
