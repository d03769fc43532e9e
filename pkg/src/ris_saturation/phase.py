"""Statistical (two-timescale) optimization of RIS phase shifts.

Conventions
-----------
The RIS reflection coefficient of element ``m`` is ``exp(j psi_m)``.  With
``v = a_r / sqrt(N)`` and the covariance ``C`` built by
:func:`~ris_saturation.toeplitz.build_covariance`, the beamforming gain is::

    zeta = v^H Psi C Psi^H v = w^H M w,   w_m = exp(-j psi_m),
    M = diag(conj(v)) C diag(v)

so ``M`` is Hermitian-Toeplitz with first row ``c_n exp(j 2 pi n d cos(theta_r)/lambda_c) / N``
and unit trace.  For two elements the optimum offset is
``psi_1 - psi_0 = arg(c_1) + 2 pi d cos(theta_r) / lambda_c``.
"""

import enum
import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_scalar, check_square_hermitian, wrap_phase
from .exceptions import DomainError, NumericalFailure
from .toeplitz import CovarianceMatrix, fourier_vector


class Method(str, enum.Enum):
    COORDINATE_ASCENT = "coordinate"
    FOURIER = "dft"
    BRUTE_FORCE = "brute"
    CLOSED_FORM_2 = "closed2"


@dataclass(frozen=True, eq=False)
class PhaseProfile:
    """RIS phase angles ``psi`` (radians, ``psi[0] == 0``) and their gain."""

    angles: np.ndarray
    gain: float
    method: Method

    @property
    def n_elements(self):
        return self.angles.size

    @property
    def reflection(self):
        """Unit-modulus reflection coefficients ``exp(j psi_m)``."""
        return np.exp(1j * self.angles)

    @property
    def weights(self):
        """The vector ``w`` of the quadratic form, ``exp(-j psi_m)``."""
        return np.exp(-1j * self.angles)

    def to_csv_rows(self):
        return [(m, repr(float(a))) for m, a in enumerate(self.angles)]


def _profile(weights, gain, method):
    """Normalize so that psi_0 = 0 and freeze."""
    psi = -np.angle(np.asarray(weights, dtype=complex))
    psi = wrap_phase(psi - psi[0])
    psi.setflags(write=False)
    return PhaseProfile(psi, float(gain), Method(method))


def steering_vector(geom):
    """RIS steering vector, entry ``m`` = ``exp(j 2 pi m d cos(theta_r) / lambda_c)``."""
    m = np.arange(geom.n_elements)
    return np.exp(2j * math.pi * m * geom.spacing_ratio * math.cos(geom.departure_angle))


@dataclass(frozen=True, eq=False)
class GainMatrix:
    """``M = diag(conj(v)) C diag(v)``; ``zeta = w^H M w``."""

    matrix: np.ndarray
    v: np.ndarray

    @property
    def n_elements(self):
        return self.matrix.shape[0]

    @classmethod
    def from_covariance(cls, cov, geom):
        c = cov.matrix if isinstance(cov, CovarianceMatrix) else check_square_hermitian(cov)
        if c.shape[0] != geom.n_elements:
            raise DomainError(f"covariance is {c.shape[0]}x{c.shape[0]} but geometry has "
                              f"{geom.n_elements} elements")
        v = steering_vector(geom) / math.sqrt(geom.n_elements)
        m = np.conj(v)[:, None] * c * v[None, :]
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        return cls(m, v)


def _quadratic(weights, matrix):
    value = np.vdot(weights, matrix @ weights)
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > 1e-8 * scale:
        raise NumericalFailure(f"quadratic form has imaginary residue {value.imag:.3e}")
    return float(value.real)


def gain_of(angles, gain_matrix):
    """Beamforming gain of the phase angles ``angles`` under ``gain_matrix``."""
    matrix = gain_matrix.matrix if isinstance(gain_matrix, GainMatrix) else np.asarray(gain_matrix)
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (matrix.shape[0],):
        raise DomainError(f"expected {matrix.shape[0]} phase angles, got shape {angles.shape}")
    return _quadratic(np.exp(-1j * angles), matrix)


_COMPILED_MIN_SIZE = 16  # below this the numpy loop beats the compile cost


def _sweeps_python(mat, w, tol, max_sweeps, callback=None):
    n = mat.shape[0]
    z = mat @ w
    diag = np.real(np.diag(mat))
    gain = float(np.real(np.vdot(w, z)))
    cols = np.ascontiguousarray(mat.T)  # cols[m] == mat[:, m]
    for _ in range(max_sweeps):
        start = gain
        for m in range(n):
            s = z[m] - diag[m] * w[m]
            mag = abs(s)
            if mag == 0.0:
                continue
            new = s / mag
            delta = new - w[m]
            if delta == 0:
                continue
            z += cols[m] * delta
            w[m] = new
            if callback is not None:
                callback(float(np.real(np.vdot(w, z))))
        gain = float(np.real(np.vdot(w, z)))
        if gain - start <= tol * abs(gain):
            break


def _sweeps_loop(mat, w, tol, max_sweeps):
    # scalar loops so the same source compiles under numba
    n = mat.shape[0]
    z = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        acc = 0j
        for m in range(n):
            acc += mat[k, m] * w[m]
        z[k] = acc
    gain = 0.0
    for k in range(n):
        gain += (w[k].conjugate() * z[k]).real
    for _ in range(max_sweeps):
        start = gain
        for m in range(n):
            s = z[m] - mat[m, m].real * w[m]
            mag = abs(s)
            if mag == 0.0:
                continue
            new = s / mag
            delta = new - w[m]
            if delta == 0:
                continue
            for k in range(n):
                z[k] += mat[k, m] * delta
            w[m] = new
        gain = 0.0
        for k in range(n):
            gain += (w[k].conjugate() * z[k]).real
        if gain - start <= tol * abs(gain):
            break


@functools.lru_cache(maxsize=None)
def _sweep_kernel():
    """Compiled sweep loop when numba is installed, numpy fallback otherwise."""
    try:
        import numba
    except ImportError:
        return _sweeps_python
    return numba.njit(cache=False, nogil=True)(_sweeps_loop)


def optimize_coordinate_ascent(gain_matrix, init, *, tol=1e-10, max_sweeps=10_000,
                               callback=None):
    """Cyclic exact coordinate ascent on the unit-modulus quadratic form.

    Each coordinate is set to the phase of ``sum_{k != m} M[m, k] w_k``,
    which maximizes the gain with the others held fixed, so the gain never
    decreases.  Stops when a full sweep improves the gain by less than
    ``tol`` relative, or after ``max_sweeps``.

    Parameters
    ----------
    gain_matrix : GainMatrix
    init : PhaseProfile or array_like of angles
    callback : callable, optional
        Called as ``callback(gain)`` after every single-coordinate update.
    """
    mat = gain_matrix.matrix if isinstance(gain_matrix, GainMatrix) else np.asarray(gain_matrix)
    n = mat.shape[0]
    angles = init.angles if isinstance(init, PhaseProfile) else np.asarray(init, dtype=float)
    if angles.shape != (n,):
        raise DomainError(f"init must hold {n} angles")
    w = np.exp(-1j * angles)
    if callback is None and n >= _COMPILED_MIN_SIZE:
        _sweep_kernel()(np.ascontiguousarray(mat, dtype=complex), w, float(tol), int(max_sweeps))
    else:
        _sweeps_python(mat, w, tol, max_sweeps, callback)
    gain = _quadratic(w, mat)
    init_gain = _quadratic(np.exp(-1j * angles), mat)
    if gain < init_gain:
        # cannot happen beyond rounding; keep the contract that output >= input
        w, gain = np.exp(-1j * angles), init_gain
    return _profile(w, gain, Method.COORDINATE_ASCENT)


def dft_phase_profile(gain_matrix):
    """Best of the ``N`` Fourier vectors, scaled to unit-modulus entries.

    Ties go to the lowest index ``m``.
    """
    mat = gain_matrix.matrix if isinstance(gain_matrix, GainMatrix) else np.asarray(gain_matrix)
    n = mat.shape[0]
    p = np.arange(n)
    f = np.exp(-2j * math.pi * np.outer(p, p) / n)
    gains = np.real(np.einsum("pm,pq,qm->m", f.conj(), mat, f))
    best = int(np.argmax(gains))
    w = math.sqrt(n) * fourier_vector(n, best)
    return _profile(w, _quadratic(w, mat), Method.FOURIER)


def optimize_phases(gain_matrix, *, n_restarts=5, random_state=0, tol=1e-10, max_sweeps=10_000):
    """Coordinate ascent from the best DFT profile plus seeded random restarts.

    Returns the highest-gain profile; ties keep the earliest start.
    """
    mat = gain_matrix.matrix if isinstance(gain_matrix, GainMatrix) else np.asarray(gain_matrix)
    n = mat.shape[0]
    best = optimize_coordinate_ascent(mat, dft_phase_profile(mat), tol=tol, max_sweeps=max_sweeps)
    if n <= 1:
        return best
    rng = np.random.Generator(np.random.Philox(random_state))
    for _ in range(n_restarts):
        init = rng.uniform(0.0, 2.0 * math.pi, size=n)
        cand = optimize_coordinate_ascent(mat, init, tol=tol, max_sweeps=max_sweeps)
        if cand.gain > best.gain * (1.0 + 1e-13):
            best = cand
    return best


def closed_form_two(c1, geom):
    """Optimal profile for two elements: gain ``1 + |c_1|``."""
    if geom.n_elements != 2:
        raise DomainError("closed form applies to two elements only")
    offset = np.angle(c1) + 2.0 * math.pi * geom.spacing_ratio * math.cos(geom.departure_angle)
    angles = wrap_phase(np.array([0.0, offset]))
    angles.setflags(write=False)
    return PhaseProfile(angles, 1.0 + abs(c1), Method.CLOSED_FORM_2)


def grid_resolution_bound(zeta_max, grid_points):
    """Worst-case loss of the best grid profile relative to the optimum.

    At a maximizer ``w*`` every coordinate satisfies ``(M w*)_m = mu_m w*_m``
    with ``mu_m >= 0`` and ``sum mu_m = zeta*``; rounding each phase by at
    most ``pi / G`` loses at most ``sum mu_m eps_m**2 <= zeta* (pi / G)**2``.
    Pass ``lambda_max`` for ``zeta_max`` when the optimum is unknown.
    """
    return float(zeta_max) * (math.pi / grid_points) ** 2


def brute_force_oracle(gain_matrix, grid_points=256, *, chunk=1 << 18):
    """Exhaustive search over a uniform phase grid with ``psi_0 = 0``."""
    mat = gain_matrix.matrix if isinstance(gain_matrix, GainMatrix) else np.asarray(gain_matrix)
    n = mat.shape[0]
    if n > 4:
        raise DomainError("brute-force search is limited to N_r <= 4")
    grid_points = check_scalar(grid_points, "grid_points", low=16, integer=True)
    if n == 1:
        return _profile(np.ones(1), _quadratic(np.ones(1, dtype=complex), mat), Method.BRUTE_FORCE)
    phasors = np.exp(-2j * math.pi * np.arange(grid_points) / grid_points)
    best_gain, best_idx = -math.inf, None
    combos = itertools.product(range(grid_points), repeat=n - 1)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        w = np.ones((block.shape[0], n), dtype=complex)
        w[:, 1:] = phasors[block]
        gains = np.real(np.einsum("bk,kl,bl->b", w.conj(), mat, w))
        k = int(np.argmax(gains))
        if gains[k] > best_gain:
            best_gain, best_idx = float(gains[k]), block[k]
    w = np.concatenate([[1.0 + 0j], phasors[best_idx]])
    return _profile(w, _quadratic(w, mat), Method.BRUTE_FORCE)


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    samples: int


def instantaneous_benchmark(cov, geom=None, samples=10_000, seed=0, *, batch=4096):
    """Average gain with phases re-optimized for every channel realization.

    Per realization the best phases co-phase all terms of ``v^H Psi h_r``,
    giving ``(sum_m |h_m|)**2 / N``; the departure angle therefore drops out
    and ``geom`` is accepted only for interface symmetry.
    """
    from .snr import sample_ms_ris_channel, substreams

    samples = check_scalar(samples, "samples", low=1000, integer=True)
    n = cov.dimension
    values = []
    for k, size in enumerate(_batches(samples, batch)):
        h = sample_ms_ris_channel(cov, substreams(seed, k), size=size)
        values.append(np.abs(h).sum(axis=1) ** 2 / n)
    values = np.concatenate(values)
    return MonteCarloEstimate(float(values.mean()), float(values.std(ddof=1) / math.sqrt(samples)),
                              samples)


def _batches(total, size):
    full, rest = divmod(total, size)
    return [size] * full + ([rest] if rest else [])
