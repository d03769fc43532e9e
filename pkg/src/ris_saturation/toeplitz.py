"""Hermitian-Toeplitz covariance, its top eigenpair, and saturation bounds."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_coefficients, check_scalar, check_square_hermitian
from .correlation import CorrelationSequence, Provenance, approx_magnitudes
from .exceptions import DivergentBoundError, DomainError, InvalidCorrelationError, UnsupportedFamilyError
from .pas import Family

logger = logging.getLogger(__name__)

PSD_TOLERANCE = 1e-8


def toeplitz_hermitian(coeffs):
    """Hermitian-Toeplitz matrix with first row ``coeffs``.

    Entry ``(k, l)`` is ``c_{l-k}``, with ``c_{-n} = conj(c_n)`` below the
    diagonal.
    """
    c = check_coefficients(coeffs)
    idx = np.arange(c.size)
    lag = idx[None, :] - idx[:, None]
    return np.where(lag >= 0, c[np.abs(lag)], np.conj(c[np.abs(lag)]))


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Spatial covariance of the MS-RIS channel.

    Attributes
    ----------
    matrix : ndarray, shape (N, N)
    eigenvalues : ndarray
        Ascending eigenvalues, negative ones within tolerance clamped to 0.
    eigenvectors : ndarray
    source : CorrelationSequence or None
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: CorrelationSequence | None = None

    @property
    def dimension(self):
        return self.matrix.shape[0]

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def sqrt_factor(self):
        """``L`` with ``L @ L.conj().T == matrix`` (clamped spectrum)."""
        return self.eigenvectors * np.sqrt(self.eigenvalues)[None, :]


def build_covariance(seq, n_elements=None):
    """Build the ``n_elements`` x ``n_elements`` covariance from ``seq``.

    ``seq`` may be a :class:`CorrelationSequence` or a plain coefficient
    array.  Eigenvalues in ``[-1e-8, 0)`` are clamped to zero; anything more
    negative raises :class:`InvalidCorrelationError`.
    """
    coeffs = seq.coeffs if isinstance(seq, CorrelationSequence) else check_coefficients(seq)
    if n_elements is None:
        n_elements = coeffs.size
    n_elements = check_scalar(n_elements, "n_elements", low=1, integer=True)
    if coeffs.size < n_elements:
        raise DomainError(f"sequence holds {coeffs.size} coefficients, need {n_elements}")
    matrix = toeplitz_hermitian(coeffs[:n_elements])
    matrix.setflags(write=False)
    w, u = np.linalg.eigh(matrix)
    if w[0] < -PSD_TOLERANCE:
        raise InvalidCorrelationError(
            f"covariance is indefinite: smallest eigenvalue {w[0]:.3e} < {-PSD_TOLERANCE:g}"
        )
    w = np.maximum(w, 0.0)
    source = seq if isinstance(seq, CorrelationSequence) else None
    return CovarianceMatrix(matrix, w, u, source)


@dataclass(frozen=True)
class Eigenpair:
    value: float
    eigvec: np.ndarray = field(repr=False)
    iterations: int
    method: str


def lambda_max(cov, *, rtol=1e-12, max_iter=100_000, dense_when_cheaper=True):
    """Largest eigenvalue and a unit eigenvector of a Hermitian PSD matrix.

    Shifted power iteration from the all-ones vector, with the shift equal to
    ``trace / N``.  Converged when successive Rayleigh quotients agree to
    ``rtol`` and the remaining error, extrapolated from the observed
    geometric rate, is below ``rtol`` as well.  Falls back to a dense
    Hermitian eigendecomposition when the iteration stalls: the cap is hit,
    the projected iteration count exceeds it, or the final residual is too
    large.  With ``dense_when_cheaper`` the dense solver is also used once
    the projection exceeds ``4 N`` further steps, roughly its own cost.
    """
    a = cov.matrix if isinstance(cov, CovarianceMatrix) else check_square_hermitian(cov)
    n = a.shape[0]
    shift = float(np.trace(a).real) / n
    x = np.ones(n, dtype=complex) / math.sqrt(n)
    ax = a @ x
    rq = float(np.real(np.vdot(x, ax)))
    prev_delta = math.inf
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        y = ax + shift * x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            break
        x = y / norm
        ax = a @ x
        new = float(np.real(np.vdot(x, ax)))
        delta = abs(new - rq)
        rq = new
        scale = max(abs(rq), 1e-300)
        rate = min(delta / prev_delta, 1.0) if prev_delta > 0 else 0.0
        prev_delta = delta
        if delta <= rtol * scale:
            tail = delta * rate / (1.0 - rate) if rate < 1.0 else math.inf
            if tail <= rtol * scale:
                converged = True
                break
        if it >= 50 and 0.0 < rate < 1.0 and delta > 0.0:
            needed = math.log(rtol * scale * (1.0 - rate) / delta) / math.log(rate)
            if it + needed > max_iter or (dense_when_cheaper and needed > 4 * n):
                break
    if converged:
        residual = np.linalg.norm(ax - rq * x)
        if residual <= 1e-6 * max(rq, 1.0):
            return Eigenpair(rq, _fix_phase(x), it, "power")
    logger.debug("power iteration stalled after %d steps; using dense solver", it)
    w, u = np.linalg.eigh(a)
    return Eigenpair(float(w[-1]), _fix_phase(u[:, -1]), it, "eigh")


def _fix_phase(vec):
    # make the largest-modulus entry real positive so outputs are reproducible
    k = int(np.argmax(np.abs(vec)))
    return vec * np.exp(-1j * np.angle(vec[k]))


def fourier_vector(n_elements, m):
    """Unit-norm Fourier vector with entries ``exp(-j 2 pi m p / N) / sqrt(N)``."""
    n_elements = check_scalar(n_elements, "n_elements", low=1, integer=True)
    m = check_scalar(m, "m", low=0, high=n_elements - 1, integer=True)
    p = np.arange(n_elements)
    return np.exp(-2j * math.pi * m * p / n_elements) / math.sqrt(n_elements)


def fourier_rayleigh_quotients(matrix):
    """Rayleigh quotients of ``matrix`` at every Fourier vector."""
    a = np.asarray(matrix.matrix if isinstance(matrix, CovarianceMatrix) else matrix)
    n = a.shape[0]
    p = np.arange(n)
    f = np.exp(-2j * math.pi * np.outer(p, p) / n) / math.sqrt(n)
    return np.real(np.einsum("pm,pq,qm->m", f.conj(), a, f))


@dataclass(frozen=True)
class SpectralSummary:
    lambda_max: float
    lambda_min: float
    trace: float
    dominant_eigvec: np.ndarray = field(repr=False)
    fourier_index_best: int


def spectral_summary(cov):
    """Extreme eigenvalues and the Fourier vector best aligned with the top one."""
    top = lambda_max(cov)
    p = np.arange(cov.dimension)
    f = np.exp(-2j * math.pi * np.outer(p, p) / cov.dimension) / math.sqrt(cov.dimension)
    alignment = np.abs(f.conj().T @ top.eigvec)
    return SpectralSummary(top.value, float(cov.eigenvalues[0]), cov.trace, top.eigvec,
                           int(np.argmax(alignment)))


def bound_sum_abs(seq, n_terms):
    """``sum_{n=-T}^{T} |c_n|`` with ``T = n_terms``.

    Closed-form sequences are extended analytically past their stored lags.
    The exponential model additionally receives its exact geometric tail, so
    its result is the full infinite sum.  Quadrature sequences are truncated
    at the stored length.
    """
    n_terms = check_scalar(n_terms, "n_terms", low=1, integer=True)
    if not isinstance(seq, CorrelationSequence):
        mags = np.abs(check_coefficients(seq))[: n_terms + 1]
        return float(mags[0] + 2.0 * math.fsum(mags[1:]))
    if seq.provenance is Provenance.EXACT_QUADRATURE or seq.model is None:
        mags = seq.magnitudes[: n_terms + 1]
        if mags.size < n_terms + 1:
            logger.debug("sum of |c_n| truncated at lag %d", mags.size - 1)
    else:
        mags = approx_magnitudes(seq.model, seq.geometry.spacing_ratio, np.arange(n_terms + 1))
    total = mags[0] + 2.0 * math.fsum(mags[1:].tolist())
    if seq.provenance is Provenance.EXPONENTIAL_MODEL and seq.model is not None:
        kappa = seq.model.kappa
        last = mags.size - 1
        total += 2.0 * kappa ** (last + 1) / (1.0 - kappa)
    return float(total)


def _spread_argument(model, geom):
    return math.pi * geom.spacing_ratio * math.sin(model.mean_angle) * model.angular_spread


def bound_theta(model, geom):
    """Gaussian-PAS saturation bound: the Jacobi theta series ``sum q**(n**2)``."""
    if model.family is not Family.GAUSSIAN:
        raise UnsupportedFamilyError("bound_theta applies to the Gaussian PAS only")
    q = math.exp(-2.0 * _spread_argument(model, geom) ** 2)
    return theta3_zero(q)


def theta3_zero(q):
    """``theta_3(0, q) = 1 + 2 sum_{n>=1} q**(n**2)`` by direct summation."""
    q = check_scalar(q, "q", low=0.0)
    if q >= 1.0:
        raise DivergentBoundError("theta series diverges for q >= 1 (zero angular spread)")
    if q == 0.0:
        return 1.0
    log_q = math.log(q)
    terms = []
    n = 1
    while True:
        t = math.exp(log_q * n * n)
        if t < 1e-16:
            break
        terms.append(t)
        n += 1
    return 1.0 + 2.0 * math.fsum(terms)


def bound_coth(model, geom):
    """Laplacian-PAS saturation bound ``x coth(x)``."""
    if model.family is not Family.LAPLACIAN:
        raise UnsupportedFamilyError("bound_coth applies to the Laplacian PAS only")
    denom = math.sqrt(2.0) * geom.spacing_ratio * math.sin(model.mean_angle) * model.angular_spread
    if denom <= 0.0:
        raise DivergentBoundError("coth bound diverges for zero angular spread")
    return x_coth_x(1.0 / denom)


def x_coth_x(x):
    if x > 20.0:
        # coth(x) = 1 + 2 e^{-2x} / (1 - e^{-2x})
        e = math.exp(-2.0 * x)
        return x * (1.0 + 2.0 * e / (1.0 - e))
    return x / math.tanh(x)


def bound_geometric(kappa):
    """Exponential-model saturation bound ``(1 + kappa) / (1 - kappa)``."""
    kappa = check_scalar(kappa, "kappa", low=0.0, high=1.0, closed_high=False)
    return (1.0 + kappa) / (1.0 - kappa)


def family_bound(model, geom):
    """Closed-form saturation bound for ``model``'s family."""
    if model.family is Family.GAUSSIAN:
        return bound_theta(model, geom)
    if model.family is Family.LAPLACIAN:
        return bound_coth(model, geom)
    if model.family is Family.EXPONENTIAL:
        return bound_geometric(model.kappa)
    raise UnsupportedFamilyError(f"no closed-form bound for the {model.family.value} family")
