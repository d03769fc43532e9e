"""Spatial correlation between elements of a uniform linear RIS.

The correlation at lag ``n`` is the characteristic function of the PAS
evaluated through the array phase progression::

    c_n = int_0^pi P(theta) exp(j 2 pi n (d / lambda_c) cos(theta)) dtheta

Negative lags are never stored; ``c_{-n} = conj(c_n)``.
"""

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from ._quadrature import integrate
from ._validation import check_angle, check_coefficients, check_scalar
from .exceptions import DomainError, NoDensityError, UnsupportedFamilyError
from .pas import Family, PasModel


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear RIS.

    ``spacing`` and ``wavelength`` share a unit; only their ratio matters, so
    the default ``wavelength=1`` lets ``spacing`` be given in wavelengths.
    """

    n_elements: int
    spacing: float = 0.5
    wavelength: float = 1.0
    departure_angle: float = math.pi / 2

    def __post_init__(self):
        object.__setattr__(self, "n_elements", check_scalar(self.n_elements, "n_elements", low=1, integer=True))
        object.__setattr__(self, "spacing", check_scalar(self.spacing, "spacing", low=0.0, closed_low=False))
        object.__setattr__(self, "wavelength", check_scalar(self.wavelength, "wavelength", low=0.0, closed_low=False))
        object.__setattr__(self, "departure_angle", check_angle(self.departure_angle, "departure_angle"))
        if not math.isfinite(self.spacing / self.wavelength):
            raise DomainError("spacing / wavelength must be finite")

    @property
    def spacing_ratio(self):
        """Element spacing in wavelengths, d / lambda_c."""
        return self.spacing / self.wavelength

    def with_elements(self, n_elements):
        return ArrayGeometry(n_elements, self.spacing, self.wavelength, self.departure_angle)


class Provenance(str, enum.Enum):
    EXACT_QUADRATURE = "exact"
    CLOSED_FORM_APPROX = "approx"
    EXPONENTIAL_MODEL = "exponential"


@dataclass(frozen=True, eq=False)
class CorrelationSequence:
    """Correlation coefficients ``c_0 .. c_{len-1}`` and where they came from."""

    coeffs: np.ndarray
    provenance: Provenance
    geometry: ArrayGeometry | None = None
    model: PasModel | None = None

    def __post_init__(self):
        c = check_coefficients(self.coeffs).copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        """Coefficient at lag ``n``; negative lags are conjugated."""
        n = int(n)
        return self.coeffs[n] if n >= 0 else np.conj(self.coeffs[-n])

    @property
    def magnitudes(self):
        return np.abs(self.coeffs)

    def to_csv(self, handle=None):
        """Write ``n, re, im, abs`` rows; return the text if ``handle`` is None."""
        out = io.StringIO() if handle is None else handle
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "re", "im", "abs"])
        for n, c in enumerate(self.coeffs):
            writer.writerow([n, repr(float(c.real)), repr(float(c.imag)), repr(float(abs(c)))])
        return out.getvalue() if handle is None else None


def _lag_grid(model, n, spacing_ratio):
    # ~2 n d/lambda oscillation periods across (0, pi); keep >= 8 panels each.
    periods = 2.0 * abs(n) * spacing_ratio
    panels = max(16, int(math.ceil(8.0 * periods)))
    grid = np.linspace(0.0, math.pi, panels + 1)
    return np.sort(np.concatenate([grid, model.breakpoints()]))


def correlation_integral(model, spacing_ratio, n, *, atol=1e-10, max_panels=20_000):
    """Evaluate the correlation integral at a single (possibly negative) lag."""
    if not model.has_density:
        raise NoDensityError("the exponential correlation model has no density to integrate")
    k = 2.0 * math.pi * n * spacing_ratio
    norm = model.normalization

    def integrand(theta):
        return norm * model.kernel(theta) * np.exp(1j * k * np.cos(theta))

    return integrate(integrand, _lag_grid(model, n, spacing_ratio), atol=atol,
                     max_panels=max_panels, lag=n)


def correlation_exact(model, geom, n_max, *, atol=1e-10, max_panels=20_000):
    """Correlations ``c_0 .. c_{n_max-1}`` by adaptive quadrature.

    Raises
    ------
    NoDensityError
        For the exponential model.
    QuadratureError
        If any lag exceeds the panel cap; ``err.lag`` names the lag.
    """
    n_max = check_scalar(n_max, "n_max", low=1, integer=True)
    if not model.has_density:
        raise NoDensityError("the exponential correlation model has no density to integrate")
    r = geom.spacing_ratio
    coeffs = np.array([
        correlation_integral(model, r, n, atol=atol, max_panels=max_panels)
        for n in range(n_max)
    ])
    return CorrelationSequence(coeffs, Provenance.EXACT_QUADRATURE, geom, model)


def approx_magnitudes(model, spacing_ratio, lags):
    """Small-spread closed-form ``|c_n|`` for the parametric families."""
    n = np.abs(np.asarray(lags, dtype=float))
    if model.family is Family.EXPONENTIAL:
        return model.kappa ** n
    if model.family not in (Family.GAUSSIAN, Family.LAPLACIAN):
        raise UnsupportedFamilyError(f"no closed-form correlation for the {model.family.value} family")
    x = math.pi * spacing_ratio * math.sin(model.mean_angle) * model.angular_spread * n
    if model.family is Family.GAUSSIAN:
        return np.exp(-2.0 * x * x)
    return 1.0 / (1.0 + 2.0 * x * x)


def correlation_approx(model, geom, n_max):
    """Correlations from the closed-form magnitude approximations.

    The phase is taken as ``exp(j 2 pi n (d/lambda_c) cos(mean_angle))``, the
    stationary-phase center of the correlation integral.  Exponential models
    without a mean angle get zero phase.
    """
    n_max = check_scalar(n_max, "n_max", low=1, integer=True)
    lags = np.arange(n_max)
    mags = approx_magnitudes(model, geom.spacing_ratio, lags)
    if model.mean_angle is None:
        phase = np.ones(n_max, dtype=complex)
    else:
        phase = np.exp(1j * 2.0 * math.pi * lags * geom.spacing_ratio * math.cos(model.mean_angle))
    coeffs = mags * phase
    coeffs[0] = 1.0
    provenance = (Provenance.EXPONENTIAL_MODEL if model.family is Family.EXPONENTIAL
                  else Provenance.CLOSED_FORM_APPROX)
    return CorrelationSequence(coeffs, provenance, geom, model)


def correlation_sequence(model, geom, n_max, source="exact"):
    """Dispatch to exact quadrature or the closed forms.

    Exponential models always use their defining closed form.
    """
    if model.family is Family.EXPONENTIAL or source == "approx":
        return correlation_approx(model, geom, n_max)
    if source != "exact":
        raise DomainError(f"source must be 'exact' or 'approx', got {source!r}")
    return correlation_exact(model, geom, n_max)


@dataclass(frozen=True)
class WienerCheck:
    summable: bool
    partial_sum: float
    decay_exponent_estimate: float


def wiener_class_check(seq, tail_window=None, margin=0.1):
    """Heuristic test of ``|c_n| = o(1/|n|)`` on the stored lags.

    Fits ``log|c_n|`` against ``log n`` over the last ``tail_window`` lags
    (default: the upper half) and calls the sequence summable when the slope
    is below ``-1 - margin``.
    """
    mags = np.abs(seq.coeffs) if isinstance(seq, CorrelationSequence) else np.abs(check_coefficients(seq))
    n_max = mags.size
    if tail_window is None:
        tail_window = max(2, n_max // 2)
    tail_window = check_scalar(tail_window, "tail_window", low=2, integer=True)
    if n_max < tail_window + 8:
        raise DomainError(f"need at least tail_window + 8 = {tail_window + 8} coefficients, got {n_max}")
    partial = float(mags[0] + 2.0 * mags[1:].sum())
    lags = np.arange(n_max - tail_window, n_max)
    tail = mags[lags]
    keep = tail > 0.0
    if keep.sum() < 2:
        return WienerCheck(True, partial, -math.inf)
    slope = np.polyfit(np.log(lags[keep]), np.log(tail[keep]), 1)[0]
    return WienerCheck(bool(slope < -1.0 - margin), partial, float(slope))
