"""Power angular spectrum (PAS) families on the half-space (0, pi)."""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._quadrature import integrate
from ._validation import check_angle, check_angles, check_scalar
from .exceptions import DomainError, NoDensityError

#: Smallest angular spread accepted for the Gaussian and Laplacian families.
MIN_SPREAD = math.radians(0.01)


class Family(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LAPLACIAN = "laplacian"
    EXPONENTIAL = "exponential"
    TABULATED = "tabulated"


def gaussian_q(x):
    """Upper-tail probability of the standard normal distribution."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


@dataclass(frozen=True)
class PasModel:
    """An azimuthal power angular spectrum.

    Build instances with the family constructors (:meth:`gaussian`,
    :meth:`laplacian`, :meth:`exponential`, :meth:`tabulated`) rather than
    calling the dataclass directly.  Densities are normalized numerically on
    (0, pi) at construction, so every density family integrates to one and
    yields ``c_0 = 1``.

    Attributes
    ----------
    family : Family
    mean_angle : float or None
        Mean angle in radians.  Optional for the exponential model, where it
        only sets the phase progression of the correlations.
    angular_spread : float or None
        Spread in radians (Gaussian and Laplacian).
    kappa : float or None
        Correlation between adjacent elements (exponential model).
    table : tuple of (angle, density) pairs or None
    """

    family: Family
    mean_angle: float | None = None
    angular_spread: float | None = None
    kappa: float | None = None
    table: tuple | None = None
    normalization: float = field(default=1.0, repr=False, compare=False)

    @classmethod
    def gaussian(cls, mean_angle, angular_spread):
        return cls._with_spread(Family.GAUSSIAN, mean_angle, angular_spread)

    @classmethod
    def laplacian(cls, mean_angle, angular_spread):
        return cls._with_spread(Family.LAPLACIAN, mean_angle, angular_spread)

    @classmethod
    def exponential(cls, kappa, mean_angle=None):
        kappa = check_scalar(kappa, "kappa", low=0.0, high=1.0, closed_high=False)
        if mean_angle is not None:
            mean_angle = check_angle(mean_angle, "mean_angle")
        return cls(Family.EXPONENTIAL, mean_angle=mean_angle, kappa=kappa)

    @classmethod
    def tabulated(cls, angles, densities):
        """Piecewise-linear PAS through ``(angle, density)`` samples.

        The density is zero outside the tabulated range and is renormalized
        to integrate to one.
        """
        angles = np.asarray(angles, dtype=float)
        densities = np.asarray(densities, dtype=float)
        if angles.ndim != 1 or angles.shape != densities.shape or angles.size < 2:
            raise DomainError("table needs matching 1-D angle and density arrays of length >= 2")
        if np.any(np.diff(angles) <= 0):
            raise DomainError("table angles must be strictly increasing")
        if angles[0] < 0.0 or angles[-1] > math.pi:
            raise DomainError("table angles must lie in [0, pi]")
        if np.any(densities < 0) or not np.all(np.isfinite(densities)):
            raise DomainError("table densities must be finite and nonnegative")
        table = tuple(zip(angles.tolist(), densities.tolist()))
        model = cls(Family.TABULATED, table=table)
        return model._normalized()

    @classmethod
    def _with_spread(cls, family, mean_angle, angular_spread):
        mean_angle = check_angle(mean_angle, "mean_angle")
        angular_spread = check_scalar(angular_spread, "angular_spread", low=0.0, closed_low=False)
        if angular_spread < MIN_SPREAD:
            raise DomainError(
                f"angular_spread below {math.degrees(MIN_SPREAD)} deg is the line-of-sight "
                "limit and is not supported by the PAS models"
            )
        return cls(family, mean_angle=mean_angle, angular_spread=angular_spread)._normalized()

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    @property
    def has_density(self):
        return self.family is not Family.EXPONENTIAL

    def breakpoints(self):
        """Interior points where the density has kinks or concentrated mass."""
        if self.family is Family.TABULATED:
            pts = [a for a, _ in self.table]
            return [p for p in pts if 0.0 < p < math.pi] if len(pts) <= 256 else []
        if self.family in (Family.GAUSSIAN, Family.LAPLACIAN):
            mu, s = self.mean_angle, self.angular_spread
            pts = [mu + k * s for k in (-16, -8, -4, -2, -1, 0, 1, 2, 4, 8, 16)]
            return [p for p in pts if 0.0 < p < math.pi]
        return []

    def kernel(self, theta):
        """Unnormalized density; vectorized, no domain checks."""
        theta = np.asarray(theta, dtype=float)
        if self.family is Family.GAUSSIAN:
            z = (theta - self.mean_angle) / self.angular_spread
            return np.exp(-0.5 * z * z)
        if self.family is Family.LAPLACIAN:
            return np.exp(-np.abs(math.sqrt(2.0) * (theta - self.mean_angle) / self.angular_spread))
        if self.family is Family.TABULATED:
            a, d = np.array(self.table).T
            return np.interp(theta, a, d, left=0.0, right=0.0)
        raise NoDensityError("the exponential correlation model has no pointwise density")

    def _normalized(self):
        grid = np.concatenate([[0.0], np.linspace(0.0, math.pi, 17)[1:-1], self.breakpoints(), [math.pi]])
        total = integrate(self.kernel, np.sort(grid), atol=1e-13).real
        if not total > 0.0:
            raise DomainError("PAS has zero mass on (0, pi)")
        object.__setattr__(self, "normalization", 1.0 / total)
        return self

    def density(self, theta):
        """Normalized density, vectorized over ``theta`` in (0, pi)."""
        if not self.has_density:
            raise NoDensityError("the exponential correlation model has no pointwise density")
        scalar = np.ndim(theta) == 0
        theta = check_angles(theta)
        out = self.normalization * self.kernel(theta)
        return float(out) if scalar else out


def pas_density(model, theta):
    """Evaluate the normalized PAS of ``model`` at ``theta`` (radians)."""
    return model.density(theta)
