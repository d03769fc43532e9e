"""Small input-validation helpers shared by the public functions."""

import math
import numbers

import numpy as np

from .exceptions import DomainError


def check_scalar(value, name, *, low=None, high=None, closed_low=True,
                 closed_high=True, integer=False):
    """Validate a real scalar against optional bounds and return it.

    Mirrors :func:`sklearn.utils.check_scalar` but raises
    :class:`DomainError` and accepts numpy scalars transparently.
    """
    if isinstance(value, bool):
        raise DomainError(f"{name} must be a number, got bool")
    if integer:
        if not isinstance(value, numbers.Integral):
            if isinstance(value, numbers.Real) and float(value).is_integer():
                value = int(value)
            else:
                raise DomainError(f"{name} must be an integer, got {value!r}")
        value = int(value)
    else:
        if not isinstance(value, numbers.Real):
            raise DomainError(f"{name} must be a real number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")
    if low is not None:
        if value < low or (value == low and not closed_low):
            op = ">=" if closed_low else ">"
            raise DomainError(f"{name} must be {op} {low}, got {value!r}")
    if high is not None:
        if value > high or (value == high and not closed_high):
            op = "<=" if closed_high else "<"
            raise DomainError(f"{name} must be {op} {high}, got {value!r}")
    return value


def check_angle(value, name):
    """Angle strictly inside the half-space (0, pi)."""
    return check_scalar(value, name, low=0.0, high=math.pi,
                        closed_low=False, closed_high=False)


def check_angles(theta, name="theta"):
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise DomainError(f"{name} must be finite")
    if np.any(theta <= 0.0) or np.any(theta >= math.pi):
        raise DomainError(f"{name} must lie in the open interval (0, pi)")
    return theta


def check_coefficients(coeffs, min_length=1):
    """Return a 1-D complex array of correlation coefficients."""
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1:
        raise DomainError(f"correlation coefficients must be 1-D, got shape {c.shape}")
    if c.size < min_length:
        raise DomainError(f"need at least {min_length} coefficients, got {c.size}")
    if not np.all(np.isfinite(c)):
        raise DomainError("correlation coefficients must be finite")
    return c


def check_square_hermitian(matrix, name="matrix", atol=1e-10):
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"{name} must be square, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if not np.allclose(a, a.conj().T, rtol=0.0, atol=atol * scale):
        raise DomainError(f"{name} must be Hermitian")
    return a


def wrap_phase(angles):
    """Map angles to [0, 2*pi)."""
    out = np.mod(np.asarray(angles, dtype=float), 2.0 * math.pi)
    # mod can return exactly 2*pi for tiny negative inputs
    out[out >= 2.0 * math.pi] = 0.0
    return out
