"""Vectorized adaptive Gauss-Legendre quadrature on a fixed breakpoint set.

Each panel is integrated with a 20-point Gauss rule and checked against a
10-point rule on the same panel.  Panels whose local error estimate exceeds
their share of the absolute tolerance are bisected; all active panels are
evaluated in a single vectorized call per refinement round.
"""

import numpy as np

from .exceptions import QuadratureError

_X_HI, _W_HI = np.polynomial.legendre.leggauss(20)
_X_LO, _W_LO = np.polynomial.legendre.leggauss(10)
_NODES = np.concatenate([_X_HI, _X_LO])


def integrate(func, breakpoints, *, atol=1e-10, max_panels=20_000, lag=None):
    """Integrate ``func`` over ``[breakpoints[0], breakpoints[-1]]``.

    Parameters
    ----------
    func : callable
        Vectorized integrand, may return complex values.
    breakpoints : array_like
        Sorted initial partition.  Kinks and fast oscillation should be
        resolved by this partition; the adaptive loop only refines it.
    atol : float
        Absolute tolerance on the whole integral.
    max_panels : int
        Cap on the number of panels alive at any one time.
    lag : int, optional
        Only used to label a :class:`QuadratureError`.

    Returns
    -------
    complex
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    a, b = edges[:-1], edges[1:]
    total_length = edges[-1] - edges[0]
    result = 0.0 + 0.0j
    for _ in range(64):
        if a.size > max_panels:
            raise QuadratureError(
                f"adaptive quadrature exceeded {max_panels} panels"
                + (f" at lag {lag}" if lag is not None else ""),
                lag=lag,
            )
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        x = mid[:, None] + half[:, None] * _NODES[None, :]
        fx = np.asarray(func(x), dtype=complex)
        hi = half * (fx[:, :20] @ _W_HI)
        lo = half * (fx[:, 20:] @ _W_LO)
        err = np.abs(hi - lo)
        ok = err <= atol * (b - a) / total_length
        result += hi[ok].sum()
        if ok.all():
            return complex(result)
        a, b, m = a[~ok], b[~ok], mid[~ok]
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
    raise QuadratureError(
        "adaptive quadrature did not converge" + (f" at lag {lag}" if lag is not None else ""),
        lag=lag,
    )
