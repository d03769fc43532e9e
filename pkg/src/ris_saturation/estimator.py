"""scikit-learn style front end for two-timescale phase optimization."""

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_angle, check_scalar
from .correlation import ArrayGeometry, CorrelationSequence
from .exceptions import DomainError
from .phase import GainMatrix, dft_phase_profile, optimize_phases
from .toeplitz import CovarianceMatrix, build_covariance, lambda_max


class TwoTimescaleBeamformer(TransformerMixin, BaseEstimator):
    """Fit RIS phase shifts to channel statistics, apply them to realizations.

    ``fit`` works on the long timescale: it takes the spatial correlation of
    the MS-RIS channel and chooses phase shifts maximizing the average
    beamforming gain.  ``transform`` works on the short timescale: it maps
    channel realizations ``h_r`` to the scalar cascade coefficient
    ``v^H Psi h_r`` seen through the RIS.

    Parameters
    ----------
    departure_angle : float, default=pi/2
        Angle of departure from the RIS towards the BS, radians.
    spacing : float, default=0.5
        Element spacing in wavelengths.
    method : {"coordinate", "dft"}, default="coordinate"
        ``"dft"`` keeps the best Fourier profile without refinement.
    n_restarts : int, default=5
        Random restarts of coordinate ascent on top of the DFT start.
    random_state : int, default=0
    tol : float, default=1e-10
    max_sweeps : int, default=10000

    Attributes
    ----------
    covariance_ : CovarianceMatrix
    gain_matrix_ : GainMatrix
    profile_ : PhaseProfile
    phases_ : ndarray of shape (n_features_in_,)
        Phase angles ``psi_m`` in radians, ``psi_0 = 0``.
    gain_ : float
        Beamforming gain ``zeta`` of ``phases_``.
    lambda_max_ : float
        Largest covariance eigenvalue, an upper bound on ``gain_``.
    n_features_in_ : int
        Number of RIS elements.

    Examples
    --------
    >>> import numpy as np
    >>> est = TwoTimescaleBeamformer().fit(0.5 ** np.arange(4))
    >>> round(est.gain_, 6) <= round(est.lambda_max_, 6)
    True
    """

    def __init__(self, departure_angle=math.pi / 2, spacing=0.5, method="coordinate",
                 n_restarts=5, random_state=0, tol=1e-10, max_sweeps=10_000):
        self.departure_angle = departure_angle
        self.spacing = spacing
        self.method = method
        self.n_restarts = n_restarts
        self.random_state = random_state
        self.tol = tol
        self.max_sweeps = max_sweeps

    def fit(self, X, y=None):
        """Optimize phases for the correlation ``X``.

        ``X`` is a :class:`CorrelationSequence`, a 1-D array of coefficients
        ``c_0 .. c_{N-1}``, a :class:`CovarianceMatrix`, or a 2-D Hermitian
        covariance matrix.
        """
        check_angle(self.departure_angle, "departure_angle")
        check_scalar(self.spacing, "spacing", low=0.0, closed_low=False)
        check_scalar(self.n_restarts, "n_restarts", low=0, integer=True)
        if self.method not in ("coordinate", "dft"):
            raise DomainError(f"method must be 'coordinate' or 'dft', got {self.method!r}")

        if isinstance(X, CovarianceMatrix):
            cov = X
        elif isinstance(X, CorrelationSequence):
            cov = build_covariance(X)
        else:
            arr = np.asarray(X, dtype=complex)
            if arr.ndim == 1:
                cov = build_covariance(arr)
            elif arr.ndim == 2:
                cov = _covariance_from_matrix(arr)
            else:
                raise DomainError(f"X must be 1-D or 2-D, got shape {arr.shape}")

        n = cov.dimension
        geom = ArrayGeometry(n, spacing=self.spacing, departure_angle=self.departure_angle)
        self.covariance_ = cov
        self.geometry_ = geom
        self.gain_matrix_ = GainMatrix.from_covariance(cov, geom)
        if self.method == "dft":
            self.profile_ = dft_phase_profile(self.gain_matrix_)
        else:
            self.profile_ = optimize_phases(self.gain_matrix_, n_restarts=self.n_restarts,
                                            random_state=self.random_state, tol=self.tol,
                                            max_sweeps=self.max_sweeps)
        self.phases_ = np.array(self.profile_.angles)
        self.gain_ = self.profile_.gain
        self.lambda_max_ = lambda_max(cov).value
        self.n_features_in_ = n
        return self

    def _combiner(self):
        check_is_fitted(self)
        return np.conj(self.gain_matrix_.v) * np.exp(1j * self.phases_)

    def transform(self, X):
        """Cascade coefficient ``v^H Psi h_r`` per row of ``X``, shape (n, 1)."""
        h = self._check_realizations(X)
        return (h @ self._combiner())[:, None]

    def score(self, X, y=None):
        """Empirical beamforming gain ``mean |v^H Psi h_r|^2`` over rows of ``X``."""
        h = self._check_realizations(X)
        return float(np.mean(np.abs(h @ self._combiner()) ** 2))

    def _check_realizations(self, X):
        check_is_fitted(self)
        h = np.asarray(X, dtype=complex)
        if h.ndim == 1:
            h = h[None, :]
        if h.ndim != 2 or h.shape[1] != self.n_features_in_:
            raise DomainError(f"X must have shape (n_samples, {self.n_features_in_}), got {h.shape}")
        return h


def _covariance_from_matrix(matrix):
    from ._validation import check_square_hermitian

    a = check_square_hermitian(matrix)
    # keep the first row; Toeplitz structure is assumed, not enforced
    cov = build_covariance(a[0])
    if not np.allclose(cov.matrix, a, atol=1e-10):
        raise DomainError("covariance matrix must be Hermitian-Toeplitz")
    return cov
