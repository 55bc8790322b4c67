"""The modified Greenwood statistic, its bivariate variants, and covariance geometry.

For a real sample ``x_1, ..., x_n`` the statistic is

    sum(|x_i|**2) / (sum(|x_i|))**2

a scale-invariant dispersion-of-magnitudes measure bounded in [1/n, 1].
The two bivariate variants apply it to coordinate sums ``W_i = x1_i + x2_i``
(:func:`s1`) and to squared norms ``Y_i = x1_i**2 + x2_i**2`` (:func:`s2`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateCovarianceError, DegenerateSampleError, ParameterError
from .sampling import validate_cov2

__all__ = [
    "GreenwoodValue",
    "CovGeometry",
    "greenwood",
    "s1",
    "s2",
    "eigen_pair",
    "beta_ratio",
    "beta_from_variance_ratio",
    "beta_from_correlation",
    "cov_geometry",
    "as_bivariate",
]


@dataclass(frozen=True)
class GreenwoodValue:
    """A Greenwood statistic value together with the sample size behind it."""

    value: float
    n: int

    def __float__(self) -> float:
        return self.value


def greenwood(x) -> GreenwoodValue:
    """Modified Greenwood statistic of a real sample.

    Parameters
    ----------
    x : array_like
        Sample of at least one finite entry, not all zero.

    Returns
    -------
    GreenwoodValue
        ``sum(x**2) / sum(|x|)**2``, always in ``[1/n, 1]``.

    Raises
    ------
    DegenerateSampleError
        If every entry is zero (the statistic is 0/0).
    ParameterError
        If the sample is empty or contains NaN.
    """
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise ParameterError("greenwood statistic needs at least one observation")
    if np.isnan(arr).any():
        raise ParameterError("sample contains NaN")
    n = arr.size
    infs = int(np.isinf(arr).sum())
    if infs:
        # Entries beyond float range dominate every finite one; ties split
        # equally, which is exact for a single overflowed entry.
        return GreenwoodValue(1.0 / infs, n)
    m = float(np.max(np.abs(arr)))
    if m == 0.0:
        raise DegenerateSampleError("all observations are zero; the statistic is undefined")
    # Rescale by a power of two (exact in floating point) so heavy-tailed
    # inputs can neither overflow nor underflow the sums.  numpy's pairwise
    # summation keeps both accumulations accurate at n = 1e6.
    _, exp = np.frexp(m)
    y = np.ldexp(arr, -exp)
    abs_sum = float(np.sum(np.abs(y)))
    sq_sum = float(np.sum(y * y))
    return GreenwoodValue(sq_sum / (abs_sum * abs_sum), n)


def as_bivariate(sample) -> np.ndarray:
    """Coerce to a finite ``(n, 2)`` float array of paired observations."""
    arr = np.asarray(sample, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ParameterError(f"bivariate sample must have shape (n, 2) with n >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("bivariate sample entries must be finite")
    return arr


def s1(sample) -> GreenwoodValue:
    """Greenwood statistic of the coordinate sums ``W_i = x1_i + x2_i``.

    Raises :class:`DegenerateSampleError` when every sum is zero, which
    happens e.g. for perfectly anti-correlated equal-variance pairs.
    """
    arr = as_bivariate(sample)
    w = arr[:, 0] + arr[:, 1]
    try:
        return greenwood(w)
    except DegenerateSampleError:
        raise DegenerateSampleError("every coordinate sum W_i is zero; S1 is undefined") from None


def s2(sample) -> GreenwoodValue:
    """Greenwood statistic of the squared norms ``Y_i = x1_i**2 + x2_i**2``."""
    arr = as_bivariate(sample)
    y = arr[:, 0] ** 2 + arr[:, 1] ** 2
    try:
        return greenwood(y)
    except DegenerateSampleError:
        raise DegenerateSampleError("every pair is (0, 0); S2 is undefined") from None


def eigen_pair(cov) -> tuple[float, float]:
    """Eigenvalues of a symmetric PSD 2x2 matrix, largest first.

    Uses the closed form
    ``(tr/2) +/- sqrt((R11 - R22)**2 + 4*R12**2)/2``
    rather than a general solver, which is exact for the 2x2 case.
    """
    c = validate_cov2(cov)
    r11, r22, r12 = c[0, 0], c[1, 1], c[0, 1]
    half_disc = 0.5 * np.hypot(r11 - r22, 2.0 * r12)
    half_tr = 0.5 * (r11 + r22)
    return float(half_tr + half_disc), float(max(half_tr - half_disc, 0.0))


def beta_ratio(cov) -> float:
    """Smaller over larger eigenvalue of a covariance matrix, in [0, 1]."""
    hi, lo = eigen_pair(cov)
    if hi <= 0.0:
        raise DegenerateCovarianceError("zero covariance matrix has no eigenvalue ratio")
    return lo / hi


def beta_from_variance_ratio(gamma: float, r: float) -> float:
    """Eigenvalue ratio from the variance ratio ``gamma`` and squared correlation ``r``.

    Computes ``(1 + g - d) / (1 + g + d)`` with ``d = sqrt((1-g)**2 + 4*g*r)``;
    strictly increasing in ``gamma`` for fixed ``r < 1`` and strictly
    decreasing in ``r`` for fixed ``gamma > 0``.
    """
    if not (np.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        raise ParameterError(f"variance ratio must lie in [0, 1], got {gamma}")
    if not (np.isfinite(r) and 0.0 <= r <= 1.0):
        raise ParameterError(f"squared correlation must lie in [0, 1], got {r}")
    d = np.sqrt((1.0 - gamma) ** 2 + 4.0 * gamma * r)
    return float((1.0 + gamma - d) / (1.0 + gamma + d))


def beta_from_correlation(rho: float) -> float:
    """Eigenvalue ratio for equal variances: ``(1 - |rho|) / (1 + |rho|)``."""
    if not (np.isfinite(rho) and -1.0 <= rho <= 1.0):
        raise ParameterError(f"correlation must lie in [-1, 1], got {rho}")
    a = abs(rho)
    return (1.0 - a) / (1.0 + a)


@dataclass(frozen=True)
class CovGeometry:
    """Eigenvalue and moment geometry of a 2x2 covariance matrix."""

    eig_hi: float
    eig_lo: float
    beta: float
    gamma: float
    r: float


def cov_geometry(cov) -> CovGeometry:
    """Summarize a covariance matrix: eigenvalues, their ratio, variance ratio, squared correlation."""
    c = validate_cov2(cov)
    hi, lo = eigen_pair(c)
    if hi <= 0.0:
        raise DegenerateCovarianceError("zero covariance matrix has no geometry")
    v1, v2 = c[0, 0], c[1, 1]
    if v1 > 0.0 and v2 > 0.0:
        gamma = min(v1, v2) / max(v1, v2)
        r = float(np.clip(c[0, 1] ** 2 / (v1 * v2), 0.0, 1.0))
    else:
        gamma, r = 0.0, 0.0
    return CovGeometry(hi, lo, lo / hi, float(gamma), r)
