"""Empirical estimators confronting simulated series with the theory."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from ._validation import check_positive_int, check_series
from .exceptions import DomainError


@dataclass(frozen=True, eq=False)
class AutocovCurve:
    """Estimates at increasing ``lags`` with approximate i.i.d.-based standard errors.

    The ``se_bands`` ignore serial dependence and understate uncertainty for
    long-memory series.
    """

    lags: np.ndarray
    values: np.ndarray
    n_used: int
    se_bands: np.ndarray

    def __post_init__(self):
        if self.lags.shape != self.values.shape:
            raise ValueError("lags and values must have equal length")
        if np.any(np.diff(self.lags) <= 0):
            raise ValueError("lags must be strictly increasing")

    def at(self, lag):
        idx = np.searchsorted(self.lags, lag)
        if idx >= self.lags.size or self.lags[idx] != lag:
            raise KeyError(lag)
        return self.values[idx]

    def to_csv_rows(self):
        return [(int(k), float(v), float(s)) for k, v, s in zip(self.lags, self.values, self.se_bands)]


def _returns(obj):
    r = getattr(obj, "r", obj)
    return check_series(r, name="returns")


def _check_lag(max_lag, n):
    max_lag = check_positive_int(max_lag, "max_lag", minimum=0)
    if max_lag >= n / 10:
        raise DomainError(f"max_lag = {max_lag} must be below n/10 = {n / 10:g}")
    return max_lag


def autocovariance(x, max_lag):
    """Biased sample autocovariance ``(1/n) sum_t (x_t - m)(x_{t+k} - m)``, ``k = 0..max_lag``."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    xc = x - x.mean()
    return np.array([np.dot(xc[:n - k], xc[k:]) / n for k in range(max_lag + 1)])


def sample_autocov_sq(traj, max_lag):
    """Autocovariance of ``r_t^2`` at lags ``0..max_lag``."""
    r = _returns(traj)
    n = r.shape[0]
    max_lag = _check_lag(max_lag, n)
    values = autocovariance(r * r, max_lag)
    se = np.full(max_lag + 1, values[0] / np.sqrt(n))
    se[0] = np.nan
    return AutocovCurve(np.arange(max_lag + 1), values, n, se)


def sample_leverage(traj, max_lag):
    """``h^_t = (1/(n-t)) sum_s r_{s+t}^2 r_s`` for ``t = 1..max_lag``."""
    r = _returns(traj)
    n = r.shape[0]
    max_lag = _check_lag(max_lag, n)
    if max_lag < 1:
        raise DomainError("max_lag must be >= 1")
    r2 = r * r
    values = np.empty(max_lag)
    se = np.empty(max_lag)
    for t in range(1, max_lag + 1):
        prod = r2[t:] * r[:n - t]
        values[t - 1] = prod.mean()
        se[t - 1] = prod.std() / np.sqrt(n - t)
    return AutocovCurve(np.arange(1, max_lag + 1), values, n, se)


def decay_exponent(curve, lag_lo, lag_hi):
    """OLS slope of ``log value`` on ``log lag`` over ``[lag_lo, lag_hi]``.

    Returns
    -------
    slope, stderr : float
    """
    mask = (curve.lags >= lag_lo) & (curve.lags <= lag_hi)
    if lag_lo < 1 or mask.sum() < 3:
        raise DomainError(f"lag range [{lag_lo}, {lag_hi}] gives fewer than 3 usable lags")
    vals = curve.values[mask]
    if np.any(vals <= 0):
        raise DomainError("autocovariances must be positive on the fitted range")
    fit = linregress(np.log(curve.lags[mask]), np.log(vals))
    return float(fit.slope), float(fit.stderr)


def block_sum_variances(x, block_sizes):
    """Variance of non-overlapping block sums of ``x - mean(x)`` per block size."""
    x = np.asarray(x, dtype=np.float64)
    xc = x - x.mean()
    out = []
    for m in block_sizes:
        k = xc.shape[0] // m
        if k < 20:
            raise DomainError(f"block size {m} leaves {k} < 20 blocks")
        sums = xc[:k * m].reshape(k, m).sum(axis=1)
        out.append(sums.var(ddof=1))
    return np.array(out)


def scaling_exponent(block_sizes, variances):
    fit = linregress(np.log(block_sizes), np.log(variances))
    return float(fit.slope)


def partial_sum_variance_scaling(traj, block_sizes):
    """Log-log slope of block-sum variance of ``r^2`` against block size.

    For a long-memory squared process the slope approaches ``1 + 2d``.

    Returns
    -------
    exponent : float
    per_block : ndarray
        Block-sum variance for each block size.
    """
    r = _returns(traj)
    sizes = np.asarray(block_sizes, dtype=np.int64)
    if sizes.size < 2 or np.any(sizes < 1):
        raise DomainError("need at least two positive block sizes")
    per_block = block_sum_variances(r * r, sizes)
    return scaling_exponent(sizes, per_block), per_block
