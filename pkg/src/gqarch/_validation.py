"""Input validation helpers shared by the estimators and statistics."""

import numbers

import numpy as np
from sklearn.utils import check_array

from .exceptions import DegenerateSeriesError, DomainError


def check_series(x, *, min_length=1, name="series"):
    """Return ``x`` as a finite 1-D float64 array.

    Accepts 1-D input or a single column 2-D array (the layout scikit-learn
    passes to ``fit``).
    """
    try:
        arr = check_array(x, ensure_2d=False, dtype=np.float64, ensure_all_finite=True,
                          input_name=name)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise DomainError(f"{name} must be 1-D or a single column, got shape {arr.shape}")
        arr = arr[:, 0]
    if arr.shape[0] < min_length:
        raise DomainError(f"{name} needs at least {min_length} observations, got {arr.shape[0]}")
    return np.ascontiguousarray(arr)


def check_nondegenerate(x, name="series"):
    if not np.any(x != x[0]):
        raise DegenerateSeriesError(f"{name} has zero variance")
    return x


def check_gamma(gamma):
    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")
    return gamma


def check_memory(d):
    d = float(d)
    if not 0.0 < d < 0.5:
        raise DomainError(f"memory parameter d must lie in (0, 1/2), got {d}")
    return d


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
