"""Moving-average coefficient sequences ``b_j`` and the series derived from them.

A :class:`CoefficientSeq` stores ``b_1, ..., b_N``. The stored values define the
model: ``b_j = 0`` for ``j > N`` in every computation (simulation, moments,
leverage). For hyperbolically decaying sequences the analytic tail beyond ``N``
is only used to report truncation bounds.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.signal import lfilter

from ._validation import check_gamma, check_memory, check_positive_int
from .exceptions import ConditionError, DomainError

POWER_LAW = "power_law"
FINITE = "finite"

#: default truncation used when evaluating series norms
NORM_TRUNC = 100_000


@dataclass(frozen=True, eq=False)
class CoefficientSeq:
    """Truncated coefficients ``b_1..b_N``.

    Parameters
    ----------
    values : array_like
        ``values[j - 1] = b_j``.
    beta, d : float or None
        Scale and memory parameter of a power-law sequence ``b_j = beta j^(d-1)``.
        ``None`` for finite sequences.
    tail_kind : {"power_law", "finite"}
    """

    values: np.ndarray
    beta: float | None = None
    d: float | None = None
    tail_kind: str = FINITE

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.size < 1:
            raise DomainError("a coefficient sequence needs at least one value")
        if not np.all(np.isfinite(values)):
            raise DomainError("coefficients must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.tail_kind not in (POWER_LAW, FINITE):
            raise DomainError(f"unknown tail_kind {self.tail_kind!r}")
        if self.tail_kind == POWER_LAW:
            if self.beta is None or self.d is None:
                raise DomainError("power-law sequences need beta and d")
            object.__setattr__(self, "beta", float(self.beta))
            object.__setattr__(self, "d", check_memory(self.d))

    @property
    def n_trunc(self):
        return self.values.shape[0]

    def padded(self, length):
        """``b_1..b_length`` with zeros past the stored truncation."""
        out = np.zeros(length)
        m = min(length, self.n_trunc)
        out[:m] = self.values[:m]
        return out

    def sum_sq(self):
        """``B_2 = sum_j b_j^2`` over the stored values (exactly rounded)."""
        return math.fsum(self.values * self.values)

    def analytic_tail_sq(self, start=None):
        """Integral bound on ``sum_{j > start} b_j^2`` for a power-law tail.

        Zero for finite sequences (their tail is identically zero).
        """
        if self.tail_kind != POWER_LAW:
            return 0.0
        start = self.n_trunc if start is None else start
        return self.beta ** 2 * start ** (2 * self.d - 1) / (1 - 2 * self.d)

    def __eq__(self, other):
        if not isinstance(other, CoefficientSeq):
            return NotImplemented
        return (self.tail_kind == other.tail_kind and self.beta == other.beta
                and self.d == other.d and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.tail_kind, self.beta, self.d, self.values.tobytes()))

    def __repr__(self):
        if self.tail_kind == POWER_LAW:
            return f"CoefficientSeq(power_law, beta={self.beta}, d={self.d}, n_trunc={self.n_trunc})"
        return f"CoefficientSeq(finite, values={self.values.tolist()})"

    def to_dict(self):
        if self.tail_kind == POWER_LAW:
            return {"tail_kind": POWER_LAW, "beta": self.beta, "d": self.d,
                    "n_trunc": self.n_trunc}
        return {"tail_kind": FINITE, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data):
        kind = data.get("tail_kind", FINITE)
        if kind == POWER_LAW:
            return power_law_coeffs(data["beta"], data["d"], data["n_trunc"])
        return finite_coeffs(data["values"])


class SmoothedSeq(NamedTuple):
    """Geometrically smoothed coefficient series, index ``t = 1..horizon``."""

    b_gamma: np.ndarray
    b_abs_gamma: np.ndarray
    b_sq_gamma: np.ndarray
    gamma: float


class Norms(NamedTuple):
    B_p: float
    B_p_gamma: float
    tail_bound: float


def power_law_coeffs(beta, d, n_trunc):
    """``b_j = beta * j**(d - 1)`` for ``j = 1..n_trunc``."""
    d = check_memory(d)
    n_trunc = check_positive_int(n_trunc, "n_trunc")
    j = np.arange(1, n_trunc + 1, dtype=np.float64)
    return CoefficientSeq(float(beta) * j ** (d - 1.0), beta=float(beta), d=d,
                          tail_kind=POWER_LAW)


def finite_coeffs(values):
    return CoefficientSeq(values, tail_kind=FINITE)


def norm_Bp(seq, p, gamma=0.0):
    """Coefficient norms ``B_p`` and ``B_{p,gamma}``.

    ``B_p = sum |b_j|^p`` for ``0 < p < 2`` and ``(sum b_j^2)^(p/2)`` for
    ``p >= 2``; ``B_{p,gamma}`` divides by ``1 - gamma^(p/2)`` or
    ``(1 - gamma)^(p/2)`` respectively. The returned ``tail_bound`` bounds the
    contribution to ``B_p`` of the analytic tail beyond the stored values (zero
    for finite sequences, ``inf`` when the power-law series diverges).
    """
    p = float(p)
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    gamma = check_gamma(gamma)
    b = np.abs(seq.values)
    if p < 2:
        B_p = math.fsum(b ** p)
        B_p_gamma = B_p / (1.0 - gamma ** (p / 2))
        tail = 0.0
        if seq.tail_kind == POWER_LAW:
            expo = (seq.d - 1.0) * p
            if expo >= -1.0:
                tail = math.inf
            else:
                tail = abs(seq.beta) ** p * seq.n_trunc ** (expo + 1.0) / (-expo - 1.0)
    else:
        s2 = math.fsum(b * b)
        B_p = s2 ** (p / 2)
        B_p_gamma = B_p / (1.0 - gamma) ** (p / 2)
        tail = (s2 + seq.analytic_tail_sq()) ** (p / 2) - B_p
    return Norms(B_p, B_p_gamma, tail)


def gamma_smooth(seq, gamma, horizon):
    """Return ``b_{t,g}``, ``|b|_{t,g}`` and ``b~^2_{t,g}`` for ``t = 1..horizon``.

    ``b_{t,g} = sum_{j<t} g^j b_{t-j}``; the other two series smooth ``|b_j|``
    and ``b_j^2`` the same way. Each obeys ``y_t = x_t + g y_{t-1}``.
    """
    gamma = check_gamma(gamma)
    horizon = check_positive_int(horizon, "horizon")
    b = seq.padded(horizon)
    den = [1.0, -gamma]
    return SmoothedSeq(lfilter([1.0], den, b), lfilter([1.0], den, np.abs(b)),
                       lfilter([1.0], den, b * b), gamma)


def cross_weights(seq, gamma, i, t):
    """``w_{i,t,g} = sum_{l=0}^{t-1} g^l b_{t-l} b_{i+t-l}`` by direct summation."""
    gamma = check_gamma(gamma)
    i = check_positive_int(i, "i")
    t = check_positive_int(t, "t")
    b = seq.padded(i + t)
    terms = [gamma ** l * b[t - l - 1] * b[i + t - l - 1] for l in range(t)]
    return math.fsum(terms)


def cross_weight_matrix(seq, gamma, horizon, n_lags=None):
    """Array ``W[i-1, t-1] = w_{i,t,g}`` for ``i = 1..n_lags``, ``t = 1..horizon``.

    Built with the recursion ``w_{i,t} = g w_{i,t-1} + b_t b_{i+t}``.
    """
    gamma = check_gamma(gamma)
    n_lags = horizon if n_lags is None else n_lags
    b = seq.padded(n_lags + horizon)
    W = np.empty((n_lags, horizon))
    col = np.zeros(n_lags)
    for t in range(1, horizon + 1):
        col = gamma * col + b[t - 1] * b[t:t + n_lags]
        W[:, t - 1] = col
    return W


def renewal_Ak(alpha, k_max):
    """Renewal sequence ``A_k = alpha_k + sum_{0<i<k} alpha_i A_{k-i}``.

    ``alpha[j - 1] = alpha_j``; entries past the end of ``alpha`` are zero.
    Returns ``A_1..A_{k_max}``.
    """
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    k_max = check_positive_int(k_max, "k_max")
    if np.any(alpha < 0):
        raise DomainError("renewal weights must be nonnegative")
    total = math.fsum(alpha)
    if total >= 1.0:
        raise ConditionError(f"renewal weights sum to {total} >= 1", condition="renewal_sum")
    a = np.zeros(k_max)
    m = min(k_max, alpha.size)
    a[:m] = alpha[:m]
    A = np.zeros(k_max)
    for k in range(k_max):
        # A[k] holds A_{k+1}; the convolution pairs alpha_i with A_{k+1-i}
        A[k] = a[k] + np.dot(a[:k], A[k - 1::-1]) if k else a[0]
    return A


def phi_coeffs(seq, gamma, order):
    """Coefficients ``phi_0..phi_order`` of ``1 / (1 - sum_j b~^2_{j,g} z^j)``."""
    gamma = check_gamma(gamma)
    B2g = seq.sum_sq() / (1.0 - gamma)
    if B2g >= 1.0:
        raise ConditionError(f"B_2,gamma = {B2g} >= 1: inverse series diverges at z = 1",
                             condition="L2_quadratic")
    order = check_positive_int(order, "order", minimum=0)
    if order == 0:
        return np.ones(1)
    b_sq = gamma_smooth(seq, gamma, order).b_sq_gamma
    return np.concatenate(([1.0], renewal_Ak(b_sq, order)))


def phi_sum_limit(seq, gamma):
    """Closed form ``Phi_g(1) = (1 - g) / (1 - g - B_2)``."""
    gamma = check_gamma(gamma)
    return (1.0 - gamma) / (1.0 - gamma - seq.sum_sq())
