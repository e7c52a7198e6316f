"""Closed-form moments of the asymmetric GARCH(1,1) and long-memory GQARCH asymptotics."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaln

from .coeffs import POWER_LAW, phi_sum_limit
from .conditions import check_garch11_fourth, check_garch11_variance
from .exceptions import ConditionError, DomainError
from .models import sentana_map


def sentana_fourth_moment(params, mu4):
    """``E r^4`` in the ``(theta, psi, a11, delta)`` parametrization."""
    th, psi, a11, dl = params.theta, params.psi, params.a11, params.delta
    num = mu4 * th * (th * (1 + a11 + dl) + psi ** 2)
    den = (1 - a11 ** 2 * mu4 - 2 * a11 * dl - dl ** 2) * (1 - a11 - dl)
    return num / den


@dataclass(frozen=True)
class Garch11Moments:
    """Moments of a stationary asymmetric GARCH(1,1).

    ``m3(t) = E r_t^2 r_0`` and ``rho(t) = cov(r_0^2, r_t^2)``, both geometric
    in ``t >= 1`` with rate ``gamma + b^2``.
    """

    m2: float
    m4_0: float
    C_const: float
    geometric_rate: float
    m3_1: float

    def m3(self, t):
        t = np.asarray(t)
        out = self.m3_1 * self.geometric_rate ** (np.maximum(t, 1) - 1.0)
        return np.where(t >= 1, out, 0.0)[()]

    def rho(self, t):
        t = np.asarray(t)
        out = self.C_const * self.geometric_rate ** (np.maximum(t, 1) - 1.0)
        return np.where(t >= 1, out, self.m4_0 - self.m2 ** 2)[()]

    def to_dict(self, lags=5):
        lags = np.arange(1, lags + 1)
        return {"m2": self.m2, "m4_0": self.m4_0, "C": self.C_const,
                "geometric_rate": self.geometric_rate,
                "m3": self.m3(lags).tolist(), "rho": self.rho(lags).tolist()}


def garch11_moments(spec, mu4=3.0, mu3=0.0):
    """Second, third (leverage) and fourth-order moments of an asymmetric GARCH(1,1).

    Raises
    ------
    ConditionError
        If ``b^2 + gamma >= 1`` or ``mu4 b^4 + 2 b^2 gamma + gamma^2 >= 1``.
    DomainError
        If the innovations are asymmetric (``mu3 != 0``).
    """
    if mu3 != 0:
        raise DomainError("closed-form moments need symmetric innovations (mu3 = 0)")
    for report in (check_garch11_variance(spec), check_garch11_fourth(spec, mu4)):
        if not report.satisfied:
            raise ConditionError(f"{report.name} fails: {report.lhs:.6g} >= {report.rhs:g}",
                                 condition=report.name)
    a, b, c, g = spec.a, spec.b, spec.c, spec.gamma
    b2 = b * b
    theta = c * c + a * a
    m2 = theta / (1 - g - b2)
    m4_0 = mu4 * m2 * (theta * (1 + b2 + g) + (2 * a * b) ** 2) / (1 - b2 * b2 * mu4 - (2 * b2 * g + g * g))
    cross = sentana_fourth_moment(sentana_map(spec), mu4)
    if not math.isclose(m4_0, cross, rel_tol=1e-10, abs_tol=1e-300):
        raise ArithmeticError(f"fourth moment mismatch: {m4_0} vs {cross}")
    rate = g + b2
    C = b2 * ((m4_0 - m2 * m2) * (1 - g * rate) + 4 * a * a * m2 * g) / (1 - g * (g + 2 * b2))
    return Garch11Moments(m2=m2, m4_0=m4_0, C_const=C, geometric_rate=rate, m3_1=2 * a * b * m2)


def m3_recursion(spec, t_max):
    """``m3(1..t_max)`` by iterating the moment equations rather than the closed form.

    ``m3(1) = 2ab m2`` and
    ``m3(t) = 2ab m2 g^(t-1) + b^2 sum_{l=0}^{t-2} g^l m3(t-l-1)``.
    """
    a, b, g = spec.a, spec.b, spec.gamma
    m2 = (spec.c ** 2 + a * a) / (1 - b * b - g)
    m3 = np.zeros(t_max + 1)
    for t in range(1, t_max + 1):
        acc = math.fsum(g ** l * m3[t - l - 1] for l in range(t - 1))
        m3[t] = 2 * a * b * m2 * g ** (t - 1) + b * b * acc
    return m3[1:]


def rho_recursion(spec, C, t_max):
    """``rho(1..t_max)`` from ``rho(t) = b^2 sum_{l=0}^{t-2} g^l rho(t-l-1) + C g^(t-1)``."""
    b2, g = spec.b ** 2, spec.gamma
    rho = np.zeros(t_max + 1)
    for t in range(1, t_max + 1):
        acc = math.fsum(g ** l * rho[t - l - 1] for l in range(t - 1))
        rho[t] = b2 * acc + C * g ** (t - 1)
    return rho[1:]


def gqarch_m2(spec):
    """``E r^2 = (c^2 + a^2) / (1 - gamma - B_2)``."""
    B2 = spec.coeffs.sum_sq()
    denom = 1.0 - spec.gamma - B2
    if denom <= 0:
        raise ConditionError(f"B_2/(1-gamma) = {B2 / (1 - spec.gamma):.6g} >= 1",
                             condition="L2_quadratic")
    return (spec.c ** 2 + spec.a ** 2) / denom


def larch_m2(spec):
    """``E r^2 = a^2 / (1 - B_2)``."""
    B2 = spec.coeffs.sum_sq()
    if B2 >= 1:
        raise ConditionError(f"B_2 = {B2:.6g} >= 1", condition="larch_variance")
    return spec.a ** 2 / (1.0 - B2)


def garch_m2(spec):
    s = spec.alpha + spec.beta_g
    if s >= 1:
        raise ConditionError(f"alpha + beta_g = {s:.6g} >= 1", condition="garch_variance")
    return spec.omega / (1.0 - s)


def beta_function(x, y):
    return math.exp(betaln(x, y))


@dataclass(frozen=True)
class LongMemoryAsymptotics:
    """Large-lag behaviour of ``cov(r_0^2, r_t^2) ~ kappa1_sq t^(2d-1)``.

    Partial sums of ``r_t^2 - E r^2`` scale like ``kappa2 n^(d+1/2)``.
    """

    kappa1_sq: float
    kappa2_sq: float
    m2: float
    phi_sum: float
    d: float
    decay_exponent: float
    B2_tail_bound: float = 0.0

    @property
    def hurst(self):
        return self.d + 0.5

    def to_dict(self):
        return {"kappa1_sq": self.kappa1_sq, "kappa2_sq": self.kappa2_sq, "m2": self.m2,
                "phi_sum": self.phi_sum, "d": self.d, "decay_exponent": self.decay_exponent,
                "hurst": self.hurst, "B2_tail_bound": self.B2_tail_bound}


def lm_asymptotics(spec):
    seq = spec.coeffs
    if seq.tail_kind != POWER_LAW:
        raise DomainError("long-memory asymptotics need power-law coefficients")
    if spec.a == 0:
        raise DomainError("a = 0 gives no long-memory term")
    d = seq.d
    m2 = gqarch_m2(spec)
    B2 = seq.sum_sq()
    k1 = (2 * spec.a * seq.beta / (1 - spec.gamma - B2)) ** 2 * beta_function(d, 1 - 2 * d) * m2
    return LongMemoryAsymptotics(kappa1_sq=k1, kappa2_sq=k1 / (d * (1 + 2 * d)), m2=m2,
                                 phi_sum=phi_sum_limit(seq, spec.gamma), d=d,
                                 decay_exponent=2 * d - 1, B2_tail_bound=seq.analytic_tail_sq())


def lm_cov_curve(asym, t):
    """Asymptote ``kappa1_sq t^(2d-1)``; an approximation valid for large ``t`` only."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 1):
        raise DomainError("lags must be >= 1")
    return (asym.kappa1_sq * t ** asym.decay_exponent)[()]


@dataclass
class MomentReport:
    """Theoretical moments, optionally paired with Monte Carlo estimates."""

    model: dict
    theory: dict
    empirical: dict = field(default_factory=dict)
    mc_se: dict = field(default_factory=dict)

    def to_dict(self):
        return {"model": self.model, "theory": self.theory, "empirical": self.empirical,
                "mc_se": self.mc_se}
