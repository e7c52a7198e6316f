"""Existence and moment conditions for stationary solutions, with margins.

Every checker returns a :class:`ConditionReport`; the verdict is the strict
inequality ``lhs < rhs``.
"""

import math
import warnings
from dataclasses import asdict, dataclass
from math import comb

from .coeffs import norm_Bp
from .exceptions import DegenerateSpecWarning, DomainError
from .models import (AsymGarch11Spec, Garch11Spec, GqarchSpec, InnovationSpec, LarchSpec,
                     embed_asym_in_gqarch, garch_as_asym, innovation_moments)

EXACT_P_LE_2 = "exact_p_le_2"
OSEKOWSKI_BOUND_P4 = "osekowski_bound_p4"
USER_SUPPLIED = "user_supplied"

#: Osekowski's bound on the p = 4 Burkholder-Rosenthal constant is 27.083^4
K4_BOUND = 27.083 ** 4


@dataclass(frozen=True)
class ConditionReport:
    name: str
    lhs: float
    rhs: float

    @property
    def satisfied(self):
        return self.lhs < self.rhs

    @property
    def margin(self):
        return self.rhs - self.lhs

    def to_dict(self):
        out = asdict(self)
        out["satisfied"] = self.satisfied
        out["margin"] = self.margin
        return out


@dataclass(frozen=True)
class RosenthalConstant:
    p: float
    value: float
    provenance: str

    def __post_init__(self):
        if not self.value >= 1:
            raise DomainError(f"Rosenthal constant must be >= 1, got {self.value}")


def rosenthal_constant(p, override=None):
    """Constant ``K_p`` of the martingale moment inequality.

    ``K_p = 1`` for ``p <= 2``; for ``p = 4`` the published bound
    ``27.083^4`` is used. Other ``p > 2`` need ``override``.
    """
    p = float(p)
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if override is not None:
        return RosenthalConstant(p, float(override), USER_SUPPLIED)
    if p <= 2:
        return RosenthalConstant(p, 1.0, EXACT_P_LE_2)
    if p == 4:
        return RosenthalConstant(p, K4_BOUND, OSEKOWSKI_BOUND_P4)
    raise DomainError(f"no default Rosenthal constant for p = {p}; supply override")


def check_Lp_contraction(p, mu_abs_p, lip_q, B_p_gamma, K_p):
    """``K_p^(1/p) |mu|_p^(1/p) Lip_Q B_{p,g}^(1/p) < 1``."""
    K = K_p.value if isinstance(K_p, RosenthalConstant) else float(K_p)
    lhs = (K * mu_abs_p * B_p_gamma) ** (1.0 / p) * lip_q
    return ConditionReport(f"Lp_contraction[p={p:g}]", lhs, 1.0)


def check_L2_quadratic(spec):
    """Necessary and sufficient L2 condition ``B_2 / (1 - gamma) < 1``."""
    if spec.a == 0:
        warnings.warn("a = 0: the condition is only sufficient for a nontrivial solution",
                      DegenerateSpecWarning, stacklevel=2)
    lhs = spec.coeffs.sum_sq() / (1.0 - spec.gamma)
    return ConditionReport("L2_quadratic", lhs, 1.0)


def even_moment_lhs(p, innov, lip_q, seq):
    terms = []
    for j in range(2, p + 1):
        if j not in innov.mu:
            raise KeyError(f"mu_{j} not in the innovation table")
        mu_j = innov.mu[j]
        s = math.fsum(abs(seq.values) ** j)
        terms.append(comb(p, j) * abs(mu_j) * lip_q ** j * s)
    return math.fsum(terms)


def check_even_moment(p, innov, lip_q, seq, gamma):
    """Sufficient condition for ``E r^p < inf`` free of the Rosenthal constant.

    ``sum_{j=2}^p C(p,j) |mu_j| Lip_Q^j sum_k |b_k|^j < (1 - gamma)^(p/2)``.
    """
    if p != int(p) or p % 2 or p < 2:
        raise DomainError(f"p must be a positive even integer, got {p}")
    p = int(p)
    return ConditionReport(f"even_moment[p={p}]", even_moment_lhs(p, innov, lip_q, seq),
                           (1.0 - gamma) ** (p / 2))


def check_garch11_variance(spec):
    """``b^2 + gamma < 1``."""
    return ConditionReport("garch11_variance", spec.b ** 2 + spec.gamma, 1.0)


def check_garch11_fourth(spec, mu4):
    """``mu4 b^4 + 2 b^2 gamma + gamma^2 < 1``."""
    if mu4 < 1:
        raise DomainError(f"mu4 must be >= 1, got {mu4}")
    b2, g = spec.b ** 2, spec.gamma
    return ConditionReport("garch11_fourth", mu4 * b2 * b2 + 2 * b2 * g + g * g, 1.0)


def check_leverage_precondition(spec):
    """``B_2 / (1 - gamma) < 1/5``."""
    return ConditionReport("leverage_precondition",
                           spec.coeffs.sum_sq() / (1.0 - spec.gamma), 0.2)


def check_larch_variance(spec):
    """LARCH second moment exists iff ``B_2 < 1``."""
    return ConditionReport("larch_variance", spec.coeffs.sum_sq(), 1.0)


def check_garch_variance(spec):
    """Covariance stationarity of GARCH(1,1): ``alpha + beta_g < 1``."""
    return ConditionReport("garch_variance", spec.alpha + spec.beta_g, 1.0)


def stationarity_report(spec):
    """The condition that decides whether a finite-variance solution exists."""
    if isinstance(spec, GqarchSpec):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateSpecWarning)
            return check_L2_quadratic(spec)
    if isinstance(spec, AsymGarch11Spec):
        return check_garch11_variance(spec)
    if isinstance(spec, LarchSpec):
        return check_larch_variance(spec)
    if isinstance(spec, Garch11Spec):
        return check_garch_variance(spec)
    raise TypeError(f"unsupported spec {type(spec).__name__}")


def check_all(spec, innov=None, even_orders=(2, 4, 6, 8)):
    """Every condition that applies to ``spec``, in a stable order."""
    innov = InnovationSpec.standard_normal() if innov is None else innov
    if isinstance(spec, Garch11Spec):
        asym = garch_as_asym(spec)
        return [check_garch_variance(spec), check_garch11_fourth(asym, innov.mu4)]
    reports = []
    if isinstance(spec, AsymGarch11Spec):
        reports += [check_garch11_variance(spec), check_garch11_fourth(spec, innov.mu4)]
        spec = embed_asym_in_gqarch(spec)
    if isinstance(spec, LarchSpec):
        seq, gamma, lip = spec.coeffs, 0.0, 1.0
        reports.append(check_larch_variance(spec))
    else:
        seq, gamma, lip = spec.coeffs, spec.gamma, spec.lip_q
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateSpecWarning)
            reports.append(check_L2_quadratic(spec))
    for p in (2, 4):
        _, mu_abs = innovation_moments(innov, p)
        B_pg = norm_Bp(seq, p, gamma).B_p_gamma
        reports.append(check_Lp_contraction(p, mu_abs, lip, B_pg, rosenthal_constant(p)))
    for p in even_orders:
        reports.append(check_even_moment(p, innov, lip, seq, gamma))
    if isinstance(spec, GqarchSpec):
        reports.append(check_leverage_precondition(spec))
    return reports
