"""Leverage function ``h_t = cov(sigma_t^2, r_0) = E r_t^2 r_0`` of a GQARCH process.

``h`` solves the linear equation

    h_t = 2 a m2 b_{t,g} + sum_{0<i<t} h_i b~^2_{t-i,g} + 2 sum_{i>0} h_i w_{i,t,g}

which is a contraction with factor at most ``3 B_{2,g}`` in l2, hence solvable
by plain fixed-point iteration when ``B_{2,g} < 1/5``.
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from ._validation import check_positive_int
from .coeffs import cross_weight_matrix, gamma_smooth
from .conditions import check_leverage_precondition
from .exceptions import ConditionError, ConvergenceError, DomainError
from .moments import gqarch_m2

logger = logging.getLogger(__name__)


class SignClass(str, enum.Enum):
    LEVERAGE = "leverage_k"
    POSITIVE = "positive_k"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True, eq=False)
class LeverageSolution:
    """Solved ``h_1..h_T``; ``residual`` is the sup-norm of the last update."""

    h: np.ndarray
    T: int
    iterations: int
    residual: float
    norm_bound: float
    tail_estimate: float = 0.0

    @property
    def norm(self):
        return math.sqrt(math.fsum(self.h * self.h))

    def to_dict(self):
        return {"T": self.T, "iterations": self.iterations, "residual": self.residual,
                "norm": self.norm, "norm_bound": self.norm_bound,
                "norm_bound_holds": bool(self.norm <= self.norm_bound),
                "tail_estimate": self.tail_estimate}


def leverage_norm_bound(spec, m2=None):
    """``2|a| m2 B_2^(1/2) / ((1-g)(1 - 3 B_{2,g}))``."""
    m2 = gqarch_m2(spec) if m2 is None else m2
    B2 = spec.coeffs.sum_sq()
    g = spec.gamma
    return 2 * abs(spec.a) * m2 * math.sqrt(B2) / ((1 - g) * (1 - 3 * B2 / (1 - g)))


def leverage_operator(spec, T):
    """Forcing term ``f`` and matrix ``M`` with ``h = f + M h`` on lags ``1..T``."""
    m2 = gqarch_m2(spec)
    sm = gamma_smooth(spec.coeffs, spec.gamma, T)
    f = 2 * spec.a * m2 * sm.b_gamma
    lower = toeplitz(np.concatenate(([0.0], sm.b_sq_gamma[:-1])), np.zeros(T))
    W = cross_weight_matrix(spec.coeffs, spec.gamma, T, T)
    return f, lower + 2.0 * W.T


def solve_leverage(spec, T=200, tol=None, max_iter=10_000):
    """Solve for ``h_1..h_T`` by fixed-point iteration from ``h = 0``.

    Cross sums ``sum_{i>0} h_i w_{i,t,g}`` are truncated at ``i <= T``.

    Raises
    ------
    ConditionError
        If ``B_{2,g} >= 1/5`` (no contraction guarantee).
    ConvergenceError
        If ``max_iter`` updates do not bring the sup-norm change below ``tol``.
    """
    T = check_positive_int(T, "T")
    pre = check_leverage_precondition(spec)
    if not pre.satisfied:
        raise ConditionError(f"B_2,gamma = {pre.lhs:.4g} >= 1/5; fixed-point map may not contract",
                             condition=pre.name)
    m2 = gqarch_m2(spec)
    if tol is None:
        tol = 1e-12 * max(1.0, abs(2 * spec.a * m2))
    f, M = leverage_operator(spec, T)
    h = np.zeros(T)
    for it in range(1, max_iter + 1):
        h_new = f + M @ h
        residual = float(np.max(np.abs(h_new - h)))
        h = h_new
        if residual < tol:
            break
    else:
        raise ConvergenceError(f"leverage iteration stalled at residual {residual:.3g}")
    bound = leverage_norm_bound(spec, m2)
    # weights on the dropped lags T+1..2T bound the truncated part of the cross sum
    W_tail = cross_weight_matrix(spec.coeffs, spec.gamma, T, 2 * T)[T:]
    tail = 2 * bound * float(np.max(np.sqrt(np.sum(W_tail ** 2, axis=0))))
    logger.debug("leverage solve: %d iterations, truncation tail <= %.3g", it, tail)
    return LeverageSolution(h=h, T=T, iterations=it, residual=residual, norm_bound=bound,
                            tail_estimate=tail)


def leverage_order(sol, k):
    """True when ``h_j < 0`` for ``1 <= j <= k``."""
    k = check_positive_int(k, "k")
    if k > sol.T:
        raise IndexError(f"k = {k} exceeds solved horizon T = {sol.T}")
    return bool(np.all(sol.h[:k] < 0))


def classify_signs(spec, k, innov=None):
    """Sign pattern of ``h_1..h_k`` implied by the coefficient signs, without solving.

    ``leverage_k`` when ``a b_1 < 0`` and ``a b_j <= 0`` for ``j <= k`` with
    ``B_{2,g} < 1/5``; ``positive_k`` for the mirrored signs; otherwise
    ``indeterminate``.
    """
    if innov is not None and innov.mu3 != 0:
        raise DomainError("sign classification assumes symmetric innovations (mu3 = 0)")
    k = check_positive_int(k, "k")
    if not check_leverage_precondition(spec).satisfied:
        return SignClass.INDETERMINATE
    ab = spec.a * spec.coeffs.padded(k)
    if ab[0] < 0 and np.all(ab <= 0):
        return SignClass.LEVERAGE
    if ab[0] > 0 and np.all(ab >= 0):
        return SignClass.POSITIVE
    return SignClass.INDETERMINATE
