"""Gaussian quasi-maximum-likelihood fitting of LARCH, QARCH, GQARCH and GARCH(1,1).

The objective on an observed series ``r_1..r_n`` is

    L_n(theta) = sum_{t >= t0} [log s2_t(theta) + r_t^2 / s2_t(theta)]

where ``s2_t`` runs the model recursion on the data with zero pre-sample
returns, pre-sample variance equal to the sample second moment, lags of
``X_t = sum_j b_j r_{t-j}`` cut at ``window``, and ``t0 = max(50, window // 10)``
leading terms skipped. ``s2_t`` is floored at ``1e-10`` times the sample second
moment.

Parameters are optimized by Nelder-Mead in unconstrained coordinates:
scale parameters on a log scale relative to the sample standard deviation,
``gamma`` through a logistic map onto (0, 1) and ``d`` onto (0, 1/2). The
relative scaling makes fits exactly equivariant under ``r -> s r``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.signal import fftconvolve, lfilter
from scipy.special import expit, logit
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_nondegenerate, check_series
from .exceptions import DomainError

FAMILIES = ("larch", "qarch", "gqarch", "garch11")
PARAM_NAMES = {
    "larch": ("a", "beta", "d"),
    "qarch": ("a", "c", "beta", "d"),
    "gqarch": ("a", "c", "beta", "d", "gamma"),
    "garch11": ("omega", "alpha", "beta"),
}
FLOOR_EPS = 1e-10
MIN_LENGTH = 200


@dataclass
class FitOptions:
    """Settings for :func:`qmle_fit`.

    ``window=None`` uses the full available history.
    """

    window: int | None = None
    max_iter: int = 4000
    xatol: float = 1e-7
    fatol: float = 1e-9
    starts: list | None = None


@dataclass
class FitResult:
    params: dict
    objective: float
    iterations: int
    converged: bool
    start_points_tried: int
    n_floored: int = 0
    family: str = ""
    n_obs: int = 0
    start_objectives: list = field(default_factory=list)

    def to_dict(self):
        return {"family": self.family, "params": self.params, "objective": self.objective,
                "iterations": self.iterations, "converged": self.converged,
                "start_points_tried": self.start_points_tried, "n_floored": self.n_floored,
                "n_obs": self.n_obs}


def _check_family(family):
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return family


class _Problem:
    """Observed series plus the pieces of the objective that do not depend on theta."""

    def __init__(self, series, family, window=None):
        self.family = _check_family(family)
        r = check_series(series, min_length=MIN_LENGTH)
        check_nondegenerate(r)
        self.r = r
        self.n = r.shape[0]
        self.r2 = r * r
        self.v = float(np.mean(self.r2))
        self.scale = math.sqrt(self.v)
        self.window = self.n - 1 if window is None else int(window)
        if not 1 <= self.window:
            raise DomainError("window must be positive")
        self.t0 = max(50, self.window // 10)
        if self.t0 >= self.n - 10:
            raise DomainError("series too short for the requested window")
        self.lags = np.arange(1, min(self.window, self.n - 1) + 1, dtype=np.float64)
        self.r2_lag = np.concatenate(([0.0], self.r2[:-1]))

    # --- coordinate maps -----------------------------------------------------

    def to_params(self, u):
        s = self.scale
        if self.family == "garch11":
            pers, share = float(expit(u[1])), float(expit(u[2]))
            return {"omega": s * s * math.exp(u[0]), "alpha": pers * share,
                    "beta": pers * (1 - share)}
        p = {"a": s * math.exp(u[0])}
        k = 1
        if self.family != "larch":
            p["c"] = s * math.exp(u[1])
            k = 2
        p["beta"] = float(u[k])
        p["d"] = 0.5 * float(expit(u[k + 1]))
        if self.family == "gqarch":
            p["gamma"] = float(expit(u[k + 2]))
        return p

    def to_coords(self, params):
        s = self.scale
        _check_domain(self.family, params)
        if self.family == "garch11":
            pers = params["alpha"] + params["beta"]
            return np.array([math.log(params["omega"] / (s * s)), logit(pers),
                             logit(params["alpha"] / pers)])
        u = [math.log(params["a"] / s)]
        if self.family != "larch":
            u.append(math.log(params["c"] / s))
        u += [params["beta"], logit(2 * params["d"])]
        if self.family == "gqarch":
            u.append(logit(params["gamma"]))
        return np.array(u)

    # --- recursion -------------------------------------------------------------

    def _x(self, beta, d):
        b = np.concatenate(([0.0], beta * self.lags ** (d - 1.0)))
        return fftconvolve(self.r, b)[:self.n]

    def variance(self, params):
        """Filtered ``s2_t`` (before flooring) and, for LARCH, the signed ``sigma_t``."""
        if self.family == "garch11":
            drive = params["omega"] + params["alpha"] * self.r2_lag
            b = params["beta"]
            return lfilter([1.0], [1.0, -b], drive, zi=[b * self.v])[0], None
        x = self._x(params["beta"], params["d"])
        if self.family == "larch":
            sig = params["a"] + x
            return sig * sig, sig
        g = params.get("gamma", 0.0)
        drive = params["c"] ** 2 + (params["a"] + x) ** 2
        return lfilter([1.0], [1.0, -g], drive, zi=[g * self.v])[0], None

    def objective(self, params):
        s2, _ = self.variance(params)
        s2 = np.maximum(s2[self.t0:], FLOOR_EPS * self.v)
        val = float(np.sum(np.log(s2) + self.r2[self.t0:] / s2))
        return val if math.isfinite(val) else math.inf

    def n_floored(self, params):
        s2, _ = self.variance(params)
        return int(np.sum(s2[self.t0:] < FLOOR_EPS * self.v))

    def __call__(self, u):
        return self.objective(self.to_params(u))

    # --- starting values -------------------------------------------------------

    def default_starts(self):
        """Eight deterministic starts anchored on the sample second moment."""
        v = self.v
        starts = []
        if self.family == "garch11":
            for pers in (0.8, 0.9, 0.95, 0.98):
                for share in (0.05, 0.15):
                    starts.append({"omega": v * (1 - pers), "alpha": pers * share,
                                   "beta": pers * (1 - share)})
            return starts
        if self.family == "gqarch":
            grid = [(g, d, 0.3) for g in (0.2, 0.5, 0.8) for d in (0.1, 0.3)]
            grid += [(0.5, 0.2, 0.6), (0.8, 0.2, 0.6)]
        elif self.family == "qarch":
            grid = [(0.0, d, f) for d in (0.1, 0.2, 0.3, 0.4) for f in (0.3, 0.6)]
        else:
            grid = [(0.0, d, f) for d in (0.1, 0.2, 0.3, 0.4) for f in (0.3, -0.3)]
        for g, d, frac in grid:
            # coefficient energy B_2 set to |frac| of the room 1 - gamma
            zsum = float(np.sum(self.lags ** (2 * d - 2)))
            beta = math.copysign(math.sqrt(abs(frac) * (1 - g) / zsum), frac)
            B2 = beta * beta * zsum
            if self.family == "larch":
                starts.append({"a": math.sqrt(v * (1 - B2)), "beta": beta, "d": d})
                continue
            level = math.sqrt(v * (1 - g - B2) / 2)
            p = {"a": level, "c": level, "beta": beta, "d": d}
            if self.family == "gqarch":
                p["gamma"] = g
            starts.append(p)
        return starts


def _check_domain(family, params):
    names = PARAM_NAMES[family]
    missing = set(names) - set(params)
    if missing:
        raise DomainError(f"missing parameters {sorted(missing)} for {family}")
    if family == "garch11":
        if not (params["omega"] > 0 and params["alpha"] > 0 and params["beta"] > 0
                and params["alpha"] + params["beta"] < 1):
            raise DomainError("garch11 needs omega, alpha, beta > 0 and alpha + beta < 1")
        return
    if not params["a"] > 0:
        raise DomainError("a must be positive (the sign of the pair (a, beta) is unidentified)")
    if family != "larch" and not params["c"] > 0:
        raise DomainError("c must be positive")
    if not 0 < params["d"] < 0.5:
        raise DomainError("d must lie in (0, 1/2)")
    if family == "gqarch" and not 0 < params["gamma"] < 1:
        raise DomainError("gamma must lie in (0, 1)")


def quasi_loglik(series, family, params, window=None):
    """Objective ``L_n`` (negative Gaussian quasi-log-likelihood, up to constants)."""
    prob = _Problem(series, family, window)
    _check_domain(family, params)
    return prob.objective(params)


def conditional_variance(series, family, params, window=None):
    """Floored in-sample conditional variances ``s2_t`` for every ``t``."""
    prob = _Problem(series, family, window)
    _check_domain(family, params)
    s2, _ = prob.variance(params)
    return np.maximum(s2, FLOOR_EPS * prob.v)


def _nelder_mead(prob, u0, opts):
    return minimize(prob, u0, method="Nelder-Mead",
                    options={"maxiter": opts.max_iter, "maxfev": 2 * opts.max_iter,
                             "xatol": opts.xatol, "fatol": opts.fatol, "adaptive": True})


def qmle_fit(series, family, opts=None):
    """Fit ``family`` to ``series`` by multi-start Nelder-Mead.

    Each start is optimized, the best (first on ties) is restarted once from
    its optimum to refresh a possibly collapsed simplex.

    Returns
    -------
    FitResult
        ``converged`` is False when the final simplex run hit its iteration
        limit; the best point found is returned regardless.
    """
    opts = FitOptions() if opts is None else opts
    prob = _Problem(series, family, opts.window)
    starts = opts.starts if opts.starts is not None else prob.default_starts()
    best, objectives, total_iter = None, [], 0
    for start in starts:
        res = _nelder_mead(prob, prob.to_coords(start), opts)
        total_iter += res.nit
        objectives.append(float(res.fun))
        if best is None or res.fun < best.fun:
            best = res
    polish = _nelder_mead(prob, best.x, opts)
    total_iter += polish.nit
    final = polish if polish.fun <= best.fun else best
    params = prob.to_params(final.x)
    return FitResult(params=params, objective=float(final.fun), iterations=total_iter,
                     converged=bool(polish.success), start_points_tried=len(starts),
                     n_floored=prob.n_floored(params), family=family, n_obs=prob.n,
                     start_objectives=objectives)


def profile_objective(series, family, param_name, grid, params, window=None):
    """Objective along ``param_name`` with the other parameters held at ``params``."""
    prob = _Problem(series, family, window)
    if param_name not in PARAM_NAMES[family]:
        raise DomainError(f"{family} has no parameter {param_name!r}")
    out = []
    for value in np.asarray(grid, dtype=np.float64):
        p = dict(params)
        p[param_name] = float(value)
        _check_domain(family, p)
        out.append(prob.objective(p))
    return np.array(out)


class QMLEVolatilityModel(TransformerMixin, BaseEstimator):
    """Quasi-maximum-likelihood volatility model with a scikit-learn interface.

    Parameters
    ----------
    family : {"gqarch", "qarch", "larch", "garch11"}
    window : int, optional
        Lag truncation of ``X_t``; full history when None.
    max_iter : int
        Nelder-Mead iteration limit per start.

    Attributes
    ----------
    params_ : dict
        Fitted parameters.
    fit_result_ : FitResult

    Examples
    --------
    >>> model = QMLEVolatilityModel("garch11").fit(returns)   # doctest: +SKIP
    >>> sigma_sq = model.transform(returns)                   # doctest: +SKIP
    """

    def __init__(self, family="gqarch", window=None, max_iter=4000):
        self.family = family
        self.window = window
        self.max_iter = max_iter

    def fit(self, X, y=None):
        r = check_series(X, min_length=MIN_LENGTH, name="X")
        self.fit_result_ = qmle_fit(r, self.family, FitOptions(window=self.window,
                                                               max_iter=self.max_iter))
        self.params_ = self.fit_result_.params
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        """In-sample conditional variance of ``X`` under the fitted parameters."""
        check_is_fitted(self, "params_")
        return conditional_variance(X, self.family, self.params_, self.window)

    def score(self, X, y=None):
        """Average quasi-log-likelihood per used observation (higher is better)."""
        check_is_fitted(self, "params_")
        prob = _Problem(X, self.family, self.window)
        return -prob.objective(self.params_) / (prob.n - prob.t0)
