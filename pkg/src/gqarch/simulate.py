"""Trajectory simulation for GQARCH, LARCH and GARCH(1,1).

Protocol
--------
* Pre-sample returns are zero. GQARCH starts from ``sigma^2 = c^2/(1-gamma)``,
  the deterministic floor, so ``sigma_t^2 >= c^2/(1-gamma)`` at every step.
  GARCH(1,1) starts from ``omega/(1-alpha-beta_g)`` when that is finite and
  from ``omega`` otherwise.
* The first ``burn_in`` values are discarded; ``burn_in`` defaults to ``trunc``.
* ``X_t = sum_{j <= trunc} b_j r_{t-j}``; lags past ``trunc`` are dropped.
* Replicate ``k`` of master seed ``s`` draws from
  ``Generator(PCG64(SeedSequence(s, spawn_key=(k,))))``, the same stream
  ``SeedSequence(s).spawn(k + 1)[k]`` would give. Normal innovations use
  NumPy's ziggurat ``standard_normal``. Streams for different ``k`` never
  interact.
"""

import logging
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from numba import njit

from ._validation import check_positive_int
from .conditions import stationarity_report
from .exceptions import DivergenceError, DomainError, NonStationaryWarning
from .models import (AsymGarch11Spec, Garch11Spec, GqarchSpec, InnovationSpec, LarchSpec,
                     embed_asym_in_gqarch, spec_fingerprint)

logger = logging.getLogger(__name__)

DEFAULT_TRUNC = 10_000
OVERFLOW = 1e300


@dataclass(frozen=True)
class SimConfig:
    n: int
    burn_in: int | None = None
    seed: int = 0
    trunc: int = DEFAULT_TRUNC
    replicate: int = 0

    def __post_init__(self):
        check_positive_int(self.n, "n")
        check_positive_int(self.trunc, "trunc")
        check_positive_int(self.replicate, "replicate", minimum=0)
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", self.trunc)
        check_positive_int(self.burn_in, "burn_in", minimum=0)
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    def with_replicate(self, k):
        return SimConfig(self.n, self.burn_in, self.seed, self.trunc, k)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Simulated returns and conditional variances (after burn-in).

    ``sigma`` is the signed LARCH volatility and ``None`` for the other models.
    ``tail_bound`` bounds the standard deviation of the dropped lags of
    ``X_t`` relative to ``sqrt(E r^2)``.
    """

    r: np.ndarray
    sigma_sq: np.ndarray
    spec_fingerprint: str
    config: SimConfig
    sigma: np.ndarray | None = None
    tail_bound: float = 0.0
    nonstationary: bool = False

    @property
    def n(self):
        return self.r.shape[0]


def replicate_rng(seed, replicate=0):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replicate,))))


@njit(cache=True, nogil=True)
def _gqarch_kernel(b_rev, a, c2, gamma, s2, z, r, s2_out):
    m = b_rev.shape[0]
    for t in range(z.shape[0]):
        k = t if t < m else m
        x = a
        if k > 0:
            x += np.dot(b_rev[m - k:], r[t - k:t])
        s2 = c2 + x * x + gamma * s2
        if not s2 <= 1e300:
            return t
        s2_out[t] = s2
        r[t] = z[t] * np.sqrt(s2)
    return -1


@njit(cache=True, nogil=True)
def _larch_kernel(b_rev, a, z, r, sig_out):
    m = b_rev.shape[0]
    for t in range(z.shape[0]):
        k = t if t < m else m
        s = a
        if k > 0:
            s += np.dot(b_rev[m - k:], r[t - k:t])
        if not abs(s) <= 1e150:
            return t
        sig_out[t] = s
        r[t] = z[t] * s
    return -1


@njit(cache=True, nogil=True)
def _garch_kernel(omega, alpha, beta, s2, z, r, s2_out):
    r_prev = 0.0
    for t in range(z.shape[0]):
        s2 = omega + alpha * r_prev * r_prev + beta * s2
        if not s2 <= 1e300:
            return t
        s2_out[t] = s2
        r_prev = z[t] * np.sqrt(s2)
        r[t] = r_prev
    return -1


def _innovations(innov, cfg, innovations):
    total = cfg.burn_in + cfg.n
    if innovations is not None:
        z = np.ascontiguousarray(innovations, dtype=np.float64)
        if z.shape != (total,):
            raise DomainError(f"need {total} innovations (burn_in + n), got {z.shape}")
        return z
    return innov.sample(replicate_rng(cfg.seed, cfg.replicate), total)


def _window(seq, trunc):
    m = min(trunc, seq.n_trunc)
    b = seq.values[:m]
    dropped = math.fsum(seq.values[m:] ** 2) + seq.analytic_tail_sq()
    return np.ascontiguousarray(b[::-1]), math.sqrt(dropped)


def _flag_nonstationary(spec):
    report = stationarity_report(spec)
    if not report.satisfied:
        warnings.warn(f"{report.name} fails (lhs={report.lhs:.4g}); simulating anyway",
                      NonStationaryWarning, stacklevel=3)
    return not report.satisfied


def simulate_gqarch(spec, innov=None, cfg=None, innovations=None):
    """Simulate ``sigma_t^2 = c^2 + (a + X_t)^2 + gamma sigma_{t-1}^2``.

    Parameters
    ----------
    spec : GqarchSpec
    innov : InnovationSpec, optional
        Defaults to standard normal.
    cfg : SimConfig
    innovations : array_like, optional
        Explicit ``zeta`` of length ``burn_in + n``; overrides sampling.
    """
    innov = InnovationSpec.standard_normal() if innov is None else innov
    flagged = _flag_nonstationary(spec)
    b_rev, tail = _window(spec.coeffs, cfg.trunc)
    if tail > 0:
        logger.debug("dropped lags contribute at most %.3g sd units to X_t", tail)
    z = _innovations(innov, cfg, innovations)
    r = np.zeros_like(z)
    s2 = np.empty_like(z)
    step = _gqarch_kernel(b_rev, spec.a, spec.c ** 2, spec.gamma, spec.floor, z, r, s2)
    if step >= 0:
        raise DivergenceError(step)
    keep = slice(cfg.burn_in, None)
    return Trajectory(r[keep], s2[keep], spec_fingerprint(spec), cfg, tail_bound=tail,
                      nonstationary=flagged)


def simulate_asym_garch11(spec, innov=None, cfg=None, innovations=None):
    """Delegates to :func:`simulate_gqarch` on the embedded spec."""
    traj = simulate_gqarch(embed_asym_in_gqarch(spec), innov, cfg, innovations)
    return Trajectory(traj.r, traj.sigma_sq, spec_fingerprint(spec), cfg,
                      nonstationary=traj.nonstationary)


def simulate_larch(spec, innov=None, cfg=None, innovations=None):
    """Simulate ``sigma_t = a + X_t``, ``r_t = zeta_t sigma_t``."""
    innov = InnovationSpec.standard_normal() if innov is None else innov
    flagged = _flag_nonstationary(spec)
    b_rev, tail = _window(spec.coeffs, cfg.trunc)
    z = _innovations(innov, cfg, innovations)
    r = np.zeros_like(z)
    sig = np.empty_like(z)
    step = _larch_kernel(b_rev, spec.a, z, r, sig)
    if step >= 0:
        raise DivergenceError(step)
    keep = slice(cfg.burn_in, None)
    sig = sig[keep]
    return Trajectory(r[keep], sig * sig, spec_fingerprint(spec), cfg, sigma=sig,
                      tail_bound=tail, nonstationary=flagged)


def simulate_garch11(spec, innov=None, cfg=None, innovations=None):
    """Simulate ``sigma_t^2 = omega + alpha r_{t-1}^2 + beta_g sigma_{t-1}^2``."""
    innov = InnovationSpec.standard_normal() if innov is None else innov
    flagged = _flag_nonstationary(spec)
    persistence = spec.alpha + spec.beta_g
    s2_init = spec.omega / (1.0 - persistence) if persistence < 1 else spec.omega
    z = _innovations(innov, cfg, innovations)
    r = np.empty_like(z)
    s2 = np.empty_like(z)
    step = _garch_kernel(spec.omega, spec.alpha, spec.beta_g, s2_init, z, r, s2)
    if step >= 0:
        raise DivergenceError(step)
    keep = slice(cfg.burn_in, None)
    return Trajectory(r[keep], s2[keep], spec_fingerprint(spec), cfg, nonstationary=flagged)


_DISPATCH = {
    GqarchSpec: simulate_gqarch,
    AsymGarch11Spec: simulate_asym_garch11,
    LarchSpec: simulate_larch,
    Garch11Spec: simulate_garch11,
}


def simulate(spec, innov=None, cfg=None, innovations=None):
    """Simulate any supported model."""
    try:
        fn = _DISPATCH[type(spec)]
    except KeyError:
        raise TypeError(f"cannot simulate {type(spec).__name__}") from None
    return fn(spec, innov, cfg, innovations)
