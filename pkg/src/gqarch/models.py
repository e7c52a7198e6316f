"""Parameter records for the four data generating processes and their innovations.

Models
------
GQARCH      sigma_t^2 = c^2 + (a + sum_j b_j r_{t-j})^2 + gamma sigma_{t-1}^2
QARCH       GQARCH with gamma = 0
LARCH       sigma_t = a + sum_j b_j r_{t-j}       (sigma_t may be negative)
GARCH(1,1)  sigma_t^2 = omega + alpha r_{t-1}^2 + beta_g sigma_{t-1}^2

In every case ``r_t = zeta_t sigma_t`` with standardized i.i.d. ``zeta_t``.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import gammaln

from ._validation import check_gamma
from .coeffs import CoefficientSeq, finite_coeffs, power_law_coeffs
from .exceptions import DomainError

EPS = np.finfo(float).eps

MAX_MOMENT = 8


@dataclass(frozen=True)
class GqarchSpec:
    """Generalized quadratic ARCH with ``Q(x) = sqrt(c^2 + x^2)``.

    ``c`` only enters through ``c^2`` and is stored as ``|c|``.
    """

    a: float
    c: float
    coeffs: CoefficientSeq
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "c", abs(float(self.c)))
        object.__setattr__(self, "gamma", check_gamma(self.gamma))
        if not isinstance(self.coeffs, CoefficientSeq):
            raise DomainError("coeffs must be a CoefficientSeq")

    # Q is 1-Lipschitz and Q^2(x) = c1^2 + c2^2 x^2 with c1 = |c|, c2 = 1
    lip_q = 1.0

    @property
    def c1(self):
        return self.c

    @property
    def c2(self):
        return 1.0

    def Q(self, x):
        return np.sqrt(self.c ** 2 + np.square(x))

    @property
    def floor(self):
        """Deterministic lower bound ``c^2 / (1 - gamma)`` on ``sigma_t^2``."""
        return self.c ** 2 / (1.0 - self.gamma)


@dataclass(frozen=True)
class LarchSpec:
    a: float
    coeffs: CoefficientSeq

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        if not isinstance(self.coeffs, CoefficientSeq):
            raise DomainError("coeffs must be a CoefficientSeq")


@dataclass(frozen=True)
class Garch11Spec:
    omega: float
    alpha: float
    beta_g: float

    def __post_init__(self):
        for name in ("omega", "alpha", "beta_g"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if self.alpha < 0 or self.beta_g < 0:
            raise DomainError("alpha and beta_g must be nonnegative")

    @property
    def covariance_stationary(self):
        return self.alpha + self.beta_g < 1.0


@dataclass(frozen=True)
class AsymGarch11Spec:
    """``sigma_t^2 = c^2 + (a + b r_{t-1})^2 + gamma sigma_{t-1}^2``."""

    a: float
    b: float
    c: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "c", abs(float(self.c)))
        object.__setattr__(self, "gamma", check_gamma(self.gamma))


ModelSpec = Union[GqarchSpec, LarchSpec, Garch11Spec, AsymGarch11Spec]


@dataclass(frozen=True)
class SentanaParams:
    """``sigma_t^2 = theta + psi r_{t-1} + a11 r_{t-1}^2 + delta sigma_{t-1}^2``."""

    theta: float
    psi: float
    a11: float
    delta: float


def sentana_map(spec):
    return SentanaParams(theta=spec.c ** 2 + spec.a ** 2, psi=2 * spec.a * spec.b,
                         a11=spec.b ** 2, delta=spec.gamma)


def inverse_sentana_map(params):
    """Recover an :class:`AsymGarch11Spec`; ``b`` takes the sign of ``psi``.

    Requires ``a11 > 0`` and ``theta >= a^2``. A deficit of a few ulps of
    ``theta`` (rounding in the forward map at ``c = 0``) is read as ``c = 0``.
    """
    if params.a11 <= 0:
        raise DomainError("a11 must be positive to invert the map")
    b = math.copysign(math.sqrt(params.a11), params.psi)
    a = params.psi / (2 * b)
    c2 = params.theta - a * a
    if -8 * EPS * abs(params.theta) <= c2 < 0:
        c2 = 0.0
    if c2 < 0:
        raise DomainError("theta < a^2: no real c")
    return AsymGarch11Spec(a=a, b=b, c=math.sqrt(c2), gamma=params.delta)


def embed_asym_in_gqarch(spec):
    """GQARCH with ``b_1 = spec.b`` and no further lags."""
    return GqarchSpec(a=spec.a, c=spec.c, coeffs=finite_coeffs([spec.b]), gamma=spec.gamma)


def garch_as_asym(spec):
    """Symmetric GARCH(1,1) as the ``a = 0`` asymmetric model.

    ``omega + alpha r^2 + beta_g s^2 = c^2 + (0 + b r)^2 + gamma s^2`` with
    ``c = sqrt(omega)``, ``b = sqrt(alpha)``, ``gamma = beta_g``.
    """
    return AsymGarch11Spec(a=0.0, b=math.sqrt(spec.alpha), c=math.sqrt(spec.omega),
                           gamma=spec.beta_g)


def as_asym_garch11(spec):
    """View ``spec`` as an asymmetric GARCH(1,1) when it is one, else ``None``."""
    if isinstance(spec, AsymGarch11Spec):
        return spec
    if isinstance(spec, Garch11Spec):
        return garch_as_asym(spec)
    if isinstance(spec, GqarchSpec) and not np.any(spec.coeffs.values[1:]):
        return AsymGarch11Spec(a=spec.a, b=float(spec.coeffs.values[0]), c=spec.c,
                               gamma=spec.gamma)
    return None


# --- innovations -----------------------------------------------------------

STANDARD_NORMAL = "standard_normal"
RADEMACHER = "rademacher"
CUSTOM_TABLE = "custom_table"


def _normal_moment(p):
    if p % 2:
        return 0.0
    return float(np.prod(np.arange(p - 1, 0, -2))) if p else 1.0


def _normal_abs_moment(p):
    return math.exp(p / 2 * math.log(2.0) + gammaln((p + 1) / 2) - 0.5 * math.log(math.pi))


@dataclass(frozen=True)
class InnovationSpec:
    """Standardized i.i.d. innovation law with its moment tables.

    ``mu[p]`` holds ``E zeta^p`` for ``p = 1..8`` and ``mu_abs[p]`` holds
    ``E |zeta|^p``. For ``custom_table`` only the tables are known, so
    simulation needs explicit innovations.
    """

    kind: str = STANDARD_NORMAL
    mu: dict = field(default_factory=dict)
    mu_abs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == STANDARD_NORMAL:
            mu = {p: _normal_moment(p) for p in range(1, MAX_MOMENT + 1)}
            mu_abs = {p: _normal_abs_moment(p) for p in range(1, MAX_MOMENT + 1)}
        elif self.kind == RADEMACHER:
            mu = {p: float(1 - p % 2) for p in range(1, MAX_MOMENT + 1)}
            mu_abs = {p: 1.0 for p in range(1, MAX_MOMENT + 1)}
        elif self.kind == CUSTOM_TABLE:
            mu = {int(p): float(v) for p, v in self.mu.items()}
            mu_abs = {float(p) if float(p) % 1 else int(p): float(v)
                      for p, v in self.mu_abs.items()}
            if mu.get(1, 0.0) != 0.0 or mu.get(2, 1.0) != 1.0:
                raise DomainError("innovations must be standardized: mu_1 = 0, mu_2 = 1")
            mu.setdefault(1, 0.0)
            mu.setdefault(2, 1.0)
            for p, v in mu.items():
                if p % 2 == 0:
                    mu_abs.setdefault(p, v)
        else:
            raise DomainError(f"unknown innovation kind {self.kind!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "mu_abs", mu_abs)

    @classmethod
    def standard_normal(cls):
        return cls(STANDARD_NORMAL)

    @classmethod
    def rademacher(cls):
        return cls(RADEMACHER)

    @property
    def mu3(self):
        return self.mu.get(3, math.nan)

    @property
    def mu4(self):
        return self.mu.get(4, math.nan)

    def sample(self, rng, size):
        """Draw innovations. Normal draws use NumPy's ziggurat sampler."""
        if self.kind == STANDARD_NORMAL:
            return rng.standard_normal(size)
        if self.kind == RADEMACHER:
            return 2.0 * rng.integers(0, 2, size=size).astype(np.float64) - 1.0
        raise DomainError("custom_table innovations cannot be sampled; pass innovations explicitly")

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == CUSTOM_TABLE:
            out["mu"] = {str(k): v for k, v in self.mu.items()}
            out["mu_abs"] = {str(k): v for k, v in self.mu_abs.items()}
        return out

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, str):
            return cls(data)
        return cls(data.get("kind", STANDARD_NORMAL), data.get("mu", {}), data.get("mu_abs", {}))


def innovation_moments(spec, p):
    """``(mu_p, |mu|_p)``; ``mu_p`` is ``None`` for non-integer ``p``.

    Exact for the normal (double factorial / Gamma formulas) and Rademacher
    laws up to ``p = 8``; table lookup for ``custom_table``.
    """
    p = float(p)
    if not 0 < p <= MAX_MOMENT:
        raise KeyError(f"moment order {p} outside the table (0, {MAX_MOMENT}]")
    integral = p.is_integer()
    if spec.kind == STANDARD_NORMAL:
        mu_abs = _normal_abs_moment(p)
        mu = _normal_moment(int(p)) if integral else None
        return mu, mu_abs
    if spec.kind == RADEMACHER:
        return (float(1 - int(p) % 2) if integral else None), 1.0
    key = int(p) if integral else p
    if key not in spec.mu_abs:
        raise KeyError(f"|mu|_{p} not in the custom table")
    mu = spec.mu.get(key) if integral else None
    if integral and mu is None:
        raise KeyError(f"mu_{p} not in the custom table")
    return mu, spec.mu_abs[key]


# --- serialization ---------------------------------------------------------

_TYPES = {
    "gqarch": GqarchSpec,
    "larch": LarchSpec,
    "garch11": Garch11Spec,
    "asym_garch11": AsymGarch11Spec,
}
_TAGS = {v: k for k, v in _TYPES.items()}


def spec_to_dict(spec):
    tag = _TAGS[type(spec)]
    out = {"type": tag}
    for name in spec.__dataclass_fields__:
        value = getattr(spec, name)
        out[name] = value.to_dict() if isinstance(value, CoefficientSeq) else value
    return out


def spec_from_dict(data):
    data = dict(data)
    tag = data.pop("type", None)
    if tag == "qarch":
        tag = "gqarch"
        data.setdefault("gamma", 0.0)
    if tag not in _TYPES:
        raise DomainError(f"unknown or missing model type {tag!r}")
    cls = _TYPES[tag]
    if "coeffs" in data:
        data["coeffs"] = CoefficientSeq.from_dict(data["coeffs"])
    return cls(**data)


def spec_fingerprint(spec):
    blob = json.dumps(spec_to_dict(spec), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# --- fitted parameter sets -------------------------------------------------

def sp500_fixture(name, n_trunc=10_000):
    """Parameter sets estimated from daily S&P 500 returns, 2010-2014 (n = 1257).

    ``"L"`` LARCH, ``"Q1"`` QARCH (gamma = 0), ``"Q2"`` GQARCH, ``"G"`` GARCH(1,1).
    """
    if name == "L":
        return LarchSpec(a=0.0101, coeffs=power_law_coeffs(-0.1749, 0.3520, n_trunc))
    if name == "Q1":
        return GqarchSpec(a=0.0058, c=-0.0101, coeffs=power_law_coeffs(0.2099, 0.4648, n_trunc),
                          gamma=0.0)
    if name == "Q2":
        return GqarchSpec(a=0.0020, c=-0.0049, coeffs=power_law_coeffs(0.2394, 0.2393, n_trunc),
                          gamma=0.7735)
    if name == "G":
        return Garch11Spec(omega=0.00001, alpha=0.1306, beta_g=0.8346)
    raise KeyError(f"unknown fixture {name!r}; expected one of L, Q1, Q2, G")
