"""Monte Carlo experiments comparing simulated statistics with theoretical values.

Config documents are JSON with three sections::

    {"model": {"type": "asym_garch11", "a": 0.1, "b": 0.5, "c": 0.2, "gamma": 0.3},
     "innovation": {"kind": "standard_normal"},
     "simulation": {"n": 100000, "burn_in": 1000, "seed": 1, "trunc": 10000},
     "experiment": {"replicates": 20, "targets": ["m2", "rho"], "output_dir": "out"}}
"""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.stats import gaussian_kde

from .coeffs import POWER_LAW
from .conditions import stationarity_report
from .exceptions import ConditionError, DomainError, GqarchError
from .leverage import solve_leverage
from .models import (AsymGarch11Spec, Garch11Spec, GqarchSpec, InnovationSpec, LarchSpec,
                     as_asym_garch11, embed_asym_in_gqarch, spec_from_dict, spec_to_dict)
from .moments import garch11_moments, garch_m2, gqarch_m2, larch_m2
from .simulate import SimConfig, simulate
from .stats import (autocovariance, block_sum_variances, decay_exponent,
                    scaling_exponent, AutocovCurve)

TARGETS = ("m2", "rho", "leverage", "decay", "scaling")


def default_block_sizes(n):
    """Powers of two from 16 up to ``n / 256`` (at least 256 blocks each)."""
    sizes = [16]
    while sizes[-1] * 2 <= n // 256:
        sizes.append(sizes[-1] * 2)
    return sizes


@dataclass(frozen=True)
class ExperimentConfig:
    spec: object
    cfg: SimConfig
    replicates: int = 1
    targets: tuple = ("m2",)
    output_dir: str | None = None
    innov: InnovationSpec = field(default_factory=InnovationSpec.standard_normal)
    lags: int = 5
    decay_range: tuple = (10, 300)
    block_sizes: tuple | None = None
    save_series: bool = False

    def __post_init__(self):
        if self.replicates < 1:
            raise DomainError("replicates must be >= 1")
        targets = tuple(self.targets)
        if not targets:
            raise DomainError("at least one target is required")
        unknown = set(targets) - set(TARGETS)
        if unknown:
            raise DomainError(f"unknown targets {sorted(unknown)}")
        object.__setattr__(self, "targets", targets)

    @classmethod
    def from_dict(cls, doc, seed=None, output_dir=None):
        sim = dict(doc.get("simulation", {}))
        if seed is not None:
            sim["seed"] = seed
        exp = dict(doc.get("experiment", {}))
        if output_dir is not None:
            exp["output_dir"] = output_dir
        kw = {k: exp[k] for k in ("replicates", "targets", "output_dir", "lags", "save_series")
              if k in exp}
        for k in ("decay_range", "block_sizes"):
            if exp.get(k) is not None:
                kw[k] = tuple(exp[k])
        return cls(spec=spec_from_dict(doc["model"]), cfg=SimConfig(**sim),
                   innov=InnovationSpec.from_dict(doc.get("innovation", "standard_normal")), **kw)

    def to_dict(self):
        return {"model": spec_to_dict(self.spec), "innovation": self.innov.to_dict(),
                "simulation": self.cfg.to_dict(),
                "experiment": {"replicates": self.replicates, "targets": list(self.targets),
                               "output_dir": self.output_dir, "lags": self.lags,
                               "decay_range": list(self.decay_range),
                               "block_sizes": None if self.block_sizes is None else list(self.block_sizes),
                               "save_series": self.save_series}}


def load_config(path):
    with open(path) as fh:
        return json.load(fh)


@dataclass
class ExperimentReport:
    """Per-target ``{theory, estimate, mc_se, z_score}`` records plus run metadata."""

    records: dict
    metadata: dict

    def to_dict(self):
        return {"records": self.records, "metadata": self.metadata}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def failures(self, z_max=3.0):
        return [k for k, v in self.records.items()
                if "error" in v or not abs(v["z_score"]) <= z_max]


def _record(theory, estimate, se):
    z = (estimate - theory) / se if se > 0 else float("nan")
    return {"theory": float(theory), "estimate": float(estimate), "mc_se": float(se),
            "z_score": float(z)}


def _mean_se(values):
    values = np.asarray(values, dtype=np.float64)
    se = values.std(ddof=1) / np.sqrt(values.shape[0]) if values.shape[0] > 1 else float("nan")
    return values.mean(axis=0), se


def _jackknife(stat, rows):
    """Delete-one jackknife standard error of ``stat(mean of rows)``."""
    rows = np.asarray(rows)
    R = rows.shape[0]
    full = stat(rows.mean(axis=0))
    if R < 2:
        return full, float("nan")
    total = rows.sum(axis=0)
    loo = np.array([stat((total - rows[k]) / (R - 1)) for k in range(R)])
    se = np.sqrt((R - 1) / R * np.sum((loo - loo.mean()) ** 2))
    return full, float(se)


def theory_values(config):
    """Theoretical value(s) for each target, or an error string when unavailable."""
    spec, out = config.spec, {}
    lags = np.arange(1, config.lags + 1)
    asym = as_asym_garch11(spec)
    for target in config.targets:
        try:
            if target == "m2":
                if isinstance(spec, LarchSpec):
                    out[target] = larch_m2(spec)
                elif isinstance(spec, Garch11Spec):
                    out[target] = garch_m2(spec)
                else:
                    gq = embed_asym_in_gqarch(spec) if isinstance(spec, AsymGarch11Spec) else spec
                    out[target] = gqarch_m2(gq)
            elif target == "rho":
                if asym is None:
                    raise DomainError("exact autocovariances are known for GARCH(1,1) types only")
                out[target] = garch11_moments(asym, config.innov.mu4).rho(lags)
            elif target == "leverage":
                if asym is not None:
                    out[target] = garch11_moments(asym, config.innov.mu4).m3(lags)
                elif isinstance(spec, GqarchSpec):
                    out[target] = solve_leverage(spec, T=max(200, config.lags)).h[:config.lags]
                else:
                    raise DomainError("leverage theory needs a GQARCH-type model")
            elif target in ("decay", "scaling"):
                if not isinstance(spec, GqarchSpec) or spec.coeffs.tail_kind != POWER_LAW:
                    raise DomainError(f"{target} needs a GQARCH with power-law coefficients")
                d = spec.coeffs.d
                out[target] = 2 * d - 1 if target == "decay" else 1 + 2 * d
        except GqarchError as exc:
            out[target] = str(exc)
    return out


def _replicate_stats(config, k):
    traj = simulate(config.spec, config.innov, config.cfg.with_replicate(k))
    r = traj.r
    r2 = r * r
    out = {"m2": r2.mean()}
    t = config.targets
    if "rho" in t:
        out["rho"] = autocovariance(r2, config.lags)[1:]
    if "leverage" in t:
        n = r.shape[0]
        out["leverage"] = np.array([np.mean(r2[j:] * r[:n - j]) for j in range(1, config.lags + 1)])
    if "decay" in t:
        out["decay"] = autocovariance(r2, config.decay_range[1])
    if "scaling" in t:
        out["scaling"] = block_sum_variances(r2, _block_sizes(config))
    if config.save_series and config.output_dir:
        _write_series(Path(config.output_dir) / f"series_{k}.csv", traj)
    return out


def _block_sizes(config):
    return config.block_sizes or tuple(default_block_sizes(config.cfg.n))


def _write_series(path, traj):
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.column_stack([np.arange(traj.n), traj.r, traj.sigma_sq])
    np.savetxt(path, data, delimiter=",", header="t,r,sigma_sq", comments="",
               fmt=["%d", "%.17g", "%.17g"])


def _threads():
    try:
        return max(0, int(os.environ.get("GQARCH_THREADS", "0")))
    except ValueError:
        return 0


def run_experiment(config):
    """Simulate ``replicates`` independent streams and compare statistics with theory.

    Raises
    ------
    ConditionError
        When the model has no stationary finite-variance solution.
    """
    started = time.perf_counter()
    report = stationarity_report(config.spec)
    if not report.satisfied:
        raise ConditionError(f"{report.name} fails: lhs = {report.lhs:.6g} >= {report.rhs:g}",
                             condition=report.name)
    theory = theory_values(config)
    R = config.replicates
    threads = _threads()
    if threads > 0:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_rep = dict(zip(range(R), pool.map(lambda k: _replicate_stats(config, k), range(R))))
    else:
        per_rep = {k: _replicate_stats(config, k) for k in range(R)}
    # fold in replicate order so the aggregate does not depend on scheduling
    rows = {key: [per_rep[k][key] for k in range(R)] for key in per_rep[0]}

    records = {}
    for target in config.targets:
        th = theory[target]
        if isinstance(th, str):
            records[target] = {"error": th}
            continue
        if target == "m2":
            est, se = _mean_se(rows["m2"])
            records["m2"] = _record(th, est, se)
        elif target in ("rho", "leverage"):
            vals = np.asarray(rows[target])
            for j in range(config.lags):
                est, se = _mean_se(vals[:, j])
                records[f"{target}[{j + 1}]"] = _record(th[j], est, se)
        elif target == "decay":
            lo, hi = config.decay_range
            lags = np.arange(hi + 1)

            def slope(curve):
                return decay_exponent(AutocovCurve(lags, curve, 0, curve), lo, hi)[0]

            try:
                est, se = _jackknife(slope, rows["decay"])
                records["decay"] = _record(th, est, se)
            except DomainError as exc:
                records["decay"] = {"error": str(exc)}
        elif target == "scaling":
            sizes = np.asarray(_block_sizes(config))
            est, se = _jackknife(lambda v: scaling_exponent(sizes, v), rows["scaling"])
            records["scaling"] = _record(th, est, se)
    meta = {"seed": config.cfg.seed, "replicates": R, "n": config.cfg.n,
            "burn_in": config.cfg.burn_in, "trunc": config.cfg.trunc,
            "model": spec_to_dict(config.spec), "runtime": time.perf_counter() - started}
    out = ExperimentReport(records, meta)
    if config.output_dir:
        path = Path(config.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / "report.json").write_text(out.to_json())
    return out


def quartile_skewness(x):
    """Bowley skewness ``(q3 + q1 - 2 q2) / (q3 - q1)``."""
    q1, q2, q3 = np.quantile(x, [0.25, 0.5, 0.75])
    return float((q3 + q1 - 2 * q2) / (q3 - q1))


def histogram_export(spec, gammas, cfg, innov=None, grid=None, output_dir=None):
    """Kernel-smoothed densities of ``sigma_t`` for a GQARCH spec over a grid of ``gamma``.

    Every ``gamma`` reuses the same innovation stream. Returns a dict mapping
    ``gamma`` to ``(grid, density, skewness)``; with ``output_dir`` each density is
    also written to ``density_gamma_<gamma>.csv``. Skewness is the quartile
    (Bowley) coefficient: the third moment of ``sigma_t`` is often infinite in
    the region of interest, so moment skewness does not settle down.
    """
    if cfg.n < 2:
        raise DomainError("trajectories need at least two points for a density")
    sigmas = {}
    for g in gammas:
        if not 0 <= g < 1:
            raise DomainError(f"gamma must lie in [0, 1), got {g}")
        traj = simulate(replace(spec, gamma=float(g)), innov, cfg)
        sigmas[float(g)] = np.sqrt(traj.sigma_sq)
    if grid is None:
        hi = max(np.quantile(s, 0.995) for s in sigmas.values())
        grid = np.linspace(0.0, hi, 512)
    out = {}
    for g, s in sigmas.items():
        dens = gaussian_kde(s)(grid)
        out[g] = (grid, dens, quartile_skewness(s))
        if output_dir is not None:
            path = Path(output_dir)
            path.mkdir(parents=True, exist_ok=True)
            np.savetxt(path / f"density_gamma_{g:g}.csv", np.column_stack([grid, dens]),
                       delimiter=",", header="sigma,density", comments="", fmt="%.10g")
    return out
