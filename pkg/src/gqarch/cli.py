"""Command-line interface.

Usage::

    gqarch [--config FILE] [--seed N] [--out DIR] <command> [options]

Commands: simulate, check, moments, leverage, estimate, mc, hist. Exit status
is 0 on success, 1 on domain or condition errors and 2 on usage errors.
"""

import argparse
import csv
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from .conditions import check_all
from .estimate import FAMILIES, FitOptions, qmle_fit
from .exceptions import GqarchError
from .experiment import ExperimentConfig, histogram_export, load_config, run_experiment
from .leverage import classify_signs, leverage_norm_bound, solve_leverage
from .models import (AsymGarch11Spec, Garch11Spec, GqarchSpec, InnovationSpec, LarchSpec,
                     as_asym_garch11, embed_asym_in_gqarch, sp500_fixture, spec_from_dict, spec_to_dict)
from .moments import (MomentReport, garch11_moments, garch_m2, gqarch_m2, larch_m2,
                      lm_asymptotics, lm_cov_curve)
from .simulate import SimConfig, simulate

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad invocation or unreadable configuration."""


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", type=Path, default=default, help="JSON config file")
    parser.add_argument("--seed", type=int, default=default, help="RNG seed (overrides config)")
    parser.add_argument("--out", type=Path, default=default, help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(prog="gqarch", description="GQARCH volatility toolkit")
    _global_flags(parser, suppress=False)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        p.add_argument("--fixture", choices=["L", "Q1", "Q2", "G"],
                       help="use a fitted S&P 500 parameter set as the model")
        return p

    p = add("simulate", "simulate a trajectory to CSV")
    p.add_argument("--n", type=int, help="output length (overrides config)")
    p = add("check", "print existence and moment conditions")
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    p = add("moments", "closed-form moments and lag curves")
    p.add_argument("--lags", type=int, default=20)
    p = add("leverage", "solve for the leverage function")
    p.add_argument("--T", type=int, default=200, help="solved horizon")
    p.add_argument("--k", type=int, default=5, help="order for the sign classification")
    p = add("estimate", "QMLE fit of a return series")
    p.add_argument("input", type=Path, help="CSV with one column or columns t,r")
    p.add_argument("--family", choices=FAMILIES, default="gqarch")
    p.add_argument("--window", type=int)
    add("mc", "Monte Carlo comparison of simulation and theory")
    p = add("hist", "smoothed densities of sigma_t over a gamma grid")
    p.add_argument("--gammas", type=float, nargs="+", required=True)
    p.add_argument("--n", type=int, help="trajectory length (overrides config)")
    return parser


# --- config handling ----------------------------------------------------------

def _load(args):
    if args.config is None:
        return {}
    try:
        return load_config(args.config)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc


def _model(args, doc):
    if getattr(args, "fixture", None):
        return sp500_fixture(args.fixture)
    if "model" not in doc:
        raise UsageError("a model is required: pass --config with a 'model' section or --fixture")
    try:
        return spec_from_dict(doc["model"])
    except (KeyError, TypeError) as exc:
        raise UsageError(f"bad model section: {exc!r}") from exc


def _innov(doc):
    return InnovationSpec.from_dict(doc.get("innovation", "standard_normal"))


def _sim_config(args, doc, n=None):
    sim = dict(doc.get("simulation", {}))
    if args.seed is not None:
        sim["seed"] = args.seed
    if n is not None:
        sim["n"] = n
    if "n" not in sim:
        raise UsageError("simulation length n is required (config 'simulation.n' or --n)")
    return SimConfig(**sim)


def _out_dir(args):
    out = args.out if args.out is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump(obj):
    print(json.dumps(obj, indent=2, sort_keys=True, default=_json_default))


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _write_curve(path, t, values, header=("t", "value")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for ti, v in zip(t, values):
            w.writerow([int(ti), repr(float(v))])


# --- commands ---------------------------------------------------------------

def cmd_simulate(args, doc):
    spec = _model(args, doc)
    cfg = _sim_config(args, doc, args.n)
    traj = simulate(spec, _innov(doc), cfg)
    out = _out_dir(args)
    data = np.column_stack([np.arange(traj.n), traj.r, traj.sigma_sq])
    np.savetxt(out / "series.csv", data, delimiter=",", header="t,r,sigma_sq", comments="",
               fmt=["%d", "%.17g", "%.17g"])
    manifest = {"model": spec_to_dict(spec), "config": cfg.to_dict(), "seed": cfg.seed,
                "fingerprint": traj.spec_fingerprint, "truncation_tail_bound": traj.tail_bound,
                "nonstationary": traj.nonstationary}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    print(f"wrote {traj.n} rows to {out / 'series.csv'}")


def cmd_check(args, doc):
    spec = _model(args, doc)
    reports = check_all(spec, _innov(doc))
    if args.json:
        _dump({"model": spec_to_dict(spec), "conditions": [r.to_dict() for r in reports]})
        return
    print(f"{'condition':<28}{'lhs':>14}{'rhs':>14}  verdict")
    for r in reports:
        verdict = "ok" if r.satisfied else "FAIL"
        print(f"{r.name:<28}{r.lhs:>14.6g}{r.rhs:>14.6g}  {verdict}")


def cmd_moments(args, doc):
    spec = _model(args, doc)
    innov = _innov(doc)
    t = np.arange(1, args.lags + 1)
    asym = as_asym_garch11(spec)
    if asym is not None:
        mom = garch11_moments(asym, innov.mu4, innov.mu3)
        theory = mom.to_dict(args.lags)
        curve = mom.rho(t)
    elif isinstance(spec, LarchSpec):
        theory, curve = {"m2": larch_m2(spec)}, None
    else:
        theory = {"m2": gqarch_m2(spec)}
        curve = None
        if spec.coeffs.tail_kind == "power_law" and spec.a != 0:
            lm = lm_asymptotics(spec)
            theory["long_memory"] = lm.to_dict()
            curve = lm_cov_curve(lm, t)
    if isinstance(spec, Garch11Spec):
        theory["m2"] = garch_m2(spec)
    _dump(MomentReport(spec_to_dict(spec), theory).to_dict())
    if curve is not None and args.out is not None:
        _write_curve(_out_dir(args) / "rho.csv", t, curve)


def cmd_leverage(args, doc):
    spec = _model(args, doc)
    if isinstance(spec, AsymGarch11Spec):
        spec = embed_asym_in_gqarch(spec)
    if not isinstance(spec, GqarchSpec):
        raise UsageError("leverage needs a gqarch or asym_garch11 model")
    verdict = classify_signs(spec, args.k)
    sol = solve_leverage(spec, T=args.T)
    if args.out is not None:
        _write_curve(_out_dir(args) / "leverage.csv", np.arange(1, sol.T + 1), sol.h,
                     header=("t", "h_t"))
    _dump({"model": spec_to_dict(spec), "classification": verdict.value, "k": args.k,
           "solution": sol.to_dict(), "h": sol.h[:args.k].tolist(),
           "norm_bound": leverage_norm_bound(spec)})


def _read_series(path):
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if rows and not _is_number(rows[0][-1]):
        header = [h.strip() for h in rows[0]]
        col = header.index("r") if "r" in header else len(header) - 1
        rows = rows[1:]
    else:
        col = len(rows[0]) - 1 if rows else 0
    try:
        return np.array([float(row[col]) for row in rows])
    except (ValueError, IndexError) as exc:
        raise UsageError(f"malformed series file {path}: {exc}") from exc


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def cmd_estimate(args, doc):
    x = _read_series(args.input)
    opts = FitOptions(window=args.window)
    res = qmle_fit(x, args.family, opts)
    out = res.to_dict()
    if args.out is not None:
        (_out_dir(args) / "fit.json").write_text(json.dumps(out, indent=2, sort_keys=True))
    _dump(out)


def cmd_mc(args, doc):
    if args.fixture:
        doc = {**doc, "model": spec_to_dict(sp500_fixture(args.fixture))}
    if "model" not in doc or "simulation" not in doc:
        raise UsageError("mc needs a config with 'model' and 'simulation' sections")
    try:
        config = ExperimentConfig.from_dict(doc, seed=args.seed,
                                            output_dir=None if args.out is None else str(args.out))
    except TypeError as exc:
        raise UsageError(f"bad config: {exc}") from exc
    report = run_experiment(config)
    print(report.to_json())


def cmd_hist(args, doc):
    spec = _model(args, doc)
    if not isinstance(spec, GqarchSpec):
        raise UsageError("hist needs a gqarch model")
    cfg = _sim_config(args, doc, args.n)
    out = _out_dir(args)
    dens = histogram_export(spec, args.gammas, cfg, _innov(doc), output_dir=out)
    _dump({str(g): {"quartile_skewness": sk, "file": f"density_gamma_{g:g}.csv"}
           for g, (_, _, sk) in dens.items()})


COMMANDS = {"simulate": cmd_simulate, "check": cmd_check, "moments": cmd_moments,
            "leverage": cmd_leverage, "estimate": cmd_estimate, "mc": cmd_mc,
            "hist": cmd_hist}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc = _load(args)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            COMMANDS[args.command](args, doc)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gqarch: error: {exc}", file=sys.stderr)
        return 2
    except (GqarchError, ValueError) as exc:
        name = getattr(exc, "condition", None)
        prefix = f"condition {name} violated: " if name else ""
        print(f"gqarch: {prefix}{exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
