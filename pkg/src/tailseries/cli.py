"""Command-line interface.

One executable with six subcommands: ``simulate``, ``estimate``, ``theory``,
``extremal``, ``diagnose``, ``experiment``. Results go to stdout (or files
under ``--out``); messages go to stderr. Exit codes: 0 success, 2 usage or
configuration error, 3 numerical/domain error. Every run is a pure function
of its flags: seeds default to a fixed constant, never the clock.

A ``--config file.json`` may supply any long-flag value by name (hyphens as
underscores); explicit flags win, unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import diagnostics, estimators, experiments, extremal, serialize, simulate, theory
from .distributions import InnovationSpec
from .errors import ConfigurationError, DomainError, NoRootError, SimulationError, TailSeriesError
from .rng import RngState

DEFAULT_SEED = experiments.DEFAULT_SEED

_RMSE_RATIO_MATCH_TOL = 0.005


def _read_series(path: str) -> np.ndarray:
    """Series from a CSV with an ``x`` column (as written by ``simulate``) or
    a headerless single column."""
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ConfigurationError(f"empty input file {path}")
    header = text[0].split(",")
    try:
        float(header[-1])
        col, start = len(header) - 1, 0
    except ValueError:
        if "x" not in header:
            raise ConfigurationError(f"no 'x' column in {path} header {header}")
        col, start = header.index("x"), 1
    try:
        return np.array([float(line.split(",")[col]) for line in text[start:]])
    except (ValueError, IndexError) as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}")


def _load_json_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON in {path}: {exc}")


def _emit(payload: dict, out: str | None):
    text = serialize.dump_json(payload)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommand implementations -------------------------------------------


def _cmd_simulate(args) -> int:
    model_obj = args.model
    if isinstance(model_obj, str):
        model_obj = _load_json_file(model_obj)
    if model_obj is None:
        raise ConfigurationError("a model is required (--model file.json)")
    model = simulate.SeriesModel.from_json(model_obj)
    series = simulate.simulate_series(model, args.n, RngState(args.seed))
    csv = serialize.dump_csv(["t", "x"], zip(range(1, args.n + 1), series))
    if args.out:
        Path(args.out).write_text(csv)
    else:
        sys.stdout.write(csv)
    return 0


def _cmd_estimate(args) -> int:
    series = _read_series(args.input)
    n = series.size
    flags = []
    payload = {"schema_version": serialize.SCHEMA_VERSION, "method": args.method,
               "k": args.k, "n": n}
    if args.method == "hill":
        sample = np.abs(series) if args.abs else series
        gamma = estimators.hill(sample, args.k)
        payload.update({"estimate": gamma, "gamma_hat": gamma})
    elif args.method == "weissman-direct":
        target = estimators.QuantileTarget(t=args.t, k=args.k, n=n)
        gamma = estimators.hill(np.abs(series) if args.abs else series, args.k)
        est = estimators.weissman_direct(series, target, use_abs=args.abs)
        payload.update({"estimate": est, "gamma_hat": gamma, "t": args.t})
    else:  # weissman-model
        target = estimators.QuantileTarget(t=args.t, k=args.k, n=n)
        fit = estimators.weissman_model_ar1_fit(series, target, use_abs=args.abs,
                                                center=not args.no_center)
        gamma = fit.gamma_hat
        if fit.clamped:
            flags.append("clamped")
        payload.update({"estimate": fit.estimate, "gamma_hat": fit.gamma_hat,
                        "phi_hat": fit.phi_hat, "t": args.t})
    if gamma == 0.0:
        flags.append("zero_gamma")
    payload["flags"] = flags
    _emit(payload, args.out)
    return 0


def _cmd_theory(args) -> int:
    phi, gamma, p = args.phi, args.gamma, args.p
    payload = {"schema_version": serialize.SCHEMA_VERSION, "quantity": args.quantity,
               "phi": phi, "gamma": gamma}
    if args.quantity == "tail-ratio":
        payload["p"] = p
        payload["value"] = theory.tail_ratio_ar1(phi, gamma, p)
    elif args.quantity == "hill-avar":
        payload["value"] = theory.hill_avar_ar1(phi, gamma)
    elif args.quantity == "rmse-ratio":
        value = theory.rmse_ratio_ar1(phi, gamma)
        payload["value"] = value
        reported = theory.RMSE_RATIO_REPORTED.get((abs(phi), gamma))
        if reported is not None:
            payload["paper_reported"] = reported
            payload["matches_paper_reported"] = bool(abs(value - reported) <= _RMSE_RATIO_MATCH_TOL)
    else:  # second-order
        payload["p"] = p
        seq = theory.CoefficientSequence.ar1(phi, gamma)
        tail = theory.shifted_pareto_tail(gamma, p)
        d_psi, big_d = theory.second_order_constants(seq, gamma, tail)
        payload.update({"tail_constants": {"c": tail.c, "d": tail.d,
                                           "c_tilde": tail.c_tilde, "d_tilde": tail.d_tilde},
                        "d_psi": d_psi, "D_psi": big_d})
    _emit(payload, args.out)
    return 0


def _cmd_extremal(args) -> int:
    driver = simulate.SREDriver.from_json(_load_json_file(args.driver))
    kappa = simulate.solve_kappa(driver) if args.kappa == "auto" else float(args.kappa)
    ensemble = simulate.simulate_walks(driver, kappa, args.horizon, args.paths,
                                       RngState(args.seed))
    payload = {"schema_version": serialize.SCHEMA_VERSION, "quantity": args.quantity,
               "kappa": kappa, "paths": args.paths, "horizon": args.horizon,
               "seed": args.seed}
    if args.quantity == "theta":
        theta, se = extremal.extremal_index(ensemble)
        payload.update({"theta": theta, "stderr": se})
    elif args.quantity == "cluster":
        summary = extremal.cluster_size_probs(ensemble, args.kmax)
        payload.update({
            "theta": summary.theta, "theta_stderr": summary.mc_stderr["theta"],
            "theta_k": summary.theta_k, "theta_k_stderr": summary.mc_stderr["theta_k"],
            "pi_k": summary.pi_k, "pi_k_stderr": summary.mc_stderr["pi_k"],
            "mean_cluster_size": summary.mean_cluster_size(),
            "horizon_remainder": summary.horizon_remainder,
        })
    elif args.quantity == "hill-avar":
        result = extremal.hill_avar_sre(ensemble)
        payload.update({"variance": result.variance, "stderr": result.stderr,
                        "tail_bound": result.tail_bound})
    else:  # joint
        thresholds = tuple(float(v) for v in args.x.split(","))
        query = extremal.JointExceedanceQuery(x=thresholds, mode=args.mode)
        limit, se = extremal.joint_exceedance(ensemble, query)
        payload.update({"x": list(thresholds), "mode": args.mode,
                        "limit": limit, "stderr": se})
    _emit(payload, args.out)
    return 0


_TEST_NAMES = {"tp": "turning-point", "ds": "difference-sign", "lb": "portmanteau"}


def _cmd_diagnose(args) -> int:
    series = _read_series(args.input)
    wanted = args.tests.split(",")
    unknown = set(wanted) - set(_TEST_NAMES)
    if unknown:
        raise ConfigurationError(f"unknown tests {sorted(unknown)}; choose from tp,ds,lb")
    reports = []
    for short in wanted:
        if short == "tp":
            rep = diagnostics.turning_point_test(series)
        elif short == "ds":
            rep = diagnostics.difference_sign_test(series)
        else:
            rep = diagnostics.portmanteau_test(series, args.h)
        entry = {"test": _TEST_NAMES[short], "statistic": rep.statistic,
                 "z_or_q": rep.z_or_q, "p_value": rep.p_value,
                 "reject_at_5pct": rep.reject_at_5pct}
        if short == "lb":
            entry["h"] = args.h
        reports.append(entry)
    _emit({"schema_version": serialize.SCHEMA_VERSION, "reports": reports}, args.out)
    return 0


def _cmd_experiment(args) -> int:
    out = Path(args.out)
    experiments.run_preset(args.preset, out, replicates=args.replicates,
                           seed=args.seed, scale=args.scale, workers=args.workers)
    files = sorted(str(p.relative_to(out)) for p in out.rglob("*") if p.is_file())
    _emit({"schema_version": serialize.SCHEMA_VERSION, "preset": args.preset,
           "out": str(out), "scale": args.scale, "seed": args.seed,
           "files": files}, None)
    return 0


# --- parser and dispatch ----------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailseries",
        description="Extreme value analysis for heavy-tailed time series.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate a series to CSV (header t,x)")
    sim.add_argument("--model", help="model JSON file")
    sim.add_argument("--n", type=int, help="series length (default 2000)")
    sim.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    sim.add_argument("--out", help="output CSV path (default stdout)")
    sim.add_argument("--config", help="JSON file with flag values")

    est = sub.add_parser("estimate", help="tail/quantile estimate from a CSV series")
    est.add_argument("--input", help="input CSV (simulate format)")
    est.add_argument("--method", choices=["hill", "weissman-direct", "weissman-model"])
    est.add_argument("--k", type=int, help="number of upper order statistics")
    est.add_argument("--t", type=float, help="exceedance probability (default 0.001)")
    est.add_argument("--abs", action="store_true", default=None,
                     help="Hill step on absolute values")
    est.add_argument("--no-center", action="store_true", default=None,
                     help="uncentered AR(1) fit")
    est.add_argument("--out", help="output JSON path (default stdout)")
    est.add_argument("--config", help="JSON file with flag values")

    theo = sub.add_parser("theory", help="closed-form tail quantities for AR(1)")
    theo.add_argument("quantity",
                      choices=["tail-ratio", "hill-avar", "rmse-ratio", "second-order"])
    theo.add_argument("--phi", type=float, help="AR(1) coefficient")
    theo.add_argument("--gamma", type=float, help="extreme value index")
    theo.add_argument("--p", type=float, help="right-tail balance (default 0.5)")
    theo.add_argument("--out", help="output JSON path (default stdout)")
    theo.add_argument("--config", help="JSON file with flag values")

    ext = sub.add_parser("extremal", help="extremal-dependence quantities of an SRE")
    ext.add_argument("quantity", choices=["theta", "cluster", "hill-avar", "joint"])
    ext.add_argument("--driver", help="driver JSON file")
    ext.add_argument("--kappa", help="'auto' or a positive number (default auto)")
    ext.add_argument("--paths", type=int, help="Monte Carlo paths (default 100000)")
    ext.add_argument("--horizon", type=int, help="walk horizon J (default 200)")
    ext.add_argument("--kmax", type=int, help="largest cluster size (default 20)")
    ext.add_argument("--x", help="comma-separated thresholds for joint queries")
    ext.add_argument("--mode", choices=["all", "some"], help="joint mode (default all)")
    ext.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    ext.add_argument("--out", help="output JSON path (default stdout)")
    ext.add_argument("--config", help="JSON file with flag values")

    dia = sub.add_parser("diagnose", help="residual randomness tests on a CSV series")
    dia.add_argument("--input", help="input CSV (simulate format)")
    dia.add_argument("--tests", help="comma list from tp,ds,lb (default all)")
    dia.add_argument("--h", type=int, help="portmanteau lags (default 20)")
    dia.add_argument("--out", help="output JSON path (default stdout)")
    dia.add_argument("--config", help="JSON file with flag values")

    exp = sub.add_parser("experiment", help="run a named study preset")
    exp.add_argument("preset", choices=list(experiments.PRESETS))
    exp.add_argument("--replicates", type=int, help="Monte Carlo replicates")
    exp.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    exp.add_argument("--out", help="output directory (required)")
    exp.add_argument("--scale", choices=["desk", "paper"], help="ground-truth protocol")
    exp.add_argument("--workers", type=int, help="parallel workers (default 1)")
    exp.add_argument("--config", help="JSON file with flag values")
    return parser


_DEFAULTS = {
    "simulate": {"n": 2000, "seed": DEFAULT_SEED, "out": None, "model": None},
    "estimate": {"t": 0.001, "abs": False, "no_center": False, "out": None,
                 "input": None, "method": None, "k": None},
    "theory": {"p": 0.5, "phi": None, "gamma": None, "out": None},
    "extremal": {"kappa": "auto", "paths": 100_000, "horizon": 200, "kmax": 20,
                 "x": None, "mode": "all", "seed": DEFAULT_SEED, "out": None,
                 "driver": None},
    "diagnose": {"tests": "tp,ds,lb", "h": 20, "out": None, "input": None},
    "experiment": {"replicates": None, "seed": DEFAULT_SEED, "out": None,
                   "scale": "desk", "workers": 1},
}

_REQUIRED = {
    "simulate": ["model"],
    "estimate": ["input", "method", "k"],
    "theory": ["phi", "gamma"],
    "extremal": ["driver"],
    "diagnose": ["input"],
    "experiment": ["out"],
}

_COERCE = {
    "simulate": {"n": int, "seed": int},
    "estimate": {"k": int, "t": float, "abs": bool, "no_center": bool},
    "theory": {"phi": float, "gamma": float, "p": float},
    "extremal": {"paths": int, "horizon": int, "kmax": int, "seed": int},
    "diagnose": {"h": int},
    "experiment": {"seed": int, "workers": int},
}

_HANDLERS = {
    "simulate": _cmd_simulate, "estimate": _cmd_estimate, "theory": _cmd_theory,
    "extremal": _cmd_extremal, "diagnose": _cmd_diagnose, "experiment": _cmd_experiment,
}


def _merge_config(args) -> None:
    defaults = _DEFAULTS[args.command]
    if getattr(args, "config", None):
        cfg = _load_json_file(args.config)
        known = set(defaults)
        for key, value in cfg.items():
            dest = key.replace("-", "_")
            if dest not in known:
                raise ConfigurationError(f"unknown config key {key!r} for "
                                         f"{args.command}; known: {sorted(known)}")
            if getattr(args, dest, None) is None:
                setattr(args, dest, value)
    for dest, value in defaults.items():
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)
    for dest, kind in _COERCE[args.command].items():
        value = getattr(args, dest, None)
        if value is not None:
            try:
                setattr(args, dest, kind(value))
            except (TypeError, ValueError):
                raise ConfigurationError(f"option {dest!r} must be a {kind.__name__}, "
                                         f"got {value!r}")
    missing = [name for name in _REQUIRED[args.command]
               if getattr(args, name, None) is None]
    if missing:
        raise ConfigurationError(
            f"missing required option(s) for {args.command}: "
            + ", ".join("--" + m.replace("_", "-") for m in missing))
    if args.command == "extremal" and args.quantity == "joint" and args.x is None:
        raise ConfigurationError("joint queries need --x, e.g. --x 1,1")


def parse_and_dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _merge_config(args)
        return _HANDLERS[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, SimulationError, NoRootError, TailSeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
