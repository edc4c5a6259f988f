"""Command-line front end: ``mvcable <subcommand> --config scenario.toml``.

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
Failures print a one-line JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import ConfigError, ScenarioConfig, load_config, parse_range
from .csvio import DataError, write_csv, write_trace
from .fleet import CurrentProfile, MissingLoadingData, simulate_replace_all
from .loading import (
    acceleration_in_time,
    effective_acceleration,
    effective_age_seasonal,
    effective_age_transition,
)
from .maintenance import DegeneratePopulation, assess_strategies, shortcut_run_to_failure
from .reliability import CoverageError, WeibullParams, effective_age
from .thermal import Insulation, ModelError, NonConvergence

OUT_ENV = "MVCABLE_OUT"

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


def _floats(text: str):
    if ":" in text:
        return parse_range(text)
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError("query", f"expected comma-separated numbers or start:stop:step, got {text!r}") from None


def _output_dir(args, cfg: ScenarioConfig) -> Path:
    if args.out:
        return Path(args.out)
    if os.environ.get(OUT_ENV):
        return Path(os.environ[OUT_ENV])
    return cfg.output_dir


# -- effective age and failure rate -------------------------------------------------------


def _ages_times(args, cfg):
    ages = _floats(args.age) if args.age else cfg.query.ages
    times = _floats(args.time) if args.time else cfg.query.times
    if not ages or not times:
        raise ConfigError("query", "need ages and times (--age/--time or a [query] table)", cfg.path, "query")
    return ages, times


def _rate_and_age(cfg: ScenarioConfig, cable: Insulation, a: float, t: float):
    """Per scenario ``(name, A(a,t), r(t))`` for the configured loading source."""
    spec = cfg.cables[cable]
    src = cfg.loading
    if src.kind == "trajectory":
        traj = src.trajectory.trajectory(spec) if isinstance(src.trajectory, CurrentProfile) else src.trajectory
        return [("base", effective_age(traj, a, t, spec), float(traj.rate_at(t, spec)))]
    if src.kind == "distribution":
        r = effective_acceleration(src.distribution, spec)
        return [("base", a * r, r)]
    if src.kind == "seasonal":
        sched = src.schedule
        acc = sched.accelerations(spec)
        k = int(np.clip(np.searchsorted(sched.bounds, t, side="right") - 1, 0, acc.size - 1))
        return [("base", effective_age_seasonal(sched, a, t, spec), float(acc[k]))]
    if src.kind == "transition":
        return [(name, effective_age_transition(s, a, t, spec), acceleration_in_time(s, t, spec))
                for name, s in src.scenarios.items()]
    raise ConfigError("loading-source", "effective-age and failure-rate need a trajectory, distribution, "
                      "seasonal or transition loading", cfg.path, "loading.kind")


def cmd_effective_age(args, cfg):
    ages, times = _ages_times(args, cfg)
    cable = cfg.default_cable()
    rows = []
    for a in ages:
        for t in times:
            for name, A, _ in _rate_and_age(cfg, cable, a, t):
                rows.append((name, cable.value, a, t, A))
    return {"effective_age.csv": (("scenario", "cable", "age_years", "time_years", "effective_age_years"), rows)}


def cmd_failure_rate(args, cfg):
    ages, times = _ages_times(args, cfg)
    cable = cfg.default_cable()
    p: WeibullParams = cfg.params[cable]
    rows = []
    for a in ages:
        for t in times:
            for name, A, r in _rate_and_age(cfg, cable, a, t):
                lam = (p.beta / p.eta_hat_r) * (A / p.eta_hat_r) ** (p.beta - 1.0) * r
                rows.append((name, cable.value, a, t, A, r, lam))
    header = ("scenario", "cable", "age_years", "time_years", "effective_age_years", "acceleration", "failure_rate_per_year")
    return {"failure_rate.csv": (header, rows)}


# -- shortcut assessment ------------------------------------------------------------------------


def _require_transition(cfg):
    if cfg.loading.kind != "transition":
        raise ConfigError("loading-source", "this subcommand needs a transition loading source", cfg.path, "loading.kind")


def _assess_cell(cfg, cable, name):
    scen = cfg.loading.scenarios[name]
    spec = cfg.cables[cable]
    r0 = effective_acceleration(scen.rho0, spec)
    r1 = effective_acceleration(scen.rho1, spec)
    pop = cfg.populations.get(cable)
    if pop is None:
        raise ConfigError("config-missing", f"no population for {cable.value}", cfg.path, f"population.{cable.value}")
    rep = cfg.policy["replace-all"]
    if rep is None:
        raise ConfigError("config-missing", "assess needs policy.a_R", cfg.path, "policy.a_R")
    return assess_strategies(cable.value, name, r0, r1, cfg.params[cable], pop, rep.a_R, cfg.policy["preventive"])


def cmd_assess(args, cfg):
    _require_transition(cfg)
    results = [_assess_cell(cfg, c, n) for c in cfg.cables for n in cfg.loading.scenarios]
    long_rows, strategies = [], ("run-to-failure", "replace-all", "preventive")
    for res in results:
        for s in strategies:
            long_rows.append((res.cable, res.scenario, s, res.ratios[s], res.r0, res.r1, res.beta, res.mu, res.F0,
                              res.scheduled))
    cols = [f"{r.cable}/{r.scenario}" for r in results]
    table = [(s, *[r.ratios[s] for r in results]) for s in strategies]
    out = {
        "assess.csv": (("cable", "scenario", "strategy", "ratio", "r0", "r1", "beta", "mu", "F0", "scheduled"),
                       long_rows),
        "assess_table.csv": (("strategy", *cols), table),
    }
    if args.beta_sweep:
        out.update(cmd_sweep(args, cfg))
    return out


def cmd_sweep(args, cfg):
    _require_transition(cfg)
    betas = parse_range(args.beta_sweep, "--beta-sweep") if args.beta_sweep else cfg.sweep
    if not betas:
        raise ConfigError("config-missing", "need --beta-sweep start:stop:step or a [sweep] table", cfg.path, "sweep")
    cells = []
    for c in cfg.cables:
        for n, scen in cfg.loading.scenarios.items():
            spec = cfg.cables[c]
            cells.append((f"{c.value}/{n}", effective_acceleration(scen.rho0, spec), effective_acceleration(scen.rho1, spec)))
    rows = [(b, *[shortcut_run_to_failure(r0, r1, b) for _, r0, r1 in cells]) for b in betas]
    return {"beta_sweep.csv": (("beta", *[name for name, _, _ in cells]), rows)}


# -- Monte Carlo ---------------------------------------------------------------------------------------


def _simulate_one(job):
    assets, simcfg, specs, loadings, params = job
    return simulate_replace_all(assets, simcfg, specs, loadings, params)


def cmd_simulate(args, cfg):
    if cfg.loading.kind != "registry":
        raise ConfigError("loading-source", "simulate needs a registry loading source", cfg.path, "loading.kind")
    seeds = cfg.seeds(args.seed)
    jobs = [(cfg.loading.assets, cfg.simulation_config(s), cfg.cables, cfg.loading.loadings, cfg.params) for s in seeds]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            traces = list(ex.map(_simulate_one, jobs))
    else:
        traces = [_simulate_one(j) for j in jobs]
    return {"__traces__": list(zip(seeds, traces))}


def cmd_validate(args, cfg):
    src = cfg.loading
    summary = {
        "status": "ok",
        "config": str(cfg.path),
        "cables": {k.value: v.name for k, v in cfg.cables.items()},
        "loading": src.kind,
        "scenarios": sorted(src.scenarios),
        "assets": len(src.assets),
        "populations": sorted(k.value for k in cfg.populations),
    }
    print(json.dumps(summary, sort_keys=True))
    return {}


COMMANDS = {
    "effective-age": cmd_effective_age,
    "failure-rate": cmd_failure_rate,
    "assess": cmd_assess,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mvcable", description="MV cable thermal ageing and maintenance assessment")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="scenario TOML file")
        p.add_argument("--out", help=f"output directory (overrides ${OUT_ENV} and the config)")
        p.add_argument("--seed", type=int, help="first simulation seed")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for independent seeds")
        if name in ("effective-age", "failure-rate"):
            p.add_argument("--age", help="ages in years: a,b,c or start:stop:step")
            p.add_argument("--time", help="times in years: a,b,c or start:stop:step")
        if name in ("assess", "sweep"):
            p.add_argument("--beta-sweep", help="start:stop:step grid of Weibull shapes (inclusive)")
    return ap


def _write_outputs(outputs, outdir: Path):
    written = []
    for name, payload in outputs.items():
        if name == "__traces__":
            multi = len(payload) > 1
            summary = []
            for seed, trace in payload:
                d = outdir / f"seed_{seed}" if multi else outdir
                written += write_trace(d, trace)
                summary.append((seed, trace.replacements[0], float(np.mean(trace.replacements))))
            if multi:
                written.append(write_csv(outdir / "seeds.csv", ("seed", "N0", "mean_N"), summary))
            continue
        header, rows = payload
        written.append(write_csv(outdir / name, header, rows))
    return written


def _fail(exit_code, category, exc, **extra):
    info = {"status": "error", "category": category, "exit_code": exit_code,
            "code": getattr(exc, "code", type(exc).__name__), "message": getattr(exc, "message", str(exc))}
    for k in ("file", "line", "key"):
        v = getattr(exc, k, None)
        if v is not None:
            info[k] = v
    info.update(extra)
    print(json.dumps(info, sort_keys=True), file=sys.stderr)
    return exit_code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        return _fail(EXIT_CONFIG, "config", ConfigError("simulation-seed", "--seed must lie in [0, 2^64)"))
    try:
        cfg = load_config(args.config)
        # overflow or invalid arithmetic is a numeric failure, not a silent inf/nan in the output
        with np.errstate(over="raise", invalid="raise", divide="raise"):
            outputs = COMMANDS[args.command](args, cfg)
        written = _write_outputs(outputs, _output_dir(args, cfg)) if outputs else []
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except (DataError, MissingLoadingData, CoverageError) as exc:
        return _fail(EXIT_DATA, "data", exc)
    except (NonConvergence, DegeneratePopulation, FloatingPointError, OverflowError) as exc:
        return _fail(EXIT_NUMERIC, "numeric", exc)
    except ModelError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    for p in written:
        print(p)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
