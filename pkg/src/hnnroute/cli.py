"""Command line entry point: ``hnnroute {simulate,tune,solve,discover}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from .baselines import EnumerationGuardError
from .core import DisjointnessMode, InvalidInput
from .experiments import (
    FLOAT_FMT, ScenarioConfig, build_tuning_suite, format_report, rows_to_csv, run_scenario,
    sample_network, solve_instance_file, summary_to_csv,
)
from .hnn import REFERENCE_PARAMS, TUNED_PARAMS, HnnParams
from .mobility import MobilityConfig
from .pso import PsoConfig, tune

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("hnnroute")


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _load_json(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: line {exc.lineno}: {exc.msg}") from None


def _load_params(args) -> HnnParams:
    if args.params:
        try:
            return HnnParams(**_load_json(args.params))
        except TypeError as exc:
            raise InvalidInput(f"{args.params}: {exc}") from None
    return REFERENCE_PARAMS if args.preset == "reference" else TUNED_PARAMS


def cmd_simulate(args) -> int:
    config = ScenarioConfig.load(args.config)
    if args.replications is not None:
        config = replace(config, replications=args.replications)
    config.validate()
    rows = run_scenario(config)
    _write(args.out, rows_to_csv(rows, config))
    if args.summary:
        _write(args.summary, summary_to_csv(rows, config))
    return EXIT_OK


TUNE_SUITE_KEYS = {"n_instances", "ranges", "mode", "runs_per_eval", "seed", "ttl", "cap",
                   "warmup", "max_iters", "mobility"}


def cmd_tune(args) -> int:
    data = _load_json(args.config) if args.config else {}
    unknown = set(data) - {"suite", "pso"}
    if unknown:
        raise InvalidInput(f"unknown tuning config keys: {sorted(unknown)}")
    suite_cfg = dict(data.get("suite", {}))
    bad = set(suite_cfg) - TUNE_SUITE_KEYS
    if bad:
        raise InvalidInput(f"unknown suite keys: {sorted(bad)}")
    if "mobility" in suite_cfg:
        suite_cfg["mobility"] = MobilityConfig(**suite_cfg["mobility"])
    if "mode" in suite_cfg:
        suite_cfg["mode"] = DisjointnessMode.parse(suite_cfg["mode"])
    try:
        pso_cfg = PsoConfig(**data.get("pso", {}))
        suite = build_tuning_suite(**suite_cfg)
    except TypeError as exc:
        raise InvalidInput(str(exc)) from None
    res = tune(suite, pso_cfg)
    report = {
        "params": res.params.to_dict(),
        "fitness": res.fitness,
        "reference_fitness": res.reference_fitness,
        "pso_iterations": res.iterations,
        "pso_seed": res.seed,
        "suite_seeds": res.suite_seeds,
        "suite_instances": len(suite.instances),
        "runs_per_eval": suite.runs_per_eval,
    }
    _write(args.out, json.dumps(report, indent=2) + "\n")
    if args.trace:
        lines = ["iteration,global_best_fitness"]
        lines += [f"{k},{FLOAT_FMT.format(v)}" for k, v in enumerate(res.trace)]
        _write(args.trace, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    params = _load_params(args)
    params.check()
    report = solve_instance_file(args.instance, params, DisjointnessMode.parse(args.mode), args.seed)
    _write(args.out, format_report(report))
    return EXIT_OK


def cmd_discover(args) -> int:
    mob = MobilityConfig(node_count=args.nodes)
    sample = sample_network(mob, args.range, args.seed, ttl=args.ttl, cap=args.cap,
                            warmup=args.warmup, source=args.source, destination=args.destination)
    _write(args.out, sample.cache.to_json() + "\n")
    if args.links:
        with open(args.links, "w", newline="") as fh:
            sample.snapshot.write_csv(fh)
    if sample.cache.truncated:
        log.warning("route cache truncated at %d of %d paths", args.cap, sample.cache.found)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hnnroute", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a scenario config (JSON)")
    s.add_argument("config")
    s.add_argument("-o", "--out", default="-", help="per-row CSV (default stdout)")
    s.add_argument("--summary", help="per-sweep-point summary CSV")
    s.add_argument("--replications", type=int, help="override config replications")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("tune", help="PSO-tune the HNN parameters on a generated suite")
    t.add_argument("config", nargs="?", help="JSON with optional 'suite' and 'pso' sections")
    t.add_argument("-o", "--out", default="-", help="tuning report JSON")
    t.add_argument("--trace", help="CSV of iteration -> global best fitness")
    t.set_defaults(func=cmd_tune)

    v = sub.add_parser("solve", help="solve one path-set instance file")
    v.add_argument("instance")
    v.add_argument("--mode", default="link", choices=["link", "node"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--params", help="JSON file with HnnParams fields")
    v.add_argument("--preset", default="tuned", choices=["tuned", "reference"])
    v.add_argument("-o", "--out", default="-")
    v.set_defaults(func=cmd_solve)

    d = sub.add_parser("discover", help="dump one snapshot's route cache as an instance file")
    d.add_argument("--nodes", type=int, default=30)
    d.add_argument("--range", type=float, default=250.0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--ttl", type=int, default=3)
    d.add_argument("--cap", type=int, default=64)
    d.add_argument("--warmup", type=float, default=100.0)
    d.add_argument("--source", type=int)
    d.add_argument("--destination", type=int)
    d.add_argument("-o", "--out", default="-")
    d.add_argument("--links", help="also write the link snapshot CSV here")
    d.set_defaults(func=cmd_discover)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except EnumerationGuardError as exc:
        # the input parsed fine; the instance is just too large to solve exactly
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (InvalidInput, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
