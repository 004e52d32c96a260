"""Seeded scenario runs, tuning suites and single-instance reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from . import baselines, hnn
from .baselines import SelectorKind
from .core import DisjointnessMode, InvalidInput, PathSetInstance, is_disjoint_set, load_instance
from .discovery import DEFAULT_CAP, RouteCache, discover_paths
from .hnn import HnnParams, TUNED_PARAMS
from .links import LinkSnapshot, build_link_snapshot
from .metrics import PathSetResult, link_break_times, paths_lifetime
from .mobility import MobilityConfig, MobilityState, advance, init_waypoint_state, snapshot_kinematics
from .pso import TuningSuite

FLOAT_FMT = "{:.9g}"

ROW_COLUMNS = [
    "scenario", "replication", "seed", "R", "node_count", "mode", "selector",
    "set_reliability", "num_paths", "lifetime_s", "iterations", "truncated",
    "candidates", "selected",
]


@dataclass
class ScenarioConfig:
    scenario_id: str = "scenario1"
    mobility: MobilityConfig = field(default_factory=MobilityConfig)
    transmission_ranges: list = field(default_factory=lambda: [150.0, 200.0, 250.0, 300.0])
    node_counts: list = field(default_factory=lambda: [30])
    ttl: int = 3
    cap: int = DEFAULT_CAP
    mode: DisjointnessMode = DisjointnessMode.LINK
    selectors: list = field(default_factory=lambda: [
        SelectorKind.HNN, SelectorKind.ORACLE, SelectorKind.GREEDY, SelectorKind.SHORTEST_PATH])
    hnn_params: HnnParams = TUNED_PARAMS
    replications: int = 20
    base_seed: int = 2012
    dt_sim: float = 0.1
    horizon: float = 600.0
    warmup: float = 100.0
    oracle_max_paths: int = DEFAULT_CAP

    def __post_init__(self):
        self.mode = DisjointnessMode.parse(self.mode)
        self.selectors = [SelectorKind.parse(s) for s in self.selectors]
        self.transmission_ranges = [float(r) for r in self.transmission_ranges]
        self.node_counts = [int(n) for n in self.node_counts]

    def validate(self) -> None:
        if self.replications < 1:
            raise InvalidInput("replications must be at least 1")
        if not self.transmission_ranges or not self.node_counts:
            raise InvalidInput("sweeps must be non-empty")
        if len(self.transmission_ranges) > 1 and len(self.node_counts) > 1:
            raise InvalidInput("sweep either transmission range or node count, not both")
        if any(r <= 0 for r in self.transmission_ranges):
            raise InvalidInput("transmission ranges must be positive")
        if any(n < 2 for n in self.node_counts):
            raise InvalidInput("node counts must be at least 2")
        if self.ttl < 1 or self.cap < 1:
            raise InvalidInput("ttl and cap must be at least 1")
        if not self.selectors:
            raise InvalidInput("at least one selector is required")
        if self.dt_sim <= 0 or self.horizon < 0 or self.warmup < 0:
            raise InvalidInput("dt_sim must be positive; horizon and warmup non-negative")
        self.hnn_params.check()

    def sweep_points(self) -> list[tuple[float, int]]:
        return [(r, n) for n in self.node_counts for r in self.transmission_ranges]

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["mobility"] = asdict(self.mobility)
        d["mode"] = self.mode.value
        d["selectors"] = [s.value for s in self.selectors]
        d["hnn_params"] = self.hnn_params.to_dict()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidInput(f"unknown config keys: {sorted(unknown)}")
        try:
            if "mobility" in data:
                data["mobility"] = MobilityConfig(**data["mobility"])
            if "hnn_params" in data:
                data["hnn_params"] = HnnParams(**data["hnn_params"])
        except TypeError as exc:
            raise InvalidInput(str(exc)) from None
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"{path}: line {exc.lineno}: {exc.msg}") from None
        return cls.from_dict(data)


@dataclass
class ResultRow:
    scenario: str
    replication: int
    seed: int
    R: float
    node_count: int
    mode: str
    selector: str
    set_reliability: float
    num_paths: int
    lifetime_s: float
    iterations: int
    truncated: bool
    candidates: int = 0
    selected: tuple = ()

    def cells(self) -> list[str]:
        out = []
        for name in ROW_COLUMNS:
            v = getattr(self, name)
            if isinstance(v, bool):
                out.append("1" if v else "0")
            elif isinstance(v, float):
                out.append(FLOAT_FMT.format(v))
            elif isinstance(v, tuple):
                out.append(" ".join(str(i) for i in v))
            else:
                out.append(str(v))
        return out


def replication_seed(base_seed: int, node_count: int, replication: int) -> int:
    """Seed for one replication.

    The transmission range is deliberately not part of the key, so every
    range in a sweep sees the same node trajectories and endpoint pair.
    """
    ss = np.random.SeedSequence([base_seed & 0xFFFFFFFFFFFFFFFF, node_count, replication])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class NetworkSample:
    state: MobilityState
    snapshot: LinkSnapshot
    cache: RouteCache
    hnn_seed: int


def sample_network(mobility: MobilityConfig, r: float, seed: int, *, ttl: int = 3,
                   cap: int = DEFAULT_CAP, warmup: float = 100.0,
                   source: int | None = None, destination: int | None = None) -> NetworkSample:
    """Warm up a random-waypoint network, take a link snapshot and flood one RREQ."""
    mob_seed, pair_seed = np.random.SeedSequence(seed).generate_state(2, np.uint64)
    state = init_waypoint_state(replace(mobility, seed=int(mob_seed)))
    state = advance(state, warmup)
    snap = build_link_snapshot(snapshot_kinematics(state), r, state.time)
    rng = np.random.default_rng(int(pair_seed))
    s, d = (int(v) for v in rng.choice(mobility.node_count, size=2, replace=False))
    if source is not None:
        s = source
    if destination is not None:
        d = destination
    cache = discover_paths(snap, s, d, ttl, cap)
    return NetworkSample(state, snap, cache, int(rng.integers(0, 2**63)))


def _select(kind: SelectorKind, inst: PathSetInstance, params: HnnParams, seed: int,
            oracle_max: int) -> tuple[PathSetResult, int]:
    rel = inst.reliabilities
    if inst.n == 0:
        return PathSetResult.from_selection((), rel), 0
    if kind is SelectorKind.HNN:
        if rel.max() <= 0:
            return PathSetResult.from_selection((), rel), 0
        sol = hnn.solve(inst, params, seed)
        return PathSetResult.from_selection(sol.selected, rel), sol.iterations
    if kind is SelectorKind.ORACLE:
        return baselines.brute_force_optimum(inst, oracle_max), 0
    if kind is SelectorKind.GREEDY:
        return baselines.greedy_backup_select(inst), 0
    return baselines.shortest_path_result(inst), 0


def run_replication(config: ScenarioConfig, r: float, node_count: int, rep: int) -> list[ResultRow]:
    seed = replication_seed(config.base_seed, node_count, rep)
    mob = replace(config.mobility, node_count=node_count)
    sample = sample_network(mob, r, seed, ttl=config.ttl, cap=config.cap, warmup=config.warmup)
    inst = sample.cache.to_instance(config.mode)
    results = []
    for kind in config.selectors:
        res, iters = _select(kind, inst, config.hnn_params, sample.hnn_seed, config.oracle_max_paths)
        results.append((kind, res, iters))
    links = set()
    for _, res, _ in results:
        for i in res.selected:
            links |= inst.paths[i].links()
    breaks = link_break_times(links, sample.state, r, config.dt_sim, config.horizon)
    rows = []
    for kind, res, iters in results:
        chosen = [inst.paths[i] for i in res.selected]
        rows.append(ResultRow(
            config.scenario_id, rep, seed, r, node_count, config.mode.value, kind.value,
            res.set_reliability, len(res.selected), paths_lifetime(chosen, breaks),
            iters, sample.cache.truncated, inst.n, res.selected))
    return rows


def run_scenario(config: ScenarioConfig) -> list[ResultRow]:
    config.validate()
    rows = []
    for r, n in config.sweep_points():
        for rep in range(config.replications):
            rows.extend(run_replication(config, r, n, rep))
    return rows


def _header(config: ScenarioConfig) -> str:
    return (f"# scenario={config.scenario_id} replications={config.replications} "
            f"base_seed={config.base_seed} mode={config.mode.value} ttl={config.ttl} "
            f"cap={config.cap} warmup={FLOAT_FMT.format(config.warmup)}\n")


def rows_to_csv(rows: list[ResultRow], config: ScenarioConfig | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        buf.write(_header(config))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_COLUMNS)
    for row in rows:
        w.writerow(row.cells())
    return buf.getvalue()


SUMMARY_METRICS = ["set_reliability", "num_paths", "lifetime_s", "iterations"]


def summarize(rows: list[ResultRow]) -> list[dict]:
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        key = (row.scenario, row.R, row.node_count, row.mode, row.selector)
        groups.setdefault(key, []).append(row)
    out = []
    for key, members in groups.items():
        rec = dict(zip(["scenario", "R", "node_count", "mode", "selector"], key))
        rec["n"] = len(members)
        for m in SUMMARY_METRICS:
            vals = np.array([float(getattr(x, m)) for x in members])
            rec[f"{m}_mean"] = float(vals.mean())
            rec[f"{m}_std"] = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0
        out.append(rec)
    return out


def summary_to_csv(rows: list[ResultRow], config: ScenarioConfig | None = None) -> str:
    summary = summarize(rows)
    cols = ["scenario", "R", "node_count", "mode", "selector", "n"]
    for m in SUMMARY_METRICS:
        cols += [f"{m}_mean", f"{m}_std"]
    buf = io.StringIO()
    if config is not None:
        buf.write(_header(config))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for rec in summary:
        w.writerow([FLOAT_FMT.format(rec[c]) if isinstance(rec[c], float) else str(rec[c])
                    for c in cols])
    return buf.getvalue()


def build_tuning_suite(n_instances: int = 20, *, ranges=(150.0, 200.0, 250.0, 300.0),
                       mobility: MobilityConfig | None = None, mode=DisjointnessMode.LINK,
                       runs_per_eval: int = 500, seed: int = 7, ttl: int = 3,
                       cap: int = DEFAULT_CAP, warmup: float = 100.0,
                       max_iters: int | None = None) -> TuningSuite:
    """Tuning instances drawn from seeded mobility snapshots, cycling over ``ranges``.

    Draws without a usable path (disconnected pair, all-zero reliabilities)
    are skipped.
    """
    mobility = mobility or MobilityConfig()
    ss = np.random.SeedSequence(seed)
    instances = []
    k = 0
    while len(instances) < n_instances:
        if k > 100 * n_instances + 100:
            raise InvalidInput("could not draw enough connected tuning instances")
        r = float(ranges[len(instances) % len(ranges)])
        child = int(np.random.SeedSequence([seed, k]).generate_state(1, np.uint64)[0])
        k += 1
        sample = sample_network(mobility, r, child, ttl=ttl, cap=cap, warmup=warmup)
        inst = sample.cache.to_instance(mode)
        if inst.n == 0 or inst.reliabilities.max() <= 0:
            continue
        instances.append(inst)
    run_seeds = [int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(runs_per_eval)]
    return TuningSuite(instances, runs_per_eval, seeds=run_seeds, max_iters=max_iters)


def solve_instance_file(path, params: HnnParams = TUNED_PARAMS, mode=DisjointnessMode.LINK,
                        seed: int = 0, oracle_max: int = baselines.MAX_ORACLE_PATHS) -> dict:
    """HNN and exact selections for one instance file, as a report dict."""
    inst = load_instance(path, mode)
    return solve_instance(inst, params, seed, oracle_max)


def solve_instance(inst: PathSetInstance, params: HnnParams = TUNED_PARAMS, seed: int = 0,
                   oracle_max: int = baselines.MAX_ORACLE_PATHS) -> dict:
    rel = inst.reliabilities
    report = {"mode": inst.mode.value, "paths": inst.n}
    if inst.n == 0:
        report.update(status="no route", hnn_selected=[], hnn_reliability=0.0,
                      oracle_selected=[], oracle_reliability=0.0)
        return report
    sol = hnn.solve(inst, params, seed)
    hres = PathSetResult.from_selection(sol.selected, rel)
    ores = baselines.brute_force_optimum(inst, oracle_max)
    report.update(
        status="ok",
        hnn_selected=list(hres.selected),
        hnn_reliability=hres.set_reliability,
        hnn_disjoint=is_disjoint_set(hres.selected, inst.conflict),
        hnn_iterations=sol.iterations,
        hnn_converged=sol.converged,
        energy_initial=sol.initial_energy,
        energy_final_analog=sol.analog_energy,
        energy_final_rounded=sol.final_energy,
        oracle_selected=list(ores.selected),
        oracle_reliability=ores.set_reliability,
        oracle_disjoint=is_disjoint_set(ores.selected, inst.conflict),
    )
    return report


def format_report(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, float):
            v = FLOAT_FMT.format(v)
        elif isinstance(v, list):
            v = "{" + ", ".join(str(i) for i in v) + "}"
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def mean_by(rows: list[ResultRow], metric: str, selector: str) -> dict:
    """Mean of ``metric`` per transmission range for one selector."""
    acc: dict[float, list[float]] = {}
    for row in rows:
        if row.selector == selector:
            acc.setdefault(row.R, []).append(float(getattr(row, metric)))
    return {r: math.fsum(v) / len(v) for r, v in sorted(acc.items())}
