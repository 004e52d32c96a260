"""Hopfield-network selection of reliable disjoint paths in mobile ad hoc networks."""

from .baselines import SelectorKind, brute_force_optimum, greedy_backup_select, shortest_path
from .core import (
    DisjointnessMode, InvalidInput, NoRouteError, Path, PathSetInstance, StalePathError,
    build_conflict_matrix, is_disjoint_set, load_instance,
)
from .discovery import RouteCache, discover_paths
from .hnn import REFERENCE_PARAMS, TUNED_PARAMS, HnnParams, HnnSolution, solve
from .links import LinkSnapshot, build_link_snapshot, link_expiration_time
from .metrics import PathSetResult, lifetime, pathset_reliability
from .mobility import MobilityConfig, advance, init_waypoint_state
from .pso import PsoConfig, TuningSuite, hnn_fitness, pso_minimize, tune
from .experiments import ScenarioConfig, run_scenario, solve_instance_file

__version__ = "0.1.0"

__all__ = [
    "SelectorKind",
    "brute_force_optimum",
    "greedy_backup_select",
    "shortest_path",
    "DisjointnessMode",
    "InvalidInput",
    "NoRouteError",
    "Path",
    "PathSetInstance",
    "StalePathError",
    "build_conflict_matrix",
    "is_disjoint_set",
    "load_instance",
    "RouteCache",
    "discover_paths",
    "REFERENCE_PARAMS",
    "TUNED_PARAMS",
    "HnnParams",
    "HnnSolution",
    "solve",
    "LinkSnapshot",
    "build_link_snapshot",
    "link_expiration_time",
    "PathSetResult",
    "lifetime",
    "pathset_reliability",
    "MobilityConfig",
    "advance",
    "init_waypoint_state",
    "PsoConfig",
    "TuningSuite",
    "hnn_fitness",
    "pso_minimize",
    "tune",
    "ScenarioConfig",
    "run_scenario",
    "solve_instance_file",
]
