"""Particle swarm tuning of the Hopfield solver parameters."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .core import InvalidInput, PathSetInstance, is_disjoint_set
from .hnn import REFERENCE_PARAMS, TUNED_PARAMS, HnnDivergenceError, HnnParams, solve
from .metrics import pathset_reliability

log = logging.getLogger(__name__)

# mu1, mu2, lambda, dt, v_th
PARAM_LOWER = np.array([0.0, 0.0, 0.0, 0.0, 0.0])
PARAM_UPPER = np.array([50.0, 50.0, 100.0, 1.0, 1.0])
FEASIBLE_EPS = 1e-6


@dataclass
class PsoConfig:
    max_iterations: int = 300
    population: int = 20
    v_max: float = 4.0
    inertia_start: float = 0.9
    inertia_end: float = 0.2
    accel_cognitive: float = 2.0
    accel_social: float = 2.0
    min_error_gradient: float = 1e-5
    stall_window: int = 20
    lower: np.ndarray = field(default_factory=lambda: PARAM_LOWER.copy())
    upper: np.ndarray = field(default_factory=lambda: PARAM_UPPER.copy())
    seed: int = 0

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.population < 2:
            raise InvalidInput("population must be at least 2")
        if self.lower.shape != self.upper.shape or np.any(self.upper < self.lower):
            raise InvalidInput("bounds must be well ordered and of equal length")
        if self.inertia_start <= 0 or self.inertia_end <= 0:
            raise InvalidInput("inertia weights must be positive")
        if self.max_iterations < 1:
            raise InvalidInput("max_iterations must be at least 1")


@dataclass
class PsoResult:
    best_position: np.ndarray
    best_value: float
    iterations: int
    trace: list[float]
    evaluations: int = 0


def inertia(k: int, config: PsoConfig) -> float:
    """Linearly interpolated inertia weight for iteration ``k`` (0-based)."""
    if config.max_iterations <= 1:
        return config.inertia_start
    frac = k / (config.max_iterations - 1)
    return config.inertia_start + (config.inertia_end - config.inertia_start) * frac


def update_velocity(v, x, pbest, gbest, phi, a1, a2, g1, g2, v_max):
    v = phi * v + a1 * g1 * (pbest - x) + a2 * g2 * (gbest - x)
    return np.clip(v, -v_max, v_max)


def _evaluate(objective, x) -> float:
    try:
        val = float(objective(x))
    except (FloatingPointError, OverflowError) as exc:
        log.warning("objective failed at %s: %s", x, exc)
        return math.inf
    if not math.isfinite(val):
        log.warning("non-finite objective %r at %s; treated as worst", val, x)
        return math.inf
    return val


def pso_minimize(objective: Callable[[np.ndarray], float], config: PsoConfig,
                 initial_positions: Sequence | None = None) -> PsoResult:
    """Minimize ``objective`` over the box ``[lower, upper]``.

    Rows of ``initial_positions`` replace the first random particles.
    """
    rng = np.random.default_rng(config.seed)
    lo, hi = config.lower, config.upper
    P, D = config.population, lo.size
    v_max = np.minimum(np.broadcast_to(np.asarray(config.v_max, dtype=float), (D,)), hi - lo)
    x = rng.uniform(lo, hi, (P, D))
    if initial_positions is not None:
        init = np.atleast_2d(np.asarray(initial_positions, dtype=float))[:P]
        x[: len(init)] = np.clip(init, lo, hi)
    v = rng.uniform(-1.0, 1.0, (P, D)) * v_max
    f = np.array([_evaluate(objective, xi) for xi in x])
    pbest, pbest_f = x.copy(), f.copy()
    g = int(np.argmin(pbest_f))
    gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
    trace = [gbest_f]
    evals = P
    iterations = 0
    for k in range(config.max_iterations):
        phi = inertia(k, config)
        g1 = rng.random((P, 1))
        g2 = rng.random((P, 1))
        v = update_velocity(v, x, pbest, gbest, phi, config.accel_cognitive,
                            config.accel_social, g1, g2, v_max)
        x = np.clip(x + v, lo, hi)
        f = np.array([_evaluate(objective, xi) for xi in x])
        evals += P
        improved = f < pbest_f
        pbest[improved] = x[improved]
        pbest_f[improved] = f[improved]
        g = int(np.argmin(pbest_f))
        if pbest_f[g] < gbest_f:
            gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
        trace.append(gbest_f)
        iterations = k + 1
        w = config.stall_window
        if iterations >= w and trace[-w - 1] - trace[-1] < config.min_error_gradient:
            break
    return PsoResult(gbest, gbest_f, iterations, trace, evals)


def repair_vector(x, eps: float = FEASIBLE_EPS) -> np.ndarray:
    """Project a raw 5-vector onto the feasible region mu1 >= mu2 > 0, lambda, dt > 0, 0 < v_th < 1."""
    mu1, mu2, lam, dt, vth = (float(v) for v in x)
    mu1, mu2 = max(mu1, eps), max(mu2, eps)
    if mu2 > mu1:
        mu1, mu2 = mu2, mu1
    return np.array([mu1, mu2, max(lam, eps), max(dt, eps), min(max(vth, eps), 1.0 - eps)])


@dataclass
class TuningSuite:
    instances: list[PathSetInstance]
    runs_per_eval: int = 500
    reference_params: HnnParams = REFERENCE_PARAMS
    seeds: list[int] | None = None
    max_iters: int | None = None   # Euler cap for every run, reference included
    _reference: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.runs_per_eval < 1:
            raise InvalidInput("runs_per_eval must be at least 1")
        if not self.instances:
            raise InvalidInput("tuning suite needs at least one instance")
        if self.seeds is None:
            ss = np.random.SeedSequence(12345)
            self.seeds = [int(s.generate_state(1)[0]) for s in ss.spawn(self.runs_per_eval)]
        if len(self.seeds) < self.runs_per_eval:
            raise InvalidInput("fewer seeds than runs_per_eval")

    def run(self, r: int) -> tuple[PathSetInstance, int]:
        return self.instances[r % len(self.instances)], self.seeds[r]

    def reference_reliability(self, r: int) -> float:
        if r not in self._reference:
            inst, seed = self.run(r)
            ref = self.reference_params
            if self.max_iters is not None:
                ref = replace(ref, max_iters=self.max_iters)
            try:
                sol = solve(inst, ref, seed)
                self._reference[r] = pathset_reliability(inst.reliabilities[list(sol.selected)])
            except HnnDivergenceError:
                self._reference[r] = 0.0
        return self._reference[r]


def run_is_error(candidate: HnnParams, suite: TuningSuite, r: int) -> bool:
    inst, seed = suite.run(r)
    try:
        sol = solve(inst, candidate, seed)
    except HnnDivergenceError:
        return True
    if not is_disjoint_set(sol.selected, inst.conflict):
        return True
    rel = pathset_reliability(inst.reliabilities[list(sol.selected)])
    return rel < suite.reference_reliability(r)


def hnn_fitness(candidate: HnnParams, suite: TuningSuite) -> float:
    """Fraction of suite runs that are non-disjoint or worse than the reference setting."""
    cand = candidate.with_vector(repair_vector(candidate.as_vector()))
    if suite.max_iters is not None:
        cand = replace(cand, max_iters=suite.max_iters)
    errors = sum(run_is_error(cand, suite, r) for r in range(suite.runs_per_eval))
    return errors / suite.runs_per_eval


@dataclass
class TuneResult:
    params: HnnParams
    fitness: float
    reference_fitness: float
    iterations: int
    trace: list[float]
    seed: int
    suite_seeds: list[int]


def tune(suite: TuningSuite, config: PsoConfig, template: HnnParams = TUNED_PARAMS,
         include_reference: bool = True) -> TuneResult:
    """Search the five solver parameters that minimize `hnn_fitness` on ``suite``.

    The reference setting seeds the first particle, so the result is never
    worse than it on this suite.
    """

    def objective(x):
        return hnn_fitness(template.with_vector(x), suite)

    init = [suite.reference_params.as_vector()] if include_reference else None
    res = pso_minimize(objective, config, init)
    best = template.with_vector(repair_vector(res.best_position))
    ref_fit = hnn_fitness(suite.reference_params, suite)
    return TuneResult(best, res.best_value, ref_fit, res.iterations, res.trace,
                      config.seed, list(suite.seeds[: suite.runs_per_eval]))
