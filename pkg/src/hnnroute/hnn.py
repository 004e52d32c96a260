"""Continuous Hopfield network for most-reliable disjoint path-set selection.

Neuron i stands for candidate path i. Conflicting paths inhibit each other
through ``T = -mu1 * rho`` and each neuron is driven by ``I = mu2 * C`` where
``C`` is the path reliability normalized by the best path in the cache.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numba
import numpy as np

from .core import InvalidInput, PathSetInstance


class DegenerateInstanceError(InvalidInput):
    """Every candidate path has zero reliability."""


class HnnDivergenceError(RuntimeError):
    def __init__(self, msg, params=None):
        super().__init__(msg)
        self.params = params


@dataclass(frozen=True)
class HnnParams:
    mu1: float = 32.0
    mu2: float = 27.0
    lambda_gain: float = 0.45
    dt: float = 1e-3
    v_th: float = 0.23
    tau: float = 1.0
    u_init_half_width: float = 5e-4
    conv_eps: float = 1e-6
    max_iters: int = 200_000

    def check(self) -> None:
        if not self.mu1 >= self.mu2 > 0:
            raise InvalidInput(f"need mu1 >= mu2 > 0, got mu1={self.mu1}, mu2={self.mu2}")
        if not self.dt > 0:
            raise InvalidInput("dt must be positive")
        if not 0 < self.v_th < 1:
            raise InvalidInput("v_th must lie in (0, 1)")
        if not self.tau > 0 or not self.lambda_gain > 0:
            raise InvalidInput("tau and lambda_gain must be positive")
        if self.max_iters < 1:
            raise InvalidInput("max_iters must be at least 1")

    def as_vector(self) -> np.ndarray:
        return np.array([self.mu1, self.mu2, self.lambda_gain, self.dt, self.v_th])

    def with_vector(self, x) -> "HnnParams":
        mu1, mu2, lam, dt, vth = (float(v) for v in x)
        return replace(self, mu1=mu1, mu2=mu2, lambda_gain=lam, dt=dt, v_th=vth)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


# Settings from earlier non-optimized work, and the PSO-tuned optimum.
REFERENCE_PARAMS = HnnParams(mu1=1.0, mu2=1.0, lambda_gain=50.0, dt=1e-5, v_th=0.1)
TUNED_PARAMS = HnnParams(mu1=32.0, mu2=27.0, lambda_gain=0.45, dt=1e-3, v_th=0.23)


@dataclass
class HnnNetwork:
    n: int
    weights: np.ndarray
    biases: np.ndarray
    u: np.ndarray
    v: np.ndarray
    normalized_reliability: np.ndarray
    conflict: np.ndarray


@dataclass
class HnnSolution:
    selected: tuple[int, ...]
    iterations: int
    converged: bool
    final_energy: float
    initial_energy: float = math.nan
    analog_energy: float = math.nan
    outputs: np.ndarray | None = None


def sigmoid(u, gain):
    """Logistic transfer ``1 / (1 + exp(-gain * u))``."""
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-gain * np.asarray(u, dtype=float)))


def build_network(instance: PathSetInstance, params: HnnParams, seed: int = 0) -> HnnNetwork:
    n = instance.n
    if n < 1:
        raise InvalidInput("instance has no paths")
    rel = instance.reliabilities
    best = rel.max()
    if best <= 0:
        raise DegenerateInstanceError("all path reliabilities are zero")
    c = rel / best
    rho = instance.conflict.astype(float)
    weights = -params.mu1 * rho
    biases = params.mu2 * c
    rng = np.random.default_rng(seed)
    h = params.u_init_half_width
    u = rng.uniform(-h, h, n)
    return HnnNetwork(n, weights, biases, u, sigmoid(u, params.lambda_gain), c, rho)


@numba.njit(cache=True)
def _euler_step(T, I, U, V, lam, dt, tau, U_out, V_out):
    n = U.shape[0]
    change = 0.0
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += T[i, j] * V[j]
        u = U[i] + dt * (s - U[i] / tau + I[i])
        U_out[i] = u
        v = 1.0 / (1.0 + math.exp(min(-lam * u, 700.0)))
        V_out[i] = v
        d = abs(v - V[i])
        if d > change:
            change = d
    return change


@numba.njit(cache=True)
def _integrate(T, I, U0, V0, lam, dt, tau, eps, max_iters):
    n = U0.shape[0]
    U = U0.copy()
    V = V0.copy()
    U2 = np.empty(n)
    V2 = np.empty(n)
    it = 0
    converged = False
    while it < max_iters:
        change = _euler_step(T, I, U, V, lam, dt, tau, U2, V2)
        it += 1
        U, U2 = U2, U
        V, V2 = V2, V
        if not np.isfinite(change):
            return U, V, it, False, False
        for i in range(n):
            if not np.isfinite(U[i]):
                return U, V, it, False, False
        if change < eps:
            converged = True
            break
    return U, V, it, converged, True


def step(network: HnnNetwork, params: HnnParams) -> float:
    """One forward-Euler update of all neurons; returns the largest output change."""
    U2 = np.empty(network.n)
    V2 = np.empty(network.n)
    change = _euler_step(network.weights, network.biases, network.u, network.v,
                         params.lambda_gain, params.dt, params.tau, U2, V2)
    if not (np.isfinite(change) and np.all(np.isfinite(U2))):
        raise HnnDivergenceError("neuron state became non-finite", params)
    network.u, network.v = U2, V2
    return float(change)


def energy(network: HnnNetwork, params: HnnParams, v=None) -> float:
    """Routing energy: conflict penalty minus normalized-reliability reward."""
    v = network.v if v is None else np.asarray(v, dtype=float)
    rho = network.conflict
    c = network.normalized_reliability
    return float(0.5 * params.mu1 * (v @ rho @ v) - params.mu2 * (c @ v))


def hopfield_energy(weights, biases, v) -> float:
    """Generic quadratic Hopfield energy ``-1/2 v'Tv - I'v``."""
    v = np.asarray(v, dtype=float)
    return float(-0.5 * (v @ weights @ v) - biases @ v)


def solve(instance: PathSetInstance, params: HnnParams = TUNED_PARAMS, seed: int = 0) -> HnnSolution:
    params.check()
    net = build_network(instance, params, seed)
    e0 = energy(net, params)
    U, V, iters, converged, ok = _integrate(
        net.weights, net.biases, net.u, net.v, params.lambda_gain, params.dt,
        params.tau, params.conv_eps, params.max_iters)
    if not ok:
        raise HnnDivergenceError(
            f"Hopfield state diverged after {iters} steps with {params}", params)
    net.u, net.v = U, V
    rounded = (V >= params.v_th).astype(float)
    selected = tuple(int(i) for i in np.flatnonzero(rounded))
    return HnnSolution(selected, int(iters), bool(converged), energy(net, params, rounded),
                       e0, energy(net, params), V.copy())
