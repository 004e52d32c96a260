"""Random-waypoint mobility.

Each node owns an independent random stream spawned from the run seed, so a
trajectory does not depend on how the total simulated time is split into
``advance`` calls.
"""

from __future__ import annotations

import copy
import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import InvalidInput

TWO_PI = 2.0 * math.pi
MIN_SPEED = 0.01  # m/s; slower draws are lifted to this value


@dataclass(frozen=True)
class MobilityConfig:
    area_width: float = 1000.0
    area_height: float = 500.0
    node_count: int = 30
    speed_min: float = 0.0
    speed_max: float = 20.0
    pause_time: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.area_width <= 0 or self.area_height <= 0:
            raise InvalidInput("area dimensions must be positive")
        if not 0 <= self.speed_min <= self.speed_max:
            raise InvalidInput("need 0 <= speed_min <= speed_max")
        if self.pause_time < 0:
            raise InvalidInput("pause_time must be non-negative")
        if self.node_count < 0:
            raise InvalidInput("node_count must be non-negative")


@dataclass(frozen=True)
class Kinematics:
    x: float
    y: float
    speed: float
    heading: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass
class MobilityState:
    config: MobilityConfig
    time: float
    pos: np.ndarray          # (n, 2)
    waypoint: np.ndarray     # (n, 2)
    speed: np.ndarray        # leg speed, kept while paused
    heading: np.ndarray      # radians in [0, 2pi)
    pause_left: np.ndarray   # > 0 means paused
    rngs: list = field(repr=False, default_factory=list)

    @property
    def n(self) -> int:
        return self.pos.shape[0]

    def copy(self) -> "MobilityState":
        return replace(
            self,
            pos=self.pos.copy(),
            waypoint=self.waypoint.copy(),
            speed=self.speed.copy(),
            heading=self.heading.copy(),
            pause_left=self.pause_left.copy(),
            rngs=[copy.deepcopy(g) for g in self.rngs],
        )

    @classmethod
    def scripted(cls, positions, waypoints, speeds, pause_left=None, *,
                 config: MobilityConfig | None = None, time=0.0, seed=0):
        """Build a state from explicit kinematics (tests, replays)."""
        pos = np.array(positions, dtype=float).reshape(-1, 2)
        n = pos.shape[0]
        if config is None:
            config = MobilityConfig(node_count=n, seed=seed,
                                    area_width=1e9, area_height=1e9)
        wp = np.array(waypoints, dtype=float).reshape(-1, 2)
        sp = np.array(speeds, dtype=float).reshape(-1)
        pl = np.zeros(n) if pause_left is None else np.array(pause_left, dtype=float)
        heading = np.array([_heading(pos[i], wp[i]) for i in range(n)])
        rngs = _spawn_rngs(seed, n)
        return cls(config, float(time), pos, wp, sp, heading, pl, rngs)


def _spawn_rngs(seed: int, n: int) -> list:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def _heading(p, w) -> float:
    dx, dy = w[0] - p[0], w[1] - p[1]
    if dx == 0.0 and dy == 0.0:
        return 0.0
    return math.atan2(dy, dx) % TWO_PI


def _draw_leg(state: MobilityState, i: int) -> None:
    cfg = state.config
    g = state.rngs[i]
    wx = g.uniform(0.0, cfg.area_width)
    wy = g.uniform(0.0, cfg.area_height)
    s = g.uniform(cfg.speed_min, cfg.speed_max)
    state.waypoint[i] = (wx, wy)
    state.speed[i] = max(s, MIN_SPEED)
    state.heading[i] = _heading(state.pos[i], state.waypoint[i])


def init_waypoint_state(config: MobilityConfig) -> MobilityState:
    if config.node_count == 0:
        raise InvalidInput("node_count must be at least 1")
    n = config.node_count
    rngs = _spawn_rngs(config.seed, n)
    state = MobilityState(
        config=config,
        time=0.0,
        pos=np.zeros((n, 2)),
        waypoint=np.zeros((n, 2)),
        speed=np.zeros(n),
        heading=np.zeros(n),
        pause_left=np.zeros(n),
        rngs=rngs,
    )
    for i in range(n):
        g = rngs[i]
        state.pos[i] = (g.uniform(0.0, config.area_width), g.uniform(0.0, config.area_height))
        _draw_leg(state, i)
    return state


def _advance_node(state: MobilityState, i: int, dt: float) -> None:
    pause_time = state.config.pause_time
    rem = dt
    # guard against pathological zero-length legs with zero pause
    for _ in range(10_000):
        if rem <= 0.0:
            return
        if state.pause_left[i] > 0.0:
            used = min(state.pause_left[i], rem)
            state.pause_left[i] -= used
            rem -= used
            if state.pause_left[i] <= 0.0:
                state.pause_left[i] = 0.0
                _draw_leg(state, i)
            continue
        delta = state.waypoint[i] - state.pos[i]
        dist = math.hypot(delta[0], delta[1])
        travel = state.speed[i] * rem
        if travel < dist:
            state.pos[i] += delta * (travel / dist)
            return
        if dist > 0.0:
            rem -= dist / state.speed[i]
        state.pos[i] = state.waypoint[i]
        if pause_time > 0.0:
            state.pause_left[i] = pause_time
        else:
            _draw_leg(state, i)


def advance(state: MobilityState, dt: float) -> MobilityState:
    """Return the state ``dt`` seconds later; the input is not modified."""
    if dt < 0:
        raise InvalidInput("dt must be non-negative")
    new = state.copy()
    advance_inplace(new, dt)
    return new


def advance_inplace(new: MobilityState, dt: float) -> None:
    """Like `advance` but mutates ``new``; used by long replays."""
    if dt < 0:
        raise InvalidInput("dt must be non-negative")
    if dt == 0:
        return
    delta = new.waypoint - new.pos
    dist = np.hypot(delta[:, 0], delta[:, 1])
    travel = new.speed * dt
    easy = (new.pause_left <= 0.0) & (travel < dist)
    if np.any(easy):
        scale = np.where(easy, travel / np.where(dist > 0, dist, 1.0), 0.0)
        new.pos += delta * scale[:, None]
    for i in np.flatnonzero(~easy):
        _advance_node(new, int(i), dt)
    cfg = new.config
    np.clip(new.pos[:, 0], 0.0, cfg.area_width, out=new.pos[:, 0])
    np.clip(new.pos[:, 1], 0.0, cfg.area_height, out=new.pos[:, 1])
    new.time = new.time + dt


def current_velocity(state: MobilityState) -> tuple[np.ndarray, np.ndarray]:
    """Speeds (0 while paused) and headings as arrays."""
    speed = np.where(state.pause_left > 0.0, 0.0, state.speed)
    return speed, state.heading.copy()


def snapshot_kinematics(state: MobilityState) -> list[Kinematics]:
    speed, heading = current_velocity(state)
    return [
        Kinematics(float(state.pos[i, 0]), float(state.pos[i, 1]),
                   float(speed[i]), float(heading[i]))
        for i in range(state.n)
    ]


def write_trajectory_csv(state: MobilityState, dt: float, steps: int, fh) -> MobilityState:
    """Write ``steps + 1`` samples of every node to an open text file."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["time", "node", "x", "y", "speed", "heading"])
    for k in range(steps + 1):
        for i, kin in enumerate(snapshot_kinematics(state)):
            w.writerow([f"{state.time:.9g}", i, f"{kin.x:.9g}", f"{kin.y:.9g}",
                        f"{kin.speed:.9g}", f"{kin.heading:.9g}"])
        if k < steps:
            state = advance(state, dt)
    return state
