"""Finite-volume time integrator for u_t + u u_x + u - K*u = 0.

First-order Rusanov flux with unsplit forward-Euler source: validation
runs need monotone shock capture and exact constant states, not high
accuracy.  Constants are exact steady states because the convolution rows
are normalized to unit mass; the time step obeys both the advective CFL
condition and a fixed cap for the relaxation term.

The simulator's job in this package is to confirm that computed wave
profiles actually translate at the Rankine-Hugoniot speed and to exhibit
the finite-time gradient steepening of generic smooth data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .convolve import FullLineConvolver
from .kernels import Kernel
from .waves import WaveProfile

#: hard cap on the explicit step for the stiff-free relaxation term
DT_CAP = 0.5

#: slack of the discrete maximum-principle sanity band
BAND_SLACK = 0.1


class SimulationError(RuntimeError):
    """Scheme blow-up or invalid simulation input."""


@dataclass(frozen=True)
class SimConfig:
    """Domain, resolution and far fields of one simulation run."""

    a: float
    b: float
    m: int
    t_end: float
    u_left: float
    u_right: float
    cfl: float = 0.4
    snapshot_interval: float = 0.25

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        if self.m < 128:
            raise ValueError("need at least 128 cells")
        if not 0.0 < self.cfl <= 0.9:
            raise ValueError("CFL number must lie in (0, 0.9]")
        if not self.t_end > 0.0:
            raise ValueError("end time must be positive")
        if not self.snapshot_interval > 0.0:
            raise ValueError("snapshot interval must be positive")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.m

    def centers(self) -> np.ndarray:
        return self.a + (np.arange(self.m) + 0.5) * self.dx


@dataclass
class SimState:
    """Cell averages at the centers, at time t."""

    x: np.ndarray
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.shape != self.x.shape:
            raise SimulationError("need one average per cell")
        if not np.all(np.isfinite(self.u)):
            raise SimulationError("non-finite cell averages")


def initial_state(cfg: SimConfig, init) -> SimState:
    """State from a callable u0(x), an array of averages, or a constant."""
    x = cfg.centers()
    if callable(init):
        u = np.asarray(init(x), dtype=float)
    elif np.isscalar(init):
        u = np.full(cfg.m, float(init))
    else:
        u = np.asarray(init, dtype=float)
    state = SimState(x, u.copy(), 0.0)
    _check_far_fields(state, cfg)
    return state


def state_from_profile(profile: WaveProfile, cfg: SimConfig) -> SimState:
    """Sample a solved wave profile onto the cells."""
    state = SimState(cfg.centers(), profile.interp_full(cfg.centers()), 0.0)
    _check_far_fields(state, cfg)
    return state


def _check_far_fields(state: SimState, cfg: SimConfig, tol: float = 1e-6):
    if abs(state.u[0] - cfg.u_left) > tol or abs(state.u[-1] - cfg.u_right) > tol:
        raise SimulationError(
            f"initial data mismatches the far fields near the boundary "
            f"(|{state.u[0]:.6g} - {cfg.u_left:.6g}|, "
            f"|{state.u[-1]:.6g} - {cfg.u_right:.6g}| > {tol:g})"
        )


# ----------------------------------------------------------------------
# one explicit step
# ----------------------------------------------------------------------


def _rusanov_flux_diff(u: np.ndarray, u_left: float, u_right: float) -> np.ndarray:
    """F_{j+1/2} - F_{j-1/2} with constant ghost states."""
    ext = np.concatenate([[u_left], u, [u_right]])
    ul, ur = ext[:-1], ext[1:]
    speed = np.maximum(np.abs(ul), np.abs(ur))
    flux = 0.25 * (ul * ul + ur * ur) - 0.5 * speed * (ur - ul)
    return flux[1:] - flux[:-1]


def _explicit_update(u, conv, dt, dx, u_left, u_right):
    """Forward Euler: advection by Rusanov fluxes plus unsplit relaxation."""
    return u - (dt / dx) * _rusanov_flux_diff(u, u_left, u_right) + dt * (conv - u)


def stable_dt(u: np.ndarray, cfg: SimConfig) -> float:
    speed = max(float(np.max(np.abs(u))), abs(cfg.u_left), abs(cfg.u_right), 1e-9)
    return min(cfg.cfl * cfg.dx / speed, DT_CAP)


def step(state: SimState, kernel: Kernel, cfg: SimConfig,
         convolver: Optional[FullLineConvolver] = None,
         dt: Optional[float] = None) -> SimState:
    """Advance one explicit step (dt chosen by the CFL rule if not given)."""
    if convolver is None:
        convolver = FullLineConvolver(kernel, state.x)
    if dt is None:
        dt = stable_dt(state.u, cfg)
    conv = convolver.apply(state.u, cfg.u_left, cfg.u_right)
    u_new = _explicit_update(state.u, conv, dt, cfg.dx, cfg.u_left, cfg.u_right)
    if not np.all(np.isfinite(u_new)):
        raise SimulationError(f"scheme blew up at t = {state.t:.6g}")
    return SimState(state.x, u_new, state.t + dt)


# ----------------------------------------------------------------------
# trajectories
# ----------------------------------------------------------------------


@dataclass
class Trajectory:
    """Snapshots plus per-snapshot slope and variation diagnostics."""

    config: SimConfig
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    max_slopes: list = field(default_factory=list)
    total_variations: list = field(default_factory=list)

    def add(self, state: SimState):
        dx = self.config.dx
        self.times.append(float(state.t))
        self.snapshots.append(state.u.copy())
        du = np.abs(np.diff(state.u))
        self.max_slopes.append(float(np.max(du) / dx))
        self.total_variations.append(float(np.sum(du)))

    @property
    def final(self) -> SimState:
        return SimState(self.config.centers(), self.snapshots[-1], self.times[-1])

    def slope_growth(self) -> float:
        """Largest max-slope over the run relative to the initial slope."""
        base = max(self.max_slopes[0], 1e-300)
        return max(self.max_slopes) / base


def simulate(init: SimState, kernel: Kernel, cfg: SimConfig) -> Trajectory:
    """Step to t_end, landing exactly on snapshot times and on t_end."""
    _check_far_fields(init, cfg)
    convolver = FullLineConvolver(kernel, init.x)
    lo = min(cfg.u_left, cfg.u_right, float(np.min(init.u))) - BAND_SLACK
    hi = max(cfg.u_left, cfg.u_right, float(np.max(init.u))) + BAND_SLACK

    traj = Trajectory(cfg)
    traj.add(init)
    state = init
    next_snap = cfg.snapshot_interval
    while state.t < cfg.t_end - 1e-12:
        target = min(next_snap, cfg.t_end)
        dt = min(stable_dt(state.u, cfg), target - state.t)
        state = step(state, kernel, cfg, convolver, dt)
        if state.t >= target - 1e-12:
            traj.add(state)
            next_snap = target + cfg.snapshot_interval
            if np.min(state.u) < lo or np.max(state.u) > hi:
                raise SimulationError(
                    f"cell averages left the sanity band [{lo:.6g}, {hi:.6g}] "
                    f"at t = {state.t:.6g}"
                )
    return traj


# ----------------------------------------------------------------------
# diagnostics
# ----------------------------------------------------------------------


@dataclass
class SpeedFit:
    speed: float
    residual_rms: float
    times: np.ndarray
    positions: np.ndarray


def measure_speed(traj: Trajectory, level: float) -> SpeedFit:
    """Least-squares speed of the level crossing across snapshots.

    The crossing is located by linear interpolation between the bracketing
    cells of each snapshot; decreasing fronts are assumed.
    """
    lo, hi = sorted((traj.config.u_left, traj.config.u_right))
    if not lo < level < hi:
        raise ValueError("level must lie strictly between the far fields")
    if len(traj.snapshots) < 5:
        raise ValueError("need at least 5 snapshots to fit a speed")
    x = traj.config.centers()
    positions = []
    for t, u in zip(traj.times, traj.snapshots):
        sign = np.sign(u - level)
        flips = np.nonzero(sign[:-1] * sign[1:] <= 0.0)[0]
        if flips.size == 0:
            raise SimulationError(f"snapshot at t = {t:.6g} does not cross the level")
        j = flips[0]
        frac = (level - u[j]) / (u[j + 1] - u[j])
        positions.append(float(x[j] + frac * (x[j + 1] - x[j])))
    times = np.asarray(traj.times)
    positions = np.asarray(positions)
    design = np.vstack([times, np.ones_like(times)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, positions, rcond=None)
    fitted = design @ np.array([slope, intercept])
    rms = float(np.sqrt(np.mean((positions - fitted) ** 2)))
    return SpeedFit(float(slope), rms, times, positions)


def l1_distance_to_translate(state: SimState, profile: WaveProfile) -> float:
    """L1 distance between the state and the profile shifted by s t."""
    dx = float(state.x[1] - state.x[0])
    shifted = profile.interp_full(state.x - profile.params.s * state.t)
    return float(np.sum(np.abs(state.u - shifted)) * dx)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------


def write_snapshots_csv(traj: Trajectory, path):
    """Long-format CSV 't,x,u', one row per (snapshot, cell)."""
    x = traj.config.centers()
    with open(path, "w", newline="\n") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "x", "u"])
        for t, u in zip(traj.times, traj.snapshots):
            for xi, ui in zip(x, u):
                writer.writerow([repr(float(t)), repr(float(xi)), repr(float(ui))])
