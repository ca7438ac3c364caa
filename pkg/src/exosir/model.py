"""Exo-SIR and SIR right-hand sides, a fixed-step RK4 integrator, and peak statistics.

The Exo-SIR model splits the infected compartment by origin: i_e grows through
contact with infected people (rate beta_e), i_x grows straight from the
susceptible pool (rate beta_x, the exogenous channel), and both recover at
rate gamma. All compartments are population fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError, InvalidStateError, ParameterError

CONSERVATION_TOL = 1e-9
UNDERSHOOT_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Rates per day: beta_x (exogenous), beta_e (endogenous), gamma (recovery)."""

    beta_x: float
    beta_e: float
    gamma: float

    def __post_init__(self):
        for name in ("beta_x", "beta_e", "gamma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            if value < 0:
                raise ParameterError(f"{name} must be nonnegative, got {value!r}")


@dataclass(frozen=True)
class CompartmentState:
    """One time slice of fractions (s, i_e, i_x, r)."""

    s: float
    i_e: float
    i_x: float
    r: float

    def validate(self) -> None:
        total = 0.0
        for name in ("s", "i_e", "i_x", "r"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidStateError(f"{name} is not finite: {value!r}")
            if value < 0.0 or value > 1.0:
                raise InvalidStateError(f"{name} outside [0, 1]: {value!r}")
            total += value
        if abs(total - 1.0) > CONSERVATION_TOL:
            raise InvalidStateError(f"compartments sum to {total!r}, expected 1")

    @property
    def i(self) -> float:
        return self.i_e + self.i_x


@dataclass(frozen=True)
class PeakStats:
    """First maximum of a compartment series."""

    peak_value: float
    peak_tick: int
    peak_time: float


@dataclass(frozen=True)
class Trajectory:
    """Fixed-step Exo-SIR trajectory; component arrays share one time axis."""

    t0: float
    dt: float
    s: np.ndarray
    i_e: np.ndarray
    i_x: np.ndarray
    r: np.ndarray

    def __len__(self) -> int:
        return self.s.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.s.size)

    @property
    def i(self) -> np.ndarray:
        return self.i_e + self.i_x

    def state_at(self, tick: int) -> CompartmentState:
        return CompartmentState(
            float(self.s[tick]), float(self.i_e[tick]),
            float(self.i_x[tick]), float(self.r[tick]),
        )


@dataclass(frozen=True)
class SirTrajectory:
    """Fixed-step SIR trajectory (s, i, r)."""

    t0: float
    dt: float
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray

    def __len__(self) -> int:
        return self.s.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.s.size)


def exo_sir_rhs(state: CompartmentState, params: ModelParams) -> tuple[float, float, float, float]:
    """Exo-SIR derivatives (ds, di_x, di_e, dr) at the given state.

    ds = -beta_x*s - beta_e*s*i, di_x = beta_x*s - gamma*i_x,
    di_e = beta_e*s*i - gamma*i_e, dr = gamma*i, with i = i_e + i_x.
    The four derivatives sum to zero.
    """
    s, i_e, i_x, r = state.s, state.i_e, state.i_x, state.r
    if not (math.isfinite(s) and math.isfinite(i_e) and math.isfinite(i_x) and math.isfinite(r)):
        raise InvalidStateError(f"non-finite state: {state!r}")
    i = i_e + i_x
    return (
        -params.beta_x * s - params.beta_e * s * i,
        params.beta_x * s - params.gamma * i_x,
        params.beta_e * s * i - params.gamma * i_e,
        params.gamma * i,
    )


def sir_rhs(state: tuple[float, float, float], params: tuple[float, float]) -> tuple[float, float, float]:
    """Classic SIR derivatives (ds, di, dr) for state (s, i, r) and params (beta, gamma)."""
    s, i, r = state
    if not (math.isfinite(s) and math.isfinite(i) and math.isfinite(r)):
        raise InvalidStateError(f"non-finite state: {state!r}")
    beta, gamma = params
    return (-beta * s * i, beta * s * i - gamma * i, gamma * i)


def _check_step(values, step: int):
    """Conservation and bounds checks for one integrated step; returns clamped values."""
    total = 0.0
    for v in values:
        if not math.isfinite(v):
            raise IntegrationError("non-finite compartment", step)
        total += v
    if abs(total - 1.0) > CONSERVATION_TOL:
        raise IntegrationError(f"conservation violated: sum={total!r}", step)
    out = []
    for v in values:
        if v < 0.0:
            if v < -UNDERSHOOT_TOL:
                raise IntegrationError(f"compartment undershoot {v!r}", step)
            v = 0.0
        elif v > 1.0:
            if v > 1.0 + UNDERSHOOT_TOL:
                raise IntegrationError(f"compartment overshoot {v!r}", step)
            v = 1.0
        out.append(v)
    return out


def integrate(rhs, initial: CompartmentState, params: ModelParams,
              dt: float, n_steps: int, t0: float = 0.0) -> Trajectory:
    """Integrate the Exo-SIR system with classical fixed-step RK4.

    Every step is checked for conservation (|s+i_e+i_x+r-1| <= 1e-9);
    undershoot below 0 or overshoot above 1 is clamped only within 1e-12,
    anything worse raises IntegrationError with the step index.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt!r}")
    if n_steps < 1:
        raise ParameterError(f"n_steps must be >= 1, got {n_steps!r}")
    initial.validate()

    if rhs is exo_sir_rhs:
        bx, be, g = params.beta_x, params.beta_e, params.gamma

        def f(s, ie, ix, r):
            i = ie + ix
            return (-bx * s - be * s * i, bx * s - g * ix, be * s * i - g * ie, g * i)
    else:
        def f(s, ie, ix, r):
            d = rhs(CompartmentState(s, ie, ix, r), params)
            return (d[0], d[1], d[2], d[3])

    S = np.empty(n_steps + 1)
    IE = np.empty(n_steps + 1)
    IX = np.empty(n_steps + 1)
    R = np.empty(n_steps + 1)
    s, ie, ix, r = initial.s, initial.i_e, initial.i_x, initial.r
    S[0], IE[0], IX[0], R[0] = s, ie, ix, r
    half = dt / 2.0
    sixth = dt / 6.0
    for k in range(1, n_steps + 1):
        ds1, dx1, de1, dr1 = f(s, ie, ix, r)
        ds2, dx2, de2, dr2 = f(s + half * ds1, ie + half * de1, ix + half * dx1, r + half * dr1)
        ds3, dx3, de3, dr3 = f(s + half * ds2, ie + half * de2, ix + half * dx2, r + half * dr2)
        ds4, dx4, de4, dr4 = f(s + dt * ds3, ie + dt * de3, ix + dt * dx3, r + dt * dr3)
        s = s + sixth * (ds1 + 2.0 * ds2 + 2.0 * ds3 + ds4)
        ie = ie + sixth * (de1 + 2.0 * de2 + 2.0 * de3 + de4)
        ix = ix + sixth * (dx1 + 2.0 * dx2 + 2.0 * dx3 + dx4)
        r = r + sixth * (dr1 + 2.0 * dr2 + 2.0 * dr3 + dr4)
        s, ie, ix, r = _check_step((s, ie, ix, r), k)
        S[k], IE[k], IX[k], R[k] = s, ie, ix, r
    for arr in (S, IE, IX, R):
        arr.flags.writeable = False
    return Trajectory(t0=t0, dt=dt, s=S, i_e=IE, i_x=IX, r=R)


def integrate_sir(initial: tuple[float, float, float], params: tuple[float, float],
                  dt: float, n_steps: int, t0: float = 0.0) -> SirTrajectory:
    """Integrate classic SIR with the same RK4 stepping and checks as integrate()."""
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt!r}")
    if n_steps < 1:
        raise ParameterError(f"n_steps must be >= 1, got {n_steps!r}")
    beta, gamma = params
    if beta < 0 or gamma < 0 or not (math.isfinite(beta) and math.isfinite(gamma)):
        raise ParameterError(f"beta and gamma must be finite and nonnegative, got {params!r}")

    S = np.empty(n_steps + 1)
    I = np.empty(n_steps + 1)
    R = np.empty(n_steps + 1)
    s, i, r = initial
    S[0], I[0], R[0] = s, i, r
    half = dt / 2.0
    sixth = dt / 6.0

    def f(s, i, r):
        return (-beta * s * i, beta * s * i - gamma * i, gamma * i)

    for k in range(1, n_steps + 1):
        ds1, di1, dr1 = f(s, i, r)
        ds2, di2, dr2 = f(s + half * ds1, i + half * di1, r + half * dr1)
        ds3, di3, dr3 = f(s + half * ds2, i + half * di2, r + half * dr2)
        ds4, di4, dr4 = f(s + dt * ds3, i + dt * di3, r + dt * dr3)
        s = s + sixth * (ds1 + 2.0 * ds2 + 2.0 * ds3 + ds4)
        i = i + sixth * (di1 + 2.0 * di2 + 2.0 * di3 + di4)
        r = r + sixth * (dr1 + 2.0 * dr2 + 2.0 * dr3 + dr4)
        s, i, r = _check_step((s, i, r), k)
        S[k], I[k], R[k] = s, i, r
    for arr in (S, I, R):
        arr.flags.writeable = False
    return SirTrajectory(t0=t0, dt=dt, s=S, i=I, r=R)


_COMPARTMENTS = {"i_e": lambda tr: tr.i_e, "i_x": lambda tr: tr.i_x, "i": lambda tr: tr.i}


def peak_of(traj: Trajectory, compartment: str = "i_e") -> PeakStats:
    """Peak statistics of one infected series; ties broken by the earliest index."""
    try:
        series = _COMPARTMENTS[compartment](traj)
    except KeyError:
        raise ParameterError(f"unknown compartment {compartment!r}, expected one of "
                             f"{sorted(_COMPARTMENTS)}") from None
    if series.size == 0:
        raise ParameterError("empty trajectory")
    tick = int(np.argmax(series))
    return PeakStats(peak_value=float(series[tick]), peak_tick=tick,
                     peak_time=traj.t0 + tick * traj.dt)


def endogenous_boost_check(state: CompartmentState, params: ModelParams) -> bool:
    """True iff di_e/dt with the given i_x strictly exceeds di_e/dt at i_x = 0.

    di_e/dt = beta_e*s*(i_e + i_x) - gamma*i_e is linear in i_x with slope
    beta_e*s, so the strict inequality holds exactly when i_x > 0 and
    beta_e*s > 0. Evaluating the boolean this way avoids subtracting two
    nearly equal floats when i_x is tiny.
    """
    return state.i_x > 0.0 and params.beta_e * state.s > 0.0
