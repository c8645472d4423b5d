"""
Module for the controlled one-dimensional full Euler system

    rho_t + (rho u)_x = 0,
    (rho u)_t + (rho u^2 + p)_x = Q1 + rho F1,
    (rho E)_t + ((rho E + p) u)_x = Q2 + rho F2,

closed by the one-dimensional Maxwellian relations theta = 2 e and
p = rho theta = 2 rho e, which give the sound speed sqrt(3 p / rho).
The discretization matches the pressureless solver. The energy source is
the moment form of Q2 by default; ``energy_source="symmetric"`` selects the
symmetric double sum, which can drive the internal energy onto its floor.
"""
import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List

import numpy as np

from turnpike.diagnostics import CostSeries, integrate_trapezoid
from turnpike.exceptions import CFLViolation, DegenerateState, InputError, NumericalBlowup
from .grid import Grid1D, SolverStats, contract_dt, flux_divergence, march, stable_dt
from .pressureless import RHO_FLOOR
from .sources import alignment_rate, q1_source, q2_moment_source, q2_source

logger = logging.getLogger('turnpike.hydro')

E_FLOOR = 1e-10
GAMMA_GAS = 3.0
ENERGY_SOURCES = ("moment", "symmetric")

Primitives = namedtuple("Primitives", ["u", "e", "p", "theta"])


@dataclass
class EulerState:
    """Cell averages of density, momentum and total energy.

    Attributes:
        t (float): Time.
        rho (numpy.ndarray): Per-cell density, strictly positive.
        mom (numpy.ndarray): Per-cell momentum rho u.
        ener (numpy.ndarray): Per-cell total energy rho E.
    """

    t: float
    rho: np.ndarray
    mom: np.ndarray
    ener: np.ndarray

    def __post_init__(self):
        self.t = float(self.t)
        self.rho = np.array(self.rho, dtype=np.float64)
        self.mom = np.array(self.mom, dtype=np.float64)
        self.ener = np.array(self.ener, dtype=np.float64)
        if self.rho.ndim != 1 or not self.rho.shape == self.mom.shape == self.ener.shape:
            raise InputError("rho, mom and ener must be 1-D arrays of equal length",
                             rho=self.rho.shape, mom=self.mom.shape, ener=self.ener.shape)
        if not all(np.all(np.isfinite(a)) for a in (self.rho, self.mom, self.ener)):
            raise InputError("state entries must be finite", t=self.t)
        if np.any(self.rho <= 0):
            raise InputError("density must be positive", t=self.t)

    @property
    def u(self):
        return self.mom / self.rho


def primitives(state, e_floor=E_FLOOR):
    """Return per-cell ``(u, e, p, theta)``.

    Raises:
        DegenerateState: Some cell has internal energy below ``e_floor``.
    """
    u = state.mom / state.rho
    e = state.ener / state.rho - 0.5 * u * u
    low = e < e_floor
    if np.any(low):
        raise DegenerateState("internal energy below floor", t=state.t,
                              cells=int(np.count_nonzero(low)), e_min=float(np.min(e)))
    theta = 2.0 * e
    return Primitives(u=u, e=e, p=state.rho * theta, theta=theta)


@dataclass(frozen=True)
class EulerFeedback:
    """Feedback pair F1 = -beta (u - v_bar), F2 = -beta (2 e + u (u - v_bar)).

    Attributes:
        beta (float): Gain, nonnegative.
        v_bar (float): Target velocity.
        e_floor (float): Internal energy floor the controls are evaluated against.
    """

    beta: float
    v_bar: float
    e_floor: float = E_FLOOR

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise InputError("feedback gain must be nonnegative", beta=self.beta)

    def controls(self, state, grid):
        return feedback_controls(state, self, self.e_floor)

    def source_rate(self, state):
        # Internal energy relaxes at twice the gain.
        return 2.0 * self.beta

    def gain(self, state):
        return self.beta


def feedback_controls(state, fb, e_floor=E_FLOOR):
    """Return the per-cell feedback controls ``(F1, F2)``.

    Raises:
        DegenerateState: Some cell has internal energy below ``e_floor``.
    """
    prim = primitives(state, e_floor)
    dev = prim.u - fb.v_bar
    return -fb.beta * dev, -fb.beta * (2.0 * prim.e + prim.u * dev)


def cost_g(state, F1, F2, e_floor=E_FLOOR):
    """Return G = rho F1^2 + rho / (2 e) (F2 - u F1)^2 per cell."""
    prim = primitives(state, e_floor)
    F1 = np.asarray(F1, dtype=np.float64)
    work = np.asarray(F2, dtype=np.float64) - prim.u * F1
    return state.rho * F1 * F1 + state.rho / (2.0 * prim.e) * work * work


def _physical_flux(rho, mom, ener):
    u = mom / rho
    p = 2.0 * ener - mom * u
    c = np.sqrt(np.maximum(GAMMA_GAS * p / rho, 0.0))
    return (mom, mom * u + p, (ener + p) * u), np.abs(u) + c


def flux_rusanov_euler(left, right):
    """Rusanov flux of the Euler system.

    Args:
        left: ``(rho, m, rho E)`` on the left of the interface.
        right: ``(rho, m, rho E)`` on the right of the interface.

    Returns:
        tuple: Mass, momentum and energy fluxes.
    """
    f_l, speed_l = _physical_flux(*left)
    f_r, speed_r = _physical_flux(*right)
    s = np.maximum(speed_l, speed_r)
    return tuple(0.5 * (a + b) - 0.5 * s * (q_r - q_l)
                 for a, b, q_l, q_r in zip(f_l, f_r, left, right))


def h_functional(grid, state, v_bar):
    """Return sum_i (rho_i e_i + 1/2 rho_i (u_i - v_bar)^2) dx."""
    u = state.u
    internal = state.ener - 0.5 * state.mom * u
    dev = u - v_bar
    return grid.integrate(internal + 0.5 * state.rho * dev * dev)


def _wave_speed(state):
    _, speed = _physical_flux(state.rho, state.mom, state.ener)
    return float(np.max(speed))


def max_step_dt_euler(grid, state, control, cfl=0.4):
    """Largest step :func:`step_euler` accepts: ``cfl dx / max(|u| + c)`` and ``0.1 / beta``."""
    return contract_dt(grid, _wave_speed(state), control.gain(state), cfl)


def max_stable_dt_euler(grid, state, spec, control, cfl=0.4, source_cfl=0.01):
    """Step of the adaptive runs: the step contract, tightened by the source rates."""
    rate = control.source_rate(state) + alignment_rate(grid, state, spec)
    return min(stable_dt(grid, _wave_speed(state), rate, cfl, source_cfl),
               max_step_dt_euler(grid, state, control, cfl))


def _rate(grid, state, spec, control, stats, energy_source):
    drho, dmom, dener = flux_divergence(flux_rusanov_euler, (state.rho, state.mom, state.ener), grid.dx)
    q1 = q1_source(grid, state, spec)
    if energy_source == "moment":
        q2 = q2_moment_source(grid, state, spec, q1)
    else:
        q2 = q2_source(grid, state, spec)
    if stats is not None:
        if np.sum(q1) * grid.dx != 0:
            stats.q1_nonzero += 1
        if np.sum(q2) * grid.dx > 0:
            stats.q2_positive += 1
    F1, F2 = control.controls(state, grid)
    return drho, dmom + q1 + state.rho * F1, dener + q2 + state.rho * F2


def _admissible(t, rho, mom, ener, rho_floor, e_floor, stats):
    if not all(np.all(np.isfinite(a)) for a in (rho, mom, ener)):
        raise NumericalBlowup(t)
    clipped = rho < rho_floor
    if np.any(clipped):
        count = int(np.count_nonzero(clipped))
        logger.warning("Clipped density in %d cell(s) at t=%.6g", count, t)
        if stats is not None:
            stats.rho_floor_events += count
        rho = np.where(clipped, rho_floor, rho)
        mom = np.where(clipped, 0.0, mom)
        ener = np.where(clipped, 2.0 * rho_floor * e_floor, ener)
    u = mom / rho
    kinetic = 0.5 * u * u
    cold = ener / rho - kinetic < e_floor
    if np.any(cold):
        count = int(np.count_nonzero(cold))
        logger.warning("Clipped internal energy in %d cell(s) at t=%.6g", count, t)
        if stats is not None:
            stats.e_floor_events += count
        # Twice the floor keeps e above it after round-off.
        ener = np.where(cold, rho * (2.0 * e_floor + kinetic), ener)
    return EulerState(t, rho, mom, ener)


def step_euler(state, grid, dt, spec, fb, cfl=0.4, rho_floor=RHO_FLOOR, e_floor=E_FLOOR, stats=None,
               energy_source="moment"):
    """Advance the Euler system by one SSP-RK2 step.

    Args:
        state (EulerState): Current state.
        grid (Grid1D): The grid.
        dt (float): Step, at most :func:`max_step_dt_euler`.
        spec (Kernel): Interaction kernel, or None to switch alignment off.
        fb: Control, an :class:`EulerFeedback` or a :class:`ControlField`.
        cfl (float): Courant number of the acoustic limit.
        rho_floor (float): Density floor.
        e_floor (float): Internal energy floor.
        stats (SolverStats): Optional counters, updated in place.
        energy_source (str): ``"moment"`` or ``"symmetric"`` form of Q2.

    Returns:
        EulerState: The state at ``t + dt``.
    """
    if energy_source not in ENERGY_SOURCES:
        raise InputError("unknown energy source", energy_source=energy_source)
    dt_max = max_step_dt_euler(grid, state, fb, cfl)
    if not dt > 0 or dt > dt_max * (1.0 + 1e-9):
        raise CFLViolation(dt, dt_max)
    t_next = state.t + dt

    k = _rate(grid, state, spec, fb, stats, energy_source)
    stage = _admissible(t_next, *(q + dt * dq for q, dq in zip((state.rho, state.mom, state.ener), k)),
                        rho_floor=rho_floor, e_floor=e_floor, stats=stats)
    k = _rate(grid, stage, spec, fb, stats, energy_source)
    combined = (0.5 * q0 + 0.5 * (q1 + dt * dq)
                for q0, q1, dq in zip((state.rho, state.mom, state.ener), (stage.rho, stage.mom, stage.ener), k))
    result = _admissible(t_next, *combined, rho_floor=rho_floor, e_floor=e_floor, stats=stats)
    if stats is not None:
        stats.steps += 1
    return result


def initial_state(config, grid):
    """Initial data with density ``rho0``, pressure ``p0`` and a bump or constant velocity."""
    rho = np.full(grid.m_cells, float(config.rho0))
    if config.initial == "uniform":
        u = np.full(grid.m_cells, float(config.u0))
    else:
        u = config.u0 * np.exp(-2.0 * grid.centers ** 2)
    e = config.p0 / (2.0 * rho)
    return EulerState(0.0, rho, rho * u, rho * e + 0.5 * rho * u * u)


@dataclass
class EulerRun:
    """Sampled Euler run.

    ``work`` holds the integral of rho (F2 - v_bar F1), the rate at which the
    controls feed the H functional.
    """

    grid: Grid1D
    times: np.ndarray
    h: np.ndarray
    state_cost: np.ndarray
    g_cost: np.ndarray
    work: np.ndarray
    mass: np.ndarray
    lam: float
    final: EulerState
    snapshots: List[EulerState] = field(default_factory=list, repr=False)
    stats: SolverStats = field(default_factory=SolverStats)

    @property
    def total_integrand(self):
        return self.state_cost + self.lam * self.g_cost

    @property
    def total_cost(self):
        return integrate_trapezoid(self.total_integrand, self.times)

    @property
    def mass_drift(self):
        return float(np.max(np.abs(self.mass - self.mass[0])) / self.mass[0])

    def h_series(self):
        return CostSeries(self.times, self.h)

    def cost_series(self):
        return CostSeries(self.times, self.total_integrand)


def simulate_euler(config, spec, initial=None, control=None):
    """Run the controlled Euler system over ``[0, config.t_end]``.

    Args:
        config: Euler settings, the pressureless keys plus ``p0``, ``e_floor``
            and ``energy_source``.
        spec (Kernel): Interaction kernel, or None to switch alignment off.
        initial (EulerState): Initial state overriding the config's.
        control: Control overriding the config's feedback.

    Returns:
        EulerRun: The sampled run.
    """
    grid = Grid1D(config.x_min, config.x_max, config.m_cells)
    state = initial if initial is not None else initial_state(config, grid)
    if state.rho.shape != (grid.m_cells,):
        raise InputError("initial state does not match the grid", cells=grid.m_cells, got=state.rho.shape)
    primitives(state, config.e_floor)
    if control is None:
        control = EulerFeedback(config.beta, config.v_bar, config.e_floor)
    stats = SolverStats()
    samples = []

    def record(current):
        prim = primitives(current, config.e_floor)
        F1, F2 = control.controls(current, grid)
        dev = prim.u - config.v_bar
        samples.append((current.t,
                        h_functional(grid, current, config.v_bar),
                        grid.integrate(current.rho * (dev * dev + 2.0 * prim.e)),
                        grid.integrate(cost_g(current, F1, F2, config.e_floor)),
                        grid.integrate(current.rho * (F2 - config.v_bar * F1)),
                        grid.integrate(current.rho)))

    def dt_limit(current):
        return max_stable_dt_euler(grid, current, spec, control, config.cfl, config.source_cfl)

    def advance(current, dt):
        return step_euler(current, grid, dt, spec, control, config.cfl, config.rho_floor, config.e_floor, stats,
                          config.energy_source)

    logger.info("Euler run on %d cells up to t=%g", grid.m_cells, config.t_end)
    final, snapshots = march(state, config.t_end, dt_limit, advance, record, tuple(config.snapshot_times))
    columns = np.array(samples, dtype=np.float64).T
    logger.info("Euler run finished after %d steps, %d floor event(s)", stats.steps, stats.floor_events)
    return EulerRun(grid=grid, times=columns[0], h=columns[1], state_cost=columns[2], g_cost=columns[3],
                    work=columns[4], mass=columns[5], lam=config.lam, final=final,
                    snapshots=snapshots, stats=stats)
