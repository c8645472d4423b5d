"""
Module for the controlled one-dimensional pressureless Euler system

    rho_t + (rho u)_x = 0,
    (rho u)_t + (rho u^2)_x = Q1 + rho f_H,

discretized with Rusanov fluxes on a periodic grid and advanced with the
two-stage strong-stability-preserving Runge-Kutta scheme. Sources are
evaluated inside every stage.
"""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from turnpike.diagnostics import CostSeries, integrate_trapezoid
from turnpike.exceptions import CFLViolation, InputError, NumericalBlowup
from .grid import Grid1D, SolverStats, contract_dt, flux_divergence, march, stable_dt
from .sources import alignment_rate, q1_source

logger = logging.getLogger('turnpike.hydro')

RHO_FLOOR = 1e-12


@dataclass
class PressurelessState:
    """Cell averages of density and momentum.

    Attributes:
        t (float): Time.
        rho (numpy.ndarray): Per-cell density, strictly positive.
        mom (numpy.ndarray): Per-cell momentum rho u.
    """

    t: float
    rho: np.ndarray
    mom: np.ndarray

    def __post_init__(self):
        self.t = float(self.t)
        self.rho = np.array(self.rho, dtype=np.float64)
        self.mom = np.array(self.mom, dtype=np.float64)
        if self.rho.ndim != 1 or self.rho.shape != self.mom.shape:
            raise InputError("rho and mom must be 1-D arrays of equal length",
                             rho=self.rho.shape, mom=self.mom.shape)
        if not (np.all(np.isfinite(self.rho)) and np.all(np.isfinite(self.mom))):
            raise InputError("state entries must be finite", t=self.t)
        if np.any(self.rho <= 0):
            raise InputError("density must be positive", t=self.t)

    @property
    def u(self):
        return self.mom / self.rho


@dataclass(frozen=True)
class HydroFeedback:
    """Feedback f_H = -beta (u - v_bar), optionally weighted by the density.

    Attributes:
        beta (float): Gain, nonnegative.
        v_bar (float): Target velocity.
        density_weighted (bool): Use f_H = -beta rho (u - v_bar) instead.
    """

    beta: float
    v_bar: float
    density_weighted: bool = False

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise InputError("feedback gain must be nonnegative", beta=self.beta)

    def momentum_control(self, state, grid):
        control = -self.beta * (state.u - self.v_bar)
        if self.density_weighted:
            control *= state.rho
        return control

    def source_rate(self, state):
        if self.density_weighted:
            return self.beta * float(np.max(state.rho))
        return self.beta

    def gain(self, state):
        return self.source_rate(state)


def flux_rusanov_pless(left, right):
    """Rusanov flux of the pressureless system.

    Args:
        left: ``(rho, m)`` on the left of the interface, scalars or arrays.
        right: ``(rho, m)`` on the right of the interface.

    Returns:
        tuple: ``(rho_flux, m_flux)``.
    """
    rho_l, m_l = left
    rho_r, m_r = right
    u_l = m_l / rho_l
    u_r = m_r / rho_r
    s = np.maximum(np.abs(u_l), np.abs(u_r))
    rho_flux = 0.5 * (m_l + m_r) - 0.5 * s * (rho_r - rho_l)
    m_flux = 0.5 * (m_l * u_l + m_r * u_r) - 0.5 * s * (m_r - m_l)
    return rho_flux, m_flux


def energy_e(grid, state, v_bar):
    """Return 1/2 sum_i rho_i (u_i - v_bar)^2 dx."""
    dev = state.u - v_bar
    return 0.5 * grid.integrate(state.rho * dev * dev)


def max_step_dt(grid, state, control, cfl=0.4):
    """Largest step :func:`step` accepts for ``state``."""
    return contract_dt(grid, float(np.max(np.abs(state.u))), control.gain(state), cfl)


def max_stable_dt(grid, state, spec, control, cfl=0.4, source_cfl=0.01):
    """Step of the adaptive runs: the step contract, tightened by the source rates."""
    rate = control.source_rate(state) + alignment_rate(grid, state, spec)
    speed = float(np.max(np.abs(state.u)))
    return min(stable_dt(grid, speed, rate, cfl, source_cfl), max_step_dt(grid, state, control, cfl))


def _rate(grid, state, spec, control, stats):
    drho, dmom = flux_divergence(flux_rusanov_pless, (state.rho, state.mom), grid.dx)
    q1 = q1_source(grid, state, spec)
    if stats is not None and np.sum(q1) * grid.dx != 0:
        stats.q1_nonzero += 1
    return drho, dmom + q1 + state.rho * control.momentum_control(state, grid)


def _admissible(t, rho, mom, rho_floor, stats):
    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(mom))):
        raise NumericalBlowup(t)
    clipped = rho < rho_floor
    if np.any(clipped):
        count = int(np.count_nonzero(clipped))
        logger.warning("Clipped density in %d cell(s) at t=%.6g", count, t)
        if stats is not None:
            stats.rho_floor_events += count
        rho = np.where(clipped, rho_floor, rho)
        mom = np.where(clipped, 0.0, mom)
    return PressurelessState(t, rho, mom)


def step(state, grid, dt, spec, fb, cfl=0.4, rho_floor=RHO_FLOOR, stats=None):
    """Advance the pressureless system by one SSP-RK2 step.

    Args:
        state (PressurelessState): Current state.
        grid (Grid1D): The grid.
        dt (float): Step, at most :func:`max_step_dt`.
        spec (Kernel): Interaction kernel, or None to switch alignment off.
        fb: Control, a :class:`HydroFeedback` or a :class:`ControlField`.
        cfl (float): Courant number of the advective limit.
        rho_floor (float): Density floor.
        stats (SolverStats): Optional counters, updated in place.

    Returns:
        PressurelessState: The state at ``t + dt``.

    Raises:
        CFLViolation: ``dt`` exceeds the step contract.
        NumericalBlowup: A stage produced non-finite values.
    """
    dt_max = max_step_dt(grid, state, fb, cfl)
    if not dt > 0 or dt > dt_max * (1.0 + 1e-9):
        raise CFLViolation(dt, dt_max)
    t_next = state.t + dt

    k_rho, k_mom = _rate(grid, state, spec, fb, stats)
    stage = _admissible(t_next, state.rho + dt * k_rho, state.mom + dt * k_mom, rho_floor, stats)
    k_rho, k_mom = _rate(grid, stage, spec, fb, stats)
    rho = 0.5 * state.rho + 0.5 * (stage.rho + dt * k_rho)
    mom = 0.5 * state.mom + 0.5 * (stage.mom + dt * k_mom)
    result = _admissible(t_next, rho, mom, rho_floor, stats)
    if stats is not None:
        stats.steps += 1
    return result


def initial_state(config, grid):
    """Initial data: density ``rho0`` and velocity ``u0 exp(-2 x^2)`` or constant ``u0``."""
    rho = np.full(grid.m_cells, float(config.rho0))
    if config.initial == "uniform":
        u = np.full(grid.m_cells, float(config.u0))
    else:
        u = config.u0 * np.exp(-2.0 * grid.centers ** 2)
    return PressurelessState(0.0, rho, rho * u)


@dataclass
class PressurelessRun:
    """Sampled pressureless run.

    Attributes:
        grid (Grid1D): The grid.
        times (numpy.ndarray): Sample instants, one per accepted step.
        energy (numpy.ndarray): Energy functional at each instant.
        state_cost (numpy.ndarray): Integral of rho |u - v_bar|^2.
        control_cost (numpy.ndarray): Integral of rho |f_H|^2.
        mass (numpy.ndarray): Total mass.
        lam (float): Control weight.
        final (PressurelessState): Last state.
        snapshots (list): States kept at the snapshot times.
        stats (SolverStats): Solver counters.
    """

    grid: Grid1D
    times: np.ndarray
    energy: np.ndarray
    state_cost: np.ndarray
    control_cost: np.ndarray
    mass: np.ndarray
    lam: float
    final: PressurelessState
    snapshots: List[PressurelessState] = field(default_factory=list, repr=False)
    stats: SolverStats = field(default_factory=SolverStats)

    @property
    def total_integrand(self):
        return self.state_cost + self.lam * self.control_cost

    @property
    def total_cost(self):
        return integrate_trapezoid(self.total_integrand, self.times)

    @property
    def mass_drift(self):
        """Largest relative deviation of the mass from its initial value."""
        return float(np.max(np.abs(self.mass - self.mass[0])) / self.mass[0])

    def energy_series(self):
        return CostSeries(self.times, self.energy)

    def cost_series(self):
        return CostSeries(self.times, self.total_integrand)


def simulate_pless(config, spec, initial=None, control=None):
    """Run the controlled pressureless system over ``[0, config.t_end]``.

    Args:
        config: Pressureless settings (``x_min``, ``x_max``, ``m_cells``,
            ``cfl``, ``source_cfl``, ``beta``, ``v_bar``, ``lam``, ``t_end``,
            ``rho_floor``, ``density_weighted``, ``snapshot_times`` and the
            initial-data keys ``rho0``, ``u0``, ``initial``).
        spec (Kernel): Interaction kernel, or None to switch alignment off.
        initial (PressurelessState): Initial state overriding the config's.
        control: Control overriding the config's feedback.

    Returns:
        PressurelessRun: The sampled run.
    """
    grid = Grid1D(config.x_min, config.x_max, config.m_cells)
    state = initial if initial is not None else initial_state(config, grid)
    if state.rho.shape != (grid.m_cells,):
        raise InputError("initial state does not match the grid", cells=grid.m_cells, got=state.rho.shape)
    if control is None:
        control = HydroFeedback(config.beta, config.v_bar, config.density_weighted)
    stats = SolverStats()
    samples = []

    def record(current):
        f = control.momentum_control(current, grid)
        dev = current.u - config.v_bar
        samples.append((current.t,
                        energy_e(grid, current, config.v_bar),
                        grid.integrate(current.rho * dev * dev),
                        grid.integrate(current.rho * f * f),
                        grid.integrate(current.rho)))

    def dt_limit(current):
        return max_stable_dt(grid, current, spec, control, config.cfl, config.source_cfl)

    def advance(current, dt):
        return step(current, grid, dt, spec, control, config.cfl, config.rho_floor, stats)

    logger.info("Pressureless run on %d cells up to t=%g", grid.m_cells, config.t_end)
    final, snapshots = march(state, config.t_end, dt_limit, advance, record, tuple(config.snapshot_times))
    columns = np.array(samples, dtype=np.float64).T
    logger.info("Pressureless run finished after %d steps, %d floor event(s)", stats.steps, stats.floor_events)
    return PressurelessRun(grid=grid, times=columns[0], energy=columns[1], state_cost=columns[2],
                           control_cost=columns[3], mass=columns[4], lam=config.lam, final=final,
                           snapshots=snapshots, stats=stats)
