"""
Module for the periodic one-dimensional finite-volume grid and the pieces
shared by the pressureless and the full Euler solvers.

Classes:
    - Grid1D: Uniform cells on [x_min, x_max] with periodic boundaries.
    - SolverStats: Counters of floor events and source-sign checks.

Functions:
    - flux_divergence: Conservative difference of periodic interface fluxes.
    - stable_dt: Largest step allowed by the wave speed and the source rate.
    - contract_dt: Largest step a single solver step accepts.
    - exact_row_sums: Row sums of antisymmetric matrices with an exactly zero total.
    - march: Adaptive time loop landing on snapshot times.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from turnpike.exceptions import InputError

# Bound on dt times the feedback gain accepted by a single step.
GAIN_CFL = 0.1


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid.

    Attributes:
        x_min (float): Left end.
        x_max (float): Right end.
        m_cells (int): Number of cells.
    """

    x_min: float = -5.0
    x_max: float = 5.0
    m_cells: int = 200

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise InputError("x_max must exceed x_min", x_min=self.x_min, x_max=self.x_max)
        if self.m_cells < 2:
            raise InputError("need at least two cells", m_cells=self.m_cells)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.m_cells

    @property
    def centers(self):
        return self.x_min + self.dx * (np.arange(self.m_cells) + 0.5)

    def integrate(self, values):
        """Return the midpoint-rule integral of cell values."""
        return float(np.sum(values) * self.dx)

    def kernel_matrix(self, kernel):
        """Return Psi between cell centers, or None for a switched-off kernel."""
        if kernel is None:
            return None
        return _kernel_matrix(self, kernel)


@lru_cache(maxsize=16)
def _kernel_matrix(grid, kernel):
    # Plain Euclidean distance between centers, not the periodic one.
    psi = kernel.matrix(grid.centers)
    psi.setflags(write=False)
    return psi


@dataclass
class SolverStats:
    """Counters collected while stepping a hydrodynamic solver.

    Attributes:
        steps (int): Accepted steps.
        rho_floor_events (int): Cells whose density was clipped.
        e_floor_events (int): Cells whose internal energy was clipped.
        q1_nonzero (int): Stages where the integral of Q1 was not exactly 0.
        q2_positive (int): Stages where the integral of Q2 was positive.
    """

    steps: int = 0
    rho_floor_events: int = 0
    e_floor_events: int = 0
    q1_nonzero: int = 0
    q2_positive: int = 0

    @property
    def floor_events(self):
        return self.rho_floor_events + self.e_floor_events


def flux_divergence(flux, conserved, dx):
    """Return -(F_{i+1/2} - F_{i-1/2}) / dx for periodic cells.

    Args:
        flux: Numerical flux taking tuples of left and right cell arrays.
        conserved: Tuple of conserved arrays.
        dx (float): Cell width.
    """
    shifted = tuple(np.roll(q, -1) for q in conserved)
    interface = flux(conserved, shifted)
    return tuple(-(f - np.roll(f, 1)) / dx for f in interface)


def stable_dt(grid, wave_speed, source_rate, cfl, source_cfl):
    """Largest step with ``dt <= cfl dx / wave_speed`` and ``dt <= source_cfl / source_rate``."""
    limits = [np.inf]
    if wave_speed > 0:
        limits.append(cfl * grid.dx / wave_speed)
    if source_rate > 0:
        limits.append(source_cfl / source_rate)
    return float(min(limits))


def contract_dt(grid, wave_speed, gain, cfl):
    """Largest step with ``dt <= cfl dx / wave_speed`` and ``dt <= 0.1 / gain``.

    This is the precondition of the single-step solvers. The adaptive runs
    use the tighter :func:`stable_dt`, which also resolves the alignment
    source.
    """
    return stable_dt(grid, wave_speed, gain, cfl, GAIN_CFL)


def exact_row_sums(terms):
    """Row sums of an antisymmetric matrix whose grand total is exactly zero.

    Entries are rounded to a common power-of-two quantum small enough that
    every partial sum is an exact float; rounding is odd-symmetric, so the
    rounded matrix stays antisymmetric and its total is 0 bit for bit.
    """
    scale = float(np.max(np.abs(terms))) if terms.size else 0.0
    if scale == 0.0:
        return np.zeros(terms.shape[0])
    n = terms.shape[0]
    exponent = np.frexp(scale * n * n)[1] - 53
    quantized = np.ldexp(np.rint(np.ldexp(terms, -exponent)), exponent)
    return quantized.sum(axis=1)


def march(state, t_end, dt_limit, advance, record, snapshot_times=()):
    """Advance ``state`` to ``t_end`` with the largest admissible steps.

    Steps are shortened to land exactly on every snapshot time and on
    ``t_end``; a step that would stop a hair before its target is stretched
    onto it instead.

    Args:
        state: Initial hydro state; its ``t`` is overwritten on every step.
        t_end (float): Final time.
        dt_limit: Callable ``state -> dt_max``.
        advance: Callable ``(state, dt) -> state``.
        record: Callable invoked with every accepted state, the initial one included.
        snapshot_times: Instants at which states are kept.

    Returns:
        tuple: ``(final_state, snapshots)``.
    """
    snapshots = [state] if state.t in snapshot_times else []
    pending = sorted(t for t in set(snapshot_times) if state.t < t <= t_end)
    record(state)
    while state.t < t_end:
        dt_max = dt_limit(state)
        target = pending[0] if pending else t_end
        if dt_max >= (target - state.t) * (1.0 - 1e-10):
            t_next = target
        else:
            t_next = state.t + dt_max
        state = advance(state, t_next - state.t)
        state.t = t_next
        record(state)
        if pending and t_next == pending[0]:
            snapshots.append(state)
            pending.pop(0)
    return state, snapshots
