"""Finite-volume solvers for the controlled hydrodynamic systems."""
# flake8: noqa
from .controls import ControlField
from .euler import (
    E_FLOOR, ENERGY_SOURCES, EulerFeedback, EulerRun, EulerState, Primitives, cost_g, feedback_controls,
    flux_rusanov_euler, h_functional, max_stable_dt_euler, max_step_dt_euler, primitives, simulate_euler,
    step_euler)
from .euler import initial_state as euler_initial_state
from .grid import Grid1D, SolverStats, contract_dt, exact_row_sums, flux_divergence, march, stable_dt
from .pressureless import (
    RHO_FLOOR, HydroFeedback, PressurelessRun, PressurelessState, energy_e, flux_rusanov_pless,
    max_stable_dt, max_step_dt, simulate_pless, step)
from .pressureless import initial_state as pless_initial_state
from .sources import alignment_rate, q1_source, q2_moment_source, q2_source
