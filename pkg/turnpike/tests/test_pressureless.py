"""Tests for the pressureless hydrodynamic solver."""
import math

import numpy as np
import pytest
from scipy import integrate

from turnpike.diagnostics import check_bound, fit_exponential, monotone_bound_check
from turnpike.exceptions import CFLViolation, InputError
from turnpike.hydro import ControlField, Grid1D, HydroFeedback, PressurelessState, SolverStats, energy_e, \
    exact_row_sums, flux_rusanov_pless, march, max_stable_dt, max_step_dt, pless_initial_state, q1_source, \
    simulate_pless, stable_dt, step
from turnpike.io import PressurelessSection
from turnpike.kernel import KernelSpec


def _random_state(grid, seed=0):
    rng = np.random.default_rng(seed)
    rho = rng.uniform(0.05, 0.5, grid.m_cells)
    return PressurelessState(0.0, rho, rho * rng.normal(size=grid.m_cells))


def test_grid():
    grid = Grid1D(-5.0, 5.0, 200)
    assert grid.dx == 0.05
    assert grid.centers[0] == pytest.approx(-4.975)
    assert grid.integrate(np.ones(200)) == pytest.approx(10.0)
    assert grid.kernel_matrix(None) is None
    with pytest.raises(InputError):
        Grid1D(1.0, 1.0, 10)


def test_flux_is_consistent():
    rho, mom = np.array([0.3, 2.0]), np.array([0.6, -1.0])
    flux = flux_rusanov_pless((rho, mom), (rho, mom))
    assert flux[0] == pytest.approx(mom)
    assert flux[1] == pytest.approx(mom * mom / rho)


def test_q1_integral_is_exactly_zero():
    grid = Grid1D(-5.0, 5.0, 97)
    for seed in range(10):
        q1 = q1_source(grid, _random_state(grid, seed), KernelSpec(gamma=0.5))
        assert np.sum(q1) * grid.dx == 0.0


def test_q1_vanishes_without_kernel_or_shear():
    grid = Grid1D(m_cells=20)
    state = _random_state(grid)
    assert np.all(q1_source(grid, state, None) == 0.0)
    flat = PressurelessState(0.0, state.rho, 0.4 * state.rho)
    assert np.abs(q1_source(grid, flat, KernelSpec())).max() < 1e-12


def test_exact_row_sums():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(30, 30)) * 10.0 ** rng.integers(-8, 8, (30, 30))
    terms = np.triu(a, 1) - np.triu(a, 1).T
    sums = exact_row_sums(terms)
    assert np.sum(sums) == 0.0
    assert sums == pytest.approx(terms.sum(axis=1), rel=1e-9, abs=1e-7 * np.abs(terms).max())
    assert np.all(exact_row_sums(np.zeros((3, 3))) == 0.0)


def test_energy():
    grid = Grid1D(0.0, 1.0, 4)
    state = PressurelessState(0.0, np.full(4, 2.0), np.full(4, 2.0))
    assert energy_e(grid, state, 0.0) == pytest.approx(1.0)
    assert energy_e(grid, state, 1.0) == 0.0


def test_step_conserves_mass():
    grid = Grid1D(-5.0, 5.0, 64)
    state = _random_state(grid, 3)
    spec, fb = KernelSpec(), HydroFeedback(2.0, -0.1)
    dt = max_stable_dt(grid, state, spec, fb)
    after = step(state, grid, dt, spec, fb)
    assert after.t == dt
    assert grid.integrate(after.rho) == pytest.approx(grid.integrate(state.rho), rel=1e-14)
    assert np.all(after.rho > 0)


def test_step_rejects_large_dt():
    grid = Grid1D(m_cells=20)
    state = _random_state(grid)
    fb = HydroFeedback(2.0, 0.0)
    dt_max = max_step_dt(grid, state, fb)
    assert max_stable_dt(grid, state, KernelSpec(), fb) <= dt_max
    with pytest.raises(CFLViolation):
        step(state, grid, 2.0 * dt_max, None, fb)
    with pytest.raises(CFLViolation):
        step(state, grid, 0.0, None, fb)
    after = step(state, grid, dt_max, None, fb)
    assert after.t == dt_max


def test_step_accepts_every_dt_within_contract():
    grid = Grid1D(-5.0, 5.0, 200)
    state = PressurelessState(0.0, np.full(200, 0.1), np.full(200, 0.03))
    fb = HydroFeedback(2.0, 0.0)
    # 0.05 <= 0.4 dx / 0.3 and 0.05 <= 0.1 / beta.
    assert max_step_dt(grid, state, fb) == pytest.approx(0.05)
    after = step(state, grid, 0.05, None, fb)
    assert after.u == pytest.approx(np.full(200, 0.3 * (1.0 - 0.1 + 0.005)))
    assert step(state, grid, 0.05, KernelSpec(), fb).t == 0.05
    with pytest.raises(CFLViolation):
        step(state, grid, 0.051, None, fb)


def test_flux_of_colliding_cells():
    assert flux_rusanov_pless((1.0, 1.0), (1.0, -1.0)) == pytest.approx((0.0, 2.0))


def test_two_cell_q1():
    grid = Grid1D(0.0, 2.0, 2)
    state = PressurelessState(0.0, [1.0, 1.0], [0.0, 2.0])
    assert q1_source(grid, state, KernelSpec(c_psi=1.0, gamma=0.0)) == pytest.approx([2.0, -2.0])


def test_energy_against_quadrature():
    config = PressurelessSection()
    grid = Grid1D(config.x_min, config.x_max, config.m_cells)
    state = pless_initial_state(config, grid)
    exact, _ = integrate.quad(lambda x: 0.5 * 0.1 * (math.exp(-2.0 * x * x) + 0.1) ** 2, -5.0, 5.0)
    assert energy_e(grid, state, config.v_bar) == pytest.approx(exact, rel=1e-8)


def test_stable_dt():
    grid = Grid1D(0.0, 1.0, 10)
    assert stable_dt(grid, 2.0, 0.0, 0.5, 0.1) == pytest.approx(0.025)
    assert stable_dt(grid, 0.0, 4.0, 0.5, 0.1) == pytest.approx(0.025)
    assert stable_dt(grid, 0.0, 0.0, 0.5, 0.1) == math.inf


def test_density_weighted_rate():
    grid = Grid1D(m_cells=10)
    state = PressurelessState(0.0, np.linspace(0.1, 0.5, 10), np.zeros(10))
    assert HydroFeedback(2.0, 0.0).source_rate(state) == 2.0
    assert HydroFeedback(2.0, 0.0, density_weighted=True).source_rate(state) == pytest.approx(1.0)
    weighted = HydroFeedback(2.0, -1.0, density_weighted=True).momentum_control(state, grid)
    assert weighted == pytest.approx(-2.0 * state.rho)


def test_march_lands_on_snapshots():
    seen = []

    class Clock:
        def __init__(self, t):
            self.t = t

    final, snapshots = march(Clock(0.0), 1.0, lambda s: 0.3, lambda s, dt: Clock(s.t + dt), seen.append,
                             snapshot_times=(0.0, 0.5, 1.0))
    times = [s.t for s in seen]
    assert times == pytest.approx([0.0, 0.3, 0.5, 0.8, 1.0])
    assert [s.t for s in snapshots] == [0.0, 0.5, 1.0]
    assert final.t == 1.0


def test_uniform_state_relaxes_exponentially():
    def run(source_cfl):
        config = PressurelessSection(m_cells=20, initial="uniform", u0=0.3, t_end=2.0, snapshot_times=(),
                                     source_cfl=source_cfl)
        result = simulate_pless(config, None)
        exact = config.v_bar + (config.u0 - config.v_bar) * math.exp(-config.beta * config.t_end)
        assert result.times[-1] == config.t_end
        return float(np.max(np.abs(result.final.u - exact)))

    coarse, fine = run(0.05), run(0.025)
    assert coarse <= 1e-4
    assert math.log2(coarse / fine) >= 1.9


def test_uniform_state_on_reference_grid():
    config = PressurelessSection(initial="uniform", u0=0.3, t_end=2.0, snapshot_times=())
    result = simulate_pless(config, None)
    exact = -0.1 + 0.4 * math.exp(-4.0)
    assert np.abs(result.final.u - exact).max() <= 1e-4


def test_feedback_decay():
    config = PressurelessSection(m_cells=100, t_end=2.0, snapshot_times=(0.0, 0.5, 2.0))
    result = simulate_pless(config, KernelSpec())
    energy = result.energy_series()
    assert monotone_bound_check(energy, 1.0, 1e-6)
    assert check_bound(energy, 1.0, 4.0, 1e-3)[0]
    assert result.mass_drift <= 1e-12
    assert result.stats.floor_events == 0
    assert result.stats.q1_nonzero == 0
    assert fit_exponential(energy, (0.5, 2.0)).alpha_hat >= 0.9 * 4.0
    assert [s.t for s in result.snapshots] == [0.0, 0.5, 2.0]


def test_cheap_control():
    config = PressurelessSection(m_cells=100, beta=1.0, t_end=10.0, snapshot_times=())
    result = simulate_pless(config, KernelSpec())
    assert result.total_cost <= math.sqrt(config.lam) * result.state_cost[0] * (1.0 + 1e-2)


def test_density_weighted_run():
    config = PressurelessSection(m_cells=50, t_end=1.0, density_weighted=True, snapshot_times=())
    result = simulate_pless(config, KernelSpec())
    assert result.energy[-1] < result.energy[0]
    assert result.stats.floor_events == 0


def test_control_field():
    grid = Grid1D(m_cells=8)
    state = pless_initial_state(PressurelessSection(m_cells=8), grid)
    field = ControlField(lambda t, x: np.sin(x), rate=1.0)
    assert field.momentum_control(state, grid) == pytest.approx(np.sin(grid.centers))
    assert ControlField(lambda t, x: 2.0).momentum_control(state, grid) == pytest.approx(np.full(8, 2.0))
    after = step(state, grid, 1e-3, None, field)
    assert np.all(np.isfinite(after.mom))


def test_stats_are_counted():
    grid = Grid1D(m_cells=16)
    state = _random_state(grid)
    stats = SolverStats()
    fb = HydroFeedback(1.0, 0.0)
    step(state, grid, 0.5 * max_stable_dt(grid, state, KernelSpec(), fb), KernelSpec(), fb, stats=stats)
    assert stats.steps == 1 and stats.floor_events == 0 and stats.q1_nonzero == 0


def test_initial_state_mismatch():
    config = PressurelessSection(m_cells=10)
    with pytest.raises(InputError):
        simulate_pless(config, None, initial=_random_state(Grid1D(m_cells=12)))


def test_invalid_state():
    with pytest.raises(InputError):
        PressurelessState(0.0, [1.0, 0.0], [0.0, 0.0])
