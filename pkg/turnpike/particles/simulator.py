"""
Module for integrating the controlled N-particle alignment system

    dx_i/dt = v_i,
    dv_i/dt = (1/N) sum_j Psi(x_i, x_j) (v_j - v_i) + f_i.

The pairwise sum is evaluated block by block in a fixed i-then-j order, so a
run is bit-reproducible for given inputs. Time stepping is the classical
four-stage Runge-Kutta scheme on a uniform grid and the running cost is
integrated with the trapezoidal rule on that grid.
"""
import logging

import numpy as np

from turnpike.exceptions import InputError, NumericalBlowup
from .state import ParticleState, ParticleTrajectory, as_vector

logger = logging.getLogger('turnpike.particles')


def mean_square_deviation(v, v_bar):
    """Return (1/N) sum_i |v_i - v_bar|^2 for an (N, D) array."""
    dev = v - as_vector(v_bar, v.shape[1], "v_bar")
    return float(np.sum(dev * dev) / v.shape[0])


def velocity_cost(state, v_bar):
    """Return ||v - v_bar||_N^2 of a particle state."""
    return mean_square_deviation(state.v, v_bar)


def _alignment(x, v, kernel):
    """Return (1/N) sum_j Psi(x_i, x_j) (v_j - v_i) for every particle."""
    out = np.empty_like(v)
    for start, stop, psi in kernel.row_blocks(x):
        rel = v[None, :, :] - v[start:stop, None, :]
        out[start:stop] = np.einsum('ij,ijd->id', psi, rel)
    return out / v.shape[0]


def _derivatives(x, v, kernel, law):
    return v, _alignment(x, v, kernel) + law.evaluate(v)


def rhs(state, spec, law):
    """Evaluate the right-hand side of the particle system.

    Args:
        state (ParticleState): Current state.
        spec (Kernel): Interaction kernel.
        law (ControlLaw): Control law.

    Returns:
        tuple: ``(dx, dv)`` arrays of shape (N, D).
    """
    if not (np.all(np.isfinite(state.x)) and np.all(np.isfinite(state.v))):
        raise InputError("state entries must be finite", t=state.t)
    return _derivatives(state.x, state.v, spec, law)


def _rk4(x, v, dt, kernel, law):
    k1x, k1v = _derivatives(x, v, kernel, law)
    k2x, k2v = _derivatives(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v, kernel, law)
    k3x, k3v = _derivatives(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v, kernel, law)
    k4x, k4v = _derivatives(x + dt * k3x, v + dt * k3v, kernel, law)
    x_new = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    v_new = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return x_new, v_new


def _check_finite(x, v, t):
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
        raise NumericalBlowup(t, "particle state became non-finite")


def step_rk4(state, dt, spec, law):
    """Advance a particle state by one classical Runge-Kutta step.

    Args:
        state (ParticleState): Current state.
        dt (float): Positive step.
        spec (Kernel): Interaction kernel.
        law (ControlLaw): Control law.

    Returns:
        ParticleState: The state at ``state.t + dt``.
    """
    if not dt > 0:
        raise InputError("time step must be positive", dt=dt)
    x, v = _rk4(state.x, state.v, dt, spec, law)
    _check_finite(x, v, state.t + dt)
    return ParticleState(state.t + dt, x, v)


def simulate(init, spec, law, dt, t_end, lam, v_bar, keep_states=True):
    """Integrate the controlled system and record its running cost.

    Args:
        init (ParticleState): Initial state.
        spec (Kernel): Interaction kernel.
        law (ControlLaw): Control law.
        dt (float): Fixed step; must divide ``t_end - init.t`` up to rounding.
        t_end (float): Final time.
        lam (float): Control weight lambda of the cost.
        v_bar: Target velocity of the state cost.
        keep_states (bool): Record positions and velocities at every step.

    Returns:
        ParticleTrajectory: The sampled run.

    Raises:
        InputError: On inconsistent time grid or cost parameters.
        NumericalBlowup: If the state stops being finite.
    """
    horizon = t_end - init.t
    if not (dt > 0 and horizon > 0):
        raise InputError("need dt > 0 and t_end > init.t", dt=dt, t_end=t_end, t0=init.t)
    if not lam > 0:
        raise InputError("lambda must be positive", lam=lam)
    steps = int(round(horizon / dt))
    if steps < 1 or abs(steps * dt - horizon) > 1e-9 * max(1.0, horizon):
        raise InputError("dt must divide the horizon", dt=dt, horizon=horizon)

    v_bar = as_vector(v_bar, init.d, "v_bar")
    times = init.t + dt * np.arange(steps + 1)
    state_cost = np.empty(steps + 1)
    control_cost = np.empty(steps + 1)
    xs = np.empty((steps + 1,) + init.x.shape) if keep_states else None
    vs = np.empty((steps + 1,) + init.v.shape) if keep_states else None

    logger.debug("Simulating N=%d D=%d steps=%d law=%s", init.n, init.d, steps, law.variant.value)
    x, v = init.x.copy(), init.v.copy()
    for k in range(steps + 1):
        if k > 0:
            x, v = _rk4(x, v, dt, spec, law)
            _check_finite(x, v, times[k])
        state_cost[k] = mean_square_deviation(v, v_bar)
        f = law.evaluate(v)
        control_cost[k] = float(np.sum(f * f) / init.n)
        if keep_states:
            xs[k], vs[k] = x, v

    return ParticleTrajectory(times=times, state_cost=state_cost, control_cost=control_cost,
                              lam=float(lam), final=ParticleState(times[-1], x, v), x=xs, v=vs)


def sample_initial(n, d, mean_x, mean_v, sigma, seed):
    """Draw i.i.d. normal positions and velocities.

    Args:
        n (int): Number of particles.
        d (int): Space dimension.
        mean_x: Mean position (scalar or length-d).
        mean_v: Mean velocity (scalar or length-d).
        sigma (float): Standard deviation; ``0`` gives a point mass.
        seed (int): Seed of the generator.

    Returns:
        ParticleState: State at ``t = 0``.
    """
    if n < 1 or d < 1:
        raise InputError("need n >= 1 and d >= 1", n=n, d=d)
    if not sigma >= 0:
        raise InputError("sigma must be nonnegative", sigma=sigma)
    rng = np.random.default_rng(seed)
    x = as_vector(mean_x, d, "mean_x") + sigma * rng.standard_normal((n, d))
    v = as_vector(mean_v, d, "mean_v") + sigma * rng.standard_normal((n, d))
    return ParticleState(0.0, x, v)
