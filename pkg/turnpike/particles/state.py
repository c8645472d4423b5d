"""
Module for the particle-level data types.

Classes:
    - ParticleState: Positions and velocities of N particles in D dimensions.
    - ControlVariant: Enum of the available control laws.
    - ControlLaw: Feedback law f_i = -beta (v_i - v_bar).
    - ParticleTrajectory: Sampled run of the controlled system with its costs.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from turnpike.diagnostics.series import CostSeries, integrate_trapezoid
from turnpike.exceptions import InputError
from turnpike.kernel import as_points


def as_vector(value, d, name="vector"):
    """Broadcast a scalar or length-D sequence to a float vector of length ``d``."""
    arr = np.atleast_1d(np.asarray(value, dtype=np.float64))
    if arr.ndim != 1:
        raise InputError("%s must be one-dimensional" % name, shape=arr.shape)
    if arr.shape[0] == 1 and d != 1:
        arr = np.full(d, arr[0])
    if arr.shape[0] != d:
        raise InputError("%s has the wrong dimension" % name, expected=d, got=arr.shape[0])
    return arr


@dataclass
class ParticleState:
    """State of the particle system at one instant.

    Attributes:
        t (float): Time.
        x (numpy.ndarray): (N, D) positions.
        v (numpy.ndarray): (N, D) velocities.
    """

    t: float
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.t = float(self.t)
        # 1-D input means N particles on the line.
        self.x = np.array(as_points(self.x))
        self.v = np.array(as_points(self.v))
        if self.x.shape != self.v.shape:
            raise InputError("x and v must be (N, D) arrays of identical shape",
                             x=self.x.shape, v=self.v.shape)
        if self.x.shape[0] < 1 or self.x.shape[1] < 1:
            raise InputError("a state needs N >= 1 and D >= 1", shape=self.x.shape)
        if not (np.isfinite(self.t) and np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.v))):
            raise InputError("state entries must be finite", t=self.t)

    @property
    def n(self):
        """Number of particles."""
        return self.x.shape[0]

    @property
    def d(self):
        """Space dimension."""
        return self.x.shape[1]


class ControlVariant(Enum):
    """Enum class for the particle control laws."""
    NONE = "none"
    VELOCITY_FEEDBACK = "velocity_feedback"


@dataclass(frozen=True)
class ControlLaw:
    """Closed-loop control applied to every particle.

    Attributes:
        variant (ControlVariant): Which law is active.
        beta (float): Feedback gain, nonnegative.
        v_bar (tuple): Target velocity.
    """

    variant: ControlVariant = ControlVariant.NONE
    beta: float = 0.0
    v_bar: tuple = (0.0,)

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise InputError("feedback gain must be nonnegative", beta=self.beta)
        object.__setattr__(self, "variant", ControlVariant(self.variant))
        object.__setattr__(self, "v_bar", tuple(float(c) for c in np.atleast_1d(self.v_bar)))

    @classmethod
    def none(cls):
        """Return the uncontrolled law."""
        return cls(ControlVariant.NONE)

    @classmethod
    def feedback(cls, beta, v_bar):
        """Return the velocity feedback -beta (v - v_bar)."""
        return cls(ControlVariant.VELOCITY_FEEDBACK, beta, v_bar)

    def evaluate(self, v):
        """Return the (N, D) control values for velocities ``v``."""
        if self.variant is ControlVariant.NONE:
            return np.zeros_like(v)
        return -self.beta * (v - as_vector(self.v_bar, v.shape[1], "v_bar"))


@dataclass
class ParticleTrajectory:
    """Sampled trajectory of a controlled particle run.

    Attributes:
        times (numpy.ndarray): (K,) strictly increasing sample instants.
        state_cost (numpy.ndarray): ||v - v_bar||_N^2 at each instant.
        control_cost (numpy.ndarray): ||f||_N^2 at each instant.
        lam (float): Control weight of the running cost.
        final (ParticleState): State at the last instant.
        x (numpy.ndarray): (K, N, D) positions, or None when not recorded.
        v (numpy.ndarray): (K, N, D) velocities, or None when not recorded.
    """

    times: np.ndarray
    state_cost: np.ndarray
    control_cost: np.ndarray
    lam: float
    final: ParticleState
    x: np.ndarray = field(default=None, repr=False)
    v: np.ndarray = field(default=None, repr=False)

    @property
    def total_integrand(self):
        """Running cost ||v - v_bar||_N^2 + lambda ||f||_N^2."""
        return self.state_cost + self.lam * self.control_cost

    @property
    def total_cost(self):
        """Trapezoidal integral of the running cost over the whole run."""
        return integrate_trapezoid(self.total_integrand, self.times)

    @property
    def states(self):
        """Return the recorded states as a list of :class:`ParticleState`."""
        if self.x is None:
            raise InputError("states were not recorded for this trajectory")
        return [ParticleState(t, x, v) for t, x, v in zip(self.times, self.x, self.v)]

    def state_series(self):
        """Return the state cost as a :class:`CostSeries`."""
        return CostSeries(self.times, self.state_cost)

    def cost_series(self):
        """Return the running cost as a :class:`CostSeries`."""
        return CostSeries(self.times, self.total_integrand)
