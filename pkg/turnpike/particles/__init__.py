"""Module for the controlled N-particle alignment system."""
# flake8: noqa
from .state import ParticleState, ControlVariant, ControlLaw, ParticleTrajectory, as_vector
from .simulator import rhs, step_rk4, simulate, velocity_cost, sample_initial, mean_square_deviation
