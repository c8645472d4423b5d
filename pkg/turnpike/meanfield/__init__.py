"""Module for empirical measures and mean-field convergence studies."""
# flake8: noqa
from .empirical import EmpiricalMeasure, moment2_velocity, wasserstein1_1d, marginal_w1, \
    expected_moment2, moment2_standard_error
from .convergence import ConvergenceRow, ConvergenceTable, convergence_study, spawn_seeds
