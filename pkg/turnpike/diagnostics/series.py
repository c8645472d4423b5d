"""
Module for sampled cost series and decay reports.

Classes:
    - CostSeries: Nonnegative values of a cost or energy on increasing instants.
    - DecayReport: Fitted exponential rate with its bound check.

Functions:
    - integrate_trapezoid: Trapezoidal integral over a sample grid.
    - tail_integrals: Trapezoidal integrals from every sample to the end.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from turnpike.exceptions import InputError


def integrate_trapezoid(values, times):
    """Return the trapezoidal integral of ``values`` sampled at ``times``."""
    values = np.asarray(values, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if values.size < 2:
        return 0.0
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(times)))


def tail_integrals(values, times):
    """Return trapezoidal integrals from each sample instant to the last one."""
    values = np.asarray(values, dtype=np.float64)
    pieces = 0.5 * (values[1:] + values[:-1]) * np.diff(np.asarray(times, dtype=np.float64))
    tail = np.zeros_like(values)
    tail[:-1] = np.cumsum(pieces[::-1])[::-1]
    return tail


@dataclass
class CostSeries:
    """Nonnegative cost values on strictly increasing instants.

    Attributes:
        times (numpy.ndarray): Sample instants.
        values (numpy.ndarray): Cost or energy values.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64).ravel()
        self.values = np.asarray(self.values, dtype=np.float64).ravel()
        if self.times.shape != self.values.shape or self.times.size == 0:
            raise InputError("times and values must be nonempty and of equal length",
                             times=self.times.size, values=self.values.size)
        if np.any(np.diff(self.times) <= 0):
            raise InputError("times must be strictly increasing")
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise InputError("values must be finite and nonnegative")

    def __len__(self):
        return self.times.size


@dataclass
class DecayReport:
    """Result of an exponential fit, optionally checked against a bound.

    Attributes:
        alpha_hat (float): Fitted decay rate (minus the log-slope).
        c_hat (float): Fitted prefactor relative to the first value.
        window (tuple): ``(t_lo, t_hi)`` of the fit.
        r_squared (float): Coefficient of determination of the log fit.
        bound_satisfied (bool): Outcome of the envelope check, None if not run.
        max_violation (float): Largest relative excess over the envelope.
        samples (int): Number of samples used by the fit.
    """

    alpha_hat: float
    c_hat: float
    window: Tuple[float, float]
    r_squared: float
    bound_satisfied: Optional[bool] = None
    max_violation: Optional[float] = None
    samples: int = 0

    def as_dict(self):
        """Return the report as an ordered key-value mapping."""
        return {
            "alpha_hat": self.alpha_hat,
            "c_hat": self.c_hat,
            "window_t_lo": self.window[0],
            "window_t_hi": self.window[1],
            "r_squared": self.r_squared,
            "bound_satisfied": self.bound_satisfied,
            "max_violation": self.max_violation,
            "samples": self.samples,
        }
