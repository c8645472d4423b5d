"""
Module for empirical measures of particle ensembles.

An ensemble of N particles defines the uniform atomic measure
mu_N = (1/N) sum_i delta(x - x_i) (x) delta(v - v_i). Its velocity second
moment is the particle state cost, and its one-dimensional marginals are
compared with the exact sorted-matching Wasserstein-1 distance.
"""
from dataclasses import dataclass

import numpy as np

from turnpike.exceptions import InputError
from turnpike.particles import mean_square_deviation, as_vector


@dataclass
class EmpiricalMeasure:
    """Uniform empirical measure on (x, v) atoms.

    Attributes:
        points (numpy.ndarray): (N, 2D) array, positions first.
        d (int): Space dimension D.
    """

    points: np.ndarray
    d: int

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.ndim != 2 or self.points.shape[1] != 2 * self.d or self.points.shape[0] < 1:
            raise InputError("points must be an (N, 2D) array", shape=self.points.shape, d=self.d)
        if not np.all(np.isfinite(self.points)):
            raise InputError("atoms must be finite")

    @classmethod
    def from_state(cls, state):
        """Build the empirical measure of a :class:`ParticleState`."""
        return cls(np.hstack([state.x, state.v]), state.d)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def weight(self):
        """Mass of every atom."""
        return 1.0 / self.n

    @property
    def positions(self):
        return np.ascontiguousarray(self.points[:, :self.d])

    @property
    def velocities(self):
        return np.ascontiguousarray(self.points[:, self.d:])


def moment2_velocity(m, v_bar):
    """Return the integral of |v - v_bar|^2 against the empirical measure."""
    return mean_square_deviation(m.velocities, v_bar)


def wasserstein1_1d(a, b):
    """Return the exact W1 distance of two equal-size uniform samples on the line.

    Args:
        a: Scalar samples.
        b: Scalar samples, same count as ``a``.

    Returns:
        float: (1/n) sum_k |a_(k) - b_(k)| over the sorted order statistics.
    """
    a = np.sort(np.asarray(a, dtype=np.float64).ravel())
    b = np.sort(np.asarray(b, dtype=np.float64).ravel())
    if a.size != b.size or a.size < 1:
        raise InputError("samples must be nonempty and of equal length", a=a.size, b=b.size)
    return float(np.mean(np.abs(a - b)))


def marginal_w1(a, b):
    """W1 between uniform samples whose sizes divide one another.

    Each atom of the smaller sample is split into ``m / n`` equal atoms, which
    leaves the measure unchanged and reduces the problem to equal sizes.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size > b.size:
        a, b = b, a
    if a.size < 1 or b.size % a.size:
        raise InputError("sample sizes must divide one another", a=a.size, b=b.size)
    return wasserstein1_1d(np.repeat(np.sort(a), b.size // a.size), b)


def expected_moment2(d, sigma, mean_v, v_bar):
    """Return E|v - v_bar|^2 for v ~ Normal(mean_v, sigma^2 I_d)."""
    offset = as_vector(mean_v, d, "mean_v") - as_vector(v_bar, d, "v_bar")
    return float(d * sigma ** 2 + np.dot(offset, offset))


def moment2_standard_error(n, d, sigma, mean_v, v_bar):
    """Return the standard error of the empirical second moment of n normal draws."""
    offset = as_vector(mean_v, d, "mean_v") - as_vector(v_bar, d, "v_bar")
    variance = 2.0 * d * sigma ** 4 + 4.0 * sigma ** 2 * np.dot(offset, offset)
    return float(np.sqrt(variance / n))
