"""
Module for certifying exponential turnpike behavior of sampled cost series.

A nonnegative cost E(t) that satisfies

    (1) int_a^T E(t) dt <= C0 E(a)          for every a,
    (2) E(t2) <= C1 E(t1)                    for every t1 <= t2,

obeys E(t) <= C exp(-alpha t) E(0) with C = C1 tau / (C0 C1) and
alpha = log(tau / (C0 C1)) / tau for any tau > C0 C1. The functions below
check (1) and (2) on a sample grid, construct (C, alpha) and check the
resulting envelope, next to log-linear rate fits and cheap-control checks.
"""
import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from turnpike.exceptions import FitError, InputError
from .series import DecayReport, tail_integrals

logger = logging.getLogger('turnpike.diagnostics')

TurnpikeConstants = namedtuple("TurnpikeConstants", ["c", "alpha", "tau", "c2"])


def fit_exponential(series, window, floor=None, bound=None, tol=1e-6):
    """Fit ``value ~ c_hat * value[0] * exp(-alpha_hat t)`` by least squares in log scale.

    Args:
        series (CostSeries): Sampled cost.
        window (tuple): ``(t_lo, t_hi)``; samples outside are ignored.
        floor (float): Samples at or below ``floor`` are ignored. Defaults to
            ``1e-12`` times the first value.
        bound (tuple): Optional ``(c, alpha)`` envelope checked with :func:`check_bound`.
        tol (float): Relative tolerance of the envelope check.

    Returns:
        DecayReport: The fitted rate and, if requested, the envelope check.

    Raises:
        FitError: Fewer than three usable samples in the window.
    """
    t_lo, t_hi = float(window[0]), float(window[1])
    values = series.values
    if floor is None:
        floor = 1e-12 * values[0] if values[0] > 0 else np.finfo(np.float64).tiny
    if not floor > 0:
        raise InputError("fit floor must be positive", floor=floor)
    mask = (series.times >= t_lo) & (series.times <= t_hi) & (values > floor)
    usable = int(np.count_nonzero(mask))
    if usable < 3:
        raise FitError("too few samples above the floor in the fit window",
                       usable=usable, t_lo=t_lo, t_hi=t_hi)

    t = series.times[mask]
    y = np.log(values[mask])
    t_mean, y_mean = t.mean(), y.mean()
    slope = float(np.sum((t - t_mean) * (y - y_mean)) / np.sum((t - t_mean) ** 2))
    intercept = float(y_mean - slope * t_mean)
    ss_res = float(np.sum((y - (intercept + slope * t)) ** 2))
    ss_tot = float(np.sum((y - y_mean) ** 2))
    # A flat log-series is fitted exactly by the constant line.
    if ss_tot <= usable * (4.0 * np.finfo(np.float64).eps * max(1.0, abs(y_mean))) ** 2:
        r_squared = 1.0
    else:
        r_squared = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    c_hat = math.exp(intercept) / values[0] if values[0] > 0 else float("nan")

    report = DecayReport(alpha_hat=-slope, c_hat=c_hat, window=(t_lo, t_hi),
                         r_squared=r_squared, samples=usable)
    if bound is not None:
        report.bound_satisfied, report.max_violation = check_bound(series, bound[0], bound[1], tol)
    logger.debug("Fitted alpha=%.6g on [%g, %g] from %d samples (r2=%.6f)",
                 report.alpha_hat, t_lo, t_hi, usable, r_squared)
    return report


def check_bound(series, c, alpha, tol):
    """Check ``values[k] <= c exp(-alpha t_k) values[0] (1 + tol)`` for every sample.

    Returns:
        tuple: ``(bound_satisfied, max_violation)``, where ``max_violation`` is
        the largest relative excess over the envelope, nonpositive when satisfied.
    """
    if not c > 0 or not alpha >= 0:
        raise InputError("need c > 0 and alpha >= 0", c=c, alpha=alpha)
    envelope = c * np.exp(-alpha * series.times) * series.values[0]
    excess = np.where(series.values > 0, np.inf, 0.0)
    positive = envelope > 0
    excess[positive] = series.values[positive] / envelope[positive] - 1.0
    excess -= tol
    max_violation = float(np.max(excess))
    return bool(max_violation <= 0), max_violation


def cheap_control_constant(lam, beta):
    """Return (1 + lambda beta^2) / (2 beta), the cost bound of the feedback law."""
    if not (lam > 0 and beta > 0):
        raise InputError("need lambda > 0 and beta > 0", lam=lam, beta=beta)
    return (1.0 + lam * beta * beta) / (2.0 * beta)


def cheap_control_check(series_total_cost, initial_value, lam, tol=0.0):
    """Check ``total_cost <= sqrt(lambda) * initial_value * (1 + tol)``."""
    if series_total_cost < 0 or initial_value < 0 or not lam > 0:
        raise InputError("cheap-control inputs must be nonnegative, lambda positive",
                         total=series_total_cost, initial=initial_value, lam=lam)
    return bool(series_total_cost <= math.sqrt(lam) * initial_value * (1.0 + tol))


def abstract_constants(c0, c1, tau=None):
    """Construct the envelope constants from the two hypothesis constants.

    The window length defaults to ``tau = e * c0 * c1``, which maximizes
    ``alpha(tau) = log(tau / (c0 c1)) / tau`` over ``tau > c0 c1``.

    Args:
        c0 (float): Integral constant of hypothesis (1).
        c1 (float): Growth constant of hypothesis (2).
        tau (float): Optional window length, must exceed ``c0 * c1``.

    Returns:
        TurnpikeConstants: ``(c, alpha, tau, c2)``.
    """
    if not (c0 > 0 and c1 > 0):
        raise InputError("constants must be positive", c0=c0, c1=c1)
    product = c0 * c1
    if tau is None:
        tau = math.e * product
    elif not tau > product:
        raise InputError("tau must exceed c0 * c1", tau=tau, c0=c0, c1=c1)
    c2 = tau / product
    alpha = math.log(c2) / tau
    return TurnpikeConstants(c=c1 * c2, alpha=alpha, tau=tau, c2=c2)


def _suffix_max(values):
    return np.maximum.accumulate(values[::-1])[::-1]


def monotone_bound_check(series, c1, tol):
    """Check ``values[k2] <= c1 values[k1] (1 + tol)`` for all ``k1 <= k2``."""
    later_max = _suffix_max(series.values)
    return bool(np.all(later_max <= c1 * series.values * (1.0 + tol)))


def verify_turnpike_hypotheses(series, c0, c1, tol):
    """Check the integral and growth hypotheses on the sample grid.

    Tail integrals use the trapezoidal rule on the samples; ``tol`` has to
    absorb that discretization.

    Returns:
        bool: True when both hypotheses hold at every sample (pair).
    """
    tails = tail_integrals(series.values, series.times)
    integral_ok = bool(np.all(tails <= c0 * series.values * (1.0 + tol)))
    growth_ok = monotone_bound_check(series, c1, tol)
    if not integral_ok:
        logger.info("Integral hypothesis fails for c0=%g", c0)
    if not growth_ok:
        logger.info("Growth hypothesis fails for c1=%g", c1)
    return integral_ok and growth_ok


def growth_constant(lam):
    """Return 1 + lambda^(-1/2) for lambda <= 1 and 1 + lambda^(1/2) otherwise."""
    if not lam > 0:
        raise InputError("lambda must be positive", lam=lam)
    return 1.0 + (lam ** -0.5 if lam <= 1 else lam ** 0.5)


@dataclass
class TurnpikeCertificate:
    """Outcome of :func:`certify_turnpike`."""

    hypotheses_hold: bool
    constants: TurnpikeConstants
    bound_satisfied: bool
    max_violation: float

    @property
    def passed(self):
        return self.hypotheses_hold and self.bound_satisfied


def certify_turnpike(series, c0, c1, tol=1e-6):
    """Verify the hypotheses, build ``(C, alpha)`` and check the envelope.

    Args:
        series (CostSeries): Cost along a run.
        c0 (float): Integral constant.
        c1 (float): Growth constant.
        tol (float): Relative tolerance of all checks.

    Returns:
        TurnpikeCertificate: Hypotheses outcome, constants and envelope check.
    """
    hypotheses = verify_turnpike_hypotheses(series, c0, c1, tol)
    constants = abstract_constants(c0, c1)
    satisfied, violation = check_bound(series, constants.c, constants.alpha, tol)
    return TurnpikeCertificate(hypotheses, constants, satisfied, violation)
