"""Tests for the decay fits, bound checks and turnpike certificates."""
import math

import numpy as np
import pytest
from scipy import integrate

from turnpike.diagnostics import CostSeries, abstract_constants, certify_turnpike, cheap_control_check, \
    cheap_control_constant, check_bound, fit_exponential, growth_constant, integrate_trapezoid, \
    monotone_bound_check, tail_integrals, verify_turnpike_hypotheses
from turnpike.exceptions import FitError, InputError


@pytest.fixture
def decaying():
    times = np.linspace(0.0, 10.0, 1000)
    return CostSeries(times, 2.0 * np.exp(-3.0 * times))


def test_hypotheses_and_envelope(decaying):
    c0, c1 = (1.0 + 1e-2) / 3.0, 1.0 + 1e-6
    assert verify_turnpike_hypotheses(decaying, c0, c1, 1e-6)
    constants = abstract_constants(c0, c1)
    satisfied, violation = check_bound(decaying, constants.c, constants.alpha, 1e-6)
    assert satisfied and violation <= 0


def test_fit_recovers_rate(decaying):
    report = fit_exponential(decaying, (0.0, 10.0))
    assert report.alpha_hat == pytest.approx(3.0, abs=1e-10)
    assert report.c_hat == pytest.approx(1.0, abs=1e-9)
    assert report.r_squared == pytest.approx(1.0)
    assert report.bound_satisfied is None


def test_fit_with_bound(decaying):
    report = fit_exponential(decaying, (1.0, 2.0), bound=(1.0, 3.0), tol=1e-9)
    assert report.bound_satisfied
    assert report.window == (1.0, 2.0)


def test_fit_of_constant_series():
    series = CostSeries(np.arange(5.0), np.full(5, 0.3))
    report = fit_exponential(series, (0.0, 4.0))
    assert report.alpha_hat == 0.0
    assert report.r_squared == 1.0


def test_fit_needs_three_samples(decaying):
    with pytest.raises(FitError):
        fit_exponential(decaying, (0.0, 0.015))
    with pytest.raises(FitError):
        fit_exponential(decaying, (0.0, 10.0), floor=10.0)


def test_check_bound_reports_violation():
    series = CostSeries([0.0, 1.0, 2.0], [1.0, 0.5, 0.5])
    satisfied, violation = check_bound(series, 1.0, math.log(2.0), 1e-6)
    assert not satisfied
    assert violation == pytest.approx(1.0 - 1e-6)


def test_check_bound_with_zero_values():
    series = CostSeries([0.0, 1.0], [0.0, 0.0])
    assert check_bound(series, 1.0, 1.0, 0.0)[0]


def test_cheap_control():
    assert cheap_control_constant(0.25, 2.0) == pytest.approx(0.5)
    assert cheap_control_constant(1.0, 1.0) == 1.0
    assert cheap_control_check(0.999, 2.0, 0.25)
    assert not cheap_control_check(1.01, 2.0, 0.25)
    assert cheap_control_check(1.0005, 2.0, 0.25, tol=1e-3)
    with pytest.raises(InputError):
        cheap_control_constant(0.0, 1.0)


def test_growth_constant():
    assert growth_constant(0.25) == 3.0
    assert growth_constant(1.0) == 2.0
    assert growth_constant(4.0) == 3.0
    with pytest.raises(InputError):
        growth_constant(-1.0)


def test_abstract_constants():
    constants = abstract_constants(0.5, 2.0)
    assert constants.tau == pytest.approx(math.e)
    assert constants.alpha == pytest.approx(1.0 / math.e)
    assert constants.c == pytest.approx(2.0 * math.e)
    explicit = abstract_constants(0.5, 2.0, tau=3.0)
    assert explicit.alpha == pytest.approx(math.log(3.0) / 3.0)
    # The default window length gives the fastest rate.
    assert explicit.alpha < constants.alpha
    with pytest.raises(InputError):
        abstract_constants(0.5, 2.0, tau=1.0)


def test_monotone_bound():
    rising = CostSeries([0.0, 1.0, 2.0], [1.0, 1.5, 0.2])
    assert not monotone_bound_check(rising, 1.0, 1e-6)
    assert monotone_bound_check(rising, 1.5, 1e-9)


def test_hypotheses_fail_for_slow_decay():
    times = np.linspace(0.0, 5.0, 200)
    series = CostSeries(times, np.exp(-0.5 * times))
    assert not verify_turnpike_hypotheses(series, 1.0, 1.0, 1e-6)


def test_certificate(decaying):
    certificate = certify_turnpike(decaying, 0.5, 1.0)
    assert certificate.passed
    assert certificate.constants.tau == pytest.approx(0.5 * math.e)


def test_trapezoid_against_quadrature():
    times = np.linspace(0.0, 3.0, 3001)
    approx = integrate_trapezoid(np.exp(-times) * np.cos(times), times)
    exact, _ = integrate.quad(lambda t: math.exp(-t) * math.cos(t), 0.0, 3.0)
    assert approx == pytest.approx(exact, abs=1e-6)
    assert integrate_trapezoid([1.0], [0.0]) == 0.0


def test_tail_integrals():
    tails = tail_integrals([1.0, 1.0, 3.0], [0.0, 1.0, 2.0])
    assert tails == pytest.approx([3.0, 2.0, 0.0])


def test_series_validation():
    with pytest.raises(InputError):
        CostSeries([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(InputError):
        CostSeries([0.0, 1.0], [1.0, -1.0])
    with pytest.raises(InputError):
        CostSeries([0.0], [1.0, 2.0])


@pytest.mark.parametrize("c0, c1", [(0.5, 2.0), (0.34, 1.0), (3.0, 0.7)])
def test_default_window_is_optimal(c0, c1):
    best = abstract_constants(c0, c1)
    product = c0 * c1
    for tau in np.linspace(product * (1.0 + 1e-6), 100.0 * product, 20000):
        assert abstract_constants(c0, c1, tau=tau).alpha <= best.alpha + 1e-9


@pytest.mark.parametrize("scale", [1e-8, 1e-3, 1e5])
def test_fit_is_scale_invariant(decaying, scale):
    base = fit_exponential(decaying, (0.5, 6.0))
    scaled = fit_exponential(CostSeries(decaying.times, scale * decaying.values), (0.5, 6.0))
    assert scaled.alpha_hat == pytest.approx(base.alpha_hat, abs=1e-12)
    assert scaled.c_hat == pytest.approx(base.c_hat, abs=1e-12)
    assert scaled.samples == base.samples


def test_fit_window_isolates_slow_mode():
    times = np.linspace(0.0, 10.0, 1001)
    series = CostSeries(times, np.exp(-3.0 * times) + np.exp(-10.0 * times))
    assert fit_exponential(series, (2.0, 4.0)).alpha_hat == pytest.approx(3.0, rel=1e-2)
    # Fitted from t = 0 the fast mode biases the rate upwards.
    assert fit_exponential(series, (0.0, 4.0)).alpha_hat > 3.03
