import math

import numpy as np
import pytest

from fishercap import specfun
from fishercap.errors import DomainError, ToleranceError
from fishercap.quad import QuadRule, integrate_interval, integrate_semiinf


def test_constant_integrand():
    value, err = integrate_interval(lambda x: np.ones_like(x), -3.0, 3.0)
    assert value == pytest.approx(6.0, abs=1e-13)
    assert err >= 0


def test_gaussian_density_mass():
    def phi(x):
        return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)

    value, _ = integrate_interval(phi, -8.0, 8.0)
    _, q8 = specfun.gauss_phi_q(8.0)
    assert value == pytest.approx(1.0 - 2.0 * q8, abs=1e-12)


def test_inverse_sqrt_endpoint_singularity():
    value, _ = integrate_interval(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0,
                                  QuadRule(abs_tol=1e-10, rel_tol=1e-9))
    assert value == pytest.approx(2.0, abs=1e-8)


def test_semiinf_exponentials():
    v, _ = integrate_semiinf(lambda t: np.exp(-t), 0.0)
    assert v == pytest.approx(1.0, rel=1e-11)
    v, _ = integrate_semiinf(lambda t: t * np.exp(-t), 0.0)
    assert v == pytest.approx(1.0, rel=1e-11)


def test_semiinf_matches_e1():
    v, _ = integrate_semiinf(lambda t: np.exp(-t) / t, 1.0)
    assert v == pytest.approx(specfun.exp_integral_e1(1.0), rel=1e-10)


def test_linearity_on_random_smooth_functions():
    rng = np.random.default_rng(7)
    rule = QuadRule()
    for _ in range(5):
        c = rng.normal(size=4)
        a, b = -1.5, 2.0

        def f(x):
            return np.polynomial.polynomial.polyval(x, c)

        def g(x):
            return np.sin(3.0 * x) + 0.2 * x * x

        alpha, beta = rng.normal(size=2)
        lhs, _ = integrate_interval(lambda x: alpha * f(x) + beta * g(x), a, b, rule)
        fa, _ = integrate_interval(f, a, b, rule)
        ga, _ = integrate_interval(g, a, b, rule)
        rhs = alpha * fa + beta * ga
        tol = 2.0 * max(rule.abs_tol, rule.rel_tol * abs(rhs))
        assert abs(lhs - rhs) <= tol + 1e-14


def test_interval_additivity():
    def f(x):
        return np.exp(-x) * np.cos(4.0 * x)

    whole, _ = integrate_interval(f, -1.0, 2.5)
    left, _ = integrate_interval(f, -1.0, 0.3)
    right, _ = integrate_interval(f, 0.3, 2.5)
    assert whole == pytest.approx(left + right, abs=2e-12)


def test_degenerate_and_invalid_intervals():
    assert integrate_interval(lambda x: x, 1.0, 1.0) == (0.0, 0.0)
    with pytest.raises(DomainError):
        integrate_interval(lambda x: x, 2.0, 1.0)
    with pytest.raises(DomainError):
        integrate_interval(lambda x: x, 0.0, math.inf)


def test_tolerance_failure_carries_best_estimate():
    rule = QuadRule(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=4)
    with pytest.raises(ToleranceError) as exc:
        integrate_interval(lambda x: np.sin(50.0 * x) ** 2, 0.0, 10.0, rule)
    assert exc.value.best is not None
    assert exc.value.err_est > 0


def test_nonfinite_integrand_rejected():
    with np.errstate(divide="ignore"), pytest.raises(DomainError):
        integrate_interval(lambda x: 1.0 / (x - 0.5), 0.0, 1.0)


def test_rule_validation():
    with pytest.raises(DomainError):
        QuadRule(abs_tol=0.0)
    with pytest.raises(DomainError):
        QuadRule(kind="monte-carlo")
    with pytest.raises(DomainError):
        QuadRule(max_subdivisions=0)
