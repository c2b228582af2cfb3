'''unit testing code for the quadrature module.'''
import math
import unittest

import numpy
import pytest
import scipy.integrate

from pyinteract.kernel import LOG
from pyinteract.quadrature import (
    gauss_jacobi,
    integrate_adaptive,
    integrate_adaptive_result,
    integrate_weighted,
    jacobi_power_integral,
    jacobi_weight_integral,
)
from pyinteract.specfun import ln_gamma
from pyinteract.utils import AccuracyError, DomainError

from TestUtils import scipy_jacobi_integral


class TestGaussJacobi(unittest.TestCase):

    def test_one_node(self):
        rule = gauss_jacobi(1, 0.0)
        numpy.testing.assert_allclose(rule.nodes, [0.0], atol=1e-15)
        numpy.testing.assert_allclose(rule.weights, [2.0], rtol=1e-14)

    def test_two_nodes(self):
        rule = gauss_jacobi(2, 0.0)
        s = 1 / math.sqrt(3)
        numpy.testing.assert_allclose(rule.nodes, [-s, s], rtol=1e-14)
        numpy.testing.assert_allclose(rule.weights, [1.0, 1.0], rtol=1e-14)

    def test_symmetric(self):
        rule = gauss_jacobi(33, -0.4)
        numpy.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])
        numpy.testing.assert_array_equal(rule.weights, rule.weights[::-1])
        self.assertTrue(numpy.all(numpy.diff(rule.nodes) > 0))
        self.assertTrue(numpy.all(rule.weights > 0))

    def test_total_weight(self):
        for p in (-0.9, -0.5, 0.0, 0.5, 1.5):
            rule = gauss_jacobi(20, p)
            self.assertAlmostEqual(rule.total_weight / jacobi_weight_integral(p), 1.0, places=13)
        self.assertAlmostEqual(jacobi_weight_integral(0.5), math.pi / 2, places=14)

    def test_exact_for_polynomials(self):
        # n nodes integrate degree 2n - 1 exactly
        rule = gauss_jacobi(4, 0.25)
        for k in range(0, 8, 2):
            expected = scipy_jacobi_integral(lambda y: y ** k, 0.25)
            self.assertAlmostEqual(rule.integrate(lambda y: y ** k), expected, places=12)
        self.assertAlmostEqual(rule.integrate(lambda y: y ** 7), 0.0, places=14)

    def test_domain(self):
        self.assertRaises(DomainError, gauss_jacobi, 0, 0.0)
        self.assertRaises(DomainError, gauss_jacobi, 4, -1.0)
        self.assertRaises(DomainError, jacobi_weight_integral, -1.5)

    def test_cached_rules_are_read_only(self):
        rule = gauss_jacobi(8, 0.3)
        with self.assertRaises(ValueError):
            rule.nodes[0] = 0.0


class TestIntegrateAdaptive(unittest.TestCase):

    def test_constant(self):
        self.assertAlmostEqual(integrate_adaptive(lambda y: numpy.ones_like(y), 0.0, 1.0),
                               1.0, places=14)

    def test_reversed_and_empty(self):
        self.assertAlmostEqual(integrate_adaptive(lambda y: y, 1.0, 0.0), -0.5, places=14)
        self.assertEqual(integrate_adaptive(lambda y: y, 2.0, 2.0), 0.0)

    def test_both_endpoint_singularities(self):
        expected = math.sqrt(math.pi) * math.exp(ln_gamma(0.25) - ln_gamma(0.75))
        value = integrate_adaptive(lambda y, dl, dr: (dl * dr) ** -0.75, -1.0, 1.0,
                                   tol=1e-10, hint="both", exponent=-0.75, distances=True)
        self.assertAlmostEqual(value / expected, 1.0, places=9)

    def test_log_singularity(self):
        value = integrate_adaptive(lambda y: numpy.log(1.0 / y), 0.0, 1.0, hint="left")
        self.assertAlmostEqual(value, 1.0, places=9)

    def test_smooth_against_closed_form(self):
        value = integrate_adaptive(numpy.cos, 0.0, math.pi / 2, tol=1e-13)
        self.assertAlmostEqual(value, 1.0, places=13)

    def test_result_reports_error(self):
        r = integrate_adaptive_result(numpy.exp, 0.0, 1.0)
        self.assertAlmostEqual(r.value, math.e - 1, places=13)
        self.assertLess(r.error, 1e-10)
        self.assertGreaterEqual(r.intervals, 1)

    def test_budget_exhausted(self):
        with self.assertRaises(AccuracyError) as cm:
            integrate_adaptive(lambda y: 1 / numpy.sqrt(y), 0.0, 1.0, tol=1e-15,
                               max_intervals=5)
        self.assertIsNotNone(cm.exception.estimate)
        self.assertGreater(cm.exception.error, 1e-15)

    def test_unknown_hint(self):
        self.assertRaises(DomainError, integrate_adaptive, numpy.exp, 0.0, 1.0, hint="middle")


class TestIntegrateWeighted(unittest.TestCase):

    def test_beta_integral(self):
        # int_0^1 x**a (1 - x)**b dx = B(a + 1, b + 1)
        for a, b in ((-0.5, -0.5), (-0.99, 0.3), (0.7, -0.95)):
            expected = math.exp(ln_gamma(a + 1) + ln_gamma(b + 1) - ln_gamma(a + b + 2))
            value = integrate_weighted(lambda x, dl, dr: numpy.ones_like(x), 0.0, 1.0,
                                       left=a, right=b)
            self.assertAlmostEqual(value / expected, 1.0, places=11)

    def test_one_sided(self):
        value = integrate_weighted(lambda x, dl, dr: numpy.ones_like(x), 0.0, 4.0, left=-0.5)
        self.assertAlmostEqual(value, 4.0, places=12)

    def test_exponent_below_minus_one(self):
        self.assertRaises(DomainError, integrate_weighted,
                          lambda x, dl, dr: x, 0.0, 1.0, left=-1.0)


class TestJacobiPowerIntegral(unittest.TestCase):

    def test_zero_power_is_total_weight(self):
        for t in (0.0, 0.5, 1.0, 3.0):
            self.assertAlmostEqual(jacobi_power_integral(0.0, t, -0.25),
                                   jacobi_weight_integral(-0.25), places=11)

    def test_integer_power_interior(self):
        # int (1 - u**2)**p (t - u)**2 du = t**2 W0 + W2
        p, t = 0.5, 0.3
        expected = t * t * math.pi / 2 + math.pi / 8
        self.assertAlmostEqual(jacobi_power_integral(2.0, t, p), expected, places=11)

    def test_odd_parity(self):
        self.assertAlmostEqual(jacobi_power_integral(1.0, 0.0, 0.5, odd=True), 0.0, places=12)
        a = jacobi_power_integral(0.5, 0.4, -0.3, odd=True)
        b = jacobi_power_integral(0.5, -0.4, -0.3, odd=True)
        self.assertAlmostEqual(a, -b, places=11)

    def test_not_integrable(self):
        self.assertRaises(DomainError, jacobi_power_integral, -1.0, 0.2, 0.0)


def _quadpack(f, lo, hi, weight, wvar):
    return scipy.integrate.quad(f, lo, hi, weight=weight, wvar=wvar,
                                epsabs=1e-13, epsrel=1e-12, limit=200)[0]


@pytest.mark.parametrize("beta", [-0.5, 0.5, 1.3, 2.5])
@pytest.mark.parametrize("t", [0.0, 0.45, -0.8, 1.7, -3.0])
@pytest.mark.parametrize("p", [-0.45, 0.25, 0.75])
def test_jacobi_power_integral_against_quadpack(beta, t, p):
    if abs(t) > 1:
        expected = scipy_jacobi_integral(lambda u: abs(t - u) ** beta, p)
    else:
        # split at the kink, the weights carry both singular factors
        expected = _quadpack(lambda u: (1 - u) ** p, -1.0, t, "alg", (p, beta)) + \
            _quadpack(lambda u: (1 + u) ** p, t, 1.0, "alg", (beta, p))
    assert jacobi_power_integral(beta, t, p) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("t", [0.0, 0.6, -1.0, 1.0, 2.0])
def test_log_power_against_quadpack(t):
    p = -0.25
    if t == 1.0:
        expected = _quadpack(lambda u: 1.0, -1.0, 1.0, "alg-logb", (p, p))
    elif t == -1.0:
        expected = _quadpack(lambda u: 1.0, -1.0, 1.0, "alg-loga", (p, p))
    elif abs(t) > 1:
        expected = scipy_jacobi_integral(lambda u: numpy.log(abs(t - u)), p)
    else:
        expected = _quadpack(lambda u: (1 - u) ** p, -1.0, t, "alg-logb", (p, 0.0)) + \
            _quadpack(lambda u: (1 + u) ** p, t, 1.0, "alg-loga", (0.0, p))
    assert jacobi_power_integral(LOG, t, p) == pytest.approx(expected, rel=1e-9, abs=1e-11)
