'''unit testing code for the certification checks.'''
import math
import unittest

import numpy
import pytest

from pyinteract.closedform import constants, support_radius
from pyinteract.kernel import Kernel
from pyinteract.utils import DomainError
from pyinteract.verify import (
    DEFAULT_ALPHAS,
    EL_ALPHAS,
    IDENTITIES,
    convexity_probe,
    form_matrix,
    identity_chain_residual,
    identity_lhs,
    identity_rhs,
    projected_gram_min_eigenvalue,
    recovered_support_radius,
    verify_el_suite,
    verify_euler_lagrange,
    verify_identity,
    verify_identity_suite,
)

from TestUtils import SLOW_TESTS, scipy_jacobi_integral


class TestIdentityDomain(unittest.TestCase):

    def test_unknown_identity(self):
        self.assertRaises(DomainError, verify_identity, "INT4", 2.5, [0.0])

    def test_outside_range(self):
        self.assertRaises(DomainError, verify_identity, "INT1A", 2.5, [0.0])
        self.assertRaises(DomainError, identity_rhs, "COMPINT", 1.5, 0.0)
        self.assertRaises(DomainError, identity_lhs, "INT", 2.0, 0.5)

    def test_singular_point(self):
        self.assertRaises(DomainError, identity_rhs, "INT", 2.5, 1.0)


class TestIdentities(unittest.TestCase):

    def test_interior_constant(self):
        # the sum of |x - y|**alpha against the weight is C' at x = 0
        a = 2.5
        p = -(a - 1) / 2
        expected = scipy_jacobi_integral(lambda y: abs(y) ** a, p)
        self.assertAlmostEqual(identity_lhs("INT3", a, 0.0) / expected, 1.0, places=9)
        self.assertAlmostEqual(identity_rhs("INT3", a, 0.0),
                               constants(a).C_alpha_prime, places=14)

    def test_report(self):
        r = verify_identity("INT2", 2.5, [0.0, 0.5, 2.0])
        self.assertTrue(r.passed)
        self.assertEqual(r.points, (0.0, 0.5, 2.0))
        self.assertEqual(len(r.lhs), 3)
        self.assertAlmostEqual(r.rhs[0], 0.0, places=14)
        d = r.to_dict()
        self.assertTrue(d["pass"])
        self.assertEqual(d["identity"], "INT2")

    def test_suite_at_defaults(self):
        reports = verify_identity_suite()
        self.assertEqual(len(reports), sum(len(v) for v in DEFAULT_ALPHAS.values()))
        failed = [(r.identity, r.alpha, r.max_rel_err) for r in reports if not r.passed]
        self.assertEqual(failed, [])
        self.assertEqual({r.identity for r in reports}, set(IDENTITIES))

    def test_tolerance_is_reported(self):
        r = verify_identity("COMPINT", 2.5, [0.2], tol=0.0)
        self.assertEqual(r.tol, 0.0)
        self.assertEqual(r.passed, r.max_rel_err == 0.0)


@pytest.mark.parametrize("pair,alpha", [
    (("INT1", "INT"), 2.5),
    (("INT2", "INT1"), 2.5),
    (("INT2", "INT1"), 1.5),
    (("INT3", "INT2"), 2.2),
])
def test_identity_chain(pair, alpha):
    assert identity_chain_residual(pair, alpha, (0.0, 0.4, 1.5, -2.5)) < 1e-6


def test_identity_chain_unknown_pair():
    with pytest.raises(DomainError):
        identity_chain_residual(("INT", "INT3"), 2.5, (0.0,))


class TestEulerLagrange(unittest.TestCase):

    def test_attractive_regime(self):
        r = verify_euler_lagrange(Kernel(2.5, "A"))
        self.assertTrue(r.passed)
        self.assertFalse(r.eta_empirical)
        self.assertEqual(r.interior_points, 50)
        self.assertEqual(r.exterior_points, 2000)
        self.assertGreaterEqual(r.min_exterior_slack, -1e-6)

    def test_uniform_law(self):
        r = verify_euler_lagrange(Kernel(1.0, "B"), n_exterior=200)
        self.assertLessEqual(r.max_interior_dev, 1e-9)
        self.assertAlmostEqual(r.eta_ref, -1.0 / 3, places=12)
        self.assertTrue(r.passed)

    def test_log_kernel(self):
        r = verify_euler_lagrange(Kernel(0.0, "B"), n_exterior=200)
        self.assertTrue(r.eta_empirical)
        self.assertTrue(r.passed)
        self.assertAlmostEqual(r.eta_ref, 0.75 + 0.5 * math.log(2), places=7)

    def test_tolerance_scales_with_eta(self):
        r = verify_euler_lagrange(Kernel(-0.5, "B"), n_exterior=200)
        self.assertEqual(r.scale, max(1.0, abs(r.eta_ref)))
        self.assertTrue(r.passed)
        self.assertTrue(r.to_dict()["pass"])

    def test_recovered_radius(self):
        R = recovered_support_radius(Kernel(0.0, "B"))
        self.assertAlmostEqual(R, math.sqrt(2), delta=1e-3)
        R = recovered_support_radius(Kernel(2.5, "A"))
        self.assertAlmostEqual(R, support_radius(2.5), delta=1e-3)

    def test_suite(self):
        reports = verify_el_suite()
        self.assertEqual(len(reports), len(EL_ALPHAS))
        self.assertEqual([(r.alpha, r.regime) for r in reports],
                         [(float(a), g) for a, g in EL_ALPHAS])
        failed = [(r.alpha, r.max_interior_dev, r.min_exterior_slack) for r in reports if not r.passed]
        self.assertEqual(failed, [])


class TestConvexity(unittest.TestCase):

    def test_probe_positive(self):
        for alpha, regime in ((2.5, "A"), (1.0, "B"), (0.0, "B"), (-0.5, "B")):
            r = convexity_probe(Kernel.create(alpha, regime), trials=200)
            self.assertTrue(r.positive, (alpha, regime, r.min_value))
            self.assertEqual(r.skipped, 0)

    def test_probe_deterministic(self):
        k = Kernel(1.5, "B")
        a = convexity_probe(k, trials=50, seed=4)
        b = convexity_probe(k, trials=50, seed=4)
        self.assertEqual(a.min_value, b.min_value)

    def test_degenerate_grid(self):
        r = convexity_probe(Kernel(2.5, "A"), trials=20, grid=(-1.0, 1.0, 2))
        self.assertEqual(r.skipped, 20)
        self.assertFalse(r.positive)
        self.assertFalse(r.to_dict()["positive"])

    def test_trials_validated(self):
        self.assertRaises(DomainError, convexity_probe, Kernel(2.5, "A"), trials=0)

    def test_projected_gram(self):
        for alpha, regime, m in ((2.5, "A", 25), (1.0, "B", 25), (0.0, "B", 25)):
            k = Kernel.create(alpha, regime)
            value = projected_gram_min_eigenvalue(k, grid=(-1.5, 1.5, m))
            self.assertGreater(value, 0.0, (alpha, regime))
            self.assertTrue(numpy.isfinite(value))

    def test_two_point_log_form(self):
        M = form_matrix(Kernel(0.0, "B"), [0.0, 1.0])
        self.assertAlmostEqual(M[0, 0], 1.5, places=12)
        self.assertAlmostEqual(M[0, 1], 1.5 - 2 * math.log(2), places=12)
        nu = numpy.array([1.0, -1.0]) / math.sqrt(2)
        self.assertAlmostEqual(float(nu @ M @ nu), 2 * math.log(2), places=12)


@pytest.mark.skipif(not SLOW_TESTS, reason="full convexity probes, set PYINTERACT_SLOW_TESTS to run")
@pytest.mark.parametrize("alpha,regime", EL_ALPHAS)
def test_convexity_full_probe(alpha, regime):
    r = convexity_probe(Kernel.create(alpha, regime), trials=1000)
    assert r.trials == 1000
    assert r.skipped == 0
    assert r.positive, r.min_value
