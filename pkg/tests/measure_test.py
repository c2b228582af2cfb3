'''unit testing code for measures and the interaction functionals.'''
import json
import math
import unittest

import numpy
import pytest

from pyinteract.closedform import build_solution
from pyinteract.kernel import Kernel
from pyinteract.measure import (
    DiscreteMeasure,
    GridMeasure,
    cdf_of,
    center_of_mass,
    dump_measure,
    energy,
    energy_quadrature,
    load_measure,
    measure_from_dict,
    measure_to_dict,
    near_field_correction,
    pair_matrix,
    pairwise_energy,
    pairwise_gradient,
    potential_at,
    second_moment_of,
    translate,
    two_dirac,
    wasserstein1,
)
from pyinteract.utils import DomainError

from TestUtils import get_temp_context


class TestConstruction(unittest.TestCase):

    def test_discrete_validation(self):
        self.assertRaises(DomainError, DiscreteMeasure, [], [])
        self.assertRaises(DomainError, DiscreteMeasure, [0.0, 1.0], [1.0])
        self.assertRaises(DomainError, DiscreteMeasure, [0.0, 1.0], [1.5, -0.5])
        self.assertRaises(DomainError, DiscreteMeasure, [0.0, 1.0], [0.5, 0.4])
        self.assertRaises(DomainError, DiscreteMeasure, [0.0, math.nan], [0.5, 0.5])

    def test_discrete_read_only(self):
        mu = DiscreteMeasure.uniform([0.0, 1.0, 2.0])
        with self.assertRaises(ValueError):
            mu.positions[0] = 5.0

    def test_grid_validation(self):
        self.assertRaises(DomainError, GridMeasure, [0.0, 0.0, 1.0], [0.2, 0.3, 0.5])
        self.assertRaises(DomainError, GridMeasure, [1.0, 0.0], [0.5, 0.5])
        self.assertRaises(DomainError, GridMeasure, [0.0, 1.0], [1.5, -0.5])
        # zero weights are allowed on a grid
        self.assertEqual(len(GridMeasure([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])), 3)

    def test_spacing(self):
        self.assertAlmostEqual(GridMeasure(numpy.linspace(-1, 1, 5), [0.2] * 5).spacing, 0.5)
        self.assertRaises(DomainError, lambda: GridMeasure([0.0, 1.0, 3.0], [0.2, 0.3, 0.5]).spacing)
        self.assertRaises(DomainError, lambda: GridMeasure([0.0], [1.0]).spacing)

    def test_two_dirac(self):
        mu = two_dirac(0.25, 1.0)
        numpy.testing.assert_array_equal(mu.positions, [0.5, 1.5])
        numpy.testing.assert_array_equal(mu.weights, [0.25, 0.75])
        self.assertRaises(DomainError, two_dirac, 0.0)
        self.assertRaises(DomainError, two_dirac, 1.0)

    def test_grid_from_closed_form(self):
        s = build_solution(Kernel(1.0, "B"))
        mu = GridMeasure.from_closed_form(s, numpy.linspace(-2, 2, 41))
        self.assertAlmostEqual(math.fsum(mu.weights), 1.0, places=14)
        # cells inside the support of the uniform law carry h / 2
        numpy.testing.assert_allclose(mu.weights[15:26], 0.05, rtol=1e-10)
        numpy.testing.assert_array_equal(mu.weights[:9], 0.0)
        self.assertEqual(mu.support().min(), -1.0)


class TestEnergy(unittest.TestCase):

    def test_two_dirac_regime_a(self):
        for alpha in (2.1, 2.5, 2.9):
            self.assertAlmostEqual(energy(two_dirac(0.5), Kernel(alpha, "A")),
                                   0.25 * (1 / alpha - 0.5), places=15)

    def test_single_atom(self):
        self.assertEqual(energy(DiscreteMeasure([0.0], [1.0]), Kernel(2.5, "A")), 0.0)

    def test_singular_kernel_excludes_self_pairs(self):
        mu = two_dirac(0.5)
        # K(1) = 1/2 for the logarithmic kernel
        self.assertAlmostEqual(energy(mu, Kernel(0.0, "B")), 0.125, places=15)
        self.assertTrue(math.isfinite(energy(mu, Kernel(-0.5, "B"))))

    def test_closed_form(self):
        s = build_solution(Kernel(1.0, "B"))
        self.assertAlmostEqual(energy(s, Kernel(1.0, "B")), -1.0 / 6, places=14)
        self.assertAlmostEqual(energy_quadrature(s), -1.0 / 6, places=10)

    def test_closed_form_of_log_kernel_uses_quadrature(self):
        k = Kernel(0.0, "B")
        self.assertAlmostEqual(energy(build_solution(k), k), 0.375 + 0.25 * math.log(2), places=8)

    def test_kernel_mismatch(self):
        s = build_solution(Kernel(1.0, "B"))
        self.assertRaises(DomainError, energy, s, Kernel(1.5, "B"))

    def test_conventions(self):
        mu = two_dirac(0.5)
        self.assertRaises(DomainError, energy, mu, Kernel(2.5, "A"), "cell")
        self.assertRaises(DomainError, energy, mu, Kernel(2.5, "A"), "midpoint")

    def test_cell_energy_of_uniform_law(self):
        k = Kernel(1.0, "B")
        grid = numpy.linspace(-1.0, 1.0, 201)
        mu = GridMeasure(grid, numpy.r_[0.5, numpy.ones(199), 0.5] / 200)
        self.assertAlmostEqual(energy(mu, k, convention="cell"), -1.0 / 6, delta=1e-4)

    def test_cell_energy_of_log_kernel(self):
        k = Kernel(0.0, "B")
        s = build_solution(k)
        mu = GridMeasure.from_closed_form(s, numpy.linspace(-2.0, 2.0, 401))
        self.assertAlmostEqual(energy(mu, k, convention="cell"), 0.375 + 0.25 * math.log(2),
                               delta=1e-3)

    def test_pairwise_matches_direct_sum(self):
        rng = numpy.random.RandomState(42)
        x = rng.uniform(-1, 1, 50)
        w = rng.uniform(0.5, 1.0, 50)
        w /= w.sum()
        k = Kernel(1.7, "B")
        K = pair_matrix(x, k)
        self.assertAlmostEqual(pairwise_energy(x, w, k), 0.5 * float(w @ K @ w), places=14)


class TestPotential(unittest.TestCase):

    def test_single_atom(self):
        for alpha in (2.1, 2.5):
            self.assertAlmostEqual(potential_at(DiscreteMeasure([0.0], [1.0]), Kernel(alpha, "A"), 1.0),
                                   1 / alpha - 0.5, places=15)

    def test_two_dirac_at_centre(self):
        value = potential_at(two_dirac(0.5), Kernel(2.5, "A"), 0.0)
        self.assertAlmostEqual(value, 0.5 ** 2.5 / 2.5 - 0.125, places=15)

    def test_vectorised(self):
        mu = two_dirac(0.5)
        out = potential_at(mu, Kernel(2.5, "A"), numpy.array([0.0, 0.5, 3.0]))
        self.assertEqual(out.shape, (3,))

    def test_closed_form_constant_on_support(self):
        k = Kernel(2.5, "A")
        s = build_solution(k, 0.2)
        x = 0.2 + s.R * numpy.array([-0.95, -0.3, 0.0, 0.6])
        numpy.testing.assert_allclose(potential_at(s, k, x), s.eta, atol=1e-7)

    def test_singular_at_atom(self):
        self.assertEqual(potential_at(two_dirac(0.5), Kernel(0.0, "B"), 0.5), math.inf)


class TestGradient(unittest.TestCase):

    def test_matches_finite_difference(self):
        k = Kernel(2.5, "A")
        x = numpy.array([-0.7, -0.1, 0.2, 0.9, 1.4])
        w = numpy.full(x.size, 1.0 / x.size)
        g = pairwise_gradient(x, k)
        h = 1e-6
        for i in range(x.size):
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            fd = (pairwise_energy(xp, w, k, False) - pairwise_energy(xm, w, k, False)) / (2 * h)
            self.assertAlmostEqual(g[i], fd, places=8)

    def test_translation_invariant(self):
        g = pairwise_gradient(numpy.array([-1.0, 0.3, 0.5, 2.0]), Kernel(0.5, "B"))
        self.assertAlmostEqual(float(numpy.sum(g)), 0.0, places=14)


class TestDistances(unittest.TestCase):

    def test_identical(self):
        mu = two_dirac(0.3)
        self.assertEqual(wasserstein1(mu, mu), 0.0)
        s = build_solution(Kernel(2.5, "A"))
        self.assertAlmostEqual(wasserstein1(s, s), 0.0, places=14)

    def test_diracs(self):
        for t in (0.5, -2.0):
            self.assertAlmostEqual(wasserstein1(DiscreteMeasure([0.0], [1.0]),
                                                DiscreteMeasure([t], [1.0])), abs(t), places=15)

    def test_translated(self):
        mu = two_dirac(0.3)
        self.assertAlmostEqual(wasserstein1(mu, translate(mu, 0.25)), 0.25, places=14)
        for alpha, regime in ((2.5, "A"), (0.5, "B")):
            s = build_solution(Kernel(alpha, regime))
            self.assertAlmostEqual(wasserstein1(s, translate(s, 0.3)), 0.3, places=7)

    def test_atoms_against_closed_form(self):
        # the uniform law on [-1, 1] against a Dirac at 0 is E|X| = 1/2
        s = build_solution(Kernel(1.0, "B"))
        self.assertAlmostEqual(wasserstein1(DiscreteMeasure([0.0], [1.0]), s), 0.5, places=8)


class TestMoments(unittest.TestCase):

    def test_center_of_mass(self):
        self.assertEqual(center_of_mass(two_dirac(0.5)).value, 0.0)
        self.assertEqual(center_of_mass(DiscreteMeasure([3.0], [1.0])).value, 3.0)
        self.assertEqual(center_of_mass(build_solution(Kernel(2.5, "A"), 0.7)).value, 0.7)

    def test_second_moment(self):
        self.assertAlmostEqual(second_moment_of(two_dirac(0.5, 4.0)), 0.25, places=14)
        self.assertAlmostEqual(second_moment_of(build_solution(Kernel(1.0, "B"))), 1.0 / 3,
                               places=14)

    def test_cdf_right_continuous(self):
        mu = two_dirac(0.25)
        numpy.testing.assert_array_equal(cdf_of(mu, [-1.0, -0.5, 0.0, 0.5, 1.0]),
                                         [0.0, 0.25, 0.25, 1.0, 1.0])


class TestSerialisation(unittest.TestCase):

    def test_dict_round_trip(self):
        for mu in (two_dirac(0.4), GridMeasure([0.0, 1.0, 2.0], [0.25, 0.5, 0.25])):
            nu = measure_from_dict(json.loads(json.dumps(measure_to_dict(mu, alpha=2.5))))
            self.assertIs(type(nu), type(mu))
            numpy.testing.assert_array_equal(nu.positions, mu.positions)
            numpy.testing.assert_array_equal(nu.weights, mu.weights)

    def test_closed_form_document(self):
        s = build_solution(Kernel(0.5, "B"), 1.0)
        nu = measure_from_dict(measure_to_dict(s))
        self.assertEqual(nu.kernel, s.kernel)
        self.assertEqual(nu.center, 1.0)

    def test_alpha_recorded(self):
        self.assertEqual(measure_to_dict(two_dirac(0.5), alpha=2.5)["alpha"], 2.5)
        self.assertNotIn("alpha", measure_to_dict(two_dirac(0.5)))

    def test_unknown_type(self):
        self.assertRaises(DomainError, measure_from_dict, {"type": "histogram"})

    def test_file(self):
        mu = DiscreteMeasure([-0.25, 0.1, 0.8], [0.2, 0.3, 0.5])
        with get_temp_context("measure.json") as fn:
            dump_measure(mu, fn, alpha=1.5)
            with open(fn) as inf:
                self.assertEqual(json.load(inf)["type"], "discrete")
            nu = load_measure(fn)
        numpy.testing.assert_array_equal(nu.positions, mu.positions)


@pytest.mark.parametrize("alpha,regime", [(2.5, "A"), (1.5, "B"), (0.0, "B"), (-0.5, "B")])
def test_energy_is_translation_invariant(alpha, regime):
    k = Kernel(alpha, regime)
    mu = DiscreteMeasure([-0.4, 0.1, 0.75], [0.3, 0.3, 0.4])
    assert energy(translate(mu, 3.0), k) == pytest.approx(energy(mu, k), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("alpha,regime", [(2.5, "A"), (2.9, "A"), (0.5, "B"), (1.5, "B")])
def test_mean_potential_is_twice_the_energy(alpha, regime):
    k = Kernel(alpha, regime)
    for mu in (DiscreteMeasure([-0.9, -0.2, 0.35, 1.1], [0.1, 0.4, 0.3, 0.2]),
               GridMeasure.from_closed_form(build_solution(k), numpy.linspace(-2, 2, 41))):
        phi = potential_at(mu, k, mu.positions)
        assert float(mu.weights @ phi) == pytest.approx(2 * energy(mu, k), rel=1e-12, abs=1e-14)


class TestNearField(unittest.TestCase):

    def test_zero_for_finite_kernels(self):
        x = numpy.linspace(-1, 1, 11)
        w = numpy.full(11, 1 / 11)
        for k in (Kernel(2.5, "A"), Kernel(0.5, "B")):
            self.assertEqual(near_field_correction(x, w, k), 0.0)

    def test_lattice_matches_cell_energy(self):
        # the atoms of a lattice plus their correction carry the energy
        # of the piecewise constant density on the same cells
        x = numpy.linspace(-1, 1, 101)
        w = numpy.full(101, 1 / 101)
        for alpha, delta in ((0.0, 2e-4), (-0.5, 1e-3)):
            k = Kernel(alpha, "B")
            cells = energy(GridMeasure(x, w), k, convention="cell")
            atoms = pairwise_energy(x, w, k, include_diagonal=False)
            near = near_field_correction(x, w, k)
            self.assertGreater(near, 0.01)
            self.assertAlmostEqual(atoms + near, cells, delta=delta)

    def test_order_does_not_matter(self):
        k = Kernel(0.0, "B")
        x = numpy.array([0.3, -0.5, 0.1, 0.9, -0.2])
        w = numpy.array([0.1, 0.2, 0.3, 0.25, 0.15])
        order = numpy.argsort(x)
        self.assertAlmostEqual(near_field_correction(x, w, k),
                               near_field_correction(x[order], w[order], k), places=15)
