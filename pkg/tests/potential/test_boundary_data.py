import unittest

import numpy as np

from src.domain.holed_domain import HoledDomain, Hole
from src.exceptions import CompatibilityError, QuadratureResolutionError
from src.potential.boundary_data import (PeriodicFunction, NeumannData, from_trig_poly, random_trig_poly,
                                         tangential_derivative, second_derivative, holder_seminorm_circle,
                                         holder_quotient_max, check_zero_mean, quadrature_nodes)


class TestPeriodicFunction(unittest.TestCase):

    def test_invalid_samples(self):
        # odd count
        with self.assertRaises(ValueError):
            PeriodicFunction(np.zeros(17))

        # too few samples
        with self.assertRaises(ValueError):
            PeriodicFunction(np.zeros(8))

        with self.assertRaises(ValueError):
            PeriodicFunction(np.full(16, np.nan))

    def test_inconsistent_coeffs(self):
        g = from_trig_poly([0, 1], [], 32)

        with self.assertRaises(ValueError):
            PeriodicFunction(g.samples, g.coeffs * 2)

    def test_real_valued_coeffs(self):
        g = random_trig_poly(np.random.default_rng(42), degree=6, N=32)

        for m in range(1, 7):
            self.assertAlmostEqual(g.mode(-m), np.conj(g.mode(m)), delta=1e-14)

    def test_read_only(self):
        g = from_trig_poly([1, 2], [0, 3], 16)

        with self.assertRaises(ValueError):
            g.samples[0] = 5

    def test_call_interpolates(self):
        g = from_trig_poly([0.3, 0, -1], [0, 0.5], 32)
        tau = np.linspace(-3, 3, 17)

        expected = 0.3 - np.cos(2 * tau) + 0.5 * np.sin(tau)
        np.testing.assert_allclose(g(tau), expected, atol=1e-13)

    def test_arithmetic(self):
        g = from_trig_poly([1, 2], [], 16)
        h = from_trig_poly([0, 0, 1], [], 32)

        # different sample counts are brought to the finer one
        total = g + h
        self.assertEqual(total.N, 32)
        np.testing.assert_allclose(total.samples, 1 + 2 * np.cos(total.nodes) + np.cos(2 * total.nodes), atol=1e-13)

        shifted = g - 1
        self.assertAlmostEqual(shifted.mean, 0.0, delta=1e-15)
        self.assertAlmostEqual(g.with_mean_removed().mean, 0.0, delta=1e-15)

        np.testing.assert_allclose((3 * g).samples, 3 * g.samples)
        np.testing.assert_allclose((-g).samples, -g.samples)

    def test_resample(self):
        g = from_trig_poly([0, 1, 0, 0.5], [], 64)

        coarse = g.resample(16)
        np.testing.assert_allclose(coarse.samples, g(quadrature_nodes(16)), atol=1e-13)
        self.assertIs(g.resample(64), g)

        # degree 20 needs at least 42 nodes
        rich = from_trig_poly(np.ones(21), [], 64)
        with self.assertRaises(QuadratureResolutionError):
            rich.resample(32)


class TestFromTrigPoly(unittest.TestCase):

    def test_constant_zero(self):
        g = from_trig_poly([0], [], 16)
        self.assertTrue(np.all(g.samples == 0))

    def test_cos(self):
        g = from_trig_poly([0, 1], [], 64)

        # node 32 is tau = 0
        self.assertAlmostEqual(g.samples[32], 1.0)
        self.assertAlmostEqual(g.sup_norm, 1.0)

    def test_coeffs(self):
        g = from_trig_poly([0, 0, 0, 1], [], 32)

        magnitudes = np.abs(g.coeffs)
        self.assertAlmostEqual(magnitudes[3], 0.5)
        self.assertAlmostEqual(magnitudes[-3], 0.5)

        magnitudes[[3, -3]] = 0
        self.assertTrue(np.all(magnitudes < 1e-15))

        # same coefficients as the transform of the samples
        np.testing.assert_allclose(PeriodicFunction(g.samples).coeffs, g.coeffs, atol=1e-14)
        self.assertEqual(g.bandwidth(), 3)

    def test_aliasing(self):
        with self.assertRaises(QuadratureResolutionError):
            from_trig_poly(np.ones(10), [], 16)

        with self.assertRaises(QuadratureResolutionError):
            from_trig_poly([1], [], 17)


class TestTangentialDerivative(unittest.TestCase):

    def test_constant(self):
        g = from_trig_poly([3.5], [], 16)
        np.testing.assert_allclose(tangential_derivative(g).samples, 0, atol=1e-15)

    def test_cos(self):
        g = from_trig_poly([0, 1], [], 32)
        np.testing.assert_allclose(tangential_derivative(g).samples, -np.sin(g.nodes), atol=1e-14)

    def test_mixed_modes(self):
        g = from_trig_poly([0, 0, 0, 1], [0, 0, 0, 0, 0, 0.5], 64)
        tau = g.nodes

        expected = -3 * np.sin(3 * tau) + 2.5 * np.cos(5 * tau)
        self.assertLessEqual(np.max(np.abs(tangential_derivative(g).samples - expected)), 1e-12)

        expected_second = -9 * np.cos(3 * tau) - 12.5 * np.sin(5 * tau)
        self.assertLessEqual(np.max(np.abs(second_derivative(g).samples - expected_second)), 1e-11)

    def test_zero_mean(self):
        g = random_trig_poly(np.random.default_rng(42), degree=8, N=64)
        self.assertAlmostEqual(tangential_derivative(g).mean, 0.0, delta=1e-15)


class TestHolderSeminorm(unittest.TestCase):

    def test_constant(self):
        g = from_trig_poly([2.0], [], 64)
        self.assertEqual(holder_seminorm_circle(g, 0.5), 0.0)

    def test_cos(self):
        g = from_trig_poly([0, 1], [], 256)

        # |cos a - cos b| / |e^{ia} - e^{ib}|^{1/2} = sqrt(2) |sin((a+b)/2)| |sin((a-b)/2)|^{1/2},
        # attained at the antipodal nodes 0 and -pi
        self.assertAlmostEqual(holder_seminorm_circle(g, 0.5), np.sqrt(2), delta=1e-12)

    def test_radius_scaling(self):
        g = random_trig_poly(np.random.default_rng(42), degree=5, N=64)

        unit = holder_seminorm_circle(g, 0.3, radius=1.0)
        doubled = holder_seminorm_circle(g, 0.3, radius=2.0)

        self.assertAlmostEqual(doubled, unit * 2 ** -0.3, delta=1e-12)

    def test_monotone_in_grid(self):
        g = random_trig_poly(np.random.default_rng(42), degree=5, N=32)

        seminorms = [holder_seminorm_circle(g.resample(n_nodes), 0.5) for n_nodes in (32, 64, 128)]

        # finer grids only add candidate pairs
        self.assertLessEqual(seminorms[0], seminorms[1] + 1e-14)
        self.assertLessEqual(seminorms[1], seminorms[2] + 1e-14)

    def test_invalid_params(self):
        g = from_trig_poly([0, 1], [], 32)

        with self.assertRaises(ValueError):
            holder_seminorm_circle(g, 1.0)
        with self.assertRaises(ValueError):
            holder_seminorm_circle(g, 0.5, radius=0)

    def test_pairs_subset(self):
        rng = np.random.default_rng(42)
        points = rng.uniform(size=(40, 2))
        values = rng.uniform(size=40)

        every_pair = np.array([(i, j) for i in range(40) for j in range(i + 1, 40)])

        self.assertAlmostEqual(holder_quotient_max(points, values, 0.5),
                               holder_quotient_max(points, values, 0.5, pairs=every_pair))

        # a subset can only find smaller quotients
        self.assertLessEqual(holder_quotient_max(points, values, 0.5, pairs=every_pair[:10]),
                             holder_quotient_max(points, values, 0.5))


class TestNeumannData(unittest.TestCase):

    def test_zero_mean(self):
        check_zero_mean(from_trig_poly([0, 1], [], 32))

        with self.assertRaises(CompatibilityError):
            check_zero_mean(from_trig_poly([0.1, 1], [], 32))

    def test_compatibility(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0, 0), 0.25)])

        # outer flux 2pi * 1 * 0.5 equals hole flux 2pi * 0.25 * 2
        outer = from_trig_poly([0.5, 1], [], 32)
        hole = from_trig_poly([2.0], [], 32)
        data = NeumannData(outer, [hole])

        data.check_compatibility(dom.r0, dom.hole_radii)
        self.assertAlmostEqual(data.compatibility_defect(dom.r0, dom.hole_radii), 0.0, delta=1e-12)
        np.testing.assert_allclose(data.fluxes(dom.r0, dom.hole_radii), [np.pi, np.pi])

        unbalanced = NeumannData(outer, [hole * 2])
        with self.assertRaises(CompatibilityError):
            unbalanced.check_compatibility(dom.r0, dom.hole_radii)

        with self.assertRaises(ValueError):
            data.compatibility_defect(dom.r0, [0.25, 0.1])

    def test_scaled_and_zero(self):
        data = NeumannData(from_trig_poly([0, 1], [], 32), [from_trig_poly([0, 0, 1], [], 32)])

        self.assertAlmostEqual(data.scaled(3).sup_norm, 3 * data.sup_norm)

        zero = NeumannData.zero(n_holes=2)
        self.assertEqual(zero.n_holes, 2)
        self.assertEqual(zero.sup_norm, 0.0)
        self.assertEqual(len(zero.components), 3)


if __name__ == '__main__':
    unittest.main()
