import unittest

import numpy as np

from src.exceptions import PotentialDomainError
from src.potential.boundary_data import from_trig_poly
from src.potential.disk_solvers import DiskField
from src.potential.greens_annulus import (GreensContext, invert, eval_phi_fund, eval_phi_corrector,
                                          eval_greens_neumann, neumann_boundary_mismatch, log_reflection_residual,
                                          corrector_laplacian, single_layer, single_layer_radial_derivative,
                                          neumann_representation)


def random_exterior_points(rng: np.random.Generator, R: float, n_points: int, max_ratio: float = 5.0):
    rho = R * rng.uniform(1.1, max_ratio, n_points)
    theta = rng.uniform(-np.pi, np.pi, n_points)

    return np.stack((rho * np.cos(theta), rho * np.sin(theta)), axis=-1)


class TestGreensContext(unittest.TestCase):

    def test_invalid_radius(self):
        with self.assertRaises(ValueError):
            GreensContext(0.0)

    def test_source_constant(self):
        self.assertAlmostEqual(GreensContext(2.0).source_constant * np.pi * 4, 1.0)

    def test_circle_points(self):
        points = GreensContext(3.0).circle_points(64)

        self.assertEqual(points.shape, (64, 2))
        np.testing.assert_allclose(np.linalg.norm(points, axis=-1), 3.0)


class TestInversion(unittest.TestCase):

    def test_value(self):
        np.testing.assert_allclose(invert(GreensContext(1.0), (2.0, 0.0)), [0.5, 0.0])

    def test_involution(self):
        ctx = GreensContext(1.7)
        x = random_exterior_points(np.random.default_rng(42), 1.7, 50)

        image = invert(ctx, x)
        np.testing.assert_allclose(invert(ctx, image), x, rtol=1e-13)
        np.testing.assert_allclose(np.linalg.norm(image, axis=-1) * np.linalg.norm(x, axis=-1), 1.7 ** 2,
                                   rtol=1e-13)

        # the circle is fixed
        circle = ctx.circle_points(16)
        np.testing.assert_allclose(invert(ctx, circle), circle, atol=1e-13)

    def test_origin(self):
        with self.assertRaises(PotentialDomainError):
            invert(GreensContext(1.0), (0.0, 0.0))


class TestFundamentalSolution(unittest.TestCase):

    def test_values(self):
        self.assertAlmostEqual(eval_phi_fund((0.6, 0.8)), 0.0, delta=1e-15)
        self.assertAlmostEqual(eval_phi_fund((np.e, 0.0)), -1 / (2 * np.pi))

    def test_radial(self):
        angles = np.linspace(0, 2 * np.pi, 9)
        points = 1.3 * np.stack((np.cos(angles), np.sin(angles)), axis=-1)

        np.testing.assert_allclose(eval_phi_fund(points), eval_phi_fund((1.3, 0.0)))

    def test_symmetric(self):
        rng = np.random.default_rng(42)
        x, y = rng.uniform(-2, 2, (2, 20, 2))

        np.testing.assert_allclose(eval_phi_fund(y - x), eval_phi_fund(x - y))


class TestCorrector(unittest.TestCase):

    def test_value(self):
        expected = np.log(np.sqrt(1.25)) / (2 * np.pi) - 1 / (4 * np.pi)
        self.assertAlmostEqual(eval_phi_corrector(GreensContext(1.0), (2.0, 0.0), (0.0, 1.0)), expected)

    def test_image_point(self):
        with self.assertRaises(PotentialDomainError):
            eval_phi_corrector(GreensContext(1.0), (2.0, 0.0), (0.5, 0.0))

    def test_laplacian(self):
        rng = np.random.default_rng(42)

        for R in (0.5, 1.0, 2.0):
            ctx = GreensContext(R)
            x = np.array([2 * R, 0.0])
            y = random_exterior_points(rng, R, 10, max_ratio=3.0)

            errors = []
            for h in (1e-2 * R, 5e-3 * R):
                laplacian = corrector_laplacian(ctx, x, y, h)
                errors.append(np.max(np.abs(laplacian + ctx.source_constant)))

            self.assertLessEqual(errors[0] * np.pi * R ** 2, 1e-3)

            # second order in h
            self.assertLess(errors[1], errors[0])

    def test_boundary_mismatch(self):
        rng = np.random.default_rng(42)

        for R in (0.5, 1.0, 5.0):
            ctx = GreensContext(R)
            x = random_exterior_points(rng, R, 20)

            self.assertLessEqual(neumann_boundary_mismatch(ctx, x, n_nodes=256), 1e-8)

    def test_log_reflection(self):
        rng = np.random.default_rng(42)
        ctx = GreensContext(2.0)

        x = random_exterior_points(rng, 2.0, 100)
        y = random_exterior_points(rng, 2.0, 100)

        self.assertLessEqual(log_reflection_residual(ctx, x, y), 1e-12)


class TestGreensNeumann(unittest.TestCase):

    def test_coincident(self):
        with self.assertRaises(PotentialDomainError):
            eval_greens_neumann(GreensContext(1.0), (2.0, 0.0), (2.0, 0.0))

    def test_single_layer_single_mode(self):
        # the exterior single layer of cos is R^2 cos(phi) / r, whose radial derivative is -cos on the circle
        for R in (1.0, 2.0):
            ctx = GreensContext(R)
            g = from_trig_poly([0, 1], [], 32)

            x = np.array([[1.5 * R, 0.0], [0.0, 3.0 * R], [-2.0 * R, 0.0]])
            r = np.linalg.norm(x, axis=-1)
            cos_phi = x[:, 0] / r

            np.testing.assert_allclose(single_layer(ctx, g, x), R ** 2 * cos_phi / r, atol=1e-10)
            np.testing.assert_allclose(single_layer_radial_derivative(ctx, g, x), -R ** 2 * cos_phi / r ** 2,
                                       atol=1e-10)

    def test_single_layer_trace(self):
        ctx = GreensContext(1.0)
        g = from_trig_poly([0, 0, 1], [0, 0.5], 64)

        angles = np.linspace(-np.pi, np.pi, 7)
        directions = np.stack((np.cos(angles), np.sin(angles)), axis=-1)

        far = single_layer_radial_derivative(ctx, g, 1.004 * directions)
        near = single_layer_radial_derivative(ctx, g, 1.002 * directions)

        # linear extrapolation to the circle
        np.testing.assert_allclose(2 * near - far, -g(angles), atol=1e-3)


class TestRepresentation(unittest.TestCase):

    def test_interior_side(self):
        ctx = GreensContext(0.5)

        # x1^2 - x2^2, harmonic in the unit disk
        field = DiskField("dirichlet", from_trig_poly([0, 0, 1], [], 32))

        angles = np.array([0.0, 1.0, 2.5, -2.0])
        x = 0.45 * np.stack((np.cos(angles), np.sin(angles)), axis=-1)

        represented = neumann_representation(ctx, field, x, width=0.3, side="interior",
                                             n_radial=128, n_angular=256)

        # the representation holds up to an additive constant
        deviation = represented - field.value(x)
        self.assertLessEqual(np.ptp(deviation), 1e-4)

    def test_invalid_points(self):
        ctx = GreensContext(0.5)
        field = DiskField("dirichlet", from_trig_poly([0, 1], [], 32))

        # farther than width / 3 from the circle
        with self.assertRaises(PotentialDomainError):
            neumann_representation(ctx, field, [[0.3, 0.0]], width=0.3, side="interior")

        with self.assertRaises(ValueError):
            neumann_representation(ctx, field, [[0.45, 0.0]], width=0.6, side="interior")
        with self.assertRaises(ValueError):
            neumann_representation(ctx, field, [[0.45, 0.0]], width=0.3, side="sideways")


if __name__ == '__main__':
    unittest.main()
