import unittest

import numpy as np
from numpy.polynomial.legendre import leggauss

from src.domain.holed_domain import HoledDomain, Hole
from src.domain.trefftz_solver import HarmonicAnsatz, solve_neumann_holed, eval_ansatz
from src.exceptions import CompatibilityError, PotentialDomainError, SolverError
from src.potential.boundary_data import NeumannData, from_trig_poly
from src.potential.datum_families.neumann_families import OuterMode, HoleFlux


class TestHarmonicAnsatz(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.domain = HoledDomain((0, 0), 1.0, [Hole((0.4, 0.1), 0.15), Hole((-0.4, -0.2), 0.1)], d=0.1)
        cls.points = np.array([[0.0, 0.5], [-0.1, 0.0], [0.6, -0.5], [0.1, 0.3]])

    def test_zero(self):
        a = HarmonicAnsatz.zero(self.domain, M=6)

        np.testing.assert_array_equal(eval_ansatz(a, self.points, order=0), 0.0)
        np.testing.assert_array_equal(eval_ansatz(a, self.points, order=1), np.zeros((4, 2)))
        np.testing.assert_array_equal(eval_ansatz(a, self.points, order=2), np.zeros((4, 2, 2)))

    def test_single_log(self):
        a = HarmonicAnsatz(self.domain, 4, np.zeros(4), [0.7, 0.0], np.zeros((2, 4)))

        gap = self.points - np.array([0.4, 0.1])
        expected = 0.7 * gap / np.sum(gap ** 2, axis=-1)[:, None]

        np.testing.assert_allclose(a.gradient(self.points), expected, rtol=1e-12)
        np.testing.assert_allclose(a.value(self.points), 0.7 * np.log(np.linalg.norm(gap, axis=-1)), rtol=1e-12)

    def test_polynomial(self):
        # u = Re((x1 + i x2)^2) = x1^2 - x2^2
        a = HarmonicAnsatz.from_unscaled(self.domain, [0, 1])

        x1, x2 = self.points.T
        np.testing.assert_allclose(a.value(self.points), x1 ** 2 - x2 ** 2, atol=1e-14)
        np.testing.assert_allclose(a.gradient(self.points), np.stack((2 * x1, -2 * x2), axis=-1), atol=1e-14)
        np.testing.assert_allclose(a.hessian(self.points), np.broadcast_to(np.diag([2.0, -2.0]), (4, 2, 2)),
                                   atol=1e-13)

        np.testing.assert_allclose(a.interior_coeffs_unscaled, [0, 1])

    def test_harmonic(self):
        rng = np.random.default_rng(42)
        M = 8

        a = HarmonicAnsatz(self.domain, M,
                           rng.standard_normal(M) + 1j * rng.standard_normal(M),
                           rng.standard_normal(2),
                           rng.standard_normal((2, M)) + 1j * rng.standard_normal((2, M)))

        hessian = a.hessian(self.points)
        scale = np.max(np.abs(hessian))

        self.assertTrue(np.all(np.abs(np.trace(hessian, axis1=-2, axis2=-1)) <= 1e-12 * max(scale, 1.0)))

    def test_finite_differences(self):
        rng = np.random.default_rng(42)
        M, h = 5, 1e-6

        a = HarmonicAnsatz(self.domain, M,
                           rng.standard_normal(M) + 1j * rng.standard_normal(M),
                           rng.standard_normal(2),
                           0.1 * (rng.standard_normal((2, M)) + 1j * rng.standard_normal((2, M))))

        e1, e2 = np.array([h, 0.0]), np.array([0.0, h])
        expected = np.stack(((a.value(self.points + e1) - a.value(self.points - e1)) / (2 * h),
                             (a.value(self.points + e2) - a.value(self.points - e2)) / (2 * h)), axis=-1)

        np.testing.assert_allclose(a.gradient(self.points), expected, rtol=1e-6, atol=1e-6)

    def test_outside(self):
        a = HarmonicAnsatz.zero(self.domain, M=3)

        with self.assertRaises(PotentialDomainError):
            a.value([[0.4, 0.1]])

        with self.assertRaises(ValueError):
            a.holomorphic_derivative(np.array([0.1j]), order=3)


class TestSolveNeumannHoled(unittest.TestCase):

    def test_concentric_annulus(self):
        dom = HoledDomain((0, 0), 2.0, [Hole((0, 0), 1.0)], d=1.0)

        # zero datum on the hole, cos on the outer circle: u = (4/3) (r + 1/r) cos
        data = NeumannData(from_trig_poly([0, 1], [], 64), [from_trig_poly([0], [], 64)])
        a = solve_neumann_holed(dom, data, M=8, nodes_per_circle=64)

        self.assertAlmostEqual(a.interior_coeffs_unscaled[0].real, 4 / 3, delta=1e-10)
        self.assertAlmostEqual(a.hole_coeffs_unscaled[0, 0].real, 4 / 3, delta=1e-10)

        # every other coefficient vanishes
        self.assertLessEqual(np.max(np.abs(a.interior_coeffs_unscaled[1:])), 1e-10)
        self.assertLessEqual(np.max(np.abs(a.hole_coeffs_unscaled[0, 1:])), 1e-10)
        self.assertAlmostEqual(a.hole_log[0], 0.0)

        self.assertLessEqual(a.residual, 1e-12)

        point = np.array([[1.5, 0.0]])
        self.assertAlmostEqual(a.value(point)[0], 4 / 3 * (1.5 + 1 / 1.5), delta=1e-9)

    def test_zero_datum(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0.5, 0), 0.2)], d=0.2)

        a = solve_neumann_holed(dom, NeumannData.zero(1), M=6, nodes_per_circle=32)

        self.assertEqual(a.residual, 0.0)
        np.testing.assert_allclose(a.value([[0.0, 0.0], [-0.5, 0.3]]), 0.0, atol=1e-15)

    def test_zero_average_annulus(self):
        # on a concentric annulus a polar tensor quadrature is exact for the modes of the ansatz
        dom = HoledDomain((0, 0), 1.0, [Hole((0, 0), 0.25)], d=0.25)
        data = HoleFlux(flux=1.0, mode=2).build(dom, 64)

        a = solve_neumann_holed(dom, data, M=16, nodes_per_circle=128)

        nodes, weights = leggauss(32)
        r = 0.25 + 0.75 * (nodes + 1) / 2
        phi = 2 * np.pi * np.arange(64) / 64

        rr, pp = np.meshgrid(r, phi, indexing="ij")
        values = a.value(np.stack((rr * np.cos(pp), rr * np.sin(pp)), axis=-1).reshape(-1, 2)).reshape(rr.shape)

        integral = np.sum((0.75 / 2) * weights[:, None] * rr * values) * 2 * np.pi / 64

        self.assertLessEqual(abs(integral / dom.area), 1e-10 * np.max(np.abs(values)))

    def test_zero_average_two_holes(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0.4, 0.1), 0.15), Hole((-0.4, -0.2), 0.1)], d=0.1)
        data = HoleFlux(flux=1.0, mode=2).build(dom, 64)

        a = solve_neumann_holed(dom, data, M=24, nodes_per_circle=128)

        self.assertAlmostEqual(a.area_average(), 0.0, delta=1e-12)
        self.assertAlmostEqual(a.area_integral(origin=(0.3, -0.7)), 0.0, delta=1e-12)

        # equal area polar cells: midpoints in r^2 and in phi, cells whose midpoint falls in a hole dropped
        r = np.sqrt((np.arange(1024) + 0.5) / 1024)
        phi = 2 * np.pi * (np.arange(2048) + 0.5) / 2048
        rr, pp = np.meshgrid(r, phi, indexing="ij")
        points = np.stack((rr * np.cos(pp), rr * np.sin(pp)), axis=-1).reshape(-1, 2)

        values = a.value(points[dom.contains(points, margin=1e-9)])

        self.assertLessEqual(abs(np.mean(values)), 5e-5 * np.max(np.abs(values)))

        # normal derivative reproduces the datum on every circle
        tau = np.linspace(-np.pi, np.pi, 11)
        for k, component in enumerate(data.components):
            np.testing.assert_allclose(a.normal_derivative(k, tau), component(tau), atol=1e-6)

    def test_area_integral(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0.4, 0.1), 0.15), Hole((-0.4, -0.2), 0.1)], d=0.1)

        constant = HarmonicAnsatz(dom, 2, np.zeros(2), np.zeros(2), np.zeros((2, 2)), constant=1.5)
        self.assertAlmostEqual(constant.area_integral(), 1.5 * dom.area, delta=1e-12)

        # u = x1 integrates to zero on the outer disk, minus its mean value on each hole
        linear = HarmonicAnsatz.from_unscaled(dom, [1.0, 0.0])
        expected = -np.pi * (0.15 ** 2 * 0.4 + 0.1 ** 2 * -0.4)
        self.assertAlmostEqual(linear.area_integral(), expected, delta=1e-12)
        self.assertAlmostEqual(linear.area_integral(origin=(0.5, 0.5)), expected, delta=1e-12)

        # log r on the annulus 1/4 < r < 1
        annulus = HoledDomain((0, 0), 1.0, [Hole((0, 0), 0.25)], d=0.25)
        log_r = HarmonicAnsatz(annulus, 2, np.zeros(2), [1.0], np.zeros((1, 2)))
        rho = 0.25
        expected = 2 * np.pi * (-1 / 4 - rho ** 2 / 2 * np.log(rho) + rho ** 2 / 4)
        self.assertAlmostEqual(log_r.area_integral(), expected, delta=1e-12)

    def test_flux_conservation(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0.4, 0.1), 0.15), Hole((-0.4, -0.2), 0.1)], d=0.1)
        data = HoleFlux(flux=1.0, mode=2).build(dom, 64)

        a = solve_neumann_holed(dom, data, M=24, nodes_per_circle=128)
        fluxes = data.fluxes(dom.r0, dom.hole_radii)[1:]

        tau = 2 * np.pi * np.arange(256) / 256
        direction = np.stack((np.cos(tau), np.sin(tau)), axis=-1)

        for k, hole in enumerate(dom.holes):
            # a circle slightly larger than the hole encloses no other hole
            radius = hole.radius + dom.d / 2
            gradient = a.gradient(np.array(hole.center) + radius * direction)

            flux = np.sum(gradient * direction) * 2 * np.pi * radius / 256

            self.assertAlmostEqual(flux, fluxes[k], delta=1e-10)
            self.assertAlmostEqual(abs(flux), 1.0, delta=1e-10)

    def test_self_convergence(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0.4, 0.1), 0.15), Hole((-0.4, -0.2), 0.1)], d=0.1)
        data = HoleFlux(flux=1.0, mode=2).build(dom, 64)
        points = np.array([[0.0, 0.5], [-0.1, 0.0], [0.6, -0.5], [0.1, 0.3]])

        coarse = solve_neumann_holed(dom, data, M=24, nodes_per_circle=256)
        fine = solve_neumann_holed(dom, data, M=48, nodes_per_circle=256)

        np.testing.assert_allclose(fine.value(points), coarse.value(points), atol=1e-9)

    def test_convergence(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0.3, 0.1), 0.1), Hole((-0.3, -0.2), 0.1)], d=0.1)
        data = OuterMode(mode=2).build(dom, 64)

        coarse = solve_neumann_holed(dom, data, M=8, nodes_per_circle=128)
        fine = solve_neumann_holed(dom, data, M=16, nodes_per_circle=128)
        finest = solve_neumann_holed(dom, data, M=24, nodes_per_circle=128)

        self.assertLessEqual(fine.residual * 10, coarse.residual)
        self.assertLessEqual(finest.residual, 1e-8)

    def test_invalid(self):
        dom = HoledDomain((0, 0), 1.0, [Hole((0.5, 0), 0.2)], d=0.2)
        data = NeumannData.zero(1)

        with self.assertRaises(ValueError):
            solve_neumann_holed(dom, NeumannData.zero(2))
        with self.assertRaises(ValueError):
            solve_neumann_holed(dom, data, M=10, nodes_per_circle=40)
        with self.assertRaises(ValueError):
            solve_neumann_holed(HoledDomain((0, 0), 1.0, [Hole((0.5, 0), 0.2)], d=0.5), data)

        unbalanced = NeumannData(from_trig_poly([1.0], [], 64), [from_trig_poly([0], [], 64)])
        with self.assertRaises(CompatibilityError):
            solve_neumann_holed(dom, unbalanced)

        with self.assertRaises(SolverError):
            solve_neumann_holed(dom, OuterMode(mode=1).build(dom, 64), M=24, max_condition=1.0)


if __name__ == '__main__':
    unittest.main()
