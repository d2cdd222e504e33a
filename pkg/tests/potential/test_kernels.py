import unittest

import numpy as np

from src.exceptions import PotentialDomainError
from src.potential.kernels import (KernelPoint, eval_poisson, eval_conjugate, eval_poisson_grad_xy, poisson_mass,
                                   conjugate_mass, reduce_angle)


class TestKernelPoint(unittest.TestCase):

    def test_angle_reduction(self):
        p = KernelPoint(0.5, np.array([3 * np.pi, -np.pi, 2 * np.pi + 0.1]))

        # every angle is mapped to (-pi, pi]
        np.testing.assert_allclose(p.phi, [np.pi, np.pi, 0.1], atol=1e-12)
        self.assertTrue(np.all(reduce_angle(np.linspace(-10, 10, 101)) > -np.pi))

    def test_negative_radius(self):
        with self.assertRaises(PotentialDomainError):
            KernelPoint(-0.1, 0.0)


class TestPoissonKernel(unittest.TestCase):

    def test_values(self):
        # at r = 0 numerator and denominator are both 1
        self.assertAlmostEqual(eval_poisson(KernelPoint(0.0, 1.234)), 1.0)
        self.assertAlmostEqual(eval_poisson(KernelPoint(0.5, 0.0)), 3.0)

    def test_pole(self):
        with self.assertRaises(PotentialDomainError):
            eval_poisson(KernelPoint(1.0, 0.0))

        with self.assertRaises(PotentialDomainError):
            eval_poisson(KernelPoint(1.0, 2 * np.pi))

        # on the unit circle away from the pole the kernel is defined
        self.assertEqual(eval_poisson(KernelPoint(1.0, 1.0)), 0.0)

    def test_sign(self):
        phi = np.linspace(-np.pi, np.pi, 50)

        self.assertTrue(np.all(eval_poisson(KernelPoint(0.8, phi)) > 0))
        self.assertTrue(np.all(eval_poisson(KernelPoint(1.3, phi)) < 0))

    def test_mass(self):
        # 1 inside the disk, -1 outside
        self.assertAlmostEqual(poisson_mass(0.7, 512), 1.0, delta=1e-10)
        self.assertAlmostEqual(poisson_mass(1.5, 512), -1.0, delta=1e-10)

        for r in np.concatenate((np.linspace(0, 0.9, 10), np.linspace(1.1, 2, 10))):
            self.assertAlmostEqual(poisson_mass(r, 256), -np.sign(r - 1), delta=1e-10)


class TestConjugateKernel(unittest.TestCase):

    def test_values(self):
        self.assertEqual(eval_conjugate(KernelPoint(0.3, 0.0)), 0.0)
        self.assertAlmostEqual(eval_conjugate(KernelPoint(0.5, np.pi / 2)), 0.4)

    def test_odd(self):
        rng = np.random.default_rng(42)
        r = rng.uniform(0, 2, 100)
        r = r[np.abs(r - 1) > 0.05]
        phi = rng.uniform(-np.pi, np.pi, len(r))

        np.testing.assert_allclose(eval_conjugate(KernelPoint(r, -phi)), -eval_conjugate(KernelPoint(r, phi)))

    def test_mass(self):
        self.assertAlmostEqual(conjugate_mass(0.6, 256), 0.0, delta=1e-10)
        self.assertAlmostEqual(conjugate_mass(1.7, 256), 0.0, delta=1e-10)


class TestPoissonGradient(unittest.TestCase):

    @staticmethod
    def _poisson_xy(x1, x2):
        return eval_poisson(KernelPoint(np.hypot(x1, x2), np.arctan2(x2, x1)))

    def test_finite_differences(self):
        r, phi, h = 0.4, 1.1, 1e-5
        x1, x2 = r * np.cos(phi), r * np.sin(phi)

        expected = np.array([
            (self._poisson_xy(x1 + h, x2) - self._poisson_xy(x1 - h, x2)) / (2 * h),
            (self._poisson_xy(x1, x2 + h) - self._poisson_xy(x1, x2 - h)) / (2 * h)
        ])
        result = eval_poisson_grad_xy(KernelPoint(r, phi))

        np.testing.assert_allclose(result, expected, rtol=1e-6)

    def test_origin(self):
        np.testing.assert_allclose(eval_poisson_grad_xy(KernelPoint(0.0, 0.0)), [2.0, 0.0], atol=1e-14)

    def test_parity(self):
        phi = np.linspace(0.1, 3.0, 20)

        upper = eval_poisson_grad_xy(KernelPoint(0.6, phi))
        lower = eval_poisson_grad_xy(KernelPoint(0.6, -phi))

        np.testing.assert_allclose(lower[:, 1], -upper[:, 1])
        np.testing.assert_allclose(lower[:, 0], upper[:, 0])

    def test_broadcast_shape(self):
        result = eval_poisson_grad_xy(KernelPoint(np.array([[0.2], [0.5]]), np.linspace(0, 1, 7)))
        self.assertEqual(result.shape, (2, 7, 2))


if __name__ == '__main__':
    unittest.main()
