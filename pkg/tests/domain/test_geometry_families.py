import unittest

import numpy as np

from src.domain import GeometryParams, SolverParams
from src.domain.abstract_family import GeometryFamily
from src.domain.families.geometry_families import Disk, Concentric, Ring, Explicit
from src.domain.holed_domain import validate_geometry
from src.exceptions import ConfigError


class TestGeometryFamilyRegistry(unittest.TestCase):

    def test_registered(self):
        self.assertEqual(set(GeometryFamily.all_families_available(return_str=True)),
                         {"Disk", "Concentric", "Ring", "Explicit"})

        self.assertIs(GeometryFamily.family_exists("ring", return_bool=False), Ring)
        self.assertTrue(GeometryFamily.family_exists("DISK"))

    def test_missing(self):
        with self.assertRaises(KeyError):
            GeometryFamily.family_exists("Annulus")

        with self.assertRaises(KeyError):
            GeometryFamily.from_config({"n": 2})

    def test_from_config_does_not_consume_section(self):
        section = {"family": "Disk", "r0": [1.0, 3.0]}
        family = GeometryFamily.from_config(section)

        self.assertIsInstance(family, Disk)
        self.assertEqual(str(family), "Disk")
        self.assertEqual(section["family"], "Disk")


class TestGeometryFamilies(unittest.TestCase):

    def test_disk(self):
        domains = Disk(r0=[1.0, 3.0]).domains()

        self.assertEqual([dom.r0 for dom in domains], [1.0, 3.0])
        self.assertEqual([dom.d for dom in domains], [0.5, 1.5])
        self.assertTrue(all(dom.n == 0 for dom in domains))

    def test_concentric(self):
        [dom] = Concentric(d_ratio=0.25, r0=2.0).domains()

        self.assertEqual(dom.n, 1)
        self.assertEqual(dom.holes[0].center, (0.0, 0.0))
        self.assertAlmostEqual(dom.holes[0].radius, 0.5)
        self.assertAlmostEqual(dom.d, 0.5)
        self.assertTrue(validate_geometry(dom).passed)

        with self.assertRaises(ValueError):
            Concentric(d_ratio=0.6)

    def test_ring(self):
        [dom] = Ring(n=3, d_ratio=0.1, r0=2.0).domains()

        self.assertEqual(dom.n, 3)
        self.assertAlmostEqual(dom.d, 0.2)

        # every hole touches the d-collar of the outer circle
        distances = np.linalg.norm(dom.hole_centers, axis=-1)
        np.testing.assert_allclose(distances, 1.6)
        np.testing.assert_allclose(dom.r0 - distances - dom.hole_radii, 0.2)

        self.assertTrue(validate_geometry(dom).passed)

    def test_ring_product_order(self):
        domains = Ring(n=[1, 2], d_ratio=[0.1, 0.2], r0=[1.0, 2.0]).domains()

        self.assertEqual(len(domains), 8)
        self.assertEqual([(dom.r0, dom.n) for dom in domains[:4]], [(1.0, 1), (1.0, 1), (1.0, 2), (1.0, 2)])
        self.assertAlmostEqual(domains[1].d, 0.2)
        self.assertAlmostEqual(domains[-1].d, 0.4)

    def test_ring_invalid(self):
        with self.assertRaises(ValueError):
            Ring(n=0)
        with self.assertRaises(ValueError):
            Ring(d_ratio=[0.1, 0.5])

    def test_explicit(self):
        [dom] = Explicit(holes=[[0.3, 0.1, 0.1], [-0.3, -0.2, 0.1]]).domains()

        self.assertEqual(dom.n, 2)
        self.assertAlmostEqual(dom.d, 0.1)
        self.assertTrue(validate_geometry(dom).passed)

        [dom] = Explicit(holes=[[1.0, 0.0, 0.5]], r0=2.0, z0=[1.0, 0.0], d=0.25).domains()

        self.assertEqual(dom.z0, (1.0, 0.0))
        self.assertEqual(dom.d, 0.25)

    def test_explicit_invalid(self):
        with self.assertRaises(ValueError):
            Explicit(holes=[[0.3, 0.1]])
        with self.assertRaises(ValueError):
            Explicit(holes=[], z0=[0.0])
        with self.assertRaises(ValueError):
            Explicit(holes=[[0.3, 0.1, -0.1]])


class TestGeometryParams(unittest.TestCase):

    def test_defaults(self):
        domains = GeometryParams().domains()

        self.assertEqual(len(domains), 18)
        self.assertTrue(all(validate_geometry(dom).passed for dom in domains))

    def test_config_order(self):
        params = GeometryParams.from_parse([
            {"family": "Concentric", "d_ratio": 0.2},
            {"family": "Disk", "r0": [1.0, 2.0]},
        ])

        self.assertEqual([dom.n for dom in params.domains()], [1, 0, 0])

    def test_invalid(self):
        with self.assertRaises(ConfigError):
            GeometryParams.from_parse({"family": "Disk"})
        with self.assertRaises(ConfigError):
            GeometryParams.from_parse([{"family": "Annulus"}])
        with self.assertRaises(ConfigError):
            GeometryParams.from_parse([{"family": "Disk", "radius": 1.0}])
        with self.assertRaises(ConfigError):
            GeometryParams.from_parse([{"family": "Ring", "n": 0}])


class TestSolverParams(unittest.TestCase):

    def test_defaults(self):
        params = SolverParams.from_parse({})

        self.assertEqual(params.M, 24)
        self.assertEqual(params.nodes_per_circle, 128)
        self.assertEqual(params.residual_tol, 1e-8)

    def test_invalid(self):
        with self.assertRaises(ConfigError):
            SolverParams.from_parse({"M": 0})
        with self.assertRaises(ConfigError):
            SolverParams.from_parse({"M": 40, "nodes_per_circle": 128})
        with self.assertRaises(ConfigError):
            SolverParams.from_parse({"residual_tol": -1.0})
        with self.assertRaises(ConfigError):
            SolverParams.from_parse({"tolerance": 1e-8})


if __name__ == '__main__':
    unittest.main()
