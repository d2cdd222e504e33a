from __future__ import annotations

import itertools

import numpy as np

from src.domain.abstract_family import GeometryFamily, as_list
from src.domain.holed_domain import HoledDomain, Hole


class Disk(GeometryFamily):
    """
    Domains without holes, d = r0 / 2
    """

    def __init__(self, r0: float | list[float] = 1.0):
        self.r0 = as_list(r0)

    def domains(self) -> list[HoledDomain]:
        return [HoledDomain((0.0, 0.0), r0, [], d=r0 / 2) for r0 in self.r0]


class Concentric(GeometryFamily):
    """
    One hole of radius d = d_ratio * r0 centred at the centre of the outer disk
    """

    def __init__(self, d_ratio: float | list[float] = 0.1, r0: float | list[float] = 1.0):
        self.d_ratio = as_list(d_ratio)
        self.r0 = as_list(r0)

        if any(not 0 < ratio <= 0.5 for ratio in self.d_ratio):
            raise ValueError(f"Concentric family needs 0 < d_ratio <= 0.5, got {self.d_ratio}")

    def domains(self) -> list[HoledDomain]:
        all_domains = []

        for r0, ratio in itertools.product(self.r0, self.d_ratio):
            d = ratio * r0
            all_domains.append(HoledDomain((0.0, 0.0), r0, [Hole((0.0, 0.0), d)], d=d))

        return all_domains


class Ring(GeometryFamily):
    """
    n holes of radius d = d_ratio * r0, equally spaced on the circle of radius r0 - 2d, so that every hole is
    exactly d away from the outer circle
    """

    def __init__(self,
                 n: int | list[int] = 1,
                 d_ratio: float | list[float] = 0.1,
                 r0: float | list[float] = 1.0):
        self.n = as_list(n)
        self.d_ratio = as_list(d_ratio)
        self.r0 = as_list(r0)

        if any(n_holes < 1 for n_holes in self.n):
            raise ValueError(f"Ring family needs at least one hole, got n = {self.n}")
        if any(not 0 < ratio < 0.5 for ratio in self.d_ratio):
            raise ValueError(f"Ring family needs 0 < d_ratio < 0.5, got {self.d_ratio}")

    def domains(self) -> list[HoledDomain]:
        all_domains = []

        for r0, n_holes, ratio in itertools.product(self.r0, self.n, self.d_ratio):
            d = ratio * r0
            ring_radius = r0 - 2 * d
            angles = 2 * np.pi * np.arange(n_holes) / n_holes

            holes = [Hole((ring_radius * np.cos(angle), ring_radius * np.sin(angle)), d) for angle in angles]
            all_domains.append(HoledDomain((0.0, 0.0), r0, holes, d=d))

        return all_domains


class Explicit(GeometryFamily):
    """
    A single domain with holes given as [x1, x2, radius] triples. d is the largest admissible one unless given
    """

    def __init__(self, holes: list[list[float]], r0: float = 1.0, z0: list[float] = (0.0, 0.0), d: float = None):
        if any(len(hole) != 3 for hole in holes):
            raise ValueError(f"Explicit holes should be [x1, x2, radius] triples, got {holes}")
        if len(z0) != 2:
            raise ValueError(f"z0 should be a [x1, x2] pair, got {z0}")

        self.holes = [Hole((x1, x2), radius) for x1, x2, radius in holes]
        self.r0 = r0
        self.z0 = tuple(z0)
        self.d = d

    def domains(self) -> list[HoledDomain]:
        return [HoledDomain(self.z0, self.r0, list(self.holes), d=self.d)]
