from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .datum_families import *

from src.exceptions import ConfigError
from src.potential.abstract_datum import NeumannFamily
from src.potential.boundary_data import PeriodicFunction, from_trig_poly, random_trig_poly, MIN_SAMPLES


@dataclass
class DataParams:

    # fixed trigonometric polynomials, each one a dict {"cos": [a_0, a_1, ...], "sin": [b_0, b_1, ...]}
    trig_polys: list[dict] = field(default_factory=lambda: [{"cos": [0, 0, 0, 1], "sin": [0, 0.2]}])

    # random trigonometric polynomials drawn with the experiment seed
    random_trig_polys: dict = field(default_factory=lambda: {"count": 5, "degree": 8})

    # data families for the holed domain experiments, each one a dict {"family": name, **family_params}
    neumann_families: list[dict] = field(default_factory=lambda: [{"family": "OuterMode", "mode": 2}])

    n_samples: int = 64

    @classmethod
    def from_parse(cls, data_section: dict):

        unknown = set(data_section) - set(cls.__annotations__)
        if unknown:
            raise ConfigError(f"Unknown data parameters: {sorted(unknown)}")

        obj = cls(**data_section)

        if obj.n_samples < MIN_SAMPLES or obj.n_samples % 2 != 0:
            raise ConfigError(f"n_samples should be even and >= {MIN_SAMPLES}, got {obj.n_samples}")

        for poly in obj.trig_polys:
            if not set(poly) <= {"cos", "sin"}:
                raise ConfigError(f"Trigonometric polynomials accept only 'cos' and 'sin' keys, got {sorted(poly)}")

        random_section = {"count": 0, "degree": 0} | obj.random_trig_polys
        if set(random_section) != {"count", "degree"} or min(random_section.values()) < 0:
            raise ConfigError(f"random_trig_polys should be {{'count': int >= 0, 'degree': int >= 0}}, "
                              f"got {obj.random_trig_polys}")
        obj.random_trig_polys = random_section

        max_degree = max([max(len(poly.get("cos", [])), len(poly.get("sin", []))) - 1 for poly in obj.trig_polys] +
                         [random_section["degree"]])
        if obj.n_samples < 2 * max_degree + 2:
            raise ConfigError(f"n_samples = {obj.n_samples} cannot resolve trigonometric polynomials of "
                              f"degree {max_degree}")

        # check that each neumann family exists and accepts its params
        try:
            for family_section in obj.neumann_families:
                NeumannFamily.from_config(family_section)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Invalid neumann family: {e.args[0]}") from None

        return obj

    def boundary_data(self, rng: np.random.Generator) -> dict[str, PeriodicFunction]:
        """
        Every datum of the section, keyed by a readable name and in config order: fixed polynomials first,
        then the random ones
        """
        all_data = {}

        for i, poly in enumerate(self.trig_polys):
            all_data[f"trig_{i}"] = from_trig_poly(poly.get("cos", [0]), poly.get("sin", []), self.n_samples)

        for i in range(self.random_trig_polys["count"]):
            all_data[f"random_{i}"] = random_trig_poly(rng, self.random_trig_polys["degree"], self.n_samples)

        return all_data

    def families(self) -> list[NeumannFamily]:
        return [NeumannFamily.from_config(family_section) for family_section in self.neumann_families]
