from __future__ import annotations

from dataclasses import dataclass, field

from .families import *

from src.domain.abstract_family import GeometryFamily
from src.domain.holed_domain import HoledDomain
from src.exceptions import ConfigError


@dataclass
class GeometryParams:

    # each entry is {"family": name, **family_params}, list valued params are expanded as a cartesian product
    families: list[dict] = field(default_factory=lambda: [
        {"family": "Ring", "n": [1, 2, 4], "d_ratio": [0.05, 0.1, 0.2], "r0": [1.0, 2.0]}
    ])

    @classmethod
    def from_parse(cls, geometry_section: list[dict]):

        if not isinstance(geometry_section, list):
            raise ConfigError("geometry_families should be a list of {'family': name, ...} entries")

        obj = cls(families=geometry_section)

        # check that each family exists and accepts its params
        try:
            for family_section in obj.families:
                GeometryFamily.from_config(family_section)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Invalid geometry family: {e.args[0]}") from None

        return obj

    def domains(self) -> list[HoledDomain]:
        # config order, then the family's own product order
        return [domain
                for family_section in self.families
                for domain in GeometryFamily.from_config(family_section).domains()]


@dataclass
class SolverParams:
    M: int = 24
    nodes_per_circle: int = 128
    residual_tol: float = 1e-8
    max_condition: float = 1e13

    @classmethod
    def from_parse(cls, solver_section: dict):

        unknown = set(solver_section) - set(cls.__annotations__)
        if unknown:
            raise ConfigError(f"Unknown solver parameters: {sorted(unknown)}")

        obj = cls(**solver_section)

        if obj.M < 1:
            raise ConfigError(f"Truncation order M must be >= 1, got {obj.M}")
        if obj.nodes_per_circle < 4 * obj.M + 4:
            raise ConfigError(f"nodes_per_circle must be >= 4M + 4 = {4 * obj.M + 4}, got {obj.nodes_per_circle}")
        if obj.residual_tol < 0 or obj.max_condition <= 0:
            raise ConfigError("residual_tol must be non negative and max_condition positive")

        return obj
