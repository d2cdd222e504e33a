from __future__ import annotations

from dataclasses import dataclass, field

from .experiments import *

from src.domain.abstract_family import GeometryFamily
from src.exceptions import ConfigError
from src.potential.abstract_datum import NeumannFamily


def _check_keys(cls, section: dict, section_name: str):
    unknown = set(section) - set(cls.__annotations__)
    if unknown:
        raise ConfigError(f"Unknown {section_name} parameters: {sorted(unknown)}")


@dataclass
class RelationParams:
    n_points: int = 100
    r_min: float = 0.1
    r_max: float = 0.9

    # step of the central finite differences the relation formulas are checked against
    fd_step: float = 1e-5

    @classmethod
    def from_parse(cls, relation_section: dict):
        _check_keys(cls, relation_section, "relation")
        obj = cls(**relation_section)

        if obj.n_points < 1:
            raise ConfigError(f"n_points should be positive, got {obj.n_points}")
        if not 0 < obj.r_min <= obj.r_max < 1:
            raise ConfigError(f"Relation points need 0 < r_min <= r_max < 1, got [{obj.r_min}, {obj.r_max}]")
        if not 0 < obj.fd_step < obj.r_min:
            raise ConfigError(f"fd_step should lie in (0, r_min), got {obj.fd_step}")

        return obj


@dataclass
class IdentitiesParams:
    radii: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0])
    kernel_radii: list[float] = field(default_factory=lambda: [0.3, 0.7, 1.3, 1.8])
    kernel_nodes: int = 512

    n_point_pairs: int = 1000
    n_boundary_points: int = 20
    boundary_nodes: int = 256

    # step of the discrete Laplacian, relative to R
    laplacian_step: float = 1e-2

    # width of the annulus of the representation check, relative to R
    representation_width: float = 0.3

    # offsets from the circle (relative to R) at which the single layer trace is extrapolated
    single_layer_offsets: list[float] = field(default_factory=lambda: [0.004, 0.002])

    trace_annuli: list[list[float]] = field(default_factory=lambda: [[0.5, 1.0], [1.0, 2.0], [1.0, 1.1],
                                                                     [0.1, 3.0], [2.0, 2.5]])
    trace_fields: int = 50

    # radii of the interior estimate balls, relative to R, and number of ball centres
    interior_radii: list[float] = field(default_factory=lambda: [0.1, 0.2, 0.4])
    n_interior_balls: int = 5

    # per check thresholds, all replaced by `tolerance` when it is set
    thresholds: dict[str, float] = field(default_factory=lambda: {
        "poisson_mass": 1e-10,
        "conjugate_mass": 1e-10,
        "log_reflection": 1e-12,
        "boundary_mismatch": 1e-8,
        "source_constant": 1e-3,
        "representation": 1e-4,
        "single_layer_trace": 1e-3,
    })
    tolerance: float = None

    @classmethod
    def from_parse(cls, identities_section: dict):
        _check_keys(cls, identities_section, "identities")

        identities_section = dict(identities_section)
        thresholds = identities_section.pop("thresholds", {})

        obj = cls(**identities_section)

        unknown = set(thresholds) - set(obj.thresholds)
        if unknown:
            raise ConfigError(f"Unknown identity thresholds: {sorted(unknown)}")
        obj.thresholds = obj.thresholds | thresholds

        if any(radius <= 0 for radius in obj.radii):
            raise ConfigError(f"Every radius should be positive, got {obj.radii}")
        if any(radius <= 0 or radius == 1 for radius in obj.kernel_radii):
            raise ConfigError(f"Kernel radii should be positive and different from 1, got {obj.kernel_radii}")
        if not 0 < obj.representation_width < 1:
            raise ConfigError(f"representation_width should lie in (0, 1), got {obj.representation_width}")

        if not all(0 < d <= 4 for d in obj.interior_radii):
            raise ConfigError(f"interior_radii should lie in (0, 4], got {obj.interior_radii}")

        for annulus in obj.trace_annuli:
            if len(annulus) != 2 or not 0 < annulus[0] < annulus[1]:
                raise ConfigError(f"Trace annuli should be [rho1, rho2] with 0 < rho1 < rho2, got {annulus}")

        if len(obj.single_layer_offsets) != 2 or not 0 < obj.single_layer_offsets[1] < obj.single_layer_offsets[0]:
            raise ConfigError(f"single_layer_offsets should be two decreasing positive offsets, got "
                              f"{obj.single_layer_offsets}")

        return obj

    def threshold(self, check_name: str) -> float:
        return self.tolerance if self.tolerance is not None else self.thresholds[check_name]


@dataclass
class SolveParams:
    # a single geometry family section, the first domain it produces is solved
    geometry: dict = field(default_factory=lambda: {"family": "Explicit", "r0": 1.0,
                                                      "holes": [[0.3, 0.1, 0.1], [-0.3, -0.2, 0.1]]})
    datum: dict = field(default_factory=lambda: {"family": "HoleFlux", "flux": 1.0, "mode": 2})

    # explicit probe points, random points of E are drawn when not given
    probes: list[list[float]] = None
    n_probes: int = 20

    @classmethod
    def from_parse(cls, solve_section: dict):
        _check_keys(cls, solve_section, "solve")
        obj = cls(**solve_section)

        if obj.probes is not None and any(len(probe) != 2 for probe in obj.probes):
            raise ConfigError("Probe points should be [x1, x2] pairs")
        if obj.n_probes < 1:
            raise ConfigError(f"n_probes should be positive, got {obj.n_probes}")

        try:
            GeometryFamily.from_config(obj.geometry)
            NeumannFamily.from_config(obj.datum)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Invalid solve section: {e.args[0]}") from None

        return obj


@dataclass
class HarnessParams:
    relation: RelationParams = field(default_factory=RelationParams)
    identities: IdentitiesParams = field(default_factory=IdentitiesParams)
    solve: SolveParams = field(default_factory=SolveParams)

    @classmethod
    def from_parse(cls, relation_section: dict = None, identities_section: dict = None,
                   solve_section: dict = None):

        return cls(relation=RelationParams.from_parse(relation_section or {}),
                   identities=IdentitiesParams.from_parse(identities_section or {}),
                   solve=SolveParams.from_parse(solve_section or {}))
