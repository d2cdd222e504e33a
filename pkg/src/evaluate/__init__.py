from dataclasses import dataclass, field

from .metrics import *

from src.evaluate.abstract_metric import RegularityEstimate
from src.exceptions import ConfigError


@dataclass
class MetricsParams:

    # polar grids on the collars of width d/3 around every circle
    collar_radial: int = 64
    collar_angular: int = 256

    # steps of the cartesian grids, as fractions of d
    interior_step: float = 1 / 8
    poincare_step: float = 1 / 4

    # samples per circle when measuring the datum norms
    datum_samples: int = 512

    # above this many samples Hölder quotients are computed on a stratified subset of pairs
    max_pairs: int = 2048

    # estimates measured by the sweep, all of them if not specified
    estimates: list[str] = field(default_factory=lambda: RegularityEstimate.all_estimates_available(return_str=True))
    create_latex_table: bool = True

    @classmethod
    def from_parse(cls, metrics_section: dict):

        unknown = set(metrics_section) - set(cls.__annotations__)
        if unknown:
            raise ConfigError(f"Unknown metrics parameters: {sorted(unknown)}")

        obj = cls(**metrics_section)

        # check that each estimate exists
        try:
            for estimate_name in obj.estimates:
                RegularityEstimate.estimate_exists(estimate_name)
        except KeyError as e:
            raise ConfigError(e.args[0]) from None

        if min(obj.collar_radial, obj.collar_angular, obj.datum_samples, obj.max_pairs) < 2:
            raise ConfigError("Grid sizes and max_pairs should be at least 2")
        if not 0 < obj.interior_step <= 1 or not 0 < obj.poincare_step <= 1 / 4:
            raise ConfigError(f"interior_step should lie in (0, 1] and poincare_step in (0, 1/4], got "
                              f"{obj.interior_step} and {obj.poincare_step}")

        return obj

    def instantiate_estimates(self) -> list[RegularityEstimate]:
        return [RegularityEstimate.from_string(estimate_name) for estimate_name in self.estimates]
