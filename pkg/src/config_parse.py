import json
import os
from dataclasses import dataclass

import yaml

from src import GeneralParams
from src.domain import GeometryParams, SolverParams
from src.evaluate import MetricsParams
from src.exceptions import ConfigError
from src.harness import HarnessParams
from src.potential import DataParams


@dataclass
class LabConfig:
    general: GeneralParams
    data: DataParams
    geometry: GeometryParams
    solver: SolverParams
    metrics: MetricsParams
    harness: HarnessParams


def load_document(config_path: str) -> dict:
    """
    Reads the configuration document: json for .json files, yaml otherwise. Parse errors carry the line of the
    document where they happened
    """
    if not os.path.isfile(config_path):
        raise ConfigError(f"Config file {config_path} does not exist!")

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f) if config_path.endswith(".json") else yaml.safe_load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid json in {config_path}: {e.msg}", line=e.lineno) from None
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            problem = getattr(e, "problem", None) or str(e)
            raise ConfigError(f"Invalid yaml in {config_path}: {problem}",
                              line=mark.line + 1 if mark is not None else None) from None

    if document is None:
        document = {}

    if not isinstance(document, dict):
        raise ConfigError(f"The config document should be a mapping of sections, got {type(document).__name__}")

    return document


def parse_config(config_path: str, seed: int = None, tolerance: float = None) -> LabConfig:

    config_args = load_document(config_path)

    geometry_section = config_args.pop("geometry_families", None)
    data_section = config_args.pop("data", {})
    solver_section = config_args.pop("solver", {})
    metrics_section = config_args.pop("metrics", {})
    relation_section = config_args.pop("relation", {})
    identities_section = config_args.pop("identities", {})
    solve_section = config_args.pop("solve", {})

    # after popping every section, only general params remain
    general_section = config_args

    # command line flags win over the document
    if seed is not None:
        general_section["seed"] = seed
    if tolerance is not None:
        general_section["tolerance"] = tolerance

    try:
        general_params = GeneralParams.from_parse(general_section)
        data_params = DataParams.from_parse(data_section)
        geometry_params = GeometryParams.from_parse(geometry_section) if geometry_section is not None \
            else GeometryParams()
        solver_params = SolverParams.from_parse(solver_section)
        metrics_params = MetricsParams.from_parse(metrics_section)
        harness_params = HarnessParams.from_parse(relation_section, identities_section, solve_section)
    except TypeError as e:
        # wrongly typed sections or parameters
        raise ConfigError(str(e)) from None

    # an explicit tolerance replaces every identity threshold too
    if tolerance is not None:
        harness_params.identities.tolerance = tolerance

    return LabConfig(general_params, data_params, geometry_params, solver_params, metrics_params, harness_params)
