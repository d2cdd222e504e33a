from __future__ import annotations

import inspect
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import pandas as pd
from requests.structures import CaseInsensitiveDict

from src import CHECKS_DIR

if TYPE_CHECKING:
    from src.config_parse import LabConfig


@dataclass
class ExperimentReport:
    command: str
    table: pd.DataFrame
    breaches: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return len(self.breaches) == 0


class LabExperiment(ABC):
    """
    One subcommand of the harness: it reads what it needs from the parsed configuration, runs its checks and
    writes its table as csv
    """

    # command - class mapping, used to dispatch the subcommands of the cli
    str_alias_cls: dict[str, type[LabExperiment]] = CaseInsensitiveDict()

    command: str
    reports_dir: str = CHECKS_DIR

    # automatically called on subclass definition, will populate the str_alias_cls dict
    def __init_subclass__(cls, **kwargs):

        if not inspect.isabstract(cls):
            cls.str_alias_cls[cls.command] = cls

        super().__init_subclass__(**kwargs)

    def __init__(self, config: LabConfig):
        self.config = config

    @abstractmethod
    def run(self, output_path: str) -> ExperimentReport:
        raise NotImplementedError

    def default_output_path(self) -> str:
        # e.g. reports/checks/holderlab_exp/identities.csv
        return os.path.join(self.reports_dir, self.config.general.exp_name, f"{self.command}.csv")

    @staticmethod
    def write_table(table: pd.DataFrame, output_path: str):
        output_dir = os.path.dirname(output_path)
        if output_dir:
            os.makedirs(output_dir, exist_ok=True)

        table.to_csv(output_path, index=False, lineterminator="\n", float_format="%.12g")
        print(f"# CSV Results saved into {output_path}!")

    @classmethod
    def from_string(cls, command: str, config: LabConfig) -> LabExperiment:
        experiment_cls = cls.experiment_exists(command, return_bool=False)
        return experiment_cls(config)

    @classmethod
    def experiment_exists(cls, command: str, return_bool: bool = True) -> bool | type[LabExperiment]:
        try:
            experiment_cls = cls.str_alias_cls[command]
        except KeyError:
            raise KeyError(f"Experiment {command} does not exist!") from None

        return experiment_cls if not return_bool else True

    @classmethod
    def all_experiments_available(cls, return_str: bool = False) -> list[type[LabExperiment] | str]:
        return list(cls.str_alias_cls.keys()) if return_str else list(cls.str_alias_cls.values())

    def __str__(self):
        return self.command
