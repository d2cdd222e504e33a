import os
import sys
from dataclasses import dataclass
from pathlib import Path

from loguru import logger

from src.exceptions import ConfigError

# format logging for a more user-friendly approach
logger.remove(0)
logger.add(sys.stderr, format="<level>{level}</level>: <level>{message}</level>", colorize=True)

_THIS_DIR = os.path.dirname(os.path.abspath(__file__))
ROOT_PATH = str(Path(os.path.join(_THIS_DIR, "..")).resolve())

REPORTS_DIR = os.path.join(ROOT_PATH, "reports")
SWEEPS_DIR = os.path.join(REPORTS_DIR, "sweeps")
CHECKS_DIR = os.path.join(REPORTS_DIR, "checks")

# optional override of GeneralParams.threads
THREADS_ENV_VAR = "HOLDERLAB_THREADS"


@dataclass
class GeneralParams:
    exp_name: str = "holderlab_exp"
    seed: int = 42
    alpha: float = 0.5
    tolerance: float = 1e-6
    threads: int = 1

    @classmethod
    def from_parse(cls, general_section: dict):

        unknown = set(general_section) - set(cls.__annotations__)
        if unknown:
            raise ConfigError(f"Unknown general parameters: {sorted(unknown)}")

        obj = cls(**general_section)

        if not 0 < obj.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {obj.alpha}")
        if obj.tolerance < 0:
            raise ConfigError(f"tolerance must be non negative, got {obj.tolerance}")

        env_threads = os.environ.get(THREADS_ENV_VAR)
        if env_threads is not None:
            if not env_threads.isdigit() or int(env_threads) < 1:
                raise ConfigError(f"{THREADS_ENV_VAR} should be a positive integer, got '{env_threads}'")
            obj.threads = int(env_threads)

        return obj
