import time

from loguru import logger

from src.config_parse import LabConfig
from src.exceptions import (ConfigError, SolverError, ToleranceBreach, EXIT_OK, EXIT_CONFIG_ERROR,
                            EXIT_TOLERANCE_BREACH, EXIT_SOLVER_FAILURE)
from src.harness.abstract_experiment import LabExperiment
from src.utils import seed_everything, format_time


def harness_main(command: str, config: LabConfig, output_path: str = None) -> int:
    """
    Runs the experiment of the given subcommand and maps its outcome to the exit code of the cli
    """
    try:
        experiment = LabExperiment.from_string(command, config)
    except KeyError as e:
        logger.error(e.args[0])
        return EXIT_CONFIG_ERROR

    output_path = output_path if output_path is not None else experiment.default_output_path()

    # at start of each experiment, we re-initialize the state
    seed_everything(config.general.seed)

    start = time.perf_counter()

    try:
        report = experiment.run(output_path)
        logger.info(f"'{command}' finished in {format_time(time.perf_counter() - start)}")

        if not report.passed:
            raise ToleranceBreach(f"{len(report.breaches)} check(s) of '{command}' over tolerance")

    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except ToleranceBreach as e:
        logger.error(str(e))
        return EXIT_TOLERANCE_BREACH
    except SolverError as e:
        logger.error(f"Solver failure: {e}")
        return EXIT_SOLVER_FAILURE

    return EXIT_OK
