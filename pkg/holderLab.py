import argparse
import dataclasses
import os
import sys

import yaml
from loguru import logger
from pygit2 import Repository, GitError

from src.config_parse import parse_config, LabConfig
from src.exceptions import ConfigError, EXIT_CONFIG_ERROR
from src.harness.abstract_experiment import LabExperiment
from src.harness.main import harness_main
from src.utils import IndentedDumper


def pretty_print_configuration(command: str, config: LabConfig):
    print(f" {command} configuration ".center(80, "*"))

    # apart from the params read from the config file, print env variables needed for reproducibility and
    # also the current active branch in which the experiment is being performed (if in a git directory)
    try:
        git_branch = Repository('.').head.shorthand
    except GitError:
        git_branch = None

    env_var_dict = {"PYTHONHASHSEED": os.environ.get("PYTHONHASHSEED"), "git_branch": git_branch}

    print("\n" + "-" * 80)
    print("Environment/General parameters:")
    print("-" * 80)
    print(yaml.dump({**env_var_dict, **dataclasses.asdict(config.general)},
                    default_flow_style=False, Dumper=IndentedDumper))

    # only the sections the subcommand reads
    sections = {
        "verify-relation": {"Data": config.data, "Relation": config.harness.relation},
        "identities": {"Identities": config.harness.identities},
        "sweep": {"Data": config.data, "Geometry": config.geometry, "Solver": config.solver,
                  "Metrics": config.metrics},
        "solve": {"Data": config.data, "Solve": config.harness.solve, "Solver": config.solver},
    }

    for section_name, section_params in sections[command].items():
        print("-" * 80)
        print(f"{section_name} parameters:")
        print("-" * 80)
        print(yaml.dump(dataclasses.asdict(section_params), default_flow_style=False, Dumper=IndentedDumper))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Verification harness for the gradient and Hessian Hölder '
                                                 'estimates of Neumann problems on holed disks')

    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in LabExperiment.all_experiments_available(return_str=True):
        subparser = subparsers.add_parser(command)

        subparser.add_argument('-c', '--config', default="params.json",
                               help='The path to the .json or .yml file in which all the experiment '
                                    'parameters are specified')
        subparser.add_argument('-o', '--out', default=None,
                               help='Output csv path, defaults to reports/<checks|sweeps>/<exp_name>/<command>.csv')
        subparser.add_argument('--seed', type=int, default=None,
                               help='Overrides the seed of the config file')
        subparser.add_argument('--tol', type=float, default=None,
                               help='Overrides the tolerance of the config file and every identity threshold')

    return parser


def main(argv: list[str] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = parse_config(args.config, seed=args.seed, tolerance=args.tol)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    pretty_print_configuration(args.command, config)

    print(f" {args.command.upper()} ".center(80, "*"))

    return harness_main(args.command, config, args.out)


if __name__ == '__main__':
    sys.exit(main())
