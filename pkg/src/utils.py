import random
from typing import List, Dict

import numpy as np
import yaml
from cytoolz import merge_with
from yaspin import yaspin
from yaspin.spinners import Spinners


def seed_everything(seed: int):
    """
    Function which fixes the random state of each library used by this repository with the seed
    specified in the config (or overridden via `--seed`)

    Returns:
        The integer random state set

    """

    np.random.seed(seed)
    random.seed(seed)

    return seed


def make_rng(seed: int) -> np.random.Generator:
    # every randomized check draws from its own generator, so that the order in which checks
    # are run does not change their samples
    return np.random.default_rng(seed)


def as_points(x) -> np.ndarray:
    # accepts a single (x1, x2) pair, a complex number or an array of them and always returns (..., 2) floats
    x = np.asarray(x)

    if np.iscomplexobj(x):
        return np.stack((x.real, x.imag), axis=-1).astype(float)

    x = x.astype(float)
    if x.shape[-1] != 2:
        raise ValueError(f"Points should have a trailing dimension of size 2, got shape {x.shape}")

    return x


def to_complex(points: np.ndarray) -> np.ndarray:
    points = as_points(points)
    return points[..., 0] + 1j * points[..., 1]


def rotate_quarter_turn(vectors: np.ndarray) -> np.ndarray:
    # multiplication by e^{i pi/2}: (a, b) -> (-b, a)
    vectors = np.asarray(vectors)
    return np.stack((-vectors[..., 1], vectors[..., 0]), axis=-1)


def list_dict2dict_list(list_of_dicts: List[dict]) -> Dict[str, list]:
    return merge_with(list, *list_of_dicts)


class IndentedDumper(yaml.Dumper):

    # this dumper indents also sequences other than mappings
    def increase_indent(self, flow=False, *args, **kwargs):
        return super().increase_indent(flow=flow, indentless=False)


class PrintWithSpin:

    def __init__(self, text: str):
        self.text = f"# {text}:"
        self.yaspin_obj = None

    def __enter__(self):

        self.yaspin_obj = yaspin(Spinners.sand, text=self.text, side="right").__enter__()

    def __exit__(self, exc_type, exc_value, traceback):

        if exc_type is None:
            self.yaspin_obj.ok("✔ Done!")
        else:
            self.yaspin_obj.fail("✘ Failed!")


def format_time(seconds: float) -> str:
    minutes, seconds = divmod(seconds, 60)
    hours, minutes = divmod(minutes, 60)

    if hours > 0:
        return f"{int(hours)}h {int(minutes)}m {seconds:.1f}s"
    elif minutes > 0:
        return f"{int(minutes)}m {seconds:.1f}s"

    return f"{seconds:.1f}s"
