from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np


class HarmonicField(ABC):
    """
    A harmonic function that can be evaluated, with its exact first and second derivatives, at points of the
    region it is defined on. Points are cartesian arrays of shape (..., 2)
    """

    @abstractmethod
    def value(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def gradient(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def hessian(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def contains(self, points: np.ndarray, margin: float = 0.0) -> np.ndarray:
        # boolean mask of the points lying in the region with at least `margin` distance from its boundary
        raise NotImplementedError

    def evaluate(self, points: np.ndarray, order: int = 0) -> np.ndarray:

        match order:
            case 0:
                return self.value(points)
            case 1:
                return self.gradient(points)
            case 2:
                return self.hessian(points)
            case _:
                raise ValueError(f"Derivative order must be 0, 1 or 2, got {order}")


def hessian_from_complex(second_derivative: np.ndarray) -> np.ndarray:
    """
    Hessian of Re(f) for a holomorphic f, given S = f''(z) = u_xx - i u_xy

    Returns:
        array of shape S.shape + (2, 2)

    """
    a = second_derivative.real
    b = -second_derivative.imag

    return np.stack((np.stack((a, b), axis=-1),
                     np.stack((b, -a), axis=-1)), axis=-2)


def gradient_from_complex(first_derivative: np.ndarray) -> np.ndarray:
    # f'(z) = u_x - i u_y
    return np.stack((first_derivative.real, -first_derivative.imag), axis=-1)
