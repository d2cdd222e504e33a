"""
Poisson and conjugate kernels of the unit circle, valid inside (r < 1) and outside (r > 1) the disk.

    P_r(phi) = (1 - r^2) / (r^2 + 1 - 2 r cos(phi))
    K_r(phi) = r sin(phi) / (r^2 + 1 - 2 r cos(phi))

All functions are vectorized: the fields of a KernelPoint can be arrays of any broadcastable shape.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.exceptions import PotentialDomainError

# (r - 1)^2 + 2r(1 - cos(phi)) below this value is treated as a point of the unit circle hit by the kernel pole
SINGULARITY_TOL = 1e-14


def reduce_angle(phi):
    # maps any angle to (-pi, pi]
    return np.pi - np.mod(np.pi - np.asarray(phi, dtype=float), 2 * np.pi)


@dataclass(frozen=True)
class KernelPoint:
    r: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)

        if np.any(r < 0):
            raise PotentialDomainError("Kernel radius must be non negative!")

        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", reduce_angle(self.phi))

    @property
    def denominator(self) -> np.ndarray:
        # r^2 + 1 - 2r cos(phi), written so that it does not cancel near the pole
        return (self.r - 1) ** 2 + 2 * self.r * (1 - np.cos(self.phi))

    def guarded_denominator(self) -> np.ndarray:
        den = self.denominator

        if np.any(den < SINGULARITY_TOL):
            raise PotentialDomainError("Kernel evaluated on its pole (r = 1, phi = 0 mod 2pi)!")

        return den


def eval_poisson(p: KernelPoint) -> np.ndarray:
    return (1 - p.r ** 2) / p.guarded_denominator()


def eval_conjugate(p: KernelPoint) -> np.ndarray:
    return p.r * np.sin(p.phi) / p.guarded_denominator()


def eval_poisson_grad_xy(p: KernelPoint) -> np.ndarray:
    """
    Cartesian gradient of x -> P(x) = (1 - |x|^2) / |x - e|^2 at x = r e^{i phi}, where e = (1, 0) is the
    boundary point the kernel is centred at

    Returns:
        array of shape p.r.shape + (2,) (after broadcasting r against phi)

    """
    den = p.guarded_denominator()
    r, phi = np.broadcast_arrays(p.r, p.phi)

    x1 = r * np.cos(phi)
    x2 = r * np.sin(phi)
    numerator = 1 - r ** 2

    # d/dx [(1 - |x|^2) / D] with D = 1 + |x|^2 - 2 x1
    grad_x1 = (-2 * x1 * den - numerator * (2 * x1 - 2)) / den ** 2
    grad_x2 = (-2 * x2 * den - numerator * (2 * x2)) / den ** 2

    return np.stack((grad_x1, grad_x2), axis=-1)


def poisson_mass(r: float, n_nodes: int) -> float:
    """
    (1/2pi) times the uniform trapezoid integral of P_r over one period: 1 inside the disk, -1 outside
    """
    tau = -np.pi + 2 * np.pi * np.arange(n_nodes) / n_nodes
    values = eval_poisson(KernelPoint(r, tau))

    return float(np.mean(values))


def conjugate_mass(r: float, n_nodes: int) -> float:
    # K_r is odd, its integral over a period vanishes
    tau = -np.pi + 2 * np.pi * np.arange(n_nodes) / n_nodes
    values = eval_conjugate(KernelPoint(r, tau))

    return float(np.sum(values) * 2 * np.pi / n_nodes)
