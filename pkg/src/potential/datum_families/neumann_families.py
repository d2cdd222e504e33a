from __future__ import annotations

import numpy as np

from src.potential.abstract_datum import NeumannFamily
from src.potential.boundary_data import NeumannData, PeriodicFunction, from_trig_poly


class OuterMode(NeumannFamily):
    """
    amplitude * cos(mode * tau) on the outer circle, homogeneous data on every hole
    """

    def __init__(self, mode: int = 1, amplitude: float = 1.0):
        if mode < 1:
            raise ValueError(f"Outer mode must be >= 1 to keep the datum compatible, got {mode}")

        self.mode = mode
        self.amplitude = amplitude

    def build(self, domain, n_samples: int) -> NeumannData:
        cos_coeffs = np.zeros(self.mode + 1)
        cos_coeffs[self.mode] = self.amplitude

        outer = from_trig_poly(cos_coeffs, [], n_samples)
        zero = PeriodicFunction(np.zeros(n_samples))

        return NeumannData(outer, [zero] * domain.n)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "amplitude": self.amplitude}


class HoleFlux(NeumannFamily):
    """
    Constant data of alternating flux +-flux on the holes, balanced by the constant part of the outer datum,
    plus amplitude * cos(mode * tau) on the outer circle
    """

    def __init__(self, flux: float = 1.0, mode: int = 1, amplitude: float = 1.0):
        if mode < 1:
            raise ValueError(f"Outer mode must be >= 1, got {mode}")

        self.flux = flux
        self.mode = mode
        self.amplitude = amplitude

    def build(self, domain, n_samples: int) -> NeumannData:
        signs = np.array([(-1) ** k for k in range(domain.n)], dtype=float)
        hole_fluxes = signs * self.flux

        holes = [PeriodicFunction(np.full(n_samples, flux / (2 * np.pi * radius)))
                 for flux, radius in zip(hole_fluxes, domain.hole_radii)]

        cos_coeffs = np.zeros(self.mode + 1)
        cos_coeffs[0] = np.sum(hole_fluxes) / (2 * np.pi * domain.r0)
        cos_coeffs[self.mode] += self.amplitude

        outer = from_trig_poly(cos_coeffs, [], n_samples)

        return NeumannData(outer, holes)

    def to_dict(self) -> dict:
        return {"flux": self.flux, "mode": self.mode, "amplitude": self.amplitude}
