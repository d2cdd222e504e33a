"""
2pi-periodic boundary data stored as uniform samples plus Fourier coefficients.

Samples live at the nodes tau_j = -pi + 2 pi j / N and the coefficients c_m are those of
g(tau) = sum_m c_m e^{i m tau}, stored in numpy FFT order (modes 0, 1, ..., -N/2, ..., -1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from src.exceptions import CompatibilityError, QuadratureResolutionError

MIN_SAMPLES = 16

# relative size under which a Fourier coefficient counts as absent
ZERO_MODE_TOL = 1e-14


def quadrature_nodes(n_nodes: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(n_nodes) / n_nodes


class PeriodicFunction:

    def __init__(self, samples: Sequence[float], coeffs: np.ndarray = None):

        samples = np.array(samples, dtype=float)

        if samples.ndim != 1:
            raise ValueError("Samples of a periodic function should be a 1-d array!")
        if len(samples) < MIN_SAMPLES or len(samples) % 2 != 0:
            raise ValueError(f"Sample count should be even and >= {MIN_SAMPLES}, got {len(samples)}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("Samples of a periodic function should be finite!")

        n = len(samples)
        modes = np.fft.fftfreq(n, 1 / n).round().astype(int)

        if coeffs is None:
            # samples start at -pi, hence the (-1)^m phase with respect to the plain DFT
            coeffs = np.fft.fft(samples) / n * (-1.0) ** modes
        else:
            coeffs = np.array(coeffs, dtype=complex)
            reproduced = np.fft.ifft(coeffs * n * (-1.0) ** modes).real

            scale = max(np.max(np.abs(samples)), 1.0)
            if coeffs.shape != samples.shape or np.max(np.abs(reproduced - samples)) > 1e-12 * scale:
                raise ValueError("Samples and Fourier coefficients are not consistent!")

        samples.setflags(write=False)
        coeffs.setflags(write=False)
        modes.setflags(write=False)

        self._samples = samples
        self._coeffs = coeffs
        self._modes = modes

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def modes(self) -> np.ndarray:
        return self._modes

    @property
    def N(self) -> int:
        return len(self._samples)

    @property
    def nodes(self) -> np.ndarray:
        return quadrature_nodes(self.N)

    @property
    def mean(self) -> float:
        return float(self._coeffs[0].real)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self._samples)))

    def mode(self, m: int) -> complex:
        if abs(m) > self.N // 2:
            return 0j

        return complex(self._coeffs[m % self.N])

    def bandwidth(self) -> int:
        magnitudes = np.abs(self._coeffs)
        significant = magnitudes > ZERO_MODE_TOL * max(magnitudes.max(), 1e-300)

        return int(np.max(np.abs(self._modes[significant]), initial=0))

    def __call__(self, tau) -> np.ndarray:
        """
        Evaluates the trigonometric interpolant of the samples at arbitrary angles
        """
        tau = np.asarray(tau, dtype=float)

        half = self.N // 2
        m = np.arange(half + 1)

        # real data: mode -m is the conjugate of mode m, so only m >= 0 are summed
        weights = np.full(half + 1, 2.0)
        weights[0] = 1.0
        weights[half] = 1.0

        weighted = weights * self._coeffs[m]
        phases = np.exp(1j * np.multiply.outer(tau, m))

        return (phases @ weighted).real

    def resample(self, n_nodes: int) -> PeriodicFunction:
        if n_nodes == self.N:
            return self

        return _resampled(self, n_nodes)

    def with_mean_removed(self) -> PeriodicFunction:
        return self - self.mean

    def __add__(self, other):
        if isinstance(other, PeriodicFunction):
            if other.N != self.N:
                n_nodes = max(self.N, other.N)
                return self.resample(n_nodes) + other.resample(n_nodes)

            return PeriodicFunction(self._samples + other.samples, self._coeffs + other.coeffs)

        # constant shift only touches mode 0
        shifted_coeffs = self._coeffs.copy()
        shifted_coeffs[0] += other
        return PeriodicFunction(self._samples + other, shifted_coeffs)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self * -1.0

    def __mul__(self, factor: float):
        return PeriodicFunction(self._samples * factor, self._coeffs * factor)

    def __rmul__(self, factor: float):
        return self * factor

    def __eq__(self, other):
        if isinstance(other, PeriodicFunction) and np.array_equal(self._samples, other.samples):
            return True
        return False

    def __hash__(self):
        return hash(self._samples.tobytes())

    def __repr__(self):
        return f"PeriodicFunction(N={self.N}, bandwidth={self.bandwidth()})"


@lru_cache(maxsize=128)
def _resampled(g: PeriodicFunction, n_nodes: int) -> PeriodicFunction:

    if n_nodes < g.N and 2 * g.bandwidth() + 2 > n_nodes:
        raise QuadratureResolutionError(f"Cannot resample {g} on {n_nodes} nodes without aliasing!")

    return PeriodicFunction(g(quadrature_nodes(n_nodes)))


def from_trig_poly(cos_coeffs: Sequence[float], sin_coeffs: Sequence[float], N: int) -> PeriodicFunction:
    """
    Samples sum_k a_k cos(k tau) + sum_k b_k sin(k tau) on N uniform nodes.

    `cos_coeffs[k]` and `sin_coeffs[k]` multiply the mode k, so `sin_coeffs[0]` is ignored (sin(0) = 0)

    """
    cos_coeffs = np.asarray(cos_coeffs, dtype=float)
    sin_coeffs = np.asarray(sin_coeffs, dtype=float)

    n_modes = max(len(cos_coeffs) - 1, len(sin_coeffs) - 1, 0)

    if N % 2 != 0 or N < MIN_SAMPLES:
        raise QuadratureResolutionError(f"Sample count should be even and >= {MIN_SAMPLES}, got {N}")
    if N < 2 * n_modes + 2:
        raise QuadratureResolutionError(f"{N} samples alias a trigonometric polynomial of degree {n_modes}!")

    tau = quadrature_nodes(N)
    samples = np.zeros(N)
    coeffs = np.zeros(N, dtype=complex)

    for k, a_k in enumerate(cos_coeffs):
        samples += a_k * np.cos(k * tau)
        coeffs[k] += a_k if k == 0 else a_k / 2
        if k > 0:
            coeffs[-k] += a_k / 2

    for k, b_k in enumerate(sin_coeffs[1:], start=1):
        samples += b_k * np.sin(k * tau)
        coeffs[k] += -1j * b_k / 2
        coeffs[-k] += 1j * b_k / 2

    return PeriodicFunction(samples, coeffs)


def random_trig_poly(rng: np.random.Generator, degree: int, N: int, zero_mean: bool = False) -> PeriodicFunction:
    cos_coeffs = rng.standard_normal(degree + 1) / np.arange(1, degree + 2)
    sin_coeffs = rng.standard_normal(degree + 1) / np.arange(1, degree + 2)

    if zero_mean:
        cos_coeffs[0] = 0.0

    return from_trig_poly(cos_coeffs, sin_coeffs, N)


def tangential_derivative(g: PeriodicFunction) -> PeriodicFunction:
    """
    Spectral derivative with respect to the boundary angle: mode m is multiplied by i m.
    The Nyquist mode has no real derivative and is dropped
    """
    multiplier = 1j * g.modes
    multiplier[np.abs(g.modes) == g.N // 2] = 0

    coeffs = g.coeffs * multiplier
    samples = np.fft.ifft(coeffs * g.N * (-1.0) ** g.modes).real

    return PeriodicFunction(samples, coeffs)


def second_derivative(g: PeriodicFunction) -> PeriodicFunction:
    return tangential_derivative(tangential_derivative(g))


def holder_quotient_max(points: np.ndarray, values: np.ndarray, alpha: float,
                        pairs: np.ndarray = None, chunk_size: int = 256) -> float:
    """
    Largest |f(x) - f(y)| / |x - y|^alpha over pairs of samples.

    Vector and matrix valued samples use the Euclidean (Frobenius) norm of the difference.
    If `pairs` (an (P, 2) index array) is None, every pair is visited, in row chunks to bound memory

    """
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float).reshape(len(points), -1)

    if pairs is not None:
        best = 0.0
        for start in range(0, len(pairs), chunk_size * 1024):
            i, j = pairs[start:start + chunk_size * 1024].T

            dist = np.linalg.norm(points[i] - points[j], axis=-1)
            diff = np.linalg.norm(values[i] - values[j], axis=-1)

            valid = dist > 0
            if np.any(valid):
                best = max(best, float(np.max(diff[valid] / dist[valid] ** alpha)))

        return best

    best = 0.0
    for start in range(0, len(points), chunk_size):
        block_points = points[start:start + chunk_size]
        block_values = values[start:start + chunk_size]

        dist = np.linalg.norm(block_points[:, None, :] - points[None, :, :], axis=-1)
        diff = np.linalg.norm(block_values[:, None, :] - values[None, :, :], axis=-1)

        valid = dist > 0
        if np.any(valid):
            best = max(best, float(np.max(diff[valid] / dist[valid] ** alpha)))

    return best


def holder_seminorm_circle(g: PeriodicFunction, alpha: float, radius: float = 1.0) -> float:
    """
    Grid estimate of [g]_{0,alpha} on the circle of the given radius, measured with the chordal distance.
    It is a lower bound of the true seminorm, nondecreasing under grid refinement
    """
    if not 0 < alpha < 1:
        raise ValueError(f"Hölder exponent must lie in (0, 1), got {alpha}")
    if radius <= 0:
        raise ValueError(f"Circle radius must be positive, got {radius}")

    tau = g.nodes
    points = radius * np.stack((np.cos(tau), np.sin(tau)), axis=-1)

    return holder_quotient_max(points, g.samples, alpha)


def check_zero_mean(g: PeriodicFunction, tol: float = 1e-10):
    if abs(g.mean) > tol:
        raise CompatibilityError(f"Neumann datum on the disk must have zero mean, got mean {g.mean:.3e}")


@dataclass
class NeumannData:
    outer: PeriodicFunction
    holes: list[PeriodicFunction] = field(default_factory=list)

    # every component is parametrized by the angle of its own circle, and the normal derivative is taken
    # along the direction pointing away from that circle's centre

    @property
    def components(self) -> list[PeriodicFunction]:
        return [self.outer] + list(self.holes)

    @property
    def n_holes(self) -> int:
        return len(self.holes)

    @property
    def sup_norm(self) -> float:
        return max(component.sup_norm for component in self.components)

    def fluxes(self, r0: float, hole_radii: Sequence[float]) -> np.ndarray:
        # arc-length integral of each component, outer first
        radii = np.concatenate(([r0], np.asarray(hole_radii, dtype=float)))
        means = np.array([component.mean for component in self.components])

        return 2 * np.pi * radii * means

    def compatibility_defect(self, r0: float, hole_radii: Sequence[float]) -> float:
        if len(hole_radii) != self.n_holes:
            raise ValueError(f"Data has {self.n_holes} hole components but {len(hole_radii)} radii were given!")

        fluxes = self.fluxes(r0, hole_radii)
        return float(fluxes[0] - np.sum(fluxes[1:]))

    def check_compatibility(self, r0: float, hole_radii: Sequence[float], tol: float = 1e-10):

        defect = self.compatibility_defect(r0, hole_radii)

        radii = np.concatenate(([r0], np.asarray(hole_radii, dtype=float)))
        scale = max(2 * np.pi * radius * component.sup_norm for radius, component in zip(radii, self.components))

        if abs(defect) > tol * scale:
            raise CompatibilityError(f"Outer flux and total hole flux differ by {defect:.3e}!")

    def scaled(self, factor: float) -> NeumannData:
        return NeumannData(self.outer * factor, [hole * factor for hole in self.holes])

    @classmethod
    def zero(cls, n_holes: int, N: int = 64) -> NeumannData:
        zero_fn = PeriodicFunction(np.zeros(N))
        return cls(zero_fn, [zero_fn] * n_holes)
