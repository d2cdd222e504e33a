"""
Neumann solver on holed domains by circular harmonics (Trefftz) least squares collocation.

The solution is sought in the form

    u(x) = Re sum_{m=1}^{M} c_m ((x - z0) / r0)^m
         + sum_k [ a_k log|x - z_k| + Re sum_{m=1}^{M} d_km (r_k / (x - z_k))^m ]
         + constant

which is harmonic in E for every choice of coefficients. The log strengths a_k are fixed by the flux of the datum
through each hole, the remaining coefficients fit the normal derivative at uniform nodes of every circle, and the
constant makes the area average of u vanish.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from loguru import logger

from src.domain.holed_domain import HoledDomain, validate_geometry
from src.exceptions import SolverError, PotentialDomainError
from src.potential.abstract_field import HarmonicField, gradient_from_complex, hessian_from_complex
from src.potential.boundary_data import NeumannData, quadrature_nodes
from src.utils import as_points, to_complex

# points closer than this to the boundary are treated as outside E
EVAL_MARGIN = 1e-9

# minimum trapezoid nodes per circle of the boundary integrals giving the area average
AREA_NODES = 1024

EVAL_CHUNK_ENTRIES = 2 ** 20


@dataclass(eq=False)
class HarmonicAnsatz(HarmonicField):
    domain: HoledDomain
    M: int

    # scaled coefficients, see the module docstring
    interior_coeffs: np.ndarray
    hole_log: np.ndarray
    hole_coeffs: np.ndarray
    constant: float = 0.0

    # solve diagnostics
    residual: float = 0.0
    condition: float = 1.0

    def __post_init__(self):
        self.interior_coeffs = np.asarray(self.interior_coeffs, dtype=complex).reshape(self.M)
        self.hole_log = np.asarray(self.hole_log, dtype=float).reshape(self.domain.n)
        self.hole_coeffs = np.asarray(self.hole_coeffs, dtype=complex).reshape(self.domain.n, self.M)

    @classmethod
    def zero(cls, domain: HoledDomain, M: int) -> HarmonicAnsatz:
        return cls(domain, M, np.zeros(M), np.zeros(domain.n), np.zeros((domain.n, M)))

    @classmethod
    def from_unscaled(cls, domain: HoledDomain, interior, hole_log=None, hole_coeffs=None,
                      constant: float = 0.0) -> HarmonicAnsatz:
        """
        Builds the ansatz from the coefficients of (x - z0)^m and (x - z_k)^(-m), m = 1..M
        """
        interior = np.asarray(interior, dtype=complex)
        M = len(interior)
        powers = np.arange(1, M + 1)

        hole_log = np.zeros(domain.n) if hole_log is None else hole_log
        hole_coeffs = np.zeros((domain.n, M)) if hole_coeffs is None else np.asarray(hole_coeffs, dtype=complex)

        scaled_interior = interior * domain.r0 ** powers
        scaled_holes = hole_coeffs.reshape(domain.n, M) / domain.hole_radii[:, None] ** powers

        return cls(domain, M, scaled_interior, hole_log, scaled_holes, constant)

    @property
    def interior_coeffs_unscaled(self) -> np.ndarray:
        return self.interior_coeffs / self.domain.r0 ** np.arange(1, self.M + 1)

    @property
    def hole_coeffs_unscaled(self) -> np.ndarray:
        return self.hole_coeffs * self.domain.hole_radii[:, None] ** np.arange(1, self.M + 1)

    def contains(self, points: np.ndarray, margin: float = 0.0) -> np.ndarray:
        return self.domain.contains(points, margin=margin)

    def _local_coordinates(self, z: np.ndarray):
        # scaled local variables (x - z0) / r0 and (x - z_k) / r_k
        z0 = complex(*self.domain.z0)
        centers = to_complex(self.domain.hole_centers)

        outer = (z - z0) / self.domain.r0
        holes = (z[..., None] - centers) / self.domain.hole_radii

        return outer, holes

    def holomorphic_derivative(self, z: np.ndarray, order: int) -> np.ndarray:
        """
        order-th complex derivative (order 1 or 2) of the holomorphic function whose real part is the ansatz,
        log terms included
        """
        outer, holes = self._local_coordinates(z)
        powers = np.arange(1, self.M + 1)
        centers = to_complex(self.domain.hole_centers)
        radii = self.domain.hole_radii

        if order == 1:
            # d/dz (zeta_0^m) = m zeta_0^(m-1) / r0, d/dz (zeta_k^-m) = -m zeta_k^(-m-1) / r_k
            interior = (outer[..., None] ** (powers - 1)) @ (powers * self.interior_coeffs) / self.domain.r0
            multipole = -np.sum(holes[..., None] ** (-powers - 1) * (powers * self.hole_coeffs / radii[:, None]),
                                axis=(-2, -1))
            logs = np.sum(self.hole_log / (z[..., None] - centers), axis=-1)
        elif order == 2:
            interior = (outer[..., None] ** np.maximum(powers - 2, 0)) @ \
                (powers * (powers - 1) * self.interior_coeffs) / self.domain.r0 ** 2
            multipole = np.sum(holes[..., None] ** (-powers - 2) *
                               (powers * (powers + 1) * self.hole_coeffs / radii[:, None] ** 2), axis=(-2, -1))
            logs = -np.sum(self.hole_log / (z[..., None] - centers) ** 2, axis=-1)
        else:
            raise ValueError(f"Only first and second derivatives are available, got order {order}")

        return interior + multipole + logs

    def _checked_complex(self, points) -> np.ndarray:
        points = as_points(points)

        if not np.all(self.contains(points, margin=EVAL_MARGIN)):
            raise PotentialDomainError(f"Ansatz evaluated outside {self.domain}!")

        return to_complex(points)

    def _in_chunks(self, z: np.ndarray, fn) -> np.ndarray:
        # bounds the (points x holes x M) temporaries
        flat = z.ravel()
        size = max(1, EVAL_CHUNK_ENTRIES // ((self.domain.n + 1) * self.M))

        parts = [fn(flat[start:start + size]) for start in range(0, len(flat), size)]
        result = np.concatenate(parts) if parts else fn(flat)

        return result.reshape(z.shape)

    def _value(self, z: np.ndarray) -> np.ndarray:
        outer, holes = self._local_coordinates(z)
        powers = np.arange(1, self.M + 1)
        centers = to_complex(self.domain.hole_centers)

        holomorphic = (outer[..., None] ** powers) @ self.interior_coeffs + \
            np.sum(holes[..., None] ** (-powers) * self.hole_coeffs, axis=(-2, -1))
        logs = np.sum(self.hole_log * np.log(np.abs(z[..., None] - centers)), axis=-1)

        return holomorphic.real + logs + self.constant

    def value(self, points: np.ndarray) -> np.ndarray:
        return self._in_chunks(self._checked_complex(points), self._value)

    def gradient(self, points: np.ndarray) -> np.ndarray:
        first = self._in_chunks(self._checked_complex(points), lambda z: self.holomorphic_derivative(z, order=1))
        return gradient_from_complex(first)

    def hessian(self, points: np.ndarray) -> np.ndarray:
        second = self._in_chunks(self._checked_complex(points), lambda z: self.holomorphic_derivative(z, order=2))
        return hessian_from_complex(second)

    def normal_derivative(self, circle_index: int, tau: np.ndarray) -> np.ndarray:
        """
        Derivative along e^{i tau} (away from the circle centre) at the points of boundary circle `circle_index`
        (0 is the outer circle), computed as Re(f'(z) e^{i tau})
        """
        center, radius = self.domain.circles()[circle_index]
        normal = np.exp(1j * np.asarray(tau))
        z = complex(*center) + radius * normal

        return (self.holomorphic_derivative(z, order=1) * normal).real

    def area_integral(self, n_nodes: int = AREA_NODES, origin=None) -> float:
        """
        Integral of u over E through Green's second identity with w = |x - origin|^2 / 4 (so that Lap w = 1):

            int_E u = sum over the circles of int (u dw/dnu - w du/dnu) ds,   nu the outward normal of E

        The boundary integrands are smooth and periodic, the trapezoid rule on each circle is spectrally accurate
        """
        origin = complex(*(self.domain.z0 if origin is None else origin))
        tau = quadrature_nodes(n_nodes)
        direction = np.exp(1j * tau)

        total = 0.0
        for k, (center, radius) in enumerate(self.domain.circles()):
            z = complex(*center) + radius * direction

            # the outer circle has nu pointing away from its centre, holes towards theirs
            nu = direction if k == 0 else -direction

            u = self._value(z)
            du_dnu = (self.holomorphic_derivative(z, order=1) * nu).real
            w = np.abs(z - origin) ** 2 / 4
            dw_dnu = (np.conj(z - origin) * nu).real / 2

            total += 2 * np.pi * radius / n_nodes * float(np.sum(u * dw_dnu - w * du_dnu))

        return total

    def area_average(self, n_nodes: int = AREA_NODES) -> float:
        return self.area_integral(n_nodes) / self.domain.area


def eval_ansatz(a: HarmonicAnsatz, x, order: int = 0) -> np.ndarray:
    return a.evaluate(x, order)


def _basis_columns(domain: HoledDomain, M: int, z: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """
    Normal derivative of every real unknown (Re and Im part of each scaled coefficient) at the points z
    """
    powers = np.arange(1, M + 1)
    z0 = complex(*domain.z0)

    columns = []

    derivative = powers * ((z[:, None] - z0) / domain.r0) ** (powers - 1) / domain.r0
    columns.append((derivative * normal[:, None]).real)
    columns.append((1j * derivative * normal[:, None]).real)

    for center, radius in zip(to_complex(domain.hole_centers), domain.hole_radii):
        derivative = -powers * ((z[:, None] - center) / radius) ** (-powers - 1) / radius
        columns.append((derivative * normal[:, None]).real)
        columns.append((1j * derivative * normal[:, None]).real)

    return np.concatenate(columns, axis=1)


def _unpack(solution: np.ndarray, n_holes: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    blocks = solution.reshape(n_holes + 1, 2, M)
    coeffs = blocks[:, 0] + 1j * blocks[:, 1]

    return coeffs[0], coeffs[1:]


def solve_neumann_holed(dom: HoledDomain,
                        data: NeumannData,
                        M: int = 24,
                        nodes_per_circle: int = 128,
                        max_condition: float = 1e13) -> HarmonicAnsatz:

    report = validate_geometry(dom)
    if not report.passed:
        raise ValueError(f"Invalid geometry {dom}: {'; '.join(report.messages)}")

    if data.n_holes != dom.n:
        raise ValueError(f"Neumann data has {data.n_holes} hole components but the domain has {dom.n} holes!")

    if M < 1:
        raise ValueError(f"Truncation order must be >= 1, got {M}")
    if nodes_per_circle < 4 * M + 4:
        raise ValueError(f"{nodes_per_circle} nodes per circle cannot resolve M = {M}, at least {4 * M + 4} needed")

    data.check_compatibility(dom.r0, dom.hole_radii)

    # log strengths from the flux through each hole
    hole_log = data.fluxes(dom.r0, dom.hole_radii)[1:] / (2 * np.pi)

    tau = quadrature_nodes(nodes_per_circle)
    normal = np.exp(1j * tau)
    centers = to_complex(dom.hole_centers)

    matrix_blocks, rhs_blocks = [], []
    for (center, radius), component in zip(dom.circles(), data.components):
        z = complex(*center) + radius * normal

        datum = component.samples if component.N == nodes_per_circle else component(tau)
        log_part = np.sum(hole_log * (normal[:, None] / (z[:, None] - centers)).real, axis=-1)

        matrix_blocks.append(_basis_columns(dom, M, z, normal))
        rhs_blocks.append(datum - log_part)

    matrix = np.concatenate(matrix_blocks)
    rhs = np.concatenate(rhs_blocks)

    # columns have wildly different magnitudes across powers of the radii
    column_scale = np.max(np.abs(matrix), axis=0)
    column_scale[column_scale == 0] = 1.0
    scaled = matrix / column_scale

    q, r = scipy.linalg.qr(scaled, mode="economic")

    condition = np.linalg.cond(r) ** 2
    if not condition <= max_condition:
        raise SolverError(f"Collocation system is ill-conditioned (normal equation condition {condition:.3e} > "
                          f"{max_condition:.1e}), reduce M or improve the separation of the holes")

    solution = scipy.linalg.solve_triangular(r, q.T @ rhs) / column_scale
    residual = float(np.max(np.abs(matrix @ solution - rhs)))

    interior_coeffs, hole_coeffs = _unpack(solution, dom.n, M)
    ansatz = HarmonicAnsatz(dom, M, interior_coeffs, hole_log, hole_coeffs, residual=residual, condition=condition)

    # zero area average
    ansatz.constant = -ansatz.area_average(max(AREA_NODES, nodes_per_circle))

    logger.info(f"Neumann problem solved with M={M} on {dom.n + 1} circles, boundary residual {residual:.3e}")

    return ansatz
