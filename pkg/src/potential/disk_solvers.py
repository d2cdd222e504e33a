"""
Explicit solutions of the Dirichlet and Neumann problems on the unit disk (and the exterior of the disk), evaluated
by trapezoid quadrature of the boundary integrals.

Notation used below, for a datum h and x = r e^{i phi}:

    Pc(h) = (1/2pi) int P_r(tau - phi) h(tau) dtau      harmonic extension of h
    Kc(h) = (1/pi)  int K_r(tau - phi) h(tau) dtau      conjugate convolution
    F[h]  = Pc(h) - i Kc(h)                             Schwarz integral of h

The three problems in scope are

    dirichlet               u = Pc(g), trace g
    neumann_zero_avg        w = -(1/pi) int log|x - y| g(tau) dtau, normal derivative g, zero area average
    neumann_of_derivative   omega = Kc(g), normal derivative g'
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Literal

import numpy as np
from loguru import logger

from src.exceptions import PotentialDomainError
from src.potential.abstract_field import HarmonicField, gradient_from_complex, hessian_from_complex
from src.potential.boundary_data import PeriodicFunction, tangential_derivative, check_zero_mean, \
    quadrature_nodes
from src.potential.kernels import KernelPoint, eval_poisson, eval_conjugate, eval_poisson_grad_xy, \
    SINGULARITY_TOL
from src.utils import as_points, to_complex, rotate_quarter_turn

# declared accuracy region of the quadrature: r <= ACCURACY_RADIUS inside, r >= 1 / ACCURACY_RADIUS outside
ACCURACY_RADIUS = 0.99

# the trapezoid error of the kernels decays like r^N, these many e-foldings are requested
QUADRATURE_EFOLDINGS = 40
MAX_QUADRATURE_NODES = 8192

# bound on the size of the (points x nodes) kernel matrices built at once
CHUNK_ENTRIES = 2 ** 21

# polar grid used to fix the additive constant of the Neumann solution
AVERAGE_RADIAL = 128
AVERAGE_ANGULAR = 256

# below this radius the relation formulas (which divide by r) are replaced by direct kernel derivatives
RELATION_MIN_RADIUS = 1e-6


def refined_node_count(h: PeriodicFunction, radii: np.ndarray) -> int:

    radii = np.asarray(radii, dtype=float)
    radii = radii[radii > 0]

    if radii.size == 0:
        return h.N

    distance = np.min(np.abs(np.log(radii)))
    if distance == 0:
        raise PotentialDomainError("Boundary integrals cannot be evaluated on the unit circle!")

    required = 2 ** math.ceil(math.log2(QUADRATURE_EFOLDINGS / distance))
    n_nodes = max(h.N, min(required, MAX_QUADRATURE_NODES))

    if n_nodes != h.N:
        logger.debug(f"Refining quadrature from {h.N} to {n_nodes} nodes (closest radius {np.exp(-distance):.4f})")

    return n_nodes


def _warn_near_boundary(r: np.ndarray):
    r = np.asarray(r)

    if np.any((r > ACCURACY_RADIUS) & (r < 1 / ACCURACY_RADIUS)):
        logger.warning(f"Evaluation within {1 - ACCURACY_RADIUS:.2f} of the unit circle, "
                       f"quadrature accuracy is degraded")


def _chunks(n_points: int, n_nodes: int):
    size = max(1, CHUNK_ENTRIES // n_nodes)

    for start in range(0, n_points, size):
        yield slice(start, start + size)


def _convolve(h: PeriodicFunction, r, phi, kernel) -> np.ndarray:
    """
    (1/2pi) int kernel(r, tau - phi) h(tau) dtau, by the trapezoid rule on uniform nodes
    """
    r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))

    h = h.resample(refined_node_count(h, r))
    tau = h.nodes

    flat_r = r.ravel()
    flat_phi = phi.ravel()
    result = np.empty(flat_r.shape)

    for s in _chunks(len(flat_r), h.N):
        p = KernelPoint(flat_r[s, None], tau[None, :] - flat_phi[s, None])
        result[s] = kernel(p) @ h.samples / h.N

    return result.reshape(r.shape)


def _cauchy_mean(h: PeriodicFunction, z, kernel) -> np.ndarray:
    """
    (1/2pi) int kernel(zeta, z) h(tau) dtau with zeta = e^{i tau}, for complex kernels
    """
    z = np.asarray(z, dtype=complex)

    h = h.resample(refined_node_count(h, np.abs(z)))
    zeta = np.exp(1j * h.nodes)

    flat_z = z.ravel()
    result = np.empty(flat_z.shape, dtype=complex)

    for s in _chunks(len(flat_z), h.N):
        gap = zeta[None, :] - flat_z[s, None]

        if np.any(np.abs(gap) ** 2 < SINGULARITY_TOL):
            raise PotentialDomainError("Cauchy kernel evaluated on its pole (|z| = 1)!")

        result[s] = kernel(zeta[None, :], flat_z[s, None], gap) @ h.samples / h.N

    return result.reshape(z.shape)


def _pc(h: PeriodicFunction, r, phi) -> np.ndarray:
    return _convolve(h, r, phi, eval_poisson)


def _kc(h: PeriodicFunction, r, phi) -> np.ndarray:
    return 2 * _convolve(h, r, phi, eval_conjugate)


def _schwarz(h: PeriodicFunction, r, phi) -> np.ndarray:
    return _pc(h, r, phi) - 1j * _kc(h, r, phi)


def _check_positive_radius(r):
    if np.any(np.asarray(r) <= 0):
        raise PotentialDomainError("Relation formulas divide by r, use the direct kernel derivatives at r = 0!")


def eval_dirichlet(g: PeriodicFunction, r, phi) -> np.ndarray:
    _warn_near_boundary(r)

    if np.any(np.asarray(r) >= 1):
        raise PotentialDomainError("Dirichlet solution is defined for r < 1, use eval_exterior_extension outside!")

    return _pc(g, r, phi)[()]


def eval_neumann(g: PeriodicFunction, x) -> np.ndarray:
    """
    Neumann solution with datum g and zero area average, evaluated at cartesian (or complex) points x

    The log single layer is evaluated by quadrature, then the area average computed on a polar grid
    (midpoint rule in r^2, uniform in phi) is subtracted

    """
    check_zero_mean(g)

    z = to_complex(x)
    _warn_near_boundary(np.abs(z))

    if np.any(np.abs(z) >= 1):
        raise PotentialDomainError("Neumann solution is defined inside the unit disk only!")

    return (_log_layer(g, z) - _log_layer_area_average(g))[()]


def _log_layer(g: PeriodicFunction, z) -> np.ndarray:
    # -(1/pi) int log|zeta - z| g(tau) dtau
    def kernel(zeta, z, gap):
        return -2 * np.log(np.abs(gap)) + 0j

    return _cauchy_mean(g, z, kernel).real


@lru_cache(maxsize=64)
def _log_layer_area_average(g: PeriodicFunction) -> float:

    ring_radii = np.sqrt((np.arange(AVERAGE_RADIAL) + 0.5) / AVERAGE_RADIAL)
    ring_angles = quadrature_nodes(AVERAGE_ANGULAR)

    # each ring gets its own quadrature refinement
    ring_means = [np.mean(_log_layer(g, radius * np.exp(1j * ring_angles))) for radius in ring_radii]

    return float(np.mean(ring_means))


def eval_omega(g: PeriodicFunction, r, phi) -> np.ndarray:
    """
    Solution of the Neumann problem whose datum is the tangential derivative g', written as (1/pi) K_r * g.
    Valid inside (r < 1) and outside (r > 1) the disk
    """
    _warn_near_boundary(r)
    return _kc(g, r, phi)[()]


def eval_exterior_extension(g: PeriodicFunction, r, phi) -> np.ndarray:
    """
    (1 - r^2)/(2pi) int g(tau) / |x - y|^2 dtau for r > 1.

    Its trace on the unit circle is -g, so the exterior Dirichlet solution with trace g is the negation

    """
    if np.any(np.asarray(r) <= 1):
        raise PotentialDomainError("Exterior extension is defined for r > 1 only!")

    _warn_near_boundary(r)
    return _pc(g, r, phi)[()]


def schwarz_integral(g: PeriodicFunction, z) -> np.ndarray:
    """
    (1/2pi) int (e^{i tau} + z) / (e^{i tau} - z) g(tau) dtau

    Inside the disk this is the holomorphic f = u - i omega with u the harmonic extension of g and
    omega = (1/pi) K_r * g, normalized by Im f(0) = 0

    """
    z = np.asarray(z, dtype=complex)
    _warn_near_boundary(np.abs(z))

    def kernel(zeta, z, gap):
        return (zeta + z) / gap

    return _cauchy_mean(g, z, kernel)[()]


def _polar_vector(r, phi, radial_part: np.ndarray) -> np.ndarray:
    # (e^{i phi} / r) * radial_part as a cartesian vector
    return gradient_from_complex(np.conj(np.exp(1j * phi) * radial_part / r))


def grad_dirichlet(g: PeriodicFunction, r, phi) -> np.ndarray:
    """
    Du(re^{i phi}) = -(1/r) Kc(g') e^{i phi} + (1/r) Pc(g') e^{i(phi + pi/2)}

    The same expression holds outside the disk for the exterior extension

    """
    _check_positive_radius(r)
    r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))

    g_prime = tangential_derivative(g)
    radial_part = -_kc(g_prime, r, phi) + 1j * _pc(g_prime, r, phi)

    return _polar_vector(r, phi, radial_part)


def grad_neumann(g: PeriodicFunction, r, phi) -> np.ndarray:
    """
    Dw(re^{i phi}) = (1/r) Pc(g) e^{i phi} + (1/r) Kc(g) e^{i(phi + pi/2)}, for zero mean g
    """
    check_zero_mean(g)
    _check_positive_radius(r)
    r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))

    radial_part = _pc(g, r, phi) + 1j * _kc(g, r, phi)

    return _polar_vector(r, phi, radial_part)


def grad_omega(g: PeriodicFunction, r, phi) -> np.ndarray:
    # omega solves the Neumann problem with datum g'
    return grad_neumann(tangential_derivative(g), r, phi)


def grad_dirichlet_direct(g: PeriodicFunction, r, phi) -> np.ndarray:
    """
    Gradient of the harmonic extension obtained by differentiating the Poisson kernel under the integral.
    Unlike the relation formula it is regular at r = 0
    """
    r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))

    h = g.resample(refined_node_count(g, r))
    tau = h.nodes
    cos_tau, sin_tau = np.cos(tau), np.sin(tau)

    flat_r = r.ravel()
    flat_phi = phi.ravel()
    result = np.empty(flat_r.shape + (2,))

    for s in _chunks(len(flat_r), h.N):
        # gradient against the boundary point e^{i tau} is the gradient against 1, rotated by tau
        grad = eval_poisson_grad_xy(KernelPoint(flat_r[s, None], flat_phi[s, None] - tau[None, :]))
        grad_x1 = grad[..., 0] * cos_tau - grad[..., 1] * sin_tau
        grad_x2 = grad[..., 0] * sin_tau + grad[..., 1] * cos_tau

        result[s, 0] = grad_x1 @ h.samples / h.N
        result[s, 1] = grad_x2 @ h.samples / h.N

    return result.reshape(r.shape + (2,))


def rotation_identity_residual(g: PeriodicFunction, points) -> float:
    """
    max over points of |Du - i D omega| / (1 + |Du|), where u is the harmonic extension of g and omega the solution
    of the Neumann problem with datum g'. Points are (r, phi) pairs
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 0:
        return 0.0

    r, phi = points[:, 0], points[:, 1]

    du = grad_dirichlet(g, r, phi)
    d_omega = grad_omega(g, r, phi)

    residual = np.linalg.norm(du - rotate_quarter_turn(d_omega), axis=-1) / (1 + np.linalg.norm(du, axis=-1))

    return float(np.max(residual))


def hessian_dirichlet(g: PeriodicFunction, r, phi) -> np.ndarray:
    """
    Hessian of the harmonic extension from the Schwarz integrals of g' and g'':
    f'' = (i F[g'] - F[g'']) / z^2, with f = F[g] and u = Re f
    """
    _check_positive_radius(r)
    r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))

    g_prime = tangential_derivative(g)
    g_second = tangential_derivative(g_prime)
    z = r * np.exp(1j * phi)

    second = (1j * _schwarz(g_prime, r, phi) - _schwarz(g_second, r, phi)) / z ** 2

    return hessian_from_complex(second)


def hessian_neumann(g: PeriodicFunction, r, phi) -> np.ndarray:
    # w = Re W with W' = F[g] / z, hence W'' = (-i F[g'] - F[g]) / z^2
    check_zero_mean(g)
    _check_positive_radius(r)
    r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))

    z = r * np.exp(1j * phi)
    second = (-1j * _schwarz(tangential_derivative(g), r, phi) - _schwarz(g, r, phi)) / z ** 2

    return hessian_from_complex(second)


def hessian_omega(g: PeriodicFunction, r, phi) -> np.ndarray:
    # omega = Re(i F[g])
    _check_positive_radius(r)
    r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))

    g_prime = tangential_derivative(g)
    g_second = tangential_derivative(g_prime)
    z = r * np.exp(1j * phi)

    second = (-_schwarz(g_prime, r, phi) - 1j * _schwarz(g_second, r, phi)) / z ** 2

    return hessian_from_complex(second)


DiskKind = Literal["dirichlet", "neumann_zero_avg", "neumann_of_derivative"]
DiskSide = Literal["interior", "exterior"]


class DiskField(HarmonicField):
    """
    One of the three disk problems as a HarmonicField on the unit disk (side "interior") or on its exterior.

    Away from the centre derivatives come from the relation formulas, near it from the kernels differentiated under
    the integral sign. The exterior Dirichlet field is the one with trace +g

    """

    kinds = ("dirichlet", "neumann_zero_avg", "neumann_of_derivative")
    sides = ("interior", "exterior")

    def __init__(self, kind: DiskKind, datum: PeriodicFunction, side: DiskSide = "interior"):

        if kind not in self.kinds:
            raise ValueError(f"Disk field kind must be one of {self.kinds}, got '{kind}'")
        if side not in self.sides:
            raise ValueError(f"Disk field side must be one of {self.sides}, got '{side}'")

        if kind == "neumann_zero_avg":
            if side == "exterior":
                raise ValueError("The zero average Neumann problem is posed inside the disk only!")
            check_zero_mean(datum)

        self.kind = kind
        self.datum = datum
        self.side = side

    @property
    def _sign(self) -> float:
        return -1.0 if (self.kind == "dirichlet" and self.side == "exterior") else 1.0

    def contains(self, points: np.ndarray, margin: float = 0.0) -> np.ndarray:
        radius = np.linalg.norm(as_points(points), axis=-1)

        if self.side == "interior":
            return radius < 1 - margin
        return radius > 1 + margin

    def _polar(self, points: np.ndarray):
        points = as_points(points)

        if not np.all(self.contains(points)):
            raise PotentialDomainError(f"Points outside the {self.side} of the unit disk!")

        r = np.linalg.norm(points, axis=-1)
        phi = np.arctan2(points[..., 1], points[..., 0])

        return r, phi

    def value(self, points: np.ndarray) -> np.ndarray:
        r, phi = self._polar(points)

        match self.kind:
            case "dirichlet":
                return self._sign * _pc(self.datum, r, phi)
            case "neumann_zero_avg":
                return _log_layer(self.datum, r * np.exp(1j * phi)) - _log_layer_area_average(self.datum)
            case "neumann_of_derivative":
                return _kc(self.datum, r, phi)

    def _direct_derivative(self, z: np.ndarray, order: int) -> np.ndarray:
        # d^order/dz^order of the holomorphic function whose real part is the field (up to the sign)
        power = order + 1

        match self.kind:
            case "neumann_zero_avg":
                # W' = (1/pi) int g / (zeta - z)
                def kernel(zeta, z, gap):
                    return 2 * math.factorial(order - 1) / gap ** order
            case _:
                # F^(k)(z) = (1/2pi) int 2 k! zeta / (zeta - z)^(k+1) g
                def kernel(zeta, z, gap):
                    return 2 * math.factorial(order) * zeta / gap ** power

        derivative = _cauchy_mean(self.datum, z, kernel)

        if self.kind == "neumann_of_derivative":
            derivative = 1j * derivative

        return derivative

    def gradient(self, points: np.ndarray) -> np.ndarray:
        r, phi = self._polar(points)
        result = np.empty(r.shape + (2,))

        near_centre = r < RELATION_MIN_RADIUS
        r_far, phi_far = r[~near_centre], phi[~near_centre]

        match self.kind:
            case "dirichlet":
                result[~near_centre] = grad_dirichlet(self.datum, r_far, phi_far)
            case "neumann_zero_avg":
                result[~near_centre] = grad_neumann(self.datum, r_far, phi_far)
            case "neumann_of_derivative":
                result[~near_centre] = grad_omega(self.datum, r_far, phi_far)

        if np.any(near_centre):
            z = r[near_centre] * np.exp(1j * phi[near_centre])
            result[near_centre] = gradient_from_complex(self._direct_derivative(z, order=1))

        return self._sign * result

    def hessian(self, points: np.ndarray) -> np.ndarray:
        r, phi = self._polar(points)
        result = np.empty(r.shape + (2, 2))

        near_centre = r < RELATION_MIN_RADIUS
        r_far, phi_far = r[~near_centre], phi[~near_centre]

        match self.kind:
            case "dirichlet":
                result[~near_centre] = hessian_dirichlet(self.datum, r_far, phi_far)
            case "neumann_zero_avg":
                result[~near_centre] = hessian_neumann(self.datum, r_far, phi_far)
            case "neumann_of_derivative":
                result[~near_centre] = hessian_omega(self.datum, r_far, phi_far)

        if np.any(near_centre):
            z = r[near_centre] * np.exp(1j * phi[near_centre])
            result[near_centre] = hessian_from_complex(self._direct_derivative(z, order=2))

        return self._sign * result

    def __repr__(self):
        return f"DiskField(kind={self.kind}, side={self.side}, datum={self.datum})"
