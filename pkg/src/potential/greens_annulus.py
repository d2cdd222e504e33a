"""
Neumann Green's function of the exterior (or interior) of a disk B_R centred at the origin, built by inversion:

    x* = R^2 x / |x|^2
    Phi(x) = -log|x| / (2pi)
    phi^x(y) = log|y - x*| / (2pi) - |y|^2 / (4pi R^2)
    G_N(x, y) = Phi(y - x) - phi^x(y)

On |y| = R the radial derivatives of Phi(y - x) and phi^x(y) coincide, while phi^x carries the constant
source -Delta phi^x = 1 / (pi R^2).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.exceptions import PotentialDomainError
from src.potential.abstract_field import HarmonicField
from src.potential.boundary_data import PeriodicFunction, quadrature_nodes
from src.potential.disk_solvers import refined_node_count
from src.utils import as_points

# distance below which two points are considered coincident
COINCIDENCE_TOL = 1e-12


@dataclass(frozen=True)
class GreensContext:
    R: float = 1.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"Radius of the reference circle must be positive, got {self.R}")

    @property
    def source_constant(self) -> float:
        # k = -Delta phi^x
        return 1 / (np.pi * self.R ** 2)

    def circle_points(self, n_nodes: int) -> np.ndarray:
        tau = quadrature_nodes(n_nodes)
        return self.R * np.stack((np.cos(tau), np.sin(tau)), axis=-1)


def _norm(x: np.ndarray) -> np.ndarray:
    return np.linalg.norm(x, axis=-1)


def _check_not_zero(x: np.ndarray, what: str):
    if np.any(_norm(x) < COINCIDENCE_TOL):
        raise PotentialDomainError(f"{what} is singular at the origin!")


def invert(ctx: GreensContext, x) -> np.ndarray:
    x = as_points(x)
    _check_not_zero(x, "Inversion")

    return ctx.R ** 2 * x / (_norm(x) ** 2)[..., None]


def eval_phi_fund(x) -> np.ndarray:
    x = as_points(x)
    _check_not_zero(x, "Fundamental solution")

    return -np.log(_norm(x)) / (2 * np.pi)


def eval_phi_corrector(ctx: GreensContext, x, y) -> np.ndarray:
    x, y = as_points(x), as_points(y)

    image = invert(ctx, x)
    gap = _norm(y - image)
    if np.any(gap < COINCIDENCE_TOL):
        raise PotentialDomainError("Corrector evaluated at the image point x*!")

    return np.log(gap) / (2 * np.pi) - _norm(y) ** 2 / (4 * np.pi * ctx.R ** 2)


def eval_greens_neumann(ctx: GreensContext, x, y) -> np.ndarray:
    x, y = as_points(x), as_points(y)

    if np.any(_norm(y - x) < COINCIDENCE_TOL):
        raise PotentialDomainError("Green's function evaluated at y = x!")

    return eval_phi_fund(y - x) - eval_phi_corrector(ctx, x, y)


def radial_derivative_fund(x, y) -> np.ndarray:
    # d/d|y| of Phi(y - x)
    x, y = as_points(x), as_points(y)
    gap = y - x

    return -np.sum(gap * y, axis=-1) / (_norm(y) * _norm(gap) ** 2) / (2 * np.pi)


def radial_derivative_corrector(ctx: GreensContext, x, y) -> np.ndarray:
    # d/d|y| of phi^x(y)
    x, y = as_points(x), as_points(y)
    gap = y - invert(ctx, x)

    return np.sum(gap * y, axis=-1) / (_norm(y) * _norm(gap) ** 2) / (2 * np.pi) - _norm(y) / (2 * np.pi * ctx.R ** 2)


def neumann_boundary_mismatch(ctx: GreensContext, x, n_nodes: int = 256) -> float:
    """
    max over |y| = R of |d phi^x / dr (y) - d Phi(y - x) / dr|, computed from the closed form radial derivatives
    """
    x = as_points(x).reshape(-1, 2)
    y = ctx.circle_points(n_nodes)

    mismatch = radial_derivative_corrector(ctx, x[:, None, :], y[None, :, :]) - \
        radial_derivative_fund(x[:, None, :], y[None, :, :])

    return float(np.max(np.abs(mismatch), initial=0.0))


def log_reflection_residual(ctx: GreensContext, x, y) -> float:
    """
    max |log|y - x*| - (log|y* - x| + log|y| - log|x|)|
    """
    x, y = as_points(x), as_points(y)

    lhs = np.log(_norm(y - invert(ctx, x)))
    rhs = np.log(_norm(invert(ctx, y) - x)) + np.log(_norm(y)) - np.log(_norm(x))

    return float(np.max(np.abs(lhs - rhs), initial=0.0))


def corrector_laplacian(ctx: GreensContext, x, y, h: float) -> np.ndarray:
    # 5-point discrete Laplacian of y -> phi^x(y)
    x, y = as_points(x), as_points(y)
    e1, e2 = np.array([h, 0.0]), np.array([0.0, h])

    neighbours = sum(eval_phi_corrector(ctx, x, y + step) for step in (e1, -e1, e2, -e2))

    return (neighbours - 4 * eval_phi_corrector(ctx, x, y)) / h ** 2


def single_layer(ctx: GreensContext, g: PeriodicFunction, x) -> np.ndarray:
    """
    u(x) = int_{|y| = R} g(y) G_N(x, y) dS_y, where g is parametrized by the angle of y.

    For zero mean g, u is harmonic off the circle and its radial derivative tends to -g as |x| -> R from outside

    """
    x = as_points(x)
    radii = _norm(x) / ctx.R

    g = g.resample(refined_node_count(g, radii))
    y = ctx.circle_points(g.N)

    flat_x = x.reshape(-1, 2)
    kernel = eval_greens_neumann(ctx, flat_x[:, None, :], y[None, :, :])

    arc_weight = 2 * np.pi * ctx.R / g.N
    return (kernel @ g.samples * arc_weight).reshape(x.shape[:-1])[()]


def single_layer_radial_derivative(ctx: GreensContext, g: PeriodicFunction, x) -> np.ndarray:
    # d/d|x| of single_layer, differentiating G_N(x, y) in x under the integral
    x = as_points(x)
    radii = _norm(x) / ctx.R

    g = g.resample(refined_node_count(g, radii))
    y = ctx.circle_points(g.N)

    flat_x = x.reshape(-1, 2)[:, None, :]
    y = y[None, :, :]

    # grad_x Phi(y - x) = (y - x) / (2pi |y - x|^2)
    gap = y - flat_x
    grad_fund = gap / (2 * np.pi * _norm(gap)[..., None] ** 2)

    # grad_x log|y - x*| = grad_x log|x conj(y) - R^2| - grad_x log|x|, written in complex form
    x_c = flat_x[..., 0] + 1j * flat_x[..., 1]
    y_c = y[..., 0] + 1j * y[..., 1]
    holomorphic = np.conj(np.conj(y_c) / (x_c * np.conj(y_c) - ctx.R ** 2)) - np.conj(1 / x_c)
    grad_corrector = np.stack((holomorphic.real, holomorphic.imag), axis=-1) / (2 * np.pi)

    radial = flat_x / _norm(flat_x)[..., None]
    kernel = np.sum((grad_fund - grad_corrector) * radial, axis=-1)

    arc_weight = 2 * np.pi * ctx.R / g.N
    return (kernel @ g.samples * arc_weight).reshape(x.shape[:-1])[()]


def _smooth_step(t: np.ndarray):
    """
    C-infinity step s(t) = f(t) / (f(t) + f(1 - t)) with f(t) = exp(-1/t), 0 for t <= 0 and 1 for t >= 1,
    returned together with its first two derivatives
    """
    t = np.asarray(t, dtype=float)
    inside = (t > 0) & (t < 1)
    safe_t = np.where(inside, t, 0.5)

    def f(s):
        return np.exp(-1 / s)

    def f1(s):
        return f(s) / s ** 2

    def f2(s):
        return f(s) * (1 - 2 * s) / s ** 4

    a, b = f(safe_t), f(1 - safe_t)
    a1, b1 = f1(safe_t), -f1(1 - safe_t)
    a2, b2 = f2(safe_t), f2(1 - safe_t)

    den = a + b
    num1 = a1 * b - a * b1
    num2 = a2 * b - a * b2

    s0 = np.where(inside, a / den, (t >= 1).astype(float))
    s1 = np.where(inside, num1 / den ** 2, 0.0)
    s2 = np.where(inside, num2 / den ** 2 - 2 * num1 * (a1 + b1) / den ** 3, 0.0)

    return s0, s1, s2


def neumann_representation(ctx: GreensContext,
                           field: HarmonicField,
                           x,
                           width: float,
                           side: Literal["exterior", "interior"] = "exterior",
                           n_boundary: int = 512,
                           n_radial: int = 256,
                           n_angular: int = 512) -> np.ndarray:
    """
    Reconstructs u = zeta * v at the points x from its Neumann trace on |y| = R, through

        u(x) = k int_Omega u + sign int_{|y|=R} du/dr G_N(x, .) dS - int_Omega Delta u G_N(x, .) dy

    where Omega is the annulus of the given width on the chosen side of the circle, zeta is a radial cut-off equal to 1
    within width/3 of the circle and to 0 beyond 2 width/3, and sign is -1 on the exterior side, +1 on the interior one.
    Points x should lie where zeta = 1, so that the volume integrand is smooth around them

    """
    if side not in ("exterior", "interior"):
        raise ValueError(f"Side must be 'exterior' or 'interior', got '{side}'")
    if width <= 0 or (side == "interior" and width >= ctx.R):
        raise ValueError(f"Invalid annulus width {width} for a circle of radius {ctx.R} on the {side} side")

    x = as_points(x).reshape(-1, 2)
    side_sign = 1.0 if side == "exterior" else -1.0

    # x must lie in the region where the cut-off is identically 1
    offset = side_sign * (_norm(x) - ctx.R)
    if np.any((offset <= 0) | (offset >= width / 3)):
        raise PotentialDomainError(f"Representation points must lie within {width / 3:.3e} of the circle, "
                                   f"on its {side} side")

    def cutoff(rho):
        # zeta(rho) and its first two radial derivatives
        t = (np.abs(rho - ctx.R) - width / 3) / (width / 3)
        s0, s1, s2 = _smooth_step(t)
        dt = side_sign * 3 / width
        return 1 - s0, -s1 * dt, -s2 * dt ** 2

    # polar midpoint grid on Omega
    edges = np.linspace(0, width, n_radial + 1)
    rho = ctx.R + side_sign * (edges[:-1] + edges[1:]) / 2
    theta = quadrature_nodes(n_angular)
    rho_grid, theta_grid = np.meshgrid(rho, theta, indexing="ij")
    y = np.stack((rho_grid * np.cos(theta_grid), rho_grid * np.sin(theta_grid)), axis=-1).reshape(-1, 2)
    weights = (rho_grid * (width / n_radial) * (2 * np.pi / n_angular)).ravel()

    rho_flat = rho_grid.ravel()
    zeta, zeta_r, zeta_rr = cutoff(rho_flat)
    radial = y / rho_flat[:, None]

    v = field.value(y)
    v_r = np.sum(field.gradient(y) * radial, axis=-1)

    # Delta(zeta v) = v Delta zeta + 2 grad v . grad zeta, v harmonic
    laplacian_u = v * (zeta_rr + zeta_r / rho_flat) + 2 * v_r * zeta_r
    mass_term = ctx.source_constant * np.sum(zeta * v * weights)

    # the cut-off is identically 1 around the circle
    boundary_y = ctx.circle_points(n_boundary)
    boundary_radial = boundary_y / ctx.R
    du_dr = np.sum(field.gradient(boundary_y) * boundary_radial, axis=-1)
    arc_weight = 2 * np.pi * ctx.R / n_boundary

    represented = np.empty(len(x))
    support = np.abs(laplacian_u) > 0

    for i, point in enumerate(x):
        boundary_term = np.sum(du_dr * eval_greens_neumann(ctx, point, boundary_y)) * arc_weight
        volume_term = np.sum(laplacian_u[support] * eval_greens_neumann(ctx, point, y[support]) * weights[support])

        represented[i] = mass_term - side_sign * boundary_term - volume_term

    return represented
