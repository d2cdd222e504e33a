"""
Empirical norms and Hölder seminorms of harmonic fields over regions of E, and direct numerical checks of the trace
inequality, of the L1 bound and of the interior derivative estimates for harmonic functions.

Every sup is a grid maximum: a lower bound of the continuum value, nondecreasing under refinement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Sequence

import numpy as np
from loguru import logger
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss
from scipy.spatial import cKDTree

from src.domain.holed_domain import HoledDomain
from src.domain.trefftz_solver import HarmonicAnsatz
from src.exceptions import PotentialDomainError, QuadratureResolutionError
from src.potential.abstract_field import HarmonicField
from src.potential.boundary_data import NeumannData, holder_quotient_max, quadrature_nodes, tangential_derivative
from src.utils import as_points, make_rng

# sampled points must keep at least this distance from the boundary of their region
SAMPLE_MARGIN = 1e-9

# collar grids start this far from their circle
BOUNDARY_MARGIN = 1e-8

# up to this many samples every pair is visited, above it pairs are sampled
EXHAUSTIVE_PAIRS = 2048

# near pairs are the ones closer than this many median nearest-neighbour spacings
NEAR_PAIR_SPACINGS = 4

# pair sampling must not depend on the experiment seed
PAIR_SEED = 20190417

DerivativeOrder = Literal[0, 1, 2]


def _check_order(order: int):
    if order not in (0, 1, 2):
        raise ValueError(f"Derivative order must be 0, 1 or 2, got {order}")


def _check_alpha(alpha: float):
    if not 0 < alpha < 1:
        raise ValueError(f"Hölder exponent must lie in (0, 1), got {alpha}")


@dataclass(frozen=True, eq=False)
class SampledField:
    """
    Values and derivatives of a field at the points of a region.

    `segments` are the (start, stop) slices of the sub-regions the sample was assembled from (a single one for a
    plain region), `resolution` the coarsest grid spacing among them
    """
    points: np.ndarray
    values: np.ndarray
    gradients: np.ndarray | None
    hessians: np.ndarray | None
    region: str
    resolution: float
    segments: tuple[tuple[int, int], ...] = field(default=None)

    def __post_init__(self):
        if self.segments is None:
            object.__setattr__(self, "segments", ((0, len(self.points)),))

    @classmethod
    def from_field(cls, harmonic_field: HarmonicField, points, region: str, resolution: float,
                   max_order: DerivativeOrder = 2) -> SampledField:
        _check_order(max_order)
        points = as_points(points).reshape(-1, 2)

        if not np.all(harmonic_field.contains(points, margin=SAMPLE_MARGIN)):
            raise PotentialDomainError(f"Samples of region '{region}' closer than {SAMPLE_MARGIN} to the boundary "
                                       f"or outside of it!")

        values = harmonic_field.value(points)
        gradients = harmonic_field.gradient(points) if max_order >= 1 else None
        hessians = harmonic_field.hessian(points) if max_order >= 2 else None

        return cls(points, values, gradients, hessians, region, resolution)

    @classmethod
    def union(cls, samples: Sequence[SampledField], region: str = "E") -> SampledField:
        if len(samples) == 0:
            raise ValueError("Cannot assemble a region from no samples!")

        def stack(name):
            parts = [getattr(sample, name) for sample in samples]
            return None if any(part is None for part in parts) else np.concatenate(parts)

        segments, start = [], 0
        for sample in samples:
            for seg_start, seg_stop in sample.segments:
                segments.append((start + seg_start, start + seg_stop))
            start += len(sample)

        return cls(stack("points"), stack("values"), stack("gradients"), stack("hessians"), region,
                   max(sample.resolution for sample in samples), tuple(segments))

    def component(self, order: DerivativeOrder) -> np.ndarray:
        """
        Samples of D^order of the field flattened to (P, k), k being 1, 2 or 4
        """
        _check_order(order)

        match order:
            case 0:
                component = self.values
            case 1:
                component = self.gradients
            case _:
                component = self.hessians

        if component is None:
            raise ValueError(f"Derivatives of order {order} were not sampled in region '{self.region}'")

        return np.asarray(component).reshape(len(self.points), -1)

    def __len__(self):
        return len(self.points)


def collar_points(center, radius: float, width: float, n_radial: int, n_angular: int,
                  outward: bool = True) -> np.ndarray:
    """
    Polar grid aligned to a circle, covering the annulus of the given width on one side of it
    """
    offsets = np.linspace(BOUNDARY_MARGIN, width, n_radial)
    radii = radius + offsets if outward else radius - offsets
    tau = quadrature_nodes(n_angular)

    points = np.asarray(center, dtype=float) + \
        radii[:, None, None] * np.stack((np.cos(tau), np.sin(tau)), axis=-1)[None]

    return points.reshape(-1, 2)


def sample_regions(harmonic_field: HarmonicField,
                   domain: HoledDomain,
                   n_radial: int = 64,
                   n_angular: int = 256,
                   interior_step_ratio: float = 1 / 8,
                   max_order: DerivativeOrder = 2) -> dict[str, SampledField]:
    """
    Samples the field on the collars of width d/3 around every boundary circle and on a cartesian grid of step
    `interior_step_ratio` * d covering E
    """
    width = domain.d / 3
    radial_spacing = width / max(n_radial - 1, 1)

    regions = {}

    outer = collar_points(domain.center, domain.r0, width, n_radial, n_angular, outward=False)
    regions["outer_collar"] = SampledField.from_field(harmonic_field, outer, "outer_collar",
                                                      max(radial_spacing, 2 * np.pi * domain.r0 / n_angular),
                                                      max_order)

    for k, hole in enumerate(domain.holes):
        points = collar_points(hole.center, hole.radius, width, n_radial, n_angular, outward=True)
        spacing = max(radial_spacing, 2 * np.pi * (hole.radius + width) / n_angular)
        regions[f"hole_{k}_collar"] = SampledField.from_field(harmonic_field, points, f"hole_{k}_collar", spacing,
                                                              max_order)

    step = interior_step_ratio * domain.d
    interior, _ = domain.area_grid(step, margin=BOUNDARY_MARGIN)
    regions["interior"] = SampledField.from_field(harmonic_field, interior, "interior", step, max_order)

    return regions


def sup_norm(f: SampledField, derivative_order: DerivativeOrder = 0) -> float:
    if len(f) == 0:
        raise ValueError(f"Cannot compute a sup norm over the empty sample of region '{f.region}'")

    return float(np.max(np.linalg.norm(f.component(derivative_order), axis=-1)))


def _near_pairs(points: np.ndarray) -> np.ndarray:
    tree = cKDTree(points)

    spacing, _ = tree.query(points, k=2)
    median_spacing = float(np.median(spacing[:, 1]))

    if median_spacing == 0:
        return np.empty((0, 2), dtype=int)

    return tree.query_pairs(r=NEAR_PAIR_SPACINGS * median_spacing, output_type="ndarray")


def _random_pairs(rng: np.random.Generator, start: int, stop: int, n_pairs: int) -> np.ndarray:
    return rng.integers(start, stop, size=(n_pairs, 2))


def holder_over_segments(points: np.ndarray, values: np.ndarray, alpha: float,
                         segments: Sequence[tuple[int, int]] = None,
                         max_pairs: int = EXHAUSTIVE_PAIRS) -> float:
    """
    Largest Hölder quotient over pairs of samples.

    Up to `max_pairs` samples every pair is visited. Above it the pair set is stratified: inside every segment the
    near pairs (closer than a few median spacings) plus `max_pairs`^2 random pairs, then `max_pairs`^2 random pairs
    across the whole sample. Random pairs come from a generator with a fixed seed, so the result is deterministic
    """
    _check_alpha(alpha)
    points = np.asarray(points, dtype=float)

    if len(points) < 2:
        raise ValueError("At least two samples are needed for a Hölder quotient")

    if len(points) <= max_pairs:
        return holder_quotient_max(points, values, alpha)

    segments = segments if segments is not None else [(0, len(points))]
    rng = make_rng(PAIR_SEED)
    n_random = max_pairs ** 2

    best = 0.0
    for start, stop in segments:
        if stop - start < 2:
            continue

        if stop - start <= max_pairs:
            best = max(best, holder_quotient_max(points[start:stop], values[start:stop], alpha))
            continue

        near = _near_pairs(points[start:stop]) + start
        best = max(best, holder_quotient_max(points, values, alpha, pairs=near))
        best = max(best, holder_quotient_max(points, values, alpha,
                                             pairs=_random_pairs(rng, start, stop, n_random)))

    if len(segments) > 1:
        best = max(best, holder_quotient_max(points, values, alpha,
                                             pairs=_random_pairs(rng, 0, len(points), n_random)))

    return best


def holder_seminorm_region(f: SampledField, alpha: float, derivative_order: DerivativeOrder = 0,
                           max_pairs: int = EXHAUSTIVE_PAIRS) -> float:
    return holder_over_segments(f.points, f.component(derivative_order), alpha, f.segments, max_pairs)


@dataclass(frozen=True)
class TraceTestField:
    """
    phi(r, theta) = sum_j P_j(r) cos(j theta) + Q_j(r) sin(j theta), with P_j, Q_j polynomials in r
    """
    cos_terms: tuple[Polynomial, ...]
    sin_terms: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        n_modes = max(len(self.cos_terms), len(self.sin_terms))
        zero = Polynomial([0.0])

        object.__setattr__(self, "cos_terms", tuple(self.cos_terms) + (zero,) * (n_modes - len(self.cos_terms)))
        object.__setattr__(self, "sin_terms", tuple(self.sin_terms) + (zero,) * (n_modes - len(self.sin_terms)))

    @property
    def max_mode(self) -> int:
        return len(self.cos_terms) - 1

    @property
    def max_degree(self) -> int:
        return max(poly.degree() for poly in self.cos_terms + self.sin_terms)

    @classmethod
    def random(cls, rng: np.random.Generator, max_mode: int = 4, max_degree: int = 3) -> TraceTestField:
        n_modes = rng.integers(1, max_mode + 2)

        cos_terms = tuple(Polynomial(rng.standard_normal(rng.integers(1, max_degree + 2))) for _ in range(n_modes))
        sin_terms = tuple(Polynomial(rng.standard_normal(rng.integers(1, max_degree + 2))) for _ in range(n_modes))

        return cls(cos_terms, sin_terms)

    def _modes(self, theta: np.ndarray):
        j = np.arange(self.max_mode + 1)
        return np.cos(j * theta[..., None]), np.sin(j * theta[..., None]), j

    def value(self, r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        cos_j, sin_j, _ = self._modes(theta)

        p = np.stack([poly(r) for poly in self.cos_terms], axis=-1)
        q = np.stack([poly(r) for poly in self.sin_terms], axis=-1)

        return np.sum(p * cos_j + q * sin_j, axis=-1)

    def gradient_sq(self, r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        # |D phi|^2 = phi_r^2 + (phi_theta / r)^2
        cos_j, sin_j, j = self._modes(theta)

        p = np.stack([poly(r) for poly in self.cos_terms], axis=-1)
        q = np.stack([poly(r) for poly in self.sin_terms], axis=-1)
        dp = np.stack([poly.deriv()(r) for poly in self.cos_terms], axis=-1)
        dq = np.stack([poly.deriv()(r) for poly in self.sin_terms], axis=-1)

        phi_r = np.sum(dp * cos_j + dq * sin_j, axis=-1)
        phi_theta = np.sum(j * (q * cos_j - p * sin_j), axis=-1)

        return phi_r ** 2 + (phi_theta / r) ** 2


class TraceCheck(NamedTuple):
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def check_trace_inequality(rho1: float, rho2: float, phi: TraceTestField,
                           boundary: Literal["inner", "outer"] = "inner",
                           n_radial: int = 64,
                           n_angular: int = None) -> TraceCheck:
    """
    Both sides of  int_{|x| = rho} phi^2 <= 8 / (rho2 - rho1) int phi^2 + 4 (rho2 - rho1) int |D phi|^2,
    rho being rho1 or rho2 and the area integrals taken over the annulus rho1 < |x| < rho2.

    Gauss-Legendre in r, trapezoidal rule in theta (exact once the angular nodes exceed the modes of phi^2)
    """
    if not 0 < rho1 < rho2:
        raise ValueError(f"Trace check needs 0 < rho1 < rho2, got rho1={rho1}, rho2={rho2}")
    if boundary not in ("inner", "outer"):
        raise ValueError(f"boundary must be 'inner' or 'outer', got '{boundary}'")

    n_angular = n_angular if n_angular is not None else 4 * phi.max_mode + 8
    if n_angular <= 2 * phi.max_mode:
        raise QuadratureResolutionError(f"{n_angular} angular nodes cannot integrate modes up to "
                                        f"{2 * phi.max_mode} exactly")
    if n_radial < phi.max_degree + 1:
        # phi^2 r has degree 2 * max_degree + 1, exact with max_degree + 1 Gauss-Legendre nodes
        raise QuadratureResolutionError(f"{n_radial} radial nodes cannot integrate phi^2 r exactly, at least "
                                        f"max_degree + 1 = {phi.max_degree + 1} are needed")

    theta = quadrature_nodes(n_angular)
    d_theta = 2 * np.pi / n_angular

    nodes, weights = leggauss(n_radial)
    half_width = (rho2 - rho1) / 2
    r = rho1 + half_width * (nodes + 1)
    radial_weights = half_width * weights * r

    rr, tt = np.meshgrid(r, theta, indexing="ij")
    phi_sq = np.sum(radial_weights @ phi.value(rr, tt) ** 2) * d_theta
    grad_sq = np.sum(radial_weights @ phi.gradient_sq(rr, tt)) * d_theta

    rho = rho1 if boundary == "inner" else rho2
    lhs = rho * np.sum(phi.value(np.full_like(theta, rho), theta) ** 2) * d_theta
    rhs = 8 / (rho2 - rho1) * phi_sq + 4 * (rho2 - rho1) * grad_sq

    return TraceCheck(float(lhs), float(rhs))


def l1_norm(harmonic_field: HarmonicField, domain: HoledDomain, grid_step: float) -> float:
    points, cell_area = domain.area_grid(grid_step, margin=SAMPLE_MARGIN)
    return float(np.sum(np.abs(harmonic_field.value(points))) * cell_area)


def check_l1_bound(dom: HoledDomain, data: NeumannData, a: HarmonicAnsatz, B: float,
                   grid_step: float = None) -> float:
    """
    ||u||_{L1(E)} / (B ||g||_inf), the L1 norm by masked grid quadrature of step d/8 unless specified.
    Vanishing data give u = 0 and ratio 0
    """
    g_sup = data.sup_norm

    if g_sup == 0:
        logger.warning("Neumann data vanish identically, the L1 bound ratio is set to 0")
        return 0.0

    if not B > 0:
        raise ValueError(f"The L1 bound needs B > 0, got {B} (domains without holes have B = 0)")

    grid_step = grid_step if grid_step is not None else dom.d / 8

    return l1_norm(a, dom, grid_step) / (B * g_sup)


def _ball_quadrature(center: np.ndarray, radius: float, n_radial: int, n_angular: int):
    # midpoint rule in r, trapezoidal in theta
    r = (np.arange(n_radial) + 0.5) * radius / n_radial
    theta = quadrature_nodes(n_angular)

    points = center + r[:, None, None] * np.stack((np.cos(theta), np.sin(theta)), axis=-1)[None]
    weights = np.broadcast_to((r * radius / n_radial * 2 * np.pi / n_angular)[:, None], (n_radial, n_angular))

    return points.reshape(-1, 2), weights.ravel()


def check_interior_estimate(v: HarmonicField, probes, d: float, beta_order: DerivativeOrder,
                            n_radial: int = 32, n_angular: int = 128) -> float:
    """
    max over the probes x of ||D^beta v||_{L^inf(B(x, d/2))} d^(2 + |beta|) / ||v||_{L1(B(x, d))}.

    Every probe ball B(x, d) must lie inside the region of v
    """
    _check_order(beta_order)
    if not d > 0:
        raise ValueError(f"Probe radius must be positive, got {d}")

    probes = as_points(probes).reshape(-1, 2)
    theta = quadrature_nodes(n_angular)
    unit_circle = np.stack((np.cos(theta), np.sin(theta)), axis=-1)

    ratios = []
    for x in probes:
        ball_points, weights = _ball_quadrature(x, d, n_radial, n_angular)
        rim = x + d * unit_circle

        if not (np.all(v.contains(ball_points)) and np.all(v.contains(rim))):
            raise PotentialDomainError(f"Probe ball B(({x[0]:.4g}, {x[1]:.4g}), {d:.4g}) is not contained in the "
                                       f"domain of the field!")

        l1 = float(np.sum(np.abs(v.value(ball_points)) * weights))

        # centre plus concentric circles up to radius d/2
        rings = x + (d / 2) * np.linspace(0, 1, n_radial + 1)[1:, None, None] * unit_circle[None]
        half_ball = np.concatenate((x[None], rings.reshape(-1, 2)))

        derivative = np.asarray(v.evaluate(half_ball, beta_order)).reshape(len(half_ball), -1)
        sup = float(np.max(np.linalg.norm(derivative, axis=-1)))

        ratios.append(0.0 if l1 == 0 else sup * d ** (2 + beta_order) / l1)

    return max(ratios)


class DatumNorms(NamedTuple):
    g_sup: float
    g_hold: float
    gp_sup: float
    gp_hold: float


def datum_norms(dom: HoledDomain, data: NeumannData, alpha: float, n_samples: int = 512,
                max_pairs: int = EXHAUSTIVE_PAIRS) -> DatumNorms:
    """
    ||g||_inf, [g]_{0,alpha}, ||g'||_inf, [g']_{0,alpha} of the Neumann data seen as a function on the boundary of E,
    g' being the derivative with respect to arc length. Hölder quotients pair samples on the same circle and on
    different circles
    """
    points, values, arc_derivatives, segments = [], [], [], []
    start = 0

    for (center, radius), component in zip(dom.circles(), data.components):
        resampled = component.resample(max(n_samples, component.N))
        tau = resampled.nodes

        points.append(center + radius * np.stack((np.cos(tau), np.sin(tau)), axis=-1))
        values.append(resampled.samples)
        arc_derivatives.append(tangential_derivative(resampled).samples / radius)

        segments.append((start, start + len(tau)))
        start += len(tau)

    points = np.concatenate(points)
    values = np.concatenate(values)
    arc_derivatives = np.concatenate(arc_derivatives)

    return DatumNorms(g_sup=float(np.max(np.abs(values))),
                      g_hold=holder_over_segments(points, values, alpha, segments, max_pairs),
                      gp_sup=float(np.max(np.abs(arc_derivatives))),
                      gp_hold=holder_over_segments(points, arc_derivatives, alpha, segments, max_pairs))
