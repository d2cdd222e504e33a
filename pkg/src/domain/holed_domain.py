"""
Geometry of E = B(z0, r0) minus the closed disks B(z_k, r_k), with the separation hypotheses on d:

    r_k >= d                                     every hole is at least d wide
    B(z_k, r_k + d) inside B(z0, r0)             every hole is at least d away from the outer circle
    dist(B(z_i, r_i), B(z_j, r_j)) >= 2d         holes are at least 2d apart
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from loguru import logger
from scipy.sparse import coo_matrix, diags, identity
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import LinearOperator, eigsh, splu

from src.exceptions import SolverError, QuadratureResolutionError
from src.utils import as_points, make_rng

# relative slack allowed when checking the separation hypotheses
GEOMETRY_TOL = 1e-12

# seed of the Lanczos start vector, fixed so that C_P is the same on every run
LANCZOS_SEED = 0


@dataclass(frozen=True)
class Hole:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

        if not self.radius > 0:
            raise ValueError(f"Hole radius must be positive, got {self.radius}")


@dataclass
class GeometryReport:
    radii_ok: bool
    containment_ok: bool
    separation_ok: bool
    d: float
    d_max: float
    messages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.radii_ok and self.containment_ok and self.separation_ok and self.d > 0


@dataclass
class HoledDomain:
    z0: tuple[float, float]
    r0: float
    holes: list[Hole] = field(default_factory=list)

    # separation scale, the largest admissible one when left unspecified
    d: float = None

    def __post_init__(self):
        self.z0 = tuple(float(c) for c in self.z0)
        self.holes = [hole if isinstance(hole, Hole) else Hole(*hole) for hole in self.holes]

        if not self.r0 > 0:
            raise ValueError(f"Outer radius must be positive, got {self.r0}")

        if self.d is None:
            self.d = largest_admissible_d(self)

    @property
    def n(self) -> int:
        return len(self.holes)

    @property
    def center(self) -> np.ndarray:
        return np.array(self.z0)

    @property
    def hole_centers(self) -> np.ndarray:
        return np.array([hole.center for hole in self.holes], dtype=float).reshape(-1, 2)

    @property
    def hole_radii(self) -> np.ndarray:
        return np.array([hole.radius for hole in self.holes], dtype=float)

    @property
    def area(self) -> float:
        return math.pi * (self.r0 ** 2 - np.sum(self.hole_radii ** 2))

    def circles(self) -> list[tuple[np.ndarray, float]]:
        # every boundary component as (center, radius), outer circle first
        return [(self.center, self.r0)] + [(np.array(hole.center), hole.radius) for hole in self.holes]

    def contains(self, points, margin: float = 0.0) -> np.ndarray:
        points = as_points(points)

        inside = np.linalg.norm(points - self.center, axis=-1) < self.r0 - margin
        for hole in self.holes:
            inside &= np.linalg.norm(points - np.array(hole.center), axis=-1) > hole.radius + margin

        return inside

    def scaled(self, factor: float) -> HoledDomain:
        return HoledDomain(tuple(factor * c for c in self.z0), factor * self.r0,
                           [Hole(tuple(factor * c for c in hole.center), factor * hole.radius) for hole in self.holes],
                           d=factor * self.d)

    def area_grid(self, step: float, margin: float = 0.0) -> tuple[np.ndarray, float]:
        """
        Centres of the cells of a uniform cartesian grid (aligned to the outer circle) that fall inside E,
        together with the area of one cell
        """
        n_cells = math.ceil(2 * self.r0 / step)
        offsets = -self.r0 + (np.arange(n_cells) + 0.5) * step

        x1, x2 = np.meshgrid(self.z0[0] + offsets, self.z0[1] + offsets, indexing="ij")
        points = np.stack((x1, x2), axis=-1).reshape(-1, 2)

        return points[self.contains(points, margin=margin)], step ** 2

    def __str__(self):
        holes = ", ".join(f"B(({h.center[0]:.3g}, {h.center[1]:.3g}), {h.radius:.3g})" for h in self.holes)
        return f"E(z0=({self.z0[0]:.3g}, {self.z0[1]:.3g}), r0={self.r0:.3g}, holes=[{holes}], d={self.d:.3g})"


def _separation_bounds(dom: HoledDomain) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # upper bounds on d coming from each of the three hypotheses
    radii = dom.hole_radii
    centers = dom.hole_centers

    radius_bounds = radii
    containment_bounds = dom.r0 - np.linalg.norm(centers - dom.center, axis=-1) - radii

    gap_bounds = []
    for i in range(dom.n):
        for j in range(i + 1, dom.n):
            gap = np.linalg.norm(centers[i] - centers[j]) - radii[i] - radii[j]
            gap_bounds.append(gap / 2)

    return radius_bounds, containment_bounds, np.array(gap_bounds)


def largest_admissible_d(dom: HoledDomain) -> float:
    if dom.n == 0:
        # only r0 >= 2d remains
        return dom.r0 / 2

    bounds = np.concatenate(_separation_bounds(dom))
    return float(np.min(bounds))


def validate_geometry(dom: HoledDomain) -> GeometryReport:

    radius_bounds, containment_bounds, gap_bounds = _separation_bounds(dom)
    d = dom.d
    slack = GEOMETRY_TOL * dom.r0

    radii_ok = bool(np.all(radius_bounds >= d - slack))
    containment_ok = bool(np.all(containment_bounds >= d - slack)) and dom.r0 >= 2 * d - slack
    separation_ok = bool(np.all(gap_bounds >= d - slack))

    messages = []
    if not radii_ok:
        messages.append(f"hole radius {np.min(radius_bounds):.4g} is smaller than d = {d:.4g}")
    if not containment_ok:
        messages.append(f"a hole is closer than d = {d:.4g} to the outer circle")
    if not separation_ok:
        messages.append(f"two holes are closer than 2d = {2 * d:.4g}")
    if not d > 0:
        messages.append(f"d must be positive, got {d:.4g}")

    return GeometryReport(radii_ok, containment_ok, separation_ok, d, largest_admissible_d(dom), messages)


def neumann_grid_laplacian(dom: HoledDomain, grid_h: float):
    """
    Five point Laplacian with natural (Neumann) boundary conditions on the grid cells whose centre lies in E:
    links to cells outside E are simply dropped

    Returns:
        the positive semi-definite sparse matrix scaled by 1 / grid_h^2 and the cell centres

    """
    n_cells = math.ceil(2 * dom.r0 / grid_h)
    offsets = -dom.r0 + (np.arange(n_cells) + 0.5) * grid_h

    x1, x2 = np.meshgrid(dom.z0[0] + offsets, dom.z0[1] + offsets, indexing="ij")
    mask = dom.contains(np.stack((x1, x2), axis=-1))

    index = np.full(mask.shape, -1)
    index[mask] = np.arange(np.count_nonzero(mask))

    rows, cols = [], []
    for shift in ((1, 0), (0, 1)):
        here = index[:n_cells - shift[0], :n_cells - shift[1]]
        there = index[shift[0]:, shift[1]:]

        linked = (here >= 0) & (there >= 0)
        rows.append(here[linked])
        cols.append(there[linked])

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    n_nodes = np.count_nonzero(mask)

    adjacency = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_nodes, n_nodes))
    adjacency = (adjacency + adjacency.T).tocsc()

    degree = np.asarray(adjacency.sum(axis=1)).ravel()
    laplacian = (diags(degree) - adjacency) / grid_h ** 2

    centres = np.stack((x1[mask], x2[mask]), axis=-1)

    return laplacian.tocsc(), centres


def estimate_poincare(dom: HoledDomain, grid_h: float) -> float:
    """
    1 / sqrt(lambda_1), lambda_1 being the smallest nonzero eigenvalue of the masked grid Neumann Laplacian.

    The eigenvalue is found by shift-invert Lanczos around a negative shift, so that the constant mode (eigenvalue 0)
    and lambda_1 are the two nearest eigenvalues

    """
    if grid_h > dom.d / 4:
        raise QuadratureResolutionError(f"Grid step {grid_h:.4g} cannot resolve gaps of size d = {dom.d:.4g}, "
                                        f"it should be <= d/4")

    laplacian, centres = neumann_grid_laplacian(dom, grid_h)

    if laplacian.shape[0] < 3:
        raise SolverError("Masked grid has too few cells for an eigenvalue estimate!")

    n_components, _ = connected_components(laplacian, directed=False)
    if n_components != 1:
        raise SolverError(f"Masked grid of step {grid_h:.4g} splits E into {n_components} components!")

    # shift relative to the spectrum scale of the first nonzero eigenvalue
    sigma = -0.01 / dom.r0 ** 2

    try:
        lu = splu(laplacian - sigma * identity(laplacian.shape[0], format="csc"))
        op_inv = LinearOperator(matvec=lu.solve, shape=laplacian.shape, dtype=laplacian.dtype)

        v0 = make_rng(LANCZOS_SEED).standard_normal(laplacian.shape[0])
        eigenvalues = eigsh(laplacian, k=2, sigma=sigma, OPinv=op_inv, v0=v0, return_eigenvectors=False)
    except (RuntimeError, ValueError) as e:
        raise SolverError(f"Eigenvalue solve failed: {e}") from None

    lambda_1 = float(np.max(eigenvalues))
    logger.debug(f"First nonzero Neumann eigenvalue {lambda_1:.6g} on {laplacian.shape[0]} grid cells")

    return 1 / math.sqrt(lambda_1)


class ConstantB(NamedTuple):
    value: float
    degenerate: bool


def constant_B(dom: HoledDomain, C_P: float) -> ConstantB:
    """
    B(E) = |E|^(1/2) C_P (d^(-1/2) C_P + d^(1/2)) n^(1/2) r0^(1/2), degenerate (and 0) when E has no holes
    """
    if not C_P > 0:
        raise ValueError(f"Poincare constant must be positive, got {C_P}")

    if dom.n == 0:
        logger.warning("B(E) vanishes for a domain without holes, bounds keep only their d-power terms")
        return ConstantB(0.0, True)

    value = math.sqrt(dom.area) * C_P * (C_P / math.sqrt(dom.d) + math.sqrt(dom.d)) * math.sqrt(dom.n * dom.r0)

    return ConstantB(value, False)

