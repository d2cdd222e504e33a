from __future__ import annotations

import math

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from src.domain.holed_domain import HoledDomain
from src.domain.trefftz_solver import HarmonicAnsatz
from src.evaluate.regularity_metrics import (SampledField, TraceTestField, check_interior_estimate,
                                           check_trace_inequality, sup_norm)
from src.harness.abstract_experiment import LabExperiment, ExperimentReport
from src.potential.boundary_data import (PeriodicFunction, holder_seminorm_circle, random_trig_poly,
                                         tangential_derivative)
from src.potential.disk_solvers import DiskField
from src.potential.greens_annulus import (GreensContext, corrector_laplacian, log_reflection_residual,
                                          neumann_boundary_mismatch, neumann_representation, single_layer,
                                          single_layer_radial_derivative)
from src.potential.kernels import poisson_mass, conjugate_mass
from src.utils import make_rng

IDENTITY_COLUMNS = ["check", "parameter", "value", "threshold", "passed"]

# reference field of the representation check: Re(0.3 z + 0.5i z^2 - 0.1 z^3) / R
REPRESENTATION_COEFFS = (0.3, 0.5j, -0.1)

# polar grid of the disk Hölder ratio checks
DISK_RADIAL = 32
DISK_ANGULAR = 128

# upper bounds of the interior estimate for harmonic fields, from the mean value property on balls of radius
# d/2 (values) and d/4 (gradients) inside B(x, d)
INTERIOR_BOUNDS = {0: 4 / math.pi, 1: 128 / math.pi}
# largest quotient of the value ratios across the ball radii
INTERIOR_VARIATION = 2.0


def _random_annulus_points(rng: np.random.Generator, n_points: int, inner: float, outer: float) -> np.ndarray:
    r = rng.uniform(inner, outer, n_points)
    theta = rng.uniform(0, 2 * np.pi, n_points)

    return np.stack((r * np.cos(theta), r * np.sin(theta)), axis=-1)


def _reference_field(R: float) -> HarmonicAnsatz:
    # a harmonic polynomial, defined on a disk containing every annulus and ball of the checks
    domain = HoledDomain((0.0, 0.0), 10 * R, [])
    interior = np.array(REPRESENTATION_COEFFS) / np.array([R, R ** 2, R ** 3])

    return HarmonicAnsatz.from_unscaled(domain, interior)


def _polar_grid(inner: float, outer: float) -> np.ndarray:
    r = np.linspace(inner, outer, DISK_RADIAL)
    theta = 2 * np.pi * np.arange(DISK_ANGULAR) / DISK_ANGULAR

    return (r[:, None, None] * np.stack((np.cos(theta), np.sin(theta)), axis=-1)[None]).reshape(-1, 2)


class IdentitySuite(LabExperiment):
    """
    Kernel normalizations, identities of the Neumann Green's function of a disk of radius R, Green's representation
    on both sides of the circle, the single layer trace, the interior estimate of harmonic fields, the trace
    inequality on random test fields and the disk Hölder ratios of the boundary data
    """

    command = "identities"

    def __init__(self, config):
        super().__init__(config)

        self.params = config.harness.identities
        self.rows = []

    def _record(self, check_name: str, parameter: str, value: float, upper: bool = True):
        # checks without an upper threshold only need a finite value
        threshold = self.params.threshold(check_name) if upper else math.nan
        passed = bool(value <= threshold) if upper else bool(np.isfinite(value))

        self.rows.append({"check": check_name, "parameter": parameter, "value": value,
                          "threshold": threshold, "passed": passed})

    def kernel_checks(self):
        n_nodes = self.params.kernel_nodes

        for r in self.params.kernel_radii:
            self._record("poisson_mass", f"r={r}", abs(poisson_mass(r, n_nodes) - math.copysign(1, 1 - r)))
            self._record("conjugate_mass", f"r={r}", abs(conjugate_mass(r, n_nodes)))

    def greens_checks(self, rng: np.random.Generator, R: float):
        ctx = GreensContext(R)
        parameter = f"R={R}"

        x = _random_annulus_points(rng, self.params.n_point_pairs, 0.1 * R, 3 * R)
        y = _random_annulus_points(rng, self.params.n_point_pairs, 0.1 * R, 3 * R)
        self._record("log_reflection", parameter, log_reflection_residual(ctx, x, y))

        exterior = _random_annulus_points(rng, self.params.n_boundary_points, 1.1 * R, 3 * R)
        self._record("boundary_mismatch", parameter,
                     neumann_boundary_mismatch(ctx, exterior, self.params.boundary_nodes))

        # discrete Laplacian of the corrector away from the image point, at steps h and h/2
        source, target = np.array([2.0 * R, 0.0]), np.array([-0.3 * R, 0.4 * R])
        h = self.params.laplacian_step * R
        errors = [abs(-float(corrector_laplacian(ctx, source, target, step)) * np.pi * R ** 2 - 1)
                  for step in (h, h / 2)]

        self._record("source_constant", parameter, errors[1])
        # second order convergence: halving h divides the error by 4 (unless both are at roundoff level)
        order = math.log2(errors[0] / errors[1]) if errors[1] > 0 else math.inf
        self.rows.append({"check": "laplacian_order", "parameter": parameter, "value": order, "threshold": 1.5,
                          "passed": bool(order >= 1.5 or errors[0] < 1e-10)})

    def representation_checks(self, rng: np.random.Generator, R: float):
        ctx = GreensContext(R)
        width = self.params.representation_width * R

        field = _reference_field(R)

        for side, sign in (("exterior", 1), ("interior", -1)):
            radii = R + sign * rng.uniform(0.1, 0.9, 5) * width / 3
            theta = rng.uniform(0, 2 * np.pi, 5)
            x = np.stack((radii * np.cos(theta), radii * np.sin(theta)), axis=-1)

            represented = neumann_representation(ctx, field, x, width, side=side)
            exact = field.value(x)

            self._record("representation", f"R={R}, {side}",
                         float(np.max(np.abs(represented - exact)) / max(np.max(np.abs(exact)), 1e-300)))

    def interior_checks(self, rng: np.random.Generator, R: float):
        field = _reference_field(R)
        centres = _random_annulus_points(rng, self.params.n_interior_balls, 0.0, 2 * R)
        value_ratios = []

        for order, bound in INTERIOR_BOUNDS.items():
            for d in self.params.interior_radii:
                ratio = check_interior_estimate(field, centres, d * R, beta_order=order)

                self.rows.append({"check": f"interior_estimate_{order}", "parameter": f"R={R}, d={d * R:g}",
                                  "value": ratio, "threshold": bound, "passed": bool(ratio <= bound)})

                if order == 0:
                    value_ratios.append(ratio)

        variation = max(value_ratios) / min(value_ratios)
        self.rows.append({"check": "interior_variation", "parameter": f"R={R}", "value": variation,
                          "threshold": INTERIOR_VARIATION, "passed": bool(variation <= INTERIOR_VARIATION)})

    def single_layer_checks(self, rng: np.random.Generator, R: float):
        ctx = GreensContext(R)
        g = random_trig_poly(rng, degree=4, N=64, zero_mean=True)

        theta = g.nodes
        offsets = self.params.single_layer_offsets

        # -d/dr of the single layer tends to g from outside, linearly in the offset: extrapolate to the circle
        traces = []
        for offset in offsets:
            x = (1 + offset) * R * np.stack((np.cos(theta), np.sin(theta)), axis=-1)
            traces.append(-single_layer_radial_derivative(ctx, g, x))

        ratio = offsets[0] / offsets[1]
        extrapolated = (ratio * traces[1] - traces[0]) / (ratio - 1)

        self._record("single_layer_trace", f"R={R}",
                     float(np.max(np.abs(extrapolated - g.samples)) / g.sup_norm))

        # the single layer itself stays bounded at the circle
        values = single_layer(ctx, g, (1 + offsets[1]) * R * np.stack((np.cos(theta), np.sin(theta)), axis=-1))
        self._record("single_layer_bounded", f"R={R}", float(np.max(np.abs(values))), upper=False)

    def trace_checks(self, rng: np.random.Generator):
        fields = [TraceTestField.random(rng) for _ in range(self.params.trace_fields)]

        for rho1, rho2 in self.params.trace_annuli:
            worst = 0.0
            all_hold = True

            for phi in fields:
                for boundary in ("inner", "outer"):
                    check = check_trace_inequality(rho1, rho2, phi, boundary=boundary)

                    all_hold &= check.holds
                    worst = max(worst, check.lhs / check.rhs if check.rhs > 0 else 0.0)

            self.rows.append({"check": "trace_inequality", "parameter": f"rho1={rho1}, rho2={rho2}",
                              "value": worst, "threshold": 1.0, "passed": bool(all_hold)})

    def disk_holder_checks(self, all_data: dict[str, PeriodicFunction]):
        alpha = self.config.general.alpha

        for name, g in all_data.items():
            g_zero_mean = g.with_mean_removed()
            g_prime = tangential_derivative(g)

            # ||Dw||_inf <= C (||g||_inf + [g]_alpha) inside the disk
            neumann = SampledField.from_field(DiskField("neumann_zero_avg", g_zero_mean),
                                              _polar_grid(0.05, 0.9), "disk", 0.85 / DISK_RADIAL, max_order=1)
            datum_norm = g_zero_mean.sup_norm + holder_seminorm_circle(g_zero_mean, alpha)
            self._record("disk_neumann_ratio", name, self._safe_ratio(sup_norm(neumann, 1), datum_norm),
                         upper=False)

            # the same for omega outside the disk, whose Neumann datum is g'
            omega = SampledField.from_field(DiskField("neumann_of_derivative", g, side="exterior"),
                                            _polar_grid(1.1, 2.0), "disk exterior", 0.9 / DISK_RADIAL, max_order=1)
            datum_norm = g_prime.sup_norm + holder_seminorm_circle(g_prime, alpha)
            self._record("exterior_omega_ratio", name, self._safe_ratio(sup_norm(omega, 1), datum_norm),
                         upper=False)

    @staticmethod
    def _safe_ratio(num: float, den: float) -> float:
        return num / den if den != 0 else 0.0

    def run(self, output_path: str) -> ExperimentReport:
        rng = make_rng(self.config.general.seed)
        self.rows = []

        self.kernel_checks()

        for R in tqdm(self.params.radii, desc="Green's function identities"):
            self.greens_checks(rng, R)
            self.representation_checks(rng, R)
            self.interior_checks(rng, R)
            self.single_layer_checks(rng, R)

        self.trace_checks(rng)
        self.disk_holder_checks(self.config.data.boundary_data(rng))

        table = pd.DataFrame(self.rows, columns=IDENTITY_COLUMNS)

        worst = table.groupby("check", sort=False).agg(worst=("value", "max"), all_passed=("passed", "all"))
        print(worst.to_string())
        self.write_table(table, output_path)

        breaches = [f"{row['check']} ({row['parameter']}): {row['value']:.3e} > {row['threshold']:.1e}"
                    for _, row in table.iterrows() if not row["passed"]]

        for breach in breaches:
            logger.warning(breach)

        return ExperimentReport(self.command, table, breaches)
