from __future__ import annotations

import numpy as np
import pandas as pd
from loguru import logger

from src.domain.abstract_family import GeometryFamily
from src.domain.holed_domain import HoledDomain, validate_geometry
from src.domain.trefftz_solver import solve_neumann_holed, EVAL_MARGIN
from src.exceptions import ConfigError
from src.harness.abstract_experiment import LabExperiment, ExperimentReport
from src.potential.abstract_datum import NeumannFamily
from src.utils import make_rng, PrintWithSpin

PROBE_COLUMNS = ["x1", "x2", "value", "grad_x1", "grad_x2", "hess_11", "hess_12", "hess_22"]


def random_probes(rng: np.random.Generator, domain: HoledDomain, n_probes: int) -> np.ndarray:
    # rejection sampling from the bounding square of the outer disk, keeping d/8 from the boundary
    probes = np.empty((0, 2))

    while len(probes) < n_probes:
        candidates = domain.center + rng.uniform(-domain.r0, domain.r0, size=(4 * n_probes, 2))
        probes = np.concatenate((probes, candidates[domain.contains(candidates, margin=domain.d / 8)]))

    return probes[:n_probes]


class Solve(LabExperiment):
    """
    One-off Neumann solve on a single holed domain, reporting value, gradient and Hessian at probe points
    """

    command = "solve"

    def run(self, output_path: str) -> ExperimentReport:
        solve_params = self.config.harness.solve
        solver_params = self.config.solver

        [domain, *_] = GeometryFamily.from_config(solve_params.geometry).domains()

        report = validate_geometry(domain)
        if not report.passed:
            raise ConfigError(f"Invalid geometry {domain}: {'; '.join(report.messages)}")

        family = NeumannFamily.from_config(solve_params.datum)
        data = family.build(domain, self.config.data.n_samples)

        print(f"Domain: {domain}")
        print(f"Datum: {family}")

        with PrintWithSpin("Solving the collocation system"):
            a = solve_neumann_holed(domain, data,
                                    M=solver_params.M,
                                    nodes_per_circle=solver_params.nodes_per_circle,
                                    max_condition=solver_params.max_condition)

        if solve_params.probes is not None:
            probes = np.asarray(solve_params.probes, dtype=float).reshape(-1, 2)

            if not np.all(domain.contains(probes, margin=EVAL_MARGIN)):
                raise ConfigError(f"Every probe point should lie inside {domain}")
        else:
            probes = random_probes(make_rng(self.config.general.seed), domain, solve_params.n_probes)

        value, gradient, hessian = a.value(probes), a.gradient(probes), a.hessian(probes)

        table = pd.DataFrame(np.column_stack((probes, value, gradient,
                                              hessian[:, 0, 0], hessian[:, 0, 1], hessian[:, 1, 1])),
                             columns=PROBE_COLUMNS)

        area_average = a.area_average()

        print(f"Boundary residual: {a.residual:.3e}")
        print(f"Condition number of the normal equations: {a.condition:.3e}")
        print(f"Area average of the solution: {area_average:.3e}")
        print(table.to_string(index=False))

        self.write_table(table, output_path)

        breaches = []
        if a.residual > solver_params.residual_tol:
            breaches.append(f"Boundary residual {a.residual:.3e} > {solver_params.residual_tol:.1e}")
            logger.warning(breaches[-1])

        return ExperimentReport(self.command, table, breaches)
