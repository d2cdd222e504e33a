from __future__ import annotations

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from src.harness.abstract_experiment import LabExperiment, ExperimentReport
from src.potential.boundary_data import PeriodicFunction
from src.potential.disk_solvers import (eval_dirichlet, eval_neumann, grad_dirichlet, grad_neumann,
                                        grad_dirichlet_direct, rotation_identity_residual)
from src.utils import make_rng, list_dict2dict_list

RELATION_COLUMNS = ["datum", "dirichlet_relative_error", "neumann_relative_error", "direct_kernel_error",
                    "rotation_residual"]


def central_gradient(fn, points: np.ndarray, h: float) -> np.ndarray:
    # second order central differences of a scalar function of cartesian points
    steps = h * np.eye(2)
    return np.stack([(fn(points + step) - fn(points - step)) / (2 * h) for step in steps], axis=-1)


def _relative_error(approx: np.ndarray, reference: np.ndarray, scale: float) -> float:
    error = np.max(np.linalg.norm(approx - reference, axis=-1))
    return float(error / max(np.max(np.linalg.norm(reference, axis=-1)), scale))


def _polar(points: np.ndarray):
    return np.linalg.norm(points, axis=-1), np.arctan2(points[..., 1], points[..., 0])


class VerifyRelation(LabExperiment):
    """
    Checks the gradient formulas of the Dirichlet and Neumann problems on the unit disk against finite differences of
    the solutions, and the rotation identity Du = i D omega, for every datum of the data section
    """

    command = "verify-relation"

    def relation_residuals(self, g: PeriodicFunction, points: np.ndarray) -> dict:
        fd_step = self.config.harness.relation.fd_step
        r, phi = _polar(points)

        def dirichlet(x):
            return eval_dirichlet(g, *_polar(x))

        g_zero_mean = g.with_mean_removed()

        def neumann(x):
            return eval_neumann(g_zero_mean, x)

        du = grad_dirichlet(g, r, phi)
        dw = grad_neumann(g_zero_mean, r, phi)

        return {
            "dirichlet_relative_error": _relative_error(du, central_gradient(dirichlet, points, fd_step),
                                                        g.sup_norm),
            "neumann_relative_error": _relative_error(dw, central_gradient(neumann, points, fd_step),
                                                      g_zero_mean.sup_norm),
            "direct_kernel_error": _relative_error(grad_dirichlet_direct(g, r, phi), du, g.sup_norm),
            "rotation_residual": rotation_identity_residual(g, np.stack((r, phi), axis=-1)),
        }

    def run(self, output_path: str) -> ExperimentReport:
        relation_params = self.config.harness.relation
        tolerance = self.config.general.tolerance

        rng = make_rng(self.config.general.seed)
        all_data = self.config.data.boundary_data(rng)

        rows, breaches = [], []
        for name, g in tqdm(all_data.items(), desc="Relation formulas", disable=len(all_data) == 0):

            r = rng.uniform(relation_params.r_min, relation_params.r_max, relation_params.n_points)
            phi = rng.uniform(0, 2 * np.pi, relation_params.n_points)
            points = np.stack((r * np.cos(phi), r * np.sin(phi)), axis=-1)

            residuals = self.relation_residuals(g, points)
            rows.append({"datum": name, **residuals})

            for check_name, residual in residuals.items():
                if not residual <= tolerance:
                    breaches.append(f"{name}: {check_name} = {residual:.3e} > {tolerance:.1e}")

        table = pd.DataFrame(list_dict2dict_list(rows), columns=RELATION_COLUMNS)

        print(table.to_string(index=False) if len(table) > 0 else "No boundary data to check")
        self.write_table(table, output_path)

        for breach in breaches:
            logger.warning(breach)

        return ExperimentReport(self.command, table, breaches)
