from __future__ import annotations

from src import SWEEPS_DIR
from src.evaluate.evaluator import SweepEvaluator, SUMMARY_FLAG
from src.harness.abstract_experiment import LabExperiment, ExperimentReport
from src.utils import PrintWithSpin


def build_evaluator(config, estimates=None) -> SweepEvaluator:
    general, metrics = config.general, config.metrics

    return SweepEvaluator(metrics.instantiate_estimates() if estimates is None else estimates,
                          config.solver,
                          alpha=general.alpha,
                          n_samples=config.data.n_samples,
                          collar_radial=metrics.collar_radial,
                          collar_angular=metrics.collar_angular,
                          interior_step=metrics.interior_step,
                          poincare_step=metrics.poincare_step,
                          datum_samples=metrics.datum_samples,
                          max_pairs=metrics.max_pairs)


class Sweep(LabExperiment):
    """
    Solves the Neumann problem for every (geometry, datum family) pair of the configuration and tabulates the
    measured norms of Du and D^2u over E against the right-hand sides of the regularity estimates
    """

    command = "sweep"
    reports_dir = SWEEPS_DIR

    def run(self, output_path: str) -> ExperimentReport:
        general, metrics = self.config.general, self.config.metrics

        with PrintWithSpin("Building geometries"):
            domains = self.config.geometry.domains()

        # geometry first, then datum family, both in config order
        instances = [(domain, family) for domain in domains for family in self.config.data.families()]

        evaluator = build_evaluator(self.config)

        table = evaluator.evaluate_suite(instances, output_path,
                                         threads=general.threads,
                                         create_latex_table=metrics.create_latex_table)

        # flagged rows are reported, never turned into failures
        n_flagged = int(((table["flags"] != "") & (table["flags"] != SUMMARY_FLAG)).sum())
        print(f"{n_flagged} of {len(instances)} instances flagged")

        return ExperimentReport(self.command, table)
