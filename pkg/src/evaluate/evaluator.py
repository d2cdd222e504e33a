from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from src.domain import SolverParams
from src.domain.holed_domain import HoledDomain, validate_geometry, estimate_poincare, constant_B
from src.domain.trefftz_solver import solve_neumann_holed
from src.evaluate.abstract_metric import RegularityEstimate, BoundContext
from src.evaluate.regularity_metrics import SampledField, sample_regions, datum_norms, check_l1_bound
from src.exceptions import SolverError
from src.potential.abstract_datum import NeumannFamily
from src.utils import list_dict2dict_list

CSV_COLUMNS = ["n", "d", "r0", "alpha", "C_P", "B",
               "g_sup", "g_hold", "gp_sup", "gp_hold",
               "Du_sup", "Du_hold", "D2u_sup", "D2u_hold",
               "bound1", "bound2", "bound3", "bound4",
               "ratio1", "ratio2", "ratio3", "ratio4",
               "residual", "flags"]

# flags of the final csv row, the one holding the max ratio of every estimate
SUMMARY_FLAG = "summary"

# a ratio at the largest d below this fraction of the one at the smallest d means the estimates degrade as d shrinks
TREND_FACTOR = 0.1

CSV_FLOAT_FORMAT = "%.12g"


@dataclass
class SweepRecord:
    n: int
    d: float
    r0: float
    alpha: float
    C_P: float = math.nan
    B: float = math.nan

    g_sup: float = math.nan
    g_hold: float = math.nan
    gp_sup: float = math.nan
    gp_hold: float = math.nan

    Du_sup: float = math.nan
    Du_hold: float = math.nan
    D2u_sup: float = math.nan
    D2u_hold: float = math.nan

    bound1: float = math.nan
    bound2: float = math.nan
    bound3: float = math.nan
    bound4: float = math.nan

    ratio1: float = math.nan
    ratio2: float = math.nan
    ratio3: float = math.nan
    ratio4: float = math.nan

    residual: float = math.nan
    flags: list[str] = field(default_factory=list)

    # not part of the csv
    family: str = ""
    l1_ratio: float = math.nan

    def to_row(self) -> dict:
        row = {column: getattr(self, column) for column in CSV_COLUMNS}
        row["flags"] = ";".join(self.flags)

        return row

    @property
    def label(self) -> str:
        return f"n={self.n}, d={self.d:.3g}, r0={self.r0:.3g}"


def _evaluate_instance(evaluator: SweepEvaluator, domain: HoledDomain, family: NeumannFamily) -> SweepRecord:
    # module level so that it can be sent to worker processes
    return evaluator.evaluate_instance(domain, family)


class SweepEvaluator:

    def __init__(self,
                 estimates: list[RegularityEstimate],
                 solver_params: SolverParams,
                 alpha: float,
                 n_samples: int = 64,
                 collar_radial: int = 64,
                 collar_angular: int = 256,
                 interior_step: float = 1 / 8,
                 poincare_step: float = 1 / 4,
                 datum_samples: int = 512,
                 max_pairs: int = 2048):

        self.estimates = sorted(estimates, key=lambda estimate: estimate.index)
        self.solver_params = solver_params
        self.alpha = alpha
        self.n_samples = n_samples

        self.collar_radial = collar_radial
        self.collar_angular = collar_angular
        self.interior_step = interior_step
        self.poincare_step = poincare_step
        self.datum_samples = datum_samples
        self.max_pairs = max_pairs

    def sample(self, a, domain: HoledDomain) -> SampledField:
        regions = sample_regions(a, domain,
                                 n_radial=self.collar_radial,
                                 n_angular=self.collar_angular,
                                 interior_step_ratio=self.interior_step)

        return SampledField.union(list(regions.values()), region="E")

    def evaluate_instance(self, domain: HoledDomain, family: NeumannFamily) -> SweepRecord:

        record = SweepRecord(n=domain.n, d=domain.d, r0=domain.r0, alpha=self.alpha, family=str(family))

        report = validate_geometry(domain)
        if not report.passed:
            logger.warning(f"Skipping {domain}: {'; '.join(report.messages)}")
            record.flags.append("invalid_geometry")
            return record

        data = family.build(domain, self.n_samples)

        try:
            a = solve_neumann_holed(domain, data,
                                    M=self.solver_params.M,
                                    nodes_per_circle=self.solver_params.nodes_per_circle,
                                    max_condition=self.solver_params.max_condition)
        except SolverError as e:
            logger.warning(f"Solve failed on {domain}: {e}")
            record.flags.append("solver_failure")
            return record

        record.residual = a.residual
        if a.residual > self.solver_params.residual_tol:
            logger.warning(f"Boundary residual {a.residual:.3e} over tolerance {self.solver_params.residual_tol:.1e} "
                           f"on {domain}")
            record.flags.append("residual_over_tol")

        datum = datum_norms(domain, data, self.alpha, self.datum_samples, self.max_pairs)
        record.g_sup, record.g_hold, record.gp_sup, record.gp_hold = datum

        if self.estimates:
            samples = self.sample(a, domain)
            for estimate in self.estimates:
                setattr(record, estimate.column, estimate.measure(samples, self.alpha, self.max_pairs))

        try:
            record.C_P = estimate_poincare(domain, self.poincare_step * domain.d)
        except SolverError as e:
            logger.warning(f"Poincaré estimate failed on {domain}: {e}")
            record.flags.append("poincare_failure")
            return record

        record.B, degenerate = constant_B(domain, record.C_P)
        if degenerate:
            record.flags.append("degenerate_B")
        else:
            record.l1_ratio = check_l1_bound(domain, data, a, record.B)

        ctx = BoundContext(d=domain.d, r0=domain.r0, alpha=self.alpha, B=record.B, datum=datum)
        for estimate in self.estimates:
            measured = getattr(record, estimate.column)

            setattr(record, f"bound{estimate.index}", estimate.bound(ctx))
            setattr(record, f"ratio{estimate.index}", estimate.ratio(measured, ctx))

        return record

    def evaluate_suite(self,
                       instances: list[tuple[HoledDomain, NeumannFamily]],
                       output_path: str,
                       threads: int = 1,
                       create_latex_table: bool = True) -> pd.DataFrame:

        print(f"# Starting sweep over {len(instances)} instances\n")

        n_workers = min(threads, len(instances))
        if n_workers <= 1:
            records = [self.evaluate_instance(domain, family)
                       for domain, family in tqdm(instances, desc="Sweep instances")]
        else:
            with multiprocessing.Pool(processes=n_workers) as pool:
                # rows are gathered in instance order, whatever the completion order
                pending = [pool.apply_async(_evaluate_instance, (self, domain, family))
                           for domain, family in instances]
                records = [job.get() for job in tqdm(pending, desc="Sweep instances")]

        res_df = pd.DataFrame(list_dict2dict_list([record.to_row() for record in records]), columns=CSV_COLUMNS)

        summary_row = {column: "" for column in CSV_COLUMNS}
        summary_row["n"] = "max"
        for estimate in self.estimates:
            summary_row[f"ratio{estimate.index}"] = self._nanmax(res_df[f"ratio{estimate.index}"])
        summary_row["flags"] = SUMMARY_FLAG

        summary_row_df = pd.DataFrame([summary_row], columns=CSV_COLUMNS)
        csv_df = pd.concat((res_df, summary_row_df), ignore_index=True)

        output_dir = os.path.dirname(output_path)
        if output_dir:
            os.makedirs(output_dir, exist_ok=True)

        # rows first: float_format skips the object columns of the concatenated frame
        # e.g. reports/sweeps/sweep_exp/sweep.csv
        res_df.to_csv(output_path, index=False, lineterminator="\n", float_format=CSV_FLOAT_FORMAT)
        summary_row_df.to_csv(output_path, mode="a", header=False, index=False, lineterminator="\n",
                              float_format=CSV_FLOAT_FORMAT)
        print(f"# CSV Results saved into {output_path}!")

        summary_df = self.summarize(records)
        summary_path = f"{os.path.splitext(output_path)[0]}_summary.csv"
        summary_df.to_csv(summary_path, lineterminator="\n", float_format=CSV_FLOAT_FORMAT)

        print("Summary of the empirical constants:")
        print(summary_df)
        print(f"# Summary saved into {summary_path}!")

        if create_latex_table is True:
            latex_path = f"{os.path.splitext(output_path)[0]}_latex.tex"
            latex_table = self._create_latex_table(res_df, records, self.estimates, title="Empirical constants")

            with open(latex_path, "w") as f:
                f.write(latex_table)

            print(f"# Latex Results saved into {latex_path}!")

        return csv_df

    @staticmethod
    def _nanmax(values) -> float:
        values = pd.to_numeric(pd.Series(values), errors="coerce").to_numpy(dtype=float)
        return float(np.nanmax(values)) if np.any(np.isfinite(values)) else math.nan

    def summarize(self, records: list[SweepRecord]) -> pd.DataFrame:
        """
        Per estimate: max and min ratio over the sweep, their quotient, the max ratio at the largest and at the
        smallest d / r0, and whether the former keeps above TREND_FACTOR times the latter. The last row reports the
        max L1 bound ratio
        """
        d_ratios = np.array([record.d / record.r0 for record in records])

        summary = {}
        for estimate in self.estimates:
            ratios = np.array([getattr(record, f"ratio{estimate.index}") for record in records], dtype=float)
            finite = np.isfinite(ratios)

            if not np.any(finite):
                summary[str(estimate)] = dict.fromkeys(("max_ratio", "min_ratio", "variation", "largest_d_ratio",
                                                        "smallest_d_ratio", "trend_ok"), math.nan)
                continue

            largest_d = ratios[finite & (d_ratios == np.max(d_ratios[finite]))]
            smallest_d = ratios[finite & (d_ratios == np.min(d_ratios[finite]))]

            max_ratio, min_ratio = float(np.max(ratios[finite])), float(np.min(ratios[finite]))

            summary[str(estimate)] = {
                "max_ratio": max_ratio,
                "min_ratio": min_ratio,
                "variation": max_ratio / min_ratio if min_ratio > 0 else math.inf,
                "largest_d_ratio": float(np.max(largest_d)),
                "smallest_d_ratio": float(np.max(smallest_d)),
                "trend_ok": bool(np.max(largest_d) >= TREND_FACTOR * np.max(smallest_d))
            }

        summary["L1"] = {"max_ratio": self._nanmax([record.l1_ratio for record in records])}

        summary_df = pd.DataFrame.from_dict(summary, orient="index")
        summary_df.index.name = "estimate"

        return summary_df

    @staticmethod
    def _create_latex_table(res_df: pd.DataFrame, records: list[SweepRecord], estimates: list[RegularityEstimate],
                            title: str):

        ratio_columns = [f"ratio{estimate.index}" for estimate in estimates]
        n_estimates = len(ratio_columns)

        instance_res = res_df[ratio_columns].apply(pd.to_numeric, errors="coerce")
        instance_res.index = [record.label for record in records]
        instance_res.columns = [str(estimate) for estimate in estimates]

        mean_worst = instance_res.agg(["mean", "max"])

        # preliminary code for the tex file
        latex_code = r"\documentclass{article}" + "\n"
        latex_code += r"\usepackage{booktabs}" + "\n"
        latex_code += r"\begin{document}" + " \n\n"

        # title start
        latex_code += r"\begin{tabular}{c|" + "c" * n_estimates + "}\n\n"
        latex_code += r"\multicolumn{" + str(n_estimates + 1) + r"}{c}{\textbf{" + title + r"}} \\" + "\n"
        latex_code += r"\noalign{\smallskip}" + "\n"
        latex_code += r"\noalign{\smallskip}" + "\n"
        # title end

        # table start
        latex_code += r"\toprule" + "\n"

        # --column headers start
        latex_code += r"\multicolumn{1}{c}{Instance}" + " & "

        # first is |c
        latex_code += r"\multicolumn{1}{|c}{" + instance_res.columns[0] + "}"

        # all the other column headers are c
        if n_estimates > 1:
            latex_code += " & " + " & ".join(r"\multicolumn{1}{c}{" + estimate_name + "}"
                                             for estimate_name in instance_res.columns[1:])
        latex_code += r" \\" + "\n"
        # --column headers end

        # --start numeric values
        latex_code += r"\midrule" + "\n"

        # set bold for the instance with the largest empirical constant of each estimate
        formatted = instance_res.map(lambda x: "%.3e" % x if np.isfinite(x) else "--")
        for estimate_name in instance_res.columns:
            if instance_res[estimate_name].notna().any():
                worst_idx = np.nanargmax(instance_res[estimate_name].to_numpy())
                formatted.iloc[worst_idx, formatted.columns.get_loc(estimate_name)] = \
                    r"\textbf{" + formatted.iloc[worst_idx][estimate_name] + "}"

        # fill cell values row by row
        for index, row in formatted.iterrows():
            latex_code += f"{index} & " + " & ".join(row) + r" \\" + "\n"

        # --start mean max results
        latex_code += r"\midrule" + "\n"

        mean_worst = mean_worst.map(lambda x: "%.3e" % x if np.isfinite(x) else "--")
        for index, row in mean_worst.iterrows():
            latex_code += f"{index} & " + " & ".join(row) + r" \\" + "\n"

        latex_code += r"\bottomrule" + "\n\n"

        latex_code += r"\end{tabular}" + "\n\n"

        latex_code += r"\end{document}" + "\n"

        return latex_code
