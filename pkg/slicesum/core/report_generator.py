"""Plot-ready CSV reports and text summaries"""

import csv
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from tabulate import tabulate

from ..errors import ArgumentError
from ..models.config import Method
from ..models.result import BenchmarkResult, ErrorReport, ExperimentResult

METHOD_ORDER = [Method.S_L2_H1, Method.F_L2_H1, Method.F_H1_H1, Method.S_L2_L2, Method.F_L2_L2, Method.F_H1_L2,
                Method.DIRECT, Method.ANALYTIC]


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.17g}"


class ReportGenerator:
    """Writes experiment results as CSV tables"""

    @staticmethod
    def _report_path(output_dir: Path, kind: str, name: str) -> Path:
        # organized as <kind>/YYYYMMDD/<kind>_<name>_<timestamp>.csv
        now = datetime.now()
        organized_dir = Path(output_dir) / kind / now.strftime("%Y%m%d")
        organized_dir.mkdir(parents=True, exist_ok=True)
        return organized_dir / f"{kind}_{name}_{now.strftime('%Y%m%d_%H%M%S')}.csv"

    @staticmethod
    def _write(path: Path, header: Sequence[str], rows: List[Sequence[str]]) -> Path:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            writer.writerows(rows)
        return path

    @staticmethod
    def save_forward_error(reports: Dict[str, ErrorReport], output_dir: Path, name: str) -> Path:
        """One column of |S_d[f_a] - F| per labelled report on a shared grid

        Reports may start later on the grid (kernels singular at s = 0); their
        missing leading cells are left empty.
        """
        labels = list(reports)
        if not labels:
            raise ArgumentError("No forward-error curves to write")
        grid = max((reports[label].grid for label in labels), key=len)
        offsets = {}
        for label in labels:
            offset = grid.size - reports[label].grid.size
            if not np.array_equal(reports[label].grid, grid[offset:]):
                raise ArgumentError(f"Report '{label}' is not on the shared forward-error grid")
            offsets[label] = offset

        def cell(label: str, values: np.ndarray, i: int) -> str:
            j = i - offsets[label]
            return _fmt(values[j]) if j >= 0 else ""

        header = ["s"] + labels + [f"variance_{label}" for label in labels]
        rows = []
        for i, s in enumerate(grid):
            row = [_fmt(s)]
            row += [cell(label, reports[label].forward_abs, i) for label in labels]
            row += [cell(label, reports[label].variance, i) for label in labels]
            rows.append(row)
        path = ReportGenerator._report_path(output_dir, "forward_error", name)
        return ReportGenerator._write(path, header, rows)

    @staticmethod
    def save_tau_sweep(results: List[ExperimentResult], output_dir: Path, name: str) -> Path:
        header = ["kernel", "c", "method", "d", "tau", "P", "N", "M", "repetitions", "seed",
                  "mean_error", "std_error", "forward_max"]
        rows = [[r.kernel.name.value, _fmt(r.kernel.c), r.method.value, str(r.d), _fmt(r.tau), str(r.P),
                 str(r.N), str(r.M), str(r.repetitions), str(r.seed), _fmt(r.mean_error),
                 _fmt(r.std_error), _fmt(r.forward_max)] for r in results]
        path = ReportGenerator._report_path(output_dir, "tau_sweep", name)
        return ReportGenerator._write(path, header, rows)

    @staticmethod
    def method_table(results: List[ExperimentResult]) -> Dict[str, Dict[Method, ExperimentResult]]:
        """Results keyed by kernel label, then method"""
        table: Dict[str, Dict[Method, ExperimentResult]] = {}
        for r in results:
            table.setdefault(r.kernel.label, {})[r.method] = r
        return table

    @staticmethod
    def save_method_comparison(results: List[ExperimentResult], output_dir: Path, name: str) -> Path:
        """One row per kernel, one mean/std column pair per method"""
        table = ReportGenerator.method_table(results)
        methods = [m for m in METHOD_ORDER if any(m in row for row in table.values())]
        header = ["kernel", "d", "P", "N", "M", "repetitions", "seed"]
        for method in methods:
            header += [f"{method.value}_mean", f"{method.value}_std"]
        rows = []
        for label, row in table.items():
            first = next(iter(row.values()))
            line = [label, str(first.d), str(first.P), str(first.N), str(first.M),
                    str(first.repetitions), str(first.seed)]
            for method in methods:
                r = row.get(method)
                line += [_fmt(r.mean_error), _fmt(r.std_error)] if r else ["", ""]
            rows.append(line)
        path = ReportGenerator._report_path(output_dir, "method_comparison", name)
        return ReportGenerator._write(path, header, rows)

    @staticmethod
    def save_benchmark(result: BenchmarkResult, output_dir: Path, name: str) -> Path:
        header = ["N", "fastsum_mean", "fastsum_median", "fastsum_p95",
                  "brute_force_mean", "brute_force_median", "brute_force_p95", "rss_mb", "seed"]
        rows = [[str(p.N), _fmt(p.fastsum.mean), _fmt(p.fastsum.median), _fmt(p.fastsum.p95),
                 _fmt(p.brute_force.mean), _fmt(p.brute_force.median), _fmt(p.brute_force.p95),
                 f"{p.rss_mb:.1f}", str(result.seed)] for p in result.points]
        path = ReportGenerator._report_path(output_dir, "benchmark", name)
        return ReportGenerator._write(path, header, rows)

    @staticmethod
    def method_summary_text(results: List[ExperimentResult], title: str) -> str:
        """Human-readable method comparison table"""
        table = ReportGenerator.method_table(results)
        methods = [m for m in METHOD_ORDER if any(m in row for row in table.values())]
        rows = []
        for label, row in table.items():
            rows.append([label] + [f"{row[m].mean_error:.2e}" if m in row else "-" for m in methods])
        lines = ["=" * 60, title, "=" * 60]
        lines.append(tabulate(rows, headers=["Kernel"] + [m.value for m in methods], tablefmt="simple"))
        lines.append("=" * 60)
        return "\n".join(lines)

    @staticmethod
    def sweep_summary_text(results: List[ExperimentResult], title: str) -> str:
        rows = [[r.kernel.label, r.method.value, f"{r.tau:.0e}", f"{r.mean_error:.3e}", f"{r.std_error:.1e}"]
                for r in results]
        lines = ["=" * 60, title, "=" * 60]
        lines.append(tabulate(rows, headers=["Kernel", "Method", "tau", "Mean error", "Std"], tablefmt="simple"))
        lines.append("=" * 60)
        return "\n".join(lines)

    @staticmethod
    def forward_summary_text(reports: Dict[str, ErrorReport], title: str) -> str:
        rows = [[label, f"{r.forward_max:.3e}", f"{r.forward_l2:.3e}", f"{r.variance.max():.3e}"]
                for label, r in reports.items()]
        lines = ["=" * 60, title, "=" * 60]
        lines.append(tabulate(rows, headers=["Fit", "Forward max", "Forward L2", "Max variance"],
                              tablefmt="simple"))
        lines.append("=" * 60)
        return "\n".join(lines)

    @staticmethod
    def benchmark_summary_text(result: BenchmarkResult) -> str:
        rows = [[p.N, f"{p.fastsum.median:.4f}", f"{p.brute_force.median:.4f}", f"{p.rss_mb:.0f}"]
                for p in result.points]
        lines = ["=" * 60,
                 f"Benchmark: d={result.d} K={result.K} P={result.P} "
                 f"({'accelerated' if result.accelerated else 'direct'}, {result.workers} workers)",
                 "=" * 60,
                 tabulate(rows, headers=["N = M", "Sliced [s]", "Brute force [s]", "RSS [MB]"], tablefmt="simple"),
                 ""]
        if result.fastsum_growth:
            lines.append("Growth per step:")
            lines.append("  Sliced: " + ", ".join(f"{g:.2f}x" for g in result.fastsum_growth))
            lines.append("  Brute force: " + ", ".join(f"{g:.2f}x" for g in result.brute_force_growth))
        crossover = result.crossover_n
        lines.append(f"Crossover N*: {crossover:.0f}" if crossover is not None else "Crossover N*: not reached")
        lines.append("=" * 60)
        return "\n".join(lines)
