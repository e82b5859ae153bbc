"""Command-line application"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import orjson
from pydantic import ValidationError
from rich.panel import Panel
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from .. import __version__
from ..core.benchmark_engine import BenchmarkEngine
from ..core.coefficient_store import load_coefficients, save_coefficients
from ..core.experiment_engine import ExperimentEngine
from ..core.fastsum import brute_force_sum, normalize_data, sample_directions, sliced_sum
from ..core.kernels import kernel_function
from ..core.metrics import default_grid, forward_error, relative_l2
from ..core.recover import fit_kernel
from ..core.report_generator import ReportGenerator
from ..errors import ArgumentError, SlicesumError
from ..models.config import (
    BenchConfig,
    DirectionMode,
    FitConfig,
    Method,
    ReportConfig,
    ReportKind,
    SumConfig,
)
from ..models.kernel import KernelName, KernelSpec
from ..models.numerics import PointCloud
from ..models.result import ErrorReport, SumResult
from ..utils.console import console, err_console, setup_logging
from ..utils.csvio import read_matrix, read_vector, write_matrix
from ..utils.threads import resolve_workers

logger = logging.getLogger(__name__)

FIT_CHOICES = ["s-l2-h1", "f-l2-h1", "f-h1-h1", "s-l2-l2", "f-l2-l2", "f-h1-l2", "direct", "analytic"]


def parse_kernels(text: str) -> List[KernelSpec]:
    """'gauss:1,imq:1,bump:3' -> kernel specs (c defaults to 1)"""
    kernels = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, _, c = item.partition(":")
        kernels.append(KernelSpec(name=KernelName(name.lower()), c=float(c) if c else 1.0))
    if not kernels:
        raise ArgumentError("No kernels given")
    return kernels


def parse_floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def parse_ints(text: str) -> List[int]:
    return [int(float(x)) for x in text.split(",") if x.strip()]


def forward_grid(kernel: KernelSpec, scale: float = 1.0) -> np.ndarray:
    """1001-point grid, without s = 0 when F is singular there"""
    grid = default_grid()
    if not np.isfinite(kernel_function(kernel, scale)(0.0)):
        grid = grid[1:]
    return grid


def _progress() -> Progress:
    return Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
    )


def cmd_fit(args: argparse.Namespace) -> int:
    """Fit coefficients for a catalog kernel and write the coefficient file"""
    kernel = KernelSpec(name=KernelName(args.kernel.lower()), c=args.c)
    method = Method.parse(args.method)
    overrides = dict(K=args.K, J=args.J, L=args.L)
    if method.is_fit:
        cfg = FitConfig.for_method(method, tau=args.tau, **overrides)
    else:
        if method == Method.DIRECT and not kernel.has_known_f:
            raise ArgumentError(
                f"Kernel '{kernel.name.value}' has no closed-form preimage; direct method is unavailable"
            )
        cfg = FitConfig(**overrides)

    start = time.perf_counter()
    coeffs = fit_kernel(kernel, args.dim, method, cfg, scale=args.scale)
    elapsed = time.perf_counter() - start
    path = save_coefficients(coeffs, Path(args.out))

    report = forward_error(coeffs, kernel_function(kernel, args.scale), grid=forward_grid(kernel, args.scale),
                           with_variance=False)
    table = Table(title=f"{kernel.label}, d={args.dim}, {coeffs.meta.method.value}")
    table.add_column("Quantity")
    table.add_column("Value", justify="right")
    table.add_row("K", str(coeffs.K))
    table.add_row("tau", f"{coeffs.meta.tau:g}")
    table.add_row("scale", f"{coeffs.scale:g}")
    table.add_row("fit time", f"{elapsed:.2f}s")
    table.add_row("forward_max", f"{report.forward_max:.3e}")
    table.add_row("||f_a|| L2", f"{coeffs.l2_norm():.3e}")
    table.add_row("||f_a|| H1", f"{coeffs.h1_norm():.3e}")
    console.print(table)
    console.print(f"forward_max={report.forward_max:.6e}")
    console.print(f"[green]✓[/green] Coefficients saved to {path}")
    return 0


def _load_cloud(args: argparse.Namespace, d: int, scale: float, normalize: bool) -> PointCloud:
    X = read_matrix(Path(args.x), columns=d)
    Y = read_matrix(Path(args.y), columns=d)
    w = read_vector(Path(args.w))
    if w.size != X.shape[0]:
        raise ArgumentError(f"{X.shape[0]} sources but {w.size} weights")
    if normalize:
        pc = normalize_data(X, Y, w)
        return PointCloud(X=pc.X, Y=pc.Y, w=pc.w, scale=scale)
    radius = normalize_data(X, Y, w).scale
    if scale < radius * (1 - 1e-12):
        raise ArgumentError(
            f"Coefficients were fitted for scale {scale:g} but the data radius is {radius:.6g}; "
            f"refit with --scale {radius:.6g} or pass --normalize-data"
        )
    return normalize_data(X, Y, w, scale=scale)


def sum_config(args: argparse.Namespace) -> SumConfig:
    return SumConfig(
        P=args.P,
        mode=args.mode,
        seed=args.seed,
        accelerated=args.accelerated,
        workers=resolve_workers(args.threads),
        oracle=args.oracle,
        normalize_data=args.normalize_data,
    )


def cmd_sum(args: argparse.Namespace) -> int:
    """Sliced kernel sum of CSV data with stored coefficients"""
    cfg = sum_config(args)
    coeffs = load_coefficients(Path(args.coeff))
    pc = _load_cloud(args, coeffs.d, coeffs.scale, cfg.normalize_data)
    directions = sample_directions(coeffs.d, cfg.P, cfg.mode, seed=cfg.seed)

    start = time.perf_counter()
    s_hat = sliced_sum(pc, coeffs, directions, accelerated=cfg.accelerated, workers=cfg.workers)
    fast_seconds = time.perf_counter() - start

    result = SumResult(N=pc.N, M=pc.M, d=pc.d, P=cfg.P, mode=cfg.mode.value, seed=cfg.seed,
                       accelerated=cfg.accelerated, scale=pc.scale, fastsum_seconds=fast_seconds)
    columns = [s_hat]
    header = ["s_hat"]
    if cfg.oracle:
        kernel = coeffs.meta.kernel
        if kernel is None:
            raise ArgumentError("The brute-force oracle needs a catalog kernel in the coefficient file")
        start = time.perf_counter()
        s_ref = brute_force_sum(pc, kernel_function(kernel, coeffs.scale))
        result.brute_force_seconds = time.perf_counter() - start
        result.relative_error = relative_l2(s_ref, s_hat)
        columns.append(s_ref)
        header.append("s_ref")
    columns.append(np.full(pc.M, float(cfg.seed)))
    header.append("seed")

    out = Path(args.out)
    write_matrix(out, np.column_stack(columns), header=header)
    summary_path = out.with_name(out.stem + "_summary.json")
    with open(summary_path, "wb") as f:
        f.write(orjson.dumps(result.model_dump(mode="json"), option=orjson.OPT_INDENT_2))

    console.print(f"Sliced sum: N={pc.N} M={pc.M} d={pc.d} P={cfg.P} ({fast_seconds:.2f}s)")
    if result.relative_error is not None:
        console.print(f"Brute force: {result.brute_force_seconds:.2f}s")
        console.print(f"relative_error={result.relative_error:.6e}")
    console.print(f"[green]✓[/green] Sums saved to {out}")
    return 0


def _report_config(args: argparse.Namespace) -> ReportConfig:
    if args.config:
        cfg = ReportConfig.from_yaml(Path(args.config))
        data = cfg.model_dump()
    else:
        if not args.kind:
            raise ArgumentError("report needs --config or --kind")
        data = {"name": args.name or args.kind, "kind": args.kind}
    overrides = {
        "kernels": parse_kernels(args.kernels) if args.kernels else None,
        "dim": args.dim,
        "taus": parse_floats(args.taus) if args.taus else None,
        "methods": [Method.parse(m) for m in args.methods.split(",")] if args.methods else None,
        "P": args.P,
        "N": args.N,
        "M": args.N if args.N else None,
        "repetitions": args.repetitions,
        "seed": args.seed,
        "output_dir": args.out_dir,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.accelerated:
        data["accelerated"] = True
    if args.name:
        data["name"] = args.name
    return ReportConfig.model_validate(data)


def run_report(cfg: ReportConfig, workers: Optional[int] = None) -> List[Path]:
    """Run one report description and write its CSV files"""
    output_dir = Path(cfg.output_dir)
    paths: List[Path] = []

    if cfg.kind == ReportKind.BENCHMARK:
        bench = cfg.bench or BenchConfig()
        if workers is not None:
            bench = bench.model_copy(update={"workers": workers})
        result = _run_benchmark(bench)
        paths.append(ReportGenerator.save_benchmark(result, output_dir, cfg.name))
        console.print(ReportGenerator.benchmark_summary_text(result), highlight=False)
        return paths

    if cfg.kind == ReportKind.FORWARD_ERROR:
        reports: Dict[str, ErrorReport] = {}
        for kernel in cfg.kernels:
            for method in cfg.methods:
                if method == Method.DIRECT and not kernel.has_known_f:
                    continue
                fit_cfg = ExperimentEngine.method_config(method, cfg.fit)
                coeffs = fit_kernel(kernel, cfg.dim, method, fit_cfg)
                grid = forward_grid(kernel)
                reports[f"{kernel.label} {method.value}"] = forward_error(coeffs, kernel_function(kernel), grid=grid)
        paths.append(ReportGenerator.save_forward_error(reports, output_dir, cfg.name))
        console.print(ReportGenerator.forward_summary_text(reports, f"Forward error, d={cfg.dim}"), highlight=False)
        return paths

    engine = ExperimentEngine(N=cfg.N, M=cfg.M, repetitions=cfg.repetitions, seed=cfg.seed,
                              accelerated=cfg.accelerated, workers=workers)
    with _progress() as progress:
        task = progress.add_task("experiments", total=None)

        def on_progress(label: str, current: int, total: int) -> None:
            progress.update(task, description=label, completed=current, total=total)

        if cfg.kind == ReportKind.METHOD_COMPARISON:
            results = engine.compare_methods(cfg.kernels, cfg.dim, cfg.methods, cfg.directions, cfg.fit,
                                             on_progress)
        else:
            results = []
            for kernel in cfg.kernels:
                for method in cfg.methods:
                    if method.is_fit:
                        results += engine.tau_sweep(kernel, cfg.dim, method, cfg.taus, cfg.directions,
                                                    cfg.fit, on_progress)

    if cfg.kind == ReportKind.METHOD_COMPARISON:
        paths.append(ReportGenerator.save_method_comparison(results, output_dir, cfg.name))
        title = f"Relative L2 error, d={cfg.dim}, P={cfg.directions}, N=M={cfg.N}, {cfg.repetitions} repetitions"
        console.print(ReportGenerator.method_summary_text(results, title), highlight=False)
    else:
        paths.append(ReportGenerator.save_tau_sweep(results, output_dir, cfg.name))
        console.print(ReportGenerator.sweep_summary_text(results, f"Tau sweep, d={cfg.dim}"), highlight=False)
    return paths


def _run_benchmark(bench: BenchConfig):
    engine = BenchmarkEngine(bench)
    with _progress() as progress:
        task = progress.add_task("benchmark", total=len(bench.sizes))

        def on_progress(n: int, current: int, total: int) -> None:
            progress.update(task, description=f"N={n}", completed=current - 1)

        return engine.run(on_progress)


def cmd_report(args: argparse.Namespace) -> int:
    """Reproduce tables and curves as CSV files"""
    cfg = _report_config(args)
    for path in run_report(cfg, workers=args.threads):
        console.print(f"[green]✓[/green] Report saved to {path}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    """Time the sliced sum against brute force"""
    bench = BenchConfig(
        d=args.dim,
        K=args.K,
        P=args.P,
        sizes=parse_ints(args.sizes),
        repeats=args.repeats,
        seed=args.seed,
        accelerated=not args.direct,
        workers=args.threads,
    )
    result = _run_benchmark(bench)
    console.print(ReportGenerator.benchmark_summary_text(result), highlight=False)
    path = ReportGenerator.save_benchmark(result, Path(args.out_dir), args.name)
    console.print(f"[green]✓[/green] Benchmark saved to {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicesum",
        description="Fast high-dimensional kernel summation via Fourier slicing",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default: $SLICESUM_THREADS)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Recover slicing coefficients for a kernel")
    fit.add_argument("--kernel", required=True, choices=[k.value for k in KernelName])
    fit.add_argument("--c", type=float, default=1.0, help="Kernel shape parameter")
    fit.add_argument("--dim", type=int, required=True, help="Dimension d >= 3")
    fit.add_argument("--method", required=True, type=str.lower, choices=FIT_CHOICES)
    fit.add_argument("--tau", type=float, default=None, help="Regularization (method default if omitted)")
    fit.add_argument("--K", type=int, default=256)
    fit.add_argument("--J", type=int, default=1024)
    fit.add_argument("--L", type=int, default=1024)
    fit.add_argument("--scale", type=float, default=1.0, help="Fit F(scale * s) on [0, 1]")
    fit.add_argument("--out", required=True, help="Coefficient file (JSON)")
    fit.set_defaults(handler=cmd_fit)

    summ = sub.add_parser("sum", help="Sliced kernel sum of CSV data")
    summ.add_argument("--coeff", required=True)
    summ.add_argument("--x", required=True, help="Sources, one point per row")
    summ.add_argument("--y", required=True, help="Targets, one point per row")
    summ.add_argument("--w", required=True, help="Weights, one per row")
    summ.add_argument("--P", type=int, required=True, help="Number of directions")
    summ.add_argument("--mode", choices=[m.value for m in DirectionMode], default="orthogonal")
    summ.add_argument("--seed", type=int, required=True)
    summ.add_argument("--accelerated", action="store_true", help="Gridded NFFT instead of direct sums")
    summ.add_argument("--oracle", action="store_true", help="Also compute the brute-force sum")
    summ.add_argument("--normalize-data", action="store_true",
                      help="Divide the data by its own radius; the kernel acts on normalized points")
    summ.add_argument("--out", required=True)
    summ.set_defaults(handler=cmd_sum)

    report = sub.add_parser("report", help="Reproduce tables and error curves as CSV")
    report.add_argument("--config", help="YAML report description")
    report.add_argument("--kind", choices=[k.value for k in ReportKind])
    report.add_argument("--name")
    report.add_argument("--kernels", help="e.g. gauss:1,imq:1,bump:3")
    report.add_argument("--dim", type=int)
    report.add_argument("--taus", help="Comma-separated tau grid")
    report.add_argument("--methods", help="Comma-separated methods")
    report.add_argument("--P", type=int)
    report.add_argument("--N", type=int, help="Sources and targets per repetition")
    report.add_argument("--repetitions", type=int)
    report.add_argument("--seed", type=int)
    report.add_argument("--accelerated", action="store_true")
    report.add_argument("--out-dir", default=None)
    report.set_defaults(handler=cmd_report)

    bench = sub.add_parser("bench", help="Sliced versus brute-force runtime")
    bench.add_argument("--dim", type=int, default=50)
    bench.add_argument("--K", type=int, default=256)
    bench.add_argument("--P", type=int, default=50)
    bench.add_argument("--sizes", default="1000,2000,4000,8000")
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--direct", action="store_true", help="Direct 1D sums instead of the NFFT")
    bench.add_argument("--name", default="bench")
    bench.add_argument("--out-dir", default="reports")
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.handler(args)
    except SlicesumError as exc:
        err_console.print(Panel(str(exc), title=type(exc).__name__, border_style="red"))
        return exc.exit_code
    except ValidationError as exc:
        err_console.print(Panel(str(exc), title="Invalid configuration", border_style="red"))
        return ArgumentError.exit_code
    except (FileNotFoundError, ValueError) as exc:
        err_console.print(Panel(str(exc), title="Invalid argument", border_style="red"))
        return ArgumentError.exit_code


if __name__ == "__main__":
    sys.exit(main())
