"""Command-line front end.

Subcommands mirror the library layers: generate and sort work on array
files, bench produces the results CSV, fit/predict/crossover consume it,
and report turns fitted models into text, delimited observation tables,
and SVG figures in one pass.

Sizes accept lakh notation anywhere a count is expected: ``70lakh`` is
7,000,000 (1 lakh = 100,000).  Every run starts by echoing its effective
configuration, seeds included, as one ``config:`` line so logged output
is sufficient to rerun the command.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bench as bench_mod
from . import figures, report, stats, workload
from .sort_core import SORTERS, OpCounts, is_sorted

_ERRORS = (
    ValueError,  # covers FitError, BracketError, SchemaError, NonFiniteKeyError
    bench_mod.SortIntegrityError,
    OSError,
)


def parse_size(text: str) -> int:
    """Array size: plain integer, scientific, or lakh notation (1 lakh = 1e5)."""
    t = text.strip().lower().replace(",", "").replace("_", "")
    mult = 1
    for suffix in ("lakhs", "lakh"):
        if t.endswith(suffix):
            t = t[: -len(suffix)].strip()
            mult = 100_000
            break
    try:
        base = int(t) if t.isdigit() else float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a size: {text!r}") from None
    value = base * mult
    if value < 0 or value != int(value):
        raise argparse.ArgumentTypeError(f"size must be a nonnegative integer: {text!r}")
    return int(value)


def _parse_sizes(tokens: list[str]) -> list[int]:
    sizes = []
    for token in tokens:
        for piece in token.split(","):
            if piece:
                sizes.append(parse_size(piece))
    if not sizes:
        raise argparse.ArgumentTypeError("no sizes given")
    return sizes


def _echo_config(command: str, **kv) -> None:
    print(f"config: {json.dumps({'command': command, **kv}, sort_keys=True)}")


def _read_keys(path: str, fmt: str) -> list[float]:
    return workload.read_binary(path) if fmt == "binary" else workload.read_text(path)


def _write_keys(path: str, fmt: str, keys: list[float]) -> None:
    if fmt == "binary":
        workload.write_binary(path, keys)
    else:
        workload.write_text(path, keys)


def cmd_generate(args: argparse.Namespace) -> int:
    _echo_config(
        "generate", n=args.n, seed=args.seed, kind=args.kind, out=args.out, format=args.format
    )
    keys = workload.generate(workload.WorkloadSpec(n=args.n, seed=args.seed, kind=args.kind))
    _write_keys(args.out, args.format, keys)
    print(f"wrote {len(keys)} keys to {args.out}")
    return 0


def cmd_sort(args: argparse.Namespace) -> int:
    _echo_config(
        "sort",
        algo=args.algo,
        infile=args.infile,
        format=args.format,
        out=args.out,
        counts=args.counts,
    )
    keys = _read_keys(args.infile, args.format)
    counts = OpCounts() if args.counts else None
    sorter = SORTERS[args.algo]
    t0 = time.perf_counter_ns()
    if counts is not None:
        sorter(keys, counts)
    else:
        sorter(keys)
    t1 = time.perf_counter_ns()
    if not is_sorted(keys):
        raise bench_mod.SortIntegrityError(f"{args.algo} left an unsorted array")
    print(f"sorted {len(keys)} keys with {args.algo} in {(t1 - t0) / 1e9:.6f} s")
    if counts is not None:
        print(
            f"comparisons={counts.comparisons} moves={counts.moves} "
            f"max_pending_ranges={counts.max_pending_ranges}"
        )
    if args.out:
        _write_keys(args.out, args.format, keys)
        print(f"wrote sorted keys to {args.out}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.sizes)
    config = bench_mod.BenchConfig(
        sizes=sizes,
        reps=args.reps,
        seed=args.seed,
        algorithms=tuple(args.algos),
        mode=args.mode,
        paired=not args.unpaired,
        warmup=args.warmup,
    )
    _echo_config(
        "bench",
        sizes=sizes,
        reps=config.reps,
        seed=config.seed,
        algos=list(config.algorithms),
        mode=config.mode,
        paired=config.paired,
        warmup=config.warmup,
        out=args.out,
    )
    records = bench_mod.run_grid(config)
    bench_mod.write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    _echo_config(
        "fit", infile=args.infile, algo=args.algo, report_out=args.report_out, json_out=args.json_out
    )
    records = bench_mod.read_csv(args.infile)
    fit = stats.ols_fit(stats.build_design(records, args.algo), label=args.algo)
    text = report.format_fit_report(fit)
    if args.report_out:
        Path(args.report_out).write_text(text, encoding="ascii")
        print(f"wrote report to {args.report_out}")
    else:
        print(text)
    if args.json_out:
        report.write_fit_json(fit, args.json_out)
        print(f"wrote fit to {args.json_out}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    _echo_config("predict", fit=args.fit, n=args.n)
    fit = report.read_fit_json(args.fit)
    value = stats.predict(fit, args.n)
    print(f"predicted mean seconds for {fit.label or 'fit'} at n={args.n}: {value:.6g}")
    return 0


def cmd_crossover(args: argparse.Namespace) -> int:
    if args.infile:
        _echo_config(
            "crossover", infile=args.infile, algo_a=args.algo_a, algo_b=args.algo_b, mode="empirical"
        )
        records = bench_mod.read_csv(args.infile)
        est = stats.crossover_empirical(records, args.algo_a, args.algo_b)
        if est is None:
            print("no crossover: the mean-time ordering never flips over the common sizes")
            return 0
        lo, hi = est.bracket
        print(f"crossover bracket: ({lo:.0f}, {hi:.0f}), midpoint n* = {est.n_star:.0f}")
        for t_lo, t_hi in est.transient_brackets:
            print(f"note: transient ordering flip between n={t_lo:.0f} and n={t_hi:.0f}")
        return 0
    _echo_config(
        "crossover", fit_a=args.fit_a, fit_b=args.fit_b, lo=args.lo, hi=args.hi, mode="model"
    )
    fit_a = report.read_fit_json(args.fit_a)
    fit_b = report.read_fit_json(args.fit_b)
    diff = stats.diff_model(fit_a, fit_b)
    est = stats.crossover_model(diff, args.lo, args.hi)
    print(
        f"model crossover n* = {est.n_star:.1f} "
        f"(bracket {est.bracket[0]:.1f} .. {est.bracket[1]:.1f}, "
        f"d0={diff.d0:.6g} d1={diff.d1:.6g} d2={diff.d2:.6g})"
    )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    _echo_config("report", infile=args.infile, algos=args.algos, out_dir=args.out_dir)
    records = bench_mod.read_csv(args.infile)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fits = []
    for algo in args.algos:
        fit = stats.ols_fit(stats.build_design(records, algo), label=algo)
        fits.append(fit)
        (out / f"{algo}_report.txt").write_text(report.format_fit_report(fit), encoding="ascii")
        report.write_fit_json(fit, out / f"{algo}_fit.json")
        _write_observations_csv(fit, out / f"{algo}_observations.csv")
        figures.render_fit_diagnostics(fit, out, prefix=algo)
        figures.render_times_curve(fit, out / f"{algo}_times_vs_n.svg", prefix=algo)
        print(f"wrote {algo} report, fit json, observations csv and figures to {out}")
    if len(fits) >= 2:
        figures.render_comparison(fits, out / "comparison.svg")
        print(f"wrote comparison figure to {out / 'comparison.svg'}")
        est = stats.crossover_empirical(records, args.algos[0], args.algos[1])
        if est is not None:
            lo, hi = est.bracket
            print(f"empirical crossover bracket: ({lo:.0f}, {hi:.0f}), midpoint n* = {est.n_star:.0f}")
    return 0


def _write_observations_csv(fit: stats.RegressionFit, path: Path) -> None:
    import csv

    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["order", "n", "x1", "y", "fit", "se_fit", "residual", "st_resid", "flagged"])
        for o in fit.obs:
            writer.writerow(
                [o.order, o.n, repr(o.x1), repr(o.y), repr(o.fit), repr(o.se_fit),
                 repr(o.residual), repr(o.st_resid), o.flagged]
            )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sortlab",
        description="Sorting laboratory: generate workloads, sort, benchmark, fit and report.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a deterministic key array to a file")
    p.add_argument("--n", type=parse_size, required=True, help="number of keys (lakh ok)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kind", choices=workload.WORKLOAD_KINDS, default="uniform01")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sort", help="sort an array file and report elapsed time")
    p.add_argument("--algo", choices=sorted(SORTERS), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    p.add_argument("--out", help="write the sorted array here (same format)")
    p.add_argument("--counts", action="store_true", help="also report exact op counts")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("bench", help="run a benchmark grid and write the results CSV")
    p.add_argument("--sizes", nargs="+", required=True, help="sizes, space or comma separated")
    p.add_argument("--reps", type=int, default=bench_mod.DEFAULT_REPS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algos", nargs="+", choices=sorted(SORTERS), default=list(SORTERS))
    p.add_argument("--mode", choices=bench_mod.MODES, default="wall_time")
    p.add_argument("--unpaired", action="store_true",
                   help="give each algorithm its own input stream instead of shared inputs")
    p.add_argument("--warmup", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fit", help="fit the runtime model to one algorithm's results")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algo", required=True)
    p.add_argument("--report-out", help="write the text report here instead of stdout")
    p.add_argument("--json-out", help="also write the fit as JSON")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="evaluate a stored fit at one size")
    p.add_argument("--fit", required=True, help="fit JSON from the fit subcommand")
    p.add_argument("--n", type=parse_size, required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("crossover", help="estimate where two algorithms trade places")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--in", dest="infile", help="results CSV for an empirical bracket")
    grp.add_argument("--fit-a", help="first fit JSON for a model root")
    p.add_argument("--fit-b", help="second fit JSON (with --fit-a)")
    p.add_argument("--algo-a", default="ksort")
    p.add_argument("--algo-b", default="heapsort")
    p.add_argument("--lo", type=parse_size, help="bracket low end (with --fit-a)")
    p.add_argument("--hi", type=parse_size, help="bracket high end (with --fit-a)")
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("report", help="fit, then write text, delimited and SVG outputs")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algos", nargs="+", default=list(SORTERS))
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "crossover" and not args.infile:
        missing = [flag for flag, v in (("--fit-b", args.fit_b), ("--lo", args.lo), ("--hi", args.hi)) if v is None]
        if missing:
            parser.error(f"model crossover needs {' '.join(missing)}")
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
