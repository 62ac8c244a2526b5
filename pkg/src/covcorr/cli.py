"""Command-line front end.

Subcommands: ``test`` (single pair), ``pairwise`` (all-pairs scan with
multiple-testing adjustment), ``simulate`` (size/power/convergence
experiments) and ``bench`` (timings).

Exit codes: 0 success, 2 data parse error, 3 shape/dimension mismatch,
4 invalid flags.
"""

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np

from . import baselines, copula as copula_mod, simulate
from .dataio import DataMatrix, ParseError, load_matrix
from .rng import derive_seed
from .stats import P_CLAMP, coverage_correlation

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SHAPE = 3
EXIT_FLAGS = 4

_DEFAULT_GAMMAS = ",".join(f"{0.2 * i:.1f}" for i in range(11))


class ShapeError(Exception):
    """Input matrices have incompatible shapes or dimensions."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_FLAGS)


def _float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="covcorr",
                     description="Coverage correlation tests and experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_test = sub.add_parser("test", help="test one pair of samples")
    p_test.add_argument("files", nargs="+",
                        help="one file holding both blocks, or two files (x then y)")
    p_test.add_argument("--dx", type=int, default=1, help="columns of the x block")
    p_test.add_argument("--dy", type=int, default=1, help="columns of the y block")
    p_test.add_argument("--grid", action="store_true",
                        help="deterministic grid references (univariate only)")
    p_test.add_argument("--seed", type=int, default=0)
    p_test.add_argument("--json", action="store_true", dest="as_json")

    p_pair = sub.add_parser("pairwise", help="scan all column pairs of a matrix")
    p_pair.add_argument("file")
    p_pair.add_argument("--method", default="cover",
                        choices=["cover", "chatterjee", "pearson", "spearman"])
    p_pair.add_argument("--adjust", default="bonferroni", choices=["bonferroni"])
    p_pair.add_argument("--alpha", type=float, default=0.05)
    p_pair.add_argument("--threads", type=int, default=None)
    p_pair.add_argument("--seed", type=int, default=0)
    p_pair.add_argument("--out", default=None, help="output CSV path (default stdout)")

    p_sim = sub.add_parser("simulate", help="run Monte Carlo experiments")
    sim_sub = p_sim.add_subparsers(dest="experiment", required=True,
                                   parser_class=_Parser)

    p_size = sim_sub.add_parser("size", help="null rejection rates")
    p_size.add_argument("--n", type=int, default=1000)
    p_size.add_argument("--d", type=int, default=1)
    p_size.add_argument("--alphas", type=_float_list, default=[0.01, 0.025, 0.05, 0.1])
    p_size.add_argument("--reps", type=int, default=5000)
    p_size.add_argument("--reference", default="random", choices=["random", "grid"])
    p_size.add_argument("--seed", type=int, default=0)
    p_size.add_argument("--threads", type=int, default=None)
    p_size.add_argument("--out", default="size_report")

    p_pow = sim_sub.add_parser("power", help="power against a scenario")
    p_pow.add_argument("--scenario", required=True, choices=simulate.SCENARIO_KINDS)
    p_pow.add_argument("--n", type=int, default=1000)
    p_pow.add_argument("--d", type=int, default=1)
    p_pow.add_argument("--gammas", type=_float_list,
                       default=_float_list(_DEFAULT_GAMMAS))
    p_pow.add_argument("--level", type=float, default=0.05)
    p_pow.add_argument("--reps", type=int, default=200)
    p_pow.add_argument("--methods", default=None,
                       help="comma list from {cover, chatterjee}")
    p_pow.add_argument("--seed", type=int, default=0)
    p_pow.add_argument("--threads", type=int, default=None)
    p_pow.add_argument("--out", default="power_report")

    p_conv = sim_sub.add_parser("converge", help="convergence to the population value")
    p_conv.add_argument("--copula", default="two-block",
                        choices=["uniform", "two-block", "diagonal"])
    p_conv.add_argument("--n-grid", type=_int_list, default=[500, 1000, 2000, 5000])
    p_conv.add_argument("--reps", type=int, default=50)
    p_conv.add_argument("--seed", type=int, default=0)
    p_conv.add_argument("--threads", type=int, default=None)
    p_conv.add_argument("--out", default="converge_report")

    p_bench = sub.add_parser("bench", help="time the statistic at several sizes")
    p_bench.add_argument("--n-grid", type=_int_list, default=[1000, 2000, 4000, 8000])
    p_bench.add_argument("--d", type=int, default=1)
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", default=None)

    return parser


# ---------------------------------------------------------------------------
# test

def _split_blocks(args) -> tuple:
    if len(args.files) == 1:
        mat = load_matrix(args.files[0])
        if mat.p != args.dx + args.dy:
            raise ShapeError(f"{args.files[0]}: expected {args.dx + args.dy} "
                             f"columns (dx + dy), found {mat.p}")
        return mat.values[:, :args.dx], mat.values[:, args.dx:]
    if len(args.files) == 2:
        mx = load_matrix(args.files[0])
        my = load_matrix(args.files[1])
        if mx.p != args.dx:
            raise ShapeError(f"{args.files[0]}: expected {args.dx} columns, found {mx.p}")
        if my.p != args.dy:
            raise ShapeError(f"{args.files[1]}: expected {args.dy} columns, found {my.p}")
        if mx.n != my.n:
            raise ShapeError(f"row counts differ: {mx.n} vs {my.n}")
        return mx.values, my.values
    raise ShapeError("expected one or two input files")


def _cmd_test(args) -> int:
    x, y = _split_blocks(args)
    if args.grid and (args.dx != 1 or args.dy != 1):
        raise ShapeError("--grid requires dx = dy = 1")
    reference = "grid" if args.grid else "random"
    res = coverage_correlation(x, y, reference=reference, seed=args.seed)
    if args.as_json:
        obj = {
            "kappa": res.kappa,
            "vacancy": res.vacancy,
            "z_score": None if math.isnan(res.z_score) else res.z_score,
            "p_value": None if math.isnan(res.p_value)
            else (0.0 if res.p_clamped else res.p_value),
            "clamped": res.p_clamped,
            "n": res.n,
            "d_x": res.d_x,
            "d_y": res.d_y,
            "reference_mode": res.reference_mode,
            "null_mean": res.null_mean,
            "null_sd_vacancy": None if math.isnan(res.null_sd_vacancy)
            else res.null_sd_vacancy,
        }
        print(json.dumps(obj, sort_keys=True))
    else:
        print(f"kappa      = {res.kappa:.6f}")
        print(f"vacancy    = {res.vacancy:.6f}")
        zs = "undefined (n < 3)" if math.isnan(res.z_score) else f"{res.z_score:.4f}"
        print(f"z          = {zs}")
        print(f"p          = {res.format_p()}")
        print(f"n          = {res.n}")
        print(f"d          = {res.d_x} + {res.d_y}")
        print(f"reference  = {res.reference_mode}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# pairwise

def _pair_chunk(args):
    values, names, method, seed, pairs = args
    out = []
    for idx, i, j in pairs:
        x = values[:, i]
        y = values[:, j]
        if method == "cover":
            pair_seed = derive_seed(seed, "pairwise", names[i], names[j])
            res = coverage_correlation(x, y, seed=pair_seed)
            stat, p = res.kappa, res.p_value
        elif method == "chatterjee":
            r = baselines.chatterjee_xi(x, y)
            stat, p = r.statistic, r.p_value
        elif method == "pearson":
            r = baselines.pearson(x, y)
            stat, p = r.statistic, r.p_value
        else:
            r = baselines.spearman(x, y)
            stat, p = r.statistic, r.p_value
        out.append((idx, i, j, stat, p))
    return out


def _cmd_pairwise(args) -> int:
    mat = load_matrix(args.file)
    if mat.p < 2:
        raise ShapeError(f"{args.file}: need at least 2 columns, found {mat.p}")
    names = [mat.column_name(j) for j in range(mat.p)]
    pairs = [(k, i, j) for k, (i, j) in enumerate(
        (i, j) for i in range(mat.p) for j in range(i + 1, mat.p))]
    npairs = len(pairs)
    workers = args.threads if args.threads is not None else simulate.default_workers()
    chunk_ids = np.array_split(np.arange(npairs), max(1, min(npairs, workers * 4)))
    chunks = [(mat.values, names, args.method, args.seed,
               [pairs[k] for k in ids]) for ids in chunk_ids if len(ids)]
    if workers <= 1 or len(chunks) <= 1:
        parts = [_pair_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_pair_chunk, chunks))
    results = sorted((r for part in parts for r in part), key=lambda t: t[0])
    rows = []
    for idx, i, j, stat, p in results:
        p_adj = min(1.0, p * npairs) if not math.isnan(p) else float("nan")
        rows.append((i, j, stat, p, p_adj))
    rows.sort(key=lambda r: (math.isnan(r[3]), r[3], r[0], r[1]))
    lines = ["col_i,col_j,method,statistic,p_raw,p_adjusted"]
    for i, j, stat, p, p_adj in rows:
        lines.append(f"{names[i]},{names[j]},{args.method},"
                     f"{stat!r},{p!r},{p_adj!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate / bench

def _write_report(report, out_prefix: str) -> None:
    report.write_csv(out_prefix + ".csv")
    report.write_json(out_prefix + ".json")
    sys.stderr.write(f"wrote {out_prefix}.csv and {out_prefix}.json\n")


def _cmd_simulate(args) -> int:
    if args.experiment == "size":
        report = simulate.size_experiment(
            n=args.n, d=args.d, alphas=args.alphas, reps=args.reps,
            seed=args.seed, reference=args.reference, workers=args.threads)
    elif args.experiment == "power":
        if args.methods is None:
            methods = ["cover", "chatterjee"] if args.d == 1 else ["cover"]
        else:
            methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        report = simulate.power_experiment(
            kind=args.scenario, n=args.n, d=args.d, gammas=args.gammas,
            level=args.level, reps=args.reps, methods=methods,
            seed=args.seed, workers=args.threads)
    else:
        cop = {
            "uniform": copula_mod.uniform_copula,
            "two-block": copula_mod.two_block_copula,
            "diagonal": copula_mod.diagonal_singular_copula,
        }[args.copula]()
        report = simulate.convergence_study(
            copula=cop, n_grid=args.n_grid, reps=args.reps,
            seed=args.seed, workers=args.threads)
    _write_report(report, args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    rows = []
    # warm up JIT-compiled kernels before timing
    from .rng import make_rng
    warm = make_rng(args.seed, "bench", "warmup")
    coverage_correlation(warm.random((64, args.d)), warm.random((64, args.d)),
                         seed=args.seed)
    for n in args.n_grid:
        rng = make_rng(args.seed, "bench", n)
        x = rng.random((n, args.d))
        y = rng.random((n, args.d))
        times = []
        for _ in range(max(1, args.reps)):
            t0 = time.perf_counter()
            coverage_correlation(x, y, seed=args.seed)
            times.append(time.perf_counter() - t0)
        rows.append((n, float(np.mean(times)), float(np.min(times))))
    lines = ["n,mean_seconds,min_seconds"]
    for n, mean_t, min_t in rows:
        lines.append(f"{n},{mean_t!r},{min_t!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "test":
            return _cmd_test(args)
        if args.command == "pairwise":
            return _cmd_pairwise(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "bench":
            return _cmd_bench(args)
        parser.error(f"unknown command {args.command!r}")
    except ParseError as exc:
        sys.stderr.write(f"covcorr: parse error: {exc}\n")
        return EXIT_PARSE
    except ShapeError as exc:
        sys.stderr.write(f"covcorr: shape error: {exc}\n")
        return EXIT_SHAPE
    except ValueError as exc:
        sys.stderr.write(f"covcorr: shape error: {exc}\n")
        return EXIT_SHAPE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
