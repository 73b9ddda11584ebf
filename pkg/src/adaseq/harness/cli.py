"""Command-line entry point: ``adaseq {run, brute, verify-sequence, bench}``.

Exit codes: 0 success, 2 validation error, 1 internal error (including a
failed distribution check in ``verify-sequence``).
"""
from __future__ import annotations

import argparse
import csv
import logging
import math
import sys

import numpy as np

from ..core import AlgoParams, ValidationError
from ..functions import ModularFunction
from ..matroids import HiddenPartitionInstance, UniformMatroid
from ..sequencing import chi2_equivalence, sequence_law
from .instances import parse_constraint_text, parse_function_text, InstanceSpec
from .runner import ALGOS, COLUMNS, row_dict, run_experiment, write_rows

log = logging.getLogger("adaseq")


def _load(function_path, matroid_path):
    with open(function_path) as fh:
        fspec = parse_function_text(fh.read(), function_path)
    with open(matroid_path) as fh:
        mspec = parse_constraint_text(fh.read(), matroid_path)
    return InstanceSpec(fspec, mspec).build()


def _emit(rows, out):
    if out in (None, "-"):
        w = csv.DictWriter(sys.stdout, fieldnames=COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow(row_dict(r))
    else:
        write_rows(out, rows)
        log.info("appended %d rows to %s", len(rows), out)


def cmd_run(args):
    f, m = _load(args.function, args.matroid)
    params = AlgoParams(epsilon=args.eps, step_size=args.lam, rho=args.rho, seed=args.seed,
                        mc_samples=args.mc_samples, outer_iterations=args.outer_iterations)
    rows = run_experiment(f, m, args.algo, params, trials=args.trials, with_opt=args.opt,
                          surrogate=args.surrogate)
    _emit(rows, args.out)
    return 0


def cmd_brute(args):
    f, m = _load(args.function, args.matroid)
    rows = run_experiment(f, m, "brute", AlgoParams())
    _emit(rows, args.out)
    return 0


def cmd_verify_sequence(args):
    with open(args.matroid) as fh:
        m = parse_constraint_text(fh.read(), args.matroid).build()
    gens = ["sequential", "independence"] + (["rank"] if m.has_rank else [])
    if not m.has_rank:
        print(f"note: {type(m).__name__} has no native rank oracle; the rank generator is skipped")
    rng = np.random.default_rng(args.seed)
    laws = {g: sequence_law(m, g, args.samples, rng) for g in gens}
    ok = True
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            stat, p, dof = chi2_equivalence(laws[a], laws[b])
            verdict = "PASS" if p > args.alpha else "FAIL"
            ok &= p > args.alpha
            print(f"{a:>12} vs {b:<12} chi2={stat:9.3f} dof={dof:4d} p={p:.4f} {verdict}")
    return 0 if ok else 1


def _bench_scaling(args):
    rows = []
    rng = np.random.default_rng(args.seed)
    for n in args.sizes or (100, 1000, 10000):
        f = ModularFunction(rng.uniform(0, 1, size=n))
        m = UniformMatroid(n, args.k)
        params = AlgoParams(epsilon=args.eps, seed=args.seed, rho=args.rho)
        for algo in ("aseq", "greedy"):
            rows.extend(run_experiment(f, m, algo, params))
            log.info("scaling n=%d %s f_rounds=%s", n, algo, rows[-1].f_rounds)
    return rows


def desk_hidden_shape(n: int) -> tuple:
    """(p, slope) for desk-scale hard instances: p ≈ n^{1/3} dividing n, capacities well below part size."""
    target = n ** (1.0 / 3.0)
    p = min((d for d in range(1, n + 1) if n % d == 0), key=lambda d: (abs(d - target), d))
    slope = max(1, (n // p) // (2 * p))
    return p, slope


def _bench_hard_partition(args):
    rows = []
    for n in args.sizes or (64, 216, 512, 1000):
        p, slope = desk_hidden_shape(n)
        m = HiddenPartitionInstance(n, p, slope, args.seed)
        f = ModularFunction(np.ones(n))
        params = AlgoParams(epsilon=args.eps, seed=args.seed, rho=args.rho)
        rows.extend(run_experiment(f, m, "aseq", params, opt=float(m.base_size)))
        log.info("hard-partition n=%d p=%d slope=%d m_steps=%d sqrt(n)=%.1f",
                 n, p, slope, rows[-1].m_steps, math.sqrt(n))
    return rows


def cmd_bench(args):
    rows = _bench_scaling(args) if args.suite == "scaling" else _bench_hard_partition(args)
    _emit(rows, args.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="adaseq", description="Low-adaptivity submodular maximization under matroids")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one algorithm on an instance")
    run.add_argument("--function", required=True)
    run.add_argument("--matroid", required=True)
    run.add_argument("--algo", required=True, choices=ALGOS)
    run.add_argument("--eps", type=float, default=0.05)
    run.add_argument("--lambda", dest="lam", type=float, default=0.1)
    run.add_argument("--rho", type=int, default=20)
    run.add_argument("--trials", type=int, default=1)
    run.add_argument("--seed", type=int, required=True)
    run.add_argument("--out", default="-")
    run.add_argument("--mc-samples", type=int, default=None)
    run.add_argument("--outer-iterations", type=int, default=None)
    run.add_argument("--surrogate", choices=("mc", "exact"), default="mc")
    run.add_argument("--opt", action="store_true", help="compute OPT by brute force and report the ratio")
    run.set_defaults(func=cmd_run)

    brute = sub.add_parser("brute", help="exact optimum by enumeration (n <= 24)")
    brute.add_argument("--function", required=True)
    brute.add_argument("--matroid", required=True)
    brute.add_argument("--out", default="-")
    brute.set_defaults(func=cmd_brute)

    ver = sub.add_parser("verify-sequence", help="chi-square check that the sequence generators agree")
    ver.add_argument("--matroid", required=True)
    ver.add_argument("--samples", type=int, default=10000)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--alpha", type=float, default=0.01)
    ver.set_defaults(func=cmd_verify_sequence)

    bench = sub.add_parser("bench", help="built-in benchmark suites")
    bench.add_argument("--suite", required=True, choices=("scaling", "hard-partition"))
    bench.add_argument("--sizes", type=int, nargs="*", default=None)
    bench.add_argument("--k", type=int, default=10)
    bench.add_argument("--eps", type=float, default=0.1)
    bench.add_argument("--rho", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", default="-")
    bench.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
