"""Command-line front end: sample, mle, verify-lemma, mldegree, multiplicity.

Exit codes: 0 success (Timeout cells included), 2 degenerate data,
3 MLE nonexistence, 4 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .canonical import DegenerateData, canonicalize, det_reduction_check
from .linalg import Matrix
from .mldegree import TIMEOUT, b_zero_quadratic, ml_degree, ml_multiplicity_prop43
from .model import (
    format_sample_set,
    parse_sample_set,
    sample_matrix_normal,
    thresholds,
)
from .solvers import MLENotExists, flipflop, format_estimate, mle

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_NO_MLE = 3
EXIT_BAD_ARGS = 4


def _worker_count(n_tasks):
    cap = os.environ.get("KRONMLE_WORKERS")
    workers = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(workers, n_tasks))


def cmd_sample(args):
    sample = sample_matrix_normal(np.eye(args.m1), np.eye(args.m2), args.n, args.seed)
    text = format_sample_set(sample)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bounds = thresholds(args.m1, args.m2)
    print(f"k = {sample.k}", file=sys.stderr)
    print(
        f"sample-size bounds: lower {bounds.lower} upper {bounds.upper}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_mle(args):
    with open(args.infile) as fh:
        sample = parse_sample_set(fh.read())
    est = mle(sample, tol=args.tol, max_iter=args.max_iter)
    if sample.k == 1:
        # Compare flip-flop sweeps against the closed-form solution.
        exact_k2 = est.k2
        deviations = {}

        def record(sweep, k1, k2):
            deviations[sweep] = float(np.abs(k2 - exact_k2).max())

        flipflop(sample, tol=0.0, max_iter=min(args.max_iter, 500), callback=record)
        print("sweep  max-abs deviation from exact K2")
        report_at = [1, 2, 3, 5, 10, 20, 50, 100, 200, 500]
        for sweep in report_at:
            if sweep in deviations:
                print(f"{sweep:5d}  {deviations[sweep]:.3e}")
    print(f"method: {est.method}")
    print(f"iterations: {est.iterations}  converged: {est.converged}")
    print(f"loglik: {est.loglik:.6f}")
    text = format_estimate(est, sample.m1, sample.m2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _pinned_example():
    """The worked 4x2x3 instance: both determinants equal 16640."""
    sample_y = Matrix.identity(4).hstack(Matrix([[1, 2], [3, 4], [5, 6], [7, 8]]))
    from .model import SampleSet

    data = tuple(sample_y.submatrix(range(4), range(2 * i, 2 * i + 2)) for i in range(3))
    cf = canonicalize(SampleSet(m1=4, m2=2, n=3, data=data))
    k = Matrix([[3, 1], [1, 3]])
    return det_reduction_check(cf, k)


def random_lemma_instance(rng, m2, k, n):
    """Random exact (canonical form, PD rational K) for the identity check."""
    from .model import SampleSet

    m1 = n * m2 - k
    c = Matrix([[int(rng.integers(-8, 9)) for _ in range(k)] for _ in range(m1)])
    y = Matrix.identity(m1).hstack(c)
    data = tuple(
        y.submatrix(range(m1), range(i * m2, (i + 1) * m2)) for i in range(n)
    )
    cf = canonicalize(SampleSet(m1=m1, m2=m2, n=n, data=data))
    l = Matrix([[int(rng.integers(-3, 4)) for _ in range(m2)] for _ in range(m2)])
    k_mat = l @ l.transpose() + Matrix.identity(m2)
    return cf, k_mat


def cmd_verify_lemma(args):
    lhs, rhs = _pinned_example()
    ok = lhs == rhs
    print(f"pinned example: lhs = {lhs} rhs = {rhs} {'PASS' if ok else 'FAIL'}")
    rng = np.random.default_rng(args.seed)
    passes = fails = 0
    for _ in range(args.count):
        while True:
            m2 = int(rng.integers(2, 5))
            k = int(rng.integers(1, 5))
            n = int(rng.integers(1, 5))
            if 1 <= n * m2 - k <= 10:
                break
        cf, k_mat = random_lemma_instance(rng, m2, k, n)
        lhs, rhs = det_reduction_check(cf, k_mat)
        if lhs == rhs:
            passes += 1
        else:
            fails += 1
    print(f"random instances: {passes} passed, {fails} failed")
    return EXIT_OK if ok and fails == 0 else EXIT_BAD_ARGS


def _parse_range(spec):
    if ":" in spec:
        lo, hi = spec.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def _mldegree_cell(task):
    m1, n, seed, pair_budget = task
    start = time.monotonic()
    degree = ml_degree(m1, n, seed, pair_budget=pair_budget)
    elapsed = time.monotonic() - start
    return {
        "m1": m1,
        "n": n,
        "seed": seed,
        "degree": "timeout" if degree is TIMEOUT else degree,
        "seconds": round(elapsed, 3),
    }


def cmd_mldegree(args):
    if args.m2 != 2:
        print("mldegree supports m2 = 2 only", file=sys.stderr)
        return EXIT_BAD_ARGS
    m1s = _parse_range(args.m1)
    ns = _parse_range(args.n)
    os.makedirs(args.cache_dir, exist_ok=True)

    results = []
    pending = []
    for m1 in m1s:
        for n in ns:
            cache = os.path.join(
                args.cache_dir, f"cell_{m1}_{n}_{args.seed}.json"
            )
            if os.path.exists(cache):
                with open(cache) as fh:
                    results.append(json.load(fh))
            else:
                pending.append((m1, n, args.seed, args.pair_budget))

    if pending:
        with ProcessPoolExecutor(max_workers=_worker_count(len(pending))) as pool:
            for cell in pool.map(_mldegree_cell, pending):
                cache = os.path.join(
                    args.cache_dir,
                    f"cell_{cell['m1']}_{cell['n']}_{cell['seed']}.json",
                )
                with open(cache, "w") as fh:
                    json.dump(cell, fh)
                results.append(cell)

    results.sort(key=lambda c: (c["m1"], c["n"]))
    out = _emit_cells(results, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _emit_cells(results, fmt):
    if fmt == "json":
        return json.dumps(results, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["m1", "n", "seed", "degree", "seconds"])
        writer.writeheader()
        writer.writerows(results)
        return buf.getvalue()
    lines = [f"{'m1':>4} {'n':>4} {'degree':>8} {'seconds':>9}"]
    for c in results:
        lines.append(f"{c['m1']:>4} {c['n']:>4} {str(c['degree']):>8} {c['seconds']:>9}")
    return "\n".join(lines) + "\n"


def cmd_multiplicity(args):
    case = args.case
    try:
        quad = b_zero_quadratic(args.m2, args.k, case)
        count = ml_multiplicity_prop43(args.m2, args.k, case, pair_budget=args.pair_budget)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS
    upper = 5 if case == "one" else 4
    print(f"case {case}, m2 = {args.m2}, k = {args.k}")
    print(f"b = 0 quadratic: {quad}")
    print(f"discriminant: {quad.discriminant}")
    roots = quad.roots()
    print("roots: " + ", ".join(f"{r:.6f}" for r in roots))
    print(f"solution count: {count} (bound check: 2 <= {count} <= {upper})")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="kronmle")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="generate a synthetic matrix normal sample")
    p.add_argument("--m1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("mle", help="estimate the Kronecker factors from a sample file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mle)

    p = sub.add_parser("verify-lemma", help="check the determinant reduction identity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("mldegree", help="ML degree table for m2 = 2")
    p.add_argument("--m1", required=True, help="value or range lo:hi")
    p.add_argument("--n", required=True, help="value or range lo:hi")
    p.add_argument("--m2", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pair-budget", type=int, default=200000)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--cache-dir", default=".kronmle_cache")
    p.add_argument("--out")
    p.set_defaults(func=cmd_mldegree)

    p = sub.add_parser("multiplicity", help="constructed multiplicity > 1 systems")
    p.add_argument("--case", choices=["one", "two"], required=True)
    p.add_argument("--m2", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--pair-budget", type=int, default=200000)
    p.set_defaults(func=cmd_multiplicity)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_ARGS if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except DegenerateData as exc:
        print(f"degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except MLENotExists as exc:
        print(f"MLE does not exist: {exc}", file=sys.stderr)
        return EXIT_NO_MLE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS


if __name__ == "__main__":
    sys.exit(main())
