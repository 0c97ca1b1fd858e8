#!/usr/bin/env python3
"""Compare the compiled scan kernel against the pure-Python fallback.

Builds one index worth of random normalized vectors, runs the same
dot-product block through both kernels, checks bitwise agreement, and
reports throughput. Run after an editable install:

    python benchmarks/bench_scan.py --contexts 2000 --dim 256 --queries 50
"""

from __future__ import annotations

import argparse
import math
import random
import time
from array import array

from oak._kernels import _scan_py

try:
    from oak._kernels import _scan as _scan_c
except ImportError:
    _scan_c = None


def make_vectors(rng: random.Random, count: int, dim: int) -> array:
    flat = array("d")
    for _ in range(count):
        values = [rng.gauss(0.0, 1.0) for _ in range(dim)]
        norm = math.sqrt(math.fsum(v * v for v in values))
        flat.extend(v / norm for v in values)
    return flat


def run(kernel, queries: list[array], flat: array, dim: int, count: int) -> tuple[float, list[array]]:
    outputs = []
    start = time.perf_counter()
    for query in queries:
        out = array("d", bytes(8 * count))
        kernel.dot_block(query, flat, dim, out)
        outputs.append(out)
    return time.perf_counter() - start, outputs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--contexts", type=int, default=2000)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--queries", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    flat = make_vectors(rng, args.contexts, args.dim)
    queries = []
    for _ in range(args.queries):
        values = [rng.gauss(0.0, 1.0) for _ in range(args.dim)]
        norm = math.sqrt(math.fsum(v * v for v in values))
        queries.append(array("d", (v / norm for v in values)))

    dots = args.contexts * args.queries * args.dim
    py_time, py_out = run(_scan_py, queries, flat, args.dim, args.contexts)
    print(f"pure python : {py_time:8.4f} s  ({dots / py_time / 1e6:7.1f} M mul-add/s)")

    if _scan_c is None:
        print("compiled    : not available (pure-Python install)")
        return 0

    c_time, c_out = run(_scan_c, queries, flat, args.dim, args.contexts)
    print(f"compiled    : {c_time:8.4f} s  ({dots / c_time / 1e6:7.1f} M mul-add/s)")
    print(f"speedup     : {py_time / c_time:8.1f}x")

    for q in range(args.queries):
        if py_out[q].tobytes() != c_out[q].tobytes():
            print("MISMATCH: kernels disagree bitwise — investigate before trusting results")
            return 1
    print("bitwise     : identical across all query blocks")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
