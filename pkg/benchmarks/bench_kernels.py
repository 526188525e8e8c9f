#!/usr/bin/env python3
"""Benchmark the numba kernels against their numpy fallbacks."""
import argparse
import json
import time

import numpy as np

from unital_forge._backend import have_numba
from unital_forge._kernels import affine_join_check, apply_probe, warmup
from unital_forge.collineation import frobenius_table, standard_array
from unital_forge.nearfield import build_nearfield
from unital_forge.plane import build_plane

WARMUP_RUNS = 2
BENCH_RUNS = 5


def _checksum(result):
    if isinstance(result, tuple):
        fails, _ = result
        return float(fails)
    return float(np.asarray(result, dtype=np.int64).sum())


def benchmark(fn, warmup_runs=WARMUP_RUNS, runs=BENCH_RUNS):
    for _ in range(warmup_runs):
        result = fn()
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return {
        "min": min(times),
        "max": max(times),
        "mean": sum(times) / len(times),
        "runs": times,
        "checksum": _checksum(result),
    }


def bench_q(q, backends):
    N = build_nearfield(2, q)
    plane = build_plane(N)
    elems = standard_array(plane)
    FROB = frobenius_table(N)
    warmup(N)
    out = {}
    for be in backends:
        out[f"affine_join_check/q{q}/{be}"] = benchmark(
            lambda be=be: affine_join_check(N, backend=be))
        out[f"apply_probe/q{q}/{be}"] = benchmark(
            lambda be=be: apply_probe(elems, N, FROB, 1, 1, backend=be))
    for name in ("affine_join_check", "apply_probe"):
        sums = {out[f"{name}/q{q}/{be}"]["checksum"] for be in backends}
        assert len(sums) == 1, f"{name} backends disagree at q={q}: {sums}"
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", type=int, nargs="+", default=[5, 7],
                        help="nearfield parameters to measure")
    parser.add_argument("--out", default=None, help="write JSON here")
    args = parser.parse_args()

    backends = ["numpy"]
    if have_numba():
        backends.append("numba")
    results = {"backends": backends}
    for q in args.q:
        results.update(bench_q(q, backends))

    text = json.dumps(results, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


if __name__ == "__main__":
    main()
