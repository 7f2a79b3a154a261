"""Benchmark the similarity kernel: compiled extension vs pure Python.

Builds a synthetic corpus at a few sizes, runs both backends on identical
inputs, checks the outputs are bit-identical, and prints the timings.

Usage: python benchmarks/bench_kernels.py [--shots N ...] [--concepts C]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from shotgraph import _kernels_py


def _load_compiled():
    try:
        from shotgraph import _kernels

        return _kernels
    except ImportError:
        return None


def synthetic_inputs(n_shots: int, n_concepts: int, seed: int = 7):
    """Random CSR shot vectors plus a random correlation matrix."""
    rng = random.Random(seed)
    indptr = [0]
    concept_idx: list[int] = []
    for _ in range(n_shots):
        k = rng.randint(1, max(1, n_concepts // 3))
        concepts = sorted(rng.sample(range(n_concepts), k))
        concept_idx.extend(concepts)
        indptr.append(len(concept_idx))
    corr = np.empty((n_concepts, n_concepts), dtype=np.float64)
    for i in range(n_concepts):
        for j in range(n_concepts):
            corr[i, j] = 1.0 if i == j else rng.random()
    return (
        np.asarray(indptr, dtype=np.int32),
        np.asarray(concept_idx, dtype=np.int32),
        corr,
    )


def run_backend(module, indptr, concept_idx, corr, repeats: int) -> tuple[np.ndarray, float]:
    n = len(indptr) - 1
    out = np.zeros((n, n), dtype=np.float64)
    best = float("inf")
    for _ in range(repeats):
        out.fill(0.0)
        start = time.perf_counter()
        module.similarity_fill(indptr, concept_idx, corr, out)
        best = min(best, time.perf_counter() - start)
    return out, best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, nargs="+", default=[50, 150, 300])
    parser.add_argument("--concepts", type=int, default=40)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    compiled = _load_compiled()
    if compiled is None:
        print("compiled kernel not built; showing pure-Python timings only")

    header = f"{'shots':>7} {'concepts':>9} {'python':>12} {'cython':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n_shots in args.shots:
        indptr, concept_idx, corr = synthetic_inputs(n_shots, args.concepts)
        out_py, t_py = run_backend(_kernels_py, indptr, concept_idx, corr, args.repeats)
        if compiled is not None:
            out_cy, t_cy = run_backend(compiled, indptr, concept_idx, corr, args.repeats)
            if not np.array_equal(out_py, out_cy):
                raise SystemExit("backend outputs differ; kernels are out of sync")
            print(
                f"{n_shots:>7} {args.concepts:>9} {t_py * 1e3:>10.2f}ms "
                f"{t_cy * 1e3:>10.2f}ms {t_py / t_cy:>8.1f}x"
            )
        else:
            print(f"{n_shots:>7} {args.concepts:>9} {t_py * 1e3:>10.2f}ms {'-':>12} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
