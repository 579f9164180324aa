"""Compiled kernels against the numpy fallback on the suite's hot loops.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Both backends
are checked for identical output before timing.
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from cantor_lab._kernels import HAVE_COMPILED, get_backend
from cantor_lab.cylinders import F1
from cantor_lab.ruler import gamma_bytes
from cantor_lab.words import DescribedPoint


def workloads():
    gamma = gamma_bytes(DescribedPoint.parse("01|0"), 32)
    fam = F1()
    stages = [fam.stage(n, inverse=e < 0) for n, e in ((0, 1), (2, -1), (1, 1), (3, -1))]
    masks = np.arange(1 << 16, dtype=np.uint64)
    doubled = get_backend("python").transform_relations(masks, 4, "r")
    return {
        "ruler_word 2^20": lambda k: k.ruler_word(gamma, 1 << 20),
        "rewrite_grid depth 16": lambda k: k.rewrite_grid(stages, 16),
        "relation_profiles n=4": lambda k: k.relation_profiles(masks, 4),
        "relation_profiles n=8": lambda k: k.relation_profiles(doubled, 8),
        "transform_relations sp": lambda k: k.transform_relations(masks, 4, "sp"),
    }


def _same(a, b) -> bool:
    if isinstance(a, bytes):
        return a == b
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not HAVE_COMPILED:
        print("compiled kernels not built; only the fallback can be timed", file=sys.stderr)
    py = get_backend("python")
    cy = get_backend("cython") if HAVE_COMPILED else None
    print(f"{'kernel':<26}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in workloads().items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<26}{t_py:>12.2f}{'-':>12}{'-':>10}")
            continue
        if not _same(fn(py), fn(cy)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<26}{t_py:>12.2f}{t_cy:>12.2f}{t_py / t_cy:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
