"""Benchmark the compiled mod-p echelon kernel against the numpy fallback.

Inserts batches of random rows into a ModEchelon basis with each backend
and reports wall-clock times and the speedup.  Both backends produce bit
identical bases; this only measures the inner reduction loop.
"""

import argparse
import random
import time

import numpy as np

from qmbmw.kernels import BACKEND, ModEchelon, _reduce_rows_py
from qmbmw.scalars import PRIMES


def make_rows(rng, count, ncols, density, p):
    rows = []
    for _ in range(count):
        row = np.zeros(ncols, dtype=np.int64)
        for j in range(ncols):
            if rng.random() < density:
                row[j] = rng.randrange(1, p)
        rows.append(row)
    return rows


def run(rows, ncols, p, impl):
    ech = ModEchelon(ncols, p, impl=impl)
    t0 = time.perf_counter()
    for row in rows:
        ech.insert(row.copy())
    return time.perf_counter() - t0, ech


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cols", type=int, nargs="+",
                        default=[81, 729, 6561])
    parser.add_argument("--rows", type=int, default=0,
                        help="rows per batch (default: 1.2x cols)")
    parser.add_argument("--density", type=float, default=0.3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    p = PRIMES[0]
    print("compiled backend available: %s" % (BACKEND == "cython"))
    print("%8s %8s %12s %12s %9s" % ("cols", "rank", "compiled", "python", "speedup"))
    for ncols in args.cols:
        nrows = args.rows or int(1.2 * ncols)
        rng = random.Random(args.seed)
        rows = make_rows(rng, nrows, ncols, args.density, p)
        t_fast, e1 = run(rows, ncols, p, None)
        t_slow, e2 = run(rows, ncols, p, _reduce_rows_py)
        assert e1.rank == e2.rank
        assert np.array_equal(e1.basis[:e1.rank], e2.basis[:e2.rank])
        print("%8d %8d %10.3fs %10.3fs %8.1fx"
              % (ncols, e1.rank, t_fast, t_slow, t_slow / max(t_fast, 1e-9)))


if __name__ == "__main__":
    main()
