"""Time the staircase counting kernels: numba against pure numpy.

    python benchmarks/bench_kernels.py [--repeat 5] [--points 200000]

Both backends live in ``ddpoly._accel``, so one process can time both no
matter how ``DDPOLY_DISABLE_NUMBA`` is set.  Outputs are compared before
anything is timed.
"""

import argparse
import time

import numpy as np

from ddpoly import _accel


def best_of(fn, args, repeat):
    fn(*args)  # warm-up, triggers compilation
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def mask_case(rng, npts, nleads, v, inv):
    points = rng.integers(-6 if inv else 0, 12, size=(npts, v), dtype=np.int64)
    leads = rng.integers(-3 if inv else 0, 6, size=(nleads, v), dtype=np.int64)
    inv_cols = np.zeros(v, dtype=np.bool_)
    if inv:
        inv_cols[v // 2:] = True
    return points, leads, inv_cols


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(args.seed)
    numba_mask, numba_joins = _accel._divisible_mask_numba, _accel._subset_joins_numba

    rows = []
    for v, nleads, inv in [(2, 8, False), (3, 16, False), (4, 16, True), (4, 64, False)]:
        case = mask_case(rng, args.points, nleads, v, inv)
        assert np.array_equal(numba_mask(*case), _accel._divisible_mask_numpy(*case))
        rows.append((f"divisible_mask v={v} leads={nleads}{' inv' if inv else ''}",
                     best_of(_accel._divisible_mask_numpy, case, args.repeat),
                     best_of(numba_mask, case, args.repeat)))
    for nleads, v in [(10, 3), (16, 4), (20, 4)]:
        leads = rng.integers(0, 6, size=(nleads, v), dtype=np.int64)
        a, b = numba_joins(leads), _accel._subset_joins_numpy(leads)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        rows.append((f"subset_joins leads={nleads} v={v}",
                     best_of(_accel._subset_joins_numpy, (leads,), args.repeat),
                     best_of(numba_joins, (leads,), args.repeat)))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy ms':>10}  {'numba ms':>10}  {'speedup':>8}")
    for name, tn, tj in rows:
        print(f"{name:<{width}}  {tn * 1e3:10.2f}  {tj * 1e3:10.2f}  {tn / tj:8.1f}x")


if __name__ == "__main__":
    main()
