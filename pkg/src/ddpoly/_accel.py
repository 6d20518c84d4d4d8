"""Integer kernels for staircase counting.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy one.
The numba path is used unless ``DDPOLY_DISABLE_NUMBA`` is set to a truthy
value or numba cannot be imported.  Both paths must return identical arrays;
``tests/test_accel.py`` holds them to that.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("DDPOLY_DISABLE_NUMBA", "").strip().lower()

try:  # pragma: no cover - depends on the environment
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


# -- divisibility mask ----------------------------------------------------------


def _divisible_mask_numpy(points, leads, inv_cols):
    if leads.shape[0] == 0 or points.shape[0] == 0:
        return np.zeros(points.shape[0], dtype=np.bool_)
    p = points[:, None, :]
    a = leads[None, :, :]
    plain = (a <= p)
    # same closed orthant and |a| <= |b| coordinatewise
    orth = ((p >= 0) & (a >= 0) & (a <= p)) | ((p <= 0) & (a <= 0) & (a >= p))
    ok = np.where(inv_cols[None, None, :], orth, plain)
    return ok.all(axis=2).any(axis=1)


def _divisible_mask_loop(points, leads, inv_cols):
    npts, v = points.shape
    nl = leads.shape[0]
    out = np.zeros(npts, dtype=np.bool_)
    for i in range(npts):
        for j in range(nl):
            good = True
            for c in range(v):
                a = leads[j, c]
                b = points[i, c]
                if inv_cols[c]:
                    if b >= 0:
                        if a < 0 or a > b:
                            good = False
                            break
                    else:
                        if a > 0 or a < b:
                            good = False
                            break
                elif a > b:
                    good = False
                    break
            if good:
                out[i] = True
                break
    return out


# -- subset joins for inclusion-exclusion -------------------------------------------


def _subset_joins_numpy(leads):
    v = leads.shape[1]
    joins = np.zeros((1, v), dtype=np.int64)
    signs = np.ones(1, dtype=np.int64)
    for row in leads:
        joins = np.concatenate([joins, np.maximum(joins, row[None, :])])
        signs = np.concatenate([signs, -signs])
    return joins, signs


def _subset_joins_loop(leads):
    nl, v = leads.shape
    total = 1 << nl
    joins = np.zeros((total, v), dtype=np.int64)
    signs = np.ones(total, dtype=np.int64)
    for mask in range(1, total):
        low = mask & (-mask)
        bit = 0
        while (1 << bit) != low:
            bit += 1
        rest = mask ^ low
        for c in range(v):
            x = joins[rest, c]
            y = leads[bit, c]
            joins[mask, c] = x if x > y else y
        signs[mask] = -signs[rest]
    return joins, signs


if HAVE_NUMBA:  # compiled lazily, so defining them costs nothing when disabled
    _divisible_mask_numba = njit(cache=True)(_divisible_mask_loop)
    _subset_joins_numba = njit(cache=True)(_subset_joins_loop)
else:  # pragma: no cover
    _divisible_mask_numba = None
    _subset_joins_numba = None


def divisible_mask(points: np.ndarray, leads: np.ndarray, inv_cols: np.ndarray) -> np.ndarray:
    """Boolean mask: is ``points[i]`` divisible by some row of ``leads``."""
    points = np.ascontiguousarray(points, dtype=np.int64).reshape(-1, inv_cols.shape[0])
    leads = np.ascontiguousarray(leads, dtype=np.int64).reshape(-1, inv_cols.shape[0])
    inv_cols = np.ascontiguousarray(inv_cols, dtype=np.bool_)
    if USE_NUMBA:
        return _divisible_mask_numba(points, leads, inv_cols)
    return _divisible_mask_numpy(points, leads, inv_cols)


def subset_joins(leads: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coordinatewise maxima over all subsets of ``leads`` with signs ``(-1)^|S|``.

    Row ``mask`` of the result is the join of the leads selected by the bits of
    ``mask``; row 0 is the empty join (all zeros).
    """
    leads = np.ascontiguousarray(leads, dtype=np.int64)
    if leads.ndim != 2:
        raise ValueError("leads must be a 2-D array")
    if leads.shape[0] > 24:
        raise ValueError(f"{leads.shape[0]} leads is too many for inclusion-exclusion")
    if USE_NUMBA:
        return _subset_joins_numba(leads)
    return _subset_joins_numpy(leads)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
