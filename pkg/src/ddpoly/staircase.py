"""Counting lattice points inside and outside a monomial staircase.

A :class:`LeadSet` holds, per module component, an antichain of lead
exponents.  ``count_exact`` counts the divisible points of a bounded region by
enumeration; ``complement_polynomial`` produces the eventual counting
polynomial of the non-divisible points by inclusion-exclusion over
coordinatewise joins, together with the argument from which it is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .errors import InversiveUnsupported, SignatureMismatch
from .monoid import (
    Bound,
    PartitionSpec,
    Signature,
    count_lattice,
    divides,
    enumerate_array,
)
from .numpoly import MultiNumericalPolynomial, NumericalPolynomial, shifted_binomial

__all__ = [
    "LeadSet",
    "count_exact",
    "count_table",
    "complement_count",
    "complement_polynomial",
    "staircase_polynomial",
]


def _minimalize(sig: Signature, exps: Iterable) -> frozenset:
    pts = sorted({sig.check(e) for e in exps}, key=lambda e: (sum(abs(x) for x in e), e))
    kept: list = []
    for e in pts:
        if not any(divides(k, e, sig) for k in kept):
            kept.append(e)
    return frozenset(kept)


@dataclass(frozen=True)
class LeadSet:
    """Per-component antichains of lead exponents sharing one signature."""

    sig: Signature
    components: tuple[frozenset, ...]

    def __init__(self, sig: Signature, components: Sequence[Iterable]):
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "components", tuple(_minimalize(sig, c) for c in components))
        if not self.components:
            raise ValueError("a LeadSet needs at least one component")

    @property
    def s(self) -> int:
        return len(self.components)

    def sorted_component(self, i: int) -> list:
        return sorted(self.components[i], key=lambda e: (sum(abs(x) for x in e), e))

    def leads_array(self, i: int) -> np.ndarray:
        rows = self.sorted_component(i)
        if not rows:
            return np.zeros((0, self.sig.nvars), dtype=np.int64)
        return np.asarray(rows, dtype=np.int64)

    def to_json(self) -> list[list[list[int]]]:
        return [[list(e) for e in self.sorted_component(i)] for i in range(self.s)]


def count_exact(L: LeadSet, bound: Bound, part: PartitionSpec | None = None) -> int:
    """Number of pairs ``(i, e)`` with ``e`` in the bounded region and divisible by a lead of component ``i``."""
    pts = enumerate_array(L.sig, bound, part)
    inv = L.sig.inv_cols()
    return int(sum(_accel.divisible_mask(pts, L.leads_array(i), inv).sum() for i in range(L.s)))


def count_table(L: LeadSet, r_max: int) -> list[int]:
    """``[count_exact(L, r) for r in 0..r_max]`` from a single enumeration."""
    pts = enumerate_array(L.sig, r_max)
    ords = np.abs(pts).sum(axis=1)
    inv = L.sig.inv_cols()
    hist = np.zeros(r_max + 1, dtype=np.int64)
    for i in range(L.s):
        mask = _accel.divisible_mask(pts, L.leads_array(i), inv)
        hist += np.bincount(ords[mask], minlength=r_max + 1)[: r_max + 1]
    return [int(x) for x in np.cumsum(hist)]


def complement_count(L: LeadSet, bound: Bound, part: PartitionSpec | None = None) -> int:
    return L.s * count_lattice(L.sig, bound, part) - count_exact(L, bound, part)


def _aggregate(keys: np.ndarray, signs: np.ndarray) -> dict[tuple[int, ...], int]:
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    weights = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(weights, inverse.reshape(-1), signs)
    return {tuple(int(x) for x in row): int(w) for row, w in zip(uniq, weights) if w}


def complement_polynomial(L: LeadSet, sig: Signature | None = None,
                          part: PartitionSpec | None = None):
    """Eventual counting polynomial of the points outside the staircase.

    Returns ``(polynomial, threshold)``.  Without a partition the polynomial is
    univariate in the total order and ``threshold`` is an int; with a
    partition it is multivariate in the block orders and ``threshold`` is a
    tuple with one entry per block.  The polynomial agrees with the exact
    count at every argument ``>= threshold`` (componentwise).
    """
    sig = sig or L.sig
    if sig != L.sig:
        raise SignatureMismatch("LeadSet built for a different signature")
    if sig.inversive:
        raise InversiveUnsupported("closed-form counting needs nonnegative exponents")
    v = sig.nvars
    if part is None:
        acc: dict[int, int] = {}
        for i in range(L.s):
            joins, signs = _accel.subset_joins(L.leads_array(i))
            for (c,), w in _aggregate(joins.sum(axis=1, keepdims=True), signs).items():
                acc[c] = acc.get(c, 0) + w
        poly = NumericalPolynomial()
        threshold = 0
        for c, w in sorted(acc.items()):
            if w:
                poly = poly + w * shifted_binomial(c, v)
                threshold = max(threshold, c)
        return poly, threshold

    part.validate(sig)
    ind = part.indicator()
    sizes = part.sizes
    acc_multi: dict[tuple[int, ...], int] = {}
    for i in range(L.s):
        joins, signs = _accel.subset_joins(L.leads_array(i))
        for key, w in _aggregate(joins @ ind, signs).items():
            acc_multi[key] = acc_multi.get(key, 0) + w
    coeffs: dict[tuple[int, ...], int] = {}
    threshold = [0] * part.nblocks
    for key, w in acc_multi.items():
        if not w:
            continue
        threshold = [max(a, b) for a, b in zip(threshold, key)]
        factors = [shifted_binomial(c, b).coeffs for c, b in zip(key, sizes)]
        for idx in itertools.product(*(range(len(f)) for f in factors)):
            term = w
            for f, j in zip(factors, idx):
                term *= f[j]
            if term:
                coeffs[idx] = coeffs.get(idx, 0) + term
    return MultiNumericalPolynomial(sizes, coeffs), tuple(threshold)


def staircase_polynomial(L: LeadSet, part: PartitionSpec | None = None):
    """Eventual count of the divisible points, ``s * |Lambda| - complement``."""
    comp, threshold = complement_polynomial(L, part=part)
    v = L.sig.nvars
    if part is None:
        return L.s * NumericalPolynomial.binomial(v) - comp, threshold
    full = _full_box(part, L.s)
    return full - comp, threshold


def _full_box(part: PartitionSpec, s: int) -> MultiNumericalPolynomial:
    return MultiNumericalPolynomial(part.sizes, {part.sizes: s})
