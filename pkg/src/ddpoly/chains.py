"""Chains of intermediate fields and the degree gaps between their polynomials.

Containment ``F_i ⊇ F_{i+1}`` is checked on differentials: every generator
of ``F_{i+1}`` must reduce to zero against a Gröbner basis of
``N_{F_i} + R``.  A gap ``deg(chi_i - chi_{i+1}) < d`` refutes a chain
length of ``d`` for that link; gap ``-1`` means equal polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import ContainmentViolated, NotFree, NotSingleGenerator, ValidationError
from .kaehler import DimensionReport, ExtensionPresentation, IntermediateFieldSpec, chi_intermediate
from .opalg import Operator, element_to_text, groebner, normal_form

__all__ = ["ChainSpec", "ChainAudit", "audit", "DimBoundReport", "degree_gap_audit", "theorem5_chain", "dim_bound_report"]


def _closed(gens) -> IntermediateFieldSpec:
    return IntermediateFieldSpec(tuple(gens), True)


@dataclass
class ChainSpec:
    X: ExtensionPresentation
    fields: list
    labels: list = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.fields:
            raise ValidationError("a chain needs at least one field")
        self.fields = [f if isinstance(f, IntermediateFieldSpec) else _closed(f) for f in self.fields]
        if not self.labels:
            self.labels = [_label(f) for f in self.fields]
        self.check()

    def check(self):
        for i in range(len(self.fields) - 1):
            outer = list(self.fields[i].generators) + list(self.X.relations)
            gb = groebner(outer)
            for g in self.fields[i + 1].generators:
                if not normal_form(g, gb).is_zero():
                    raise ContainmentViolated(
                        f"link {i}: {element_to_text(g)} is not in the submodule of the larger field")


def _label(F: IntermediateFieldSpec) -> str:
    if F.label:
        return F.label
    return "K<" + ", ".join(element_to_text(g) for g in F.generators) + ">"


@dataclass
class ChainAudit:
    polynomials: list
    gaps: list  # (i, deg(chi_i - chi_{i+1}))
    labels: list

    @property
    def strict(self) -> bool:
        return all(g >= 0 for _, g in self.gaps)

    def to_json(self) -> dict:
        return {
            "links": [
                {"index": i, "gap": g, "upper": self.labels[i], "lower": self.labels[i + 1],
                 "difference": (self.polynomials[i] - self.polynomials[i + 1]).to_text()}
                for i, g in self.gaps
            ],
            "polynomials": [p.to_text() for p in self.polynomials],
            "strict": self.strict,
        }


def degree_gap_audit(c: ChainSpec) -> list:
    """``[(i, deg(chi_i - chi_{i+1}))]`` along the chain, ``-1`` for equal polynomials."""
    return _audit(c).gaps


def _audit(c: ChainSpec) -> ChainAudit:
    c.check()
    polys = [_chi(c.X, F).polynomial for F in c.fields]
    gaps = [(i, (polys[i] - polys[i + 1]).degree) for i in range(len(polys) - 1)]
    return ChainAudit(polys, gaps, list(c.labels))


def audit(c: ChainSpec) -> ChainAudit:
    return _audit(c)


def _chi(X, F) -> DimensionReport:
    return chi_intermediate(X, F)


def _basic(alg, k: int) -> Operator:
    """``delta_k`` for ``k <= m``, otherwise ``alpha_{k-m} - 1`` (``k`` 1-based)."""
    m = alg.sig.m
    if k <= m:
        return alg.delta(k)
    return alg.alpha(k - m) - 1


def theorem5_chain(X: ExtensionPresentation, caps: Sequence[int]) -> ChainSpec:
    """Strictly descending chain from ``K<x>`` to ``K`` through all ``m+n`` directions.

    Level ``k`` walks ``K<fixed, P*b_k^j x>`` for ``j < caps[k]`` and then
    descends into level ``k+1`` with ``P*b_k^caps[k]`` while keeping
    ``P*b_k^(caps[k]+1) x`` fixed; the last level runs to ``caps[-1]+1``.
    Here ``b_k`` is ``delta_k`` or ``alpha_j - 1``.  Every link is a proper
    containment, so the polynomials strictly descend.
    """
    if not X.is_free:
        raise NotFree("the chain construction needs a free extension")
    if X.s != 1:
        raise NotSingleGenerator("the chain construction needs exactly one generator")
    alg = X.alg
    v = alg.sig.nvars
    caps = [int(c) for c in caps]
    if len(caps) != v or any(c < 0 for c in caps):
        raise ValidationError(f"need {v} nonnegative caps")
    x = alg.basis(1, 1)
    one = alg.scalar(1)
    fields: list[list] = []

    def level(k: int, fixed: list, P: Operator):
        b = _basic(alg, k + 1)
        top = caps[k] + 1 if k == v - 1 else caps[k]
        for j in range(top + 1 if k == v - 1 else top):
            fields.append(fixed + [(P * b ** j) * x])
        if k < v - 1:
            kept = fixed + [(P * b ** (caps[k] + 1)) * x]
            level(k + 1, kept, P * b ** caps[k])
            fields.append(kept)

    if v == 0:
        fields.append([x])
    else:
        level(0, [], one)
    fields.append([])
    return ChainSpec(X, [_closed(f) for f in fields])


@dataclass
class DimBoundReport:
    top_coefficients: list
    drops: list
    gaps: list
    type_lower_bound: int
    dim: int

    def to_json(self) -> dict:
        return {
            "top_coefficients": self.top_coefficients,
            "drops": self.drops,
            "gaps": [g for _, g in self.gaps],
            "type_lower_bound": self.type_lower_bound,
            "dim": self.dim,
        }


def dim_bound_report(X: ExtensionPresentation, k: int) -> DimBoundReport:
    """Top-coefficient drops along ``<e_1..e_k> ⊇ ... ⊇ <e_1> ⊇ 0``.

    Each drop is 1 and each gap is ``m+n``, which bounds the type from below
    by ``m+n`` and gives dimension ``k``.
    """
    if not X.is_free:
        raise NotFree("the dimension count needs a free extension")
    if X.s != k:
        raise ValidationError(f"expected {k} generators, the extension has {X.s}")
    alg = X.alg
    chain = ChainSpec(X, [_closed([alg.basis(k, i) for i in range(1, j + 1)]) for j in range(k, -1, -1)])
    res = _audit(chain)
    top = [p.coeff(alg.sig.nvars) for p in res.polynomials]
    drops = [a - b for a, b in zip(top, top[1:])]
    if sum(drops) != k or any(d != 1 for d in drops):
        raise AssertionError(f"unexpected top-coefficient drops {drops}")
    return DimBoundReport(top, drops, res.gaps, alg.sig.nvars if k else 0, sum(drops))

