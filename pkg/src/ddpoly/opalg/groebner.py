"""Left Gröbner bases of submodules of free modules over the operator ring.

Lead exponents behave multiplicatively: for a power product ``lam`` and an
element ``g`` the lead term of ``lam*g`` is ``lam + lexp(g)`` with coefficient
``alpha^l(lc(g))``, which is nonzero because translations act as
automorphisms and derivations only create lower terms.  Buchberger's
algorithm therefore carries over verbatim to left modules.

Termination: every element appended to the basis has a lead term
``(i, e)`` not divisible by the lead of any earlier element of the same
component.  The monomial submodule generated by the leads grows strictly at
each addition, and by Dickson's lemma an ascending chain of monomial
submodules of ``N^(m+n) x {1..s}`` stabilizes, so only finitely many elements
are ever appended.  Each S-pair is processed once, hence the loop stops.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..staircase import LeadSet
from .algebra import ModuleElement, OreAlgebra, TermOrder

__all__ = ["normal_form", "groebner", "lead_set", "is_member", "lead_exponent"]


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


class _Multiples:
    """Cache of ``lam * g`` products for a fixed basis."""

    def __init__(self, alg: OreAlgebra):
        self.alg = alg
        self._cache: dict = {}

    def get(self, lam: tuple, idx: int, g: ModuleElement) -> ModuleElement:
        key = (lam, idx)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.alg.monomial(lam) * g if any(lam) else g
            self._cache[key] = hit
        return hit


def lead_exponent(v: ModuleElement, order: TermOrder) -> tuple[int, tuple]:
    return order.lead(v)[0]


def _reduce(v: ModuleElement, basis: Sequence[ModuleElement], leads: Sequence,
            order: TermOrder, mults: _Multiples, full: bool = True) -> ModuleElement:
    alg = v.alg
    terms = dict(v.terms)
    done: dict = {}
    key = order.key
    while terms:
        top = max(terms, key=key)
        c = terms[top]
        comp, e = top
        for idx, (gcomp, ge) in enumerate(leads):
            if gcomp == comp and _divides(ge, e):
                prod = mults.get(_sub(e, ge), idx, basis[idx])
                lc = prod.terms[top]
                factor = c / lc
                for k, val in prod.terms.items():
                    cur = terms.get(k)
                    new = -factor * val if cur is None else cur - factor * val
                    if new:
                        terms[k] = new
                    else:
                        terms.pop(k, None)
                break
        else:
            done[top] = terms.pop(top)
            if not full:
                done.update(terms)
                break
    return ModuleElement(alg, v.rank, done)


def normal_form(v: ModuleElement, G: Sequence[ModuleElement], order: TermOrder | None = None) -> ModuleElement:
    """Fully reduce ``v`` by ``G``: no remaining term is divisible by a lead of ``G``."""
    order = order or TermOrder()
    G = [g for g in G if not g.is_zero()]
    if v.is_zero() or not G:
        return v
    leads = [order.lead(g)[0] for g in G]
    return _reduce(v, G, leads, order, _Multiples(v.alg))


def _monic(v: ModuleElement, order: TermOrder) -> ModuleElement:
    _, lc = order.lead(v)
    return v.scale(v.alg.field.one() / lc)


def _s_poly(f, g, lf, lg, alg) -> ModuleElement:
    u = tuple(max(a, b) for a, b in zip(lf[1], lg[1]))
    F = alg.monomial(_sub(u, lf[1])) * f
    G = alg.monomial(_sub(u, lg[1])) * g
    key = (lf[0], u)
    return F.scale(alg.field.one() / F.terms[key]) - G.scale(alg.field.one() / G.terms[key])


def groebner(gens: Iterable[ModuleElement], order: TermOrder | None = None) -> list[ModuleElement]:
    """Reduced left Gröbner basis, monic, sorted by increasing lead term.

    The result depends only on the submodule and the order, so permuting
    ``gens`` yields the identical list.
    """
    order = order or TermOrder()
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    alg = gens[0].alg
    basis: list[ModuleElement] = []
    leads: list = []
    mults = _Multiples(alg)
    pairs: list[tuple[int, int]] = []

    def add(h: ModuleElement):
        h = _monic(h, order)
        lh = order.lead(h)[0]
        for i, li in enumerate(leads):
            if li[0] == lh[0]:
                pairs.append((i, len(basis)))
        basis.append(h)
        leads.append(lh)

    for g in sorted(gens, key=lambda g: order.key(order.lead(g)[0])):
        h = _reduce(g, basis, leads, order, mults)
        if not h.is_zero():
            add(h)

    def pair_key(p):
        a, b = leads[p[0]], leads[p[1]]
        u = tuple(max(x, y) for x, y in zip(a[1], b[1]))
        return order.key((a[0], u)), p

    while pairs:
        pairs.sort(key=pair_key)
        i, j = pairs.pop(0)
        li, lj = leads[i], leads[j]
        # leads with coprime exponents still need checking in this noncommutative setting
        s = _s_poly(basis[i], basis[j], li, lj, alg)
        h = _reduce(s, basis, leads, order, mults)
        if not h.is_zero():
            add(h)

    return _interreduce(basis, order)


def _interreduce(basis: list[ModuleElement], order: TermOrder) -> list[ModuleElement]:
    items = sorted(basis, key=lambda g: order.key(order.lead(g)[0]))
    minimal: list[ModuleElement] = []
    for g in items:
        lg = order.lead(g)[0]
        if any(order.lead(h)[0][0] == lg[0] and _divides(order.lead(h)[0][1], lg[1]) for h in minimal):
            continue
        minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = normal_form(g, others, order) if others else g
        out.append(_monic(r, order))
    out.sort(key=lambda g: order.key(order.lead(g)[0]))
    return out


def is_member(v: ModuleElement, G: Sequence[ModuleElement], order: TermOrder | None = None) -> bool:
    """Membership test; ``G`` must be a Gröbner basis for ``order``."""
    return normal_form(v, G, order or TermOrder()).is_zero()


def lead_set(G: Sequence[ModuleElement], order: TermOrder | None = None, rank: int | None = None,
             sig=None) -> LeadSet:
    """Per-component antichain of lead exponents of a Gröbner basis."""
    order = order or TermOrder()
    if G:
        rank = G[0].rank if rank is None else rank
        sig = G[0].alg.sig if sig is None else sig
    if rank is None or sig is None:
        raise ValueError("lead_set of an empty basis needs rank and signature")
    comps: list[list] = [[] for _ in range(rank)]
    for g in G:
        comp, e = order.lead(g)[0]
        comps[comp].append(e)
    return LeadSet(sig, comps)
