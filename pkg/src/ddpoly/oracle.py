"""Brute-force ground truth by exact linear algebra.

Nothing here uses the Gröbner engine or the multiplication routine of the
operator algebra.  Multiples ``lam * g`` are built by applying one basic
operator at a time straight from the field actions::

    delta_i(c * mu * e) = delta_i(c) * mu * e + c * (mu + eps_i) * e
    alpha_j(c * mu * e) = alpha_j(c) * (mu + eps_j) * e

The span of all multiples with ``ord lam <= k`` is put in echelon form, and
the dimension of its intersection with a coordinate subspace is read off
from the pivots.  ``k`` grows until the requested table has not changed for
``patience`` consecutive sweeps; if that does not happen before
``closure_depth`` the computation stops with :class:`NotStabilized`.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import AmbientNotFree, NotStabilized
from .monoid import PartitionSpec, block_orders, enumerate_exponents

log = logging.getLogger(__name__)

__all__ = [
    "TruncationWindow",
    "OracleTable",
    "dim_intersection",
    "dim_intersection_blockwise",
    "in_span",
    "trdeg_monomial_field",
]


@dataclass(frozen=True)
class TruncationWindow:
    r_max: int
    closure_depth: int | None = None
    patience: int = 2

    def __post_init__(self):
        if self.r_max < 0:
            raise ValueError("r_max must be nonnegative")

    @property
    def cap(self) -> int:
        return self.closure_depth if self.closure_depth is not None else self.r_max + 8


@dataclass
class OracleTable:
    values: dict = dc_field(default_factory=dict)  # r (int or tuple) -> dimension
    sweeps: int = 0
    depth: int = 0

    def __getitem__(self, r):
        return self.values[r]

    def as_list(self) -> list[int]:
        return [self.values[r] for r in sorted(self.values)]


# -- multiples ----------------------------------------------------------------


def _apply_basic(alg, slot: int, terms: dict) -> dict:
    F = alg.field
    m = alg.sig.m
    out: dict = {}

    def put(k, c):
        cur = out.get(k)
        val = c if cur is None else cur + c
        if val:
            out[k] = val
        else:
            out.pop(k, None)

    for (comp, mu), c in terms.items():
        bumped = mu[:slot] + (mu[slot] + 1,) + mu[slot + 1:]
        if slot < m:
            dc = F.derive(slot, c)
            if dc:
                put((comp, mu), dc)
            put((comp, bumped), c)
        else:
            put((comp, bumped), F.translate(slot - m, c))
    return out


class _MultipleTable:
    """``lam * g`` for every power product ``lam``, memoized by exponent."""

    def __init__(self, alg, g_terms: dict):
        self.alg = alg
        self.cache = {alg.sig.zero(): dict(g_terms)}

    def get(self, lam: tuple) -> dict:
        hit = self.cache.get(lam)
        if hit is not None:
            return hit
        slot = next(i for i, x in enumerate(lam) if x)
        prev = lam[:slot] + (lam[slot] - 1,) + lam[slot + 1:]
        hit = _apply_basic(self.alg, slot, self.get(prev))
        self.cache[lam] = hit
        return hit


def _rows(alg, gens: Sequence, depth: int, tables: list) -> list[dict]:
    while len(tables) < len(gens):
        tables.append(_MultipleTable(alg, gens[len(tables)].terms))
    sig = alg.sig.non_inversive()
    rows = []
    for lam in enumerate_exponents(sig, depth):
        for t in tables:
            r = t.get(lam)
            if r:
                rows.append(r)
    return rows


# -- elimination ----------------------------------------------------------------


def _pivots(rows: Iterable[dict], colkey) -> list:
    """Pivot columns of an echelon form where each pivot is its row's largest column."""
    rows = list(rows)
    cols = sorted({k for r in rows for k in r}, key=colkey)
    rank_of = {c: i for i, c in enumerate(cols)}
    if rows and hasattr(next(iter(rows[0].values())), "numer"):
        return [cols[c] for c in _pivots_fraction_free(rows, rank_of)]
    pivots: dict[int, dict] = {}
    for row in rows:
        r = {rank_of[k]: v for k, v in row.items()}
        while r:
            c = max(r)
            p = pivots.get(c)
            if p is None:
                inv = 1 / r[c]
                pivots[c] = {k: v * inv for k, v in r.items()}
                break
            f = r[c]
            for k, v in p.items():
                cur = r.get(k)
                nv = -f * v if cur is None else cur - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return [cols[c] for c in pivots]


class _SympyPolys:
    """Polynomial operations on sympy ring elements (the fallback)."""

    def convert(self, p):
        return p

    @staticmethod
    def gcd(a, b):
        return a.gcd(b)

    @staticmethod
    def exquo(a, b):
        return a.exquo(b)

    @staticmethod
    def is_ground(a) -> bool:
        return a.is_ground


class _FlintPolys:
    """The same operations on python-flint polynomials, much faster."""

    def __init__(self, ring):
        import flint

        self.flint = flint
        self.nvars = len(ring.gens)
        if self.nvars > 1:
            names = tuple(str(g) for g in ring.gens)
            self.ctx = flint.fmpq_mpoly_ctx.get(names, "lex")

    def _q(self, c):
        return self.flint.fmpq(int(c.numerator), int(c.denominator))

    def convert(self, p):
        if self.nvars == 1:
            coeffs = [0] * (max((m[0] for m in p.keys()), default=0) + 1)
            for (k,), c in p.terms():
                coeffs[k] = self._q(c)
            return self.flint.fmpq_poly(coeffs)
        return self.ctx.from_dict({m: self._q(c) for m, c in p.terms()})

    @staticmethod
    def gcd(a, b):
        return a.gcd(b)

    @staticmethod
    def exquo(a, b):
        return a / b

    def is_ground(self, a) -> bool:
        return (a.degree() if self.nvars == 1 else a.total_degree()) <= 0


def _poly_ops(ring):
    try:
        return _FlintPolys(ring)
    except ImportError:
        return _SympyPolys()


def _primitive(row: dict, ops) -> dict:
    g = None
    for v in row.values():
        g = v if g is None else ops.gcd(g, v)
        if ops.is_ground(g):
            return row
    if g is None:
        return row
    return {k: ops.exquo(v, g) for k, v in row.items()}


def _pivots_fraction_free(rows: list[dict], rank_of: dict) -> dict:
    """Same echelon structure over QQ(x..), working on numerators only.

    Rational-function arithmetic cancels a gcd after every operation; here
    a row is scaled to polynomial entries once, reduced by cross
    multiplication and made primitive when it becomes a pivot.
    """
    ops = _poly_ops(next(iter(rows[0].values())).numer.ring)
    pivots: dict[int, dict] = {}
    for row in rows:
        den = None
        for v in row.values():
            den = v.denom if den is None else den.lcm(v.denom)
        cur = {rank_of[k]: ops.convert(v.numer * den.exquo(v.denom)) for k, v in row.items()}
        steps = 0
        while cur:
            c = max(cur)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _primitive(cur, ops)
                break
            pc, rc = p[c], cur.pop(c)
            g = ops.gcd(pc, rc)
            pc, rc = ops.exquo(pc, g), ops.exquo(rc, g)
            cur = {k: v * pc for k, v in cur.items()}
            for k, v in p.items():
                if k == c:
                    continue
                nv = cur.get(k)
                nv = -rc * v if nv is None else nv - rc * v
                if nv:
                    cur[k] = nv
                else:
                    cur.pop(k, None)
            steps += 1
            if steps % 6 == 0 and cur:
                cur = _primitive(cur, ops)
    return pivots


def _graded_colkey(key):
    comp, e = key
    # an arbitrary graded order, deliberately unlike the Gröbner engine's
    return (sum(e), comp, tuple(reversed(e)))


def _total_table(alg, gens, r_max, depth, tables) -> list[int]:
    piv = _pivots(_rows(alg, gens, depth, tables), _graded_colkey)
    hist = [0] * (r_max + 1)
    for _, e in piv:
        o = sum(e)
        if o <= r_max:
            hist[o] += 1
    out, acc = [], 0
    for h in hist:
        acc += h
        out.append(acc)
    return out


def _as_terms(v) -> dict:
    return v.terms


def dim_intersection(gens: Sequence, X, w: TruncationWindow) -> OracleTable:
    """``r -> dim (N ∩ M_r)`` for ``r = 0..w.r_max`` in the module presented by ``X``.

    ``N`` is the submodule generated by ``gens`` and ``M_r`` the image of the
    elements of order ``<= r``; with relations ``R`` this is
    ``dim((N + R) ∩ F_r) - dim(R ∩ F_r)`` in the free module ``F``.
    """
    alg, rels = X.alg, list(X.relations)
    full = list(gens) + rels
    t_full: list = []
    t_rel: list = []
    prev = None
    streak = 0
    sweeps = 0
    for depth in range(0, w.cap + 1):
        sweeps += 1
        a = _total_table(alg, full, w.r_max, depth, t_full)
        b = _total_table(alg, rels, w.r_max, depth, t_rel) if rels else [0] * (w.r_max + 1)
        table = [x - y for x, y in zip(a, b)]
        if depth >= w.r_max:
            streak = streak + 1 if table == prev else 0
            if streak >= w.patience:
                return OracleTable(dict(enumerate(table)), sweeps, depth)
        prev = table
    raise NotStabilized(f"dimension table still changing at closure depth {w.cap}",
                        table=dict(enumerate(prev or [])))


def _box_tables(alg, gens, part: PartitionSpec, bounds: Sequence[int], depth, tables) -> dict:
    """``dim(U ∩ V_box)`` for every box ``<= bounds``, ``U`` the depth-truncated span."""
    rows = _rows(alg, gens, depth, tables)
    out = {}
    k = part.nblocks
    for prefix in itertools.product(*(range(b + 1) for b in bounds[:-1])):
        def colkey(key, prefix=prefix):
            comp, e = key
            bo = block_orders(e, part)
            outside = any(o > p for o, p in zip(bo, prefix))
            return (outside, bo[k - 1], sum(e), comp, e)

        piv = _pivots(rows, colkey) if rows else []
        counts = [0] * (bounds[-1] + 1)
        for key in piv:
            outside, last, *_ = colkey(key)
            if not outside and last <= bounds[-1]:
                counts[last] += 1
        acc = 0
        for j in range(bounds[-1] + 1):
            acc += counts[j]
            out[tuple(prefix) + (j,)] = acc
    return out


def dim_intersection_blockwise(gens: Sequence, X, part: PartitionSpec, bounds: Sequence[int],
                               w: TruncationWindow | None = None) -> OracleTable:
    """Blockwise analogue of :func:`dim_intersection` for every box ``r <= bounds``."""
    part.validate(X.alg.sig)
    bounds = tuple(int(b) for b in bounds)
    total = sum(bounds)
    w = w or TruncationWindow(total)
    cap = max(w.cap, total + 4)
    alg, rels = X.alg, list(X.relations)
    full = list(gens) + rels
    t_full: list = []
    t_rel: list = []
    prev = None
    streak = 0
    sweeps = 0
    for depth in range(0, cap + 1):
        if depth < total:
            continue
        sweeps += 1
        a = _box_tables(alg, full, part, bounds, depth, t_full)
        b = _box_tables(alg, rels, part, bounds, depth, t_rel) if rels else {}
        table = {r: a[r] - b.get(r, 0) for r in a}
        streak = streak + 1 if table == prev else 0
        if streak >= w.patience:
            return OracleTable(table, sweeps, depth)
        prev = table
    raise NotStabilized(f"blockwise table still changing at closure depth {cap}", table=prev)


def in_span(v, gens: Sequence, depth: int) -> bool:
    """Is ``v`` a combination of ``lam * g`` with ``ord lam <= depth``?"""
    if v.is_zero():
        return True
    alg = v.alg
    rows = _rows(alg, list(gens), depth, [])
    base = len(_pivots(rows, _graded_colkey))
    return len(_pivots(rows + [v.terms], _graded_colkey)) == base


def trdeg_monomial_field(monomials: Iterable[tuple[int, tuple]], r: int, X=None) -> int:
    """Transcendence degree of the ``r``-th piece of a field generated by monomial images.

    Distinct ``lam * eta_j`` of a free extension are algebraically
    independent, so the answer is the number of listed ``(j, lam)`` with
    ``ord lam <= r``.
    """
    if X is not None and list(X.relations):
        raise AmbientNotFree("monomial transcendence degree needs a free extension")
    return len({(j, tuple(lam)) for j, lam in monomials if sum(abs(x) for x in lam) <= r})
