"""Dimension polynomials of presented extensions and of their intermediate fields.

An extension ``L = K<eta_1..eta_s>`` is given by a presentation of its module
of differentials ``M = D^s / R``.  An intermediate field ``F`` is given by the
differentials ``d zeta`` of its generators; they span the submodule ``N``.
Both polynomials are dimension functions of the graded filtration::

    chi_L(r) = dim M_r                 = s*|Lambda(r)| - #lead(R)(r)
    chi_F(r) = dim (N ∩ M_r)           = #lead(N + R)(r) - #lead(R)(r)

where ``#lead(G)(r)`` counts staircase points of order ``<= r``.  That
count equals ``dim (G ∩ F_r)`` because the term order is graded.

Blockwise (multivariate) counts need more care.  Lead counting in a box is
exact only when every basis element is dominated blockwise by its own lead.
When that fails the exact values come from linear algebra on
``{lam*g : ord lam + ord g <= R}``, which spans ``N ∩ F_R`` for a graded
basis.  The polynomial is then interpolated and confirmed on extra layers.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from . import oracle
from .errors import (
    AmbientNotFree,
    EmptySet,
    NonMonomialGenerator,
    NotEventuallyPolynomial,
    NotSigmaDeltaClosed,
    OracleMismatch,
    TransitionNotInvertible,
    ValidationError,
    WindowTooSmall,
)
from .monoid import PartitionSpec, block_orders, count_lattice, enumerate_exponents
from .numpoly import (
    MultiNumericalPolynomial,
    NumericalPolynomial,
    interpolate,
    invariants,
    multi_invariants,
)
from .opalg import ModuleElement, Operator, OreAlgebra, TermOrder, element_to_text, groebner, lead_set, normal_form
from .staircase import LeadSet, count_exact, count_table, staircase_polynomial

log = logging.getLogger(__name__)

__all__ = [
    "ExtensionPresentation",
    "IntermediateFieldSpec",
    "DimensionReport",
    "OracleRecord",
    "ProbeReport",
    "ComparisonReport",
    "chi_extension",
    "chi_intermediate",
    "quasi_polynomial_probe",
    "regenerate",
    "compare_generator_sets",
]


@dataclass(frozen=True)
class ExtensionPresentation:
    """``L = K<eta_1..eta_s>`` through ``Omega = D^s / <relations>``."""

    alg: OreAlgebra
    s: int
    relations: tuple = ()

    def __post_init__(self):
        if self.s < 1:
            raise ValidationError("an extension needs at least one generator")
        rels = tuple(self.relations)
        for r in rels:
            if not isinstance(r, ModuleElement) or r.rank != self.s or r.alg is not self.alg:
                raise ValidationError("relations must be elements of the rank-s free module")
        object.__setattr__(self, "relations", rels)

    @classmethod
    def free(cls, alg: OreAlgebra, s: int) -> "ExtensionPresentation":
        return cls(alg, s, ())

    @property
    def sig(self):
        return self.alg.sig

    @property
    def is_free(self) -> bool:
        return all(r.is_zero() for r in self.relations)

    def generators(self) -> list[ModuleElement]:
        return [self.alg.basis(self.s, i) for i in range(1, self.s + 1)]


@dataclass(frozen=True)
class IntermediateFieldSpec:
    """``F = K<zeta_1..zeta_k>`` given by the differentials ``d zeta_i``.

    ``sigma_delta_closed`` is the caller's assertion that ``F`` is closed
    under all basic operators; without it no polynomial need exist.
    """

    generators: tuple
    sigma_delta_closed: bool = False
    label: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        if any(g.is_zero() for g in gens):
            raise ValidationError("intermediate field generators must be nonzero")
        object.__setattr__(self, "generators", gens)


@dataclass
class OracleRecord:
    r_max: int
    table: dict
    agrees: bool
    mismatches: list = dc_field(default_factory=list)
    depth: int = 0

    def to_json(self) -> dict:
        return {
            "r_max": self.r_max,
            "table": _table_json(self.table),
            "agrees": self.agrees,
            "mismatches": [[_key_json(r), a, b] for r, a, b in self.mismatches],
            "depth": self.depth,
        }


@dataclass
class DimensionReport:
    kind: str  # "extension" | "intermediate"
    polynomial: object  # NumericalPolynomial | MultiNumericalPolynomial
    threshold: object  # int | tuple
    invariants: dict
    table: dict
    method: str = "staircase"
    basis: list = dc_field(default_factory=list)
    relation_basis: list = dc_field(default_factory=list)
    oracle: OracleRecord | None = None
    filtration_check: bool | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def multivariate(self) -> bool:
        return isinstance(self.polynomial, MultiNumericalPolynomial)

    def triple(self) -> tuple:
        inv = self.invariants
        if self.multivariate:
            return inv["d"], tuple(sorted(inv["top_terms"].items())), inv["a_caps"]
        return inv["d"], inv["c_d"], inv["c_top"]

    def to_json(self) -> dict:
        inv = dict(self.invariants)
        if self.multivariate:
            inv["top_terms"] = [[list(k), v] for k, v in sorted(inv["top_terms"].items())]
            inv["E"] = sorted(list(k) for k in inv["E"])
            inv["E_prime"] = sorted(list(k) for k in inv["E_prime"])
        return {
            "kind": self.kind,
            "polynomial": self.polynomial.to_json(),
            "polynomial_text": self.polynomial.to_text(),
            "threshold": _key_json(self.threshold),
            "invariants": inv,
            "table": _table_json(self.table),
            "method": self.method,
            "basis": list(self.basis),
            "relation_basis": list(self.relation_basis),
            "oracle": self.oracle.to_json() if self.oracle else None,
            "filtration_check": self.filtration_check,
            "notes": list(self.notes),
        }


def _key_json(k):
    return list(k) if isinstance(k, tuple) else k


def _table_json(table: dict) -> list:
    return [[_key_json(r), v] for r, v in sorted(table.items())]


# -- the dimension function of (gens + R) modulo R ------------------------------


class _Filtration:
    """``r -> dim((<gens> + R) ∩ F_r) - dim(R ∩ F_r)`` for a fixed presentation."""

    def __init__(self, X: ExtensionPresentation, gens: Sequence[ModuleElement] | None):
        self.X = X
        self.order = TermOrder()
        self.rel_gb = groebner(X.relations, self.order)
        self.L_rel = lead_set(self.rel_gb, self.order, X.s, X.sig)
        if gens is None:
            self.full_gb = [X.alg.basis(X.s, i) for i in range(1, X.s + 1)]
        else:
            reduced = [normal_form(g, self.rel_gb, self.order) for g in gens]
            self.full_gb = groebner(list(reduced) + list(X.relations), self.order)
        self.L_full = lead_set(self.full_gb, self.order, X.s, X.sig)

    def module_rank(self) -> int:
        full = sum(1 for i in range(self.X.s) if self.L_full.sorted_component(i))
        rel = sum(1 for i in range(self.X.s) if self.L_rel.sorted_component(i))
        return full - rel

    # univariate
    def polynomial(self):
        pf, tf = staircase_polynomial(self.L_full)
        pr, tr = staircase_polynomial(self.L_rel)
        return pf - pr, max(tf, tr)

    def table(self, r_max: int) -> dict:
        a = count_table(self.L_full, r_max)
        b = count_table(self.L_rel, r_max)
        return {r: x - y for r, (x, y) in enumerate(zip(a, b))}

    # blockwise
    def blockwise(self, part: PartitionSpec, table_bound: int):
        """``(poly, threshold, table, method)`` for the box filtration of ``part``."""
        sides = []
        for gb, L in ((self.full_gb, self.L_full), (self.rel_gb, self.L_rel)):
            sides.append(_BoxCounter(self.X, gb, L, part))
        k = part.nblocks
        if all(sd.dominated for sd in sides):
            (pf, tf), (pr, tr) = (staircase_polynomial(sd.L, part) for sd in sides)
            poly = pf - pr
            threshold = tuple(max(a, b) for a, b in zip(tf, tr))
            method = "staircase"
        else:
            poly, threshold = _fit_multi(lambda r: sides[0].value(r) - sides[1].value(r), part)
            method = "linear-algebra"
        table = {}
        for r in itertools.product(range(table_bound + 1), repeat=k):
            table[r] = sides[0].value(r) - sides[1].value(r)
        return poly, threshold, table, method


class _BoxCounter:
    """``dim(<G> ∩ V_box)`` for a graded Gröbner basis ``G``."""

    def __init__(self, X, gb, L: LeadSet, part: PartitionSpec):
        self.X, self.gb, self.L, self.part = X, gb, L, part
        self.order = TermOrder()
        self.dominated = all(self._dominated(g) for g in gb)
        self._cache: dict = {}
        self._span_depth = -1
        self._rows: list = []

    def _dominated(self, g) -> bool:
        lead = block_orders(self.order.lead(g)[0][1], self.part)
        return all(
            all(b <= a for a, b in zip(lead, block_orders(e, self.part))) for _, e in g.terms
        )

    def value(self, r: tuple) -> int:
        r = tuple(r)
        if self.dominated:
            return count_exact(self.L, r, self.part) if self.gb else 0
        hit = self._cache.get(r)
        if hit is None:
            self._fill(r)
            hit = self._cache[r]
        return hit

    def _fill(self, r: tuple):
        # every box sharing r's prefix in one elimination
        total = sum(r)
        if total > self._span_depth:
            alg = self.X.alg
            sig = alg.sig
            rows = []
            for g in self.gb:
                for lam in enumerate_exponents(sig, total - g.ord) if total >= g.ord else []:
                    rows.append((alg.monomial(lam) * g).terms if any(lam) else g.terms)
            self._rows = rows
            self._span_depth = total
        k = self.part.nblocks
        prefix = r[:-1]
        part = self.part

        def colkey(key):
            comp, e = key
            bo = block_orders(e, part)
            return (any(o > p for o, p in zip(bo, prefix)), bo[k - 1], sum(e), e, -comp)

        piv = _echelon_pivots(self._rows, colkey)
        counts: dict[int, int] = {}
        for key in piv:
            outside, last, *_ = colkey(key)
            if not outside:
                counts[last] = counts.get(last, 0) + 1
        # the span is complete only up to total order self._span_depth
        acc = 0
        for j in range(0, r[-1] + 1):
            acc += counts.get(j, 0)
            if sum(prefix) + j <= self._span_depth:
                self._cache[prefix + (j,)] = acc


def _echelon_pivots(rows: Iterable[dict], colkey) -> list:
    rows = list(rows)
    cols = sorted({k for row in rows for k in row}, key=colkey)
    rank_of = {c: i for i, c in enumerate(cols)}
    pivots: dict[int, dict] = {}
    for row in rows:
        cur = {rank_of[k]: v for k, v in row.items()}
        while cur:
            c = max(cur)
            p = pivots.get(c)
            if p is None:
                inv = 1 / cur[c]
                pivots[c] = {k: v * inv for k, v in cur.items()}
                break
            f = cur[c]
            for k, v in p.items():
                nv = cur.get(k, 0) - f * v
                if nv:
                    cur[k] = nv
                else:
                    cur.pop(k, None)
    return [cols[c] for c in pivots]


def _fit_multi(value, part: PartitionSpec, confirm: int = 2, max_start: int = 12):
    """Interpolate a box-count function; accept the first start confirmed on extra layers."""
    from sympy import Matrix, Rational, binomial

    sizes = part.sizes
    idxs = list(itertools.product(*(range(c + 1) for c in sizes)))
    for t0 in range(max_start + 1):
        fit_pts = [tuple(t0 + i for i in idx) for idx in idxs]
        A = Matrix([[_binom_prod(p, idx) for idx in idxs] for p in fit_pts])
        b = Matrix([value(p) for p in fit_pts])
        sol = A.LUsolve(b)
        coeffs = {}
        ok = True
        for idx, c in zip(idxs, sol):
            c = Rational(c)
            if c.q != 1:
                ok = False
                break
            if c:
                coeffs[idx] = int(c)
        if not ok:
            continue
        P = MultiNumericalPolynomial(sizes, coeffs)
        check = itertools.product(*(range(t0, t0 + c + 1 + confirm) for c in sizes))
        if all(P(*p) == value(p) for p in check):
            return P, tuple([t0] * part.nblocks)
    raise NotEventuallyPolynomial(f"box counts not confirmed polynomial from any start <= {max_start}")


def _binom_prod(point, idx) -> int:
    out = 1
    for r, i in zip(point, idx):
        out *= _binom_int(r + i, i)
    return out


def _binom_int(a: int, i: int) -> int:
    num = 1
    for j in range(i):
        num *= a - j
    den = 1
    for j in range(1, i + 1):
        den *= j
    return num // den


# -- reports ------------------------------------------------------------------------


def _univariate_invariants(poly: NumericalPolynomial, X, rank: int) -> dict:
    d, cd, ctop = invariants(poly, X.sig.m, X.sig.n)
    return {"d": d, "c_d": cd, "c_top": ctop, "module_rank": rank}


def _multi_invariants(poly: MultiNumericalPolynomial, rank: int) -> dict:
    try:
        inv = multi_invariants(poly)
    except EmptySet:
        inv = {"d": -1, "top_terms": {}, "a_caps": 0, "E": set(), "E_prime": set()}
    inv["module_rank"] = rank
    return inv


def _verify_univariate(report: DimensionReport, gens, X, verify: int, closure_depth=None):
    w = oracle.TruncationWindow(verify, closure_depth)
    tab = oracle.dim_intersection(gens, X, w)
    mism = []
    for r in range(verify + 1):
        exact = report.table.get(r)
        if exact is None:
            exact = _Filtration(X, gens).table(verify)[r]
        if tab[r] != exact:
            mism.append((r, exact, tab[r]))
        elif r >= report.threshold and report.polynomial(r) != tab[r]:
            mism.append((r, report.polynomial(r), tab[r]))
    report.oracle = OracleRecord(verify, dict(tab.values), not mism, mism, tab.depth)
    if mism:
        raise OracleMismatch(f"{report.kind}: oracle disagrees at r = {[m[0] for m in mism]}",
                             details=report.oracle.to_json())


def _verify_blockwise(report: DimensionReport, gens, X, part, verify: int, closure_depth=None):
    bounds = (verify,) * part.nblocks
    w = oracle.TruncationWindow(sum(bounds), closure_depth)
    tab = oracle.dim_intersection_blockwise(gens, X, part, bounds, w)
    mism = []
    for r, v in sorted(tab.values.items()):
        exact = report.table.get(r)
        if exact is not None and exact != v:
            mism.append((r, exact, v))
        elif all(a >= b for a, b in zip(r, report.threshold)) and report.polynomial(*r) != v:
            mism.append((r, report.polynomial(*r), v))
    report.oracle = OracleRecord(verify, dict(tab.values), not mism, mism, tab.depth)
    if mism:
        raise OracleMismatch(f"{report.kind}: blockwise oracle disagrees at {[m[0] for m in mism]}",
                             details=report.oracle.to_json())


def _build(kind, X, gens, part, r_table, verify, closure_depth, notes) -> DimensionReport:
    filt = _Filtration(X, gens)
    rank = filt.module_rank()
    basis = [element_to_text(g) for g in filt.full_gb] if gens is not None else []
    rel_basis = [element_to_text(g) for g in filt.rel_gb]
    if part is None:
        poly, threshold = filt.polynomial()
        bound = max(r_table if r_table is not None else 0, threshold + 4, verify or 0)
        table = filt.table(bound)
        bad = [r for r in range(threshold, bound + 1) if poly(r) != table[r]]
        if bad:  # cannot happen for a correct staircase; fail loudly
            raise AssertionError(f"staircase polynomial disagrees with exact count at {bad}")
        report = DimensionReport(kind, poly, threshold, _univariate_invariants(poly, X, rank), table,
                                 "staircase", basis, rel_basis, notes=notes)
        if report.invariants["c_top"] != rank:
            raise AssertionError("top coefficient differs from the module rank")
        if verify is not None:
            _verify_univariate(report, _oracle_gens(X, gens), X, verify, closure_depth)
        return report

    part.validate(X.sig)
    tb = r_table if r_table is not None else 3
    if verify is not None:
        tb = max(tb, verify)
    poly, threshold, table, method = filt.blockwise(part, tb)
    if method != "staircase":
        notes = notes + ["some basis element is not blockwise dominated by its lead; "
                         "box counts from exact linear algebra"]
    report = DimensionReport(kind, poly, threshold, _multi_invariants(poly, rank), table, method,
                             basis, rel_basis, notes=notes)
    if verify is not None:
        _verify_blockwise(report, _oracle_gens(X, gens), X, part, verify, closure_depth)
    return report


def _oracle_gens(X, gens):
    return X.generators() if gens is None else list(gens)


def chi_extension(X: ExtensionPresentation, part: PartitionSpec | None = None, *,
                  r_table: int | None = None, verify: int | None = None,
                  closure_depth: int | None = None) -> DimensionReport:
    """Dimension polynomial of ``L`` over ``K``; ``c_{m+n}`` is the transcendence degree of ``L``.

    With ``verify`` the exact table is checked against the brute-force
    oracle up to that order (per block for a partition) and a mismatch
    raises :class:`OracleMismatch`.
    """
    return _build("extension", X, None, part, r_table, verify, closure_depth, [])


def chi_intermediate(X: ExtensionPresentation, F: IntermediateFieldSpec, part: PartitionSpec | None = None,
                     *, r_table: int | None = None, verify: int | None = None,
                     closure_depth: int | None = None) -> DimensionReport:
    """Dimension polynomial of an intermediate field through ``r -> dim(N ∩ M_r)``."""
    if not F.sigma_delta_closed:
        raise NotSigmaDeltaClosed(
            "the generated field must be declared closed under the basic operators; "
            "otherwise its transcendence degrees need not be polynomial (see quasi_polynomial_probe)"
        )
    for g in F.generators:
        if g.rank != X.s or g.alg is not X.alg:
            raise ValidationError("intermediate field generators must live in the presented module")
    notes = []
    report = _build("intermediate", X, list(F.generators), part, r_table, verify, closure_depth, notes)
    report.filtration_check = _monomial_filtration_check(X, F, report) if part is None else None
    return report


def _monomial_filtration_check(X, F, report) -> bool | None:
    """For monomial generators of a free extension compare with the monomial-closure count.

    ``F ∩ L_r`` then contains the images ``lam*mu*eta_j`` of order ``<= r``
    and their number must match ``dim(N ∩ M_r)``.
    """
    if not X.is_free or not all(g.is_monomial() for g in F.generators):
        return None
    keys = [next(iter(g.terms)) for g in F.generators]
    bound = max(report.table)
    mons = set()
    for lam in enumerate_exponents(X.sig, bound):
        for comp, mu in keys:
            e = tuple(a + b for a, b in zip(lam, mu))
            if sum(e) <= bound:
                mons.add((comp, e))
    ok = all(oracle.trdeg_monomial_field(mons, r) == v for r, v in report.table.items())
    if not ok:
        report.notes.append("monomial-closure count differs from dim(N ∩ M_r)")
    return ok


# -- fields without the closure assertion -----------------------------------------


@dataclass
class ProbeReport:
    values: dict
    verdict: str  # "polynomial" | "not_eventually_polynomial"
    polynomial: NumericalPolynomial | None = None
    threshold: int | None = None
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "values": _table_json(self.values),
            "verdict": self.verdict,
            "polynomial": self.polynomial.to_json() if self.polynomial is not None else None,
            "polynomial_text": self.polynomial.to_text() if self.polynomial is not None else None,
            "threshold": self.threshold,
            "witness": self.witness,
        }


def quasi_polynomial_probe(X: ExtensionPresentation, generators: Iterable, r_max: int,
                           r_min: int = 0) -> ProbeReport:
    """Transcendence degrees of the field generated (not closed) by monomial images.

    ``generators`` are monomial module elements or ``(component, exponent)``
    pairs with 0-based components.  A polynomial verdict needs some suffix of
    the table of at least ``m+n+2`` values to be reproduced by one
    polynomial of degree ``<= m+n``; the longest such suffix wins.
    """
    if not X.is_free:
        raise AmbientNotFree("quasi-polynomial probe needs a free extension")
    mons = []
    for g in generators:
        if isinstance(g, ModuleElement):
            if not g.is_monomial():
                raise NonMonomialGenerator(f"{element_to_text(g)} is not a monomial image")
            mons.append(next(iter(g.terms)))
        else:
            comp, e = g
            mons.append((int(comp), tuple(e)))
    values = {r: oracle.trdeg_monomial_field(mons, r) for r in range(r_min, r_max + 1)}
    bound = X.sig.m + X.sig.n
    pts = sorted(values.items())
    last_err = None
    for start in range(len(pts)):
        window = pts[start:]
        try:
            poly = interpolate(window, bound)
        except WindowTooSmall:
            break
        except NotEventuallyPolynomial as exc:
            last_err = exc
            continue
        return ProbeReport(values, "polynomial", poly, window[0][0])
    witness = None
    if last_err is not None:
        witness = {"r": last_err.r, "expected": str(last_err.expected), "got": last_err.got}
    return ProbeReport(values, "not_eventually_polynomial", None, None, witness)


# -- change of generators ---------------------------------------------------------


def _apply_matrix(v: ModuleElement, M: Sequence[Sequence[Operator]], rank: int) -> ModuleElement:
    """Image of ``v`` under ``e_i -> sum_j M[i][j] e_j``."""
    alg = v.alg
    out = ModuleElement(alg, rank, {})
    for i in sorted(v.components()):
        A = v.component(i)
        for j, B in enumerate(M[i]):
            prod = A * B
            if not prod.is_zero():
                out = out + ModuleElement(alg, rank, {(j, e): c for e, c in prod.terms.items()})
    return out


def _check_matrix(M, rows: int, cols: int, alg, name: str):
    if len(M) != rows or any(len(row) != cols for row in M):
        raise TransitionNotInvertible(f"{name} must be a {rows}x{cols} matrix of operators")
    return [[B if isinstance(B, Operator) else alg.scalar(B) for B in row] for row in M]


def regenerate(X: ExtensionPresentation, T, U) -> ExtensionPresentation:
    """Presentation of the same module on new generators ``eta'_i = sum_j T[i][j] eta_j``.

    ``U`` expresses the old generators through the new ones.  The new
    relations are ``psi(R)`` together with ``e'_i - psi(phi(e'_i))``, where
    ``phi`` uses ``T`` and ``psi`` uses ``U``; this presents ``M`` as soon as
    ``phi o psi`` is the identity modulo ``R``, which is checked.
    """
    s2 = len(T)
    T = _check_matrix(T, s2, X.s, X.alg, "T")
    U = _check_matrix(U, X.s, s2, X.alg, "U")
    _check_phi_psi(X, T, U)
    rels = [_apply_matrix(r, U, s2) for r in X.relations]
    for i in range(1, s2 + 1):
        e = X.alg.basis(s2, i)
        rels.append(e - _apply_matrix(_apply_matrix(e, T, X.s), U, s2))
    return ExtensionPresentation(X.alg, s2, tuple(r for r in rels if not r.is_zero()))


def _check_phi_psi(X, T, U):
    gb = groebner(X.relations)
    for j in range(1, X.s + 1):
        e = X.alg.basis(X.s, j)
        back = _apply_matrix(_apply_matrix(e, U, len(T)), T, X.s)
        if not normal_form(back - e, gb).is_zero():
            raise TransitionNotInvertible(
                f"the two transition matrices do not compose to the identity on e{j}")


@dataclass
class ComparisonReport:
    first: DimensionReport
    second: DimensionReport
    intermediate: tuple | None
    equal: bool

    def to_json(self) -> dict:
        return {
            "first": self.first.to_json(),
            "second": self.second.to_json(),
            "intermediate": [r.to_json() for r in self.intermediate] if self.intermediate else None,
            "equal_invariants": self.equal,
        }


def compare_generator_sets(X: ExtensionPresentation, T, U, X2: ExtensionPresentation | None = None,
                           F: IntermediateFieldSpec | None = None, *,
                           verify: int | None = None) -> ComparisonReport:
    """Dimension polynomials for two generator families of one extension.

    ``T`` writes the new generators through the old ones and ``U`` the old
    through the new.  Without ``X2`` the second presentation is derived by
    :func:`regenerate`.  With ``X2`` both compositions are checked modulo the
    respective relations and each relation module must map into the other.
    The invariants ``(d, c_d, c_{m+n})`` must agree; the polynomials may not.
    """
    if X2 is None:
        X2 = regenerate(X, T, U)
        T = _check_matrix(T, X2.s, X.s, X.alg, "T")
        U = _check_matrix(U, X.s, X2.s, X.alg, "U")
    else:
        if X2.alg is not X.alg:
            raise ValidationError("both presentations must use the same operator ring")
        T = _check_matrix(T, X2.s, X.s, X.alg, "T")
        U = _check_matrix(U, X.s, X2.s, X.alg, "U")
        _check_phi_psi(X, T, U)
        _check_phi_psi(X2, U, T)
        gb1, gb2 = groebner(X.relations), groebner(X2.relations)
        if any(not normal_form(_apply_matrix(r, T, X.s), gb1).is_zero() for r in X2.relations):
            raise TransitionNotInvertible("a relation of the new presentation does not map to a relation")
        if any(not normal_form(_apply_matrix(r, U, X2.s), gb2).is_zero() for r in X.relations):
            raise TransitionNotInvertible("a relation of the old presentation does not map to a relation")
    a = chi_extension(X, verify=verify)
    b = chi_extension(X2, verify=verify)
    equal = a.triple() == b.triple()
    inter = None
    if F is not None:
        F2 = IntermediateFieldSpec(tuple(_apply_matrix(g, U, X2.s) for g in F.generators),
                                   F.sigma_delta_closed, F.label)
        fa = chi_intermediate(X, F, verify=verify)
        fb = chi_intermediate(X2, F2, verify=verify)
        inter = (fa, fb)
        equal = equal and fa.triple() == fb.triple()
    return ComparisonReport(a, b, inter, equal)
