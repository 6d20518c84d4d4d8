"""Numerical polynomials written in the binomial basis.

A univariate numerical polynomial is stored as integers ``a_0..a_K`` meaning
``sum_i a_i * C(t+i, i)``.  The multivariate analogue uses a sparse tensor of
integers indexed by ``(i_1, ..., i_k)`` with ``0 <= i_j <= caps[j]`` and means
``sum_I a_I * prod_j C(t_j + i_j, i_j)``.

``C(t+i, i)`` is the product ``(t+1)(t+2)...(t+i)/i!`` and is therefore
defined for every integer ``t``.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegreeExceedsCap,
    EmptySet,
    NotEventuallyPolynomial,
    NotNumerical,
    WindowTooSmall,
)

__all__ = [
    "NumericalPolynomial",
    "MultiNumericalPolynomial",
    "binom_shifted",
    "eval_poly",
    "to_binomial_basis",
    "to_dense",
    "interpolate",
    "invariants",
    "compare_eventual",
    "maximal_index_set",
    "eval_multi",
    "to_multi_binomial_basis",
    "multi_invariants",
    "shifted_binomial",
]


def binom_shifted(r: int, i: int) -> int:
    """Value of ``C(r+i, i)`` for any integer ``r``."""
    if i == 0:
        return 1
    if r >= 0:
        return math.comb(r + i, i)
    num = 1
    for j in range(1, i + 1):
        num *= r + j
    return num // math.factorial(i)


@lru_cache(maxsize=None)
def _binomial_dense(i: int) -> tuple[Fraction, ...]:
    # coefficients of C(t+i, i) in powers of t
    coeffs = [Fraction(1)]
    for j in range(1, i + 1):
        # multiply by (t + j) / j
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for p, c in enumerate(coeffs):
            nxt[p] += c * j
            nxt[p + 1] += c
        coeffs = [c / j for c in nxt]
    return tuple(coeffs)


def _poly_eval_dense(dense: Sequence[Fraction], t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(dense):
        acc = acc * t + c
    return acc


def _trim(seq: list) -> list:
    while seq and seq[-1] == 0:
        seq.pop()
    return seq


def _as_int(value, what: str) -> int:
    if isinstance(value, int):
        return value
    q = Fraction(value)
    if q.denominator != 1:
        raise NotNumerical(f"{what} = {q} is not an integer")
    return q.numerator


class NumericalPolynomial:
    """Immutable univariate numerical polynomial in the binomial basis."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        ints = [_as_int(c, f"binomial coefficient a_{i}") for i, c in enumerate(coeffs)]
        self._coeffs = tuple(_trim(ints))

    @classmethod
    def binomial(cls, i: int, scale: int = 1) -> "NumericalPolynomial":
        """The polynomial ``scale * C(t+i, i)``."""
        return cls([0] * i + [scale])

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def coeff(self, i: int) -> int:
        return self._coeffs[i] if 0 <= i < len(self._coeffs) else 0

    def is_zero(self) -> bool:
        return not self._coeffs

    def __call__(self, r: int) -> int:
        return eval_poly(self, r)

    def __eq__(self, other):
        if isinstance(other, NumericalPolynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, int) and other == 0:
            return not self._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("NumericalPolynomial", self._coeffs))

    def __add__(self, other: "NumericalPolynomial") -> "NumericalPolynomial":
        n = max(len(self._coeffs), len(other._coeffs))
        return NumericalPolynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    def __neg__(self) -> "NumericalPolynomial":
        return NumericalPolynomial(-c for c in self._coeffs)

    def __sub__(self, other: "NumericalPolynomial") -> "NumericalPolynomial":
        return self + (-other)

    def __mul__(self, k: int) -> "NumericalPolynomial":
        if not isinstance(k, int):
            return NotImplemented
        return NumericalPolynomial(k * c for c in self._coeffs)

    __rmul__ = __mul__

    def to_dense(self) -> list[Fraction]:
        return to_dense(self)

    def to_text(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for i in range(len(self._coeffs) - 1, -1, -1):
            a = self._coeffs[i]
            if a == 0:
                continue
            body = f"{abs(a)}*C(t+{i},{i})" if i else f"{abs(a)}"
            if not parts:
                parts.append(("-" if a < 0 else "") + body)
            else:
                parts.append(("- " if a < 0 else "+ ") + body)
        return " ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"NumericalPolynomial({list(self._coeffs)})"

    def to_json(self) -> dict:
        return {"basis": "binomial", "coeffs": list(self._coeffs)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "NumericalPolynomial":
        if obj.get("basis") != "binomial":
            raise ValueError("expected a binomial-basis polynomial")
        return cls(obj["coeffs"])

    _TERM = re.compile(r"\s*([+-]?)\s*(\d+)(?:\*C\(t\+(\d+),(\d+)\))?")

    @classmethod
    def from_text(cls, text: str) -> "NumericalPolynomial":
        """Parse the canonical rendering produced by :meth:`to_text`."""
        text = text.strip()
        if text == "0":
            return cls()
        coeffs: dict[int, int] = {}
        pos = 0
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse numerical polynomial at {pos}: {text!r}")
            sign, a, i, j = m.groups()
            if i is not None and i != j:
                raise ValueError(f"term C(t+{i},{j}) is not in the basis")
            k = int(i) if i is not None else 0
            coeffs[k] = coeffs.get(k, 0) + (-1 if sign == "-" else 1) * int(a)
            pos = m.end()
        top = max(coeffs) if coeffs else -1
        return cls(coeffs.get(i, 0) for i in range(top + 1))


def eval_poly(p: NumericalPolynomial, r: int) -> int:
    return sum(a * binom_shifted(r, i) for i, a in enumerate(p.coeffs))


def to_dense(p: NumericalPolynomial) -> list[Fraction]:
    """Coefficients of ``p`` in the monomial basis ``1, t, t^2, ...``."""
    out = [Fraction(0)] * (p.degree + 1)
    for i, a in enumerate(p.coeffs):
        if a:
            for j, c in enumerate(_binomial_dense(i)):
                out[j] += a * c
    return _trim(out)


def to_binomial_basis(dense: Sequence) -> NumericalPolynomial:
    """Rewrite ``sum_j dense[j] t^j`` in the binomial basis.

    Raises NotNumerical when a resulting coefficient is not an integer.
    """
    work = _trim([Fraction(c) for c in dense])
    coeffs = [Fraction(0)] * len(work)
    while work:
        k = len(work) - 1
        a = work[k] * math.factorial(k)
        coeffs[k] = a
        for j, c in enumerate(_binomial_dense(k)):
            work[j] -= a * c
        _trim(work)
    return NumericalPolynomial(coeffs)


def _lagrange_dense(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    dense = [Fraction(0)] * len(points)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for p in range(len(basis) - 1):
                basis[p] -= xj * basis[p + 1]
            denom *= xi - xj
        for p, c in enumerate(basis):
            dense[p] += yi * c / denom
    return dense


def interpolate(values: Sequence[tuple[int, int]], degree_bound: int) -> NumericalPolynomial:
    """Fit a polynomial of degree <= ``degree_bound`` and confirm it on the rest.

    ``values`` must hold at least ``degree_bound + 2`` points with consecutive
    arguments.  The polynomial through the first ``degree_bound + 1`` points
    has to reproduce every later point, otherwise NotEventuallyPolynomial is
    raised with the first disagreeing argument.
    """
    pts = sorted((int(r), int(v)) for r, v in values)
    need = degree_bound + 2
    if len(pts) < need:
        raise WindowTooSmall(f"need at least {need} points, got {len(pts)}")
    if any(b[0] - a[0] != 1 for a, b in zip(pts, pts[1:])):
        raise WindowTooSmall("interpolation points must have consecutive arguments")
    dense = _lagrange_dense(pts[: degree_bound + 1])
    for r, v in pts[degree_bound + 1:]:
        predicted = _poly_eval_dense(dense, r)
        if predicted != v:
            raise NotEventuallyPolynomial(
                f"value at r={r} is {v}, fitted polynomial predicts {predicted}",
                r=r, expected=predicted, got=v,
            )
    return to_binomial_basis(dense)


def invariants(p: NumericalPolynomial, m: int, n: int) -> tuple[int, int, int]:
    """Return ``(d, c_d, c_{m+n})``; ``c_{m+n}`` is 0 when ``d < m+n``."""
    cap = m + n
    if p.degree > cap:
        raise DegreeExceedsCap(f"degree {p.degree} exceeds m+n = {cap}")
    d = p.degree
    return d, p.coeff(d) if d >= 0 else 0, p.coeff(cap)


def compare_eventual(p: NumericalPolynomial, q: NumericalPolynomial) -> int:
    """Sign of ``p(r) - q(r)`` for all sufficiently large ``r``."""
    diff = p - q
    if diff.is_zero():
        return 0
    return 1 if diff.coeffs[-1] > 0 else -1


def maximal_index_set(E: Iterable[Sequence[int]]) -> set[tuple[int, ...]]:
    """Maxima of ``E`` under every lexicographic order induced by a coordinate permutation."""
    pts = {tuple(e) for e in E}
    if not pts:
        raise EmptySet("maximal_index_set of an empty set")
    dim = len(next(iter(pts)))
    out = set()
    for perm in itertools.permutations(range(dim)):
        out.add(max(pts, key=lambda e: tuple(e[j] for j in perm)))
    return out


# -- multivariate -------------------------------------------------------------


class MultiNumericalPolynomial:
    """Sparse multivariate numerical polynomial in the product binomial basis."""

    __slots__ = ("_caps", "_coeffs")

    def __init__(self, caps: Sequence[int], coeffs: Mapping[Sequence[int], object] = None):
        self._caps = tuple(int(c) for c in caps)
        clean = {}
        for idx, a in (coeffs or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != len(self._caps):
                raise ValueError(f"index {idx} does not match caps {self._caps}")
            if any(i < 0 or i > c for i, c in zip(idx, self._caps)):
                raise DegreeExceedsCap(f"index {idx} exceeds caps {self._caps}")
            a = _as_int(a, f"coefficient a_{idx}")
            if a:
                clean[idx] = a
        self._coeffs = dict(sorted(clean.items()))

    @property
    def caps(self) -> tuple[int, ...]:
        return self._caps

    @property
    def coeffs(self) -> dict[tuple[int, ...], int]:
        return dict(self._coeffs)

    @property
    def nvars(self) -> int:
        return len(self._caps)

    def coeff(self, idx: Sequence[int]) -> int:
        return self._coeffs.get(tuple(idx), 0)

    def support(self) -> set[tuple[int, ...]]:
        return set(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def total_degree(self) -> int:
        return max((sum(i) for i in self._coeffs), default=-1)

    def degree_in(self, k: int) -> int:
        return max((i[k] for i in self._coeffs), default=-1)

    def __call__(self, *r: int) -> int:
        return eval_multi(self, r)

    def __eq__(self, other):
        if not isinstance(other, MultiNumericalPolynomial):
            return NotImplemented
        return self._caps == other._caps and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self._caps, tuple(self._coeffs.items())))

    def _combine(self, other, sign):
        if self._caps != other._caps:
            raise ValueError("caps differ")
        acc = dict(self._coeffs)
        for idx, a in other._coeffs.items():
            acc[idx] = acc.get(idx, 0) + sign * a
        return MultiNumericalPolynomial(self._caps, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return MultiNumericalPolynomial(self._caps, {i: k * a for i, a in self._coeffs.items()})

    __rmul__ = __mul__

    def to_text(self) -> str:
        if not self._coeffs:
            return "0"
        order = sorted(self._coeffs, key=lambda i: (sum(i), i), reverse=True)
        parts = []
        for idx in order:
            a = self._coeffs[idx]
            factors = [f"C(t{k + 1}+{i},{i})" for k, i in enumerate(idx) if i]
            body = "*".join([str(abs(a))] + factors)
            if not parts:
                parts.append(("-" if a < 0 else "") + body)
            else:
                parts.append(("- " if a < 0 else "+ ") + body)
        return " ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"MultiNumericalPolynomial({self._caps}, {self._coeffs})"

    def to_json(self) -> dict:
        def nest(prefix):
            k = len(prefix)
            if k == len(self._caps):
                return self._coeffs.get(tuple(prefix), 0)
            return [nest(prefix + [i]) for i in range(self._caps[k] + 1)]

        return {"basis": "binomial", "caps": list(self._caps), "coeffs": nest([])}

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultiNumericalPolynomial":
        caps = obj["caps"]
        coeffs = {}

        def walk(node, prefix):
            if len(prefix) == len(caps):
                if node:
                    coeffs[tuple(prefix)] = node
                return
            for i, sub in enumerate(node):
                walk(sub, prefix + [i])

        walk(obj["coeffs"], [])
        return cls(caps, coeffs)


def eval_multi(P: MultiNumericalPolynomial, r: Sequence[int]) -> int:
    if len(r) != P.nvars:
        raise ValueError(f"expected {P.nvars} arguments, got {len(r)}")
    total = 0
    for idx, a in P.coeffs.items():
        term = a
        for rk, ik in zip(r, idx):
            term *= binom_shifted(rk, ik)
        total += term
    return total


@lru_cache(maxsize=None)
def _monomial_in_binomial(j: int) -> tuple[Fraction, ...]:
    # t^j written in the basis C(t+i, i); rational coefficients
    work = [Fraction(0)] * j + [Fraction(1)]
    coeffs = [Fraction(0)] * (j + 1)
    while work:
        k = len(work) - 1
        a = work[k] * math.factorial(k)
        coeffs[k] = a
        for p, c in enumerate(_binomial_dense(k)):
            work[p] -= a * c
        _trim(work)
    return tuple(coeffs)


def to_multi_binomial_basis(dense: Mapping[Sequence[int], object],
                            caps: Sequence[int]) -> MultiNumericalPolynomial:
    """Convert ``{(j_1..j_k): c}`` meaning ``sum c * prod t_i^{j_i}`` to the binomial basis."""
    acc: dict[tuple[int, ...], Fraction] = {}
    for mono, c in dense.items():
        c = Fraction(c)
        if not c:
            continue
        per_var = [_monomial_in_binomial(int(j)) for j in mono]
        for idx in itertools.product(*(range(len(v)) for v in per_var)):
            w = c
            for v, i in zip(per_var, idx):
                w *= v[i]
            if w:
                acc[idx] = acc.get(idx, Fraction(0)) + w
    return MultiNumericalPolynomial(caps, {i: a for i, a in acc.items() if a})


def multi_invariants(P: MultiNumericalPolynomial) -> dict:
    """Invariants that do not depend on the chosen generators.

    Returns a dict with the total degree ``d``, the coefficients of the
    total-degree-``d`` terms, the coefficient at the caps index, the support
    ``E`` and its lexicographic maxima ``E'``.  Raises EmptySet for the zero
    polynomial, since ``E'`` is then undefined.
    """
    support = P.support()
    d = P.total_degree
    top = {idx: a for idx, a in P.coeffs.items() if sum(idx) == d}
    return {
        "d": d,
        "top_terms": top,
        "a_caps": P.coeff(P.caps),
        "E": support,
        "E_prime": maximal_index_set(support),
    }


@lru_cache(maxsize=None)
def shifted_binomial(c: int, k: int) -> NumericalPolynomial:
    """``C(t - c + k, k)`` as a numerical polynomial (the lattice count above a shift ``c``)."""
    # dense expansion of prod_{j=1..k} (t - c + j) / j
    dense = [Fraction(1)]
    for j in range(1, k + 1):
        nxt = [Fraction(0)] * (len(dense) + 1)
        for p, a in enumerate(dense):
            nxt[p] += a * (j - c)
            nxt[p + 1] += a
        dense = [a / j for a in nxt]
    return to_binomial_basis(dense)
