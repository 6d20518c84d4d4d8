"""The ring of difference-differential operators and free left modules over it.

Multiplication follows ``delta*a = a*delta + delta(a)`` and
``alpha*a = alpha(a)*alpha``.  For a power product ``lam = delta^k alpha^l``
this gives::

    lam * c = sum_{j <= k} C(k, j) * delta^j(alpha^l(c)) * delta^(k-j) alpha^l

with ``C(k, j)`` the product of the coordinatewise binomials.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from ..errors import SignatureMismatch, ValidationError
from ..monoid import PartitionSpec, Signature, block_orders
from .field import GroundField

__all__ = ["OreAlgebra", "Operator", "ModuleElement", "TermOrder"]


class OreAlgebra:
    """Operators with coefficients in ``field`` over the power products of ``sig``."""

    def __init__(self, field: GroundField):
        self.field = field
        self.sig = field.sig.non_inversive() if field.sig.inversive else field.sig
        self._mono_cache: dict = {}

    @classmethod
    def constants(cls, m: int, n: int) -> "OreAlgebra":
        return cls(GroundField.constants(Signature(m, n)))

    # element constructors
    def op(self, terms: Mapping | None = None) -> "Operator":
        return Operator(self, terms or {})

    def scalar(self, c) -> "Operator":
        return Operator(self, {self.sig.zero(): self.field.coerce(c)})

    def monomial(self, e, c=1) -> "Operator":
        return Operator(self, {tuple(e): self.field.coerce(c)})

    def delta(self, i: int) -> "Operator":
        return self.monomial(self.sig.delta(i))

    def alpha(self, j: int) -> "Operator":
        return self.monomial(self.sig.alpha(j))

    def basis(self, rank: int, i: int) -> "ModuleElement":
        """The free generator ``e_i`` (1-based) of the rank-``rank`` module."""
        return ModuleElement(self, rank, {(i - 1, self.sig.zero()): self.field.one()})

    def element(self, rank: int, terms: Mapping) -> "ModuleElement":
        return ModuleElement(self, rank, terms)

    # -- core product -------------------------------------------------------------

    def mono_times_coeff(self, lam: tuple, c) -> list[tuple[tuple, object]]:
        """Expand ``lam * c`` as a list of ``(exponent, coefficient)`` pairs."""
        key = (lam, c)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        F = self.field
        m = self.sig.m
        a = c
        for j, l in enumerate(lam[m:]):
            if l:
                a = F.translate(j, a, l)
        k = lam[:m]
        out = []
        if F.is_constant or all(act.var is None for act in F.derivations):
            out.append((lam, a))
        else:
            for js in itertools.product(*(range(x + 1) for x in k)):
                d = a
                w = 1
                for i, (ji, ki) in enumerate(zip(js, k)):
                    for _ in range(ji):
                        d = F.derive(i, d)
                        if not d:
                            break
                    if not d:
                        break
                    w *= math.comb(ki, ji)
                if not d:
                    continue
                exp = tuple(ki - ji for ki, ji in zip(k, js)) + tuple(lam[m:])
                out.append((exp, w * d))
        self._mono_cache[key] = out
        return out

    def _left_mul(self, A: Mapping, B: Mapping, module: bool) -> dict:
        acc: dict = {}
        for lam, a in A.items():
            for key, b in B.items():
                mu = key[1] if module else key
                for exp, c in self.mono_times_coeff(lam, b):
                    new_exp = tuple(x + y for x, y in zip(exp, mu))
                    nk = (key[0], new_exp) if module else new_exp
                    val = acc.get(nk)
                    acc[nk] = a * c if val is None else val + a * c
        return {k: v for k, v in acc.items() if v}

    def check_exponent(self, e) -> tuple:
        e = tuple(int(x) for x in e)
        if len(e) != self.sig.nvars or any(x < 0 for x in e):
            raise SignatureMismatch(f"{e} is not an exponent of {self.sig}")
        return e


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v}


def _add(a: Mapping, b: Mapping, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        cur = out.get(k)
        val = sign * v if cur is None else cur + sign * v
        if val:
            out[k] = val
        else:
            out.pop(k, None)
    return out


class Operator:
    """A finite sum ``sum_lam a_lam * lam``; immutable."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: OreAlgebra, terms: Mapping):
        self.alg = alg
        F = alg.field
        self.terms = {alg.check_exponent(e): F.coerce(c) for e, c in _clean(terms).items()}

    def _coerce(self, other) -> "Operator":
        if isinstance(other, Operator):
            if other.alg is not self.alg:
                raise SignatureMismatch("operators live in different algebras")
            return other
        return self.alg.scalar(other)

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(not any(e) for e in self.terms)

    @property
    def ord(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other):
        return Operator(self.alg, _add(self.terms, self._coerce(other).terms))

    __radd__ = __add__

    def __sub__(self, other):
        return Operator(self.alg, _add(self.terms, self._coerce(other).terms, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Operator(self.alg, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ModuleElement):
            if other.alg is not self.alg:
                raise SignatureMismatch("operator and module element use different algebras")
            return ModuleElement(self.alg, other.rank, self.alg._left_mul(self.terms, other.terms, True))
        other = self._coerce(other)
        return Operator(self.alg, self.alg._left_mul(self.terms, other.terms, False))

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not operators")
        out = self.alg.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Operator):
            return self.alg is other.alg and self.terms == other.terms
        if isinstance(other, (int,)) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def scale(self, c) -> "Operator":
        """Left multiplication by a scalar (no commutation needed)."""
        c = self.alg.field.coerce(c)
        return Operator(self.alg, {e: c * v for e, v in self.terms.items()})

    def __repr__(self):
        from .parse import operator_to_text

        return f"Operator({operator_to_text(self)!r})"


class ModuleElement:
    """Element of the free left module of rank ``rank``: keys are ``(component, exponent)``, 0-based components."""

    __slots__ = ("alg", "rank", "terms")

    def __init__(self, alg: OreAlgebra, rank: int, terms: Mapping):
        self.alg = alg
        self.rank = int(rank)
        F = alg.field
        out = {}
        for (i, e), c in _clean(terms).items():
            if not 0 <= i < self.rank:
                raise ValidationError(f"component {i + 1} outside rank {self.rank}")
            out[(int(i), alg.check_exponent(e))] = F.coerce(c)
        self.terms = out

    def _check(self, other: "ModuleElement"):
        if not isinstance(other, ModuleElement) or other.alg is not self.alg or other.rank != self.rank:
            raise SignatureMismatch("module elements from different modules")

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def ord(self) -> int:
        return max((sum(e) for _, e in self.terms), default=-1)

    def __add__(self, other):
        self._check(other)
        return ModuleElement(self.alg, self.rank, _add(self.terms, other.terms))

    def __sub__(self, other):
        self._check(other)
        return ModuleElement(self.alg, self.rank, _add(self.terms, other.terms, -1))

    def __neg__(self):
        return ModuleElement(self.alg, self.rank, {k: -c for k, c in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, Operator):
            return other * self
        return self.scale(other)

    def scale(self, c) -> "ModuleElement":
        c = self.alg.field.coerce(c)
        return ModuleElement(self.alg, self.rank, {k: c * v for k, v in self.terms.items()})

    def component(self, i: int) -> Operator:
        """The operator coefficient of ``e_{i+1}``."""
        return Operator(self.alg, {e: c for (j, e), c in self.terms.items() if j == i})

    def components(self) -> set[int]:
        return {i for i, _ in self.terms}

    def embed(self, rank: int) -> "ModuleElement":
        return ModuleElement(self.alg, rank, self.terms)

    def __eq__(self, other):
        if isinstance(other, ModuleElement):
            return self.alg is other.alg and self.rank == other.rank and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self.terms, key=lambda k: (k[0], k[1])))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __repr__(self):
        from .parse import element_to_text

        return f"ModuleElement({element_to_text(self)!r})"


@dataclass(frozen=True)
class TermOrder:
    """Order on ``(component, exponent)`` pairs.

    ``graded``: total order first, then lexicographic on the exponent, then
    the smaller component index wins.  ``blockwise``: as ``graded`` but the
    block orders of ``part`` break ties before the lexicographic step.  Both
    are multiplicative, total and have the zero exponent minimal.
    """

    kind: str = "graded"
    part: PartitionSpec | None = None

    def __post_init__(self):
        if self.kind not in ("graded", "blockwise"):
            raise ValidationError(f"unknown term order {self.kind!r}")
        if self.kind == "blockwise" and self.part is None:
            raise ValidationError("blockwise order needs a partition")

    def key(self, term_key) -> tuple:
        comp, e = term_key
        if self.kind == "graded":
            return (sum(e), e, -comp)
        return (sum(e), block_orders(e, self.part), e, -comp)

    def exp_key(self, e) -> tuple:
        return self.key((0, e))

    def lead(self, v: ModuleElement):
        """``((component, exponent), coefficient)`` of the largest term."""
        k = max(v.terms, key=self.key)
        return k, v.terms[k]

    def sorted_terms(self, v, reverse: bool = True) -> list:
        if isinstance(v, Operator):
            return sorted(v.terms.items(), key=lambda kv: self.exp_key(kv[0]), reverse=reverse)
        return sorted(v.terms.items(), key=lambda kv: self.key(kv[0]), reverse=reverse)


def as_element(v, rank: int = 1) -> ModuleElement:
    if isinstance(v, ModuleElement):
        return v
    if isinstance(v, Operator):
        return ModuleElement(v.alg, rank, {(0, e): c for e, c in v.terms.items()})
    raise TypeError(f"cannot view {type(v).__name__} as a module element")


def from_components(alg: OreAlgebra, ops: Iterable[Operator]) -> ModuleElement:
    ops = list(ops)
    terms = {}
    for i, A in enumerate(ops):
        for e, c in A.terms.items():
            terms[(i, e)] = c
    return ModuleElement(alg, len(ops), terms)
