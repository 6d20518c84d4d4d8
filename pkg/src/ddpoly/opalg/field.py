"""Computable coefficient fields with commuting derivations and automorphisms.

Elements are :class:`fractions.Fraction` when there are no indeterminates and
sympy ``FracElement`` values of ``QQ(x_1, ..., x_k)`` otherwise.  Each
derivation acts as ``d/dx_j`` or as zero; each translation acts as a shift
``x_j -> x_j + 1``, a scaling ``x_j -> c*x_j`` or the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import ValidationError
from ..monoid import Signature

_RESERVED = re.compile(r"^[dae]\d+$")


@dataclass(frozen=True)
class DerivationAction:
    var: str | None = None  # None: the zero derivation

    def describe(self) -> str:
        return f"d/d{self.var}" if self.var else "zero"


@dataclass(frozen=True)
class TranslationAction:
    kind: str = "identity"  # "identity" | "shift" | "scale"
    var: str | None = None
    factor: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("identity", "shift", "scale"):
            raise ValidationError(f"unknown translation kind {self.kind!r}")
        if self.kind != "identity" and not self.var:
            raise ValidationError(f"{self.kind} action needs an indeterminate")
        if self.kind == "scale" and Fraction(self.factor) == 0:
            raise ValidationError("scaling factor must be nonzero")
        object.__setattr__(self, "factor", Fraction(self.factor))

    def describe(self) -> str:
        if self.kind == "shift":
            return f"{self.var} -> {self.var} + 1"
        if self.kind == "scale":
            return f"{self.var} -> {self.factor}*{self.var}"
        return "identity"


class GroundField:
    """``QQ(x_1..x_k)`` with a derivation per ``delta_i`` and an automorphism per ``alpha_j``."""

    def __init__(self, sig: Signature, indeterminates: Sequence[str] = (),
                 derivations: Sequence[DerivationAction] | None = None,
                 translations: Sequence[TranslationAction] | None = None):
        self.sig = sig
        self.indeterminates = tuple(indeterminates)
        self.derivations = tuple(derivations or [DerivationAction()] * sig.m)
        self.translations = tuple(translations or [TranslationAction()] * sig.n)
        if len(self.derivations) != sig.m or len(self.translations) != sig.n:
            raise ValidationError("need exactly one action per derivation and per translation")
        if len(set(self.indeterminates)) != len(self.indeterminates):
            raise ValidationError("duplicate indeterminate names")
        for name in self.indeterminates:
            if _RESERVED.match(name) or not re.match(r"^[A-Za-z_][A-Za-z_0-9]*$", name):
                raise ValidationError(f"indeterminate name {name!r} is reserved or malformed")
        for act in list(self.derivations) + list(self.translations):
            if act.var is not None and act.var not in self.indeterminates:
                raise ValidationError(f"action refers to undeclared indeterminate {act.var!r}")

        if self.indeterminates:
            from sympy import QQ
            from sympy.polys.fields import field

            self._K, *gens = field(",".join(self.indeterminates), QQ)
            self._gens = dict(zip(self.indeterminates, gens))
            self._ring_gens = dict(zip(self.indeterminates, self._K.ring.gens))
        else:
            self._K = None
            self._gens = {}
            self._ring_gens = {}
        self._deriv_cache: dict = {}
        self._trans_cache: dict = {}
        self._check_commuting()

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constants(cls, sig: Signature) -> "GroundField":
        """QQ with every action trivial."""
        return cls(sig)

    @property
    def is_constant(self) -> bool:
        return not self.indeterminates

    def zero(self):
        return self._K.zero if self._K else Fraction(0)

    def one(self):
        return self._K.one if self._K else Fraction(1)

    def coerce(self, value):
        if self._K is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return self._K.one * value
        if isinstance(value, int):
            return self._K(value)
        return value

    def gen(self, name: str):
        return self._gens[name]

    def is_zero(self, a) -> bool:
        return not a

    # -- actions --------------------------------------------------------------

    def derive(self, i: int, a):
        """Apply ``delta_i`` (0-based index) to ``a``."""
        act = self.derivations[i]
        if act.var is None or self._K is None:
            return self.zero()
        key = (i, a)
        hit = self._deriv_cache.get(key)
        if hit is None:
            hit = a.diff(self._gens[act.var])
            self._deriv_cache[key] = hit
        return hit

    def translate(self, j: int, a, power: int = 1):
        """Apply ``alpha_j^power`` (0-based index, ``power`` may be negative)."""
        act = self.translations[j]
        if act.kind == "identity" or self._K is None or power == 0:
            return a
        key = (j, power, a)
        hit = self._trans_cache.get(key)
        if hit is not None:
            return hit
        x = self._ring_gens[act.var]
        if act.kind == "shift":
            image = x + power
        else:
            image = x * (act.factor ** power)
        num = a.numer.compose(x, image)
        den = a.denom.compose(x, image)
        hit = self._K((num, den))
        self._trans_cache[key] = hit
        return hit

    def translate_inverse(self, j: int, a):
        return self.translate(j, a, -1)

    def _check_commuting(self):
        # Commutators of derivations/twisted derivations are determined by their
        # values on the generators, so checking the indeterminates suffices.
        if self._K is None:
            return
        m, n = self.sig.m, self.sig.n
        for name in self.indeterminates:
            x = self._gens[name]
            for i in range(m):
                for k in range(i + 1, m):
                    if self.derive(i, self.derive(k, x)) != self.derive(k, self.derive(i, x)):
                        raise ValidationError(f"delta_{i+1} and delta_{k+1} do not commute on {name}")
                for j in range(n):
                    if self.derive(i, self.translate(j, x)) != self.translate(j, self.derive(i, x)):
                        raise ValidationError(f"delta_{i+1} and alpha_{j+1} do not commute on {name}")
            for j in range(n):
                for k in range(j + 1, n):
                    if self.translate(j, self.translate(k, x)) != self.translate(k, self.translate(j, x)):
                        raise ValidationError(f"alpha_{j+1} and alpha_{k+1} do not commute on {name}")

    # -- text -----------------------------------------------------------------

    def to_text(self, a) -> str:
        if self._K is None:
            return str(Fraction(a))
        return str(a).replace("**", "^")

    def describe(self) -> dict:
        return {
            "indeterminates": list(self.indeterminates),
            "derivations": [d.describe() for d in self.derivations],
            "translations": [t.describe() for t in self.translations],
        }
