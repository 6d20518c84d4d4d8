"""Power products of derivations and translations.

An exponent is a plain tuple ``(k_1, ..., k_m, l_1, ..., l_n)``: the first
``m`` entries are the powers of the derivations, the last ``n`` the powers of
the translations.  With an inversive signature the translation powers may be
negative.  Blocks of a partition are contiguous index ranges.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import BlockOutOfRange, ParseError, SignatureMismatch, ValidationError

Exponent = tuple  # tuple[int, ...] of length m + n

__all__ = [
    "Exponent",
    "Signature",
    "PartitionSpec",
    "ord_",
    "ord_block",
    "block_orders",
    "enumerate_exponents",
    "enumerate_array",
    "divides",
    "exponent_to_text",
    "exponent_from_text",
    "exponent_to_json",
    "exponent_from_json",
]


@dataclass(frozen=True)
class Signature:
    m: int
    n: int
    inversive: bool = False

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.m + self.n < 1:
            raise ValidationError(f"invalid signature m={self.m}, n={self.n}")

    @property
    def nvars(self) -> int:
        return self.m + self.n

    def zero(self) -> Exponent:
        return (0,) * (self.m + self.n)

    def delta(self, i: int, power: int = 1) -> Exponent:
        """Exponent of ``delta_i^power`` (``i`` is 1-based)."""
        e = [0] * self.nvars
        e[i - 1] = power
        return tuple(e)

    def alpha(self, j: int, power: int = 1) -> Exponent:
        """Exponent of ``alpha_j^power`` (``j`` is 1-based)."""
        if power < 0 and not self.inversive:
            raise ValidationError("negative translation power needs an inversive signature")
        e = [0] * self.nvars
        e[self.m + j - 1] = power
        return tuple(e)

    def split(self, e: Exponent) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(e[: self.m]), tuple(e[self.m:])

    def check(self, e: Exponent) -> Exponent:
        e = tuple(int(x) for x in e)
        if len(e) != self.nvars:
            raise SignatureMismatch(f"exponent {e} has length {len(e)}, expected {self.nvars}")
        if any(x < 0 for x in e[: self.m]):
            raise SignatureMismatch(f"negative derivation power in {e}")
        if not self.inversive and any(x < 0 for x in e[self.m:]):
            raise SignatureMismatch(f"negative translation power in {e} (signature not inversive)")
        return e

    def inv_cols(self) -> np.ndarray:
        mask = np.zeros(self.nvars, dtype=np.bool_)
        if self.inversive:
            mask[self.m:] = True
        return mask

    def non_inversive(self) -> "Signature":
        return Signature(self.m, self.n, False)


@dataclass(frozen=True)
class PartitionSpec:
    """Contiguous split of the derivations into ``m_blocks`` and translations into ``n_blocks``."""

    m_blocks: tuple[int, ...]
    n_blocks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m_blocks", tuple(int(b) for b in self.m_blocks))
        object.__setattr__(self, "n_blocks", tuple(int(b) for b in self.n_blocks))
        if any(b <= 0 for b in self.m_blocks + self.n_blocks):
            raise ValidationError("partition blocks must be nonempty")

    @property
    def p(self) -> int:
        return len(self.m_blocks)

    @property
    def q(self) -> int:
        return len(self.n_blocks)

    @property
    def nblocks(self) -> int:
        return self.p + self.q

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.m_blocks + self.n_blocks

    def validate(self, sig: Signature) -> None:
        if sum(self.m_blocks) != sig.m or sum(self.n_blocks) != sig.n:
            raise ValidationError(
                f"partition {self.m_blocks};{self.n_blocks} does not cover m={sig.m}, n={sig.n}"
            )

    def ranges(self) -> list[range]:
        out, start = [], 0
        for size in self.sizes:
            out.append(range(start, start + size))
            start += size
        return out

    def indicator(self) -> np.ndarray:
        """``(m+n, p+q)`` 0/1 matrix mapping coordinates to blocks."""
        mat = np.zeros((sum(self.sizes), self.nblocks), dtype=np.int64)
        for b, rng in enumerate(self.ranges()):
            mat[list(rng), b] = 1
        return mat

    @classmethod
    def trivial(cls, sig: Signature) -> "PartitionSpec":
        """One block for the derivations (if any) and one for the translations (if any)."""
        return cls((sig.m,) if sig.m else (), (sig.n,) if sig.n else ())


def ord_(e: Exponent, sig: Signature | None = None) -> int:
    """Total order; translation powers count with absolute value."""
    return sum(abs(x) for x in e)


def ord_block(e: Exponent, part: PartitionSpec, block: int) -> int:
    """Order with respect to block ``block`` (1-based, derivation blocks first)."""
    if not 1 <= block <= part.nblocks:
        raise BlockOutOfRange(f"block {block} not in 1..{part.nblocks}")
    rng = part.ranges()[block - 1]
    return sum(abs(e[i]) for i in rng)


def block_orders(e: Exponent, part: PartitionSpec) -> tuple[int, ...]:
    return tuple(sum(abs(e[i]) for i in rng) for rng in part.ranges())


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # all tuples of ``parts`` nonnegative ints with sum == total, lexicographically
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _graded_block(size: int, bound: int, signed: bool) -> list[tuple[int, ...]]:
    out = []
    for total in range(bound + 1):
        for comp in _compositions(total, size):
            if not signed:
                out.append(comp)
                continue
            nz = [i for i, x in enumerate(comp) if x]
            for signs in itertools.product((1, -1), repeat=len(nz)):
                c = list(comp)
                for i, s in zip(nz, signs):
                    c[i] *= s
                out.append(tuple(c))
    return out


def _sort_key(e):
    return (sum(abs(x) for x in e), e)


@lru_cache(maxsize=256)
def _enumerate_total(sig: Signature, r: int) -> tuple[Exponent, ...]:
    pts = []
    for total in range(r + 1):
        for comp in _compositions(total, sig.nvars):
            if not sig.inversive or sig.n == 0:
                pts.append(comp)
                continue
            nz = [i for i in range(sig.m, sig.nvars) if comp[i]]
            for signs in itertools.product((1, -1), repeat=len(nz)):
                c = list(comp)
                for i, s in zip(nz, signs):
                    c[i] *= s
                pts.append(tuple(c))
    pts.sort(key=_sort_key)
    return tuple(pts)


@lru_cache(maxsize=256)
def _enumerate_blocks(sig: Signature, part: PartitionSpec, bounds: tuple[int, ...]) -> tuple[Exponent, ...]:
    per_block = []
    for b, (size, rb) in enumerate(zip(part.sizes, bounds)):
        signed = sig.inversive and b >= part.p
        per_block.append(_graded_block(size, rb, signed))
    pts = [sum(choice, ()) for choice in itertools.product(*per_block)]
    pts.sort(key=_sort_key)
    return tuple(pts)


Bound = Union[int, Sequence[int]]


def enumerate_exponents(sig: Signature, bound: Bound, part: PartitionSpec | None = None) -> list[Exponent]:
    """All exponents with total order ``<= bound``, or blockwise orders ``<= bound[i]``.

    The result is sorted by total order, then lexicographically.
    """
    if isinstance(bound, (int, np.integer)):
        if bound < 0:
            return []
        return list(_enumerate_total(sig, int(bound)))
    if part is None:
        raise ValidationError("blockwise bounds need a PartitionSpec")
    part.validate(sig)
    bounds = tuple(int(b) for b in bound)
    if len(bounds) != part.nblocks:
        raise ValidationError(f"expected {part.nblocks} block bounds, got {len(bounds)}")
    if any(b < 0 for b in bounds):
        return []
    return list(_enumerate_blocks(sig, part, bounds))


def enumerate_array(sig: Signature, bound: Bound, part: PartitionSpec | None = None) -> np.ndarray:
    pts = enumerate_exponents(sig, bound, part)
    if not pts:
        return np.zeros((0, sig.nvars), dtype=np.int64)
    return np.asarray(pts, dtype=np.int64)


def count_lattice(sig: Signature, bound: Bound, part: PartitionSpec | None = None) -> int:
    """``|Lambda(bound)|`` in closed form for non-inversive signatures."""
    if sig.inversive:
        return len(enumerate_exponents(sig, bound, part))
    if isinstance(bound, (int, np.integer)):
        return math.comb(int(bound) + sig.nvars, sig.nvars) if bound >= 0 else 0
    out = 1
    for size, rb in zip(part.sizes, bound):
        if rb < 0:
            return 0
        out *= math.comb(rb + size, size)
    return out


def divides(a: Exponent, b: Exponent, sig: Signature) -> bool:
    """Orthant-wise divisibility: ``b = a * c`` with ``a``, ``b`` in one closed orthant."""
    a = sig.check(a)
    b = sig.check(b)
    for i, (x, y) in enumerate(zip(a, b)):
        if i >= sig.m and sig.inversive:
            if y >= 0:
                if not 0 <= x <= y:
                    return False
            elif not y <= x <= 0:
                return False
        elif x > y:
            return False
    return True


def exponent_to_text(e: Exponent, sig: Signature) -> str:
    toks = []
    for i, x in enumerate(e):
        if not x:
            continue
        name = f"d{i + 1}" if i < sig.m else f"a{i - sig.m + 1}"
        toks.append(name if x == 1 else f"{name}^{x}")
    return " ".join(toks) if toks else "1"


_TOKEN = re.compile(r"([da])(\d+)(?:\^(-?\d+))?$")


def exponent_from_text(text: str, sig: Signature) -> Exponent:
    e = [0] * sig.nvars
    text = text.strip()
    if text in ("", "1"):
        return tuple(e)
    col = 1
    for tok in text.split():
        m = _TOKEN.match(tok)
        pos = text.find(tok, col - 1) + 1
        if not m:
            raise ParseError(f"bad exponent token {tok!r}", 1, pos)
        kind, idx, power = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        limit = sig.m if kind == "d" else sig.n
        if not 1 <= idx <= limit:
            raise ParseError(f"{kind}{idx} is outside the signature", 1, pos)
        slot = idx - 1 if kind == "d" else sig.m + idx - 1
        e[slot] += power
        col = pos + len(tok)
    return sig.check(e)


def exponent_to_json(e: Exponent, sig: Signature) -> dict:
    k, l = sig.split(e)
    return {"k": list(k), "l": list(l)}


def exponent_from_json(obj: dict, sig: Signature) -> Exponent:
    return sig.check(tuple(obj.get("k", [])) + tuple(obj.get("l", [])))
