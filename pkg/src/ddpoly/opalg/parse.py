"""Reading and writing operators and module elements as text.

Grammar (``*`` is mandatory between factors)::

    expr   := [+|-] term ((+|-) term)*
    term   := power ((*|/) power)*
    power  := atom [^ [-] INT]
    atom   := INT | NAME | ( expr )

Names ``d<i>``, ``a<j>`` are the basic operators, ``e<i>`` the free module
generators and any declared indeterminate is a scalar.  Products are taken
in the operator ring, so ``d1*x`` expands to ``x*d1 + 1`` when ``d1`` acts as
``d/dx``.  Module generators may only appear as the rightmost factor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError
from .algebra import ModuleElement, Operator, OreAlgebra, TermOrder

__all__ = ["parse_operator", "parse_element", "operator_to_text", "element_to_text"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass
class _Tok:
    kind: str  # "int" | "name" | "sym" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and pos >= len(text):
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise _err(text, m.start(3), f"unexpected character {ch!r}")
            toks.append(_Tok("sym", ch, m.start(3)))
        else:
            break
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _err(text: str, pos: int, msg: str) -> ParseError:
    line, col = _line_col(text, pos)
    return ParseError(msg, line, col)


class _Parser:
    def __init__(self, text: str, alg: OreAlgebra, rank: int | None):
        self.text = text
        self.alg = alg
        self.rank = rank
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, tok: _Tok, msg: str):
        raise _err(self.text, tok.pos, msg)

    def parse(self):
        if self.peek().kind == "end":
            self.fail(self.peek(), "empty expression")
        val = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.fail(tok, f"unexpected {tok.text!r}")
        return val

    def expr(self):
        tok = self.peek()
        sign = 1
        if tok.kind == "sym" and tok.text in "+-":
            self.take()
            sign = -1 if tok.text == "-" else 1
        val = self.term()
        if sign < 0:
            val = -val
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "+-":
                self.take()
                rhs = self.term()
                val = self._combine(val, rhs, tok, tok.text)
            else:
                return val

    def _combine(self, a, b, tok, op):
        if type(a) is not type(b):
            self.fail(tok, "cannot add an operator and a module element")
        return a + b if op == "+" else a - b

    def term(self):
        val = self.power()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "*/":
                self.take()
                rhs_tok = self.peek()
                rhs = self.power()
                if tok.text == "*":
                    if isinstance(val, ModuleElement):
                        self.fail(tok, "a module element must be the rightmost factor")
                    val = val * rhs
                else:
                    if not isinstance(rhs, Operator) or not rhs.is_scalar() or rhs.is_zero():
                        self.fail(rhs_tok, "can only divide by a nonzero scalar")
                    inv = self.alg.scalar(self.alg.field.one() / rhs.terms[self.alg.sig.zero()])
                    val = val * inv if isinstance(val, Operator) else val.scale(inv.terms[self.alg.sig.zero()])
            elif tok.kind in ("int", "name") or (tok.kind == "sym" and tok.text == "("):
                self.fail(tok, "missing '*' between factors")
            else:
                return val

    def power(self):
        base_tok = self.peek()
        val = self.atom()
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "^":
            self.take()
            neg = False
            if self.peek().kind == "sym" and self.peek().text == "-":
                self.take()
                neg = True
            exp_tok = self.take()
            if exp_tok.kind != "int":
                self.fail(exp_tok, "exponent must be an integer")
            k = int(exp_tok.text)
            if isinstance(val, ModuleElement):
                self.fail(tok, "cannot raise a module element to a power")
            if neg:
                if not val.is_scalar() or val.is_zero():
                    self.fail(base_tok, "negative powers are only allowed for nonzero scalars")
                c = val.terms[self.alg.sig.zero()]
                return self.alg.scalar(self.alg.field.one() / c ** k)
            return val ** k
        return val

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return self.alg.scalar(int(tok.text))
        if tok.kind == "name":
            return self._name(tok)
        if tok.kind == "sym" and tok.text == "(":
            val = self.expr()
            close = self.take()
            if not (close.kind == "sym" and close.text == ")"):
                self.fail(close, "expected ')'")
            return val
        self.fail(tok, "expected a number, a name or '('" if tok.kind != "end" else "unexpected end of input")

    def _name(self, tok: _Tok):
        name = tok.text
        sig = self.alg.sig
        m = re.fullmatch(r"([dae])(\d+)", name)
        if m and name not in self.alg.field.indeterminates:
            kind, idx = m.group(1), int(m.group(2))
            if kind == "d":
                if not 1 <= idx <= sig.m:
                    self.fail(tok, f"{name} is not a derivation of this signature")
                return self.alg.delta(idx)
            if kind == "a":
                if not 1 <= idx <= sig.n:
                    self.fail(tok, f"{name} is not a translation of this signature")
                return self.alg.alpha(idx)
            if self.rank is None:
                self.fail(tok, "module generators are not allowed in an operator")
            if not 1 <= idx <= self.rank:
                self.fail(tok, f"{name} exceeds the module rank {self.rank}")
            return self.alg.basis(self.rank, idx)
        if name in self.alg.field.indeterminates:
            return Operator(self.alg, {sig.zero(): self.alg.field.gen(name)})
        self.fail(tok, f"unknown name {name!r}")


def parse_operator(text: str, alg: OreAlgebra) -> Operator:
    val = _Parser(text, alg, None).parse()
    return val


def parse_element(text: str, alg: OreAlgebra, rank: int) -> ModuleElement:
    """Parse a module element; a bare operator ``A`` is read as ``A*e1`` only when ``rank == 1``."""
    val = _Parser(text, alg, rank).parse()
    if isinstance(val, Operator):
        if rank != 1 and not val.is_zero():
            raise ParseError("expected a module element (use e1..e%d)" % rank, 1, 1)
        return ModuleElement(alg, rank, {(0, e): c for e, c in val.terms.items()})
    return val


# -- printing -----------------------------------------------------------------


def _mono_text(e: tuple, m: int) -> list[str]:
    out = []
    for i, x in enumerate(e):
        if x:
            name = f"d{i + 1}" if i < m else f"a{i - m + 1}"
            out.append(name if x == 1 else f"{name}^{x}")
    return out


def _coeff_text(c, field) -> tuple[str, bool]:
    """Coefficient text without sign, and whether it was negative."""
    if field.is_constant:
        q = Fraction(c)
        neg = q < 0
        q = abs(q)
        return (str(q) if q.denominator == 1 else f"({q})"), neg
    s = field.to_text(c).replace(" ", "")
    neg = False
    if s.startswith("-") and not _has_top_level_addition(s[1:]):
        neg, s = True, s[1:]
    if not re.fullmatch(r"[A-Za-z_0-9^]+", s):
        s = f"({s})"
    return s, neg


def _has_top_level_addition(s: str) -> bool:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and s[i - 1] != "^":
            return True
    return False


def _terms_text(items, field, m) -> str:
    if not items:
        return "0"
    parts = []
    for mono, gen, c in items:
        ctext, neg = _coeff_text(c, field)
        factors = mono + ([gen] if gen else [])
        if factors and ctext == "1":
            body = "*".join(factors)
        else:
            body = "*".join([ctext] + factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def operator_to_text(A: Operator, order: TermOrder | None = None) -> str:
    order = order or TermOrder()
    m = A.alg.sig.m
    items = [(_mono_text(e, m), None, c) for e, c in order.sorted_terms(A)]
    return _terms_text(items, A.alg.field, m)


def element_to_text(v: ModuleElement, order: TermOrder | None = None) -> str:
    order = order or TermOrder()
    m = v.alg.sig.m
    items = [(_mono_text(e, m), f"e{comp + 1}", c) for (comp, e), c in order.sorted_terms(v)]
    return _terms_text(items, v.alg.field, m)
