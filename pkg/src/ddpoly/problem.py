"""Problem files: YAML in, validated objects out.

Example::

    signature: {m: 1, n: 1}
    field:
      indeterminates: [x]
      derivations: [d/dx]
      translations: [shift x]
    partition: {m_blocks: [1], n_blocks: [1]}
    extension:
      generators: 1
      relations: []
    verify: 6
    tasks:
      - kind: chi_extension
      - kind: chi_intermediate
        generators: ["d1*e1"]
        closed: true

Every error carries the line and column of the offending node; errors
inside operator strings point at the character within the file.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import yaml

from .errors import DDPolyError, ParseError, ValidationError
from .monoid import PartitionSpec, Signature
from .opalg import DerivationAction, GroundField, OreAlgebra, TranslationAction, parse_element, parse_operator
from .kaehler import ExtensionPresentation, IntermediateFieldSpec

__all__ = ["ProblemSpec", "Task", "load_problem", "parse_problem"]

TASK_KINDS = (
    "chi_extension",
    "chi_intermediate",
    "quasi_probe",
    "chain_audit",
    "theorem5_chain",
    "dim_bound",
    "compare_generators",
)

_FAMILIES = ("even", "powers_of_two", "positive")


@dataclass
class Task:
    kind: str
    params: dict
    line: int | None = None
    label: str = ""


@dataclass
class ProblemSpec:
    sig: Signature
    field: GroundField
    alg: OreAlgebra
    extension: ExtensionPresentation
    partition: PartitionSpec | None
    tasks: list
    verify: int | None
    r_table: int | None = None
    closure_depth: int | None = None
    digest: str = ""
    source: str = dc_field(default="", repr=False)


# -- node helpers ------------------------------------------------------------------


def _where(node) -> tuple[int, int]:
    return node.start_mark.line + 1, node.start_mark.column + 1


def _fail(node, msg: str, cls=ParseError):
    line, col = _where(node)
    if cls is ParseError:
        raise ParseError(msg, line, col)
    err = cls(f"{msg} (line {line}, column {col})")
    err.line, err.column = line, col
    raise err


def _mapping(node, what: str, allowed: tuple[str, ...] | None = None) -> dict:
    if not isinstance(node, yaml.MappingNode):
        _fail(node, f"{what} must be a mapping")
    out = {}
    for k, v in node.value:
        if not isinstance(k, yaml.ScalarNode):
            _fail(k, f"keys of {what} must be plain names")
        if k.value in out:
            _fail(k, f"duplicate key {k.value!r} in {what}")
        if allowed is not None and k.value not in allowed:
            _fail(k, f"unknown key {k.value!r} in {what}; expected one of {', '.join(allowed)}")
        out[k.value] = v
    return out


def _seq(node, what: str) -> list:
    if not isinstance(node, yaml.SequenceNode):
        _fail(node, f"{what} must be a list")
    return list(node.value)


def _str(node, what: str) -> str:
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, f"{what} must be a string")
    return node.value


def _int(node, what: str, minimum: int | None = 0) -> int:
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, f"{what} must be an integer")
    try:
        v = int(node.value)
    except ValueError:
        _fail(node, f"{what} must be an integer, got {node.value!r}")
    if minimum is not None and v < minimum:
        _fail(node, f"{what} must be >= {minimum}", ValidationError)
    return v


def _bool(node, what: str) -> bool:
    v = _str(node, what).lower()
    if v in ("true", "yes", "on"):
        return True
    if v in ("false", "no", "off"):
        return False
    _fail(node, f"{what} must be true or false")


def _is_null(node) -> bool:
    return isinstance(node, yaml.ScalarNode) and node.tag.endswith(":null")


def _text_origin(node) -> tuple[int, int]:
    line, col = _where(node)
    if node.style in ("'", '"'):
        col += 1
    return line, col


def _parse_in_node(node, fn, *args):
    """Run a string parser and shift its error position into file coordinates."""
    text = _str(node, "expression")
    try:
        return fn(text, *args)
    except ParseError as exc:
        line0, col0 = _text_origin(node)
        pl, pc = exc.line or 1, exc.column or 1
        line = line0 + pl - 1
        col = col0 + pc - 1 if pl == 1 else pc
        msg = str(exc).rsplit(" (line", 1)[0]
        raise ParseError(f"{msg} in {text!r}", line, col) from None


# -- sections ------------------------------------------------------------------------


def _signature(node) -> Signature:
    d = _mapping(node, "signature", ("m", "n", "inversive"))
    for key in ("m", "n"):
        if key not in d:
            _fail(node, f"signature needs {key!r}")
    m, n = _int(d["m"], "m"), _int(d["n"], "n")
    inv = _bool(d["inversive"], "inversive") if "inversive" in d else False
    if m + n == 0:
        _fail(node, "signature needs at least one operator", ValidationError)
    return Signature(m, n, inv)


def _derivation(node) -> DerivationAction:
    text = _str(node, "derivation").strip()
    if text in ("zero", "0"):
        return DerivationAction()
    if text.startswith("d/d") and len(text) > 3:
        return DerivationAction(text[3:].strip())
    _fail(node, f"derivation must be 'zero' or 'd/d<name>', got {text!r}")


def _translation(node) -> TranslationAction:
    parts = _str(node, "translation").split()
    if parts == ["identity"]:
        return TranslationAction()
    if len(parts) == 2 and parts[0] == "shift":
        return TranslationAction("shift", parts[1])
    if len(parts) == 3 and parts[0] == "scale":
        try:
            factor = Fraction(parts[2])
        except ValueError:
            _fail(node, f"scale factor must be rational, got {parts[2]!r}")
        if factor == 0:
            _fail(node, "scale factor must be nonzero", ValidationError)
        return TranslationAction("scale", parts[1], factor)
    _fail(node, "translation must be 'identity', 'shift <x>' or 'scale <x> <c>'")


def _field(node, sig: Signature) -> GroundField:
    if node is None:
        return GroundField.constants(sig)
    d = _mapping(node, "field", ("indeterminates", "derivations", "translations"))
    names = [_str(x, "indeterminate") for x in _seq(d["indeterminates"], "indeterminates")] \
        if "indeterminates" in d else []
    ders = [_derivation(x) for x in _seq(d["derivations"], "derivations")] if "derivations" in d else None
    trs = [_translation(x) for x in _seq(d["translations"], "translations")] if "translations" in d else None
    if ders is not None and len(ders) != sig.m:
        _fail(d["derivations"], f"need {sig.m} derivation actions", ValidationError)
    if trs is not None and len(trs) != sig.n:
        _fail(d["translations"], f"need {sig.n} translation actions", ValidationError)
    try:
        return GroundField(sig, names, ders, trs)
    except ValidationError as exc:
        _fail(node, str(exc), ValidationError)


def _partition(node, sig: Signature) -> PartitionSpec | None:
    if node is None or _is_null(node):
        return None
    d = _mapping(node, "partition", ("m_blocks", "n_blocks"))
    mb = tuple(_int(x, "block size", 1) for x in _seq(d["m_blocks"], "m_blocks")) if "m_blocks" in d else ()
    nb = tuple(_int(x, "block size", 1) for x in _seq(d["n_blocks"], "n_blocks")) if "n_blocks" in d else ()
    part = PartitionSpec(mb, nb)
    try:
        part.validate(sig)
    except DDPolyError as exc:
        _fail(node, str(exc), ValidationError)
    return part


def _elements(node, alg, rank: int, what: str) -> list:
    return [_parse_in_node(x, parse_element, alg, rank) for x in _seq(node, what)]


def _extension(node, alg) -> ExtensionPresentation:
    d = _mapping(node, "extension", ("generators", "relations"))
    if "generators" not in d:
        _fail(node, "extension needs 'generators'")
    s = _int(d["generators"], "generators", 1)
    rels = _elements(d["relations"], alg, s, "relations") if "relations" in d and not _is_null(d["relations"]) else []
    return ExtensionPresentation(alg, s, tuple(rels))


def _matrix(node, alg, rows: int | None, cols: int, what: str) -> list:
    out = []
    for row in _seq(node, what):
        items = _seq(row, f"row of {what}")
        if len(items) != cols:
            _fail(row, f"each row of {what} needs {cols} entries", ValidationError)
        out.append([_parse_in_node(x, parse_operator, alg) for x in items])
    if rows is not None and len(out) != rows:
        _fail(node, f"{what} needs {rows} rows", ValidationError)
    return out


_TASK_KEYS = {
    "chi_extension": ("partition",),
    "chi_intermediate": ("generators", "closed", "partition"),
    "quasi_probe": ("monomials", "family", "r_max", "error_on_non_polynomial"),
    "chain_audit": ("fields",),
    "theorem5_chain": ("caps",),
    "dim_bound": ("k",),
    "compare_generators": ("T", "U", "second", "intermediate"),
}


def _task(node, alg, X: ExtensionPresentation) -> Task:
    raw = _mapping(node, "task")
    if "kind" not in raw:
        _fail(node, "task needs a 'kind'")
    kind = _str(raw["kind"], "kind")
    if kind not in TASK_KINDS:
        _fail(raw["kind"], f"unknown task kind {kind!r}; expected one of {', '.join(TASK_KINDS)}")
    allowed = ("kind", "label") + _TASK_KEYS[kind]
    d = _mapping(node, f"{kind} task", allowed)
    label = _str(d["label"], "label") if "label" in d else ""
    p: dict = {}
    if "partition" in d:
        p["partition"] = _bool(d["partition"], "partition")
    if kind == "chi_intermediate":
        if "generators" not in d:
            _fail(node, "chi_intermediate needs 'generators'")
        p["generators"] = _elements(d["generators"], alg, X.s, "generators")
        if not p["generators"]:
            _fail(d["generators"], "chi_intermediate needs at least one generator", ValidationError)
        p["closed"] = _bool(d["closed"], "closed") if "closed" in d else False
    elif kind == "quasi_probe":
        if "r_max" not in d:
            _fail(node, "quasi_probe needs 'r_max'")
        p["r_max"] = _int(d["r_max"], "r_max")
        p["error_on_non_polynomial"] = (_bool(d["error_on_non_polynomial"], "error_on_non_polynomial")
                                        if "error_on_non_polynomial" in d else False)
        if ("monomials" in d) == ("family" in d):
            _fail(node, "quasi_probe needs exactly one of 'monomials' or 'family'")
        if "monomials" in d:
            p["monomials"] = _elements(d["monomials"], alg, X.s, "monomials")
        else:
            p["family"] = _family(d["family"], alg, X, p["r_max"])
    elif kind == "chain_audit":
        if "fields" not in d:
            _fail(node, "chain_audit needs 'fields'")
        p["fields"] = [_elements(f, alg, X.s, "field generators") for f in _seq(d["fields"], "fields")]
        if not p["fields"]:
            _fail(d["fields"], "chain_audit needs at least one field", ValidationError)
    elif kind == "theorem5_chain":
        if "caps" not in d:
            _fail(node, "theorem5_chain needs 'caps'")
        p["caps"] = [_int(x, "cap") for x in _seq(d["caps"], "caps")]
        if len(p["caps"]) != alg.sig.nvars:
            _fail(d["caps"], f"need {alg.sig.nvars} caps", ValidationError)
    elif kind == "dim_bound":
        p["k"] = _int(d["k"], "k", 1) if "k" in d else X.s
    elif kind == "compare_generators":
        for key in ("T", "U"):
            if key not in d:
                _fail(node, f"compare_generators needs {key!r}")
        second = None
        if "second" in d:
            sd = _mapping(d["second"], "second", ("generators", "relations"))
            s2 = _int(sd["generators"], "generators", 1) if "generators" in sd else X.s
            rels = _elements(sd["relations"], alg, s2, "relations") if "relations" in sd else []
            second = ExtensionPresentation(alg, s2, tuple(rels))
        T = _seq(d["T"], "T")
        s2 = second.s if second else len(T)
        p["T"] = _matrix(d["T"], alg, s2, X.s, "T")
        p["U"] = _matrix(d["U"], alg, X.s, s2, "U")
        p["second"] = second
        p["intermediate"] = (_elements(d["intermediate"], alg, X.s, "intermediate")
                             if "intermediate" in d else None)
    return Task(kind, p, node.start_mark.line + 1, label)


def _family(node, alg, X, r_max: int) -> list:
    d = _mapping(node, "family", ("base", "component", "multipliers"))
    if "base" not in d or "multipliers" not in d:
        _fail(node, "family needs 'base' and 'multipliers'")
    base_op = _parse_in_node(d["base"], parse_operator, alg)
    if len(base_op.terms) != 1:
        _fail(d["base"], "family base must be a single power product")
    (base,) = base_op.terms
    if not any(base):
        _fail(d["base"], "family base must not be 1", ValidationError)
    comp = _int(d["component"], "component", 1) if "component" in d else 1
    if comp > X.s:
        _fail(d["component"], f"component exceeds the {X.s} generators", ValidationError)
    kind = _str(d["multipliers"], "multipliers")
    if kind not in _FAMILIES:
        _fail(d["multipliers"], f"multipliers must be one of {', '.join(_FAMILIES)}")
    step = sum(base)
    ks = []
    k = 1
    while k * step <= r_max:
        if kind == "positive" or (kind == "even" and k % 2 == 0) or \
                (kind == "powers_of_two" and k & (k - 1) == 0 and k > 1):
            ks.append(k)
        k += 1
    return [(comp - 1, tuple(k * x for x in base)) for k in ks]


def parse_problem(text: str) -> ProblemSpec:
    try:
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise ParseError(f"malformed YAML: {exc.problem}", mark.line + 1 if mark else None,
                         mark.column + 1 if mark else None) from None
    if root is None:
        raise ParseError("empty problem file", 1, 1)
    top = _mapping(root, "problem", ("signature", "field", "partition", "extension", "tasks",
                                     "verify", "table", "closure_depth"))
    for key in ("signature", "extension", "tasks"):
        if key not in top:
            _fail(root, f"problem needs {key!r}")
    sig = _signature(top["signature"])
    field = _field(top.get("field"), sig)
    alg = OreAlgebra(field)
    part = _partition(top.get("partition"), sig)
    X = _extension(top["extension"], alg)
    tasks = [_task(t, alg, X) for t in _seq(top["tasks"], "tasks")]
    verify = None
    if "verify" in top and not _is_null(top["verify"]):
        v = top["verify"]
        verify = None if _str(v, "verify").lower() in ("off", "false", "no") else _int(v, "verify")
    r_table = _int(top["table"], "table") if "table" in top else None
    depth = _int(top["closure_depth"], "closure_depth") if "closure_depth" in top else None
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return ProblemSpec(sig, field, alg, X, part, tasks, verify, r_table, depth, digest, text)


def load_problem(path: str) -> ProblemSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())
