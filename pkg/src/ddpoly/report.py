"""Report documents: one JSON tree, and a text view rendered from that same tree."""

from __future__ import annotations

import json

from . import __version__

SCHEMA_VERSION = 1


def document(problem, results: list[dict]) -> dict:
    sig = problem.sig
    doc = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "input_digest": problem.digest,
        "signature": {"m": sig.m, "n": sig.n, "inversive": sig.inversive},
        "field": problem.field.describe(),
        "extension": {"generators": problem.extension.s, "relations": len(problem.extension.relations)},
        "partition": (None if problem.partition is None else
                      {"m_blocks": list(problem.partition.m_blocks), "n_blocks": list(problem.partition.n_blocks)}),
        "verify": problem.verify,
        "tasks": results,
    }
    return doc


def error_document(exc, exit_code: int) -> dict:
    return {
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "line": getattr(exc, "line", None),
            "column": getattr(exc, "column", None),
            "exit_code": exit_code,
            "details": getattr(exc, "details", None),
        }
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- text ---------------------------------------------------------------------------


def _table(headers: list[str], rows: list[list]) -> list[str]:
    cells = [[str(h) for h in headers]] + [["" if c is None else str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    out = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    out.insert(1, "  ".join("-" * w for w in widths))
    return ["    " + line for line in out]


def _key(r) -> str:
    return ",".join(str(x) for x in r) if isinstance(r, list) else str(r)


def _dimension_lines(rep: dict) -> list[str]:
    lines = [f"  polynomial: {rep['polynomial_text']}", f"  threshold:  {_key(rep['threshold'])}"]
    inv = rep["invariants"]
    if "c_d" in inv:
        lines.append(f"  invariants: d={inv['d']} c_d={inv['c_d']} c_top={inv['c_top']} rank={inv['module_rank']}")
    else:
        tops = " ".join(f"[{_key(k)}]={v}" for k, v in inv["top_terms"])
        eprime = " ".join(f"({_key(k)})" for k in inv["E_prime"])
        lines.append(f"  invariants: d={inv['d']} a_caps={inv['a_caps']} rank={inv['module_rank']}")
        lines.append(f"  top terms:  {tops or '-'}")
        lines.append(f"  E':         {eprime or '-'}")
    lines.append(f"  method:     {rep['method']}")
    oracle = {}
    if rep["oracle"]:
        oracle = {_key(r): v for r, v in rep["oracle"]["table"]}
    rows = [[_key(r), v, oracle.get(_key(r))] for r, v in rep["table"]]
    headers = ["r", "dim", "oracle"] if oracle else ["r", "dim"]
    if not oracle:
        rows = [row[:2] for row in rows]
    lines += _table(headers, rows)
    if rep["oracle"]:
        o = rep["oracle"]
        lines.append(f"  oracle: {'agrees' if o['agrees'] else 'MISMATCH'} up to r={o['r_max']} (depth {o['depth']})")
    if rep.get("filtration_check") is not None:
        lines.append(f"  monomial filtration check: {'ok' if rep['filtration_check'] else 'differs'}")
    for note in rep["notes"]:
        lines.append(f"  note: {note}")
    return lines


def _task_lines(task: dict) -> list[str]:
    kind, res = task["kind"], task["result"]
    title = f"[{task['index']}] {kind}" + (f" ({task['label']})" if task.get("label") else "")
    lines = [title]
    if kind in ("chi_extension", "chi_intermediate"):
        lines += _dimension_lines(res)
    elif kind == "quasi_probe":
        lines.append(f"  verdict: {res['verdict']}")
        if res["polynomial_text"]:
            lines.append(f"  polynomial: {res['polynomial_text']} from r={res['threshold']}")
        if res["witness"]:
            w = res["witness"]
            lines.append(f"  witness: r={w['r']} expected {w['expected']} got {w['got']}")
        lines += _table(["r", "trdeg"], [[r, v] for r, v in res["values"]])
    elif kind in ("chain_audit", "theorem5_chain"):
        lines.append(f"  strict: {res['strict']}")
        lines += _table(["link", "gap", "upper", "lower"],
                        [[l["index"], l["gap"], l["upper"], l["lower"]] for l in res["links"]])
    elif kind == "dim_bound":
        lines.append(f"  top coefficients: {' '.join(map(str, res['top_coefficients']))}")
        lines.append(f"  drops: {' '.join(map(str, res['drops']))}")
        lines.append(f"  gaps: {' '.join(map(str, res['gaps']))}")
        lines.append(f"  type >= {res['type_lower_bound']}, dim = {res['dim']}")
    elif kind == "compare_generators":
        lines.append(f"  equal invariants: {res['equal_invariants']}")
        lines.append("  first presentation:")
        lines += ["  " + x for x in _dimension_lines(res["first"])]
        lines.append("  second presentation:")
        lines += ["  " + x for x in _dimension_lines(res["second"])]
        for i, rep in enumerate(res["intermediate"] or []):
            lines.append(f"  intermediate field, presentation {i + 1}:")
            lines += ["  " + x for x in _dimension_lines(rep)]
    return lines


def render_text(doc: dict) -> str:
    sig = doc["signature"]
    lines = [
        f"ddpoly {doc['version']}  input {doc['input_digest'][:16]}",
        f"signature m={sig['m']} n={sig['n']}{' inversive' if sig['inversive'] else ''}, "
        f"{doc['extension']['generators']} generator(s), {doc['extension']['relations']} relation(s)",
        "",
    ]
    for task in doc["tasks"]:
        lines += _task_lines(task)
        lines.append("")
    return "\n".join(lines)
