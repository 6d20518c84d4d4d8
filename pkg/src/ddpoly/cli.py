"""``ddpoly run problem.yaml`` -- batch dimension reports.

Exit codes: 0 success, 2 parse or validation error, 3 oracle mismatch,
4 a non-polynomial probe verdict flagged as an error, 5 oracle did not
stabilize, 1 anything else.  Failures print a JSON error object on stderr
(and to ``--json`` when given).
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import chains, kaehler
from .errors import (
    DDPolyError,
    NotEventuallyPolynomial,
    NotStabilized,
    OracleMismatch,
    ParseError,
    ValidationError,
)
from .kaehler import IntermediateFieldSpec
from .problem import ProblemSpec, load_problem
from .report import document, dumps, error_document, render_text

log = logging.getLogger("ddpoly")

EXIT_CODES = (
    (ParseError, 2),
    (ValidationError, 2),
    (OracleMismatch, 3),
    (NotEventuallyPolynomial, 4),
    (NotStabilized, 5),
)


def exit_code_for(exc: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 2 if isinstance(exc, DDPolyError) else 1


def _part_for(task, problem: ProblemSpec, partition_mode: bool):
    want = task.params.get("partition", partition_mode)
    if not want:
        return None
    if problem.partition is None:
        raise ValidationError(f"task on line {task.line} asks for a partition but the problem declares none")
    return problem.partition


def run_task(task, problem: ProblemSpec, *, verify=None, r_table=None, partition_mode=False) -> dict:
    X = problem.extension
    p = task.params
    depth = problem.closure_depth
    if task.kind == "chi_extension":
        part = _part_for(task, problem, partition_mode)
        return kaehler.chi_extension(X, part, r_table=r_table, verify=verify, closure_depth=depth).to_json()
    if task.kind == "chi_intermediate":
        part = _part_for(task, problem, partition_mode)
        F = IntermediateFieldSpec(tuple(p["generators"]), p["closed"], task.label)
        return kaehler.chi_intermediate(X, F, part, r_table=r_table, verify=verify,
                                        closure_depth=depth).to_json()
    if task.kind == "quasi_probe":
        gens = p.get("monomials") or p.get("family") or []
        rep = kaehler.quasi_polynomial_probe(X, gens, p["r_max"])
        if rep.verdict != "polynomial" and p["error_on_non_polynomial"]:
            w = rep.witness or {}
            raise NotEventuallyPolynomial(
                f"task on line {task.line}: transcendence degrees are not eventually polynomial",
                r=w.get("r"), expected=w.get("expected"), got=w.get("got"))
        return rep.to_json()
    if task.kind == "chain_audit":
        c = chains.ChainSpec(X, [IntermediateFieldSpec(tuple(f), True) for f in p["fields"]])
        return chains.audit(c).to_json()
    if task.kind == "theorem5_chain":
        return chains.audit(chains.theorem5_chain(X, p["caps"])).to_json()
    if task.kind == "dim_bound":
        return chains.dim_bound_report(X, p["k"]).to_json()
    if task.kind == "compare_generators":
        F = None
        if p["intermediate"]:
            F = IntermediateFieldSpec(tuple(p["intermediate"]), True)
        rep = kaehler.compare_generator_sets(X, p["T"], p["U"], p["second"], F, verify=verify)
        return rep.to_json()
    raise ValidationError(f"unknown task kind {task.kind!r}")


def run(problem: ProblemSpec, *, verify=None, r_table=None, partition_mode=False) -> dict:
    verify = problem.verify if verify is None else verify
    if verify is not None and verify < 0:
        verify = None
    r_table = problem.r_table if r_table is None else r_table
    results = []
    for i, task in enumerate(problem.tasks):
        log.info("task %d: %s", i, task.kind)
        res = run_task(task, problem, verify=verify, r_table=r_table, partition_mode=partition_mode)
        results.append({"index": i, "kind": task.kind, "label": task.label, "line": task.line, "result": res})
    problem.verify = verify
    return document(problem, results)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddpoly", description="Dimension polynomials of difference-differential modules.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run every task of a problem file")
    r.add_argument("problem", help="YAML problem file")
    r.add_argument("--verify", type=int, metavar="R_MAX", help="check against the oracle up to this order (-1: off)")
    r.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    r.add_argument("--table", type=int, metavar="R_TABLE", help="exact value table bound")
    r.add_argument("--partition-mode", action="store_true", help="blockwise reports for the declared partition")
    r.add_argument("-q", "--quiet", action="store_true", help="no text report")
    r.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        problem = load_problem(args.problem)
        doc = run(problem, verify=args.verify, r_table=args.table, partition_mode=args.partition_mode)
    except (DDPolyError, OSError) as exc:
        code = exit_code_for(exc)
        err = dumps(error_document(exc, code))
        sys.stderr.write(err)
        if args.json and args.json != "-":
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(err)
        return code
    text = dumps(doc)
    if args.json == "-":
        sys.stdout.write(text)
    else:
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
        if not args.quiet:
            sys.stdout.write(render_text(doc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
