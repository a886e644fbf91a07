"""Command-line front end.

Subcommands::

    catqm check FILE                      print the entry term's judgment
    catqm eval FILE --model M             print the entry term's matrix (JSON)
    catqm eq FILE1 FILE2 --model M        exact equality with witness
    catqm normalize FILE                  print the rewrite normal form
    catqm verify SUITE [--model M]        run a verification suite (JSON lines)
    catqm export-dot FILE                 print a Graphviz digraph

Exit codes: 0 success / all equal; 2 parse error; 3 type error; 4 model
error; 5 inequality.  ``verify --figures DIR`` additionally renders one
figure per equality case and a summary chart.  ``CATQM_JOBS`` caps the
verification worker pool.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dsl, kernel
from .dot import export_dot
from .dsl import DslParseError
from .kernel import TermTypeError
from .matrix import ModelError, evaluate
from .models import MODEL_NAMES, model_over, standard_signature
from .rewrite import normalize
from .scalars import ScalarError
from .verify import SUITES, case_matrices, run_suite

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_TYPE = 3
EXIT_MODEL = 4
EXIT_UNEQUAL = 5


def _load_document(path: str) -> dsl.TermDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DslParseError(f"cannot read {path}: {exc}") from None
    doc = dsl.parse_document(text)
    # documents may rely on the built-in generators
    base = standard_signature()
    doc.signature = base.extended(doc.signature.objects, doc.signature.morphisms)
    return doc


def _entry_term(doc: dsl.TermDocument, path: str):
    if doc.entry is None:
        raise DslParseError(f"{path} has no (term ...) form")
    return doc.entry


def _cmd_check(args) -> int:
    doc = _load_document(args.file)
    judgment = kernel.typecheck(_entry_term(doc, args.file), doc.signature)
    print(judgment)
    return EXIT_OK


def _cmd_eval(args) -> int:
    doc = _load_document(args.file)
    model = model_over(args.model, doc.signature)
    mat = evaluate(_entry_term(doc, args.file), model)
    print(json.dumps(mat.to_json(), separators=(",", ":"), sort_keys=True))
    return EXIT_OK


def _cmd_eq(args) -> int:
    doc1 = _load_document(args.file)
    doc2 = _load_document(args.file2)
    sig = doc1.signature.extended(doc2.signature.objects,
                                  doc2.signature.morphisms)
    model = model_over(args.model, sig)
    t1 = _entry_term(doc1, args.file)
    t2 = _entry_term(doc2, args.file2)
    j1 = kernel.typecheck(t1, sig)
    j2 = kernel.typecheck(t2, sig)
    if j1 != j2:
        raise TermTypeError(f"judgments differ: {j1} versus {j2}")
    m1 = evaluate(t1, model)
    m2 = evaluate(t2, model)
    diff = m1.first_difference(m2)
    if diff is None:
        print(json.dumps({"equal": True}, separators=(",", ":")))
        return EXIT_OK
    i, j, x, y = diff
    print(json.dumps({
        "equal": False,
        "witness": f"first difference at ({i},{j}): "
                   f"{model.sr.fmt(x)} versus {model.sr.fmt(y)}",
    }, separators=(",", ":"), sort_keys=True))
    return EXIT_UNEQUAL


def _cmd_normalize(args) -> int:
    doc = _load_document(args.file)
    term = _entry_term(doc, args.file)
    kernel.typecheck(term, doc.signature)
    print(dsl.print_term(normalize(term, doc.signature)))
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose one of "
              f"{', '.join(sorted(SUITES))}", file=sys.stderr)
        return EXIT_MODEL
    reports = run_suite(args.suite, args.model, jobs=args.jobs)
    reports.sort(key=lambda r: r.case)
    for rep in reports:
        payload = rep.to_json()
        if args.no_timing:
            payload["ms"] = 0.0
        print(json.dumps(payload, separators=(",", ":")))
    if args.figures:
        from . import figures
        for rep in reports:
            mats = case_matrices(rep.case, args.model)
            if mats is not None:
                figures.render_case(rep, mats[0], mats[1], args.figures)
        figures.render_summary(reports, args.figures)
    return EXIT_OK if all(r.equal for r in reports) else EXIT_UNEQUAL


def _cmd_export_dot(args) -> int:
    doc = _load_document(args.file)
    term = _entry_term(doc, args.file)
    sys.stdout.write(export_dot(term, doc.signature))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catqm",
        description="exact verification of entanglement protocols over "
                    "typed categorical terms")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument("--model", default="fdhilb-exact",
                       help=f"one of {', '.join(MODEL_NAMES)}")

    p = sub.add_parser("check", help="typecheck a document's entry term")
    p.add_argument("file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("eval", help="evaluate the entry term to a JSON matrix")
    p.add_argument("file")
    add_model(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("eq", help="exact equality of two entry terms")
    p.add_argument("file")
    p.add_argument("file2")
    add_model(p)
    p.set_defaults(func=_cmd_eq)

    p = sub.add_parser("normalize", help="print the rewrite normal form")
    p.add_argument("file")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    add_model(p)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker pool size (default: CATQM_JOBS or 4)")
    p.add_argument("--figures", metavar="DIR", default=None,
                   help="render per-case and summary figures into DIR")
    p.add_argument("--no-timing", action="store_true",
                   help="zero the ms field for byte-stable output")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export-dot", help="print a Graphviz digraph")
    p.add_argument("file")
    p.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DslParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TermTypeError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return EXIT_TYPE
    except (ModelError, ScalarError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
