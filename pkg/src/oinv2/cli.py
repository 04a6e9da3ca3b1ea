"""Command-line front end.

Exit codes: 0 success / true / invariant up to the cap, 1 false / not
invariant / no model, 2 a complete verdict was required but the cap is
below the bound, 64 usage, 65 malformed formula or input file, 70 an
internal invariant failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .checker import evaluate
from .cnf import BudgetError, ground_to_cnf
from .finder import InternalInvariantError, find_model, find_model_up_to
from .formula import FormulaError, parse, render
from .invariance import check_order_invariance, reduce_validity
from .normal_form import NormalForm, coarse_bound, normalize, size_bound
from .shrinker import ShrinkError, shrink
from .structures import Structure, StructureError, validate

EXIT_OK, EXIT_FALSE, EXIT_INCOMPLETE = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 64, 65, 70

log = logging.getLogger("oinv2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _formula(args) -> str:
    if args.file:
        return Path(args.file).read_text()
    if args.formula is None:
        raise UsageError("give a formula inline or with --file")
    return args.formula


def _emit(args, text: str, payload: dict):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _load_structure(path: str) -> Structure:
    return Structure.from_json(Path(path).read_text())


def cmd_parse(args):
    f = parse(_formula(args))
    _emit(args, render(f), {"formula": render(f)})
    return EXIT_OK


def cmd_normalize(args):
    nf = normalize(parse(_formula(args)))
    _emit(args, nf.render(), nf.to_dict())
    return EXIT_OK


def cmd_model_check(args):
    s = _load_structure(args.structure)
    validate(s)
    value = evaluate(s, parse(_formula(args)))
    _emit(args, "true" if value else "false", {"value": value})
    return EXIT_OK if value else EXIT_FALSE


def cmd_find_model(args):
    nf = normalize(parse(_formula(args)))
    if args.size is not None:
        model = find_model(nf, args.size, jobs=args.jobs)
        complete = True
    else:
        result = find_model_up_to(nf, args.cap, jobs=args.jobs)
        model, complete = result.model, result.complete
    if model is None:
        what = f"size {args.size}" if args.size is not None else f"size <= {args.cap}"
        note = "" if complete else " (incomplete: below the small-model bound)"
        _emit(args, f"no model of {what}{note}", {"model": None, "complete": complete})
        return EXIT_FALSE
    _emit(args, model.to_json(), {"model": model.to_dict()})
    return EXIT_OK


def cmd_ground(args):
    nf = normalize(parse(_formula(args)))
    cnf = ground_to_cnf(nf, args.size)
    Path(args.dimacs).write_text(cnf.to_dimacs())
    _emit(
        args,
        f"wrote {args.dimacs}: {cnf.num_vars} variables, {len(cnf.clauses)} clauses",
        {"path": args.dimacs, "variables": cnf.num_vars, "clauses": len(cnf.clauses)},
    )
    return EXIT_OK


def cmd_shrink(args):
    if args.normal_form:
        nf = NormalForm.from_dict(json.loads(Path(args.normal_form).read_text()))
    else:
        nf = normalize(parse(_formula(args)))
    s = _load_structure(args.structure)
    try:
        report = shrink(s, nf, force=args.force)
    except ShrinkError as exc:
        if exc.report is None:
            raise FormulaError(str(exc)) from exc
        print(json.dumps(exc.report.to_dict()), file=sys.stderr)
        raise InternalInvariantError(str(exc)) from exc
    payload = report.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(payload))
    _emit(
        args,
        f"{report.input_size} -> {report.output_size} elements (bound {report.bound}), "
        f"{len(report.rewired)} rewired, verified",
        payload,
    )
    return EXIT_OK


def cmd_check_invariance(args):
    phi = parse(_formula(args))
    verdict = check_order_invariance(phi, args.cap, jobs=args.jobs)
    payload = {"formula": render(phi), "cap": args.cap, "complete": verdict.complete}
    if verdict.invariant:
        payload["verdict"] = "invariant" if verdict.complete else "invariant-up-to-cap"
        payload["bound"] = verdict.bound
        text = verdict.describe()
    else:
        c = verdict.counterexample
        payload["verdict"] = "not-invariant"
        payload["counterexample"] = c.to_dict()
        text = "\n".join([
            verdict.describe(),
            "true under:  " + c.under(c.ord0).to_json(),
            "false under: " + c.under(c.ord1).to_json(),
        ])
        if args.save:
            Path(f"{args.save}.true.json").write_text(c.under(c.ord0).to_json() + "\n")
            Path(f"{args.save}.false.json").write_text(c.under(c.ord1).to_json() + "\n")
            Path(f"{args.save}.report.json").write_text(json.dumps(payload, indent=2) + "\n")
    _emit(args, text, payload)
    if not verdict.invariant:
        return EXIT_FALSE
    if args.require_complete and not verdict.complete:
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_reduce_validity(args):
    phi = parse(_formula(args))
    v = reduce_validity(phi, args.cap, jobs=args.jobs)
    payload = {
        "formula": render(phi),
        "cap": args.cap,
        "valid": v.valid,
        "complete": v.complete,
        "single_element_case": v.corner_case,
    }
    _emit(args, v.describe(), payload)
    if not v.valid:
        return EXIT_FALSE
    if args.require_complete and not v.complete:
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_bound(args):
    nf = normalize(parse(_formula(args)))
    b = size_bound(nf)
    coarse = coarse_bound(nf.source_size)
    _emit(args, str(b), {"bound": b, "M": nf.M, "m": list(nf.m), "coarse_bound": str(coarse)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="oinv2", description="Order-invariance toolkit for two-variable logic.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    def formula_arg(sp):
        sp.add_argument("formula", nargs="?")
        sp.add_argument("--file", help="read the formula from a file")

    sp = command("parse", cmd_parse, "parse and re-render a formula")
    formula_arg(sp)
    sp = command("normalize", cmd_normalize, "normal form of the non-invariance sentence")
    formula_arg(sp)
    sp = command("model-check", cmd_model_check, "evaluate a sentence on a structure file")
    sp.add_argument("structure")
    formula_arg(sp)
    sp = command("find-model", cmd_find_model, "search models of the non-invariance normal form")
    size = sp.add_mutually_exclusive_group(required=True)
    size.add_argument("--size", type=int)
    size.add_argument("--cap", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    formula_arg(sp)
    sp = command("ground", cmd_ground, "write the grounded CNF in DIMACS format")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--dimacs", required=True)
    formula_arg(sp)
    sp = command("shrink", cmd_shrink, "shrink a model of a normal form")
    sp.add_argument("structure")
    sp.add_argument("--normal-form", help="normal form JSON instead of a formula")
    sp.add_argument("--force", action="store_true", help="run the construction even below the bound")
    sp.add_argument("--out", help="write the shrunk structure and report here")
    formula_arg(sp)
    sp = command("check-invariance", cmd_check_invariance, "decide order-invariance up to a size cap")
    sp.add_argument("--cap", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--require-complete", action="store_true")
    sp.add_argument("--save", metavar="PREFIX", help="write counterexample files PREFIX.{true,false,report}.json")
    formula_arg(sp)
    sp = command("reduce-validity", cmd_reduce_validity, "decide finite validity via order-invariance")
    sp.add_argument("--cap", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--require-complete", action="store_true")
    formula_arg(sp)
    sp = command("bound", cmd_bound, "print the small-model size bound")
    formula_arg(sp)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    for flag in ("cap", "size", "jobs"):
        value = getattr(args, flag, None)
        if value is not None and value < 1:
            print(f"oinv2: --{flag} must be at least 1", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"oinv2: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"oinv2: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormulaError, StructureError, BudgetError, json.JSONDecodeError) as exc:
        print(f"oinv2: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InternalInvariantError as exc:
        print(f"oinv2: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
