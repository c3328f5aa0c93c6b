"""Command-line front end.

Exit codes: 0 success, 1 a property violation was found, 2 usage, input or
parse error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence, TextIO

from . import optable as ot
from .dsl import emit
from .dsl.evaluate import Environment, evaluate
from .dsl.syntax import DslError, parse
from .errors import PropertyViolation, PTError, VerificationFailed
from .relalg import check_galois, check_negation_laws
from .resolve import (
    Factorization,
    Resolution,
    factorize_monotone,
    fixpoints,
    minimal_basis,
    resolve_closure,
    resolve_interior,
)
from .setcore import DEFAULT_CAP, SubsetMask, Universe, bit_positions, format_subset, mask_of, mk_universe

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Out:
    def __init__(self, args: argparse.Namespace, stdout: TextIO) -> None:
        self.json = args.json
        self.quiet = args.quiet
        self.stdout = stdout

    def prose(self, text: str) -> None:
        if not self.json and not self.quiet:
            self.stdout.write(text if text.endswith("\n") else text + "\n")

    def record(self, kind: str, input: dict, result: dict, witnesses: list) -> None:
        if self.json:
            self.stdout.write(emit.render(kind, input, result, witnesses))


def _load(args: argparse.Namespace, stdin: TextIO) -> Environment:
    if args.file == "-":
        text = stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    return evaluate(parse(text), cap=args.max_universe)


def _operator(env: Environment, name: str) -> ot.OperatorTable:
    if name not in env.operators:
        known = ", ".join(env.operators) or "none"
        raise UsageError(f"no operator named {name!r} (declared: {known})")
    return env.operators[name]


def _s(m: SubsetMask) -> str:
    return str(m)


# --- DSL re-emission -------------------------------------------------------


def _ident_universe(name: str, u: Universe, prefix: str) -> tuple[str, list[str]]:
    """Declaration of ``u`` with identifier labels ``prefix0..``, plus a legend."""
    labels = [f"{prefix}{i}" for i in range(u.size)]
    legend = [f"# {lab} = {orig}" for lab, orig in zip(labels, u.labels)]
    decl = f"universe {name} = {{{', '.join(labels)}}}" if labels else ""
    return decl, legend


def _rel_decl(name: str, src: str, dst: str, rows, src_labels, dst_labels) -> str:
    pairs = [f"({src_labels[x]}, {dst_labels[y]})" for x, row in enumerate(rows) for y in bit_positions(row)]
    return f"relation {name} : {src} -> {dst} = {{{', '.join(pairs)}}}"


def resolution_program(op_name: str, res: Resolution) -> str:
    x = res.original.domain
    ydecl, legend = _ident_universe("Y", res.interpolant, "y")
    if not ydecl:
        raise UsageError("an empty interpolant cannot be written as a program")
    ylabels = [f"y{i}" for i in range(res.interpolant.size)]
    composite = {
        "interior-angelic": "angel(m) . demon(conv(m))",
        "closure-demonic": "demon(m) . angel(conv(m))",
        "closure-biorthogonal": "ortho(m) . ortho(conv(m))",
    }[res.form]
    lines = [f"# {res.form} resolution of {op_name}", *legend,
             f"universe {x.name} = {{{', '.join(x.labels)}}}", ydecl,
             _rel_decl("m", x.name, "Y", res.membership.rows, x.labels, ylabels),
             f"operator {op_name} on {x.name} = {composite}"]
    return "\n".join(lines) + "\n"


def factorization_program(op_name: str, fac: Factorization) -> str:
    x, y = fac.original.domain, fac.original.codomain
    pdecl, legend = _ident_universe("Xp", fac.interpolant, "u")
    plabels = [f"u{i}" for i in range(fac.interpolant.size)]
    composite = {
        "angel-demon": "angel(r) . demon(s)",
        "demon-angel": "demon(r) . angel(s)",
        "ortho-ortho": "ortho(r) . ortho(s)",
    }[fac.variant]
    decls = [f"universe {x.name} = {{{', '.join(x.labels)}}}"]
    if y != x:
        decls.append(f"universe {y.name} = {{{', '.join(y.labels)}}}")
    on = x.name if y == x else f"{x.name} -> {y.name}"
    lines = [f"# {fac.variant} factorization of {op_name}", *legend, *decls, pdecl,
             _rel_decl("s", "Xp", x.name, fac.s.rows, plabels, x.labels),
             _rel_decl("r", y.name, "Xp", fac.r.rows, y.labels, plabels),
             f"operator {op_name} on {on} = {composite}"]
    return "\n".join(lines) + "\n"


def table_program(name: str, f: ot.OperatorTable) -> str:
    u = f.domain
    entries = ",\n  ".join(
        f"{format_subset(u, v).replace(',', ', ')} -> {format_subset(f.codomain, int(w)).replace(',', ', ')}"
        for v, w in enumerate(f.entries)
    )
    return f"universe {u.name} = {{{', '.join(u.labels)}}}\noperator {name} on {u.name} = table {{\n  {entries}\n}}\n"


# --- subcommands -----------------------------------------------------------


def cmd_check(args, env: Environment, out: _Out) -> int:
    out.prose(f"ok: {len(env.universes)} universes, {len(env.relations)} relations, "
              f"{len(env.operators)} operators")
    out.record("check", {"file": args.file}, {
        "universes": sorted(env.universes), "relations": sorted(env.relations), "operators": sorted(env.operators),
    }, [])
    return EXIT_OK


def cmd_classify(args, env: Environment, out: _Out) -> int:
    f = _operator(env, args.operator)
    report = ot.classify(f)
    lines = [f"operator {args.operator} on {f.domain.name}"]
    for name, c in report.checks():
        wit = "" if c.holds else "  witness " + " -> ".join(_s(w) for w in c.witness)
        lines.append(f"  {name:<13} {'yes' if c.holds else 'no'}{wit}")
    lines.append(f"  interior: {'yes' if report.is_interior else 'no'}")
    lines.append(f"  closure: {'yes' if report.is_closure else 'no'}")
    out.prose("\n".join(lines))
    kind, body, wit = emit.to_record(report)
    out.record(kind, {"file": args.file, "operator": args.operator}, body, wit)
    return EXIT_OK if report.is_interior or report.is_closure else EXIT_VIOLATION


def cmd_fix(args, env: Environment, out: _Out) -> int:
    lattice = fixpoints(_operator(env, args.operator))
    u = lattice.universe
    kind = "join" if lattice.operator_kind == "interior" else "meet"
    irr = set(lattice.irreducibles(kind).bits)
    lines = [f"{lattice.operator_kind} {args.operator}: {len(lattice.fixpoints)} fixpoints "
             f"({len(irr)} {kind}-irreducible, marked *)"]
    lines += [f"  {format_subset(u, b)}{' *' if b in irr else ''}" for b in lattice.fixpoints.bits]
    out.prose("\n".join(lines))
    kind_, body, wit = emit.to_record(lattice)
    out.record(kind_, {"file": args.file, "operator": args.operator}, body, wit)
    if args.dot:
        dot = emit.emit_hasse(lattice, args.operator)
        if args.dot == "-":
            out.stdout.write(dot)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(dot)
    return EXIT_OK


def cmd_basis(args, env: Environment, out: _Out) -> int:
    lattice = fixpoints(_operator(env, args.operator))
    kind = args.kind or ("join" if lattice.operator_kind == "interior" else "meet")
    basis = minimal_basis(lattice, kind)
    out.prose(f"minimal {kind} basis of {args.operator} ({len(basis)} members): {basis}")
    _, body, wit = emit.to_record(basis)
    body["kind"] = kind
    out.record("basis", {"file": args.file, "operator": args.operator}, body, wit)
    return EXIT_OK


def cmd_resolve(args, env: Environment, out: _Out) -> int:
    f = _operator(env, args.operator)
    if args.form == "interior":
        res = resolve_interior(f, args.basis)
    else:
        res = resolve_closure(f, "demonic" if args.form == "closure-demonic" else "biorthogonal", args.basis)
    if args.emit_dsl:
        out.stdout.write(resolution_program(args.operator, res))
        return EXIT_OK
    pairs = ", ".join(f"({x},{y})" for x, y in res.membership.pairs())
    out.prose(f"{res.form} resolution of {args.operator} ({args.basis} basis), verified\n"
              f"  interpolant ({res.size}): {', '.join(res.interpolant.labels)}\n"
              f"  membership: {{{pairs}}}")
    kind, body, wit = emit.to_record(res)
    out.record(kind, {"file": args.file, "operator": args.operator}, body, wit)
    return EXIT_OK


def cmd_factorize(args, env: Environment, out: _Out) -> int:
    f = _operator(env, args.operator)
    fac = factorize_monotone(f, args.variant, cap=args.max_universe)
    if args.emit_dsl:
        out.stdout.write(factorization_program(args.operator, fac))
        return EXIT_OK
    out.prose(f"{fac.variant} factorization of {args.operator}, verified\n"
              f"  interpolant size {fac.interpolant.size}; |s| = {len(fac.s)}, |r| = {len(fac.r)}")
    kind, body, wit = emit.to_record(fac)
    out.record(kind, {"file": args.file, "operator": args.operator}, body, wit)
    return EXIT_OK


def _parse_subset(u: Universe, text: str) -> SubsetMask:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    names = [s.strip() for s in body.split(",") if s.strip()]
    return mask_of(u, names)


def cmd_eval(args, env: Environment, out: _Out) -> int:
    f = _operator(env, args.operator)
    arg = _parse_subset(f.domain, args.subset)
    val = ot.apply(f, arg)
    out.prose(f"{args.operator}({arg}) = {val}")
    out.record("eval", {"file": args.file, "operator": args.operator},
               {"argument": emit.subset_json(arg), "value": emit.subset_json(val)}, [])
    return EXIT_OK


def cmd_laws(args, env: Environment, out: _Out) -> int:
    results: dict[str, dict[str, bool]] = {}
    witnesses: list[dict[str, Any]] = []
    lines = []
    for name, r in env.relations.items():
        row: dict[str, bool] = {}
        for label, report in (("negation", check_negation_laws(r)), ("galois", check_galois(r))):
            row[label] = report.holds
            if not report.holds:
                w = emit._counterexample(report.counterexample)
                witnesses.append({"relation": name, **w})
        for label, c in ot.composite_laws(r, cap=args.max_universe).items():
            row[label] = c.holds
            if not c.holds:
                witnesses.append({"relation": name, "law": label, "inputs": [emit.subset_json(w) for w in c.witness]})
        results[name] = row
        bad = [k for k, v in row.items() if not v]
        lines.append(f"{name}: {len(row) - len(bad)}/{len(row)} laws hold" + (f"; failed: {', '.join(bad)}" if bad else ""))
    holds = all(all(row.values()) for row in results.values())
    out.prose("\n".join(lines) if lines else "no relations declared")
    out.record("laws", {"file": args.file}, {"holds": holds, "relations": results}, witnesses)
    return EXIT_OK if holds else EXIT_VIOLATION


def cmd_random(args, out: _Out) -> int:
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    labels = [chr(ord("a") + i) for i in range(args.n)] if args.n <= 26 else [f"e{i}" for i in range(args.n)]
    u = mk_universe("X", labels, cap=args.max_universe)
    family = args.family if args.family is not None else args.n
    f = ot.random_operator(u, args.kind, args.seed, family, density=args.density)
    name = {"interior": "I", "closure": "C", "monotone": "M"}[args.kind]
    program = f"# random {args.kind} operator, seed {args.seed}, family {family}\n" + table_program(name, f)
    if args.json:
        out.record("random", {"kind": args.kind, "n": args.n, "seed": args.seed, "family": family},
                   {"program": program}, [])
    elif not args.quiet:
        out.stdout.write(program)
    return EXIT_OK


# --- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable records")
    common.add_argument("--max-universe", type=int, default=DEFAULT_CAP, metavar="N",
                        help=f"largest universe to enumerate (default {DEFAULT_CAP})")
    common.add_argument("--quiet", action="store_true", help="no prose output")

    def with_op(p: argparse.ArgumentParser) -> None:
        p.add_argument("-o", "--operator", required=True, metavar="NAME")
        p.add_argument("file", help="program file, or - for stdin")

    parser = argparse.ArgumentParser(prog="ptresolve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse and evaluate a program")
    p.add_argument("file")
    p = sub.add_parser("classify", parents=[common], help="interior/closure axioms with witnesses")
    with_op(p)
    p = sub.add_parser("fix", parents=[common], help="fixpoint lattice")
    with_op(p)
    p.add_argument("--dot", metavar="PATH", help="write the Hasse diagram (dot); - for stdout")
    p = sub.add_parser("basis", parents=[common], help="minimal basis of the fixpoint lattice")
    with_op(p)
    p.add_argument("--kind", choices=["join", "meet"])
    p = sub.add_parser("resolve", parents=[common], help="resolution through an interpolant")
    with_op(p)
    p.add_argument("--form", required=True, choices=["interior", "closure-demonic", "closure-ortho"])
    p.add_argument("--basis", default="minimal", choices=["minimal", "fixpoints"])
    p.add_argument("--emit-dsl", action="store_true", help="print the resolution as a program")
    p = sub.add_parser("factorize", parents=[common], help="monotone factorization through P(X)")
    with_op(p)
    p.add_argument("--variant", default="angel-demon", choices=["angel-demon", "demon-angel", "ortho-ortho"])
    p.add_argument("--emit-dsl", action="store_true", help="print the factorization as a program")
    p = sub.add_parser("eval", parents=[common], help="apply an operator to a subset")
    with_op(p)
    p.add_argument("-s", "--subset", required=True, help="e.g. '{a,c}'")
    p = sub.add_parser("laws", parents=[common], help="law suites for every declared relation")
    p.add_argument("file")
    p = sub.add_parser("random", parents=[common], help="print a random operator as a program")
    p.add_argument("--kind", required=True, choices=["interior", "closure", "monotone"])
    p.add_argument("-n", type=int, required=True, metavar="SIZE")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--family", type=int, metavar="K", help="generator count (default SIZE)")
    p.add_argument("--density", type=float, help="element probability in generators (default: uniform)")
    return parser


_COMMANDS = {
    "check": cmd_check, "classify": cmd_classify, "fix": cmd_fix, "basis": cmd_basis,
    "resolve": cmd_resolve, "factorize": cmd_factorize, "eval": cmd_eval, "laws": cmd_laws,
}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None,
        stdin: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = _Out(args, stdout)
    try:
        if args.command == "random":
            return cmd_random(args, out)
        env = _load(args, stdin)
        return _COMMANDS[args.command](args, env, out)
    except PropertyViolation as exc:
        stderr.write(f"error: {exc}\n")
        for axiom, inputs in exc.witnesses:
            stderr.write(f"  {axiom} witness: {' -> '.join(str(w) for w in inputs)}\n")
        return EXIT_VIOLATION
    except VerificationFailed as exc:
        stderr.write(f"error: verification failed: {exc}\n")
        return EXIT_VIOLATION
    except DslError as exc:
        stderr.write(f"{getattr(args, 'file', '<input>')}:{exc}\n")
        return EXIT_USAGE
    except (PTError, UsageError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
