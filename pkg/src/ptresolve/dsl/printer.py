"""Canonical pretty-printer; ``parse(format_program(p)) == p`` for parsed ``p``."""
from __future__ import annotations

from .syntax import (
    OCompose,
    ODual,
    OFamily,
    OId,
    OpNode,
    ORel,
    OTable,
    OperatorDecl,
    Program,
    RConv,
    RelationDecl,
    RelNode,
    RName,
    Subset,
    UniverseDecl,
)


def format_subset(labels: Subset) -> str:
    return "{" + ", ".join(labels) + "}"


def format_rel(r: RelNode) -> str:
    if isinstance(r, RName):
        return r.name
    word = "conv" if isinstance(r, RConv) else "not"
    return f"{word}({format_rel(r.arg)})"


def format_op(e: OpNode) -> str:
    if isinstance(e, ORel):
        return f"{e.kind}({format_rel(e.rel)})"
    if isinstance(e, OCompose):
        inner = format_op(e.inner)
        if isinstance(e.inner, OCompose):
            inner = f"({inner})"
        return f"{format_op(e.outer)} . {inner}"
    if isinstance(e, ODual):
        return f"dual({format_op(e.arg)})"
    if isinstance(e, OId):
        return "id"
    if isinstance(e, OFamily):
        word = "interior_from" if e.kind == "interior" else "closure_from"
        return f"{word} {{{', '.join(format_subset(m) for m in e.members)}}}"
    if isinstance(e, OTable):
        body = ",\n  ".join(f"{format_subset(a)} -> {format_subset(b)}" for a, b in e.entries)
        return f"table {{\n  {body}\n}}" if e.entries else "table {}"
    raise TypeError(f"not an operator node: {e!r}")


def format_decl(d) -> str:
    if isinstance(d, UniverseDecl):
        return f"universe {d.name} = {format_subset(d.labels)}"
    if isinstance(d, RelationDecl):
        pairs = ", ".join(f"({a}, {b})" for a, b in d.pairs)
        return f"relation {d.name} : {d.source} -> {d.target} = {{{pairs}}}"
    if isinstance(d, OperatorDecl):
        on = d.domain if d.codomain == d.domain else f"{d.domain} -> {d.codomain}"
        return f"operator {d.name} on {on} = {format_op(d.expr)}"
    raise TypeError(f"not a declaration: {d!r}")


def format_program(p: Program) -> str:
    return "".join(format_decl(d) + "\n" for d in p.decls)
