"""Machine-readable records and Hasse diagrams.

Records are JSON objects ``{"kind", "input", "result", "witnesses"}`` with
sorted keys.  Subsets render as sorted label arrays and relations as sorted
arrays of ``[x, y]`` label pairs, so the output is byte-stable.
"""
from __future__ import annotations

import json
from typing import Any, Mapping

from ..optable import Check, ClassReport
from ..relalg import Counterexample, GaloisReport, Relation
from ..resolve import Factorization, FixLattice, Resolution
from ..setcore import SubsetFamily, SubsetMask, Universe, format_subset, labels_of

RECORD_KINDS = ("classify", "resolve", "factorize", "basis", "fix", "check", "eval", "laws", "random")


def subset_json(m: SubsetMask) -> list[str]:
    return sorted(m.labels())


def family_json(f: SubsetFamily) -> list[list[str]]:
    return [sorted(labels_of(f.universe, b)) for b in f.bits]


def relation_json(r: Relation) -> list[list[str]]:
    return sorted([x, y] for x, y in r.pairs())


def universe_json(u: Universe) -> dict[str, Any]:
    return {"name": u.name, "labels": list(u.labels)}


def _check_witness(name: str, c: Check) -> dict[str, Any]:
    return {"axiom": name, "inputs": [subset_json(w) for w in c.witness]}


def _counterexample(cx: Counterexample) -> dict[str, Any]:
    def side(v: Any) -> Any:
        return subset_json(v) if isinstance(v, SubsetMask) else v

    return {"law": cx.law, "inputs": [subset_json(m) for m in cx.inputs], "lhs": side(cx.lhs), "rhs": side(cx.rhs)}


def to_record(result: Any) -> tuple[str, dict[str, Any], list[Any]]:
    """``(kind, result, witnesses)`` for a library result object."""
    if isinstance(result, ClassReport):
        body = {name: c.holds for name, c in result.checks()}
        body.update(is_interior=result.is_interior, is_closure=result.is_closure)
        return "classify", body, [_check_witness(n, c) for n, c in result.failures()]
    if isinstance(result, FixLattice):
        return "fix", {
            "operator_kind": result.operator_kind,
            "fixpoints": family_json(result.fixpoints),
            "join_irreducible": family_json(result.irreducibles("join")),
            "meet_irreducible": family_json(result.irreducibles("meet")),
            "union_closed": result.union_closed,
            "intersection_closed": result.intersection_closed,
        }, []
    if isinstance(result, SubsetFamily):
        return "basis", {"members": family_json(result), "size": len(result)}, []
    if isinstance(result, Resolution):
        return "resolve", {
            "form": result.form,
            "basis_choice": result.basis_choice,
            "universe": universe_json(result.original.domain),
            "interpolant": list(result.interpolant.labels),
            "membership": relation_json(result.membership),
            "size": result.size,
            "verified": True,
        }, []
    if isinstance(result, Factorization):
        return "factorize", {
            "variant": result.variant,
            "interpolant": list(result.interpolant.labels),
            "s": relation_json(result.s),
            "r": relation_json(result.r),
            "size": result.interpolant.size,
            "verified": True,
        }, []
    if isinstance(result, GaloisReport):
        wit = [] if result.holds else [_counterexample(result.counterexample)]
        return "laws", {"holds": result.holds}, wit
    raise TypeError(f"no record format for {type(result).__name__}")


def render(kind: str, input: Mapping[str, Any], result: Mapping[str, Any], witnesses: list[Any]) -> str:
    if kind not in RECORD_KINDS:
        raise ValueError(f"unknown record kind {kind!r}")
    record = {"kind": kind, "input": dict(input), "result": dict(result), "witnesses": list(witnesses)}
    return json.dumps(record, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_records(result: Any, input: Mapping[str, Any] | None = None) -> str:
    kind, body, witnesses = to_record(result)
    return render(kind, input or {}, body, witnesses)


def covering_pairs(members: tuple[int, ...]) -> list[tuple[int, int]]:
    """``(U, V)`` with ``V`` covering ``U`` under inclusion among ``members``."""
    ordered = sorted(members, key=lambda b: (b.bit_count(), b))
    out = []
    for i, lo in enumerate(ordered):
        uppers = [hi for hi in ordered[i + 1:] if hi != lo and lo & ~hi == 0]
        for hi in uppers:
            if not any(mid != hi and mid & ~hi == 0 for mid in uppers):
                out.append((lo, hi))
    return sorted(out)


def emit_hasse(lattice: FixLattice, name: str = "Fix") -> str:
    """The inclusion order on the fixpoints as a dot digraph, bottom to top.

    Irreducibles (join for interiors, meet for closures) are drawn as boxes.
    """
    u = lattice.universe
    kind = "join" if lattice.operator_kind == "interior" else "meet"
    irreducible = set(lattice.irreducibles(kind).bits)
    lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
    for b in lattice.fixpoints.bits:
        shape = "box" if b in irreducible else "ellipse"
        lines.append(f'  n{b} [label="{format_subset(u, b)}", shape={shape}];')
    for lo, hi in covering_pairs(lattice.fixpoints.bits):
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"
