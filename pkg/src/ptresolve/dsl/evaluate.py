"""Turn a checked :class:`Program` into universes, relations and tables."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import optable as ot
from ..relalg import Relation
from ..setcore import DEFAULT_CAP, SubsetFamily, Universe, mask_of, mk_universe
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
    UniverseDecl,
)


@dataclass
class Environment:
    universes: dict[str, Universe] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)
    operators: dict[str, ot.OperatorTable] = field(default_factory=dict)
    exprs: dict[str, ot.OperatorExpr] = field(default_factory=dict)


class _Builder:
    def __init__(self, env: Environment) -> None:
        self.env = env

    def rel(self, r: RelNode) -> ot.RelExpr:
        if isinstance(r, RName):
            return ot.Named(r.name, self.env.relations[r.name])
        arg = self.rel(r.arg)
        return ot.Converse(arg) if isinstance(r, RConv) else ot.Complement(arg)

    def op(self, e: OpNode, dom: Universe, want: Universe | None) -> tuple[ot.OperatorExpr, Universe]:
        """Library expression for ``e`` on subsets of ``dom``, with its codomain."""
        if isinstance(e, ORel):
            rel = self.rel(e.rel)
            return ot.FromRelation(e.kind, rel), ot.eval_rel(rel).source
        if isinstance(e, OCompose):
            inner, mid = self.op(e.inner, dom, None)
            outer, cod = self.op(e.outer, mid, want)
            return ot.Compose(outer, inner), cod
        if isinstance(e, ODual):
            arg, _ = self.op(e.arg, dom, dom)
            return ot.Dual(arg), dom
        if isinstance(e, OId):
            return ot.Identity(dom), dom
        if isinstance(e, OFamily):
            fam = SubsetFamily.of(dom, [mask_of(dom, m) for m in e.members])
            node = ot.InteriorFromFamily(fam) if e.kind == "interior" else ot.ClosureFromFamily(fam)
            return node, dom
        if isinstance(e, OTable):
            cod = want or dom
            entries = np.zeros(1 << dom.size, dtype=np.uint64)
            for a, b in e.entries:
                entries[mask_of(dom, a).bits] = mask_of(cod, b).bits
            return ot.TableLiteral(ot.OperatorTable(dom, cod, entries)), cod
        raise TypeError(f"not an operator node: {e!r}")


def evaluate(p: Program, cap: int | None = DEFAULT_CAP) -> Environment:
    """Materialize every declaration in order.  ``p`` must come from ``parse``."""
    env = Environment()
    build = _Builder(env)
    for d in p.decls:
        if isinstance(d, UniverseDecl):
            env.universes[d.name] = mk_universe(d.name, d.labels, cap=cap)
        elif isinstance(d, RelationDecl):
            src, dst = env.universes[d.source], env.universes[d.target]
            env.relations[d.name] = Relation.from_pairs(src, dst, d.pairs)
        elif isinstance(d, OperatorDecl):
            dom = env.universes[d.domain]
            expr, _ = build.op(d.expr, dom, env.universes[d.codomain])
            env.exprs[d.name] = expr
            env.operators[d.name] = ot.materialize(expr, cap=cap)
    return env
