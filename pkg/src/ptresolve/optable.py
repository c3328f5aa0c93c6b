"""Predicate transformers materialized as lookup tables.

An :class:`OperatorTable` holds ``2**n`` codomain masks, one per subset of an
``n``-element domain, indexed by the subset's mask value.  Expressions built
from relations, families, literal tables and composition are evaluated
eagerly into tables by :func:`materialize`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from . import kernels
from .errors import NotEndo, UniverseMismatch, UniverseTooLarge
from .relalg import MAX_TABLE_BITS, Relation, complement_rel, converse, transform_table
from .setcore import DEFAULT_CAP, SubsetFamily, SubsetMask, Universe, check_same

_U64 = np.uint64


def _table_max(entries: np.ndarray) -> int:
    # tiny tables are faster to scan as a list than through a ufunc
    return max(entries.tolist()) if entries.size <= 64 else int(entries.max())


@dataclass(frozen=True, eq=False)
class OperatorTable:
    domain: Universe
    codomain: Universe
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.domain.size > MAX_TABLE_BITS:
            raise UniverseTooLarge(self.domain.size, MAX_TABLE_BITS, f"table domain {self.domain.name!r}")
        if self.codomain.size > 64:
            raise UniverseTooLarge(self.codomain.size, 64, f"table codomain {self.codomain.name!r}")
        entries = np.ascontiguousarray(self.entries, dtype=_U64)
        if entries.shape != (1 << self.domain.size,):
            raise ValueError(f"table needs {1 << self.domain.size} entries, got {entries.shape}")
        # full is a low-bit mask, so an entry fits iff it is at most full
        if entries.size and _table_max(entries) > self.codomain.full:
            raise ValueError("table entry has bits outside the codomain")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def is_endo(self) -> bool:
        return self.domain == self.codomain

    def __call__(self, u: SubsetMask) -> SubsetMask:
        return apply(self, u)

    def __repr__(self) -> str:
        return f"OperatorTable({self.domain.name}->{self.codomain.name})"


# --- expressions -----------------------------------------------------------


@dataclass(frozen=True)
class Named:
    name: str
    relation: Relation = field(compare=False)


@dataclass(frozen=True)
class Converse:
    arg: RelExpr


@dataclass(frozen=True)
class Complement:
    arg: RelExpr


RelExpr = Union[Named, Converse, Complement]


@dataclass(frozen=True)
class FromRelation:
    kind: Literal["angel", "demon", "ortho"]
    rel: RelExpr


@dataclass(frozen=True)
class Compose:
    """``outer . inner``: apply ``inner`` first."""

    outer: OperatorExpr
    inner: OperatorExpr


@dataclass(frozen=True)
class Dual:
    arg: OperatorExpr


@dataclass(frozen=True)
class TableLiteral:
    table: OperatorTable


@dataclass(frozen=True)
class InteriorFromFamily:
    family: SubsetFamily


@dataclass(frozen=True)
class ClosureFromFamily:
    family: SubsetFamily


@dataclass(frozen=True)
class Identity:
    universe: Universe


OperatorExpr = Union[FromRelation, Compose, Dual, TableLiteral, InteriorFromFamily, ClosureFromFamily, Identity]


def eval_rel(e: RelExpr) -> Relation:
    if isinstance(e, Named):
        return e.relation
    if isinstance(e, Converse):
        return converse(eval_rel(e.arg))
    if isinstance(e, Complement):
        return complement_rel(eval_rel(e.arg))
    raise TypeError(f"not a relation expression: {e!r}")


def _check_cap(u: Universe, cap: int | None) -> None:
    if cap is not None and u.size > cap:
        raise UniverseTooLarge(u.size, cap, f"universe {u.name!r}")


def materialize(e: OperatorExpr, cap: int | None = DEFAULT_CAP) -> OperatorTable:
    if isinstance(e, FromRelation):
        r = eval_rel(e.rel)
        _check_cap(r.target, cap)
        return OperatorTable(r.target, r.source, transform_table(e.kind, r))
    if isinstance(e, Compose):
        inner = materialize(e.inner, cap)
        outer = materialize(e.outer, cap)
        return compose(outer, inner)
    if isinstance(e, Dual):
        return dual(materialize(e.arg, cap))
    if isinstance(e, TableLiteral):
        return e.table
    if isinstance(e, (InteriorFromFamily, ClosureFromFamily)):
        _check_cap(e.family.universe, cap)
        kind = "interior" if isinstance(e, InteriorFromFamily) else "closure"
        return operator_from_family(e.family, kind)
    if isinstance(e, Identity):
        _check_cap(e.universe, cap)
        return identity(e.universe)
    raise TypeError(f"not an operator expression: {e!r}")


# --- tables ----------------------------------------------------------------


def identity(u: Universe) -> OperatorTable:
    return OperatorTable(u, u, np.arange(1 << u.size, dtype=_U64))


def constant(domain: Universe, value: SubsetMask) -> OperatorTable:
    return OperatorTable(domain, value.universe, np.full(1 << domain.size, value.bits, dtype=_U64))


def threshold_operator(u: Universe, k: int) -> OperatorTable:
    """``U ↦ U`` when ``|U| >= k``, else ``∅``; an interior operator."""
    idx = np.arange(1 << u.size, dtype=_U64)
    counts = np.array([int(i).bit_count() for i in range(1 << u.size)])
    return OperatorTable(u, u, np.where(counts >= k, idx, _U64(0)))


def from_function(domain: Universe, codomain: Universe, fn) -> OperatorTable:
    """Tabulate ``fn(mask) -> mask`` (both as :class:`SubsetMask`)."""
    out = np.empty(1 << domain.size, dtype=_U64)
    for v in range(1 << domain.size):
        res = fn(SubsetMask(domain, v))
        check_same(res.universe, codomain, "function result")
        out[v] = res.bits
    return OperatorTable(domain, codomain, out)


def compose(outer: OperatorTable, inner: OperatorTable) -> OperatorTable:
    if inner.codomain != outer.domain:
        raise UniverseMismatch(
            f"cannot compose: inner yields {inner.codomain.name!r}, outer expects {outer.domain.name!r}"
        )
    return OperatorTable(inner.domain, outer.codomain, outer.entries[inner.entries.astype(np.intp)])


def apply(f: OperatorTable, u: SubsetMask) -> SubsetMask:
    if u.universe != f.domain:
        raise UniverseMismatch(f"argument lives in {u.universe.name!r}, operator domain is {f.domain.name!r}")
    return SubsetMask(f.codomain, int(f.entries[u.bits]))


def conjugate(f: OperatorTable) -> OperatorTable:
    """``¬·F·¬`` for any table (domain and codomain may differ)."""
    return OperatorTable(f.domain, f.codomain, _U64(f.codomain.full) ^ f.entries[::-1])


def dual(f: OperatorTable) -> OperatorTable:
    if not f.is_endo:
        raise NotEndo(f"dual needs an endo-operator, got {f!r}")
    return conjugate(f)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a pointwise check; truthy iff it holds."""

    holds: bool
    witness: SubsetMask | None = None

    def __bool__(self) -> bool:
        return self.holds


def equal(f: OperatorTable, g: OperatorTable) -> Verdict:
    check_same(f.domain, g.domain, "operator domains")
    check_same(f.codomain, g.codomain, "operator codomains")
    diff = f.entries != g.entries
    if not diff.any():
        return Verdict(True)
    return Verdict(False, SubsetMask(f.domain, int(np.argmax(diff))))


def kleisli_le(f: OperatorTable, u: SubsetMask, v: SubsetMask) -> bool:
    """The Kleisli preorder ``U ⊑ V iff F(U) ⊆ F(V)``."""
    return apply(f, u) <= apply(f, v)


# --- classification --------------------------------------------------------


@dataclass(frozen=True)
class Check:
    holds: bool
    witness: tuple[SubsetMask, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ClassReport:
    monotone: Check
    contractive: Check
    expansive: Check
    deflation_ok: Check
    inflation_ok: Check

    @property
    def is_interior(self) -> bool:
        return self.monotone.holds and self.contractive.holds and self.deflation_ok.holds

    @property
    def is_closure(self) -> bool:
        return self.monotone.holds and self.expansive.holds and self.inflation_ok.holds

    def failures(self) -> list[tuple[str, Check]]:
        return [(name, c) for name, c in self.checks() if not c.holds]

    def checks(self) -> list[tuple[str, Check]]:
        return [
            ("monotone", self.monotone),
            ("contractive", self.contractive),
            ("expansive", self.expansive),
            ("deflation_ok", self.deflation_ok),
            ("inflation_ok", self.inflation_ok),
        ]


def _first(u: Universe, bad: np.ndarray) -> Check:
    if not bad.any():
        return Check(True)
    return Check(False, (SubsetMask(u, int(np.argmax(bad))),))


def monotone_check(f: OperatorTable) -> Check:
    """Single-element-addition test: ``F(U) ⊆ F(U ∪ {x})`` for all ``U``, ``x ∉ U``.

    Works for tables between different universes too.  The witness is the
    pair ``(U, U ∪ {x})``.
    """
    u, x = kernels.monotone_violation(f.entries, f.domain.size)
    if u < 0:
        return Check(True)
    return Check(False, (SubsetMask(f.domain, u), SubsetMask(f.domain, u | 1 << x)))


def classify(f: OperatorTable) -> ClassReport:
    if not f.is_endo:
        raise NotEndo(f"classify needs an endo-operator, got {f!r}")
    t = f.entries
    idx = np.arange(t.size, dtype=_U64)
    tt = t[t.astype(np.intp)]
    zero = _U64(0)
    return ClassReport(
        monotone=monotone_check(f),
        contractive=_first(f.domain, (t & ~idx) != zero),
        expansive=_first(f.domain, (idx & ~t) != zero),
        deflation_ok=_first(f.domain, (t & ~tt) != zero),
        inflation_ok=_first(f.domain, (tt & ~t) != zero),
    )


# --- generators ------------------------------------------------------------


def operator_from_family(b: SubsetFamily, kind: Literal["interior", "closure"]) -> OperatorTable:
    """Interior ``U ↦ ⋃{b ∈ B | b ⊆ U}`` or closure ``U ↦ ⋂{b ∈ B | U ⊆ b}``."""
    u = b.universe
    members = np.array(b.bits, dtype=_U64)
    inputs = np.arange(1 << u.size, dtype=_U64)
    if kind == "interior":
        entries = kernels.fused_composite(kernels.DEMON, members, kernels.ANGEL, members, inputs, u.full)
    elif kind == "closure":
        entries = kernels.fused_composite(kernels.ORTHO, members, kernels.ORTHO, members, inputs, u.full)
    else:
        raise ValueError(f"kind must be interior or closure, got {kind!r}")
    return OperatorTable(u, u, entries)


def random_operator(
    u: Universe,
    kind: Literal["interior", "closure", "monotone"],
    seed: int,
    family_size: int,
    codomain: Universe | None = None,
    density: float | None = None,
) -> OperatorTable:
    """Deterministic pseudo-random operator.

    Interiors and closures come from :func:`operator_from_family` on
    ``family_size`` random subsets.  Monotone transformers are
    ``U ↦ ⋃{out_i | in_i ⊆ U}`` over ``family_size`` random pairs; ``codomain``
    (default ``u``) is only used for this kind.  Each element joins a random
    subset with probability ``density`` (uniform subsets when ``None``).
    """
    if family_size < 0:
        raise ValueError("family_size must be non-negative")
    tag = "" if density is None else f":{density!r}"
    rng = random.Random(f"{kind}:{seed}:{u.size}:{family_size}{tag}")

    def draw(n: int) -> int:
        if density is None:
            return rng.getrandbits(n) if n else 0
        return sum(1 << i for i in range(n) if rng.random() < density)

    if kind in ("interior", "closure"):
        fam = SubsetFamily(u, tuple(draw(u.size) for _ in range(family_size)))
        return operator_from_family(fam, kind)
    if kind == "monotone":
        cod = codomain or u
        ins, outs = [], []
        for _ in range(family_size):
            ins.append(draw(u.size))
            outs.append(draw(cod.size))
        entries = kernels.fused_composite(
            kernels.DEMON, np.array(ins, dtype=_U64), kernels.ANGEL, np.array(outs, dtype=_U64),
            np.arange(1 << u.size, dtype=_U64), cod.full,
        )
        return OperatorTable(u, cod, entries)
    raise ValueError(f"kind must be interior, closure or monotone, got {kind!r}")


def composite_laws(r: Relation, cap: int | None = DEFAULT_CAP) -> dict[str, Check]:
    """Interior/closure composites of ``r`` and the triple identities.

    ``⟨r⟩·[r˘]`` must be an interior, ``[r]·⟨r˘⟩`` and ``⊥r·⊥r˘`` closures on
    ``P(X)``, and ``T(r)·T'(r˘)·T(r) = T(r)`` for each of those pairs.
    """
    name = Named("r", r)
    conv = Converse(name)
    out: dict[str, Check] = {}
    pairs = (("angel", "demon", "interior"), ("demon", "angel", "closure"), ("ortho", "ortho", "closure"))
    for outer, inner, kind in pairs:
        tag = f"{outer}(r).{inner}(conv r)"
        g = materialize(Compose(FromRelation(outer, name), FromRelation(inner, conv)), cap)
        report = classify(g)
        ok = report.is_interior if kind == "interior" else report.is_closure
        witnesses = tuple(w for _, c in report.failures() for w in c.witness) if not ok else ()
        out[f"{tag} is {kind}"] = Check(ok, witnesses)
        single = materialize(FromRelation(outer, name), cap)
        verdict = equal(compose(g, single), single)
        out[f"{tag}.{outer}(r) = {outer}(r)"] = Check(verdict.holds, (verdict.witness,) if verdict.witness else ())
    return out
