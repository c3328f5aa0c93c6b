"""Fixed-point lattices, bases, resolutions and monotone factorizations.

A resolution of an interior operator ``F`` on ``P(X)`` is an interpolant set
``Y`` with a relation ``m ⊆ X × Y`` such that ``F = ⟨m⟩ · [m˘]``.  Here ``Y``
is always a family of fixed points of ``F`` (all of them, or the
join-irreducible ones) and ``m`` is membership: ``(x, U) ∈ m`` iff ``x ∈ U``.
Closure operators are resolved as ``[m] · ⟨m˘⟩`` (through the complement
dual, an interior) or as ``⊥m · ⊥m˘`` (directly, by the meet formula).

Every constructor verifies its result pointwise before returning it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .errors import (
    KindMismatch,
    NotAFixpointMember,
    NotClosure,
    NotInterior,
    NotInteriorOrClosure,
    NotMonotone,
    UniverseMismatch,
    UniverseTooLarge,
    VerificationFailed,
    WrongForm,
)
from .optable import OperatorTable, Verdict, classify, conjugate, dual, monotone_check
from .relalg import Relation
from .setcore import DEFAULT_CAP, SubsetFamily, SubsetMask, Universe, bit_positions, format_subset

_U64 = np.uint64

Form = Literal["interior-angelic", "closure-demonic", "closure-biorthogonal"]
BasisChoice = Literal["fixpoints", "minimal"]
Variant = Literal["angel-demon", "demon-angel", "ortho-ortho"]

# (inner transformer on m˘, outer transformer on m) for each form
_FORM_KERNELS = {
    "interior-angelic": (kernels.DEMON, kernels.ANGEL),
    "closure-demonic": (kernels.ANGEL, kernels.DEMON),
    "closure-biorthogonal": (kernels.ORTHO, kernels.ORTHO),
}
# (inner transformer on s, outer transformer on r) for each variant
_VARIANT_KERNELS = {
    "angel-demon": (kernels.DEMON, kernels.ANGEL),
    "demon-angel": (kernels.ANGEL, kernels.DEMON),
    "ortho-ortho": (kernels.ORTHO, kernels.ORTHO),
}


def _all_inputs(u: Universe) -> np.ndarray:
    return np.arange(1 << u.size, dtype=_U64)


@dataclass(frozen=True, eq=False)
class FixLattice:
    operator_kind: Literal["interior", "closure"]
    fixpoints: SubsetFamily
    join_irreducible: tuple[bool, ...]
    meet_irreducible: tuple[bool, ...]
    union_closed: bool
    intersection_closed: bool

    @property
    def universe(self) -> Universe:
        return self.fixpoints.universe

    def irreducibles(self, kind: Literal["join", "meet"]) -> SubsetFamily:
        flags = self.join_irreducible if kind == "join" else self.meet_irreducible
        return SubsetFamily(self.universe, tuple(b for b, f in zip(self.fixpoints.bits, flags) if f))


def _closed(members: np.ndarray, size: int, op) -> bool:
    is_member = np.zeros(1 << size, dtype=bool)
    is_member[members.astype(np.intp)] = True
    for m in members:
        if not is_member[op(members, m).astype(np.intp)].all():
            return False
    return True


def fixpoints(f: OperatorTable) -> FixLattice:
    report = classify(f)
    if report.is_interior:
        kind = "interior"
    elif report.is_closure:
        kind = "closure"
    else:
        witnesses = tuple((n, c.witness) for n, c in report.failures())
        raise NotInteriorOrClosure("operator is neither an interior nor a closure", witnesses)
    u = f.domain
    idx = _all_inputs(u)
    members = idx[f.entries == idx]
    joins = kernels.strict_joins(members)
    meets = kernels.strict_meets(members, u.full)
    union_closed = _closed(members, u.size, np.bitwise_or)
    intersection_closed = _closed(members, u.size, np.bitwise_and)
    if kind == "interior" and not (union_closed and 0 in members):
        raise VerificationFailed("fixpoints of an interior are not union-closed")
    if kind == "closure" and not (intersection_closed and u.full in members):
        raise VerificationFailed("fixpoints of a closure are not intersection-closed")
    return FixLattice(
        operator_kind=kind,
        fixpoints=SubsetFamily(u, tuple(int(m) for m in members)),
        join_irreducible=tuple(bool(x) for x in joins != members),
        meet_irreducible=tuple(bool(x) for x in meets != members),
        union_closed=union_closed,
        intersection_closed=intersection_closed,
    )


def _basis_kind_ok(lattice: FixLattice, kind: str) -> None:
    # join bases need unions (with ∅) to be the lattice join, meet bases need
    # intersections (with the full set); an operator that is both an interior
    # and a closure supports either
    fix = lattice.fixpoints
    if kind == "join":
        ok = lattice.union_closed and 0 in fix
    elif kind == "meet":
        ok = lattice.intersection_closed and lattice.universe.full in fix
    else:
        raise ValueError(f"kind must be join or meet, got {kind!r}")
    if not ok:
        raise KindMismatch(f"fixpoints of this {lattice.operator_kind} do not support {kind} bases")


def minimal_basis(lattice: FixLattice, kind: Literal["join", "meet"]) -> SubsetFamily:
    _basis_kind_ok(lattice, kind)
    return lattice.irreducibles(kind)


def is_basis(b: SubsetFamily, lattice: FixLattice, kind: Literal["join", "meet"]) -> Verdict:
    """Does every fixpoint equal the join (meet) of the members of ``b`` below (above) it?"""
    if b.universe != lattice.universe:
        raise UniverseMismatch("basis and lattice live in different universes")
    for m in b.bits:
        if m not in lattice.fixpoints:
            raise NotAFixpointMember(f"{format_subset(b.universe, m)} is not a fixpoint")
    members = np.array(b.bits, dtype=_U64)
    targets = np.array(lattice.fixpoints.bits, dtype=_U64)
    if kind == "join":
        got = kernels.fused_composite(kernels.DEMON, members, kernels.ANGEL, members, targets, b.universe.full)
    elif kind == "meet":
        got = kernels.fused_composite(kernels.ORTHO, members, kernels.ORTHO, members, targets, b.universe.full)
    else:
        raise ValueError(f"kind must be join or meet, got {kind!r}")
    bad = got != targets
    if not bad.any():
        return Verdict(True)
    return Verdict(False, SubsetMask(b.universe, int(targets[np.argmax(bad)])))


# --- resolutions -----------------------------------------------------------


def interpolant_universe(name: str, family: SubsetFamily, prefix: str = "y") -> Universe:
    """Fresh universe with one element per family member, labelled ``y{a,b}``."""
    labels = tuple(prefix + format_subset(family.universe, b) for b in family.bits)
    return Universe(name, labels)


def membership(x: Universe, y: Universe, family: SubsetFamily) -> Relation:
    """``m ⊆ X × Y`` with ``(x, j) ∈ m`` iff ``x`` lies in the ``j``-th member."""
    rows = [0] * x.size
    for j, b in enumerate(family.bits):
        for i in bit_positions(b):
            rows[i] |= 1 << j
    return Relation(x, y, tuple(rows))


@dataclass(frozen=True, eq=False)
class Resolution:
    original: OperatorTable
    form: Form
    interpolant: Universe
    membership: Relation
    basis_choice: BasisChoice

    @property
    def size(self) -> int:
        """Cardinality of the interpolant."""
        return self.interpolant.size


def verify_resolution(f: OperatorTable, res: Resolution) -> Verdict:
    """Rebuild the composite named by ``res.form`` from ``res.membership`` and
    compare it with ``f`` at every input."""
    if f.domain != res.original.domain or f.domain != res.membership.source:
        raise UniverseMismatch("resolution and operator live in different universes")
    inner, outer = _FORM_KERNELS[res.form]
    # rows of m˘ and columns of m are the same masks over X
    cols = np.array(res.membership.columns, dtype=_U64)
    inputs = _all_inputs(f.domain)
    got = kernels.fused_composite(inner, cols, outer, cols, inputs, f.domain.full)
    bad = got != f.entries
    if not bad.any():
        return Verdict(True)
    return Verdict(False, SubsetMask(f.domain, int(np.argmax(bad))))


def _checked(res: Resolution) -> Resolution:
    verdict = verify_resolution(res.original, res)
    if not verdict:
        raise VerificationFailed(f"{res.form} resolution differs at {verdict.witness}")
    return res


def _family(lattice: FixLattice, choice: BasisChoice, kind: Literal["join", "meet"]) -> SubsetFamily:
    if choice == "fixpoints":
        return lattice.fixpoints
    if choice == "minimal":
        return minimal_basis(lattice, kind)
    raise ValueError(f"basis choice must be fixpoints or minimal, got {choice!r}")


def _require(f: OperatorTable, kind: str) -> None:
    report = classify(f)
    ok = report.is_interior if kind == "interior" else report.is_closure
    if not ok:
        axioms = ("monotone", "contractive", "deflation_ok") if kind == "interior" else (
            "monotone", "expansive", "inflation_ok")
        failed = [(n, c) for n, c in report.failures() if n in axioms]
        names = ", ".join(n for n, _ in failed)
        exc = NotInterior if kind == "interior" else NotClosure
        article = "an" if kind == "interior" else "a"
        raise exc(f"not {article} {kind} operator (fails {names})", tuple((n, c.witness) for n, c in failed))


def resolve_interior(f: OperatorTable, basis_choice: BasisChoice = "minimal") -> Resolution:
    """Resolve an interior operator as ``⟨m⟩ · [m˘]``."""
    _require(f, "interior")
    fam = _family(fixpoints(f), basis_choice, "join")
    y = interpolant_universe(f"Y_{f.domain.name}", fam)
    return _checked(Resolution(f, "interior-angelic", y, membership(f.domain, y, fam), basis_choice))


def resolve_closure(
    f: OperatorTable,
    form: Literal["demonic", "biorthogonal"] = "biorthogonal",
    basis_choice: BasisChoice = "minimal",
) -> Resolution:
    """Resolve a closure operator as ``⊥m · ⊥m˘`` or ``[m] · ⟨m˘⟩``.

    The biorthogonal form uses a meet-basis of the closure's own fixpoints.
    The demonic form resolves the interior ``¬·F·¬`` and reuses its
    membership relation, since ``¬·⟨m⟩·[m˘]·¬ = [m]·⟨m˘⟩``; its interpolant
    labels therefore name fixpoints of that interior (complements of
    fixpoints of ``F``).
    """
    _require(f, "closure")
    if form == "biorthogonal":
        fam = _family(fixpoints(f), basis_choice, "meet")
        tag: Form = "closure-biorthogonal"
    elif form == "demonic":
        fam = _family(fixpoints(dual(f)), basis_choice, "join")
        tag = "closure-demonic"
    else:
        raise ValueError(f"form must be demonic or biorthogonal, got {form!r}")
    y = interpolant_universe(f"Y_{f.domain.name}", fam)
    return _checked(Resolution(f, tag, y, membership(f.domain, y, fam), basis_choice))


def basis_from_resolution(res: Resolution) -> SubsetFamily:
    """The family ``U_y = ⟨m⟩{y}`` (the columns of ``m``) of an interior resolution."""
    if res.form != "interior-angelic":
        raise WrongForm(f"basis extraction needs an interior-angelic resolution, got {res.form}")
    return SubsetFamily(res.membership.source, res.membership.columns)


# --- general monotone factorization ----------------------------------------


@dataclass(frozen=True, eq=False)
class Factorization:
    """``F`` as ``outer(r) · inner(s)`` through ``X' = P(X)``.

    ``s ⊆ X' × X`` and ``r ⊆ Y × X'``.  For ``angel-demon`` these are the
    literal ``(U, x) ∈ s iff x ∈ U`` and ``(y, U) ∈ r iff y ∈ F(U)``; the other
    variants use the complemented relations that make ``[r]·⟨s⟩`` and
    ``⊥r·⊥s`` equal to ``F``.
    """

    original: OperatorTable
    variant: Variant
    interpolant: Universe
    s: Relation
    r: Relation

    def composite(self) -> np.ndarray:
        inner, outer = _VARIANT_KERNELS[self.variant]
        rows_s = np.array(self.s.rows, dtype=_U64)
        cols_r = np.array(self.r.columns, dtype=_U64)
        return kernels.fused_composite(
            inner, rows_s, outer, cols_r, _all_inputs(self.original.domain), self.original.codomain.full
        )

    def verify(self) -> Verdict:
        bad = self.composite() != self.original.entries
        if not bad.any():
            return Verdict(True)
        return Verdict(False, SubsetMask(self.original.domain, int(np.argmax(bad))))


def _rel_from_columns(y: Universe, x_prime: Universe, cols) -> Relation:
    rows = [0] * y.size
    for j, c in enumerate(cols):
        for i in bit_positions(int(c)):
            rows[i] |= 1 << j
    return Relation(y, x_prime, tuple(rows))


def factorize_monotone(f: OperatorTable, variant: Variant = "angel-demon", cap: int = DEFAULT_CAP) -> Factorization:
    x, y = f.domain, f.codomain
    if x.size > cap // 2:
        raise UniverseTooLarge(x.size, cap // 2, f"factorization domain {x.name!r}")
    mono = monotone_check(f)
    if not mono:
        raise NotMonotone("transformer is not monotone", (("monotone", mono.witness),))
    n_sub = 1 << x.size
    all_subsets = SubsetFamily(x, tuple(range(n_sub)))
    x_prime = interpolant_universe(f"P{x.name}", all_subsets, prefix="u")
    subsets = list(range(n_sub))
    if variant == "angel-demon":
        s_rows = subsets
        r_cols = [int(v) for v in f.entries]
    elif variant in ("demon-angel", "ortho-ortho"):
        g = conjugate(f)  # monotone too; F = ¬·G·¬
        if variant == "demon-angel":
            # F = ¬⟨r⟩[s]¬ = [r]⟨s⟩ with r, s built from G
            s_rows = subsets
            r_cols = [int(v) for v in g.entries]
        else:
            # ⟨r⟩ = ¬⊥(¬r) and [s]·¬ = ⊥(¬s) turn ¬⟨r⟩[s]¬ into ⊥(¬r)·⊥(¬s)
            s_rows = [x.full ^ b for b in subsets]
            r_cols = [y.full ^ int(v) for v in g.entries]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    s = Relation(x_prime, x, tuple(s_rows))
    r = _rel_from_columns(y, x_prime, r_cols)
    fac = Factorization(f, variant, x_prime, s, r)
    verdict = fac.verify()
    if not verdict:
        raise VerificationFailed(f"{variant} factorization differs at {verdict.witness}")
    return fac
