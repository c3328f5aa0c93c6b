import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import pairs_of, table_dict
from ptresolve import optable as ot
from ptresolve.errors import KindMismatch, NotAFixpointMember, NotClosure, NotInterior, NotMonotone, WrongForm
from ptresolve.relalg import Relation, converse
from ptresolve.resolve import (
    Resolution,
    basis_from_resolution,
    factorize_monotone,
    fixpoints,
    is_basis,
    minimal_basis,
    resolve_closure,
    resolve_interior,
    verify_resolution,
)
from ptresolve.setcore import SubsetFamily, mask_of, mk_universe

X3 = mk_universe("X", list("abc"))
X2 = mk_universe("X", list("ab"))


def fam(u, *members):
    return SubsetFamily.of(u, [mask_of(u, m) for m in members])


def labelled(family):
    return {frozenset(m.labels()) for m in family}


FIXTURE = ot.operator_from_family(fam(X3, "a", "ab"), "interior")
CLOSURE = ot.operator_from_family(fam(X2, "a"), "closure")


def oracle_composite(res: Resolution):
    """Evaluate the composite named by ``res.form`` with frozenset transformers."""
    m = pairs_of(res.membership)
    mc = oracles.conv(m)
    xs, ys = res.membership.source.labels, res.membership.target.labels
    outer, inner = {
        "interior-angelic": (oracles.angel, oracles.demon),
        "closure-demonic": (oracles.demon, oracles.angel),
        "closure-biorthogonal": (oracles.ortho, oracles.ortho),
    }[res.form]
    return {u: outer(m, xs, inner(mc, ys, u)) for u in oracles.powerset(xs)}


def test_fixpoints_fixture():
    lat = fixpoints(FIXTURE)
    assert lat.operator_kind == "interior"
    assert labelled(lat.fixpoints) == {frozenset(), frozenset("a"), frozenset("ab")}
    assert labelled(lat.irreducibles("join")) == {frozenset("a"), frozenset("ab")}
    assert lat.union_closed


def test_fixpoints_identity_and_threshold():
    lat = fixpoints(ot.identity(X2))
    assert len(lat.fixpoints) == 4
    assert labelled(lat.irreducibles("join")) == {frozenset("a"), frozenset("b")}
    x5 = mk_universe("X", list("abcde"))
    lat = fixpoints(ot.threshold_operator(x5, 3))
    assert labelled(lat.fixpoints) == {frozenset()} | {u for u in oracles.powerset("abcde") if len(u) >= 3}
    assert labelled(lat.irreducibles("join")) == {frozenset(c) for c in itertools.combinations("abcde", 3)}


def test_minimal_basis_examples():
    assert labelled(minimal_basis(fixpoints(FIXTURE), "join")) == {frozenset("a"), frozenset("ab")}
    one = mk_universe("X", ["a"])
    assert labelled(minimal_basis(fixpoints(ot.identity(one)), "join")) == {frozenset("a")}
    zero = ot.constant(X3, mask_of(X3, []))
    lat = fixpoints(zero)
    assert lat.fixpoints.bits == (0,)
    assert len(minimal_basis(lat, "join")) == 0
    with pytest.raises(KindMismatch):
        minimal_basis(fixpoints(FIXTURE), "meet")


def test_is_basis_examples():
    lat = fixpoints(FIXTURE)
    assert is_basis(minimal_basis(lat, "join"), lat, "join")
    assert is_basis(lat.fixpoints, lat, "join")
    v = is_basis(fam(X3, "a"), lat, "join")
    assert not v and v.witness == mask_of(X3, "ab")
    with pytest.raises(NotAFixpointMember):
        is_basis(fam(X3, "b"), lat, "join")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 15), max_size=6), st.sampled_from(["interior", "closure"]))
def test_lattice_matches_oracle(members, kind):
    u = mk_universe("U", list("abcd"))
    f = ot.operator_from_family(SubsetFamily.of(u, members), kind)
    d = table_dict(f)
    fix = oracles.fixpoints(d)
    lat = fixpoints(f)
    assert labelled(lat.fixpoints) == fix
    assert labelled(lat.irreducibles("join")) == oracles.join_irreducibles(fix)
    assert labelled(lat.irreducibles("meet")) == oracles.meet_irreducibles(fix, u.labels)
    bkind = "join" if lat.operator_kind == "interior" else "meet"
    basis = labelled(minimal_basis(lat, bkind))
    check = oracles.is_join_basis if bkind == "join" else (lambda b, fx: oracles.is_meet_basis(b, fx, u.labels))
    assert check(basis, fix)
    # no single member can be dropped
    for m in basis:
        assert not check(basis - {m}, fix)


def test_resolve_interior_fixture():
    res = resolve_interior(FIXTURE)
    assert res.interpolant.labels == ("y{a}", "y{a,b}")
    assert sorted(res.membership.pairs()) == [("a", "y{a,b}"), ("a", "y{a}"), ("b", "y{a,b}")]
    assert oracle_composite(res) == table_dict(FIXTURE)
    assert labelled(basis_from_resolution(res)) == {frozenset("a"), frozenset("ab")}


def test_resolve_interior_identity_and_zero():
    res = resolve_interior(ot.identity(X3))
    assert res.size == 3
    assert labelled(basis_from_resolution(res)) == {frozenset(x) for x in "abc"}
    zero = resolve_interior(ot.constant(X3, mask_of(X3, [])))
    assert zero.size == 0
    assert verify_resolution(zero.original, zero)


def test_resolve_closure_fixture():
    bio = resolve_closure(CLOSURE, "biorthogonal")
    assert bio.interpolant.labels == ("y{a}",)
    assert oracle_composite(bio) == table_dict(CLOSURE)
    dem = resolve_closure(CLOSURE, "demonic")
    assert dem.interpolant.labels == ("y{b}",)
    assert dem.membership.pairs() == [("b", "y{b}")]
    assert oracle_composite(dem) == table_dict(CLOSURE)
    ident = resolve_closure(ot.identity(X3), "biorthogonal", "fixpoints")
    assert oracle_composite(ident) == table_dict(ot.identity(X3))


def test_perturbed_resolution_fails():
    res = resolve_interior(FIXTURE)
    rows = list(res.membership.rows)
    rows[2] ^= 1
    bad = Resolution(FIXTURE, res.form, res.interpolant, Relation(X3, res.interpolant, tuple(rows)), "minimal")
    v = verify_resolution(FIXTURE, bad)
    assert not v and v.witness is not None


def test_wrong_kinds_raise():
    with pytest.raises(NotInterior):
        resolve_interior(CLOSURE)
    with pytest.raises(NotClosure):
        resolve_closure(FIXTURE)
    with pytest.raises(WrongForm):
        basis_from_resolution(resolve_closure(CLOSURE))


def test_basis_from_fixpoint_resolution():
    res = resolve_interior(FIXTURE, "fixpoints")
    lat = fixpoints(FIXTURE)
    b = basis_from_resolution(res)
    assert b.bits == lat.fixpoints.bits
    assert is_basis(b, lat, "join")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.sampled_from(["minimal", "fixpoints"]))
def test_resolutions_match_oracle(seed, n, choice):
    u = mk_universe("U", list("abcde"[:n]))
    f = ot.random_operator(u, "interior", seed, n)
    res = resolve_interior(f, choice)
    assert oracle_composite(res) == table_dict(f)
    c = ot.random_operator(u, "closure", seed, n)
    for form in ("biorthogonal", "demonic"):
        assert oracle_composite(resolve_closure(c, form, choice)) == table_dict(c)


def oracle_factorization(fac):
    s, r = pairs_of(fac.s), pairs_of(fac.r)
    xs, xp, ys = fac.s.target.labels, fac.s.source.labels, fac.r.source.labels
    outer, inner = {
        "angel-demon": (oracles.angel, oracles.demon),
        "demon-angel": (oracles.demon, oracles.angel),
        "ortho-ortho": (oracles.ortho, oracles.ortho),
    }[fac.variant]
    return {u: outer(r, ys, inner(s, xp, u)) for u in oracles.powerset(xs)}


def test_factorize_single_point():
    x = mk_universe("X", ["a"])
    y = mk_universe("Y", ["1"])
    f = ot.OperatorTable(x, y, np.array([0, 1], dtype=np.uint64))
    fac = factorize_monotone(f)
    assert fac.interpolant.labels == ("u{}", "u{a}")
    assert fac.s.pairs() == [("u{a}", "a")]
    assert fac.r.pairs() == [("1", "u{a}")]
    assert oracle_factorization(fac) == table_dict(f)


def test_factorize_identity_and_zero():
    for variant in ("angel-demon", "demon-angel", "ortho-ortho"):
        fac = factorize_monotone(ot.identity(X2), variant)
        assert fac.interpolant.size == 4
        assert oracle_factorization(fac) == table_dict(ot.identity(X2))
    zero = factorize_monotone(ot.constant(X2, mask_of(X2, [])))
    assert len(zero.r) == 0


def test_factorize_rejects_non_monotone():
    f = ot.OperatorTable(X2, X2, np.array([1, 0, 1, 3], dtype=np.uint64))
    with pytest.raises(NotMonotone):
        factorize_monotone(f)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["angel-demon", "demon-angel", "ortho-ortho"]))
def test_factorize_matches_oracle(seed, variant):
    x = mk_universe("X", list("abc"))
    y = mk_universe("Y", ["p", "q"])
    f = ot.random_operator(x, "monotone", seed, 4, codomain=y)
    fac = factorize_monotone(f, variant)
    assert oracle_factorization(fac) == table_dict(f)
    assert converse(converse(fac.r)) == fac.r


def test_operator_that_is_both_supports_either_basis():
    lat = fixpoints(ot.identity(X3))
    assert labelled(minimal_basis(lat, "join")) == {frozenset(x) for x in "abc"}
    assert labelled(minimal_basis(lat, "meet")) == {frozenset("ab"), frozenset("ac"), frozenset("bc")}
    res = resolve_closure(ot.identity(X3), "biorthogonal")
    assert res.size == 3
