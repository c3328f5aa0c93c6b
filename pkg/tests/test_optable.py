import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import table_dict
from ptresolve import optable as ot
from ptresolve.errors import NotEndo, UniverseMismatch
from ptresolve.relalg import Relation, random_relation, transform
from ptresolve.setcore import SubsetFamily, SubsetMask, mask_of, mk_universe

X3 = mk_universe("X", list("abc"))
X2 = mk_universe("X", list("ab"))
Y = mk_universe("Y", ["1", "2"])
R = Relation.from_pairs(X2, Y, [("a", "1"), ("b", "1"), ("b", "2")])


def fam(u, *members):
    return SubsetFamily.of(u, [mask_of(u, m) for m in members])


def test_identity_and_from_relation():
    assert ot.materialize(ot.Identity(X3)).entries.tolist() == list(range(8))
    t = ot.materialize(ot.FromRelation("angel", ot.Named("r", R)))
    assert (t.domain, t.codomain) == (Y, X2)
    for v in range(4):
        assert int(t.entries[v]) == transform("angel", R, SubsetMask(Y, v)).bits


def test_interior_from_resolution_expression():
    m = Relation.from_pairs(X2, Y, [("a", "1"), ("a", "2"), ("b", "2")])
    name = ot.Named("m", m)
    f = ot.materialize(ot.Compose(ot.FromRelation("angel", name), ot.FromRelation("demon", ot.Converse(name))))
    assert ot.classify(f).is_interior


def test_apply_and_threshold():
    one = mk_universe("X", ["a"])
    assert ot.apply(ot.identity(one), mask_of(one, [])).bits == 0
    f = ot.threshold_operator(X3, 2)
    assert ot.apply(f, mask_of(X3, "a")).bits == 0
    assert ot.apply(f, mask_of(X3, "ab")).labels() == ["a", "b"]
    with pytest.raises(UniverseMismatch):
        ot.apply(f, mask_of(X2, "a"))


def test_classify_examples():
    rep = ot.classify(ot.identity(X3))
    assert rep.is_interior and rep.is_closure
    rep = ot.classify(ot.threshold_operator(X3, 2))
    assert rep.is_interior and not rep.is_closure
    assert rep.expansive.witness == (mask_of(X3, "a"),)
    zero = ot.constant(X3, mask_of(X3, []))
    rep = ot.classify(zero)
    assert rep.is_interior and not rep.expansive
    # first failing input in mask order
    assert rep.expansive.witness == (mask_of(X3, "a"),)


def test_classify_non_monotone_witness_pair():
    f = ot.OperatorTable(X2, X2, np.array([1, 0, 1, 3], dtype=np.uint64))
    rep = ot.classify(f)
    assert not rep.monotone
    lo, hi = rep.monotone.witness
    assert lo <= hi and not ot.apply(f, lo) <= ot.apply(f, hi)


@settings(max_examples=80)
@given(st.lists(st.integers(0, 7), min_size=8, max_size=8))
def test_classify_matches_oracle(entries):
    f = ot.OperatorTable(X3, X3, np.array(entries, dtype=np.uint64))
    d = table_dict(f)
    rep = ot.classify(f)
    assert rep.monotone.holds == oracles.is_monotone(d)
    assert rep.is_interior == oracles.is_interior(d)
    assert rep.is_closure == oracles.is_closure(d)


def test_dual_examples():
    assert ot.equal(ot.dual(ot.identity(X3)), ot.identity(X3))
    c = ot.operator_from_family(fam(X2, "a"), "closure")
    d = ot.dual(c)
    assert ot.classify(d).is_interior
    fixed = [v for v in range(4) if int(d.entries[v]) == v]
    assert fixed == [0, mask_of(X2, "b").bits]
    with pytest.raises(NotEndo):
        ot.dual(ot.materialize(ot.FromRelation("angel", ot.Named("r", R))))


@settings(max_examples=40)
@given(st.lists(st.integers(0, 7), min_size=8, max_size=8))
def test_dual_involution(entries):
    f = ot.OperatorTable(X3, X3, np.array(entries, dtype=np.uint64))
    assert ot.equal(ot.dual(ot.dual(f)), f)


def test_equal_witness():
    one = mk_universe("X", ["a"])
    v = ot.equal(ot.identity(one), ot.constant(one, mask_of(one, [])))
    assert not v and v.witness == mask_of(one, ["a"])


def test_family_operator_examples():
    f = ot.operator_from_family(fam(X3, "a", "ab"), "interior")
    assert ot.apply(f, mask_of(X3, "ac")).labels() == ["a"]
    assert ot.apply(f, mask_of(X3, "b")).bits == 0
    assert ot.apply(f, mask_of(X3, "abc")).labels() == ["a", "b"]
    c = ot.operator_from_family(fam(X2, "a"), "closure")
    assert ot.apply(c, mask_of(X2, [])).labels() == ["a"]
    assert ot.apply(c, mask_of(X2, "b")).labels() == ["a", "b"]
    z = ot.operator_from_family(SubsetFamily(X3), "interior")
    assert not z.entries.any()


@settings(max_examples=50)
@given(st.lists(st.integers(0, 15), max_size=6), st.sampled_from(["interior", "closure"]))
def test_family_operator_matches_oracle(members, kind):
    u = mk_universe("U", list("abcd"))
    family = SubsetFamily.of(u, members)
    fs = [frozenset(m.labels()) for m in family]
    want = oracles.interior_from(fs, u.labels) if kind == "interior" else oracles.closure_from(fs, u.labels)
    assert table_dict(ot.operator_from_family(family, kind)) == want


def test_random_operator():
    u = mk_universe("U", list("abcdef"))
    a = ot.random_operator(u, "interior", 3, 5)
    assert np.array_equal(a.entries, ot.random_operator(u, "interior", 3, 5).entries)
    for seed in range(100):
        assert ot.classify(ot.random_operator(u, "interior", seed, 6)).is_interior
        assert ot.classify(ot.random_operator(u, "closure", seed, 6)).is_closure
        assert ot.monotone_check(ot.random_operator(u, "monotone", seed, 6)).holds
    assert not ot.random_operator(u, "monotone", 1, 0).entries.any()


def test_kleisli():
    f = ot.threshold_operator(X3, 2)
    a, b = mask_of(X3, "a"), mask_of(X3, "b")
    assert ot.kleisli_le(f, a, a)
    assert ot.kleisli_le(f, a, b)
    assert not ot.kleisli_le(f, mask_of(X3, "ab"), a)


def test_compose_mismatch():
    with pytest.raises(UniverseMismatch):
        ot.compose(ot.identity(X3), ot.identity(X2))


def test_composite_laws_random():
    for seed in range(30):
        src = mk_universe("X", list("abcd")[: 1 + seed % 4])
        dst = mk_universe("Y", ["p", "q", "r"][: 1 + seed % 3])
        r = random_relation(src, dst, seed)
        assert all(c.holds for c in ot.composite_laws(r).values())


def test_materialize_complement_and_dual():
    name = ot.Named("r", R)
    a = ot.materialize(ot.FromRelation("angel", ot.Complement(name)))
    b = ot.materialize(ot.FromRelation("ortho", name))
    # angel(not r) = not . ortho(r)
    assert ot.equal(a, ot.OperatorTable(Y, X2, np.uint64(X2.full) ^ b.entries))
    c = ot.operator_from_family(fam(X2, "a"), "closure")
    assert ot.equal(ot.materialize(ot.Dual(ot.TableLiteral(c))), ot.dual(c))
