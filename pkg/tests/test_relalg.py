import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import as_frozen, pairs_of
from ptresolve.errors import BudgetExceeded, UniverseMismatch, UnknownElement
from ptresolve.optable import from_function, identity
from ptresolve.relalg import (
    Relation,
    all_relations,
    check_galois,
    check_negation_laws,
    complement_rel,
    converse,
    extract_relation,
    random_relation,
    transform,
    transform_table,
)
from ptresolve.setcore import SubsetMask, mask_of, mk_universe

X = mk_universe("X", ["a", "b"])
Y = mk_universe("Y", ["1", "2"])
R = Relation.from_pairs(X, Y, [("a", "1"), ("b", "1"), ("b", "2")])


def small_relation(max_n=3):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        m = draw(st.integers(1, max_n))
        src = mk_universe("X", list("abcd"[:n]))
        dst = mk_universe("Y", [f"y{i}" for i in range(m)])
        rows = draw(st.lists(st.integers(0, (1 << m) - 1), min_size=n, max_size=n))
        return Relation(src, dst, tuple(rows))

    return build()


def test_from_pairs_and_pairs():
    assert sorted(R.pairs()) == [("a", "1"), ("b", "1"), ("b", "2")]
    assert ("b", "2") in R and ("a", "2") not in R
    assert len(R) == 3
    with pytest.raises(UnknownElement):
        Relation.from_pairs(X, Y, [("a", "3")])


def test_converse_and_complement_examples():
    one = mk_universe("X", ["a"])
    r = Relation.from_pairs(one, Y, [("a", "1")])
    c = converse(r)
    assert (c.source, c.target) == (Y, one)
    assert c.pairs() == [("1", "a")]
    assert complement_rel(r).pairs() == [("a", "2")]
    assert len(complement_rel(Relation.empty(X, Y))) == 4
    assert converse(Relation.full(X, Y)) == Relation.full(Y, X)
    assert len(converse(Relation.empty(X, Y))) == 0


def test_complement_involution_random_4x4():
    u = mk_universe("U", list("abcd"))
    r = random_relation(u, u, seed=3)
    assert complement_rel(complement_rel(r)) == r
    assert pairs_of(complement_rel(r)) == oracles.neg(pairs_of(r), u.labels, u.labels)


def test_transform_examples():
    assert transform("angel", R, mask_of(Y, ["1"])).labels() == ["a", "b"]
    assert transform("demon", R, mask_of(Y, ["1"])).labels() == ["a"]
    assert transform("ortho", R, mask_of(Y, ["1", "2"])).labels() == ["b"]
    assert transform("angel", R, mask_of(Y, [])).bits == 0
    assert transform("demon", R, mask_of(Y, ["1", "2"])).bits == X.full
    assert transform("ortho", R, mask_of(Y, [])).bits == X.full
    with pytest.raises(UniverseMismatch):
        transform("angel", R, mask_of(X, ["a"]))


@settings(max_examples=60)
@given(small_relation(), st.sampled_from(["angel", "demon", "ortho"]))
def test_transform_and_tables_match_oracle(r, kind):
    pr = pairs_of(r)
    table = transform_table(kind, r)
    for v in range(1 << r.target.size):
        vm = SubsetMask(r.target, v)
        want = oracles.TRANSFORMS[kind](pr, r.source.labels, as_frozen(vm))
        assert as_frozen(transform(kind, r, vm)) == want
        assert as_frozen(SubsetMask(r.source, int(table[v]))) == want


def test_laws_hold_exhaustively_on_2x2():
    for r in all_relations(X, Y):
        assert check_negation_laws(r)
        assert check_galois(r)


def test_galois_examples():
    assert check_galois(R)
    assert check_galois(Relation.empty(X, Y))
    assert check_galois(Relation.full(X, Y))


def test_corrupted_evaluator_yields_counterexample():
    def broken(kind, r):
        t = transform_table(kind, r).copy()
        if kind == "demon":
            t[0] ^= np.uint64(1)
        return t

    neg = check_negation_laws(R, evaluator=broken)
    assert not neg.holds
    assert neg.counterexample.inputs[0].bits == 0
    gal = check_galois(R, evaluator=broken)
    assert not gal and gal.counterexample is not None


def test_budget():
    u = mk_universe("U", [f"e{i}" for i in range(13)])
    with pytest.raises(BudgetExceeded):
        check_galois(Relation.empty(u, u), budget=1 << 20)


def test_galois_counterexample_is_genuine_for_oracle():
    # cross-check the law statements themselves against the frozenset oracle
    for rows in itertools.product(range(4), repeat=2):
        r = Relation(X, Y, rows)
        pr, pc = pairs_of(r), oracles.conv(pairs_of(r))
        for u in oracles.powerset(X.labels):
            for v in oracles.powerset(Y.labels):
                lhs = oracles.angel(pr, X.labels, v) <= u
                rhs = v <= oracles.demon(pc, Y.labels, u)
                assert lhs == rhs
                assert (u <= oracles.ortho(pr, X.labels, v)) == (v <= oracles.ortho(pc, Y.labels, u))


def test_extract_examples():
    for kind, ext in (("angel", "sup"), ("demon", "inf"), ("ortho", "antitone")):
        f = from_function(Y, X, lambda v, k=kind: transform(k, R, v))
        assert extract_relation(f, ext) == R
    assert extract_relation(identity(Y), "sup") == Relation.identity(Y)
    zero = from_function(Y, Y, lambda v: SubsetMask(Y, 0))
    assert len(extract_relation(zero, "sup")) == 0


@settings(max_examples=60)
@given(small_relation(), st.sampled_from([("angel", "sup"), ("demon", "inf"), ("ortho", "antitone")]))
def test_extract_round_trip(r, pair):
    kind, ext = pair
    f = from_function(r.target, r.source, lambda v: transform(kind, r, v))
    assert extract_relation(f, ext) == r


def test_random_relation_deterministic():
    u = mk_universe("U", list("abc"))
    assert random_relation(u, u, 5) == random_relation(u, u, 5)
    assert len(random_relation(u, u, 5, density=0.0)) == 0
    assert len(random_relation(u, u, 5, density=1.0)) == 9
