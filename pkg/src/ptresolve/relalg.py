"""Binary relations and the three predicate transformers they induce.

For ``r ⊆ X × Y`` every transformer maps subsets of ``Y`` to subsets of ``X``:

* ``angel``: ``{x | some successor of x lies in V}``
* ``demon``: ``{x | every successor of x lies in V}``
* ``ortho``: ``{x | x is related to every element of V}`` (antitone)

A relation is stored row-major: ``rows[x]`` is the bitmask of successors of
``x`` over ``Y``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Any, Callable, Iterable, Literal

import numpy as np

from . import kernels
from .errors import BudgetExceeded, UniverseMismatch, UniverseTooLarge, UnknownElement
from .setcore import SubsetMask, Universe, bit_positions

if TYPE_CHECKING:
    from .optable import OperatorTable

TransformKind = Literal["angel", "demon", "ortho"]
KINDS: tuple[str, ...] = ("angel", "demon", "ortho")

#: Largest universe whose powerset may be laid out as an array.
MAX_TABLE_BITS = 26
#: Default budget (number of (U, V) pairs) for exhaustive law checks.
DEFAULT_BUDGET = 1 << 24

# set-bit positions of every byte, for the common small-universe loops
_BYTE_BITS = tuple(tuple(i for i in range(8) if m >> i & 1) for m in range(256))


@dataclass(frozen=True)
class Relation:
    source: Universe
    target: Universe
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.source.size:
            raise ValueError(f"relation needs {self.source.size} rows, got {len(self.rows)}")
        limit = self.target.full
        bad = [row for row in self.rows if row < 0 or row & ~limit]
        if bad:
            raise ValueError(f"row {bad[0]:#x} out of range for {self.target!r}")

    @classmethod
    def from_pairs(cls, source: Universe, target: Universe, pairs: Iterable[tuple[str, str]]) -> Relation:
        rows = [0] * source.size
        for x, y in pairs:
            if x not in source.index:
                raise UnknownElement(x, source.name)
            if y not in target.index:
                raise UnknownElement(y, target.name)
            rows[source.index[x]] |= 1 << target.index[y]
        return cls(source, target, tuple(rows))

    @classmethod
    def empty(cls, source: Universe, target: Universe) -> Relation:
        return cls(source, target, (0,) * source.size)

    @classmethod
    def full(cls, source: Universe, target: Universe) -> Relation:
        return cls(source, target, (target.full,) * source.size)

    @classmethod
    def identity(cls, u: Universe) -> Relation:
        return cls(u, u, tuple(1 << i for i in range(u.size)))

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """``columns[y]`` is the mask over the source of predecessors of ``y``."""
        return _rows_from_columns(self.rows, self.target.size)

    def __contains__(self, pair: tuple[str, str]) -> bool:
        x, y = pair
        i, j = self.source.index.get(x), self.target.index.get(y)
        return i is not None and j is not None and bool(self.rows[i] >> j & 1)

    def pairs(self) -> list[tuple[str, str]]:
        return [
            (self.source.labels[x], self.target.labels[y])
            for x, row in enumerate(self.rows)
            for y in bit_positions(row)
        ]

    def __len__(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def __repr__(self) -> str:
        return f"Relation({self.source.name}->{self.target.name}, {len(self)} pairs)"


def _trusted(source: Universe, target: Universe, rows: tuple[int, ...]) -> Relation:
    # skips row validation; only for rows that are in range by construction
    r = object.__new__(Relation)
    r.__dict__.update(source=source, target=target, rows=rows)
    return r


def converse(r: Relation) -> Relation:
    return _trusted(r.target, r.source, r.columns)


def complement_rel(r: Relation) -> Relation:
    full = r.target.full
    return _trusted(r.source, r.target, tuple(full ^ row for row in r.rows))


def random_relation(source: Universe, target: Universe, seed: int, density: float = 0.5) -> Relation:
    rng = random.Random(seed)
    rows = []
    for _ in range(source.size):
        row = 0
        for y in range(target.size):
            if rng.random() < density:
                row |= 1 << y
        rows.append(row)
    return Relation(source, target, tuple(rows))


def all_relations(source: Universe, target: Universe) -> Iterable[Relation]:
    """Every relation between two (small) universes, in matrix-value order."""
    nx, ny = source.size, target.size
    row_mask = target.full
    for code in range(1 << (nx * ny)):
        yield _trusted(source, target, tuple(code >> (ny * x) & row_mask for x in range(nx)))


def transform(kind: TransformKind, r: Relation, v: SubsetMask) -> SubsetMask:
    """Apply ``angel``/``demon``/``ortho`` of ``r`` to a subset of ``r.target``."""
    if v.universe != r.target:
        raise UniverseMismatch(f"argument lives in {v.universe.name!r}, relation target is {r.target.name!r}")
    bits = v.bits
    out = 0
    if kind == "angel":
        for x, row in enumerate(r.rows):
            if row & bits:
                out |= 1 << x
    elif kind == "demon":
        for x, row in enumerate(r.rows):
            if not row & ~bits:
                out |= 1 << x
    elif kind == "ortho":
        for x, row in enumerate(r.rows):
            if not bits & ~row:
                out |= 1 << x
    else:
        raise ValueError(f"unknown transformer kind {kind!r}")
    return SubsetMask(r.source, out)


def _table_sizes(r: Relation) -> None:
    if r.target.size > MAX_TABLE_BITS:
        raise UniverseTooLarge(r.target.size, MAX_TABLE_BITS, f"table domain {r.target.name!r}")
    if r.source.size > 64:
        raise UniverseTooLarge(r.source.size, 64, f"table codomain {r.source.name!r}")


def transform_table(kind: TransformKind, r: Relation) -> np.ndarray:
    """All values of a transformer, indexed by the argument's mask value."""
    _table_sizes(r)
    n, full = r.target.size, r.source.full
    cols = np.array(r.columns, dtype=np.uint64)
    if kind == "angel":
        return kernels.angel_table(cols, n)
    if kind == "demon":
        return kernels.demon_table(cols, n, full)
    if kind == "ortho":
        return kernels.ortho_table(cols, n, full)
    raise ValueError(f"unknown transformer kind {kind!r}")


Evaluator = Callable[[str, Relation], np.ndarray]


@dataclass(frozen=True)
class Counterexample:
    law: str
    inputs: tuple[SubsetMask, ...]
    lhs: Any
    rhs: Any


@dataclass(frozen=True)
class GaloisReport:
    holds: bool
    counterexample: Counterexample | None = None

    def __post_init__(self) -> None:
        if self.holds != (self.counterexample is None):
            raise ValueError("holds must be true exactly when there is no counterexample")

    def __bool__(self) -> bool:
        return self.holds


def _budget(r: Relation, budget: int) -> None:
    pairs = 1 << (r.source.size + r.target.size)
    if pairs > budget:
        raise BudgetExceeded(f"exhaustive check needs {pairs} pairs, budget is {budget}")


def check_negation_laws(
    r: Relation, *, evaluator: Evaluator = transform_table, budget: int = DEFAULT_BUDGET
) -> GaloisReport:
    """Check ``⟨r⟩·¬ = ¬·[r]`` and ``⟨¬r⟩ = ¬·⊥r`` over every ``V ⊆ Y``.

    ``evaluator`` computes transformer tables; tests pass a corrupted one to
    exercise counterexample reporting.
    """
    _budget(r, budget)
    fx, fy = np.uint64(r.source.full), r.target.full
    angel = evaluator("angel", r)
    demon = evaluator("demon", r)
    angel_neg = evaluator("angel", complement_rel(r))
    ortho = evaluator("ortho", r)
    vs = np.arange(1 << r.target.size, dtype=np.int64)
    lhs1, rhs1 = angel[fy ^ vs], fx ^ demon
    lhs2, rhs2 = angel_neg, fx ^ ortho
    bad1, bad2 = lhs1 != rhs1, lhs2 != rhs2
    bad = bad1 | bad2
    if not bad.any():
        return GaloisReport(True)
    v = int(np.argmax(bad))
    vm = SubsetMask(r.target, v)
    if bad1[v]:
        cx = Counterexample("angel(not V) = not demon(V)", (vm,),
                            SubsetMask(r.source, int(lhs1[v])), SubsetMask(r.source, int(rhs1[v])))
    else:
        cx = Counterexample("angel(not r)(V) = not ortho(V)", (vm,),
                            SubsetMask(r.source, int(lhs2[v])), SubsetMask(r.source, int(rhs2[v])))
    return GaloisReport(False, cx)


def check_galois(
    r: Relation, *, evaluator: Evaluator = transform_table, budget: int = DEFAULT_BUDGET
) -> GaloisReport:
    """Check ``⟨r⟩V ⊆ U ⇔ V ⊆ [r˘]U`` and ``U ⊆ ⊥r(V) ⇔ V ⊆ ⊥r˘(U)`` for all pairs."""
    _budget(r, budget)
    rc = converse(r)
    angel, ortho = evaluator("angel", r), evaluator("ortho", r)
    demon_c, ortho_c = evaluator("demon", rc), evaluator("ortho", rc)
    us = np.arange(1 << r.source.size, dtype=np.uint64)[:, None]
    vs = np.arange(1 << r.target.size, dtype=np.uint64)[None, :]
    zero = np.uint64(0)
    # rows index U, columns index V
    l1 = (angel[None, :] & ~us) == zero
    r1 = (vs & ~demon_c[:, None]) == zero
    l2 = (us & ~ortho[None, :]) == zero
    r2 = (vs & ~ortho_c[:, None]) == zero
    bad1, bad2 = l1 != r1, l2 != r2
    bad = bad1 | bad2
    if not bad.any():
        return GaloisReport(True)
    u, v = np.unravel_index(int(np.argmax(bad)), bad.shape)
    pair = (SubsetMask(r.source, int(u)), SubsetMask(r.target, int(v)))
    if bad1[u, v]:
        cx = Counterexample("angel(V) <= U iff V <= demon(conv r)(U)", pair, bool(l1[u, v]), bool(r1[u, v]))
    else:
        cx = Counterexample("U <= ortho(V) iff V <= ortho(conv r)(U)", pair, bool(l2[u, v]), bool(r2[u, v]))
    return GaloisReport(False, cx)


def extract_relation(f: OperatorTable, kind: Literal["sup", "inf", "antitone"]) -> Relation:
    """Recover ``r`` from a transformer ``F: P(Y) → P(X)`` assumed to be
    ``angel(r)`` (kind ``sup``), ``demon(r)`` (``inf``) or ``ortho(r)``
    (``antitone``).  The morphism property itself is not checked.
    """
    ydom, xcod = f.domain, f.codomain
    entries = f.entries
    # small tables are cheaper to read as a list than through numpy indexing
    small = entries.tolist() if entries.size <= 4096 else None
    if small is not None:
        singles = [small[1 << y] for y in range(ydom.size)]
    else:
        singles = entries[_singleton_index(ydom.size)].tolist()
    if kind == "sup":
        return _trusted(xcod, ydom, _rows_from_columns(singles, xcod.size))
    if kind == "antitone":
        # sup-extract the complemented transformer, then complement the result
        negated = [xcod.full ^ c for c in singles]
        full = ydom.full
        return _trusted(xcod, ydom, tuple(full ^ row for row in _rows_from_columns(negated, xcod.size)))
    if kind == "inf":
        # (x, y) ∈ r iff every U with x ∈ F(U) contains y
        if small is None:
            us = np.arange(entries.size, dtype=np.uint64)
            xs = np.arange(xcod.size, dtype=np.uint64)
            hit = ((entries[:, None] >> xs[None, :]) & np.uint64(1)).astype(bool)
            acc = np.bitwise_and.reduce(np.where(hit, us[:, None], np.uint64(ydom.full)), axis=0)
            return _trusted(xcod, ydom, tuple(acc.tolist()))
        rows = [ydom.full] * xcod.size
        for u, image in enumerate(small):
            for x in _BYTE_BITS[image] if image < 256 else bit_positions(image):
                rows[x] &= u
        return _trusted(xcod, ydom, tuple(rows))
    raise ValueError(f"kind must be sup, inf or antitone, got {kind!r}")


@lru_cache(maxsize=None)
def _singleton_index(n: int) -> np.ndarray:
    return np.left_shift(1, np.arange(n, dtype=np.intp))


def _rows_from_columns(cols: Iterable[int], n_rows: int) -> tuple[int, ...]:
    # transpose: bit x of cols[y] becomes bit y of rows[x]
    rows = [0] * n_rows
    for y, col in enumerate(cols):
        bit = 1 << y
        for x in _BYTE_BITS[col] if col < 256 else bit_positions(col):
            rows[x] |= bit
    return tuple(rows)
