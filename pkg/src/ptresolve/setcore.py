"""Finite universes, subset masks and families of subsets.

A subset of an ``n``-element universe is an ``int`` whose bit ``i`` stands for
the ``i``-th label in declaration order.  Python integers are arbitrary
precision, so the same representation serves the small universes we enumerate
powersets of and the wide interpolant universes built by resolutions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Literal, Sequence, Union

from .errors import DuplicateLabel, FamilyBudgetExceeded, UniverseMismatch, UniverseTooLarge, UnknownElement

#: Default cap on universes whose powerset gets enumerated.
DEFAULT_CAP = 20


@dataclass(frozen=True)
class Universe:
    name: str
    labels: tuple[str, ...]

    @cached_property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def full(self) -> int:
        """Bits of the whole universe."""
        return (1 << len(self.labels)) - 1

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"Universe({self.name!r}, size={self.size})"


def mk_universe(name: str, labels: Sequence[str], cap: int | None = DEFAULT_CAP) -> Universe:
    """Build a universe; bit ``i`` is ``labels[i]``.

    ``cap=None`` lifts the size limit; only do that for universes whose
    powerset is never enumerated (interpolants).
    """
    labels = tuple(labels)
    if not labels:
        raise ValueError(f"universe {name!r} needs at least one element")
    seen: set[str] = set()
    for label in labels:
        if label in seen:
            raise DuplicateLabel(f"duplicate label {label!r} in universe {name!r}")
        seen.add(label)
    if cap is not None and len(labels) > cap:
        raise UniverseTooLarge(len(labels), cap, f"universe {name!r}")
    return Universe(name, labels)


def check_same(a: Universe, b: Universe, what: str = "operands") -> None:
    if a != b:
        raise UniverseMismatch(f"{what}: universe {a.name!r} vs {b.name!r}")


def bit_positions(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def labels_of(u: Universe, bits: int) -> list[str]:
    """Labels of the set bits, in declaration order."""
    return [u.labels[i] for i in bit_positions(bits)]


def format_subset(u: Universe, bits: int) -> str:
    return "{" + ",".join(labels_of(u, bits)) + "}"


@dataclass(frozen=True)
class SubsetMask:
    universe: Universe
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.universe.size:
            raise ValueError(f"bits {self.bits:#x} out of range for {self.universe!r}")

    def labels(self) -> list[str]:
        return labels_of(self.universe, self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels())

    def __contains__(self, label: str) -> bool:
        i = self.universe.index.get(label)
        return i is not None and bool(self.bits >> i & 1)

    def _other(self, other: SubsetMask) -> int:
        check_same(self.universe, other.universe, "subset comparison")
        return other.bits

    def __le__(self, other: SubsetMask) -> bool:
        return self.bits & ~self._other(other) == 0

    def __lt__(self, other: SubsetMask) -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: SubsetMask) -> bool:
        return other <= self

    def __gt__(self, other: SubsetMask) -> bool:
        return other < self

    def __or__(self, other: SubsetMask) -> SubsetMask:
        return SubsetMask(self.universe, self.bits | self._other(other))

    def __and__(self, other: SubsetMask) -> SubsetMask:
        return SubsetMask(self.universe, self.bits & self._other(other))

    def __sub__(self, other: SubsetMask) -> SubsetMask:
        return SubsetMask(self.universe, self.bits & ~self._other(other))

    def __invert__(self) -> SubsetMask:
        return SubsetMask(self.universe, self.universe.full ^ self.bits)

    def __str__(self) -> str:
        return format_subset(self.universe, self.bits)

    def __repr__(self) -> str:
        return f"SubsetMask({self.universe.name}, {self})"


def mask_of(u: Universe, names: Iterable[str]) -> SubsetMask:
    bits = 0
    for name in names:
        i = u.index.get(name)
        if i is None:
            raise UnknownElement(name, u.name)
        bits |= 1 << i
    return SubsetMask(u, bits)


def empty(u: Universe) -> SubsetMask:
    return SubsetMask(u, 0)


def full(u: Universe) -> SubsetMask:
    return SubsetMask(u, u.full)


MaskLike = Union[SubsetMask, int]


@dataclass(frozen=True)
class SubsetFamily:
    """A duplicate-free family of subsets, kept sorted by mask value.

    Members are stored as raw bits in ``bits``; iterating yields
    :class:`SubsetMask` objects.
    """

    universe: Universe
    bits: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        norm = tuple(sorted(set(self.bits)))
        limit = 1 << self.universe.size
        for b in norm[:1] + norm[-1:]:
            if b < 0 or b >= limit:
                raise ValueError(f"member {b:#x} out of range for {self.universe!r}")
        object.__setattr__(self, "bits", norm)

    @classmethod
    def of(cls, u: Universe, members: Iterable[MaskLike]) -> SubsetFamily:
        out = []
        for m in members:
            if isinstance(m, SubsetMask):
                check_same(u, m.universe, "family member")
                out.append(m.bits)
            else:
                out.append(int(m))
        return cls(u, tuple(out))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[SubsetMask]:
        return (SubsetMask(self.universe, b) for b in self.bits)

    def __contains__(self, m: object) -> bool:
        if isinstance(m, SubsetMask):
            return m.universe == self.universe and m.bits in self._set
        return m in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.bits)

    def without(self, m: MaskLike) -> SubsetFamily:
        b = m.bits if isinstance(m, SubsetMask) else m
        return SubsetFamily(self.universe, tuple(x for x in self.bits if x != b))

    def __str__(self) -> str:
        return "{" + ", ".join(format_subset(self.universe, b) for b in self.bits) + "}"


def family_saturate(f: SubsetFamily, mode: Literal["unions", "intersections"]) -> SubsetFamily:
    """Smallest superfamily closed under binary unions (or intersections).

    The empty union (``∅``) or empty intersection (the full universe) is
    always included.
    """
    u = f.universe
    if mode == "unions":
        out = {0}
        for g in f.bits:
            out |= {s | g for s in out}
    elif mode == "intersections":
        out = {u.full}
        for g in f.bits:
            out |= {s & g for s in out}
    else:
        raise ValueError(f"mode must be 'unions' or 'intersections', got {mode!r}")
    if len(out) > 1 << u.size:
        raise FamilyBudgetExceeded(f"saturated family has {len(out)} members")
    return SubsetFamily(u, tuple(out))
