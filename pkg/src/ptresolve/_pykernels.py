"""Bitset kernels, numpy implementation.

Every function here has a twin of the same signature in ``_ckernels.pyx``.
Masks are ``uint64`` words, so any universe whose subsets land in an array
must have at most 64 elements.  Kind codes: 0 angel, 1 demon, 2 ortho.
"""
from __future__ import annotations

import numpy as np

ANGEL, DEMON, ORTHO = 0, 1, 2

_U64 = np.uint64
# tables up to 2**_SMALL entries are built as lists; ufunc overhead dominates there
_SMALL = 6


def angel_table(cols: np.ndarray, n: int) -> np.ndarray:
    """``out[V] = OR of cols[y] for y in V`` over all ``V < 2**n``."""
    cols = np.asarray(cols, dtype=_U64)
    if n <= _SMALL:
        small = [0]
        for c in cols[:n].tolist():
            small += [v | c for v in small]
        return np.array(small, dtype=_U64)
    out = np.zeros(1 << n, dtype=_U64)
    for y in range(n):
        lo = 1 << y
        np.bitwise_or(out[:lo], cols[y], out=out[lo : lo << 1])
    return out


def demon_table(cols: np.ndarray, n: int, full: int) -> np.ndarray:
    """``out[V] = AND of ~cols[y] for y outside V``; the empty meet is ``full``."""
    cols = np.asarray(cols, dtype=_U64)
    if n <= _SMALL:
        # built over complements W of V, then reversed since V = ~W
        small = [full]
        for c in cols[:n].tolist():
            c = full & ~c
            small += [v & c for v in small]
        small.reverse()
        return np.array(small, dtype=_U64)
    return ortho_table(np.uint64(full) ^ cols, n, full)[::-1].copy()


def ortho_table(cols: np.ndarray, n: int, full: int) -> np.ndarray:
    """``out[V] = AND of cols[y] for y in V``; the empty meet is ``full``."""
    cols = np.asarray(cols, dtype=_U64)
    if n <= _SMALL:
        small = [full]
        for c in cols[:n].tolist():
            small += [v & c for v in small]
        return np.array(small, dtype=_U64)
    out = np.empty(1 << n, dtype=_U64)
    out[0] = full
    for y in range(n):
        lo = 1 << y
        np.bitwise_and(out[:lo], cols[y], out=out[lo : lo << 1])
    return out


def fused_composite(
    inner_kind: int,
    inner_rows: np.ndarray,
    outer_kind: int,
    outer_cols: np.ndarray,
    inputs: np.ndarray,
    full_out: int,
) -> np.ndarray:
    """Evaluate ``outer(r) . inner(s)`` at every mask in ``inputs``.

    ``s`` is a relation Z x X given by its rows (masks over X) and ``r`` a
    relation Y x Z given by its columns (masks over Y).  The intermediate
    subset of Z is never built, so Z may be arbitrarily wide.
    """
    inputs = np.asarray(inputs, dtype=_U64)
    rows = np.asarray(inner_rows, dtype=_U64)
    cols = np.asarray(outer_cols, dtype=_U64)
    zero = _U64(0)
    fullw = _U64(full_out)
    acc = np.full(inputs.shape, fullw if outer_kind == ORTHO else zero, dtype=_U64)
    not_inputs = ~inputs
    for z in range(rows.shape[0]):
        row = rows[z]
        if inner_kind == ANGEL:
            member = (inputs & row) != zero
        elif inner_kind == DEMON:
            member = (not_inputs & row) == zero
        else:
            member = (inputs & ~row) == zero
        col = cols[z]
        if outer_kind == ANGEL:
            acc[member] |= col
        elif outer_kind == DEMON:
            acc[~member] |= col
        else:
            acc[member] &= col
    if outer_kind == DEMON:
        acc ^= fullw
    return acc


def monotone_violation(table: np.ndarray, n: int) -> tuple[int, int]:
    """First ``(U, x)`` in mask order with ``x`` not in U and
    ``table[U]`` not contained in ``table[U | 1 << x]``; ``(-1, -1)`` if none."""
    table = np.asarray(table, dtype=_U64)
    idx = np.arange(1 << n, dtype=np.int64)
    best = (-1, -1)
    for x in range(n):
        bit = 1 << x
        lower = idx[(idx & bit) == 0]
        bad = (table[lower] & ~table[lower | bit]) != 0
        if bad.any():
            u = int(lower[np.argmax(bad)])
            if best[0] < 0 or u < best[0]:
                best = (u, x)
    return best


def strict_joins(members: np.ndarray) -> np.ndarray:
    """For each member, the OR of all other members strictly below it."""
    m = np.asarray(members, dtype=_U64)
    out = np.zeros_like(m)
    for i in range(m.shape[0]):
        mi = m[i]
        below = ((m & ~mi) == 0) & (m != mi)
        if below.any():
            out[i] = np.bitwise_or.reduce(m[below])
    return out


def strict_meets(members: np.ndarray, full: int) -> np.ndarray:
    """For each member, the AND of all members strictly above it (empty: ``full``)."""
    m = np.asarray(members, dtype=_U64)
    out = np.full(m.shape, _U64(full), dtype=_U64)
    for i in range(m.shape[0]):
        mi = m[i]
        above = ((mi & ~m) == 0) & (m != mi)
        if above.any():
            out[i] = np.bitwise_and.reduce(m[above]) & _U64(full)
    return out
