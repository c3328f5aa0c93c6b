# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bitset kernels, compiled.  Same signatures as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef enum:
    K_ANGEL = 0
    K_DEMON = 1
    K_ORTHO = 2


def angel_table(cols, int n):
    cdef const uint64_t[::1] c = np.ascontiguousarray(cols, dtype=np.uint64)
    out_arr = np.zeros(1 << n, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef int64_t lo, v
    cdef int y
    with nogil:
        for y in range(n):
            lo = (<int64_t>1) << y
            for v in range(lo):
                out[lo + v] = out[v] | c[y]
    return out_arr


def demon_table(cols, int n, uint64_t full):
    cdef const uint64_t[::1] c = np.ascontiguousarray(cols, dtype=np.uint64)
    out_arr = np.empty(1 << n, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef int64_t lo, v, top = ((<int64_t>1) << n) - 1
    cdef int y
    # out[top ^ W] = AND of ~cols[y] over y in W
    out[top] = full
    with nogil:
        for y in range(n):
            lo = (<int64_t>1) << y
            for v in range(lo):
                out[top ^ (lo + v)] = out[top ^ v] & ~c[y] & full
    return out_arr


def ortho_table(cols, int n, uint64_t full):
    cdef const uint64_t[::1] c = np.ascontiguousarray(cols, dtype=np.uint64)
    out_arr = np.empty(1 << n, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef int64_t lo, v
    cdef int y
    out[0] = full
    with nogil:
        for y in range(n):
            lo = (<int64_t>1) << y
            for v in range(lo):
                out[lo + v] = out[v] & c[y]
    return out_arr


def fused_composite(int inner_kind, inner_rows, int outer_kind, outer_cols, inputs, uint64_t full_out):
    cdef const uint64_t[::1] rows = np.ascontiguousarray(inner_rows, dtype=np.uint64)
    cdef const uint64_t[::1] cols = np.ascontiguousarray(outer_cols, dtype=np.uint64)
    cdef const uint64_t[::1] ins = np.ascontiguousarray(inputs, dtype=np.uint64)
    cdef Py_ssize_t m = ins.shape[0], nz = rows.shape[0]
    cdef Py_ssize_t block = 512, lo, hi, i, z  # inputs per block; keeps out[lo:hi] in L1
    out_arr = np.empty(m, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint64_t row, col, hit, init
    init = full_out if outer_kind == K_ORTHO else 0
    # rows outer, a block of inputs inner: the inner loops are branch-free
    # (hit is all ones for members) so the compiler can vectorize them
    with nogil:
        lo = 0
        while lo < m:
            hi = lo + block if lo + block < m else m
            for i in range(lo, hi):
                out[i] = init
            for z in range(nz):
                row = rows[z]
                col = cols[z]
                if inner_kind == K_ANGEL and outer_kind == K_ANGEL:
                    for i in range(lo, hi):
                        out[i] |= col & (<uint64_t>0 - <uint64_t>((ins[i] & row) != 0))
                elif inner_kind == K_DEMON and outer_kind == K_ANGEL:
                    for i in range(lo, hi):
                        out[i] |= col & (<uint64_t>0 - <uint64_t>((row & ~ins[i]) == 0))
                elif inner_kind == K_ANGEL and outer_kind == K_DEMON:
                    for i in range(lo, hi):
                        out[i] |= col & (<uint64_t>0 - <uint64_t>((ins[i] & row) == 0))
                elif inner_kind == K_ORTHO and outer_kind == K_ORTHO:
                    for i in range(lo, hi):
                        out[i] &= col | (<uint64_t>0 - <uint64_t>((ins[i] & ~row) != 0))
                else:
                    for i in range(lo, hi):
                        _generic(&out[i], ins[i], row, col, inner_kind, outer_kind)
            if outer_kind == K_DEMON:
                for i in range(lo, hi):
                    out[i] ^= full_out
            lo = hi
    return out_arr


cdef inline void _generic(uint64_t* acc, uint64_t u, uint64_t row, uint64_t col,
                          int inner_kind, int outer_kind) noexcept nogil:
    cdef bint member
    if inner_kind == K_ANGEL:
        member = (u & row) != 0
    elif inner_kind == K_DEMON:
        member = (row & ~u) == 0
    else:
        member = (u & ~row) == 0
    if outer_kind == K_ANGEL:
        if member:
            acc[0] |= col
    elif outer_kind == K_DEMON:
        if not member:
            acc[0] |= col
    elif member:
        acc[0] &= col


def monotone_violation(table, int n):
    cdef const uint64_t[::1] t = np.ascontiguousarray(table, dtype=np.uint64)
    cdef int64_t u, size = (<int64_t>1) << n
    cdef int x
    cdef int64_t bit
    for u in range(size):
        for x in range(n):
            bit = (<int64_t>1) << x
            if u & bit:
                continue
            if t[u] & ~t[u | bit]:
                return (u, x)
    return (-1, -1)


def strict_joins(members):
    cdef const uint64_t[::1] m = np.ascontiguousarray(members, dtype=np.uint64)
    cdef Py_ssize_t k = m.shape[0], i, j
    out_arr = np.zeros(k, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint64_t mi, acc
    with nogil:
        for i in range(k):
            mi = m[i]
            acc = 0
            for j in range(k):
                if m[j] != mi and (m[j] & ~mi) == 0:
                    acc = acc | m[j]
            out[i] = acc
    return out_arr


def strict_meets(members, uint64_t full):
    cdef const uint64_t[::1] m = np.ascontiguousarray(members, dtype=np.uint64)
    cdef Py_ssize_t k = m.shape[0], i, j
    out_arr = np.zeros(k, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint64_t mi, acc
    with nogil:
        for i in range(k):
            mi = m[i]
            acc = full
            for j in range(k):
                if m[j] != mi and (mi & ~m[j]) == 0:
                    acc = acc & m[j]
            out[i] = acc
    return out_arr
