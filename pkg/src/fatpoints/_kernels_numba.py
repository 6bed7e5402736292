"""Numba-compiled elimination kernels; see _kernels for the dispatch layer.

Both kernels run row-echelon insertion with an early exit at full column
rank, which is what makes the heavily overdetermined interpolation matrices
cheap. Stored echelon rows are canonical (entries in [0, p)) left-padded with
stale values strictly left of their pivot; those positions are never read.
"""

import numpy as np
from numba import njit

_M61 = np.uint64((1 << 61) - 1)
_TWO_M61 = np.uint64(2 * ((1 << 61) - 1))
_MASK31 = np.uint64((1 << 31) - 1)
_MASK30 = np.uint64((1 << 30) - 1)
_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_U61 = np.uint64(61)


@njit(inline="always")
def _mulmod61(a, b):
    # operands must be < 2^61; the recombination stays below 2^63
    au = a >> _U31
    ad = a & _MASK31
    bu = b >> _U31
    bd = b & _MASK31
    mid = ad * bu + au * bd
    x = au * bu * _U2 + (mid >> _U30) + ((mid & _MASK30) << _U31) + ad * bd
    x = (x >> _U61) + (x & _M61)
    if x >= _M61:
        x -= _M61
    return x


@njit(inline="always")
def _invmod61(v):
    # Fermat inverse v^(p-2) mod p
    acc = _U1
    e = _M61 - _U2
    base = v
    while e > _U0:
        if e & _U1:
            acc = _mulmod61(acc, base)
        base = _mulmod61(base, base)
        e >>= _U1
    return acc


@njit(cache=True)
def rank_mersenne61(A):
    """Rank over GF(2^61 - 1); A entries reduced, A is not modified."""
    m, n = A.shape
    pivrow = np.full(n, -1, np.int64)  # pivot column -> echelon row index
    E = np.zeros((min(m, n), n), np.uint64)
    rank = 0
    for i in range(m):
        row = A[i].copy()
        # working entries are kept lazily reduced (< 2^61 + 4) and
        # canonicalized only when scanned for a pivot
        lead = -1
        for j in range(n):
            v = row[j]
            if v >= _M61:
                v -= _M61
            if v == _U0:
                continue
            pr = pivrow[j]
            if pr < 0:
                lead = j
                row[j] = v
                break
            er = E[pr]
            fu = v >> _U31
            fd = v & _MASK31
            for t in range(j + 1, n):
                w = er[t]
                wu = w >> _U31
                wd = w & _MASK31
                mid = fd * wu + fu * wd
                x = fu * wu * _U2 + (mid >> _U30) + ((mid & _MASK30) << _U31) + fd * wd
                x = (x >> _U61) + (x & _M61)
                y = row[t] + (_TWO_M61 - x)
                row[t] = (y >> _U61) + (y & _M61)
        if lead >= 0:
            inv = _invmod61(row[lead])
            row[lead] = _U1
            for t in range(lead + 1, n):
                w = row[t]
                if w >= _M61:
                    w -= _M61
                row[t] = _mulmod61(w, inv)
            E[rank] = row
            pivrow[lead] = rank
            rank += 1
            if rank == n:
                break
    return rank


@njit(cache=True)
def rank_small_prime(A, p):
    """Rank over GF(p) for p < 2^32 (products fit uint64); A not modified."""
    m, n = A.shape
    pivrow = np.full(n, -1, np.int64)
    E = np.zeros((min(m, n), n), np.uint64)
    rank = 0
    for i in range(m):
        row = A[i].copy()
        lead = -1
        for j in range(n):
            v = row[j]
            if v == _U0:
                continue
            pr = pivrow[j]
            if pr < 0:
                lead = j
                break
            er = E[pr]
            row[j] = _U0
            for t in range(j + 1, n):
                x = (v * er[t]) % p
                y = row[t] + (p - x)
                if y >= p:
                    y -= p
                row[t] = y
        if lead >= 0:
            acc = _U1
            e = p - _U2
            base = row[lead]
            while e > _U0:
                if e & _U1:
                    acc = (acc * base) % p
                base = (base * base) % p
                e >>= _U1
            row[lead] = _U1
            for t in range(lead + 1, n):
                row[t] = (row[t] * acc) % p
            E[rank] = row
            pivrow[lead] = rank
            rank += 1
            if rank == n:
                break
    return rank
