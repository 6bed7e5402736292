"""Exact modular arithmetic and rank kernels, with two interchangeable backends.

The default backend jit-compiles scalar elimination loops with numba; setting
FATPOINTS_BACKEND=numpy (or running without numba installed) selects a pure
numpy fallback that computes identical ranks. Supported moduli are the 61-bit
Mersenne prime (the default field; products are reduced by a split multiply
that never leaves uint64) and any prime below 2^32 (whose products fit a
uint64 directly).
"""

from __future__ import annotations

import os

import numpy as np

MERSENNE61 = (1 << 61) - 1
SMALL_PRIME_LIMIT = 1 << 32

_M61 = np.uint64(MERSENNE61)
_MASK31 = np.uint64((1 << 31) - 1)
_MASK30 = np.uint64((1 << 30) - 1)
_U2 = np.uint64(2)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_U61 = np.uint64(61)

_ENV_BACKEND = "FATPOINTS_BACKEND"


def supported_modulus(p: int) -> bool:
    return p == MERSENNE61 or 2 <= p < SMALL_PRIME_LIMIT


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 2^64."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def mul_mod(a, b, p: int):
    """Elementwise a*b mod p on uint64 arrays/scalars already reduced mod p."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if p != MERSENNE61:
        return (a * b) % np.uint64(p)
    au = a >> _U31
    ad = a & _MASK31
    bu = b >> _U31
    bd = b & _MASK31
    mid = ad * bu + au * bd
    x = au * bu * _U2 + (mid >> _U30) + ((mid & _MASK30) << _U31) + ad * bd
    x = (x >> _U61) + (x & _M61)
    return np.where(x >= _M61, x - _M61, x)


def sub_mod(a, b, p: int):
    """Elementwise a-b mod p on reduced uint64 inputs."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    pu = np.uint64(p)
    return np.where(a >= b, a - b, a + (pu - b))


def inv_mod(x: int, p: int) -> int:
    return pow(int(x), p - 2, p)


def _rank_numpy(A: np.ndarray, p: int) -> int:
    """Column-major Gaussian elimination with vectorized row updates."""
    A = A.copy()
    m, n = A.shape
    rank = 0
    for c in range(n):
        if rank == m:
            break
        nz = np.nonzero(A[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = np.uint64(inv_mod(A[rank, c], p))
        A[rank, c:] = mul_mod(A[rank, c:], inv, p)
        below = A[rank + 1 :, c]
        if below.size:
            upd = mul_mod(below[:, None], A[rank, c:][None, :], p)
            A[rank + 1 :, c:] = sub_mod(A[rank + 1 :, c:], upd, p)
        rank += 1
    return rank


_backend: str | None = None


def backend() -> str:
    """Active rank backend: "numba" or "numpy"."""
    global _backend
    if _backend is None:
        choice = os.environ.get(_ENV_BACKEND, "numba").strip().lower()
        if choice not in ("numba", "numpy"):
            raise ValueError(f"{_ENV_BACKEND} must be 'numba' or 'numpy', got {choice!r}")
        if choice == "numba":
            try:
                from . import _kernels_numba  # noqa: F401
            except ImportError:
                choice = "numpy"
        _backend = choice
    return _backend


def set_backend(name: str | None) -> None:
    """Force a backend ("numba"/"numpy") or reset to the environment default."""
    global _backend
    if name not in (None, "numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _backend = name


def rank_mod_p(matrix, p: int, backend_name: str | None = None) -> int:
    """Exact rank of an integer matrix over GF(p).

    Entries must already be reduced into [0, p). Deterministic: pivots are
    chosen first-nonzero in column order, and both backends return the same
    rank for the same input.
    """
    if not supported_modulus(p):
        raise ValueError(
            f"modulus {p} unsupported: need the 61-bit Mersenne prime or p < 2^32"
        )
    A = np.ascontiguousarray(matrix, dtype=np.uint64)
    if A.ndim != 2:
        raise ValueError(f"need a 2-d matrix, got shape {A.shape}")
    if A.size == 0:
        return 0
    which = backend_name or backend()
    if which == "numba":
        from . import _kernels_numba

        if p == MERSENNE61:
            return int(_kernels_numba.rank_mersenne61(A))
        return int(_kernels_numba.rank_small_prime(A, np.uint64(p)))
    return _rank_numpy(A, p)
