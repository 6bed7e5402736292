"""Independent brute-force dimension oracle over a large prime field.

Dimensions are read off as cokernel sizes of interpolation matrices: either
the span of shifted point powers (dual route) or derivative conditions at the
points. Generic position is played by uniformly random coordinates mod p with
a min-over-seeds consensus protocol; structured configurations (points on a
line, conic or cubic) are available for the semicontinuity checks.

Matrices are deterministic functions of (kind, n, l, seed, p, r, k); columns
follow graded-lex order on exponent tuples, rows are point-major.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import (
    MERSENNE61,
    is_prime,
    mul_mod,
    rank_mod_p as _rank_kernel,
    supported_modulus,
)
from .qseries import monomial_count

KINDS = ("generic", "collinear", "conic", "cubic", "standard_plus_generic")
DEFAULT_SEEDS = (1, 2, 3)
_RESAMPLE_CAP = 64
_CHUNK = 512


class ResampleError(RuntimeError):
    """Structured sampling could not satisfy its constraints."""


class InvariantError(RuntimeError):
    """Two routes that must agree did not; indicates a bug, not bad input."""


@dataclass(frozen=True)
class PrimeField:
    """Prime modulus standing in for an algebraically closed field.

    Statements borrowed from characteristic zero need p > k for every degree
    k in play; that is checked where matrices are built.
    """

    p: int = MERSENNE61

    def __post_init__(self):
        if not supported_modulus(self.p):
            raise ValueError(
                f"p={self.p} unsupported: need the 61-bit Mersenne prime or p < 2^32"
            )
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")


@dataclass(frozen=True)
class PointConfiguration:
    n: int
    points: tuple[tuple[int, ...], ...]
    kind: str
    seed: int
    p: int


def _as_field(field: PrimeField | int | None) -> PrimeField:
    if field is None:
        return PrimeField()
    if isinstance(field, PrimeField):
        return field
    return PrimeField(int(field))


def sample_configuration(
    kind: str,
    n: int,
    l: int,
    seed: int,
    field: PrimeField | int | None = None,
) -> PointConfiguration:
    """Deterministic point configuration for (kind, n, l, seed, p).

    generic: all coordinates uniform in [1, p). collinear: (1, t_i, 0) with
    distinct t_i. conic: (1, t_i, t_i^2). cubic: (1, t_i, t_i^3) with
    sum t_i != 0. standard_plus_generic: coordinate points first, then
    generic ones.
    """
    fld = _as_field(field)
    p = fld.p
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose one of {KINDS}")
    if l < 1:
        raise ValueError(f"need at least one point, got l={l}")
    if kind in ("collinear", "conic", "cubic") and n != 2:
        raise ValueError(f"kind {kind!r} is planar; got n={n}")
    if l >= p:
        raise ResampleError(f"cannot place {l} distinct points over GF({p})")
    rng = np.random.default_rng(seed)

    def fresh(count: int) -> list[int]:
        return [int(x) for x in rng.integers(1, p, size=count, dtype=np.int64)]

    if kind == "generic":
        pts = [tuple(fresh(n + 1)) for _ in range(l)]
    elif kind == "standard_plus_generic":
        pts = [tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(min(l, n + 1))]
        pts += [tuple(fresh(n + 1)) for _ in range(l - len(pts))]
    else:
        for _ in range(_RESAMPLE_CAP):
            ts = fresh(l)
            if len(set(ts)) != l:
                continue
            if kind == "cubic" and sum(ts) % p == 0:
                continue
            break
        else:
            raise ResampleError(f"could not sample {kind} configuration after {_RESAMPLE_CAP} tries")
        if kind == "collinear":
            pts = [(1, t, 0) for t in ts]
        elif kind == "conic":
            pts = [(1, t, t * t % p) for t in ts]
        else:
            pts = [(1, t, pow(t, 3, p)) for t in ts]
    return PointConfiguration(n=n, points=tuple(pts), kind=kind, seed=seed, p=p)


@lru_cache(maxsize=None)
def _exponents(d: int, n: int) -> np.ndarray:
    """Degree-d exponent tuples in n+1 variables, graded-lex descending."""
    if n == 2:
        rows = [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]
    elif n == 1:
        rows = [(a, d - a) for a in range(d, -1, -1)]
    else:
        raise ValueError(f"matrices support n in (1, 2), got n={n}")
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), n + 1)
    arr.setflags(write=False)
    return arr


def _col_index(exps: np.ndarray, k: int, n: int) -> np.ndarray:
    """Column position of degree-k exponent tuples under graded-lex order."""
    if n == 2:
        s = k - exps[..., 0]
        return s * (s + 1) // 2 + (s - exps[..., 1])
    return k - exps[..., 0]


def _power_coeffs(point: Sequence[int], r: int, n: int, p: int) -> np.ndarray:
    """Coefficients of p_i^r over _exponents(r, n): multinomial * c^alpha mod p."""
    pw = [[1] * (r + 1) for _ in range(n + 1)]
    for j, c in enumerate(point):
        cj = c % p
        for e in range(1, r + 1):
            pw[j][e] = pw[j][e - 1] * cj % p
    vals = []
    for alpha in _exponents(r, n):
        coef = math.comb(r, int(alpha[0]))
        if n == 2:
            coef *= math.comb(r - int(alpha[0]), int(alpha[1]))
        v = coef % p
        for j in range(n + 1):
            v = v * pw[j][int(alpha[j])] % p
        vals.append(v)
    return np.array(vals, dtype=np.uint64)


def _check_degree(cfg: PointConfiguration, k: int) -> None:
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got k={k}")
    if cfg.p <= k:
        raise ValueError(f"need p > k for exactness, got p={cfg.p}, k={k}")


def dual_span_matrix(cfg: PointConfiguration, r: Sequence[int], k: int) -> np.ndarray:
    """Rows span sum_i S^{k-r_i} p_i^{r_i} inside degree k; h = cols - rank.

    One row per (point i, degree k-r_i monomial beta): the coefficients of
    beta * p_i^{r_i} in the degree-k basis. Points with r_i > k contribute no
    rows.
    """
    _check_degree(cfg, k)
    r = tuple(int(x) for x in r)
    if len(r) != len(cfg.points):
        raise ValueError(f"got {len(r)} powers for {len(cfg.points)} points")
    if any(ri < 1 for ri in r):
        raise ValueError(f"powers must be >= 1, got {r}")
    n, p = cfg.n, cfg.p
    cols = monomial_count(k, n)
    active = [(pt, ri) for pt, ri in zip(cfg.points, r) if ri <= k]
    rows = sum(monomial_count(k - ri, n) for _, ri in active)
    A = np.zeros((rows, cols), dtype=np.uint64)
    row0 = 0
    for pt, ri in active:
        coeffs = _power_coeffs(pt, ri, n, p)
        alpha = _exponents(ri, n)
        beta = _exponents(k - ri, n)
        nbeta = len(beta)
        for lo in range(0, nbeta, _CHUNK):
            blk = beta[lo : lo + _CHUNK]
            gamma = blk[:, None, :] + alpha[None, :, :]
            colix = _col_index(gamma, k, n)
            A[row0 + lo + np.arange(len(blk))[:, None], colix] = coeffs[None, :]
        row0 += nbeta
    return A


@lru_cache(maxsize=None)
def _factorial_tables(k: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    fact = [1] * (k + 1)
    for i in range(1, k + 1):
        fact[i] = fact[i - 1] * i % p
    inv = [1] * (k + 1)
    inv[k] = pow(fact[k], p - 2, p)
    for i in range(k, 0, -1):
        inv[i - 1] = inv[i] * i % p
    f = np.array(fact, dtype=np.uint64)
    g = np.array(inv, dtype=np.uint64)
    f.setflags(write=False)
    g.setflags(write=False)
    return f, g


def derivative_matrix(cfg: PointConfiguration, m: Sequence[int], k: int) -> np.ndarray:
    """Vanishing conditions of order m_i: rows evaluate partials at the points.

    One row per (point i, exponent alpha with |alpha| = m_i - 1); the entry at
    column gamma is (d^alpha x^gamma)(p_i) mod p. Needs p > k so the falling
    factorials are invertible. Zero multiplicities contribute no rows.
    """
    _check_degree(cfg, k)
    m = tuple(int(x) for x in m)
    if len(m) != len(cfg.points):
        raise ValueError(f"got {len(m)} multiplicities for {len(cfg.points)} points")
    if any(mi < 0 for mi in m):
        raise ValueError(f"multiplicities must be >= 0, got {m}")
    n, p = cfg.n, cfg.p
    cols = monomial_count(k, n)
    fact, invfact = _factorial_tables(k, p)
    active = [(pt, mi) for pt, mi in zip(cfg.points, m) if mi >= 1]
    rows = sum(monomial_count(mi - 1, n) for _, mi in active)
    A = np.zeros((rows, cols), dtype=np.uint64)
    row0 = 0
    for pt, mi in active:
        alphas = _exponents(mi - 1, n)
        deg_delta = k - (mi - 1)
        if deg_delta < 0:
            row0 += len(alphas)  # order exceeds the degree: all-zero rows
            continue
        delta = _exponents(deg_delta, n)
        base = np.ones(len(delta), dtype=np.uint64)
        for j, c in enumerate(pt):
            cj = c % p
            pw = [1] * (deg_delta + 1)
            for e in range(1, deg_delta + 1):
                pw[e] = pw[e - 1] * cj % p
            pw = np.array(pw, dtype=np.uint64)
            base = mul_mod(base, mul_mod(invfact[delta[:, j]], pw[delta[:, j]], p), p)
        for a_ix in range(len(alphas)):
            alpha = alphas[a_ix]
            gamma = delta + alpha[None, :]
            val = base
            for j in range(n + 1):
                val = mul_mod(val, fact[gamma[:, j]], p)
            A[row0 + a_ix, _col_index(gamma, k, n)] = val
        row0 += len(alphas)
    return A


def rank_mod_p(matrix, p: int = MERSENNE61) -> int:
    """Exact rank over GF(p); see _kernels.rank_mod_p for backend details."""
    return _rank_kernel(matrix, p)


@dataclass
class RankResult:
    value_h: int
    value_d: int
    rank: int
    rows: int
    cols: int
    method: str  # dual_span | derivative_conditions
    seeds_used: tuple[int, ...]
    consensus: bool
    per_seed: dict[int, int]
    prime: int
    kind: str
    n: int
    k: int
    r: tuple[int, ...] | None
    m: tuple[int, ...] | None
    cross_checked: bool = False

    def to_dict(self) -> dict:
        return {
            "h": self.value_h,
            "d": self.value_d,
            "rank": self.rank,
            "rows": self.rows,
            "cols": self.cols,
            "method": self.method,
            "seeds": list(self.seeds_used),
            "consensus": self.consensus,
            "per_seed": {str(s): v for s, v in self.per_seed.items()},
            "prime": self.prime,
            "kind": self.kind,
            "n": self.n,
            "k": self.k,
            "r": list(self.r) if self.r is not None else None,
            "m": list(self.m) if self.m is not None else None,
            "cross_checked": self.cross_checked,
        }


def oracle_h(
    r: Sequence[int] | None = None,
    m: Sequence[int] | None = None,
    *,
    k: int,
    n: int = 2,
    kind: str = "generic",
    seeds: Sequence[int] = DEFAULT_SEEDS,
    field: PrimeField | int | None = None,
    method: str = "dual",
) -> RankResult:
    """Rank-based estimate of the generic dimension, minimized over seeds.

    Exactly one of r (power remainders) and m (multiplicities) is given; they
    are dual via r_i = k - m_i + 1. method is "dual", "deriv" or "both";
    "both" additionally asserts that the two routes agree seed by seed. Rank
    is generically maximal, so the min of (cols - rank) over seeds estimates
    the generic value; consensus records whether all seeds agreed.
    """
    if (r is None) == (m is None):
        raise ValueError("give exactly one of r and m")
    if method not in ("dual", "deriv", "both"):
        raise ValueError(f"method must be dual, deriv or both, got {method!r}")
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got k={k}")
    seeds = tuple(int(s) for s in seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    fld = _as_field(field)

    if r is not None:
        r = tuple(int(x) for x in r)
        if any(ri < 1 for ri in r):
            raise ValueError(f"powers must be >= 1, got {r}")
        m_dual = tuple(max(k - ri + 1, 0) for ri in r)
        l = len(r)
    else:
        m = tuple(int(x) for x in m)
        if any(mi < 0 for mi in m):
            raise ValueError(f"multiplicities must be >= 0, got {m}")
        m_dual = m
        l = len(m)
        if method in ("dual", "both"):
            if any(mi > k for mi in m):
                raise ValueError(
                    f"m={m} has multiplicities exceeding k={k}; the dual route needs "
                    "r_i = k - m_i + 1 >= 1, use method='deriv'"
                )
            r = tuple(k - mi + 1 for mi in m)

    use_dual = method in ("dual", "both")
    use_deriv = method in ("deriv", "both")
    per_seed: dict[int, int] = {}
    shapes: dict[int, tuple[int, int, int]] = {}  # seed -> (rank, rows, cols)
    for seed in seeds:
        cfg = sample_configuration(kind, n, l, seed, fld)
        h_val = d_val = None
        if use_dual:
            A = dual_span_matrix(cfg, r, k)
            rk = _rank_kernel(A, fld.p)
            h_val = A.shape[1] - rk
            shapes[seed] = (rk, A.shape[0], A.shape[1])
        if use_deriv:
            B = derivative_matrix(cfg, m_dual, k)
            rk = _rank_kernel(B, fld.p)
            d_val = B.shape[1] - rk
            if not use_dual:
                shapes[seed] = (rk, B.shape[0], B.shape[1])
        if use_dual and use_deriv and h_val != d_val:
            raise InvariantError(
                f"dual/derivative disagreement at seed {seed}: h={h_val}, d={d_val} "
                f"(r={r}, m={m_dual}, k={k}, n={n}, kind={kind}, p={fld.p})"
            )
        per_seed[seed] = h_val if use_dual else d_val

    value = min(per_seed.values())
    best_seed = next(s for s in seeds if per_seed[s] == value)
    rk, rows, cols = shapes[best_seed]
    return RankResult(
        value_h=value,
        value_d=value,
        rank=rk,
        rows=rows,
        cols=cols,
        method="dual_span" if use_dual else "derivative_conditions",
        seeds_used=seeds,
        consensus=len(set(per_seed.values())) == 1,
        per_seed=per_seed,
        prime=fld.p,
        kind=kind,
        n=n,
        k=k,
        r=r if r is not None else None,
        m=m_dual,
        cross_checked=method == "both",
    )
