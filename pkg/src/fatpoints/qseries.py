"""Integer combinatorics and truncated q-series arithmetic.

Coefficient sequences are plain integer lists indexed by degree; everything
here is exact, pure and cheap. The two closed forms that matter are the
virtual series (1 - sum_i q^{r_i})/(1-q)^(n+1) under coefficientwise
truncation, and complete-intersection expansions prod_i (1-q^{r_i})/(1-q)^(n+1)
for at most n+1 points.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

DEFAULT_SERIES_CAP = 100_000


class CapacityError(RuntimeError):
    """Requested series length exceeds the configured safety cap."""


def binom(a: int, b: int) -> int:
    """Binomial coefficient with binom(a, b) = 0 whenever a < b (incl. a < 0)."""
    if b < 0:
        raise ValueError(f"lower index must be nonnegative, got {b}")
    if a < b:
        return 0
    return math.comb(a, b)


def trunc_int(x: int) -> int:
    """x if x > 0, else 0."""
    return x if x > 0 else 0


class TruncSeries:
    """Finitely supported integer series in q; degrees beyond coeffs are 0.

    Equality is coefficientwise, i.e. trailing zeros are ignored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        self.coeffs: tuple[int, ...] = tuple(int(c) for c in coeffs)

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError(f"degree must be nonnegative, got {k}")
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def stripped(self) -> tuple[int, ...]:
        """Coefficients with trailing zeros removed."""
        c = self.coeffs
        n = len(c)
        while n and c[n - 1] == 0:
            n -= 1
        return c[:n]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TruncSeries):
            return self.stripped() == other.stripped()
        if isinstance(other, (list, tuple)):
            return self == TruncSeries(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.stripped())

    def __repr__(self) -> str:
        return f"TruncSeries({list(self.coeffs)!r})"

    def to_list(self) -> list[int]:
        """Degree-ascending coefficient list (the JSON wire format)."""
        return list(self.coeffs)

    def latex(self, var: str = "q") -> str:
        """Descending-power LaTeX rendering, e.g. ``375 q^{173} + ... + 3 q^{1} + 1``."""
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            parts.append(str(c) if k == 0 else f"{c} {var}^{{{k}}}")
        return " + ".join(parts) if parts else "0"


def trunc_series(f: TruncSeries) -> TruncSeries:
    """Coefficientwise trunc_int."""
    return TruncSeries(trunc_int(c) for c in f.coeffs)


def monomial_count(k: int, n: int = 2) -> int:
    """Number of degree-k monomials in n+1 variables: binom(k+n, n)."""
    return binom(k + n, n)


def virtual_dim_c(r: Sequence[int], k: int, n: int = 2) -> int:
    """Virtual dimension c(r; k) = trunc(binom(k+n,n) - sum_i binom(k-r_i+2, 2)).

    The per-point summand is planar; for n != 2 only the degenerate case where
    every summand vanishes (all r_i > k) is meaningful.
    """
    if k < 0:
        return 0
    if n != 2 and any(ri <= k for ri in r):
        raise ValueError(f"per-point counts are planar; n={n} needs all r_i > k")
    total = binom(k + n, n)
    for ri in r:
        total -= binom(k - ri + 2, 2)
    return trunc_int(total)


def default_kmax(r: Sequence[int]) -> int:
    """Top useful degree bound: (sum of the three largest r_i) - 2.

    Dropping points only raises dimensions, and a 3-point series vanishes
    above degree r_a + r_b + r_c - 3, so this covers the support plus one
    trailing zero. Needs at least three entries.
    """
    if len(r) < 3:
        raise ValueError("default degree bound needs at least 3 entries; pass k_max")
    top3 = sorted(r)[-3:]
    return max(sum(top3) - 2, 0)


def virtual_series_C(
    r: Sequence[int],
    k_max: int | None = None,
    n: int = 2,
    cap: int = DEFAULT_SERIES_CAP,
) -> TruncSeries:
    """Virtual series C_r up to degree k_max: coefficient k is virtual_dim_c(r, k).

    Equivalently trunc of the expansion of (1 - sum_i q^{r_i})/(1-q)^(n+1).
    """
    r = tuple(r)
    if any(ri < 1 for ri in r):
        raise ValueError(f"all r_i must be >= 1, got {r}")
    if k_max is None:
        k_max = default_kmax(r)
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    if k_max > cap:
        raise CapacityError(f"k_max={k_max} exceeds cap={cap}")
    return TruncSeries(virtual_dim_c(r, k, n) for k in range(k_max + 1))


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def expand_over_geometric(
    numer: Sequence[int], denom_pow: int, k_max: int
) -> list[int]:
    """Coefficients of numer(q) / (1-q)^denom_pow up to degree k_max."""
    out = list(numer[: k_max + 1]) + [0] * (k_max + 1 - len(numer))
    for _ in range(denom_pow):
        for k in range(1, k_max + 1):
            out[k] += out[k - 1]
    return out


def complete_intersection_series(
    r: Sequence[int],
    k_max: int,
    n: int = 2,
    cap: int = DEFAULT_SERIES_CAP,
) -> TruncSeries:
    """Expansion of prod_i (1-q^{r_i}) / (1-q)^(n+1) for at most n+1 points.

    Generic powers of at most n+1 points form a regular sequence, so this is
    the actual Hilbert series of the quotient (infinite support for l <= n).
    """
    r = tuple(r)
    if len(r) > n + 1:
        raise ValueError(f"regular sequence needs l <= n+1, got l={len(r)}")
    if k_max > cap:
        raise CapacityError(f"k_max={k_max} exceeds cap={cap}")
    numer = [1]
    for ri in r:
        if ri <= 0:
            return TruncSeries([0] * (k_max + 1))
        factor = [0] * (ri + 1)
        factor[0], factor[ri] = 1, -1
        numer = _poly_mul(numer, factor)
    return TruncSeries(expand_over_geometric(numer, n + 1, k_max))
