"""Exact tensor decompositions of irreducible SL2 modules via weight characters.

A character is a dict mapping integer weights to multiplicities; a
decomposition table maps irreducible dimensions p (the module L^p) to
multiplicities. Decomposition always goes through character convolution and
top-weight peeling; the closed-form multiplicity statements are kept as
independent cross-checks against it, not the other way around.
"""

from __future__ import annotations

from collections.abc import Sequence

from .nagata import h_line, h_three_points
from .qseries import TruncSeries

SL2Character = dict[int, int]
DecompositionTable = dict[int, int]


def char_irrep(p: int) -> SL2Character:
    """Character of L^p: multiplicity 1 at weights p-1, p-3, ..., -(p-1).

    L^0 is the zero module (empty character).
    """
    if p < 0:
        raise ValueError(f"dimension must be >= 0, got {p}")
    return {p - 1 - 2 * j: 1 for j in range(p)}


def char_tensor(a: SL2Character, b: SL2Character) -> SL2Character:
    """Additive convolution of weight multiplicities."""
    out: SL2Character = {}
    for la, ma in a.items():
        for lb, mb in b.items():
            lam = la + lb
            out[lam] = out.get(lam, 0) + ma * mb
    return out


def char_dim(c: SL2Character) -> int:
    return sum(c.values())


def table_character(table: DecompositionTable) -> SL2Character:
    """Rebuild the weight character from a decomposition table."""
    out: SL2Character = {}
    for p, mult in table.items():
        for lam in char_irrep(p):
            out[lam] = out.get(lam, 0) + mult
    return {lam: m for lam, m in out.items() if m}


def table_dim(table: DecompositionTable) -> int:
    return sum(p * mult for p, mult in table.items())


def decompose(factors: Sequence[int]) -> DecompositionTable:
    """Decompose L^{r_1} x ... x L^{r_m} into irreducibles.

    Convolves the factor characters and peels from the top weight:
    mult(L^p) = dim[weight p-1] - dim[weight p+1].
    """
    if len(factors) < 1:
        raise ValueError("need at least one tensor factor")
    if any(r < 0 for r in factors):
        raise ValueError(f"factors must be >= 0, got {tuple(factors)}")
    if any(r == 0 for r in factors):
        return {}
    char = char_irrep(factors[0])
    for r in factors[1:]:
        char = char_tensor(char, char_irrep(r))
    top = max(char)
    table: DecompositionTable = {}
    for lam in range(top, -1, -2):
        mult = char.get(lam, 0) - char.get(lam + 2, 0)
        if mult:
            table[lam + 1] = mult
    return table


def triple_lemma_table(r: int) -> DecompositionTable:
    """Closed-form table for L^r x L^r x L^r.

    Direct sum of (j+1) L^{3(r-1)-2j+1} for j = 0..r-1 and (r-2j) L^{r-2j}
    for j = 1..floor((r-1)/2).
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    table: DecompositionTable = {}
    for j in range(r):
        p = 3 * (r - 1) - 2 * j + 1
        table[p] = table.get(p, 0) + j + 1
    for j in range(1, (r - 1) // 2 + 1):
        p = r - 2 * j
        table[p] = table.get(p, 0) + r - 2 * j
    return table


def hom_mult_triple(r1: int, r2: int, r3: int, l: int) -> int:
    """Multiplicity of L^{l+1} in L^{r1} x L^{r2} x L^{r3}.

    Zero unless k = (r1+r2+r3-3-l)/2 is a nonnegative integer (equivalently l
    has the parity of the triple product's weights); then the line closed
    form at degree k.
    """
    if min(r1, r2, r3) < 1:
        raise ValueError(f"factor dimensions must be >= 1, got {(r1, r2, r3)}")
    if l < 0:
        return 0
    s = r1 + r2 + r3 - 3 - l
    if s < 0 or s % 2:
        return 0
    return h_line((r1, r2, r3), s // 2)


def quotient_weight_dim(p: int, r: int, lam: int) -> int:
    """Dimension (0 or 1) of (L^p / e^r L^p) at weight lam.

    The image e^r L^p occupies exactly the weights -p+1+2r <= lam <= p-1, so
    the quotient keeps the weights of L^p below -p+1+2r.
    """
    if p < 0 or r < 0:
        raise ValueError(f"need p >= 0 and r >= 0, got p={p}, r={r}")
    if abs(lam) > p - 1 or (lam - (p - 1)) % 2:
        return 0
    return 1 if lam < -p + 1 + 2 * r else 0


def _degree_weight(k: int, head: Sequence[int]) -> int:
    # weight of the degree-k graded piece of L^{r_1} x ... x L^{r_{n+1}}
    return 2 * k - sum(head) + len(head)


def bridge_series(r: Sequence[int]) -> TruncSeries:
    """Hilbert series of n+2 generic points from the weight-space picture.

    For r = (r_1, ..., r_{n+1}, r_{n+2}) the coefficient at degree k is the
    dimension of (M / e^{r_{n+2}} M) at weight 2k - (r_1+...+r_{n+1}) + n+1,
    where M = L^{r_1} x ... x L^{r_{n+1}}.
    """
    r = tuple(r)
    if len(r) < 3:
        raise ValueError(f"need n+2 >= 3 entries, got {len(r)}")
    if any(ri < 1 for ri in r):
        raise ValueError(f"all r_i must be >= 1, got {r}")
    head, e_pow = r[:-1], r[-1]
    table = decompose(head)
    top_k = sum(head) - len(head)  # degree where the top weight sits
    coeffs = []
    for k in range(top_k + 1):
        lam = _degree_weight(k, head)
        coeffs.append(
            sum(mult * quotient_weight_dim(p, e_pow, lam) for p, mult in table.items())
        )
    return TruncSeries(coeffs)


def fourfold_h(r: Sequence[int], k: int) -> int:
    """Dimension for four plane points by the three-branch weight analysis.

    With lam = -(r1+r2+r3) + 3 + 2k: if r4 <= lam the transformation rule
    gives 0; if r4 > k the fourth point is invisible and the three-point
    value remains; otherwise subtract from it the multiplicities of L^p for
    p > 2 r4 - lam. The multiplicity of L^{lam+1+2j} is the line value at
    degree r1+r2+r3-3-k-j (the reindexed form that matches the weight-space
    series identically).
    """
    r = tuple(sorted(r))
    if len(r) != 4:
        raise ValueError(f"need exactly 4 entries, got {len(r)}")
    if any(ri < 1 for ri in r):
        raise ValueError(f"all r_i must be >= 1, got {r}")
    if k < 0:
        return 0
    r1, r2, r3, r4 = r
    lam = -(r1 + r2 + r3) + 3 + 2 * k
    if r4 > k:
        return h_three_points((r1, r2, r3), k)
    if r4 <= lam:
        return 0
    total = h_three_points((r1, r2, r3), k)
    top = r1 + r2 + r3 - 3  # highest weight of the triple product
    j = r4 - lam
    while lam + 2 * j <= top:
        total -= hom_mult_triple(r1, r2, r3, lam + 2 * j)
        j += 1
    return total
