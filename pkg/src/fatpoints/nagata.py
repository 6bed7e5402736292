"""Generic-point vanishing dimensions h(r; k) in the plane for up to 9 points.

The core is the six-step rewrite loop: a 3-point closed form, drop rules for
trivial entries, the general transformation rule that trades (r, k) for a
strictly smaller degree, and a telescoping reduction step. Every rewrite is
recorded in a trace whose (k, l) measure strictly decreases, which is what
guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Sequence

from .qseries import (
    TruncSeries,
    binom,
    complete_intersection_series,
    default_kmax,
    trunc_int,
)

METHOD_ALGORITHM = "algorithm"
METHOD_P1 = "closed_form_p1"
METHOD_3PTS = "closed_form_3pts"
METHOD_CI = "closed_form_ci"
METHOD_ORACLE = "oracle"

# step_id 0 marks reuse of a previously computed state (memo hit)
MEMO_STEP = 0


@dataclass(frozen=True)
class TraceStep:
    step_id: int
    r: tuple[int, ...]
    k: int
    r_out: tuple[int, ...] | None = None
    k_out: int | None = None
    value: int | None = None

    def as_dict(self) -> dict:
        d: dict = {"step": self.step_id, "r": list(self.r), "k": self.k}
        if self.r_out is not None:
            d["r_out"] = list(self.r_out)
            d["k_out"] = self.k_out
        if self.value is not None:
            d["value"] = self.value
        return d


@dataclass
class AlgorithmTrace:
    """Ordered record of fired steps; consecutive records compose."""

    steps: list[TraceStep] = field(default_factory=list)

    def as_dicts(self) -> list[dict]:
        return [s.as_dict() for s in self.steps]

    def __iter__(self):
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class HValue:
    value: int
    trace: AlgorithmTrace
    method: str


def h_line(r: Sequence[int], k: int) -> int:
    """Points on a line: trunc(k + 1 - sum_i trunc(k - r_i + 1))."""
    if k < 0:
        return 0
    return trunc_int(k + 1 - sum(trunc_int(k - ri + 1) for ri in r))


def h_three_points(r: Sequence[int], k: int) -> int:
    """Coefficient of q^k in prod_{i=1..3} (1-q^{r_i})/(1-q).

    Counts lattice points (a, b, c) with a+b+c = k and 0 <= a < r_1 etc.;
    any nonpositive r_i makes the box empty.
    """
    r1, r2, r3 = r
    if k < 0 or r1 <= 0 or r2 <= 0 or r3 <= 0:
        return 0
    total = 0
    for mask in range(8):
        shift = k + 2
        sign = 1
        for bit, ri in zip((1, 2, 4), (r1, r2, r3)):
            if mask & bit:
                shift -= ri
                sign = -sign
        total += sign * binom(shift, 2)
    return total


def transform(r: Sequence[int], k: int, n: int = 2) -> tuple[tuple[int, ...], int]:
    """Degree-trading rewrite with h(r; k) = h(r', k').

    The first n+1 entries are held fixed; with s = r_1 + ... + r_{n+1} - n - 1,
    k' = s - k and r_i' = s + r_i - 2k for i > n+1. Entry order is preserved
    (callers sort so the fixed block holds the n+1 smallest). Applying the
    rule twice returns the original problem.
    """
    r = tuple(r)
    if len(r) <= n + 1:
        raise ValueError(f"need more than n+1 = {n + 1} entries, got {len(r)}")
    s = sum(r[: n + 1]) - n - 1
    k_new = s - k
    r_new = r[: n + 1] + tuple(s + ri - 2 * k for ri in r[n + 1 :])
    return r_new, k_new


_MEMO: dict[tuple[tuple[int, ...], int], int] = {}


def clear_memo() -> None:
    _MEMO.clear()


def _ci_coefficient(r: tuple[int, ...], k: int) -> int:
    """Degree-k coefficient of the 1- or 2-point complete intersection series."""
    if any(ri <= 0 for ri in r):
        return 0
    if k < 0:
        return 0
    return complete_intersection_series(r, k)[k]


def h_nagata(r: Sequence[int], k: int) -> HValue:
    """Dimension at l <= 9 generic plane points by the six-step rewrite loop.

    Steps, re-evaluated from the top after every rewrite (entries kept sorted
    ascending):
      1. l = 3: three-point closed form.
      2. r_1 <= 0: value 0.
      3. r_1 = 1: line closed form on the tail.
      4. r_l > k: drop r_l.
      5. 2k + 3 > r_1 + r_2 + r_3: apply the transformation rule.
      6. recurse on (r - 2, k - 3), adding 3k - sum_i (k - r_i + 1).

    Results are memoized on the sorted state; a reused state shows up in the
    trace as a terminal step_id 0 record.
    """
    r = tuple(int(x) for x in r)
    l = len(r)
    if not 1 <= l <= 9:
        raise ValueError(f"supported for 1 <= l <= 9 points, got l={l}; use the rank oracle")
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got k={k}")

    trace = AlgorithmTrace()
    if l <= 2:
        return HValue(_ci_coefficient(r, k), trace, METHOD_CI)
    method = METHOD_3PTS if l == 3 else METHOD_ALGORITHM

    cap = 10 * (k + l + sum(abs(ri) for ri in r)) + 10
    visited: list[tuple[tuple[tuple[int, ...], int], int]] = []  # (state, step-6 constant)
    cur = tuple(sorted(r))
    cur_k = k
    value_tail: int

    for _ in range(cap):
        state = (cur, cur_k)
        memo_hit = _MEMO.get(state)
        if memo_hit is not None and trace.steps:
            trace.steps.append(TraceStep(MEMO_STEP, cur, cur_k, value=memo_hit))
            value_tail = memo_hit
            break
        if len(cur) == 3:
            value_tail = h_three_points(cur, cur_k)
            trace.steps.append(TraceStep(1, cur, cur_k, value=value_tail))
            break
        if cur[0] <= 0:
            value_tail = 0
            trace.steps.append(TraceStep(2, cur, cur_k, value=0))
            break
        if cur[0] == 1:
            value_tail = h_line(cur[1:], cur_k)
            trace.steps.append(TraceStep(3, cur, cur_k, value=value_tail))
            break
        if cur[-1] > cur_k:
            nxt = cur[:-1]
            trace.steps.append(TraceStep(4, cur, cur_k, r_out=nxt, k_out=cur_k))
            visited.append(((cur, cur_k), 0))
            cur = nxt
            continue
        if 2 * cur_k + 3 > cur[0] + cur[1] + cur[2]:
            r_new, k_new = transform(cur, cur_k)
            nxt = tuple(sorted(r_new))
            trace.steps.append(TraceStep(5, cur, cur_k, r_out=nxt, k_out=k_new))
            visited.append(((cur, cur_k), 0))
            cur, cur_k = nxt, k_new
            continue
        const = 3 * cur_k - sum(cur_k - ri + 1 for ri in cur)
        nxt = tuple(ri - 2 for ri in cur)
        trace.steps.append(TraceStep(6, cur, cur_k, r_out=nxt, k_out=cur_k - 3))
        visited.append(((cur, cur_k), const))
        cur, cur_k = nxt, cur_k - 3
    else:
        raise RuntimeError(f"rewrite loop exceeded {cap} iterations for r={r}, k={k}")

    _MEMO[(cur, cur_k)] = value_tail
    total = value_tail
    for state, const in reversed(visited):
        total += const
        _MEMO[state] = total
    return HValue(total, trace, method)


def hilbert_series_H(r: Sequence[int], k_max: int | None = None) -> TruncSeries:
    """Series of h_nagata values; coefficients above the default bound are 0.

    For l <= 2 the quotient has infinite support, so an explicit k_max is
    required and the result is just a window.
    """
    r = tuple(r)
    if any(ri < 1 for ri in r):
        raise ValueError(f"all r_i must be >= 1, got {r}")
    if len(r) <= 2:
        if k_max is None:
            raise ValueError("l <= 2 series has infinite support; pass k_max")
        return complete_intersection_series(r, k_max)
    if k_max is None:
        k_max = default_kmax(r)
    return TruncSeries(h_nagata(r, k).value for k in range(k_max + 1))


def d_multiplicity(m: Sequence[int], k: int) -> int:
    """Dimension of degree-k curves with multiplicity m_i at generic points.

    Converts to remainders r_i = k - m_i + 1 at the given degree; zero
    multiplicities impose nothing and are dropped.
    """
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got k={k}")
    m = tuple(int(x) for x in m)
    if any(mi < 0 for mi in m):
        raise ValueError(f"multiplicities must be >= 0, got {m}")
    m = tuple(mi for mi in m if mi > 0)
    if not m:
        return binom(k + 2, 2)
    r = tuple(k - mi + 1 for mi in m)
    return h_nagata(r, k).value
