"""Balance constants and the parameter suite: delta variants, gap, tau,
diffuseness, fractional matchings, and family trend tables.

Everything except tau is exact rational; tau is a float because entropy
takes a log, and it feeds reports only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .counting import (DEFAULT_ENUM_CAP, DEFAULT_IDEAL_CAP, ExtensionStats,
                       build_lattice, count_extensions, enumerate_extensions,
                       exact_stats, order_probability)
from .errors import BudgetExceeded, InvalidMatching, NotAChain
from .poset import Poset, bits, mask_of

DEFAULT_TAU_CAP = 5
DEFAULT_ORDER_BUDGET = 20000
_TAU_FULL_SWEEP_N = 10


@dataclass(frozen=True)
class BalanceReport:
    n: int
    delta: Fraction
    delta_pair: tuple[int, int] | None
    delta_x: tuple[Fraction, ...]
    delta_matrix: tuple[tuple[Fraction, ...], ...]
    gap: Fraction
    tau: float | None
    tau_witness: tuple[int, ...] | None
    tau_truncated: bool
    width: int
    height: int
    pi_max: int
    sigma2_max: Fraction
    win_max: Fraction | None

    def to_json_dict(self) -> dict:
        from .fileio import format_fraction as ff, format_float
        return {
            "n": self.n,
            "delta": ff(self.delta),
            "delta_pair": list(self.delta_pair) if self.delta_pair else None,
            "delta_x": [ff(v) for v in self.delta_x],
            "delta_matrix": [[ff(v) for v in row] for row in self.delta_matrix],
            "gap": ff(self.gap),
            "tau": None if self.tau is None else format_float(self.tau),
            "tau_witness": list(self.tau_witness) if self.tau_witness else None,
            "tau_truncated": self.tau_truncated,
            "width": self.width,
            "height": self.height,
            "pi_max": self.pi_max,
            "sigma2_max": ff(self.sigma2_max),
            "win_max": None if self.win_max is None else ff(self.win_max),
        }


def delta_matrix(stats: ExtensionStats) -> tuple[tuple[Fraction, ...], ...]:
    """delta_xy = min(Pr(x<y), Pr(y<x)); zero on the diagonal and for
    comparable pairs."""
    n = stats.n
    return tuple(tuple(min(stats.prec[x][y], stats.prec[y][x]) if x != y else Fraction(0)
                       for y in range(n)) for x in range(n))


def delta_of(stats: ExtensionStats) -> tuple[Fraction, tuple[int, int] | None]:
    """delta(P) with the lexicographically smallest witness pair."""
    best = Fraction(0)
    pair = None
    for x in range(stats.n):
        for y in range(x + 1, stats.n):
            d = min(stats.prec[x][y], stats.prec[y][x])
            if d > best:
                best, pair = d, (x, y)
    return best, pair


def gap_of(h: tuple[Fraction, ...], n: int) -> Fraction:
    """Largest spacing in sorted average heights, boundary terms included."""
    hs = sorted(h)
    terms = [hs[0]] + [b - a for a, b in zip(hs, hs[1:])] + [Fraction(n + 1) - hs[-1]]
    return max(terms)


def gap_chain(p: Poset, chain, stats: ExtensionStats | None = None,
              ideal_cap: int = DEFAULT_IDEAL_CAP) -> Fraction:
    """Gap of one chain: first height, consecutive differences, n+1 minus last."""
    c = list(chain)
    if not c:
        raise NotAChain("empty chain")
    for a, b in zip(c, c[1:]):
        if not p.lt(a, b):
            raise NotAChain(f"{a} < {b} does not hold")
    st = stats or exact_stats(p, ideal_cap, enum_cap=0)
    h = st.h
    terms = [h[c[0]]] + [h[b] - h[a] for a, b in zip(c, c[1:])] \
        + [Fraction(p.n + 1) - h[c[-1]]]
    return max(terms)


def ordering_distribution(p: Poset, subset_mask: int,
                          ideal_cap: int = DEFAULT_IDEAL_CAP,
                          e_p: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """Distribution of the induced relative order on a subset.

    Support is the set of extensions of the induced subposet; each
    probability comes from order_probability on the full poset.
    """
    elems = list(bits(subset_mask))
    sub = p.restrict_to(elems)
    if e_p is None:
        e_p = count_extensions(p, ideal_cap)
    out = {}
    for ext in enumerate_extensions(sub):
        seq = tuple(elems[i] for i in ext)
        if len(seq) == 1:
            out[seq] = Fraction(1)
            continue
        prob = order_probability(p, seq, ideal_cap, e_p=e_p)
        if prob:
            out[seq] = prob
    return out


def _entropy_bits(probs) -> float:
    # 0 log 0 = 0 by convention
    return -sum(float(q) * math.log2(float(q)) for q in probs if q > 0)


def tau_of(p: Poset, tau_cap: int = DEFAULT_TAU_CAP,
           ideal_cap: int = DEFAULT_IDEAL_CAP) -> tuple[float, tuple[int, ...] | None, bool]:
    """max over subsets X of H(sigma|_X)/|X|, brute force up to the cap.

    Full subset sweep only when n <= 10; larger posets are restricted to
    |X| <= 3 and flagged truncated (tau feeds reports, never exact checks).
    """
    n = p.n
    cap = min(tau_cap, n)
    truncated = cap < n
    if n > _TAU_FULL_SWEEP_N and cap > 3:
        cap = 3
        truncated = True
    best = 0.0
    witness = None
    if cap < 2:
        return 0.0, None, truncated
    e_p = count_extensions(p, ideal_cap)
    for size in range(2, cap + 1):
        for elems in combinations(range(n), size):
            dist = ordering_distribution(p, mask_of(elems), ideal_cap, e_p=e_p)
            value = _entropy_bits(dist.values()) / size
            if value > best + 1e-15:
                best = value
                witness = elems
    return best, witness, truncated


def balance_report(p: Poset, stats: ExtensionStats | None = None,
                   tau_cap: int = DEFAULT_TAU_CAP,
                   ideal_cap: int = DEFAULT_IDEAL_CAP,
                   enum_cap: int = DEFAULT_ENUM_CAP,
                   include_tau: bool = True) -> BalanceReport:
    st = stats or exact_stats(p, ideal_cap, enum_cap)
    n = p.n
    dmat = delta_matrix(st)
    delta, pair = delta_of(st)
    delta_x = tuple(max((dmat[x][y] for y in range(n) if y != x), default=Fraction(0))
                    for x in range(n))
    tau = witness = None
    truncated = False
    if include_tau:
        tau, witness, truncated = tau_of(p, tau_cap, ideal_cap)
    return BalanceReport(
        n=n,
        delta=delta,
        delta_pair=pair,
        delta_x=delta_x,
        delta_matrix=dmat,
        gap=gap_of(st.h, n) if n else Fraction(1),
        tau=tau,
        tau_witness=witness,
        tau_truncated=truncated,
        width=p.width(),
        height=p.height(),
        pi_max=max((p.pi(x) for x in range(n)), default=0),
        sigma2_max=max(st.sigma2, default=Fraction(0)),
        win_max=None if st.win is None else max(st.win, default=Fraction(0)),
    )


def delta_k(p: Poset, subset_mask: int, k: int,
            budget: int = DEFAULT_ORDER_BUDGET,
            ideal_cap: int = DEFAULT_IDEAL_CAP) -> tuple[Fraction, tuple[int, ...] | None]:
    """Largest delta with a k-subset of X hitting all k! orders with
    probability >= delta; returns the lexicographically smallest witness."""
    elems = list(bits(subset_mask))
    if k > len(elems):
        raise ValueError(f"k={k} exceeds |X|={len(elems)}")
    if k < 2:
        raise ValueError("k must be at least 2")
    evaluations = math.factorial(k) * math.comb(len(elems), k)
    if evaluations > budget:
        raise BudgetExceeded(
            f"{evaluations} order-probability evaluations exceed budget {budget}")
    e_p = count_extensions(p, ideal_cap)
    best = Fraction(-1)
    witness = None
    for combo in combinations(elems, k):
        worst = None
        for perm in permutations(combo):
            prob = order_probability(p, perm, ideal_cap, e_p=e_p)
            if worst is None or prob < worst:
                worst = prob
            if worst <= best:
                break  # this Y cannot beat the current best
        if worst > best:
            best = worst
            witness = combo
    return best, witness


def is_diffuse(p: Poset, x: int, chain, eps,
               ideal_cap: int = DEFAULT_IDEAL_CAP) -> tuple[bool, Fraction]:
    """Whether (x, C) is eps-diffuse, with the maximum cell probability.

    Cells: below y_1, between consecutive chain elements, above y_m.
    """
    c = list(chain)
    if not c:
        raise NotAChain("empty chain")
    for a, b in zip(c, c[1:]):
        if not p.lt(a, b):
            raise NotAChain(f"{a} < {b} does not hold")
    if x in c:
        raise ValueError("x must not lie on the chain")
    e_p = count_extensions(p, ideal_cap)
    cells = [order_probability(p, (x, c[0]), ideal_cap, e_p=e_p)]
    for a, b in zip(c, c[1:]):
        cells.append(order_probability(p, (a, x, b), ideal_cap, e_p=e_p))
    cells.append(order_probability(p, (c[-1], x), ideal_cap, e_p=e_p))
    worst = max(cells)
    return worst < eps, worst


def validate_fractional_matching(p: Poset, weights: dict) -> None:
    """weights maps antichain masks to rationals in [0, 1]; per-element
    totals must stay <= 1."""
    totals = [Fraction(0)] * p.n
    for mask, lam in weights.items():
        lam = Fraction(lam)
        if not 0 <= lam <= 1:
            raise InvalidMatching(f"weight {lam} outside [0, 1]")
        if not p.is_antichain_mask(mask):
            raise InvalidMatching(f"mask {mask:#x} is not an antichain")
        for x in bits(mask):
            totals[x] += lam
    for x, t in enumerate(totals):
        if t > 1:
            raise InvalidMatching(f"element {x} has total weight {t} > 1", element=x)


def evaluate_fractional_matching(p: Poset, weights: dict) -> Fraction:
    """Exact sum of lambda_A |A|^2 for a valid fractional matching."""
    validate_fractional_matching(p, weights)
    return sum((Fraction(lam) * mask.bit_count() ** 2 for mask, lam in weights.items()),
               Fraction(0))


def fractional_matching_report(p: Poset, weights: dict,
                               stats: ExtensionStats | None = None,
                               ideal_cap: int = DEFAULT_IDEAL_CAP,
                               enum_cap: int = DEFAULT_ENUM_CAP) -> dict:
    """The weighted sum plus the win-sum chain it lower-bounds, when win
    is available: sum win >= sum_A lambda_A sum_{x in A} win(x) >= value."""
    value = evaluate_fractional_matching(p, weights)
    out = {"value": value}
    st = stats or exact_stats(p, ideal_cap, enum_cap)
    if st.win is not None:
        weighted = sum((Fraction(lam) * sum((st.win[x] for x in bits(mask)), Fraction(0))
                        for mask, lam in weights.items()), Fraction(0))
        out["win_sum"] = sum(st.win, Fraction(0))
        out["weighted_win"] = weighted
    return out


def height_level_matching(p: Poset) -> dict:
    """Weight 1 on each level of the canonical antichain partition by
    longest-chain-below (the partition used for the bounded-height bound)."""
    levels: dict[int, int] = {}
    depth = [0] * p.n
    for x in sorted(range(p.n), key=lambda z: p.down[z].bit_count()):
        depth[x] = 1 + max((depth[y] for y in bits(p.cover_down[x])), default=0)
        levels[depth[x]] = levels.get(depth[x], 0) | (1 << x)
    return {mask: Fraction(1) for mask in levels.values()}


@dataclass(frozen=True)
class TrendRow:
    family: str
    param: int
    n: int | None
    delta: Fraction | None
    delta3: Fraction | None
    win_max: Fraction | None
    gap: Fraction | None
    width: int | None
    error: str | None = None


def trend_report(family: str, params, generator=None,
                 ideal_cap: int = DEFAULT_IDEAL_CAP,
                 enum_cap: int = DEFAULT_ENUM_CAP,
                 budget: int = DEFAULT_ORDER_BUDGET) -> list[TrendRow]:
    """Per-parameter rows of (n, delta, delta3, win(P), gap, width).

    No pass/fail: asymptotic statements are monitored, never asserted.
    Cap errors leave gaps in the row rather than aborting the table.
    """
    from .errors import LinextError
    if generator is None:
        from .families import FAMILY_GENERATORS
        generator = FAMILY_GENERATORS[family]
    rows = []
    for param in params:
        try:
            p = generator(param)
        except LinextError as exc:
            rows.append(TrendRow(family, param, None, None, None, None, None, None,
                                 error=type(exc).__name__))
            continue
        delta = d3 = win_max = gap = None
        width = p.width()
        error = None
        try:
            st = exact_stats(p, ideal_cap, enum_cap)
            delta, _ = delta_of(st)
            gap = gap_of(st.h, p.n)
            win_max = None if st.win is None else max(st.win, default=Fraction(0))
        except LinextError as exc:
            error = type(exc).__name__
        if p.n >= 3:
            try:
                d3, _ = delta_k(p, p.full_mask, 3, budget=budget, ideal_cap=ideal_cap)
            except LinextError as exc:
                error = error or type(exc).__name__
        rows.append(TrendRow(family, param, p.n, delta, d3, win_max, gap, width,
                             error=error))
    return rows
