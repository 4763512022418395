"""Generators: named constructions, random posets, and the isomorphism-
reduced catalog of all small posets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .counting import DEFAULT_IDEAL_CAP, count_extensions, precedence_probability
from .errors import IdealCapExceeded, NoFeasibleKL, SizeCapExceeded
from .poset import HARD_N_CAP, Poset, bits, mask_of, parallel_sum, series_sum
from .sampling import SampleStream, sample_extension_mcmc

CATALOG_CAP = 8
_catalog_cache: dict[int, tuple[Poset, ...]] = {}


def chain(k: int) -> Poset:
    if k < 1:
        raise ValueError("chain size must be at least 1")
    return Poset.from_cover_relations(k, [(i, i + 1) for i in range(k - 1)])


def antichain(k: int) -> Poset:
    if k < 1:
        raise ValueError("antichain size must be at least 1")
    return Poset.from_cover_relations(k, [])


def komlos_chains(t: int) -> Poset:
    """Parallel sum of unrelated chains of lengths 2, 4, ..., 2^t."""
    if t < 1:
        raise ValueError("t must be at least 1")
    n = 2 ** (t + 1) - 2
    if n > HARD_N_CAP:
        raise SizeCapExceeded(f"komlos_chains({t}) needs n={n} > {HARD_N_CAP}")
    p = chain(2)
    for i in range(2, t + 1):
        p = parallel_sum(p, chain(2 ** i))
    return p


def bit_example(t: int) -> Poset:
    """Chain y_1 < ... < y_m (m = 2^t) plus free x_1..x_t, each with the
    single cover x_i < y_{2^i}.

    The construction on which delta_3 drops below 1/6: elements 0..m-1
    are the chain bottom-up, element m-1+i is x_i.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    m = 2 ** t
    n = m + t
    if n > HARD_N_CAP:
        raise SizeCapExceeded(f"bit_example({t}) needs n={n} > {HARD_N_CAP}")
    pairs = [(i, i + 1) for i in range(m - 1)]
    for i in range(1, t + 1):
        pairs.append((m - 1 + i, 2 ** i - 1))
    return Poset.from_cover_relations(n, pairs)


@dataclass(frozen=True)
class GoodPair:
    """A poset with a distinguished antichain and the goodness evidence.

    goodness_verified is False when the pairwise delta check outran the
    exact caps; max_delta is then an MCMC estimate, never an assertion.
    """

    poset: Poset
    antichain_mask: int
    levels: int
    goodness_verified: bool
    estimated: bool
    max_delta: Fraction | float | None


def _pairwise_max_delta_exact(p: Poset, mask: int, ideal_cap: int) -> Fraction:
    worst = Fraction(0)
    elems = list(bits(mask))
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            pr = precedence_probability(p, x, y, ideal_cap)
            worst = max(worst, min(pr, 1 - pr))
    return worst


def _pairwise_max_delta_mcmc(p: Poset, mask: int, seed: int,
                             runs: int = 400) -> float:
    elems = list(bits(mask))
    steps = 30 * p.n * p.n
    stream = SampleStream(seed)
    wins = {(x, y): 0 for i, x in enumerate(elems) for y in elems[i + 1:]}
    for r in range(runs):
        ext = sample_extension_mcmc(p, steps, stream.substream(r))
        pos = {e: i for i, e in enumerate(ext)}
        for (x, y) in wins:
            if pos[x] < pos[y]:
                wins[(x, y)] += 1
    worst = 0.0
    for (x, y), w in wins.items():
        frac = w / runs
        worst = max(worst, min(frac, 1 - frac))
    return worst


def example_11_1(eps, levels: int, base: Poset | None = None,
                 base_antichain: int | None = None,
                 ideal_cap: int = DEFAULT_IDEAL_CAP, seed: int = 0) -> GoodPair:
    """Doubling construction: Q = (P + A') in series below / above parallel
    copies, J the union of the two antichain copies.

    One level maps (P, I) to (Q, J) = ([P (+) A'] + [A'' (+) P''], I' u I'')
    with A', A'' antichains of size ceil((1+eps)|P|), so |J| = 2|I| and
    |Q| = 2(|P| + ceil((1+eps)|P|)). Goodness (all pairwise deltas on the
    antichain <= eps) is re-verified exactly while the lattice fits, and
    estimated by MCMC with a flag beyond that.
    """
    eps = Fraction(eps)
    if base is None:
        base = chain(1)
        base_antichain = 1
    if base_antichain is None:
        raise ValueError("base_antichain required with an explicit base")
    if not base.is_antichain_mask(base_antichain):
        raise ValueError("base_antichain is not an antichain of the base")
    p, imask = base, base_antichain
    verified, estimated = True, False
    max_delta: Fraction | float | None = None
    if imask.bit_count() >= 2:
        try:
            max_delta = _pairwise_max_delta_exact(p, imask, ideal_cap)
            if max_delta > eps:
                raise ValueError(f"base pair is not good at eps={eps}")
        except IdealCapExceeded:
            verified = False
            estimated = True
            max_delta = _pairwise_max_delta_mcmc(p, imask, seed)
    for level in range(levels):
        m = p.n
        a = math.ceil((1 + eps) * m)
        if 2 * (m + a) > HARD_N_CAP:
            raise SizeCapExceeded(
                f"level {level + 1} needs n={2 * (m + a)} > {HARD_N_CAP}")
        left = series_sum(p, antichain(a))
        right = series_sum(antichain(a), p)
        q = parallel_sum(left, right)
        # left block keeps p's labels; right block's p-copy sits after m+2a
        jmask = imask | (imask << (m + 2 * a))
        p, imask = q, jmask
        try:
            max_delta = _pairwise_max_delta_exact(p, imask, ideal_cap)
            verified = verified and True
            if max_delta > eps:
                raise ValueError(
                    f"construction not good at level {level + 1} (delta={max_delta})")
        except IdealCapExceeded:
            verified = False
            estimated = True
            max_delta = _pairwise_max_delta_mcmc(p, imask, seed + level + 1)
    return GoodPair(p, imask, levels, verified, estimated, max_delta)


def example_11_2(r: int, a: int, k: int, l: int) -> tuple[Poset, int]:
    """S = C_k (+) (C_r + C_a) (+) C_l with x the bottom of the r-chain.

    Element indices: 0..k-1 the bottom chain, k..k+r-1 the r-chain
    (x = k), then the a-chain, then the top chain.
    """
    for name, v in (("r", r), ("a", a), ("k", k), ("l", l)):
        if v < 1:
            raise ValueError(f"{name} must be at least 1")
    n = k + r + a + l
    if n > HARD_N_CAP:
        raise SizeCapExceeded(f"example_11_2 needs n={n} > {HARD_N_CAP}")
    s = series_sum(series_sum(chain(k), parallel_sum(chain(r), chain(a))), chain(l))
    return s, k


def h_formula_11_2(r: int, a: int, k: int) -> Fraction:
    """Closed form h_S(x) = k + (r+a+1)/(r+1) for the construction above."""
    return Fraction(k) + Fraction(r + a + 1, r + 1)


def solve_11_2(r: int, a: int) -> tuple[int, int]:
    """Integer (k, l) with k, l < 3a minimizing |H_S(x) - 1/2|, by the
    closed form; lexicographically smallest on ties."""
    if r < 1 or a < 1:
        raise ValueError("r and a must be at least 1")
    best = None
    arg = None
    for k in range(1, 3 * a):
        hx = h_formula_11_2(r, a, k)
        for l in range(1, 3 * a):
            m = k + r + a + l
            err = abs(hx / (m + 1) - Fraction(1, 2))
            if best is None or err < best:
                best, arg = err, (k, l)
    if arg is None:
        raise NoFeasibleKL(f"no (k, l) with 1 <= k, l < {3 * a}")
    return arg


def default_delta_11_2(r: int, a: int) -> float:
    """Geometric mean of the window bounds 1/sqrt(a) and 1/r."""
    return math.sqrt((1 / math.sqrt(a)) * (1 / r))


def random_poset(n: int, p: float, seed) -> Poset:
    """Random DAG on a uniformly shuffled vertex order, independent edges
    with probability p, transitively closed. Deterministic per seed."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if n > HARD_N_CAP:
        raise SizeCapExceeded(f"n={n} exceeds {HARD_N_CAP}")
    stream = seed if isinstance(seed, SampleStream) else SampleStream(seed)
    order = list(range(n))
    for i in range(n - 1, 0, -1):  # Fisher-Yates
        j = stream.randbelow(i + 1)
        order[i], order[j] = order[j], order[i]
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if stream.uniform() < p:
                pairs.append((order[i], order[j]))
    return Poset.from_cover_relations(n, pairs)


def catalog(n: int) -> tuple[Poset, ...]:
    """One poset per isomorphism class of size n, in canonical-form order.

    Level n comes from level n-1 by adding a new maximal element above
    each order ideal, then deduplicating by canonical form.
    """
    if n > CATALOG_CAP:
        raise SizeCapExceeded(f"catalog capped at n={CATALOG_CAP}")
    if n < 1:
        raise ValueError("n must be at least 1")
    if n in _catalog_cache:
        return _catalog_cache[n]
    if n == 1:
        result = (chain(1),)
    else:
        seen: dict[bytes, Poset] = {}
        for p in catalog(n - 1):
            for ideal in p.ideals():
                up = [p.up[x] | ((1 << (n - 1)) if (ideal >> x) & 1 else 0)
                      for x in range(n - 1)]
                up.append(0)
                cand = Poset._from_up(up)
                key = cand.canonical_form()
                if key not in seen:
                    seen[key] = cand
        result = tuple(seen[k] for k in sorted(seen))
    _catalog_cache[n] = result
    return result


def catalog_up_to(n: int):
    for size in range(1, n + 1):
        yield from catalog(size)


FAMILY_GENERATORS = {
    "chain": chain,
    "antichain": antichain,
    "komlos": komlos_chains,
    "bit": bit_example,
}
