"""Exact counting and exact statistics of the uniform linear extension.

The workhorse is the lattice of order ideals: ``down[I]`` counts the
extensions of the subposet on ideal I, ``up[I]`` the extensions of the
complementary filter, so ``down[full] = up[empty] = e(P)``. Everything
exact is an arbitrary-precision int or Fraction; no floats enter here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EnumCapExceeded, IdealCapExceeded, InconsistentRelation
from .poset import Poset, bits

DEFAULT_IDEAL_CAP = 1 << 20
DEFAULT_ENUM_CAP = 10**7


@dataclass(frozen=True)
class IdealLattice:
    """All order ideals of a poset with both extension-count tables."""

    poset: Poset
    masks: tuple[int, ...]          # ascending by (popcount, mask)
    down: dict
    up: dict

    @property
    def e(self) -> int:
        return self.down[self.poset.full_mask]

    def __len__(self) -> int:
        return len(self.masks)

    def max_elements(self, ideal: int) -> list[int]:
        return [x for x in bits(ideal) if self.poset.up[x] & ideal == 0]


def build_lattice(p: Poset, ideal_cap: int = DEFAULT_IDEAL_CAP) -> IdealLattice:
    """Enumerate the ideal lattice and fill both count tables.

    Raises IdealCapExceeded as soon as more than ideal_cap ideals appear,
    signalling the caller to fall back to sampling.
    """
    full = p.full_mask
    down_masks = p.down
    up_masks = p.up
    seen = {0}
    frontier = [0]
    while frontier:
        ideal = frontier.pop()
        comp = full & ~ideal
        for x in bits(comp):
            if down_masks[x] & comp == 0:
                nxt = ideal | (1 << x)
                if nxt not in seen:
                    if len(seen) >= ideal_cap:
                        raise IdealCapExceeded(
                            f"more than {ideal_cap} ideals for n={p.n}")
                    seen.add(nxt)
                    frontier.append(nxt)
    order = sorted(seen, key=lambda m: (m.bit_count(), m))

    down = {0: 1}
    for ideal in order[1:]:
        total = 0
        for x in bits(ideal):
            if up_masks[x] & ideal == 0:
                total += down[ideal ^ (1 << x)]
        down[ideal] = total

    up = {full: 1}
    for ideal in reversed(order[:-1]) if len(order) > 1 else []:
        comp = full & ~ideal
        total = 0
        for x in bits(comp):
            if down_masks[x] & comp == 0:
                total += up[ideal | (1 << x)]
        up[ideal] = total
    if full == 0:
        up[0] = 1

    return IdealLattice(p, tuple(order), down, up)


def count_extensions(p: Poset, ideal_cap: int = DEFAULT_IDEAL_CAP) -> int:
    return build_lattice(p, ideal_cap).e


def rank_distribution(p: Poset, x: int, lattice: IdealLattice | None = None,
                      ideal_cap: int = DEFAULT_IDEAL_CAP) -> tuple[Fraction, ...]:
    """Pr(f(x)=k) for k = 1..n, each an exact rational."""
    p._check_element(x)
    lat = lattice or build_lattice(p, ideal_cap)
    e = lat.e
    counts = [0] * (p.n + 1)
    bx = 1 << x
    for ideal in lat.masks:
        if ideal & bx and p.up[x] & ideal == 0:
            counts[ideal.bit_count()] += lat.down[ideal ^ bx] * lat.up[ideal]
    return tuple(Fraction(counts[k], e) for k in range(1, p.n + 1))


def precedence_probability(p: Poset, x: int, y: int,
                           ideal_cap: int = DEFAULT_IDEAL_CAP) -> Fraction:
    """Pr(x precedes y), via counting the order with x < y added."""
    p._check_element(x)
    p._check_element(y)
    if x == y:
        raise ValueError("precedence_probability requires x != y")
    if p.lt(x, y):
        return Fraction(1)
    if p.lt(y, x):
        return Fraction(0)
    e = count_extensions(p, ideal_cap)
    e_xy = count_extensions(p.add_relation(x, y), ideal_cap)
    return Fraction(e_xy, e)


def order_probability(p: Poset, sequence, ideal_cap: int = DEFAULT_IDEAL_CAP,
                      e_p: int | None = None) -> Fraction:
    """Probability the given elements appear in exactly this relative order."""
    seq = list(sequence)
    if not 2 <= len(seq) <= p.n:
        raise ValueError("sequence length must be between 2 and n")
    if len(set(seq)) != len(seq):
        raise ValueError("sequence elements must be distinct")
    q = p
    try:
        for a, b in zip(seq, seq[1:]):
            q = q.add_relation(a, b)
    except InconsistentRelation:
        return Fraction(0)
    if e_p is None:
        e_p = count_extensions(p, ideal_cap)
    return Fraction(count_extensions(q, ideal_cap), e_p)


def enumerate_extensions(p: Poset, cap: int = DEFAULT_ENUM_CAP):
    """Yield every extension exactly once, lexicographic in the element sequence.

    Backtracking over currently-minimal elements; raises EnumCapExceeded
    if there are more than cap extensions.
    """
    n = p.n
    if n == 0:
        yield ()
        return
    down = p.down
    emitted = 0
    seq = [0] * n

    def rec(remaining, depth):
        nonlocal emitted
        if not remaining:
            emitted += 1
            if emitted > cap:
                raise EnumCapExceeded(f"more than {cap} extensions")
            yield tuple(seq)
            return
        for x in bits(remaining):
            if down[x] & remaining == 0:
                seq[depth] = x
                yield from rec(remaining ^ (1 << x), depth + 1)

    yield from rec(p.full_mask, 0)


@dataclass(frozen=True)
class ExtensionStats:
    """Exact statistics of the uniform extension of one poset.

    win and eabsdiff are enumeration-backed and None when e(P) exceeded
    the enumeration cap; everything else comes from the ideal lattice.
    """

    n: int
    e: int
    h: tuple[Fraction, ...]
    rank_dist: tuple[tuple[Fraction, ...], ...]
    prec: tuple[tuple[Fraction, ...], ...]
    sigma2: tuple[Fraction, ...]
    win: tuple[Fraction, ...] | None
    eabsdiff: tuple[tuple[Fraction, ...], ...] | None

    def to_json_dict(self) -> dict:
        from .fileio import format_fraction as ff
        return {
            "n": self.n,
            "e": self.e,
            "h": [ff(v) for v in self.h],
            "rank_dist": [[ff(v) for v in row] for row in self.rank_dist],
            "prec": [[ff(v) for v in row] for row in self.prec],
            "sigma2": [ff(v) for v in self.sigma2],
            "win": None if self.win is None else [ff(v) for v in self.win],
            "eabsdiff": None if self.eabsdiff is None else
                        [[ff(v) for v in row] for row in self.eabsdiff],
        }


def exact_stats(p: Poset, ideal_cap: int = DEFAULT_IDEAL_CAP,
                enum_cap: int = DEFAULT_ENUM_CAP,
                lattice: IdealLattice | None = None) -> ExtensionStats:
    """Full exact statistics; see ExtensionStats for which parts need enumeration."""
    lat = lattice or build_lattice(p, ideal_cap)
    n, e = p.n, lat.e
    full = p.full_mask

    rank_counts = [[0] * (n + 1) for _ in range(n)]
    before_counts = [[0] * n for _ in range(n)]
    for ideal in lat.masks:
        if not ideal:
            continue
        k = ideal.bit_count()
        up_i = lat.up[ideal]
        comp = full & ~ideal
        for x in bits(ideal):
            if p.up[x] & ideal:
                continue
            w = lat.down[ideal ^ (1 << x)] * up_i
            rank_counts[x][k] += w
            row = before_counts[x]
            for y in bits(comp):
                row[y] += w

    rank_dist = tuple(tuple(Fraction(rank_counts[x][k], e) for k in range(1, n + 1))
                      for x in range(n))
    h = tuple(sum((Fraction(k) * rank_dist[x][k - 1] for k in range(1, n + 1)),
                  Fraction(0)) for x in range(n))
    sigma2 = tuple(sum((Fraction(k * k) * rank_dist[x][k - 1] for k in range(1, n + 1)),
                       Fraction(0)) - h[x] * h[x] for x in range(n))
    prec = tuple(tuple(Fraction(before_counts[x][y], e) for y in range(n))
                 for x in range(n))

    win = eabsdiff = None
    if e <= enum_cap:
        win_tot = [0] * n
        abs_tot = [[0] * n for _ in range(n)]
        cover_down, cover_up = p.cover_down, p.cover_up
        pos = [0] * n
        for ext in enumerate_extensions(p, cap=enum_cap):
            for i, x in enumerate(ext):
                pos[x] = i + 1
            for x in range(n):
                q = max((pos[y] for y in bits(cover_down[x])), default=0)
                r = min((pos[y] for y in bits(cover_up[x])), default=n + 1)
                win_tot[x] += r - q
            for x in range(n):
                px = pos[x]
                for y in range(x + 1, n):
                    d = abs(px - pos[y])
                    abs_tot[x][y] += d
                    abs_tot[y][x] += d
        win = tuple(Fraction(win_tot[x], e) for x in range(n))
        eabsdiff = tuple(tuple(Fraction(abs_tot[x][y], e) for y in range(n))
                         for x in range(n))

    return ExtensionStats(n=n, e=e, h=h, rank_dist=rank_dist, prec=prec,
                          sigma2=sigma2, win=win, eabsdiff=eabsdiff)


def difference_distributions(p: Poset, enum_cap: int = DEFAULT_ENUM_CAP,
                             extensions=None) -> dict:
    """counts[(x, y)][k] = #extensions with f(y) - f(x) = k, for k >= 1.

    One enumeration pass; used for the Kahn-Saks difference sequence checks.
    """
    n = p.n
    counts = {(x, y): [0] * (n + 1) for x in range(n) for y in range(n) if x != y}
    pos = [0] * n
    exts = extensions if extensions is not None else enumerate_extensions(p, cap=enum_cap)
    for ext in exts:
        for i, x in enumerate(ext):
            pos[x] = i + 1
        for x in range(n):
            for y in range(x + 1, n):
                d = pos[y] - pos[x]
                if d > 0:
                    counts[(x, y)][d] += 1
                else:
                    counts[(y, x)][-d] += 1
    return counts
