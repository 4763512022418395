"""Finite posets on ground set 0..n-1 with bitmask relation rows.

Every subset of elements is a machine-word bitmask (hard cap n <= 64).
A ``Poset`` stores the strict order both ways (``up[x]`` = everything
above x, ``down[x]`` = everything below) plus the derived cover masks,
and is immutable: structural operations return new posets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import CycleError, InconsistentRelation, SizeCapExceeded

HARD_N_CAP = 64
ANTICHAIN_ENUM_CAP = 24
CANONICAL_CAP = 10


def bits(mask: int):
    """Yield the set bits of a mask in increasing order."""
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def mask_of(elements) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def _covers_from(up: tuple[int, ...], down: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(up)
    cover_up = []
    for x in range(n):
        m = 0
        for y in bits(up[x]):
            if up[x] & down[y] == 0:
                m |= 1 << y
        cover_up.append(m)
    cover_down = [0] * n
    for x in range(n):
        for y in bits(cover_up[x]):
            cover_down[y] |= 1 << x
    return tuple(cover_up), tuple(cover_down)


@dataclass(frozen=True)
class Poset:
    """Immutable strict partial order on elements 0..n-1.

    ``up`` and ``down`` are transitively closed; ``cover_up``/``cover_down``
    hold the Hasse diagram. Equality and hashing are on the labelled
    relation (use :meth:`canonical_form` for isomorphism).
    """

    n: int
    up: tuple[int, ...]
    down: tuple[int, ...]
    cover_up: tuple[int, ...]
    cover_down: tuple[int, ...]

    @classmethod
    def _from_up(cls, up) -> "Poset":
        """Build from closed up-masks; assumes they form a strict order."""
        n = len(up)
        up = tuple(up)
        down = [0] * n
        for x in range(n):
            for y in bits(up[x]):
                down[y] |= 1 << x
        cover_up, cover_down = _covers_from(up, tuple(down))
        return cls(n, up, tuple(down), cover_up, cover_down)

    # -- predicates and small accessors -------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def lt(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return x != y and (self.lt(x, y) or self.lt(y, x))

    def relations(self) -> list[tuple[int, int]]:
        """Cover relations as (low, high) pairs, the canonical wire form."""
        return [(x, y) for x in range(self.n) for y in bits(self.cover_up[x])]

    def all_relations(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in bits(self.up[x])]

    def _check_element(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise IndexError(f"element {x} out of range for n={self.n}")

    def is_chain(self) -> bool:
        return all(self.up[x].bit_count() + self.down[x].bit_count() == self.n - 1
                   for x in range(self.n))

    def is_antichain_mask(self, mask: int) -> bool:
        for x in bits(mask):
            if self.up[x] & mask:
                return False
        return True

    # -- structural operations ----------------------------------------------

    @classmethod
    def from_cover_relations(cls, n: int, pairs) -> "Poset":
        """Transitive closure of the given (low, high) pairs.

        Pairs need not be covers; covers are recomputed. Raises CycleError
        on a directed cycle (including self-loops), IndexError on an
        out-of-range element, SizeCapExceeded past the 64-element word cap.
        """
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n > HARD_N_CAP:
            raise SizeCapExceeded(f"n={n} exceeds the hard cap of {HARD_N_CAP}")
        up = [0] * n
        for lo, hi in pairs:
            if not (0 <= lo < n and 0 <= hi < n):
                raise IndexError(f"relation ({lo}, {hi}) out of range for n={n}")
            if lo == hi:
                raise CycleError(f"self-loop at element {lo}")
            up[lo] |= 1 << hi
        up = _close(up)
        for x in range(n):
            if up[x] >> x & 1:
                raise CycleError(f"directed cycle through element {x}")
        return cls._from_up(up)

    def dual(self) -> "Poset":
        return Poset(self.n, self.down, self.up, self.cover_down, self.cover_up)

    def delete(self, x: int) -> "Poset":
        """Induced subposet on the other elements, relabelled 0..n-2."""
        self._check_element(x)
        keep = [z for z in range(self.n) if z != x]
        return self.restrict_to(keep)

    def restrict_to(self, elements) -> "Poset":
        """Induced subposet on the given elements, relabelled in list order."""
        old = list(elements)
        index = {z: i for i, z in enumerate(old)}
        up = []
        for z in old:
            m = 0
            for y in bits(self.up[z]):
                if y in index:
                    m |= 1 << index[y]
            up.append(m)
        return Poset._from_up(up)

    def restrict_mask(self, mask: int) -> "Poset":
        return self.restrict_to(bits(mask))

    def add_relation(self, x: int, y: int) -> "Poset":
        """Smallest partial order containing self and x < y."""
        self._check_element(x)
        self._check_element(y)
        if x == y:
            raise ValueError("add_relation requires x != y")
        if self.lt(y, x):
            raise InconsistentRelation(f"{y} < {x} already holds")
        if self.lt(x, y):
            return self
        gain = self.up[y] | (1 << y)
        up = list(self.up)
        up[x] |= gain
        for z in bits(self.down[x]):
            up[z] |= gain
        return Poset._from_up(up)

    # -- order statistics -----------------------------------------------------

    def alpha(self, x: int) -> int:
        """|{y : y <= x}|, counting x itself."""
        self._check_element(x)
        return self.down[x].bit_count() + 1

    def beta(self, x: int) -> int:
        self._check_element(x)
        return self.up[x].bit_count() + 1

    def pi(self, x: int) -> int:
        """Number of elements incomparable to x."""
        self._check_element(x)
        return self.n - 1 - self.up[x].bit_count() - self.down[x].bit_count()

    def incomparables(self, x: int) -> int:
        self._check_element(x)
        return self.full_mask & ~(self.up[x] | self.down[x] | (1 << x))

    def min_set(self) -> int:
        return mask_of(x for x in range(self.n) if not self.down[x])

    def max_set(self) -> int:
        return mask_of(x for x in range(self.n) if not self.up[x])

    def height(self) -> int:
        """Maximum number of elements in a chain."""
        best = 0
        memo = [0] * self.n
        # |down| ascending is a topological order
        for x in sorted(range(self.n), key=lambda z: self.down[z].bit_count()):
            memo[x] = 1 + max((memo[y] for y in bits(self.cover_down[x])), default=0)
            best = max(best, memo[x])
        return best

    def ideal_closure(self, x_or_mask) -> int:
        mask = x_or_mask if isinstance(x_or_mask, int) else mask_of(x_or_mask)
        out = mask
        for x in bits(mask):
            out |= self.down[x]
        return out

    def filter_closure(self, x_or_mask) -> int:
        mask = x_or_mask if isinstance(x_or_mask, int) else mask_of(x_or_mask)
        out = mask
        for x in bits(mask):
            out |= self.up[x]
        return out

    def ideals(self) -> list[int]:
        """All order ideals as masks, ascending by (size, mask)."""
        seen = {0}
        frontier = [0]
        while frontier:
            ideal = frontier.pop()
            comp = self.full_mask & ~ideal
            for x in bits(comp):
                if self.down[x] & comp == 0:
                    nxt = ideal | (1 << x)
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
        return sorted(seen, key=lambda m: (m.bit_count(), m))

    def antichains(self, size_cap: int | None = None):
        """Yield every antichain (including the empty one) of size <= size_cap."""
        if self.n > ANTICHAIN_ENUM_CAP:
            raise SizeCapExceeded(f"antichain enumeration capped at n={ANTICHAIN_ENUM_CAP}")
        cap = self.n if size_cap is None else size_cap

        def rec(mask, start, size):
            yield mask
            if size == cap:
                return
            for x in range(start, self.n):
                if (self.up[x] | self.down[x]) & mask:
                    continue
                yield from rec(mask | (1 << x), x + 1, size + 1)

        yield from rec(0, 0, 0)

    def maximal_chains(self) -> list[tuple[int, ...]]:
        out = []

        def walk(x, path):
            path.append(x)
            nxt = self.cover_up[x]
            if not nxt:
                out.append(tuple(path))
            else:
                for y in bits(nxt):
                    walk(y, path)
            path.pop()

        for x in bits(self.min_set()):
            walk(x, [])
        if self.n == 0:
            out.append(())
        return out

    # -- width via Dilworth / bipartite matching ------------------------------

    def width(self) -> int:
        return self.n - len(self._max_matching())

    def max_antichain(self) -> int:
        """One maximum antichain, as a mask, via Koenig's theorem."""
        match_l, match_r = {}, {}
        for x, y in self._max_matching().items():
            match_l[x] = y
            match_r[y] = x
        # alternating reachability from unmatched left vertices
        z_left = set(x for x in range(self.n) if x not in match_l)
        z_right = set()
        frontier = list(z_left)
        while frontier:
            x = frontier.pop()
            for y in bits(self.up[x]):
                if y not in z_right:
                    z_right.add(y)
                    x2 = match_r.get(y)
                    if x2 is not None and x2 not in z_left:
                        z_left.add(x2)
                        frontier.append(x2)
        return mask_of(x for x in range(self.n) if x in z_left and x not in z_right)

    def min_chain_cover(self) -> list[list[int]]:
        """A partition into width(P) chains, from the comparability matching."""
        match_l = self._max_matching()
        starts = set(range(self.n)) - set(match_l.values())
        chains = []
        for x in sorted(starts):
            chain = [x]
            while chain[-1] in match_l:
                chain.append(match_l[chain[-1]])
            chains.append(chain)
        return chains

    def _max_matching(self) -> dict[int, int]:
        """Maximum matching x -> y over edges x < y of the bipartite split."""
        adj = [list(bits(self.up[x])) for x in range(self.n)]
        match_r = {}

        def augment(x, seen):
            for y in adj[x]:
                if y in seen:
                    continue
                seen.add(y)
                if y not in match_r or augment(match_r[y], seen):
                    match_r[y] = x
                    return True
            return False

        for x in range(self.n):
            augment(x, set())
        return {x: y for y, x in match_r.items()}

    # -- canonical form --------------------------------------------------------

    def canonical_form(self) -> bytes:
        """Isomorphism-invariant byte string.

        Lexicographically minimal row-major relation matrix over vertex
        permutations that respect an (alpha, beta, cover degree) colour
        refinement; identical strings iff the posets are isomorphic.
        """
        if self.n > CANONICAL_CAP:
            raise SizeCapExceeded(f"canonical_form capped at n={CANONICAL_CAP}")
        n = self.n
        if n == 0:
            return b"\x00"
        colors = self._refined_colors()
        by_color: dict[int, list[int]] = {}
        for x in range(n):
            by_color.setdefault(colors[x], []).append(x)
        position_color = sorted(colors)
        best: list[int] | None = None
        chosen = [0] * n
        used = [False] * n

        def emit():
            nonlocal best
            rows = []
            for i in range(n):
                r = 0
                ui = self.up[chosen[i]]
                for j in range(n):
                    r = (r << 1) | (ui >> chosen[j] & 1)
                rows.append(r)
            if best is None or rows < best:
                best = rows

        def rec(pos):
            if pos == n:
                emit()
                return
            tried = []
            for v in by_color[position_color[pos]]:
                if used[v]:
                    continue
                sig = (self.up[v], self.down[v])
                if sig in tried:
                    continue  # transposition twin of an already-tried candidate
                tried.append(sig)
                used[v] = True
                chosen[pos] = v
                rec(pos + 1)
                used[v] = False

        rec(0)
        assert best is not None
        acc = 0
        for r in best:
            acc = (acc << n) | r
        return bytes([n]) + acc.to_bytes((n * n + 7) // 8, "big")

    def _refined_colors(self) -> list[int]:
        n = self.n
        keys = [(self.alpha(x), self.beta(x),
                 self.cover_down[x].bit_count(), self.cover_up[x].bit_count())
                for x in range(n)]
        colors = _rank(keys)
        while True:
            keys = [(colors[x],
                     tuple(sorted(colors[y] for y in bits(self.cover_up[x]))),
                     tuple(sorted(colors[y] for y in bits(self.cover_down[x]))),
                     tuple(sorted(colors[y] for y in bits(self.incomparables(x)))))
                    for x in range(n)]
            nxt = _rank(keys)
            if nxt == colors:
                return colors
            colors = nxt

    def isomorphic(self, other: "Poset") -> bool:
        return self.n == other.n and self.canonical_form() == other.canonical_form()

    def automorphism_count(self) -> int:
        """|Aut(P)| by brute force over colour-respecting permutations."""
        if self.n > 8:
            raise SizeCapExceeded("automorphism_count capped at n=8")
        n = self.n
        colors = self._refined_colors()
        count = 0
        perm = [0] * n
        used = [False] * n

        def ok(pos):
            v = perm[pos]
            for j in range(pos + 1):
                w = perm[j]
                if self.lt(pos, j) != self.lt(v, w) or self.lt(j, pos) != self.lt(w, v):
                    return False
            return True

        def rec(pos):
            nonlocal count
            if pos == n:
                count += 1
                return
            for v in range(n):
                if used[v] or colors[v] != colors[pos]:
                    continue
                perm[pos] = v
                if ok(pos):
                    used[v] = True
                    rec(pos + 1)
                    used[v] = False

        rec(0)
        return count


def _rank(keys) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _close(up: list[int]) -> list[int]:
    """Bit-parallel Warshall transitive closure of up-masks."""
    n = len(up)
    up = list(up)
    for k in range(n):
        bk = 1 << k
        for x in range(n):
            if up[x] & bk:
                up[x] |= up[k]
    return up


def series_sum(p: Poset, q: Poset) -> Poset:
    """Disjoint union with every p-element below every q-element."""
    if p.n + q.n > HARD_N_CAP:
        raise SizeCapExceeded(f"series sum of sizes {p.n}+{q.n} exceeds {HARD_N_CAP}")
    shift = p.n
    qfull = ((1 << q.n) - 1) << shift
    up = [p.up[x] | qfull for x in range(p.n)]
    up += [q.up[x] << shift for x in range(q.n)]
    return Poset._from_up(up)


def parallel_sum(p: Poset, q: Poset) -> Poset:
    """Disjoint union with no relations between the parts."""
    if p.n + q.n > HARD_N_CAP:
        raise SizeCapExceeded(f"parallel sum of sizes {p.n}+{q.n} exceeds {HARD_N_CAP}")
    shift = p.n
    up = list(p.up) + [q.up[x] << shift for x in range(q.n)]
    return Poset._from_up(up)


def combinations_of_mask(mask: int, k: int):
    """All k-subsets of a mask, as masks, in lexicographic element order."""
    elems = list(bits(mask))
    for combo in combinations(elems, k):
        yield mask_of(combo)
