"""Random extensions, polytope points, and Monte Carlo estimates.

Randomness comes from a counter-based SplitMix64 stream (documented in
SampleStream) so runs are reproducible from (seed, stream index) alone
and the sequence can be replicated in any language. Exact sampling walks
the ideal lattice top-down; the adjacent-transposition MCMC chain is for
demonstration only and backs no correctness check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counting import IdealLattice, build_lattice, DEFAULT_IDEAL_CAP
from .errors import DomainError
from .poset import Poset, bits

_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1
GEOM_TOL = 1e-12


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SampleStream:
    """Counter-based SplitMix64 pseudo-random stream.

    Word i (1-based) is mix64(key + i*GAMMA) with GAMMA = 0x9E3779B97F4A7C15
    and mix64 the standard SplitMix64 finalizer; key = mix64(mix64(seed) +
    stream*GAMMA). Uniform doubles take the top 53 bits. Stateless in the
    counter, so scalar and vectorized generation agree bit for bit.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed & _MASK64
        self.stream = stream & _MASK64
        self.key = _mix64((_mix64(self.seed) + self.stream * _GAMMA) & _MASK64)
        self.counter = 0

    def substream(self, index: int) -> "SampleStream":
        return SampleStream(self.seed, (self.stream + 1) * _GAMMA + index)

    def u64(self) -> int:
        self.counter += 1
        return _mix64((self.key + self.counter * _GAMMA) & _MASK64)

    def uniform(self) -> float:
        return (self.u64() >> 11) * 2.0**-53

    def randbelow(self, k: int) -> int:
        # modulo bias is < 2^-57 for k <= 64; fine for Monte Carlo use
        return self.u64() % k

    def u64_block(self, count: int) -> np.ndarray:
        idx = np.arange(self.counter + 1, self.counter + count + 1, dtype=np.uint64)
        self.counter += count
        z = np.uint64(self.key) + idx * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    def uniform_block(self, count: int) -> np.ndarray:
        return (self.u64_block(count) >> np.uint64(11)) * 2.0**-53


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def to_json_dict(self) -> dict:
        return {"mean": self.mean, "std_error": self.std_error,
                "samples": self.samples, "seed": self.seed}


@dataclass(frozen=True)
class PolytopePoint:
    coords: tuple[float, ...]


def _as_stream(seed_or_stream) -> SampleStream:
    if isinstance(seed_or_stream, SampleStream):
        return seed_or_stream
    return SampleStream(seed_or_stream)


class ExtensionSampler:
    """Exactly uniform extension draws via the ideal-lattice counts.

    Walking from the full ideal down, the element removed at ideal I is
    a maximal x with probability down(I - x)/down(I), which makes the
    resulting sequence exactly uniform over E(P).
    """

    def __init__(self, p: Poset, lattice: IdealLattice | None = None,
                 ideal_cap: int = DEFAULT_IDEAL_CAP):
        self.poset = p
        lat = lattice or build_lattice(p, ideal_cap)
        self.lattice = lat
        self._choices = {}
        for ideal in lat.masks:
            if not ideal:
                continue
            elems = lat.max_elements(ideal)
            total = lat.down[ideal]
            cum = []
            acc = 0
            for x in elems:
                acc += lat.down[ideal ^ (1 << x)]
                cum.append(acc / total)
            self._choices[ideal] = (elems, cum)

    def draw(self, stream: SampleStream) -> tuple[int, ...]:
        n = self.poset.n
        seq = [0] * n
        ideal = self.poset.full_mask
        for pos in range(n - 1, -1, -1):
            elems, cum = self._choices[ideal]
            if len(elems) == 1:
                x = elems[0]
            else:
                u = stream.uniform()
                i = 0
                while u >= cum[i]:
                    i += 1
                x = elems[i]
            seq[pos] = x
            ideal ^= 1 << x
        return tuple(seq)

    def draw_batch(self, count: int, stream: SampleStream) -> np.ndarray:
        """(count, n) array of extensions; one uniform per step per draw."""
        n = self.poset.n
        out = np.zeros((count, n), dtype=np.int64)
        if n == 0:
            return out
        index_of = {m: i for i, m in enumerate(self.lattice.masks)}
        width = max(len(elems) for elems, _ in self._choices.values())
        m = len(self.lattice.masks)
        elem_tab = np.zeros((m, width), dtype=np.int64)
        cum_tab = np.full((m, width), 2.0)
        next_tab = np.zeros((m, width), dtype=np.int64)
        for ideal, (elems, cum) in self._choices.items():
            i = index_of[ideal]
            for c, x in enumerate(elems):
                elem_tab[i, c] = x
                cum_tab[i, c] = cum[c]
                next_tab[i, c] = index_of[ideal ^ (1 << x)]
        state = np.full(count, index_of[self.poset.full_mask], dtype=np.int64)
        for pos in range(n - 1, -1, -1):
            u = stream.uniform_block(count)
            choice = (u[:, None] >= cum_tab[state]).sum(axis=1)
            out[:, pos] = elem_tab[state, choice]
            state = next_tab[state, choice]
        return out


def sample_extension_exact(p: Poset, lattice: IdealLattice, seed) -> tuple[int, ...]:
    return ExtensionSampler(p, lattice).draw(_as_stream(seed))


def lexicographic_extension(p: Poset) -> tuple[int, ...]:
    seq = []
    remaining = p.full_mask
    while remaining:
        x = next(z for z in bits(remaining) if p.down[z] & remaining == 0)
        seq.append(x)
        remaining ^= 1 << x
    return tuple(seq)


def sample_extension_mcmc(p: Poset, steps: int, seed) -> tuple[int, ...]:
    """Adjacent-transposition walk from the lexicographic extension.

    Each step picks a uniform adjacent pair and swaps it when the two
    elements are incomparable, else holds. No mixing-time guarantee.
    """
    stream = _as_stream(seed)
    seq = list(lexicographic_extension(p))
    n = p.n
    if n < 2:
        return tuple(seq)
    for _ in range(steps):
        i = stream.randbelow(n - 1)
        x, y = seq[i], seq[i + 1]
        if not p.lt(x, y):
            seq[i], seq[i + 1] = y, x
    return tuple(seq)


def sample_order_polytope_point(p: Poset, lattice: IdealLattice, seed) -> PolytopePoint:
    """Exactly uniform point of the order polytope.

    Draw an extension, then n sorted uniforms; the k-th smallest goes to
    the k-th element of the extension (the simplex decomposition).
    """
    stream = _as_stream(seed)
    sigma = ExtensionSampler(p, lattice).draw(stream)
    us = sorted(stream.uniform() for _ in range(p.n))
    coords = [0.0] * p.n
    for k, x in enumerate(sigma):
        coords[x] = us[k]
    return PolytopePoint(tuple(coords))


def _validate_order_point(p: Poset, coords) -> None:
    for x in range(p.n):
        if not -GEOM_TOL <= coords[x] <= 1.0 + GEOM_TOL:
            raise DomainError(f"coordinate {x} = {coords[x]} outside [0, 1]")
        for y in bits(p.cover_up[x]):
            if coords[x] > coords[y] + GEOM_TOL:
                raise DomainError(
                    f"order violated: coords[{x}]={coords[x]} > coords[{y}]={coords[y]}")


def transfer_map(p: Poset, point: PolytopePoint) -> PolytopePoint:
    """Stanley's volume-preserving map from the order to the chain polytope.

    F*(x) = F(x) - Q(x) with Q(x) the largest coordinate strictly below x
    (0 for minimal x). Input must satisfy the order constraints within 1e-12.
    """
    coords = point.coords
    _validate_order_point(p, coords)
    out = []
    for x in range(p.n):
        q = max((coords[y] for y in bits(p.cover_down[x])), default=0.0)
        out.append(coords[x] - q)
    return PolytopePoint(tuple(out))


def _mean_se(values) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def window_of(p: Poset, extension, x: int) -> int:
    """r(x) - q(x) in one extension (boundary conventions 0 and n+1)."""
    pos = {e: i + 1 for i, e in enumerate(extension)}
    q = max((pos[y] for y in bits(p.cover_down[x])), default=0)
    r = min((pos[y] for y in bits(p.cover_up[x])), default=p.n + 1)
    return r - q


def estimate_win(p: Poset, x: int, samples: int, seed,
                 ideal_cap: int = DEFAULT_IDEAL_CAP) -> Estimate:
    """Monte Carlo mean of r(x) - q(x) over exact-uniform extensions."""
    if samples < 100:
        raise ValueError("samples must be at least 100")
    p._check_element(x)
    stream = _as_stream(seed)
    sampler = ExtensionSampler(p, ideal_cap=ideal_cap)
    values = [float(window_of(p, sampler.draw(stream), x)) for _ in range(samples)]
    mean, se = _mean_se(values)
    return Estimate(mean, se, samples, stream.seed)


def estimate_event(p: Poset, predicate, samples: int, seed, on: str = "point",
                   ideal_cap: int = DEFAULT_IDEAL_CAP) -> Estimate:
    """Probability estimate of a predicate over extensions or polytope points."""
    if samples < 100:
        raise ValueError("samples must be at least 100")
    if on not in ("point", "extension"):
        raise ValueError("on must be 'point' or 'extension'")
    stream = _as_stream(seed)
    sampler = ExtensionSampler(p, ideal_cap=ideal_cap)
    hits = []
    n = p.n
    for _ in range(samples):
        sigma = sampler.draw(stream)
        if on == "extension":
            hits.append(1.0 if predicate(sigma) else 0.0)
        else:
            us = sorted(stream.uniform() for _ in range(n))
            coords = [0.0] * n
            for k, e in enumerate(sigma):
                coords[e] = us[k]
            hits.append(1.0 if predicate(PolytopePoint(tuple(coords))) else 0.0)
    mean, se = _mean_se(hits)
    return Estimate(mean, se, samples, stream.seed)


def sample_points_batch(p: Poset, count: int, stream: SampleStream,
                        lattice: IdealLattice | None = None,
                        ideal_cap: int = DEFAULT_IDEAL_CAP) -> np.ndarray:
    """(count, n) array of exactly uniform order-polytope points."""
    sampler = ExtensionSampler(p, lattice, ideal_cap=ideal_cap)
    sigma = sampler.draw_batch(count, stream)
    n = p.n
    us = np.sort(stream.uniform_block(count * n).reshape(count, n), axis=1)
    coords = np.zeros((count, n))
    np.put_along_axis(coords, sigma, us, axis=1)
    return coords


def transfer_batch(p: Poset, coords: np.ndarray) -> np.ndarray:
    out = coords.copy()
    for x in range(p.n):
        below = list(bits(p.cover_down[x]))
        if below:
            out[:, x] = coords[:, x] - coords[:, below].max(axis=1)
    return out


def estimate_var_f(p: Poset, x: int, samples: int, seed,
                   ideal_cap: int = DEFAULT_IDEAL_CAP) -> Estimate:
    """Sample variance of F(x) with its delta-method standard error."""
    if samples < 100:
        raise ValueError("samples must be at least 100")
    p._check_element(x)
    stream = _as_stream(seed)
    coords = sample_points_batch(p, samples, stream, ideal_cap=ideal_cap)[:, x]
    var = float(coords.var(ddof=1))
    centered = coords - coords.mean()
    m4 = float((centered**4).mean())
    se = math.sqrt(max(m4 - var * var, 0.0) / samples)
    return Estimate(var, se, samples, stream.seed)


def transferred_coordinate_means(p: Poset, samples: int, seed,
                                 ideal_cap: int = DEFAULT_IDEAL_CAP) -> list[Estimate]:
    """Per-element mean of the transferred coordinate (estimates Win(x)/2)."""
    stream = _as_stream(seed)
    pts = transfer_batch(p, sample_points_batch(p, samples, stream, ideal_cap=ideal_cap))
    out = []
    for x in range(p.n):
        col = pts[:, x]
        mean = float(col.mean())
        se = math.sqrt(float(col.var(ddof=1)) / samples)
        out.append(Estimate(mean, se, samples, stream.seed))
    return out
