"""Theorem and conjecture checkers plus the catalog sweep.

Two-tier severity: theorem-tier checks are proved statements, so a fail
means an implementation bug and flips the CI exit code; conjecture-tier
failures are logged as potential discoveries; report-tier checks carry
no pass/fail at all (they track O(.) ratios at finite n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .balance import delta_of, gap_of, ordering_distribution, _entropy_bits
from .counting import (DEFAULT_ENUM_CAP, DEFAULT_IDEAL_CAP, ExtensionStats,
                       build_lattice, count_extensions, difference_distributions,
                       enumerate_extensions, exact_stats)
from .errors import BudgetExceeded, InconsistentRelation, LinextError, StatUnavailable
from .geometry import (INV_E_LOWER, GeometryReport, check_corner_bounds,
                       check_win_variance_inequalities, conjecture_winvar_ratio,
                       geometry_report)
from .poset import Poset, bits
from .report import CONJECTURE, FAIL, PASS, REPORT, REPORT_ONLY, THEOREM, CheckReport

DEFAULT_FISHBURN_PAIR_BUDGET = 4096  # (2^6)^2, i.e. n <= 6 in the typical case
GAPTAU_THRESHOLD = 2  # finite stand-in for the conjecture's "gap >> 1"
ONE_THIRD = Fraction(1, 3)


class SweepContext:
    """Per-poset cache shared by the checks of one sweep item."""

    def __init__(self, p: Poset, ideal_cap: int = DEFAULT_IDEAL_CAP,
                 enum_cap: int = DEFAULT_ENUM_CAP):
        self.poset = p
        self.ideal_cap = ideal_cap
        self.enum_cap = enum_cap
        self._lattice = None
        self._stats = None
        self._extensions = None
        self._diffs = None
        self._geometry = None
        self._deleted_h = {}
        self._sub_e = {}

    @property
    def lattice(self):
        if self._lattice is None:
            self._lattice = build_lattice(self.poset, self.ideal_cap)
        return self._lattice

    @property
    def stats(self) -> ExtensionStats:
        if self._stats is None:
            self._stats = exact_stats(self.poset, self.ideal_cap, self.enum_cap,
                                      lattice=self.lattice)
        return self._stats

    @property
    def extensions(self):
        if self._extensions is None:
            self._extensions = list(enumerate_extensions(self.poset, self.enum_cap))
        return self._extensions

    @property
    def diffs(self):
        if self._diffs is None:
            self._diffs = difference_distributions(self.poset,
                                                   extensions=self.extensions)
        return self._diffs

    @property
    def geometry(self) -> GeometryReport:
        if self._geometry is None:
            self._geometry = geometry_report(self.poset, self.stats,
                                             self.ideal_cap, self.enum_cap)
        return self._geometry

    def deleted_h(self, x: int) -> tuple[Fraction, ...]:
        """Average heights of P - x, indexed by the original labels."""
        if x not in self._deleted_h:
            sub = self.poset.delete(x)
            st = exact_stats(sub, self.ideal_cap, enum_cap=0)
            h = {}
            for old in range(self.poset.n):
                if old == x:
                    continue
                h[old] = st.h[old - (1 if old > x else 0)]
            self._deleted_h[x] = h
        return self._deleted_h[x]

    def subposet_e(self, mask: int) -> int:
        if mask not in self._sub_e:
            self._sub_e[mask] = count_extensions(self.poset.restrict_mask(mask),
                                                 self.ideal_cap)
        return self._sub_e[mask]


def _ctx(p: Poset, ctx: SweepContext | None) -> SweepContext:
    return ctx if ctx is not None else SweepContext(p)


def _min_slack(current, value):
    return value if current is None or value < current else current


# --------------------------------------------------------------------------
# theorem-tier checks
# --------------------------------------------------------------------------

def check_xyz(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """Shepp's XYZ theorem: Pr(x above all of Y) >= prod Pr(x above y),
    for |Y| <= 4, with the left side counted after adding all relations
    y < x simultaneously."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    n = p.n
    if n < 3:
        return None
    slack = None
    violations = []
    for x in range(n):
        others = [y for y in range(n) if y != x]
        for size in range(2, 5):
            if size > len(others):
                break
            for combo in combinations(others, size):
                q = p
                lhs = Fraction(0)
                try:
                    for y in combo:
                        q = q.add_relation(y, x)
                    lhs = Fraction(count_extensions(q, ctx.ideal_cap), st.e)
                except InconsistentRelation:
                    lhs = Fraction(0)
                rhs = math.prod((st.prec[y][x] for y in combo), start=Fraction(1))
                slack = _min_slack(slack, lhs - rhs)
                if lhs < rhs:
                    violations.append({"x": x, "Y": list(combo),
                                       "lhs": lhs, "rhs": rhs})
    return CheckReport("xyz", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_fishburn(p: Poset, ctx: SweepContext | None = None,
                   pair_budget: int = DEFAULT_FISHBURN_PAIR_BUDGET) -> CheckReport | None:
    """Fishburn's inequality over all pairs of filters, in integers."""
    ctx = _ctx(p, ctx)
    full = p.full_mask
    filters = [full & ~ideal for ideal in p.ideals()]
    if len(filters) ** 2 > pair_budget:
        raise BudgetExceeded(f"{len(filters) ** 2} filter pairs exceed {pair_budget}")
    fact = [math.factorial(k) for k in range(p.n + 1)]
    e = {m: ctx.subposet_e(m) for m in filters}
    slack = None
    violations = []
    for km in filters:
        for lm in filters:
            um, im = km | lm, km & lm
            lhs = e[um] * e[im] * fact[km.bit_count()] * fact[lm.bit_count()]
            rhs = fact[um.bit_count()] * fact[im.bit_count()] * e[km] * e[lm]
            slack = _min_slack(slack, Fraction(lhs, rhs))
            if lhs < rhs:
                violations.append({"K": km, "L": lm, "lhs": lhs, "rhs": rhs})
    return CheckReport("fishburn", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_tsumwin(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """sum_{x in A} win(x) >= (n+1)|A|^2/n for every antichain A."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if st.win is None:
        raise StatUnavailable("win required for tsumwin")
    if p.n == 0:
        return None
    slack = None
    violations = []
    for mask in p.antichains():
        if not mask:
            continue
        size = mask.bit_count()
        lhs = sum((st.win[x] for x in bits(mask)), Fraction(0))
        rhs = Fraction((p.n + 1) * size * size, p.n)
        slack = _min_slack(slack, lhs - rhs)
        if lhs < rhs:
            violations.append({"A": mask, "lhs": lhs, "rhs": rhs})
    return CheckReport("tsumwin", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_tehs(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """e(P) >= sum_{x in A} e(P - x) for every antichain A."""
    ctx = _ctx(p, ctx)
    e = ctx.stats.e
    if p.n == 0:
        return None
    e_del = [count_extensions(p.delete(x), ctx.ideal_cap) for x in range(p.n)]
    slack = None
    violations = []
    for mask in p.antichains():
        if not mask:
            continue
        total = sum(e_del[x] for x in bits(mask))
        slack = _min_slack(slack, Fraction(e - total))
        if total > e:
            violations.append({"A": mask, "e": e, "sum": total})
    return CheckReport("tehs", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_lsks(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """h(x) <= 1/Pr(f(x)=1), and h(y)-h(x) <= 1/Pr(f(y)-f(x)=1)."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    slack = None
    violations = []
    for x in range(p.n):
        p1 = st.rank_dist[x][0]
        if p1 > 0:
            s = 1 - st.h[x] * p1
            slack = _min_slack(slack, s)
            if s < 0:
                violations.append({"part": "a", "x": x, "h": st.h[x], "p1": p1})
    e = st.e
    for (x, y), counts in ctx.diffs.items():
        d1 = Fraction(counts[1], e)
        if d1 > 0:
            s = 1 - (st.h[y] - st.h[x]) * d1
            slack = _min_slack(slack, s)
            if s < 0:
                violations.append({"part": "b", "x": x, "y": y, "d1": d1})
    if slack is None:
        return None
    return CheckReport("lsks", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_logconcavity(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """Log-concavity of each rank row and of every difference sequence
    {Pr(f(y)-f(x)=k)}_{k>=1}."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    n = p.n
    if n < 3:
        return None
    slack = None
    violations = []
    for x in range(n):
        row = st.rank_dist[x]
        for k in range(1, n - 1):
            s = row[k] * row[k] - row[k - 1] * row[k + 1]
            slack = _min_slack(slack, s)
            if s < 0:
                violations.append({"kind": "rank", "x": x, "k": k + 1})
    for (x, y), counts in ctx.diffs.items():
        for k in range(2, n - 1):
            s = Fraction(counts[k] * counts[k] - counts[k - 1] * counts[k + 1],
                         st.e * st.e)
            slack = _min_slack(slack, s)
            if s < 0:
                violations.append({"kind": "difference", "x": x, "y": y, "k": k})
    return CheckReport("log-concavity", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_grunbaum_pairs(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """h(x) <= h(y) implies Pr(x before y) >= 1/e (rational lower bound)."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if p.n < 2:
        return None
    slack = None
    violations = []
    for x in range(p.n):
        for y in range(p.n):
            if x == y or st.h[x] > st.h[y]:
                continue
            s = st.prec[x][y] - INV_E_LOWER
            slack = _min_slack(slack, s)
            if s < 0:
                violations.append({"x": x, "y": y, "prec": st.prec[x][y]})
    return CheckReport("grunbaum", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_efxy(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """E|f(x)-f(y)| >= win(x)/4 for every ordered pair."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if st.win is None or st.eabsdiff is None:
        raise StatUnavailable("win/eabsdiff required for efxy")
    if p.n < 2:
        return None
    slack = None
    violations = []
    for x in range(p.n):
        for y in range(p.n):
            if x == y:
                continue
            s = st.eabsdiff[x][y] - st.win[x] / 4
            slack = _min_slack(slack, s)
            if s < 0:
                violations.append({"x": x, "y": y})
    return CheckReport("efxy", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_cl1(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """win(x) >= 2 h(x)/alpha(x)."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if st.win is None:
        raise StatUnavailable("win required for cl1")
    slack = None
    violations = []
    for x in range(p.n):
        s = st.win[x] - 2 * st.h[x] / p.alpha(x)
        slack = _min_slack(slack, s)
        if s < 0:
            violations.append({"x": x, "win": st.win[x], "h": st.h[x]})
    if slack is None:
        return None
    return CheckReport("cl1", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_winh(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """H(x) = Win(x)/2, i.e. win(x) = 2h(x), for every minimal element."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if st.win is None:
        raise StatUnavailable("win required for winh")
    violations = []
    for x in bits(p.min_set()):
        if st.win[x] != 2 * st.h[x]:
            violations.append({"x": x, "win": st.win[x], "h": st.h[x]})
    return CheckReport("winh", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=Fraction(0))


def check_corner(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    ctx = _ctx(p, ctx)
    return check_corner_bounds(p, report=ctx.geometry, stats=ctx.stats,
                               ideal_cap=ctx.ideal_cap, enum_cap=ctx.enum_cap)


def check_win_variance(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    ctx = _ctx(p, ctx)
    return check_win_variance_inequalities(p, report=ctx.geometry, stats=ctx.stats,
                                           ideal_cap=ctx.ideal_cap,
                                           enum_cap=ctx.enum_cap)


def check_a1_top(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """The ideal conjecture at A = P (a theorem): max h >= n - |max(P)| + 1."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if p.n == 0:
        return None
    lhs = max(st.h)
    rhs = Fraction(p.n - p.max_set().bit_count() + 1)
    slack = lhs - rhs
    fail = slack < 0
    return CheckReport("a1-top", FAIL if fail else PASS,
                       witness={"max_h": lhs, "rhs": rhs} if fail else None,
                       extremal=slack)


# --------------------------------------------------------------------------
# conjecture-tier checks
# --------------------------------------------------------------------------

def check_one_third(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """delta(P) >= 1/3 for non-chains (the 1/3-2/3 conjecture).

    A violation would be a discovery, so this is conjecture-tier even
    though no small poset is expected to fail.
    """
    if p.n < 2 or p.is_chain():
        return None
    ctx = _ctx(p, ctx)
    delta, pair = delta_of(ctx.stats)
    slack = delta - ONE_THIRD
    fail = slack < 0
    return CheckReport("one-third", FAIL if fail else PASS,
                       witness={"delta": delta, "pair": list(pair)} if fail else None,
                       extremal=slack)


def check_conj_a1(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """max{h(x): x in A} >= |A| - |max(A)| + 1 for every nonempty ideal A."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if p.n == 0:
        return None
    slack = None
    violations = []
    for ideal in p.ideals():
        if not ideal:
            continue
        lhs = max(st.h[x] for x in bits(ideal))
        maxima = sum(1 for x in bits(ideal) if p.up[x] & ideal == 0)
        rhs = Fraction(ideal.bit_count() - maxima + 1)
        slack = _min_slack(slack, lhs - rhs)
        if lhs < rhs:
            violations.append({"A": ideal, "max_h": lhs, "rhs": rhs})
    return CheckReport("a1", FAIL if violations else PASS,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_conj_winvar(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """Var(F(x)) <= Win(x)H(x)(1-H(x))/(2+Win(x)) per element, plus the
    min Win/Var ratio as universal-epsilon evidence."""
    ctx = _ctx(p, ctx)
    if p.n == 0:
        return None
    rep = conjecture_winvar_ratio(p, report=ctx.geometry, stats=ctx.stats,
                                  ideal_cap=ctx.ideal_cap, enum_cap=ctx.enum_cap)
    fail = bool(rep.violations)
    witness = {"violations": list(rep.violations)} if fail else None
    return CheckReport("winvar", FAIL if fail else PASS, witness=witness,
                       extremal=rep.min_ratio)


def check_conj_increase_h(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """Deletion effects: (a) sum of h increases <= n-1; (b) normalized
    absolute changes <= (n-1)/(n+1). The strengthened all-absolute form
    of (a) is evaluated and reported separately, never asserted."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    n = p.n
    if n < 2:
        return None
    slack = None
    violations = []
    strengthened_max = Fraction(0)
    strengthened_ok = True
    for x in range(n):
        hdel = ctx.deleted_h(x)
        inc = sum((max(st.h[y] - hdel[y], Fraction(0)) for y in hdel), Fraction(0))
        absdiff = sum((abs(st.h[y] - hdel[y]) for y in hdel), Fraction(0))
        norm = sum((abs(st.h[y] / (n + 1) - hdel[y] / n) for y in hdel), Fraction(0))
        s_a = Fraction(n - 1) - inc
        s_b = Fraction(n - 1, n + 1) - norm
        slack = _min_slack(slack, s_a)
        slack = _min_slack(slack, s_b)
        strengthened_max = max(strengthened_max, absdiff)
        if absdiff > n - 1:
            strengthened_ok = False
        if s_a < 0:
            violations.append({"part": "a", "x": x, "sum": inc})
        if s_b < 0:
            violations.append({"part": "b", "x": x, "sum": norm})
    witness = {"violations": violations} if violations else None
    report = CheckReport("increase-h", FAIL if violations else PASS,
                         witness=witness, extremal=slack)
    report.witness = report.witness or {}
    report.witness["strengthened_abs_sum_max"] = strengthened_max
    report.witness["strengthened_holds"] = strengthened_ok
    return report


# --------------------------------------------------------------------------
# report-tier checks
# --------------------------------------------------------------------------

def check_conj_gapw(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """gap(P)/w(P) ratio, plus the ideal-split height jump scaled by the
    w^2 e^w bound, for the chain-gaps question."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if p.n == 0:
        return None
    gap = gap_of(st.h, p.n)
    width = p.width()
    ratio = gap / width
    best_split = None
    for ideal in p.ideals():
        if ideal == 0 or ideal == p.full_mask:
            continue
        comp = p.full_mask & ~ideal
        a_mask = sum(1 << x for x in bits(ideal) if p.up[x] & ideal == 0)
        b_mask = sum(1 << x for x in bits(comp) if p.down[x] & comp == 0)
        diff = min(st.h[x] for x in bits(b_mask)) - max(st.h[x] for x in bits(a_mask))
        w = max(a_mask.bit_count(), b_mask.bit_count())
        scaled = float(diff) / (w * w * math.exp(w))
        if best_split is None or scaled > best_split["scaled"]:
            best_split = {"ideal": ideal, "diff": diff, "w": w, "scaled": scaled}
    return CheckReport("gapw", REPORT_ONLY,
                       witness={"gap": gap, "width": width, "split": best_split},
                       extremal=ratio)


def check_conj_gaptau(p: Poset, ctx: SweepContext | None = None,
                      threshold=GAPTAU_THRESHOLD) -> CheckReport | None:
    """For every ideal split whose height jump reaches the threshold,
    the best per-element entropy witness inside max(D) or min(U)."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    if p.n < 2:
        return None
    best = None
    e_p = st.e
    for ideal in p.ideals():
        if ideal == 0 or ideal == p.full_mask:
            continue
        comp = p.full_mask & ~ideal
        jump = min(st.h[x] for x in bits(comp)) - max(st.h[x] for x in bits(ideal))
        if jump < threshold:
            continue
        a_mask = sum(1 << x for x in bits(ideal) if p.up[x] & ideal == 0)
        b_mask = sum(1 << x for x in bits(comp) if p.down[x] & comp == 0)
        for side in (a_mask, b_mask):
            elems = list(bits(side))
            for size in range(2, len(elems) + 1):
                for combo in combinations(elems, size):
                    mask = 0
                    for z in combo:
                        mask |= 1 << z
                    dist = ordering_distribution(p, mask, ctx.ideal_cap, e_p=e_p)
                    value = _entropy_bits(dist.values()) / size
                    if best is None or value > best["entropy_rate"]:
                        best = {"ideal": ideal, "jump": jump, "X": list(combo),
                                "entropy_rate": value}
    return CheckReport("gaptau", REPORT_ONLY,
                       witness=best,
                       extremal=None if best is None else best["entropy_rate"])


def check_hdeletex(p: Poset, ctx: SweepContext | None = None) -> CheckReport | None:
    """Max |h_P(y) - h_{P-x}(y)| with the classifiers of the small-change
    conjecture: chain length between x and y, cover-graph distance, pi(x)."""
    ctx = _ctx(p, ctx)
    st = ctx.stats
    n = p.n
    if n < 2:
        return None
    worst = None
    for x in range(n):
        hdel = ctx.deleted_h(x)
        for y, hy in hdel.items():
            change = abs(st.h[y] - hy)
            if worst is None or change > worst["change"]:
                worst = {"x": x, "y": y, "change": change,
                         "chain_len": _chain_length(p, x, y),
                         "cover_dist": _cover_distance(p, x, y),
                         "pi_x": p.pi(x)}
    return CheckReport("hdeletex", REPORT_ONLY, witness=worst,
                       extremal=None if worst is None else worst["change"])


def _chain_length(p: Poset, x: int, y: int) -> int:
    """Longest chain (edge count) from the lower to the upper of x, y;
    0 if incomparable."""
    if p.lt(y, x):
        x, y = y, x
    elif not p.lt(x, y):
        return 0
    memo = {x: 0}
    for z in sorted(bits(p.up[x] & (p.down[y] | (1 << y))),
                    key=lambda w: p.down[w].bit_count()):
        memo[z] = 1 + max((memo[w] for w in bits(p.cover_down[z]) if w in memo),
                          default=-10**9)
    return memo.get(y, 0)


def _cover_distance(p: Poset, x: int, y: int) -> int | None:
    """BFS distance in the undirected cover graph; None if disconnected."""
    frontier = [x]
    dist = {x: 0}
    while frontier:
        nxt = []
        for z in frontier:
            for w in bits(p.cover_up[z] | p.cover_down[z]):
                if w not in dist:
                    dist[w] = dist[z] + 1
                    nxt.append(w)
        frontier = nxt
    return dist.get(y)


# --------------------------------------------------------------------------
# registry and sweep
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckDef:
    name: str
    fn: object
    tier: str


CHECKS = {c.name: c for c in [
    CheckDef("xyz", check_xyz, THEOREM),
    CheckDef("fishburn", check_fishburn, THEOREM),
    CheckDef("tsumwin", check_tsumwin, THEOREM),
    CheckDef("tehs", check_tehs, THEOREM),
    CheckDef("lsks", check_lsks, THEOREM),
    CheckDef("log-concavity", check_logconcavity, THEOREM),
    CheckDef("grunbaum", check_grunbaum_pairs, THEOREM),
    CheckDef("efxy", check_efxy, THEOREM),
    CheckDef("cl1", check_cl1, THEOREM),
    CheckDef("winh", check_winh, THEOREM),
    CheckDef("corner", check_corner, THEOREM),
    CheckDef("win-variance", check_win_variance, THEOREM),
    CheckDef("a1-top", check_a1_top, THEOREM),
    CheckDef("one-third", check_one_third, CONJECTURE),
    CheckDef("a1", check_conj_a1, CONJECTURE),
    CheckDef("winvar", check_conj_winvar, CONJECTURE),
    CheckDef("increase-h", check_conj_increase_h, CONJECTURE),
    CheckDef("gapw", check_conj_gapw, REPORT),
    CheckDef("gaptau", check_conj_gaptau, REPORT),
    CheckDef("hdeletex", check_hdeletex, REPORT),
]}

ALL_CHECK_NAMES = tuple(CHECKS)


def run_checks_on(p: Poset, names, ideal_cap: int = DEFAULT_IDEAL_CAP,
                  enum_cap: int = DEFAULT_ENUM_CAP) -> list[dict]:
    """All named checks on one poset; cap errors become report-only records."""
    ctx = SweepContext(p, ideal_cap, enum_cap)
    canon = p.canonical_form().hex()
    records = []
    for name in names:
        cdef = CHECKS[name]
        try:
            rep = cdef.fn(p, ctx)
        except LinextError as exc:
            rep = CheckReport(name, REPORT_ONLY,
                              witness={"error": type(exc).__name__,
                                       "message": str(exc)})
        if rep is None:
            continue
        records.append({
            "n": p.n,
            "poset": canon,
            "relations": [list(r) for r in p.relations()],
            "check": rep.check,
            "tier": cdef.tier,
            "status": rep.status,
            "witness": rep.witness,
            "extremal": rep.extremal,
        })
    return records


def _sweep_worker(payload):
    n, relations, names, ideal_cap, enum_cap = payload
    p = Poset.from_cover_relations(n, [tuple(r) for r in relations])
    return run_checks_on(p, names, ideal_cap, enum_cap)


def sweep(posets, checks=None, parallelism: int = 1,
          ideal_cap: int = DEFAULT_IDEAL_CAP,
          enum_cap: int = DEFAULT_ENUM_CAP) -> list[dict]:
    """Run the named checks over a poset iterable.

    Output is sorted by (n, canonical form, check name) so it does not
    depend on the degree of parallelism; per-poset cap errors are
    recorded as report-only rows, never abort the sweep.
    """
    names = list(checks) if checks else list(ALL_CHECK_NAMES)
    for name in names:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}")
    items = [(p.n, p.relations(), names, ideal_cap, enum_cap) for p in posets]
    if parallelism > 1 and len(items) > 1:
        import multiprocessing
        with multiprocessing.Pool(parallelism) as pool:
            chunks = pool.map(_sweep_worker, items)
    else:
        chunks = [_sweep_worker(it) for it in items]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r["n"], r["poset"], r["check"]))
    return records


def summarize(records) -> list[dict]:
    """Per-check rollup: posets touched, failures, tightest extremal."""
    by_check: dict[str, dict] = {}
    for rec in records:
        row = by_check.setdefault(rec["check"], {
            "check": rec["check"], "tier": rec["tier"],
            "posets": 0, "failures": 0, "min_slack": None})
        row["posets"] += 1
        if rec["status"] == FAIL:
            row["failures"] += 1
        ext = rec["extremal"]
        if ext is not None:
            cur = row["min_slack"]
            if rec["tier"] == REPORT:
                row["min_slack"] = ext if cur is None else max(cur, ext)
            else:
                row["min_slack"] = ext if cur is None else min(cur, ext)
    return [by_check[k] for k in sorted(by_check)]


def hard_failures(records) -> list[dict]:
    return [r for r in records if r["tier"] == THEOREM and r["status"] == FAIL]
