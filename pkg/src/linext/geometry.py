"""Exact order/chain-polytope quantities and the corner-bound checks.

All report fields are exact rationals: H = h/(n+1), Win = win/(n+1),
Var(F(x)) via the exact decomposition, d_x = e(P)/(n e(P-x)), and the
volume e(P)/n!. Irrational thresholds enter only as directed rational
approximations so no check can false-fail on rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counting import (DEFAULT_ENUM_CAP, DEFAULT_IDEAL_CAP, ExtensionStats,
                       count_extensions, exact_stats)
from .errors import SizeCapExceeded, StatUnavailable
from .poset import Poset, bits
from .report import CheckReport, FAIL, PASS
from .sampling import Estimate, SampleStream

# e from above, 1/e from below: sound directions for upper/lower bounds
E_UPPER = Fraction(27182818285, 10**10)
INV_E_LOWER = Fraction(367879441, 10**9)


@dataclass(frozen=True)
class GeometryReport:
    n: int
    H: tuple[Fraction, ...]
    Win: tuple[Fraction, ...] | None
    varF: tuple[Fraction, ...]
    d: tuple[Fraction, ...]
    vol: Fraction

    def to_json_dict(self) -> dict:
        from .fileio import format_fraction as ff
        return {
            "n": self.n,
            "H": [ff(v) for v in self.H],
            "Win": None if self.Win is None else [ff(v) for v in self.Win],
            "varF": [ff(v) for v in self.varF],
            "d": [ff(v) for v in self.d],
            "vol": ff(self.vol),
        }


def geometry_report(p: Poset, stats: ExtensionStats | None = None,
                    ideal_cap: int = DEFAULT_IDEAL_CAP,
                    enum_cap: int = DEFAULT_ENUM_CAP) -> GeometryReport:
    st = stats or exact_stats(p, ideal_cap, enum_cap)
    n = p.n
    h_norm = Fraction(1, n + 1)
    H = tuple(h * h_norm for h in st.h)
    win = None if st.win is None else tuple(w * h_norm for w in st.win)
    varF = tuple(st.sigma2[x] / ((n + 1) * (n + 2)) + H[x] * (1 - H[x]) / (n + 2)
                 for x in range(n))
    d = tuple(Fraction(st.e, n * count_extensions(p.delete(x), ideal_cap))
              for x in range(n))
    vol = Fraction(st.e, math.factorial(n))
    return GeometryReport(n=n, H=H, Win=win, varF=varF, d=d, vol=vol)


def check_corner_bounds(p: Poset, report: GeometryReport | None = None,
                        stats: ExtensionStats | None = None,
                        ideal_cap: int = DEFAULT_IDEAL_CAP,
                        enum_cap: int = DEFAULT_ENUM_CAP) -> CheckReport:
    """d_x <= Win(x) <= 2 d_x for every x, plus the corner volume bounds.

    Volume part: prod d_x <= |C(P)| <= e * prod(n c_x)/n! with c_x = Win/2
    and e over-approximated rationally so the check stays sound.
    """
    rep = report or geometry_report(p, stats, ideal_cap, enum_cap)
    if rep.Win is None:
        raise StatUnavailable("win not available (enumeration capped out)")
    n = p.n
    violations = []
    slack = None
    for x in range(n):
        lo = rep.Win[x] - rep.d[x]
        hi = 2 * rep.d[x] - rep.Win[x]
        for s in (lo, hi):
            slack = s if slack is None else min(slack, s)
        if lo < 0 or hi < 0:
            violations.append({"element": x, "d": rep.d[x], "Win": rep.Win[x]})
    prod_d = math.prod(rep.d, start=Fraction(1))
    upper = E_UPPER * math.prod((n * w / 2 for w in rep.Win), start=Fraction(1)) \
        / math.factorial(n)
    vol_lo = rep.vol - prod_d
    vol_hi = upper - rep.vol
    for s in (vol_lo, vol_hi):
        slack = s if slack is None else min(slack, s)
    if vol_lo < 0:
        violations.append({"bound": "lower", "prod_d": prod_d, "vol": rep.vol})
    if vol_hi < 0:
        violations.append({"bound": "upper", "upper": upper, "vol": rep.vol})
    status = FAIL if violations else PASS
    return CheckReport("corner", status,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


def check_win_variance_inequalities(p: Poset, report: GeometryReport | None = None,
                                    stats: ExtensionStats | None = None,
                                    ideal_cap: int = DEFAULT_IDEAL_CAP,
                                    enum_cap: int = DEFAULT_ENUM_CAP) -> CheckReport:
    """Var(F(x)) >= Win(x)^2/12 and sigma^2(x) >= ((win(x)-1)^2 - 1)/12, exactly."""
    st = stats or exact_stats(p, ideal_cap, enum_cap)
    if st.win is None:
        raise StatUnavailable("win not available (enumeration capped out)")
    rep = report or geometry_report(p, st, ideal_cap, enum_cap)
    violations = []
    slack = None
    for x in range(p.n):
        s1 = rep.varF[x] - rep.Win[x] ** 2 / 12
        s2 = st.sigma2[x] - ((st.win[x] - 1) ** 2 - 1) / 12
        for s in (s1, s2):
            slack = s if slack is None else min(slack, s)
        if s1 < 0 or s2 < 0:
            violations.append({"element": x, "varF": rep.varF[x], "Win": rep.Win[x],
                               "sigma2": st.sigma2[x], "win": st.win[x]})
    status = FAIL if violations else PASS
    return CheckReport("win-variance", status,
                       witness={"violations": violations} if violations else None,
                       extremal=slack)


@dataclass(frozen=True)
class WinVarReport:
    """Win(x)/Var(F(x)) ratios plus the sharp conjectured upper bound check."""

    ratios: tuple[Fraction, ...]
    min_ratio: Fraction
    min_element: int
    varf_prime_ok: tuple[bool, ...]
    violations: tuple[dict, ...]


def conjecture_winvar_ratio(p: Poset, report: GeometryReport | None = None,
                            stats: ExtensionStats | None = None,
                            ideal_cap: int = DEFAULT_IDEAL_CAP,
                            enum_cap: int = DEFAULT_ENUM_CAP) -> WinVarReport:
    """Evidence for Win(x) > eps Var(F(x)), and the per-element check of
    Var(F(x)) <= Win(x) H(x)(1-H(x)) / (2 + Win(x)).

    For minimal x (where Win = 2H) the bound specializes to
    Var <= H^2 (1-H)/(1+H); a violation of either form is a potential
    counterexample and is returned as a witness.
    """
    st = stats or exact_stats(p, ideal_cap, enum_cap)
    if st.win is None:
        raise StatUnavailable("win not available (enumeration capped out)")
    rep = report or geometry_report(p, st, ideal_cap, enum_cap)
    ratios = []
    ok = []
    violations = []
    minimal = p.min_set()
    for x in range(p.n):
        ratios.append(rep.Win[x] / rep.varF[x])
        bound = rep.Win[x] * rep.H[x] * (1 - rep.H[x]) / (2 + rep.Win[x])
        good = rep.varF[x] <= bound
        if good and (minimal >> x) & 1:
            hx = rep.H[x]
            good = rep.varF[x] <= hx * hx * (1 - hx) / (1 + hx)
        ok.append(good)
        if not good:
            violations.append({"element": x, "varF": rep.varF[x], "bound": bound,
                               "Win": rep.Win[x], "H": rep.H[x]})
    min_x = min(range(p.n), key=lambda x: ratios[x])
    return WinVarReport(tuple(ratios), ratios[min_x], min_x,
                        tuple(ok), tuple(violations))


def estimate_chain_polytope_volume(p: Poset, samples: int, seed) -> Estimate:
    """Rejection-sampling estimate of |C(P)| (cube hit rate); n <= 5 only."""
    if p.n > 5:
        raise SizeCapExceeded("chain-polytope rejection sampling capped at n=5")
    if samples < 100:
        raise ValueError("samples must be at least 100")
    stream = SampleStream(seed) if not isinstance(seed, SampleStream) else seed
    pts = stream.uniform_block(samples * p.n).reshape(samples, p.n)
    inside = np.ones(samples, dtype=bool)
    for chain in p.maximal_chains():
        if chain:
            inside &= pts[:, list(chain)].sum(axis=1) <= 1.0
    hits = inside.astype(float)
    mean = float(hits.mean())
    se = math.sqrt(float(hits.var(ddof=1)) / samples) if samples > 1 else 0.0
    return Estimate(mean, se, samples, stream.seed)
