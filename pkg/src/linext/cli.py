"""Command-line front end: analyze, verify, family, sample, trend, catalog.

Exit codes: 0 success, 1 proved-theorem violation found by verify,
2 usage/parse error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction

from . import balance, checks, families, fileio, geometry, sampling
from .counting import DEFAULT_ENUM_CAP, DEFAULT_IDEAL_CAP, exact_stats
from .errors import (BudgetExceeded, CycleError, EnumCapExceeded,
                     IdealCapExceeded, LinextError, ParseError, SizeCapExceeded)
from .poset import Poset

CONFIG_ENV = "POSET_BALANCE_CONFIG"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_CAP = 3

_CAP_ERRORS = (IdealCapExceeded, EnumCapExceeded, SizeCapExceeded, BudgetExceeded)


@dataclass(frozen=True)
class Config:
    ideal_cap: int = DEFAULT_IDEAL_CAP
    enum_cap: int = DEFAULT_ENUM_CAP
    tau_cap: int = balance.DEFAULT_TAU_CAP
    budget: int = balance.DEFAULT_ORDER_BUDGET
    seed: int = 0
    parallelism: int = 1
    output: str = "json"
    mc_tolerance: float = 3.0

    def validated(self) -> "Config":
        if min(self.ideal_cap, self.enum_cap, self.tau_cap, self.budget) <= 0:
            raise ValueError("caps must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        if self.output not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output!r}")
        return self


def load_config_file(path: str) -> dict:
    """Plain key = value lines; ints and floats parsed, '#' comments."""
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not key or not val:
                raise ValueError(f"bad config line {raw!r}")
            try:
                values[key] = int(val)
            except ValueError:
                try:
                    values[key] = float(val)
                except ValueError:
                    values[key] = val
    return values


def resolve_config(args) -> Config:
    cfg = Config()
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        overrides = load_config_file(path)
        known = {k: v for k, v in overrides.items() if hasattr(cfg, k)}
        cfg = replace(cfg, **known)
    for key in ("ideal_cap", "enum_cap", "tau_cap", "budget", "seed",
                "parallelism", "output"):
        val = getattr(args, key, None)
        if val is not None:
            cfg = replace(cfg, **{key: val})
    return cfg.validated()


def _read_poset(path: str) -> Poset:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return fileio.parse_poset(text)


def _print(line: str) -> None:
    sys.stdout.write(line + "\n")


def cmd_analyze(args) -> int:
    cfg = resolve_config(args)
    p = _read_poset(args.poset)
    stats = exact_stats(p, cfg.ideal_cap, cfg.enum_cap)
    geo = geometry.geometry_report(p, stats, cfg.ideal_cap, cfg.enum_cap)
    bal = balance.balance_report(p, stats, tau_cap=cfg.tau_cap,
                                 ideal_cap=cfg.ideal_cap, enum_cap=cfg.enum_cap)
    doc = {
        "n": p.n,
        "relations": [list(r) for r in p.relations()],
        "stats": stats.to_json_dict(),
        "geometry": geo.to_json_dict(),
        "balance": bal.to_json_dict(),
    }
    if cfg.output == "text":
        _print(f"n = {p.n}, e = {stats.e}")
        _print(f"delta = {fileio.format_fraction(bal.delta)} witness {bal.delta_pair}")
        _print(f"gap = {fileio.format_fraction(bal.gap)}  width = {bal.width}  "
               f"height = {bal.height}")
        _print(f"vol = {fileio.format_fraction(geo.vol)}")
    else:
        _print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = resolve_config(args)
    if args.n > families.CATALOG_CAP:
        raise ParseError(f"--n must be at most {families.CATALOG_CAP}")
    if args.checks in (None, "all"):
        names = list(checks.ALL_CHECK_NAMES)
    else:
        names = [c.strip() for c in args.checks.split(",") if c.strip()]
        for name in names:
            if name not in checks.CHECKS:
                raise ParseError(f"unknown check {name!r}")
    posets = list(families.catalog_up_to(args.n))
    records = checks.sweep(posets, names, parallelism=cfg.parallelism,
                           ideal_cap=cfg.ideal_cap, enum_cap=cfg.enum_cap)
    for rec in records:
        _print(fileio.dumps(rec))
    summary = checks.summarize(records)
    for row in summary:
        ext = row["min_slack"]
        if isinstance(ext, Fraction):
            ext = fileio.format_fraction(ext)
        elif isinstance(ext, float):
            ext = fileio.format_float(ext)
        sys.stderr.write(f"{row['check']:15s} tier={row['tier']:10s} "
                         f"posets={row['posets']:5d} failures={row['failures']:3d} "
                         f"extremal={ext}\n")
    hard = checks.hard_failures(records)
    if hard:
        sys.stderr.write(f"{len(hard)} proved-theorem violation(s) found\n")
        return EXIT_VIOLATION
    return EXIT_OK


def _family_poset(args):
    name = args.family
    if name in ("chain", "antichain"):
        if args.k is None:
            raise ParseError(f"{name} requires --k")
        return families.FAMILY_GENERATORS[name](args.k), None
    if name in ("komlos", "bit"):
        if args.t is None:
            raise ParseError(f"{name} requires --t")
        return families.FAMILY_GENERATORS[name](args.t), None
    if name == "random":
        if args.k is None or args.p is None:
            raise ParseError("random requires --k and --p")
        return families.random_poset(args.k, args.p, args.seed or 0), None
    if name == "example-11-2":
        if None in (args.r, args.a):
            raise ParseError("example-11-2 requires --r and --a (and maybe --k/--l)")
        k, l = args.k, args.l
        if k is None or l is None:
            k, l = families.solve_11_2(args.r, args.a)
        p, x = families.example_11_2(args.r, args.a, k, l)
        return p, f"x = {x} (k={k}, l={l})"
    if name == "example-11-1":
        eps = Fraction(args.eps) if args.eps is not None else Fraction(1)
        pair = families.example_11_1(eps, args.levels or 1)
        note = (f"antichain mask = {pair.antichain_mask:#x}, "
                f"goodness_verified = {pair.goodness_verified}")
        return pair.poset, note
    raise ParseError(f"unknown family {args.family!r}")


def cmd_family(args) -> int:
    p, note = _family_poset(args)
    text = fileio.format_poset_text(p, comment=note)
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg = resolve_config(args)
    p = _read_poset(args.poset)
    seed = args.seed if args.seed is not None else cfg.seed
    if args.what == "win":
        if args.x is None:
            raise ParseError("--what win requires --x")
        est = sampling.estimate_win(p, args.x, args.samples, seed, cfg.ideal_cap)
        _print(json.dumps(est.to_json_dict(), sort_keys=True))
        return EXIT_OK
    from .counting import build_lattice
    lattice = build_lattice(p, cfg.ideal_cap)
    stream = sampling.SampleStream(seed)
    sampler = sampling.ExtensionSampler(p, lattice)
    for _ in range(args.samples):
        if args.what == "extension":
            _print(json.dumps({"extension": list(sampler.draw(stream))}))
        else:
            us = sorted(stream.uniform() for _ in range(p.n))
            sigma = sampler.draw(stream)
            coords = [0.0] * p.n
            for k, e in enumerate(sigma):
                coords[e] = us[k]
            _print(json.dumps({"point": [fileio.format_float(c) for c in coords]}))
    return EXIT_OK


def cmd_trend(args) -> int:
    cfg = resolve_config(args)
    if args.family not in families.FAMILY_GENERATORS:
        raise ParseError(f"unknown family {args.family!r}")
    params = [int(v) for v in args.n_list.split(",") if v.strip()]
    rows = balance.trend_report(args.family, params, ideal_cap=cfg.ideal_cap,
                                enum_cap=cfg.enum_cap, budget=cfg.budget)
    _print("family,n,delta,delta3,winP,gap,width")
    for row in rows:
        def fr(v):
            return fileio.format_fraction(v) if v is not None else ""
        _print(",".join([row.family, str(row.n if row.n is not None else ""),
                         fr(row.delta), fr(row.delta3), fr(row.win_max),
                         fr(row.gap),
                         str(row.width if row.width is not None else "")]))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.n > families.CATALOG_CAP:
        raise ParseError(f"--n must be at most {families.CATALOG_CAP}")
    posets = families.catalog(args.n)
    if args.out:
        if os.path.isdir(args.out):
            for i, p in enumerate(posets):
                path = os.path.join(args.out, f"poset_{args.n}_{i:05d}.poset")
                with open(path, "w") as fh:
                    fh.write(fileio.format_poset_text(p))
        else:
            with open(args.out, "w") as fh:
                for p in posets:
                    fh.write(fileio.format_poset_json(p) + "\n")
    else:
        for p in posets:
            _print(fileio.format_poset_json(p))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linext",
        description="Exact and sampled statistics of uniform linear extensions, "
                    "with theorem/conjecture verification sweeps.")
    parser.add_argument("--config", help=f"key=value config file "
                                         f"(or ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--ideal-cap", dest="ideal_cap", type=int)
        sp.add_argument("--enum-cap", dest="enum_cap", type=int)
        sp.add_argument("--tau-cap", dest="tau_cap", type=int)
        sp.add_argument("--budget", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--output", choices=["json", "csv", "text"])

    sp = sub.add_parser("analyze", help="full exact report on one poset file")
    sp.add_argument("poset", help="poset file, or - for stdin")
    common(sp)
    sp.set_defaults(fn=cmd_analyze)

    sp = sub.add_parser("verify", help="check sweep over the catalog of all "
                                       "posets with n up to N")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--checks", default="all",
                    help="comma list from: " + ",".join(checks.ALL_CHECK_NAMES))
    sp.add_argument("--parallel", dest="parallelism", type=int)
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("family", help="emit a named construction as a poset file")
    sp.add_argument("family")
    sp.add_argument("--k", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--r", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--l", type=int)
    sp.add_argument("--eps")
    sp.add_argument("--levels", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--emit")
    sp.set_defaults(fn=cmd_family)

    sp = sub.add_parser("sample", help="draw extensions or polytope points")
    sp.add_argument("poset")
    sp.add_argument("--what", choices=["extension", "point", "win"],
                    default="extension")
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--x", type=int)
    common(sp)
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("trend", help="family trend table as CSV")
    sp.add_argument("family")
    sp.add_argument("--n-list", dest="n_list", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_trend)

    sp = sub.add_parser("catalog", help="emit one poset per isomorphism class")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", help="directory for .poset files or a .jsonl path")
    sp.set_defaults(fn=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, CycleError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except _CAP_ERRORS as exc:
        sys.stderr.write(f"resource cap: {exc}\n")
        return EXIT_CAP
    except LinextError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
