"""Poset file formats and report serialization helpers.

Text format: line 1 is n, each further line "u v" meaning u < v
(0-indexed, whitespace separated, '#' starts a comment). JSON
alternative: {"n": int, "relations": [[u, v], ...]}.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError
from .poset import Poset


def format_fraction(value: Fraction) -> str:
    """Lowest-terms "p/q", always with an explicit denominator."""
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def format_float(value: float) -> str:
    return format(value, ".10g")


def jsonable(value):
    """Recursively convert Fractions to "p/q" strings for json.dumps."""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, bytes):
        return value.hex()
    return value


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True)


def parse_poset(text: str) -> Poset:
    """Parse either format, sniffing JSON by the first non-space character."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_poset_json(text)
    return parse_poset_text(text)


def parse_poset_text(text: str) -> Poset:
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise ParseError(f"line {lineno}: expected the element count, got {raw!r}")
            try:
                n = int(fields[0])
            except ValueError:
                raise ParseError(f"line {lineno}: bad element count {fields[0]!r}") from None
            continue
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer relation {raw!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: relation ({u}, {v}) out of range for n={n}")
        pairs.append((u, v))
    if n is None:
        raise ParseError("empty poset file")
    return Poset.from_cover_relations(n, pairs)


def parse_poset_json(text: str) -> Poset:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    if not isinstance(data, dict) or "n" not in data:
        raise ParseError('JSON poset needs {"n": ..., "relations": [...]}')
    relations = data.get("relations", [])
    try:
        pairs = [(int(u), int(v)) for u, v in relations]
    except (TypeError, ValueError):
        raise ParseError("relations must be [u, v] pairs") from None
    n = int(data["n"])
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"relation ({u}, {v}) out of range for n={n}")
    return Poset.from_cover_relations(n, pairs)


def format_poset_text(p: Poset, comment: str | None = None) -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    lines.append(str(p.n))
    lines.extend(f"{u} {v}" for u, v in p.relations())
    return "\n".join(lines) + "\n"


def format_poset_json(p: Poset) -> str:
    return json.dumps({"n": p.n, "relations": [list(r) for r in p.relations()]},
                      sort_keys=True)
