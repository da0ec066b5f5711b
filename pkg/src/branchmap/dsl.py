"""Line-oriented text format for residue branch maps.

Grammar::

    map <name>
    mod <M>
    <r1>,<r2>,... -> (<a>n <+|-> <b>) / <d>

The offset term and the ``/ <d>`` divisor are optional (defaults 0 and 1);
``#`` starts a comment anywhere on a line.  Comments are dropped on render so
that output is canonical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from branchmap.core import ResidueBranchMap, RuleSpec, canonicalize
from branchmap.errors import (
    DuplicateResidueError,
    MapSyntaxError,
    ResidueRangeError,
)

_NAME_RE = re.compile(r"^map\s+(\S+)\s*$")
_MOD_RE = re.compile(r"^mod\s+(\d+)\s*$")
_RULE_RE = re.compile(
    r"^(?P<residues>\d+(?:\s*,\s*\d+)*)\s*->\s*"
    r"\(\s*(?P<mult>[+-]?\d*)\s*n\s*(?:(?P<sign>[+-])\s*(?P<offset>\d+)\s*)?\)"
    r"\s*(?:/\s*(?P<div>\d+)\s*)?$"
)


@dataclass(frozen=True)
class DocRule:
    residues: tuple[int, ...]
    multiplier: int
    offset: int
    divisor: int


@dataclass(frozen=True)
class MapDocument:
    """Parsed map text: a name, a modulus, and ordered rule lines."""

    name: str
    modulus: int
    rules: tuple[DocRule, ...]

    def rule_specs(self) -> list[RuleSpec]:
        return [
            RuleSpec(r.residues, self.modulus, r.multiplier, r.offset, r.divisor)
            for r in self.rules
        ]

    def to_map(self) -> ResidueBranchMap:
        return canonicalize(self.name, self.rule_specs())


def parse_map(text: str) -> MapDocument:
    """Parse map text into a document, preserving rule order.

    Raises MapSyntaxError (with 1-based line and column) on malformed lines,
    ResidueRangeError for residues at or above the declared modulus, and
    DuplicateResidueError when a residue is ruled twice.
    """
    name: str | None = None
    modulus: int | None = None
    rules: list[DocRule] = []
    seen: dict[int, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if name is None:
            m = _NAME_RE.match(line)
            if not m:
                raise MapSyntaxError("expected 'map <name>' header", lineno)
            name = m.group(1)
            continue
        if modulus is None:
            m = _MOD_RE.match(line)
            if not m:
                raise MapSyntaxError("expected 'mod <M>' before rules", lineno)
            modulus = int(m.group(1))
            if modulus < 1:
                raise MapSyntaxError("modulus must be positive", lineno)
            continue
        m = _RULE_RE.match(line)
        if not m:
            column = _first_mismatch_column(raw, line)
            raise MapSyntaxError(f"unparsable rule line {line!r}", lineno, column)
        residues = tuple(int(tok) for tok in m.group("residues").replace(" ", "").split(","))
        for res in residues:
            if res >= modulus:
                raise ResidueRangeError(
                    f"residue {res} not in [0, {modulus})", lineno
                )
            if res in seen:
                raise DuplicateResidueError(
                    f"residue {res} already ruled on line {seen[res]}", lineno
                )
            seen[res] = lineno
        mult_text = m.group("mult")
        if mult_text in ("", "+"):
            mult = 1
        elif mult_text == "-":
            mult = -1
        else:
            mult = int(mult_text)
        offset = int(m.group("offset")) if m.group("offset") else 0
        if m.group("sign") == "-":
            offset = -offset
        divisor = int(m.group("div")) if m.group("div") else 1
        if divisor < 1:
            raise MapSyntaxError("divisor must be positive", lineno)
        rules.append(DocRule(residues, mult, offset, divisor))

    if name is None:
        raise MapSyntaxError("empty document: missing 'map <name>' header", 1)
    if modulus is None:
        raise MapSyntaxError("missing 'mod <M>' declaration", 1)
    return MapDocument(name, modulus, tuple(rules))


def _first_mismatch_column(raw: str, stripped: str) -> int:
    offset = raw.find(stripped)
    return offset + 1 if offset >= 0 else 1


def render_map(doc: MapDocument) -> str:
    """Emit canonical text that re-parses to an identical document."""
    lines = [f"map {doc.name}", f"mod {doc.modulus}"]
    for rule in doc.rules:
        expr = _render_expr(rule.multiplier, rule.offset)
        suffix = f" / {rule.divisor}" if rule.divisor != 1 else ""
        lines.append(f"{','.join(str(r) for r in rule.residues)} -> ({expr}){suffix}")
    return "\n".join(lines) + "\n"


def _render_expr(mult: int, offset: int) -> str:
    if mult == 1:
        head = "n"
    elif mult == -1:
        head = "-n"
    else:
        head = f"{mult}n"
    if offset == 0:
        return head
    sign = "+" if offset > 0 else "-"
    return f"{head} {sign} {abs(offset)}"


def load_map_file(path: str) -> ResidueBranchMap:
    """Parse a .map file and canonicalize it."""
    with open(path, encoding="utf-8") as fh:
        return parse_map(fh.read()).to_map()
