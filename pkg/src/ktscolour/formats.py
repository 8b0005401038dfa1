"""Plain-text DESIGN files and colouring files.

A DESIGN file looks like::

    # optional comments
    DESIGN v 9 k 3
    GROUPS            (optional; one group per line)
    0 1
    BLOCKS            (one ascending block per line)
    0 1 2
    RESOLUTION        (optional; block indices refer to BLOCKS order)
    CLASS 0 5 9
    PARTIAL 2 3 7 8
    COLOURING         (optional; one line of colour indices)
    0 1 2 0 1 2 0 1 2

A colouring file holds one line of space-separated colour indices, or a
compact digit string in which '1'..'9' stand for colours 0..8.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Colouring, Design, DesignError, GroupPartition, Resolution, System


class FormatError(DesignError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col = line, col


_SECTIONS = ("GROUPS", "BLOCKS", "RESOLUTION", "COLOURING")


@dataclass
class _Line:
    no: int
    text: str
    tokens: list[tuple[int, str]]


def _tokenise(text: str) -> list[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        tokens, col = [], 0
        for part in body.split():
            col = body.index(part, col)
            tokens.append((col + 1, part))
            col += len(part)
        if tokens:
            out.append(_Line(no, raw, tokens))
    return out


def _ints(line: _Line, start: int = 0) -> list[int]:
    vals = []
    for col, tok in line.tokens[start:]:
        try:
            val = int(tok)
        except ValueError:
            raise FormatError(line.no, col, f"expected an integer, found {tok!r}") from None
        if val < 0:
            raise FormatError(line.no, col, f"negative value {val}")
        vals.append(val)
    return vals


def parse_design(text: str) -> System:
    """Parse a DESIGN file into a System (groups, resolution and colouring if present)."""
    lines = _tokenise(text)
    if not lines:
        raise FormatError(1, 1, "empty design file")
    head = lines[0]
    words = [t for _, t in head.tokens]
    if len(words) != 5 or words[0] != "DESIGN" or words[1] != "v" or words[3] != "k":
        raise FormatError(head.no, 1, "header must read 'DESIGN v <v> k <k>'")
    v, k = (_ints(_Line(head.no, head.text, [head.tokens[i]]))[0] for i in (2, 4))
    if k < 1:
        raise FormatError(head.no, head.tokens[4][0], "block size must be positive")
    sections: dict[str, list[_Line]] = {}
    current = None
    for line in lines[1:]:
        first = line.tokens[0][1]
        if first in _SECTIONS and len(line.tokens) == 1:
            if first in sections:
                raise FormatError(line.no, 1, f"section {first} appears twice")
            current = first
            sections[current] = []
            continue
        if current is None:
            raise FormatError(line.no, 1, f"expected a section keyword, found {first!r}")
        sections[current].append(line)
    if "BLOCKS" not in sections:
        raise FormatError(lines[-1].no, 1, "missing BLOCKS section")

    blocks = []
    for line in sections["BLOCKS"]:
        pts = _ints(line)
        if len(pts) != k:
            raise FormatError(line.no, 1, f"block has {len(pts)} points, expected {k}")
        for (col, _), p in zip(line.tokens, pts):
            if p >= v:
                raise FormatError(line.no, col, f"point {p} outside 0..{v - 1}")
        if len(set(pts)) != k:
            raise FormatError(line.no, 1, f"block {pts} repeats a point")
        if pts != sorted(pts):
            raise FormatError(line.no, 1, f"block {pts} is not ascending")
        blocks.append(tuple(pts))
    seen: dict[tuple, int] = {}
    for line, b in zip(sections["BLOCKS"], blocks):
        if b in seen:
            raise FormatError(line.no, 1, f"block {list(b)} repeats the block on line {seen[b]}")
        seen[b] = line.no
    design = Design(v, k, tuple(blocks))

    groups = None
    if "GROUPS" in sections:
        groups = GroupPartition(tuple(tuple(_ints(line)) for line in sections["GROUPS"]))
        try:
            owner = groups.group_of()
        except DesignError as exc:
            raise FormatError(sections["GROUPS"][0].no, 1, str(exc)) from None
        if owner.size != v:
            raise FormatError(sections["GROUPS"][0].no, 1, f"groups cover {owner.size} points, v is {v}")

    res = None
    if "RESOLUTION" in sections:
        classes, missing = [], []
        for line in sections["RESOLUTION"]:
            kind = line.tokens[0][1]
            if kind == "CLASS":
                missing.append(None)
                idx = _ints(line, 1)
            elif kind == "PARTIAL":
                vals = _ints(line, 1)
                if not vals:
                    raise FormatError(line.no, 1, "PARTIAL needs a group index")
                if groups is None or vals[0] >= len(groups.groups):
                    raise FormatError(line.no, line.tokens[1][0], f"unknown group {vals[0]}")
                missing.append(vals[0])
                idx = vals[1:]
            else:
                raise FormatError(line.no, 1, f"expected CLASS or PARTIAL, found {kind!r}")
            for (col, _), i in zip(line.tokens[-len(idx):] if idx else [], idx):
                if i >= len(blocks):
                    raise FormatError(line.no, col, f"block index {i} outside 0..{len(blocks) - 1}")
            classes.append(tuple(idx))
        res = Resolution(tuple(classes), None if all(m is None for m in missing) else tuple(missing))

    col = None
    if "COLOURING" in sections:
        rows = sections["COLOURING"]
        if len(rows) != 1:
            raise FormatError(rows[0].no if rows else lines[-1].no, 1, "COLOURING takes exactly one line")
        col = _colouring_line(rows[0], v)
    return System(design, res, groups, col)


def emit_design(system: System | Design, groups: GroupPartition | None = None,
                resolution: Resolution | None = None, colouring: Colouring | None = None) -> str:
    if isinstance(system, System):
        design = system.design
        groups = groups if groups is not None else system.groups
        resolution = resolution if resolution is not None else system.resolution
        colouring = colouring if colouring is not None else system.colouring
    else:
        design = system
    out = [f"DESIGN v {design.v} k {design.k}"]
    if groups is not None:
        out.append("GROUPS")
        out.extend(" ".join(map(str, g)) for g in groups.groups)
    out.append("BLOCKS")
    out.extend(" ".join(map(str, b)) for b in design.blocks)
    if resolution is not None:
        out.append("RESOLUTION")
        for ci, cls in enumerate(resolution.classes):
            label = resolution.label(ci)
            prefix = "CLASS" if label is None else f"PARTIAL {label}"
            out.append(" ".join([prefix, *map(str, cls)]))
    if colouring is not None:
        out.append("COLOURING")
        out.append(emit_colouring(colouring))
    return "\n".join(out) + "\n"


def _colouring_line(line: _Line, v: int | None) -> Colouring:
    if len(line.tokens) == 1 and (v is None or v > 1 or len(line.tokens[0][1]) > 1):
        tok = line.tokens[0][1]
        if not tok.isdigit() or "0" in tok:
            raise FormatError(line.no, 1, "a compact colouring uses the digits 1..9")
        col = Colouring.from_string(tok)
    else:
        vals = _ints(line)
        col = Colouring(tuple(vals), max(vals) + 1)
    if v is not None and col.v != v:
        raise FormatError(line.no, 1, f"colouring has {col.v} entries, design has {v} points")
    return col


def parse_colouring(text: str, v: int | None = None) -> Colouring:
    lines = _tokenise(text)
    if len(lines) != 1:
        raise FormatError(lines[1].no if len(lines) > 1 else 1, 1, "a colouring file holds exactly one line")
    return _colouring_line(lines[0], v)


def emit_colouring(colouring: Colouring) -> str:
    return " ".join(map(str, colouring.colours))
