"""Explicit designs and colouring certificates, developed from text resources.

Identifiers: ``kts3``, ``kts9``, ``kts15``, ``sigma21`` .. ``sigma69``,
``tv33-1`` .. ``tv33-30``, ``rot33-59a``, ``gdd4x4``, ``q13``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from ..core import (
    Colouring,
    Design,
    DesignError,
    GroupPartition,
    Permutation,
    Resolution,
    System,
    assemble,
    is_weak,
    rainbow_check,
    verify_gdd,
    verify_kts,
    verify_pairwise_balance,
)

SIGMA_ORDERS = (21, 33, 39, 57, 69)
TV_SYSTEMS = range(1, 31)

_BLOCK = re.compile(r"\{([^{}]*)\}")


def _text(name: str) -> str:
    return resources.files(__package__).joinpath("data", name).read_text()


def _lines(name: str) -> list[str]:
    return [ln.strip() for ln in _text(name).splitlines() if ln.strip() and not ln.startswith("#")]


def _blocks(s: str) -> list[list[str]]:
    return [[t.strip() for t in m.split(",")] for m in _BLOCK.findall(s)]


def _int_blocks(s: str) -> list[tuple[int, ...]]:
    return [tuple(int(t) for t in b) for b in _blocks(s)]


def _named_colourings(lines, v, base) -> dict[str, Colouring]:
    out = {}
    for ln in lines:
        if ln.startswith("colouring "):
            _, name, rest = ln.split(" ", 2)
            out[name] = Colouring.from_classes(v, _int_blocks(rest), base=base)
    return out


def _columns(lines: list[str], base: int) -> list[list[tuple[int, ...]]]:
    rows = [_int_blocks(ln) for ln in lines if ln.startswith("{")]
    return [[tuple(p - base for p in row[c]) for row in rows] for c in range(len(rows[0]))]


@lru_cache(maxsize=None)
def kts3() -> System:
    design, res = assemble(3, [[(0, 1, 2)]])
    col = Colouring((0, 1, 2), 3)
    return System(design, res, colouring=col, name="kts3", colourings={"rainbow": col},
                  info={"rainbow_class": 0})


@lru_cache(maxsize=None)
def kts9() -> System:
    """The KTS(9) table (columns are the classes), relabelled to points 0..8."""
    lines = _lines("kts9.txt")
    design, res = assemble(9, _columns(lines, 1))
    cols = {f"kts9-{n}": c for n, c in _named_colourings(lines, 9, 1).items()}
    return System(design, res, colouring=cols["kts9-3x3"], name="kts9", colourings=cols,
                  info={"rainbow_class": 0, "rainbow_block": (0, 1, 2)})


@lru_cache(maxsize=None)
def kts15() -> System:
    lines = _lines("kts15.txt")
    design, res = assemble(15, _columns(lines, 1))
    cols = {f"kts15-{n}": c for n, c in _named_colourings(lines, 15, 1).items()}
    return System(design, res, colouring=cols["kts15-rainbow"], name="kts15", colourings=cols)


# -- sigma-orbit systems ---------------------------------------------------

def _sigma_point(tok: str, m: int) -> int:
    i, j = tok.split("_")
    if i == "inf":
        return 3 * m + int(j)
    return int(j) * m + int(i)


def _sigma_shift(p: int, h: int, m: int) -> int:
    if p >= 3 * m:
        return p
    j, i = divmod(p, m)
    return j * m + (i + h) % m


def _sigma_class(text: str, m: int) -> list[tuple[int, ...]]:
    out = []
    for m_ in re.finditer(r"(sigma\^(\d+))?\{([^{}]*)\}", text):
        h = int(m_.group(2) or 0)
        pts = [_sigma_point(t.strip(), m) for t in m_.group(3).split(",")]
        out.append(tuple(_sigma_shift(p, h, m) for p in pts))
    return out


def _sigma_records() -> dict[int, dict[str, str]]:
    recs: dict[int, dict[str, str]] = {}
    cur = None
    for ln in _lines("sigma.txt"):
        key, rest = ln.split(" ", 1)
        if key == "v":
            cur = recs.setdefault(int(rest), {})
        else:
            cur[key] = rest
    return recs


@lru_cache(maxsize=None)
def sigma_kts(v: int) -> System:
    """Rainbow KTS(v) developed under the cyclic map i_j -> (i+1)_j.

    Point i_j is ``j*m + i`` and inf_k is ``3m + k`` where ``m = (v-3)/3``;
    the colouring gives i_j and inf_j colour j, and class 0 is rainbow.
    """
    if v not in SIGMA_ORDERS:
        raise DesignError(f"no sigma-orbit system of order {v}; choose from {SIGMA_ORDERS}")
    rec = _sigma_records()[v]
    m = (v - 3) // 3
    starter = _sigma_class(rec["fixed"], m)[0]
    fixed = [(3 * m, 3 * m + 1, 3 * m + 2)] + [tuple(_sigma_shift(p, t, m) for p in starter) for t in range(m)]
    short = _sigma_class(rec["short"], m)
    long_ = _sigma_class(rec["long"], m)
    # the short orbit only has length m/2 if sigma^(m/2) fixes its class set-wise
    half = {tuple(sorted(_sigma_shift(p, m // 2, m) for p in b)) for b in short}
    if half != {tuple(sorted(b)) for b in short}:
        raise DesignError(f"short-orbit class of sigma{v} is not fixed by sigma^{m // 2}")
    classes = [fixed]
    classes += [[tuple(_sigma_shift(p, j, m) for p in b) for b in short] for j in range(m // 2)]
    classes += [[tuple(_sigma_shift(p, j, m) for p in b) for b in long_] for j in range(m)]
    design, res = assemble(v, classes)
    col = Colouring(tuple(p // m if p < 3 * m else p - 3 * m for p in range(v)), 3)
    name = f"sigma{v}"
    return System(design, res, colouring=col, name=name, colourings={f"{name}-rainbow": col},
                  info={"rainbow_class": 0, "m": m, "short_orbit": m // 2, "long_orbit": m})


# -- the thirty 4-chromatic KTS(33) -------------------------------------------

def _tv_records() -> dict[int, dict[str, str]]:
    recs: dict[int, dict[str, str]] = {}
    cur = None
    for ln in _lines("tv33.txt"):
        key, rest = ln.split(" ", 1)
        if key == "system":
            cur = recs.setdefault(int(rest), {})
        else:
            cur[key] = rest
    return recs


def _parse_cycles(text: str, n: int) -> Permutation:
    cycles = [[int(t) for t in c.split(",")] for c in re.findall(r"\(([^()]*)\)", text)]
    return Permutation.from_cycles(n, cycles)


@lru_cache(maxsize=None)
def tv_kts33(i: int) -> System:
    """KTS(33) number ``i`` of the stored list of thirty, with its 4-colouring."""
    if i not in TV_SYSTEMS:
        raise DesignError(f"TV system index must be in 1..30, got {i}")
    rec = _tv_records()[i]
    starter = _int_blocks(rec["P"])
    if "S" in rec:
        shifts = range(0, 33, 3)
        classes = [[tuple((p + t) % 33 for p in b) for b in starter] for t in shifts]
        classes += [[tuple((p + t) % 33 for p in b) for t in shifts] for b in _int_blocks(rec["S"])]
    else:
        rho = _parse_cycles(rec["rho"], 33)
        classes = [[rho.power(j).apply_block(b) for b in starter] for j in range(16)]
    design, res = assemble(33, classes)
    col = Colouring.from_string(rec["colouring"], 4)
    name = f"tv33-{i}"
    return System(design, res, colouring=col, name=name, colourings={f"{name}-paper": col})


# -- 1-rotational system 59a --------------------------------------------------

ROT33_INF = 32


def _rot33_blocks() -> tuple[Design, Colouring]:
    lines = _lines("rot33.txt")
    base = next(ln for ln in lines if ln.startswith("base "))
    colour = next(ln for ln in lines if ln.startswith("colouring ")).split()[1]
    blocks = set()
    for b in _blocks(base):
        pts = [ROT33_INF if t == "inf" else int(t) for t in b]
        for t in range(32):
            blocks.add(tuple(sorted(p if p == ROT33_INF else (p + t) % 32 for p in pts)))
    design = Design(33, 3, tuple(sorted(blocks)))
    if design.b != 176 or not verify_pairwise_balance(design):
        raise DesignError("development of the 59a base blocks is not an STS(33)")
    return design, Colouring.from_string(colour, 3)


def _rot33_resolution(design: Design) -> Resolution | None:
    path = resources.files(__package__).joinpath("data", "rot33_resolution.txt")
    if not path.is_file():
        return None
    classes = [_int_blocks(ln) for ln in path.read_text().splitlines() if ln.startswith("{")]
    index = design.block_index
    try:
        return Resolution(tuple(tuple(index[tuple(sorted(b))] for b in cls) for cls in classes))
    except KeyError as exc:
        raise DesignError(f"cached 59a resolution names a block not in the design: {exc}") from None


@lru_cache(maxsize=None)
def rotational_kts33() -> System:
    """1-rotational KTS(33) 59a; its resolution is a cached search certificate."""
    design, col = _rot33_blocks()
    res = _rot33_resolution(design)
    if res is None or not verify_kts(design, res):
        from ..solver import find_resolution

        shift = Permutation.from_cycles(33, [list(range(32))])
        res = find_resolution(design, automorphism=shift).resolution
    return System(design, res, colouring=col, name="rot33-59a", colourings={"rot33-59a-paper": col})


# -- quadruple systems and the 4-GDD -----------------------------------------

@lru_cache(maxsize=None)
def gdd_4x4() -> System:
    """4-GDD of type 4^4; point i_j is ``4j + i`` and has colour i."""
    tuples = [tuple(int(x) for x in t.split(",")) for ln in _lines("gdd4x4.txt")
              for t in re.findall(r"\(([^()]*)\)", ln)]
    design = Design.from_blocks(16, ([4 * j + x for j, x in enumerate(t)] for t in tuples), 4)
    groups = GroupPartition(tuple(tuple(4 * j + i for i in range(4)) for j in range(4)))
    col = Colouring(tuple(p % 4 for p in range(16)), 4)
    return System(design, groups=groups, colouring=col, name="gdd4x4", colourings={"gdd4x4-paper": col},
                  info={"tuples": tuple(tuples)})


def rgdd43_tables() -> dict:
    """Resolvable 3-GDDs of type 4^3 keyed by ``(c1, c2)`` (with c0 = 0).

    Each value is a list of four classes of ``(x, y, z)`` tuples meaning the
    block {x_0, y_1, z_2}. The worked example for delta 5 and offsets
    (0, 2, 4) is stored under ``("example", 5, 0, 2, 4)``.
    """
    tables: dict = {}
    keys: list = []
    for ln in _lines("rgdd43.txt"):
        if ln.startswith("c ") or ln.startswith("example"):
            nums = [int(t) for t in re.findall(r"\d+", ln)]
            if ln.startswith("example"):
                keys = [("example", *nums)]
            else:
                keys = [tuple(nums[i:i + 2]) for i in range(0, len(nums), 2)]
            for k in keys:
                tables[k] = []
            continue
        row = [tuple(int(x) for x in t.split(",")) for t in re.findall(r"\(([^()]*)\)", ln)]
        for k in keys:
            tables[k].append(row)
    return tables


def _kq_point(tok: str, v: int) -> int:
    if tok == "inf":
        return 2 * v
    if tok.endswith("'"):
        return v + int(tok[:-1])
    return int(tok)


@lru_cache(maxsize=None)
def q13() -> System:
    """Q(13); ``info['written']`` keeps each block in the order it is listed."""
    lines = _lines("q13.txt")
    written = tuple(tuple(int(t) for t in b) for ln in lines if ln.startswith("{") for b in _blocks(ln))
    design = Design.from_blocks(13, written, 4)
    cols = {f"q13-{n}": c for n, c in _named_colourings(lines, 13, 0).items()}
    kq_line = next(ln for ln in lines if ln.startswith("kq-colouring "))
    kq_classes = [[_kq_point(t, 13) for t in b] for b in _blocks(kq_line)]
    kq_col = Colouring.from_classes(27, kq_classes)
    return System(design, colouring=cols["q13-2"], name="q13", colourings=cols,
                  info={"written": written, "kq_colouring": kq_col})


# -- lookup ------------------------------------------------------------------

def names() -> list[str]:
    out = ["kts3", "kts9", "kts15"] + [f"sigma{v}" for v in SIGMA_ORDERS]
    out += [f"tv33-{i}" for i in TV_SYSTEMS] + ["rot33-59a", "gdd4x4", "q13"]
    return out


def get(name: str) -> System:
    if name in ("kts3", "kts9", "kts15"):
        return globals()[name]()
    if name.startswith("sigma") and name[5:].isdigit():
        return sigma_kts(int(name[5:]))
    if name.startswith("tv33-") and name[5:].isdigit():
        return tv_kts33(int(name[5:]))
    if name in ("rot33-59a", "rot33"):
        return rotational_kts33()
    if name == "gdd4x4":
        return gdd_4x4()
    if name == "q13":
        return q13()
    raise KeyError(f"unknown catalog design {name!r}")


def colouring(name: str) -> Colouring:
    """Named colouring certificate, e.g. ``kts9-3x3`` or ``tv33-7-paper``."""
    for entry in names():
        if name == entry or name.startswith(entry + "-"):
            system = get(entry)
            if name in system.colourings:
                return system.colourings[name]
    raise KeyError(f"unknown catalog colouring {name!r}")


def self_test(entry: System) -> list:
    """Every verifier that applies to a catalog entry."""
    d = entry.design
    reports = [verify_pairwise_balance(d)] if entry.groups is None else [verify_gdd(d, entry.groups)]
    if entry.resolution is not None:
        reports.append(verify_kts(d, entry.resolution))
    for col in entry.colourings.values():
        if col.v == d.v:
            reports.append(is_weak(d, col))
    if entry.resolution is not None and entry.colouring is not None and entry.colouring.delta == 3 \
            and entry.name != "rot33-59a":
        reports.append(rainbow_check(d, entry.resolution, entry.colouring))
    return reports
