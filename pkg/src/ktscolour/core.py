"""Designs, resolutions, groups and colourings, with their verifiers.

Points are the integers ``0..v-1``. Every design here has lambda = 1, so
the balance check is "each pair in exactly one block".
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_VIOLATIONS = 16


class DesignError(ValueError):
    """Structurally invalid input, or a violated operation precondition."""


@dataclass(frozen=True)
class Report:
    """Outcome of a verifier. Truthy iff the check passed."""

    name: str
    ok: bool
    violations: tuple = ()
    n_violations: int = 0
    info: Mapping[str, object] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        out = [f"{self.name}: {'ok' if self.ok else 'FAIL'}"]
        for key, value in self.info.items():
            out.append(f"{self.name}.{key}: {value}")
        if self.n_violations:
            out.append(f"{self.name}.violations: {self.n_violations}")
            for item in self.violations:
                out.append(f"{self.name}.violation: {item}")
        return out


def _report(name: str, bad: list, limit: int = MAX_VIOLATIONS, **info) -> Report:
    return Report(name, not bad, tuple(bad[:limit]), len(bad), info)


@dataclass(frozen=True)
class Design:
    v: int
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(p) for p in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.v < 0 or self.k < 1:
            raise DesignError(f"bad parameters v={self.v} k={self.k}")
        for i, b in enumerate(blocks):
            if len(b) != self.k:
                raise DesignError(f"block {i} {b} has size {len(b)}, expected {self.k}")
            if any(b[j] >= b[j + 1] for j in range(self.k - 1)):
                raise DesignError(f"block {i} {b} is not strictly increasing")
            if b[0] < 0 or b[-1] >= self.v:
                raise DesignError(f"block {i} {b} has a point outside [0, {self.v})")
        if len(set(blocks)) != len(blocks):
            dup = next(b for b, n in Counter(blocks).items() if n > 1)
            raise DesignError(f"repeated block {dup}")

    @classmethod
    def from_blocks(cls, v: int, blocks: Iterable[Iterable[int]], k: int | None = None) -> "Design":
        bl = [tuple(sorted(b)) for b in blocks]
        if k is None:
            k = len(bl[0]) if bl else 3
        return cls(v, k, tuple(bl))

    @property
    def b(self) -> int:
        return len(self.blocks)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.blocks, dtype=np.int64).reshape(-1, self.k)
        arr.setflags(write=False)
        return arr

    @cached_property
    def block_index(self) -> dict[tuple[int, ...], int]:
        return {b: i for i, b in enumerate(self.blocks)}

    def canonical(self) -> "Design":
        return Design(self.v, self.k, tuple(sorted(self.blocks)))

    def canonical_key(self) -> tuple:
        return (self.v, self.k, tuple(sorted(self.blocks)))

    def relabel(self, mapping: Sequence[int], v: int | None = None) -> "Design":
        """Image of the design under a point map (old point -> new point)."""
        return Design.from_blocks(v if v is not None else self.v,
                                  ([mapping[p] for p in b] for b in self.blocks), self.k)

    def induced(self, points: Iterable[int]) -> list[int]:
        """Indices of the blocks lying entirely inside ``points``."""
        mask = np.zeros(self.v, dtype=bool)
        mask[list(points)] = True
        if not self.blocks:
            return []
        return np.flatnonzero(mask[self.array].all(axis=1)).tolist()

    def is_degenerate(self) -> bool:
        return self.v == 3 and self.k == 3 and self.b == 1


@dataclass(frozen=True)
class GroupPartition:
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(sorted(int(p) for p in g)) for g in self.groups))

    @property
    def v(self) -> int:
        return sum(len(g) for g in self.groups)

    def group_of(self) -> np.ndarray:
        owner = np.full(self.v, -1, dtype=np.int64)
        for gi, g in enumerate(self.groups):
            for p in g:
                if p < 0 or p >= owner.size or owner[p] != -1:
                    raise DesignError(f"groups do not partition 0..{self.v - 1}")
                owner[p] = gi
        return owner

    def type(self) -> Counter:
        return Counter(len(g) for g in self.groups)

    def type_string(self) -> str:
        return partition_string(self.type())


@dataclass(frozen=True)
class Resolution:
    """Blocks grouped into classes. ``missing[i]`` is the group index left
    uncovered by class ``i`` (frame style) or None for a full class."""

    classes: tuple[tuple[int, ...], ...]
    missing: tuple[int | None, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(sorted(int(i) for i in c)) for c in self.classes))
        if self.missing is not None:
            missing = tuple(None if m is None else int(m) for m in self.missing)
            if len(missing) != len(self.classes):
                raise DesignError("one missing-group label per class required")
            object.__setattr__(self, "missing", missing)

    def label(self, i: int) -> int | None:
        return None if self.missing is None else self.missing[i]

    def class_of_block(self) -> dict[int, int]:
        return {bi: ci for ci, c in enumerate(self.classes) for bi in c}


@dataclass(frozen=True)
class Colouring:
    colours: tuple[int, ...]
    delta: int

    def __post_init__(self):
        cols = tuple(int(c) for c in self.colours)
        object.__setattr__(self, "colours", cols)
        if any(c < 0 or c >= self.delta for c in cols):
            raise DesignError(f"colour index outside [0, {self.delta})")

    @classmethod
    def from_classes(cls, v: int, classes: Sequence[Iterable[int]], base: int = 0) -> "Colouring":
        cols = [-1] * v
        for c, members in enumerate(classes):
            for p in members:
                cols[p - base] = c
        if -1 in cols:
            raise DesignError("colour classes do not cover every point")
        return cls(tuple(cols), len(classes))

    @classmethod
    def from_string(cls, s: str, delta: int | None = None) -> "Colouring":
        """Digit string, characters '1'..'9' meaning colours 0..8."""
        cols = [int(ch) - 1 for ch in s.strip()]
        if any(c < 0 for c in cols):
            raise DesignError(f"bad colour string {s!r}")
        return cls(tuple(cols), delta if delta is not None else max(cols) + 1)

    def to_string(self) -> str:
        return "".join(str(c + 1) for c in self.colours)

    @property
    def v(self) -> int:
        return len(self.colours)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.colours, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.delta)]
        for p, c in enumerate(self.colours):
            out[c].append(p)
        return out

    def relabel(self, mapping: Sequence[int], v: int) -> "Colouring":
        cols = [-1] * v
        for p, c in enumerate(self.colours):
            cols[mapping[p]] = c
        return Colouring(tuple(cols), self.delta)


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise DesignError("permutation images are not a bijection")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(tuple(images))

    def __call__(self, p: int) -> int:
        return self.images[p]

    def power(self, e: int) -> "Permutation":
        images = list(range(len(self.images)))
        for _ in range(e):
            images = [self.images[x] for x in images]
        return Permutation(tuple(images))

    def apply_block(self, block: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.images[p] for p in block))


# -- colour statistics ----------------------------------------------------

def partition_string(sizes: Mapping[int, int] | Iterable[int]) -> str:
    """Exponent notation, e.g. ``{3: 3}`` -> ``3^3`` and ``[8,8,8,9]`` -> ``8^3 9^1``."""
    counts = sizes if isinstance(sizes, Mapping) else Counter(sizes)
    return " ".join(f"{size}^{n}" for size, n in sorted(counts.items()))


def parse_type(spec: str) -> list[int]:
    """Inverse of :func:`partition_string`; also accepts ``2,3,4``."""
    parts: list[int] = []
    for tok in spec.replace(",", " ").split():
        if "^" in tok:
            size, n = tok.split("^")
            parts += [int(size)] * int(n)
        else:
            parts.append(int(tok))
    return parts


def colour_type(colouring: Colouring, include_empty: bool = False) -> Counter:
    sizes = np.bincount(colouring.array, minlength=colouring.delta) if colouring.v else np.zeros(colouring.delta, int)
    return Counter(int(s) for s in sizes if include_empty or s > 0)


def is_equitable(colouring: Colouring) -> bool:
    sizes = np.bincount(colouring.array, minlength=colouring.delta)
    return int(sizes.max() - sizes.min()) <= 1


# -- verifiers --------------------------------------------------------------

def _pair_counts(design: Design) -> np.ndarray:
    v = design.v
    counts = np.zeros(v * v, dtype=np.int64)
    if design.b:
        arr = design.array
        i, j = np.triu_indices(design.k, 1)
        np.add.at(counts, arr[:, i].ravel() * v + arr[:, j].ravel(), 1)
    return counts.reshape(v, v)


def verify_pairwise_balance(design: Design) -> Report:
    counts = _pair_counts(design)
    iu = np.triu_indices(design.v, 1)
    bad_idx = np.flatnonzero(counts[iu] != 1)
    bad = [(int(iu[0][t]), int(iu[1][t]), int(counts[iu][t])) for t in bad_idx[:MAX_VIOLATIONS]]
    info = {"pairs": design.v * (design.v - 1) // 2, "blocks": design.b}
    if design.is_degenerate():
        info["degenerate"] = "STS(3)"
    return Report("pairwise_balance", bad_idx.size == 0, tuple(bad), int(bad_idx.size), info)


def verify_resolution(design: Design, res: Resolution, groups: GroupPartition | None = None) -> Report:
    bad: list[str] = []
    seen = np.zeros(design.b, dtype=np.int64)
    for ci, cls in enumerate(res.classes):
        for bi in cls:
            if bi < 0 or bi >= design.b:
                raise DesignError(f"class {ci} refers to block {bi}, design has {design.b}")
            seen[bi] += 1
    for bi in np.flatnonzero(seen != 1)[:MAX_VIOLATIONS]:
        bad.append(f"block {int(bi)} appears in {int(seen[bi])} classes")
    for ci, cls in enumerate(res.classes):
        expected = np.ones(design.v, dtype=np.int64)
        label = res.label(ci)
        if label is not None:
            if groups is None or not 0 <= label < len(groups.groups):
                bad.append(f"class {ci} misses unknown group {label}")
                continue
            expected[list(groups.groups[label])] = 0
        cover = np.bincount(design.array[list(cls)].ravel(), minlength=design.v) if cls else np.zeros(design.v, int)
        if not np.array_equal(cover, expected):
            off = np.flatnonzero(cover != expected)
            bad.append(f"class {ci} does not partition its point set (points {off[:6].tolist()})")
    return _report("resolution", bad, classes=len(res.classes))


def verify_gdd(design: Design, groups: GroupPartition) -> Report:
    bad: list[str] = []
    try:
        owner = groups.group_of()
    except DesignError as exc:
        return Report("gdd", False, (str(exc),), 1)
    if owner.size != design.v:
        return Report("gdd", False, (f"groups cover {owner.size} points, design has {design.v}",), 1)
    if design.b:
        g = owner[design.array]
        g.sort(axis=1)
        repeat = np.flatnonzero((g[:, 1:] == g[:, :-1]).any(axis=1))
        for bi in repeat[:MAX_VIOLATIONS]:
            bad.append(f"block {int(bi)} {design.blocks[bi]} meets a group twice")
    counts = _pair_counts(design)
    counts = counts + counts.T
    same = owner[:, None] == owner[None, :]
    iu = np.triu_indices(design.v, 1)
    want = np.where(same, 0, 1)[iu]
    got = counts[iu]
    wrong = np.flatnonzero(got != want)
    for t in wrong[:MAX_VIOLATIONS]:
        a, b = int(iu[0][t]), int(iu[1][t])
        bad.append(f"pair ({a},{b}) covered {int(got[t])} times, expected {int(want[t])}")
    n = len(bad) + max(0, wrong.size - MAX_VIOLATIONS)
    return Report("gdd", not bad, tuple(bad[:MAX_VIOLATIONS]), n, {"type": groups.type_string()})


def verify_frame(design: Design, groups: GroupPartition, res: Resolution) -> Report:
    bad: list[str] = []
    if res.missing is None or any(m is None for m in res.missing):
        bad.append("frame resolution must label every class with its missing group")
    gdd = verify_gdd(design, groups)
    if not gdd:
        bad.extend(gdd.violations)
    for gi, g in enumerate(groups.groups):
        if len(g) % 2:
            bad.append(f"group {gi} has odd size {len(g)}")
    if not bad:
        r = verify_resolution(design, res, groups)
        if not r:
            bad.extend(r.violations)
        missed = Counter(res.missing)
        for gi, g in enumerate(groups.groups):
            if missed.get(gi, 0) != len(g) // 2:
                bad.append(f"group {gi} missed by {missed.get(gi, 0)} classes, expected {len(g) // 2}")
    return _report("frame", bad, type=groups.type_string())


def monochromatic_blocks(design: Design, colouring: Colouring) -> np.ndarray:
    if colouring.v != design.v:
        raise DesignError(f"colouring has length {colouring.v}, design has v={design.v}")
    if not design.b:
        return np.zeros(0, dtype=np.int64)
    c = colouring.array[design.array]
    return np.flatnonzero((c == c[:, :1]).all(axis=1))


def is_weak(design: Design, colouring: Colouring) -> Report:
    mono = monochromatic_blocks(design, colouring)
    return Report("weak", mono.size == 0, tuple(int(i) for i in mono[:MAX_VIOLATIONS]), int(mono.size),
                  {"delta": colouring.delta})


def block_colour_counts(design: Design, colouring: Colouring) -> np.ndarray:
    """Number of distinct colours on each block."""
    c = np.sort(colouring.array[design.array], axis=1)
    return 1 + (c[:, 1:] != c[:, :-1]).sum(axis=1)


def rainbow_check(design: Design, res: Resolution, colouring: Colouring) -> Report:
    if colouring.delta != 3:
        raise DesignError("rainbow colourings use exactly three colours")
    if res.missing is not None and any(m is not None for m in res.missing):
        raise DesignError("rainbow check needs full parallel classes")
    sizes = np.bincount(colouring.array, minlength=3)
    if design.v % 3 or not (sizes == design.v // 3).all():
        return Report("rainbow", False, (f"colour class sizes {sizes.tolist()} are not all v/3",), 1)
    tri = block_colour_counts(design, colouring) == 3
    rainbow = [ci for ci, cls in enumerate(res.classes) if cls and tri[list(cls)].all()]
    if not rainbow:
        return Report("rainbow", False, ("no parallel class has every block tricoloured",), 1)
    info = {"rainbow_class": rainbow[0], "rainbow_classes": len(rainbow)}
    if len(rainbow) > 1 and design.v > 3:
        return Report("rainbow", False, (f"{len(rainbow)} rainbow classes",), 1, info)
    return Report("rainbow", True, (), 0, info)


def verify_kts(design: Design, res: Resolution) -> Report:
    """Pair balance, full resolution and the KTS counting identities."""
    bad: list[str] = []
    for r in (verify_pairwise_balance(design), verify_resolution(design, res)):
        if not r:
            bad.extend(f"{r.name}: {x}" for x in r.violations)
    if res.missing is not None and any(m is not None for m in res.missing):
        bad.append("KTS classes must be full parallel classes")
    v = design.v
    if design.k != 3 or v % 6 != 3:
        bad.append(f"v={v}, k={design.k} is not a KTS order")
    else:
        if design.b != v * (v - 1) // 6:
            bad.append(f"{design.b} blocks, expected {v * (v - 1) // 6}")
        if len(res.classes) != (v - 1) // 2:
            bad.append(f"{len(res.classes)} classes, expected {(v - 1) // 2}")
    return _report("kts", bad, v=v, degenerate=design.is_degenerate())


def verify_subsystem(design: Design, res: Resolution, points: Iterable[int]) -> Report:
    pts = sorted(set(int(p) for p in points))
    bad: list[str] = []
    if any(p < 0 or p >= design.v for p in pts):
        raise DesignError("subsystem points must be design points")
    mask = np.zeros(design.v, dtype=bool)
    mask[pts] = True
    meet = mask[design.array].sum(axis=1) if design.b else np.zeros(0, int)
    for bi in np.flatnonzero(meet == 2)[:MAX_VIOLATIONS]:
        bad.append(f"block {int(bi)} {design.blocks[bi]} meets the subset in 2 points")
    inside = np.flatnonzero(meet == 3).tolist()
    pos = {p: i for i, p in enumerate(pts)}
    sub = Design.from_blocks(len(pts), ([pos[p] for p in design.blocks[bi]] for bi in inside), 3)
    local = {bi: i for i, bi in enumerate(inside)}
    sub_classes = []
    for cls in res.classes:
        members = [local[bi] for bi in cls if bi in local]
        if members:
            sub_classes.append(members)
    sub_res = Resolution(tuple(tuple(c) for c in sub_classes))
    if not bad:
        r = verify_kts(sub, sub_res)
        if not r:
            bad.extend(r.violations)
    return _report("subsystem", bad, order=len(pts), blocks=len(inside))


# -- point deletion and admissibility ---------------------------------------

def delete_point(design: Design, res: Resolution, p: int = 0):
    """Kirkman frame of type 2^((v-1)/2) obtained by removing point ``p``.

    Returns ``(design, groups, resolution)``; points above ``p`` shift down by one.
    """
    if not verify_kts(design, res):
        raise DesignError("delete_point needs a verified KTS")
    v = design.v
    if v < 9:
        raise DesignError("deleting a point from KTS(3) gives a degenerate frame of type 2^1")
    shift = lambda x: x if x < p else x - 1  # noqa: E731
    through = {}
    for ci, cls in enumerate(res.classes):
        for bi in cls:
            if p in design.blocks[bi]:
                through[ci] = bi
    groups, new_classes, labels, blocks = [], [], [], []
    for ci, cls in enumerate(res.classes):
        pair = tuple(shift(x) for x in design.blocks[through[ci]] if x != p)
        groups.append(pair)
        members = []
        for bi in cls:
            if bi != through[ci]:
                members.append(len(blocks))
                blocks.append(tuple(shift(x) for x in design.blocks[bi]))
        new_classes.append(members)
        labels.append(ci)
    frame = Design.from_blocks(v - 1, blocks, 3)
    return frame, GroupPartition(tuple(groups)), Resolution(tuple(map(tuple, new_classes)), tuple(labels))


ADMISSIBLE_KINDS = ("STS", "KTS", "QS", "frame", "frame1")


def admissible(kind: str, **params: int) -> bool:
    """Existence conditions: STS/KTS/QS take ``v``; ``frame`` (type g^u) takes
    ``g, u``; ``frame1`` (type g^u m^1) takes ``g, u, m``."""
    kind = kind.upper() if kind.lower() in ("sts", "kts", "qs") else kind.lower()
    if kind == "STS":
        return params["v"] % 6 in (1, 3)
    if kind == "KTS":
        return params["v"] % 6 == 3
    if kind == "QS":
        return params["v"] % 12 in (1, 4)
    if kind in ("frame", "frame-g^u"):
        g, u = params["g"], params["u"]
        return u >= 4 and g % 2 == 0 and g > 0 and (g * (u - 1)) % 3 == 0
    if kind in ("frame1", "frame-g^u m^1"):
        g, u, m = params["g"], params["u"], params["m"]
        if not (0 < g <= 12 or g % 12 == 0) or u <= 0 or m <= 0:
            raise DesignError("existence of g^u m^1 frames is only settled for 0<g<=12 or 12 | g")
        if g % 2 or (g * u) % 3 or (m - g) % 6 or u < 3:
            return False
        if u == 3:
            return m == g
        return m <= g * (u - 1) // 2
    raise DesignError(f"unknown design kind {kind!r}")


# -- bundles ----------------------------------------------------------------

@dataclass(frozen=True)
class System:
    """A design with whatever structure travels with it."""

    design: Design
    resolution: Resolution | None = None
    groups: GroupPartition | None = None
    colouring: Colouring | None = None
    name: str = ""
    colourings: Mapping[str, Colouring] = field(default_factory=dict)
    info: Mapping[str, object] = field(default_factory=dict)

    @property
    def v(self) -> int:
        return self.design.v

    def with_colouring(self, colouring: Colouring | str) -> "System":
        if isinstance(colouring, str):
            colouring = self.colourings[colouring]
        return System(self.design, self.resolution, self.groups, colouring, self.name, self.colourings, self.info)


def assemble(v: int, classes: Sequence[Iterable[Sequence[int]]], missing: Sequence[int] | None = None,
             k: int = 3) -> tuple[Design, Resolution]:
    """Design and resolution from blocks given class by class.

    Blocks are sorted lexicographically; classes keep the given order.
    """
    classes = [[tuple(sorted(int(p) for p in b)) for b in cls] for cls in classes]
    design = Design(v, k, tuple(sorted(b for cls in classes for b in cls)))
    index = design.block_index
    res = Resolution(tuple(tuple(index[b] for b in cls) for cls in classes),
                     None if missing is None else tuple(missing))
    return design, res
