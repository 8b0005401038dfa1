"""Coloured ingredients for embedding a coloured STS in a KTS: resolvable
3-GDDs of type 4^3, frames of type 8^4, and the assembly over a quadruple
system."""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

from ..core import (
    Colouring,
    Design,
    DesignError,
    GroupPartition,
    Resolution,
    System,
    assemble,
    delete_point,
    is_weak,
    verify_frame,
    verify_gdd,
    verify_pairwise_balance,
    verify_resolution,
)
from ._certify import ConstructionError, certify_frame, certify_kts
from .frames import frame_fill_one_point

# Relabelling of one group (old index -> new index) for the three
# (delta, offset) pairs where an offset lies both in {0..3} and in the top
# three residues.
_SPECIAL = {
    (5, 2): {2: 3, 3: 2},
    (5, 3): {3: 1, 2: 3, 1: 2},
    (6, 3): {1: 3, 3: 1},
}


def _swap(classes):
    return [[(x, z, y) for x, y, z in cls] for cls in classes]


def _table4(a: int, b: int):
    from .. import catalog

    tables = catalog.rgdd43_tables()
    if a > b:
        return _swap(_table4(b, a))
    if (a, b) == (2, 3):
        return _swap(tables[(1, 3)])
    return tables[(a, b)]


def _rgdd_ok(classes, offsets: Sequence[int], delta: int) -> bool:
    blocks = [blk for cls in classes for blk in cls]
    if any(sorted(blk[j] for blk in cls) != [0, 1, 2, 3] for cls in classes for j in range(3)):
        return False
    if len({(a, b) for a, b, _ in blocks}) != 16 or len({(a, c) for a, _, c in blocks}) != 16 \
            or len({(b, c) for _, b, c in blocks}) != 16:
        return False
    for blk in blocks:
        cols = {(offsets[j] + blk[j]) % delta for j in range(3)}
        if len(cols) == 1:
            return False
    if len({c % delta for c in offsets}) > 1 and (0, 0, 0) not in blocks:
        return False
    return True


def _rgdd_tables(c1: int, c2: int, delta: int):
    """Case analysis on (0, c1, c2), c1 <= c2; returns classes or None."""
    if c1 == c2 == 0:
        return _table4(0, 0)
    if delta == 4:
        return _table4(c1, c2)
    x0 = set(range(4))
    disjoint = [not x0 & {(c + i) % delta for i in range(4)} for c in (c1, c2)]
    if any(disjoint):
        return _table4(0, 1)
    primed = [c if c <= 3 else 4 - delta + c for c in (c1, c2)]
    classes = _table4(*primed)
    for j, c in ((1, c1), (2, c2)):
        relabel = _SPECIAL.get((delta, c))
        if relabel:
            classes = [[tuple(relabel.get(t, t) if pos == j else t for pos, t in enumerate(blk)) for blk in cls]
                       for cls in classes]
    return classes


def _rgdd_search(offsets: Sequence[int], delta: int):
    """Bounded fallback: relabel groups 1 and 2 of a stored table (fixing 0)."""
    from .. import catalog

    tables = catalog.rgdd43_tables()
    perms = [(0,) + p for p in itertools.permutations((1, 2, 3))]
    for key in ((0, 1), (1, 2), (1, 3), (0, 0)):
        for base in (tables[key], _swap(tables[key])):
            for p1, p2 in itertools.product(perms, perms):
                classes = [[(x, p1[y], p2[z]) for x, y, z in cls] for cls in base]
                if _rgdd_ok(classes, offsets, delta):
                    return classes
    return None


def rgdd_4_3_coloured(c0: int, c1: int, c2: int, delta: int) -> System:
    """Resolvable 3-GDD of type 4^3 where point ``4j + i`` has colour ``c_j + i mod delta``.

    No block is monochromatic and, unless the three offsets agree, the block
    {0, 4, 8} is present. ``info['method']`` says whether the case tables
    sufficed or the bounded relabelling search was needed.
    """
    if delta < 4:
        raise DesignError(f"delta must be at least 4, got {delta}")
    offsets = [c % delta for c in (c0, c1, c2)]
    a, b = (offsets[1] - offsets[0]) % delta, (offsets[2] - offsets[0]) % delta
    classes = _swap(_rgdd_tables(b, a, delta)) if a > b else _rgdd_tables(a, b, delta)
    method = "tables"
    if classes is None or not _rgdd_ok(classes, offsets, delta):
        method = "search"
        classes = _rgdd_search(offsets, delta)
        if classes is None:
            raise ConstructionError(f"no coloured RGDD(4^3) found for offsets {offsets}, delta {delta}")
    design, res = assemble(12, [[(x, 4 + y, 8 + z) for x, y, z in cls] for cls in classes])
    groups = GroupPartition(tuple(tuple(range(4 * j, 4 * j + 4)) for j in range(3)))
    col = Colouring(tuple((offsets[p // 4] + p % 4) % delta for p in range(12)), delta)
    out = System(design, res, groups, col, name=f"RGDD(4^3) {offsets} mod {delta}", info={"method": method})
    if not (verify_gdd(design, groups) and verify_resolution(design, res) and is_weak(design, col)):
        raise ConstructionError("coloured RGDD(4^3) failed verification")
    return out


def base_frame_2_4() -> System:
    """Kirkman frame of type 2^4 with block {0, 2, 4} meeting groups 0, 1, 2.

    Point ``2j + x`` is point ``x`` of group ``j``.
    """
    from .. import catalog

    k9 = catalog.kts9()
    d, groups, res = delete_point(k9.design, k9.resolution, 0)
    return _normalise_base(System(d, res, groups))


def _normalise_base(frame: System) -> System:
    d, groups, res = frame.design, frame.groups, frame.resolution
    owner = groups.group_of()
    blk = d.blocks[0]
    order = [int(owner[p]) for p in blk]
    order.append(next(g for g in range(4) if g not in order))
    mapping = [0] * d.v
    for j, g in enumerate(order):
        members = list(groups.groups[g])
        if j < 3:
            first = blk[j]
            members.remove(first)
            members.insert(0, first)
        for x, p in enumerate(members):
            mapping[p] = 2 * j + x
    nd = d.relabel(mapping)
    index = nd.block_index
    new_res = Resolution(
        tuple(tuple(index[tuple(sorted(mapping[p] for p in d.blocks[bi]))] for bi in cls) for cls in res.classes),
        tuple(order.index(m) for m in res.missing))
    new_groups = GroupPartition(tuple((2 * j, 2 * j + 1) for j in range(4)))
    return System(nd, new_res, new_groups, name="frame(2^4)")


def frame_8_4_coloured(c: Sequence[int], delta: int, base: System | None = None) -> System:
    """Kirkman frame of type 8^4; point ``8j + i`` is ``i_j`` with colour ``c_j + i mod delta``.

    Each point ``x_j`` of the base 2^4 frame becomes ``(4x + y)_j`` for
    y < 4, and each base block carries a coloured RGDD(4^3). The block
    {0, 8, 16} is present unless ``c[0], c[1], c[2]`` agree.
    """
    if len(c) != 4:
        raise DesignError("frame_8_4_coloured takes four colour offsets")
    base = base_frame_2_4() if base is None else base
    bd, bg, br = base.design, base.groups, base.resolution
    if bg is None or br is None or not verify_frame(bd, bg, br) or bg.type_string() != "2^4":
        raise DesignError("base must be a verified Kirkman frame of type 2^4")
    owner = bg.group_of()
    local = {p: bg.groups[owner[p]].index(p) for p in range(bd.v)}
    if (0, 2, 4) not in bd.block_index or any(bg.groups[j][0] != 2 * j for j in range(3)):
        raise DesignError("base frame needs the block {0_0, 0_1, 0_2} on points 0, 2, 4")
    # per base block: its RGDD classes mapped to output points
    inflated: dict[int, list[list[tuple[int, int, int]]]] = {}
    for bi, blk in enumerate(bd.blocks):
        gs = [int(owner[p]) for p in blk]
        xs = [local[p] for p in blk]
        rg = rgdd_4_3_coloured(*[c[g] + 4 * x for g, x in zip(gs, xs)], delta)
        pts = [8 * g + 4 * x + i for g, x in zip(gs, xs) for i in range(4)]
        inflated[bi] = [[tuple(pts[q] for q in rg.design.blocks[b]) for b in cls] for cls in rg.resolution.classes]
    classes, missing = [], []
    for ci, cls in enumerate(br.classes):
        for k in range(4):
            classes.append([blk for bi in cls for blk in inflated[bi][k]])
            missing.append(br.missing[ci])
    design, res = assemble(32, classes, missing)
    groups = GroupPartition(tuple(tuple(range(8 * j, 8 * j + 8)) for j in range(4)))
    col = Colouring(tuple((c[p // 8] + p % 8) % delta for p in range(32)), delta)
    out = System(design, res, groups, col, name="frame(8^4) coloured")
    certify_frame(out)
    if len({x % delta for x in c[:3]}) > 1 and (0, 8, 16) not in design.block_index:
        raise ConstructionError("frame(8^4) lost the block {0_0, 0_1, 0_2}")
    return out


def _weak_kts9_fill(colours: Sequence[int], inf_colour: int, delta: int) -> System:
    """First relabelling of the stored KTS(9) (point 8 standing for the
    infinite point) with no monochromatic block."""
    from .. import catalog

    k9 = catalog.kts9()
    col = Colouring(tuple(colours) + (inf_colour,), delta)
    for perm in itertools.permutations(range(9)):
        d = k9.design.relabel(perm)
        if is_weak(d, col):
            index = d.block_index
            res = Resolution(tuple(tuple(index[tuple(sorted(perm[p] for p in k9.design.blocks[bi]))] for bi in cls)
                                   for cls in k9.resolution.classes))
            return System(d, res, colouring=col, name="KTS(9) fill", info={"relabelling": perm})
    raise ConstructionError(f"no weak placement of KTS(9) on colours {list(colours)} + {inf_colour}")


def sts_to_kts_pipeline(s: System | None, q: System, point_map: Mapping[int, int] | None,
                        extra: Sequence[int] | None, delta: int) -> System:
    """KTS(8w + 1) containing a weakly coloured STS(v) as a subsystem.

    ``q`` is a quadruple system on w points. STS point ``p`` goes to q-point
    ``point_map[p]`` and STS block ``i`` together with q-point ``extra[i]``
    must be a block of ``q``. Output point ``8j + i`` is ``i_j`` (colour
    ``c(j) + i``), ``8w`` is the infinite point (colour 0), and every STS
    block {x, y, z} appears as {8 x', 8 y', 8 z'} for its images x', y', z'.
    Pass ``s=None`` to run on ``q`` alone.
    """
    if delta < 4:
        raise DesignError("the KTS(9) fills are only guaranteed weak for delta >= 4")
    qd = q.design
    if qd.k != 4 or not verify_pairwise_balance(qd):
        raise DesignError("q must be a verified quadruple system")
    w = qd.v
    colour = [None] * w
    tagged: dict[int, list[int]] = {}
    if s is not None and s.design.b:
        sd, scol = s.design, s.colouring
        if scol is None or scol.delta > delta or not is_weak(sd, scol):
            raise DesignError("s needs a weak colouring with at most delta colours")
        if point_map is None or extra is None or len(extra) != sd.b:
            raise DesignError("embedding needs a point map and one extra q-point per STS block")
        images = [point_map[p] for p in range(sd.v)]
        if len(set(images) | set(extra)) != sd.v + sd.b or set(images) & set(extra):
            raise DesignError("embedding is not injective on V and the extra points")
        index = qd.block_index
        for i, blk in enumerate(sd.blocks):
            ext = tuple(sorted([images[p] for p in blk] + [extra[i]]))
            if ext not in index:
                raise DesignError(f"STS block {blk} with extra point {extra[i]} is not a q-block")
            qi = index[ext]
            if qi in tagged:
                raise DesignError("two STS blocks share a q-block")
            tagged[qi] = sorted(images[p] for p in blk) + [extra[i]]
        for p in range(sd.v):
            colour[images[p]] = scol.colours[p]
    free = [j for j in range(w) if colour[j] is None]
    for r, j in enumerate(free):
        colour[j] = r % delta

    # one partial class per (q-point, index), built from every q-block through it
    per_point = {(j, k): [] for j in range(w) for k in range(4)}
    for qi, blk in enumerate(qd.blocks):
        order = tagged.get(qi, list(blk))
        fr = frame_8_4_coloured([colour[j] for j in order], delta)
        by_missing = [[] for _ in range(4)]
        for ci, cls in enumerate(fr.resolution.classes):
            by_missing[fr.resolution.missing[ci]].append(cls)
        for pos, j in enumerate(order):
            for k, cls in enumerate(by_missing[pos]):
                per_point[(j, k)].extend(tuple(8 * order[p // 8] + p % 8 for p in fr.design.blocks[bi])
                                         for bi in cls)
    keys = sorted(per_point)
    classes = [per_point[key] for key in keys]
    missing = [j for j, _ in keys]
    design, res = assemble(8 * w, classes, missing)
    groups = GroupPartition(tuple(tuple(range(8 * j, 8 * j + 8)) for j in range(w)))
    col = Colouring(tuple((colour[p // 8] + p % 8) % delta for p in range(8 * w)), delta)
    frame = certify_frame(System(design, res, groups, col, name=f"frame(8^{w})"))
    fills = [_weak_kts9_fill(col.colours[8 * j: 8 * j + 8], 0, delta) for j in range(w)]
    out = frame_fill_one_point(frame, fills)
    out = System(out.design, out.resolution, colouring=out.colouring, name=f"KTS({8 * w + 1})",
                 info={"q_colours": tuple(colour), "embedded": tuple(tuple(8 * p for p in t[:3]) for t in tagged.values())})
    for blk in out.info["embedded"]:
        if blk not in out.design.block_index:
            raise ConstructionError(f"embedded block {blk} missing from the output")
    return certify_kts(out, 8 * w + 1)
