"""Frame-based constructions: rainbow filling, 4-GDD inflation, blow-up and
one-point filling of Kirkman frames."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..core import (
    Colouring,
    Design,
    DesignError,
    GroupPartition,
    Resolution,
    System,
    assemble,
    is_weak,
    rainbow_check,
    verify_frame,
    verify_gdd,
    verify_kts,
    verify_subsystem,
)
from ._certify import certify_frame, certify_gdd, certify_kts


@dataclass(frozen=True)
class Ingredient:
    """A rainbow KTS(3t + w) whose points ``sub`` carry a rainbow sub-KTS(w)."""

    system: System
    sub: tuple[int, ...]


def default_ingredients() -> dict[int, Ingredient]:
    from .. import catalog

    k9 = catalog.kts9()
    rainbow = next(c for c in k9.colourings.values()
                   if rainbow_check(k9.design, k9.resolution, c))
    return {2: Ingredient(k9.with_colouring(rainbow), tuple(k9.info["rainbow_block"]))}


# Each frame triple {x, y, z} spreads over three colour layers as three
# partial classes; layer offsets per point.
_GADGET = (
    ((0, 0, 1), (1, 1, 2), (2, 2, 0)),
    ((0, 2, 2), (1, 0, 0), (2, 1, 1)),
    ((0, 1, 0), (1, 2, 1), (2, 0, 2)),
)


def _check_ingredient(t: int, w: int, ing: Ingredient) -> tuple[list[int], list[int], int]:
    sysm = ing.system
    d, res, col = sysm.design, sysm.resolution, sysm.colouring
    if d.v != 3 * t + w or len(ing.sub) != w:
        raise DesignError(f"ingredient for groups of size {t} must be a KTS({3 * t + w}) with a {w}-point subsystem")
    if res is None or col is None or not verify_kts(d, res):
        raise DesignError(f"ingredient KTS({d.v}) needs a resolution and colouring")
    rb = rainbow_check(d, res, col)
    if not rb:
        raise DesignError(f"ingredient KTS({d.v}) is not rainbow")
    if not verify_subsystem(d, res, ing.sub):
        raise DesignError(f"ingredient KTS({d.v}) has no sub-KTS on {ing.sub}")
    subset = set(ing.sub)
    if [sum(1 for p in ing.sub if col.colours[p] == c) for c in range(3)] != [w // 3] * 3:
        raise DesignError("ingredient subsystem is not rainbow")
    inner = {bi for bi, b in enumerate(d.blocks) if subset.issuperset(b)}
    r1 = [ci for ci, cls in enumerate(res.classes) if inner & set(cls)]
    r2 = [ci for ci in range(len(res.classes)) if ci not in r1]
    rc = rb.info["rainbow_class"]
    if rc not in r1:
        raise DesignError("the rainbow class of an ingredient must contain subsystem blocks")
    return r1, r2, rc


def rainbow_frame_construction(frame: System, w: int = 3,
                               ingredients: Mapping[int, Ingredient] | None = None) -> System:
    """Rainbow KTS(3v + w) from a Kirkman frame on v points.

    Point ``3x + i`` is frame point ``x`` in colour layer ``i``; the ``w``
    extra points ``3v + 3a + i`` form the rainbow subsystem, again coloured
    ``i``. ``ingredients`` maps each group size ``t`` to a rainbow KTS(3t + w)
    with a rainbow sub-KTS(w); the default covers t = 2, w = 3.
    """
    ingredients = default_ingredients() if ingredients is None else ingredients
    d, groups, fres = frame.design, frame.groups, frame.resolution
    if groups is None or fres is None or not verify_frame(d, groups, fres):
        raise DesignError("rainbow_frame_construction needs a verified Kirkman frame")
    if w % 6 != 3:
        raise DesignError(f"subsystem order {w} is not a KTS order")
    v = d.v
    n = 3 * v + w

    # layered frame blocks, grouped by the group each partial class misses
    expanded: dict[int, list[list[tuple[int, int, int]]]] = {g: [] for g in range(len(groups.groups))}
    for ci, cls in enumerate(fres.classes):
        layers = [[], [], []]
        for bi in cls:
            x, y, z = d.blocks[bi]
            for j, gadget in enumerate(_GADGET):
                for a, b, c in gadget:
                    layers[j].append((3 * x + a, 3 * y + b, 3 * z + c))
        expanded[fres.missing[ci]].extend(layers)

    rainbow_cls: list[tuple] = []
    extra: list[list[tuple]] = []
    classes: list[list[tuple]] = []
    checked: dict[int, tuple] = {}
    for g, members in enumerate(groups.groups):
        t = len(members)
        if t not in ingredients:
            raise DesignError(f"no ingredient for groups of size {t}")
        ing = ingredients[t]
        if t not in checked:
            checked[t] = _check_ingredient(t, w, ing)
        r1, r2, rc = checked[t]
        kd, kres, kcol = ing.system.design, ing.system.resolution, ing.system.colouring
        subset = set(ing.sub)
        seen = [0, 0, 0]
        pmap = {}
        for p in range(kd.v):
            if p in subset:
                continue
            c = kcol.colours[p]
            pmap[p] = 3 * members[seen[c]] + c
            seen[c] += 1
        seen = [0, 0, 0]
        for p in sorted(subset):
            c = kcol.colours[p]
            pmap[p] = 3 * v + 3 * seen[c] + c
            seen[c] += 1
        keep_sub = g == 0

        def image(ci: int) -> list[tuple]:
            return [tuple(pmap[p] for p in kd.blocks[bi]) for bi in kres.classes[ci]
                    if keep_sub or not subset.issuperset(kd.blocks[bi])]

        for ci, part in zip(r2, expanded[g]):
            classes.append(image(ci) + part)
        rainbow_cls.extend(image(rc))
        rest = [ci for ci in r1 if ci != rc]
        if not extra:
            extra = [[] for _ in rest]
        for slot, ci in zip(extra, rest):
            slot.extend(image(ci))
    classes = [rainbow_cls] + extra + classes
    design, res = assemble(n, classes)
    col = Colouring(tuple(p % 3 for p in range(n)), 3)
    out = System(design, res, colouring=col, name=f"KTS({n}) rainbow",
                 info={"rainbow_class": 0, "sub": tuple(range(3 * v, n))})
    return certify_kts(out, n, rainbow=True)


def quadruple_to_4gdd(q: System) -> System:
    """4-GDD of type 4^u from a quadruple system on u points.

    Point ``4p + i`` is copy ``i`` of point ``p`` and has colour ``i``; every
    block of the quadruple system is replaced by the 16 blocks of the 4-GDD of
    type 4^4. No block is monochromatic and each holds at most two points of
    one colour.
    """
    from .. import catalog

    qd = q.design
    if qd.k != 4:
        raise DesignError("quadruple_to_4gdd needs a design with blocks of size 4")
    if qd.v == 4 and qd.b == 1:
        base = catalog.gdd_4x4()
        return System(base.design, groups=base.groups, colouring=base.colouring, name="4-GDD(4^4)")
    if qd.v % 12 not in (1, 4):
        raise DesignError(f"no quadruple system on {qd.v} points")
    tuples = catalog.gdd_4x4().info["tuples"]
    blocks = []
    for blk in qd.blocks:
        for tup in tuples:
            blocks.append(tuple(4 * p + i for p, i in zip(blk, tup)))
    u = qd.v
    design = Design.from_blocks(4 * u, blocks, 4)
    groups = GroupPartition(tuple(tuple(range(4 * p, 4 * p + 4)) for p in range(u)))
    col = Colouring(tuple(p % 4 for p in range(4 * u)), 4)
    out = System(design, groups=groups, colouring=col, name=f"4-GDD(4^{u})")
    certify_gdd(out)
    if not is_weak(design, col):
        raise DesignError("4-GDD colouring has a monochromatic block")
    return out


def gdd_blowup(gdd: System, g: int, ingredient: System) -> System:
    """Kirkman frame of type (8g)^u from a 4-GDD of type 4^u.

    ``ingredient`` is a Kirkman frame of type (2g)^4; point ``p*2g + i`` is
    copy ``i`` of GDD point ``p`` and inherits its colour.
    """
    gd, ggroups = gdd.design, gdd.groups
    if gd.k != 4 or ggroups is None or not verify_gdd(gd, ggroups):
        raise DesignError("gdd_blowup needs a verified 4-GDD")
    idn, igroups, ires = ingredient.design, ingredient.groups, ingredient.resolution
    if igroups is None or ires is None or not verify_frame(idn, igroups, ires):
        raise DesignError("gdd_blowup needs a verified Kirkman frame as ingredient")
    m = 2 * g
    if len(igroups.groups) != 4 or any(len(x) != m for x in igroups.groups):
        raise DesignError(f"ingredient frame must have type {m}^4")
    # ingredient point -> (group position, rank within group)
    where = {}
    for pos, grp in enumerate(igroups.groups):
        for r, p in enumerate(grp):
            where[p] = (pos, r)
    by_missing: list[list[tuple[int, ...]]] = [[] for _ in range(4)]
    for ci, cls in enumerate(ires.classes):
        by_missing[ires.missing[ci]].append(tuple(cls))

    owner = ggroups.group_of()
    # one output class per (GDD point, index of ingredient class)
    per_point = {(p, s): [] for p in range(gd.v) for s in range(g)}
    for blk in gd.blocks:
        def img(bi: int) -> tuple[int, ...]:
            return tuple(blk[where[x][0]] * m + where[x][1] for x in idn.blocks[bi])

        for pos, p in enumerate(blk):
            for s, cls in enumerate(by_missing[pos]):
                per_point[(p, s)].extend(img(bi) for bi in cls)
    classes = [per_point[key] for key in sorted(per_point)]
    missing = [int(owner[p]) for p, _ in sorted(per_point)]
    design, res = assemble(gd.v * m, classes, missing)
    groups = GroupPartition(tuple(tuple(p * m + i for p in grp for i in range(m)) for grp in ggroups.groups))
    col = None
    if gdd.colouring is not None:
        col = Colouring(tuple(gdd.colouring.colours[x // m] for x in range(gd.v * m)), gdd.colouring.delta)
    out = System(design, res, groups, col, name=f"frame({len(groups.groups[0])}^{len(groups.groups)})")
    return certify_frame(out)


def align_fill(fill: System, colours: Sequence[int], inf_colour: int) -> System:
    """Relabel a coloured KTS(g+1) so that it can fill a group.

    ``colours[i]`` is the colour of the ``i``-th group point; the returned
    copy has point ``g`` (the infinite point) coloured ``inf_colour`` and
    point ``i`` coloured ``colours[i]``, with colour classes matched by size
    and fill colours permuted as needed.
    """
    d, col = fill.design, fill.colouring
    g = d.v - 1
    if col is None or len(colours) != g:
        raise DesignError("align_fill needs a coloured fill on one more point than the group")
    want: dict[int, list[int]] = {}
    for i, c in enumerate(colours):
        want.setdefault(c, []).append(i)
    want.setdefault(inf_colour, []).append(g)
    have = col.classes()
    have_sizes = sorted(((len(m), c) for c, m in enumerate(have) if m), reverse=True)
    want_sizes = sorted(((len(m), c) for c, m in want.items()), reverse=True)
    if [s for s, _ in have_sizes] != [s for s, _ in want_sizes]:
        raise DesignError("fill colour type does not match the group plus the infinite point")
    mapping = [0] * d.v
    for (_, hc), (_, wc) in zip(have_sizes, want_sizes):
        for p, q in zip(have[hc], want[wc]):
            mapping[p] = q
    new_col = Colouring(tuple(colours) + (inf_colour,), max(max(colours), inf_colour) + 1)
    res = fill.resolution
    new_design = d.relabel(mapping)
    index = new_design.block_index
    new_res = None if res is None else Resolution(tuple(
        tuple(index[tuple(sorted(mapping[p] for p in d.blocks[bi]))] for bi in cls) for cls in res.classes))
    return System(new_design, new_res, colouring=new_col, name=fill.name, info=fill.info)


def frame_fill_one_point(frame: System, fills: Sequence[System]) -> System:
    """KTS(gu + 1) from a Kirkman frame of type g^u and one KTS(g+1) per group.

    Fill ``j`` lives on points 0..g, where point ``i < g`` stands for the
    ``i``-th point of group ``j`` and point ``g`` for the new point ``gu``.
    Colourings, when all present, are merged; they must agree on the new point.
    """
    d, groups, fres = frame.design, frame.groups, frame.resolution
    if groups is None or fres is None or not verify_frame(d, groups, fres):
        raise DesignError("frame_fill_one_point needs a verified Kirkman frame")
    if len(fills) != len(groups.groups):
        raise DesignError(f"{len(groups.groups)} groups but {len(fills)} fills")
    n = d.v + 1
    inf = d.v
    classes = []
    colours = None if frame.colouring is None else list(frame.colouring.colours) + [None]
    delta = 0 if frame.colouring is None else frame.colouring.delta
    for j, (grp, fill) in enumerate(zip(groups.groups, fills)):
        fd, fr = fill.design, fill.resolution
        if fd.v != len(grp) + 1 or fr is None or not verify_kts(fd, fr):
            raise DesignError(f"fill {j} must be a resolved KTS({len(grp) + 1})")
        pmap = list(grp) + [inf]
        partials = [ci for ci in range(len(fres.classes)) if fres.missing[ci] == j]
        for ci, fc in zip(partials, fr.classes):
            classes.append([d.blocks[bi] for bi in fres.classes[ci]]
                           + [tuple(pmap[p] for p in fd.blocks[bi]) for bi in fc])
        if colours is not None:
            if fill.colouring is None:
                colours = None
                continue
            for p, c in enumerate(fill.colouring.colours):
                q = pmap[p]
                if colours[q] is not None and colours[q] != c:
                    raise DesignError(f"fill {j} recolours point {q}")
                colours[q] = c
            delta = max(delta, fill.colouring.delta)
    design, res = assemble(n, classes)
    col = None if colours is None else Colouring(tuple(colours), delta)
    out = System(design, res, colouring=col, name=f"KTS({n})")
    return certify_kts(out, n)
