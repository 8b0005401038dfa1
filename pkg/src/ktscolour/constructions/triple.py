"""Tripling: a KTS(3v) with an equitable 3-colouring becomes a KTS(9v)."""

from __future__ import annotations

from ..core import Colouring, DesignError, GroupPartition, System, assemble, colour_type, is_equitable, is_weak
from ._certify import certify_gdd, certify_kts


def td3_classes(v: int, a, b, c) -> list[list[tuple[int, int, int]]]:
    """Parallel classes of the resolvable TD(3, v) on groups ``a, b, c`` (v odd).

    Class ``d`` holds the blocks {a_i, b_(i+d), c_(2i+d)}.
    """
    return [[(a[i], b[(i + d) % v], c[(2 * i + d) % v]) for i in range(v)] for d in range(v)]


def td3_resolvable(v: int) -> System:
    """Resolvable transversal design TD(3, v) on points 0..3v-1, groups of size v."""
    if v < 1 or v % 2 == 0:
        raise DesignError(f"the cyclic resolvable TD(3, v) needs odd v, got {v}")
    a, b, c = range(v), range(v, 2 * v), range(2 * v, 3 * v)
    design, res = assemble(3 * v, td3_classes(v, a, b, c))
    out = System(design, res, GroupPartition((tuple(a), tuple(b), tuple(c))), name=f"TD(3,{v})")
    return certify_gdd(out, resolvable=True)


# Group triples (A_i, B_j, C_k) of the three transversal-design families.
# Each family hits every pair of copies exactly once per colour pairing.
_FAMILIES = (
    ((0, 0, 1), (1, 1, 2), (2, 2, 0)),
    ((0, 1, 0), (1, 2, 1), (2, 0, 2)),
    ((0, 2, 2), (1, 0, 0), (2, 1, 1)),
)


def tripling(kts: System, colouring: Colouring | None = None) -> System:
    """KTS(9v) from a KTS(3v) carrying an equitable weak 3-colouring.

    Three copies of the input are joined by nine resolvable TD(3, v). Point
    ``s*3v + i*v + r`` is the ``r``-th point of colour ``i`` in copy ``s``; it
    keeps colour ``i``, so the output is weak, equitable and of three times
    the input's colour type.
    """
    col = colouring if colouring is not None else kts.colouring
    design, res = kts.design, kts.resolution
    if col is None or res is None:
        raise DesignError("tripling needs a resolved KTS with a colouring")
    if col.delta != 3 or not is_equitable(col) or not is_weak(design, col):
        raise DesignError("tripling needs an equitable weak 3-colouring")
    n = design.v
    v = n // 3
    members = col.classes()
    rank = [0] * n
    for cls in members:
        for r, p in enumerate(cls):
            rank[p] = r

    def point(s: int, p: int) -> int:
        return s * n + col.colours[p] * v + rank[p]

    def part(s: int, i: int) -> list[int]:
        return [s * n + i * v + r for r in range(v)]

    classes = []
    for cls in res.classes:
        classes.append([tuple(point(s, p) for p in design.blocks[bi]) for s in range(3) for bi in cls])
    for family in _FAMILIES:
        per_td = [td3_classes(v, part(0, i), part(1, j), part(2, k)) for i, j, k in family]
        for d in range(v):
            classes.append([blk for td in per_td for blk in td[d]])
    out_design, out_res = assemble(3 * n, classes)
    colours = tuple((p % n) // v for p in range(3 * n))
    out = System(out_design, out_res, colouring=Colouring(colours, 3), name=f"KTS({3 * n}) tripled",
                 info={"input_type": dict(colour_type(col))})
    return certify_kts(out, 3 * n)
