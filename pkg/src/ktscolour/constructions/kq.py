"""Kirkman triple systems K(Q) of order 2v+1 built from a quadruple system Q
of order v, and the two colourings they inherit from colourings of Q.

Encoding: ``q_i = i``, ``q_i' = v + i`` and the infinite point is ``2v``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Sequence

from ..core import Colouring, Design, DesignError, Resolution, System, block_colour_counts, is_weak, verify_pairwise_balance
from ._certify import ConstructionError, certify_kts


def _template(w: int, x: int, y: int, z: int, v: int) -> list[tuple[int, int, int]]:
    inf = 2 * v
    p = lambda a: v + a  # noqa: E731  (primed copy)
    return [
        (inf, w, p(w)), (inf, x, p(x)), (inf, y, p(y)), (inf, z, p(z)),
        (x, y, z), (w, y, p(z)), (p(x), w, z), (x, w, p(y)),
        (p(x), p(y), p(z)), (p(w), p(y), z), (x, p(w), p(z)), (p(x), p(w), y),
    ]


# the template splits into four classes, one through each infinite triple
_TEMPLATE_CLASSES = ((0, 4, 8), (1, 5, 9), (2, 6, 10), (3, 7, 11))


def _orders(q: System, ordering) -> list[tuple[int, int, int, int]]:
    qd = q.design
    if ordering == "sorted":
        return [tuple(b) for b in qd.blocks]
    if ordering == "written":
        written = q.info.get("written")
        if written is None:
            raise DesignError("this quadruple system has no written block order")
        return [tuple(b) for b in written]
    orders = [tuple(int(p) for p in b) for b in ordering]
    if sorted(tuple(sorted(b)) for b in orders) != sorted(qd.blocks):
        raise DesignError("explicit ordering must list every block of Q exactly once")
    return orders


def kq_build(q: System, ordering: str | Sequence[Sequence[int]] | None = None,
             resolve: bool = True, method: str = "assemble", budget: float | None = None) -> System:
    """K(Q): a KTS(9) on {inf, w, x, y, z, w', x', y', z'} for each block (w, x, y, z).

    ``ordering`` is "sorted", "written" (as stored with the system) or an
    explicit list of ordered blocks; the default is "written" when the system
    carries one and "sorted" otherwise. With ``method="assemble"`` the class of
    point a is {inf, a, a'} together with, for every block through a, the two
    template triples sharing a class with {inf, a, a'}; ``method="search"``
    asks the exact-cover solver instead. Either way the result is verified.
    """
    from ..solver import find_resolution

    qd = q.design
    if qd.k != 4 or not verify_pairwise_balance(qd):
        raise DesignError("K(Q) needs a verified quadruple system")
    if method not in ("assemble", "search"):
        raise DesignError(f"unknown resolution method {method!r}")
    if ordering is None:
        ordering = "written" if "written" in q.info else "sorted"
    v = qd.v
    inf = 2 * v
    orders = _orders(q, ordering)
    per_point: list[list[tuple[int, ...]]] = [[(i, v + i, inf)] for i in range(v)]
    blocks = set()
    for order in orders:
        trip = [tuple(sorted(t)) for t in _template(*order, v)]
        blocks.update(trip)
        for a, cls in zip(order, _TEMPLATE_CLASSES):
            per_point[a].extend(trip[t] for t in cls[1:])
    design = Design.from_blocks(2 * v + 1, sorted(blocks), 3)
    if not verify_pairwise_balance(design):
        raise ConstructionError("K(Q) is not a Steiner triple system")
    res = None
    if resolve and method == "assemble":
        index = design.block_index
        res = Resolution(tuple(tuple(index[b] for b in cls) for cls in per_point))
    elif resolve:
        found = find_resolution(design, budget=budget)
        if not found:
            raise ConstructionError(f"no resolution of K(Q) found ({found.status})")
        res = found.resolution
    label = ordering if isinstance(ordering, str) else "explicit"
    out = System(design, res, name=f"K(Q({v}))", info={"ordering": label, "method": method})
    return certify_kts(out, 2 * v + 1) if resolve else out


def _check_q_colouring(q: System, col: Colouring) -> None:
    if col.v != q.design.v or not is_weak(q.design, col):
        raise DesignError("Q needs a weak colouring of its points")


def kq_colour_2delta(q: System, colouring: Colouring | None = None, resolve: bool = True,
                     method: str = "assemble") -> System:
    """K(Q) with a weak 2*delta-colouring from a weak delta-colouring of Q.

    In each block, w is the lowest point whose colour is most frequent, so
    the other three are not monochromatic; q_i' gets colour(q_i) + delta and
    the infinite point colour 0.
    """
    col = colouring if colouring is not None else q.colouring
    if col is None:
        raise DesignError("kq_colour_2delta needs a colouring of Q")
    _check_q_colouring(q, col)
    delta = col.delta
    orders = []
    for blk in q.design.blocks:
        freq = Counter(col.colours[p] for p in blk)
        top = max(freq.values())
        w = next(p for p in blk if freq[col.colours[p]] == top)
        orders.append((w,) + tuple(p for p in blk if p != w))
    out = kq_build(q, orders, resolve, method)
    v = q.design.v
    colours = list(col.colours) + [c + delta for c in col.colours] + [0]
    out = System(out.design, out.resolution, colouring=Colouring(tuple(colours), 2 * delta),
                 name=out.name, info={**out.info, "orders": tuple(orders)})
    if not is_weak(out.design, out.colouring):
        raise ConstructionError("K(Q) 2*delta-colouring is not weak")
    return certify_kts(out, 2 * v + 1) if resolve else out


def kq_colour_delta_plus_one(q: System, colouring: Colouring | None = None, resolve: bool = True,
                             method: str = "assemble") -> System:
    """K(Q) with a weak (delta+1)-colouring from a delta-colouring of Q giving
    every block at least three colours.

    (x, y, z) is the lexicographically least triple of distinct colours in the
    block; primed points copy colours and the infinite point gets colour delta.
    """
    col = colouring if colouring is not None else q.colouring
    if col is None:
        raise DesignError("kq_colour_delta_plus_one needs a colouring of Q")
    _check_q_colouring(q, col)
    if (block_colour_counts(q.design, col) < 3).any():
        raise DesignError("every block of Q must receive at least three colours")
    delta = col.delta
    orders = []
    for blk in q.design.blocks:
        xyz = next(t for t in itertools.combinations(blk, 3) if len({col.colours[p] for p in t}) == 3)
        w = next(p for p in blk if p not in xyz)
        orders.append((w,) + xyz)
    out = kq_build(q, orders, resolve, method)
    v = q.design.v
    colours = list(col.colours) * 2 + [delta]
    out = System(out.design, out.resolution, colouring=Colouring(tuple(colours), delta + 1),
                 name=out.name, info={**out.info, "orders": tuple(orders)})
    if not is_weak(out.design, out.colouring):
        raise ConstructionError("K(Q) (delta+1)-colouring is not weak")
    return certify_kts(out, 2 * v + 1) if resolve else out
