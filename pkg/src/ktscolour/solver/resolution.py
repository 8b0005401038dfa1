"""Recover a resolution (parallel classes) from a bare block set.

Exact cover over (point, class) items: choosing "block B goes to class c"
covers the items (p, c) for p in B, and every item must be covered exactly
once. Labels start interchangeable, so the blocks through one point are
pinned to classes 0..r-1 first. Propagation removes a label from every block
meeting a block that holds it, and places a label at a point when only one
block through that point can still take it. Branching picks the (point, class)
pair with the fewest candidate blocks. A node cap triggers a restart with a
shuffled block order (the cap doubles each time); after ``restarts`` capped
tries the search runs uncapped, so NONE is only reported after exhausting it.

Given an automorphism of the design, the search can instead look only for
resolutions that the automorphism permutes: classes are chosen whole (each
must contain the lowest unused block) and closed under the automorphism as
soon as they are placed. That space is far smaller, which is what makes
cyclically generated systems tractable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..core import Design, DesignError, Permutation, Resolution, verify_resolution

from .colouring import SAT, TIMEOUT, UNSAT
from .kernels import PAUSED, CoverState
from .kernels import UNSAT as UNSAT_CODE

_CHUNK = 100_000

NONE = UNSAT


@dataclass
class ResolutionOutcome:
    status: str
    resolution: Resolution | None = None
    nodes: int = 0
    seconds: float = 0.0
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status == SAT


class _Timeout(Exception):
    pass


def _invariant_search(design: Design, auto: Permutation, deadline: float | None) -> tuple[list | None, int]:
    """Resolutions mapped to themselves by ``auto`` (classes may be permuted)."""
    v = design.v
    full = (1 << v) - 1
    index = design.block_index
    masks = [sum(1 << p for p in b) for b in design.blocks]
    image = [index.get(auto.apply_block(b), -1) for b in design.blocks]
    if -1 in image:
        raise DesignError("the given permutation is not an automorphism of the design")
    by_min = [[] for _ in range(v)]
    for bi, b in enumerate(design.blocks):
        by_min[b[0]].append(bi)
    used = [False] * design.b
    classes: list[frozenset] = []
    nodes = 0

    def orbit(cls: frozenset) -> list[frozenset] | None:
        out = [cls]
        cur = cls
        while True:
            cur = frozenset(image[bi] for bi in cur)
            if cur == cls:
                return out
            if any(used[bi] for bi in cur) or any(cur & prev for prev in out):
                return None
            out.append(cur)

    def candidates(first: int):
        cur = [first]

        def rec(cov: int):
            if cov == full:
                yield frozenset(cur)
                return
            p = (~cov & (cov + 1)).bit_length() - 1
            for bi in by_min[p]:
                if not used[bi] and masks[bi] & cov == 0:
                    cur.append(bi)
                    yield from rec(cov | masks[bi])
                    cur.pop()

        yield from rec(masks[first])

    def place() -> bool:
        nonlocal nodes
        first = next((bi for bi in range(design.b) if not used[bi]), None)
        if first is None:
            return True
        for cls in candidates(first):
            nodes += 1
            if deadline is not None and nodes % 256 == 0 and time.perf_counter() > deadline:
                raise _Timeout
            orb = orbit(cls)
            if orb is None:
                continue
            for c in orb:
                for bi in c:
                    used[bi] = True
            classes.extend(orb)
            if place():
                return True
            del classes[len(classes) - len(orb):]
            for c in orb:
                for bi in c:
                    used[bi] = False
        return False

    return ([sorted(c) for c in classes] if place() else None), nodes


def find_resolution(design: Design, budget: float | None = None, seed: int = 0,
                    node_cap: int = 50_000, restarts: int = 6, kernel=None,
                    automorphism: Permutation | None = None) -> ResolutionOutcome:
    """Partition the blocks of a design into parallel classes, or prove none exists.

    With ``automorphism`` the answer is restricted to resolutions that it
    permutes, and NONE then only rules those out.
    """
    t0 = time.perf_counter()
    v, k = design.v, design.k
    if v == 0 or v % k or design.b % (v // k):
        raise DesignError(f"v={v}, b={design.b} cannot be split into parallel classes of {k}-blocks")
    if k == 3 and v % 6 != 3:
        raise DesignError(f"v={v} is not congruent to 3 mod 6, so no Kirkman resolution exists")
    r = design.b // (v // k)
    if r > 62:
        raise DesignError(f"{r} classes exceed the 62-label limit of the bitmask search")
    info = {"node_cap": node_cap, "attempts": 0}
    degree = np.bincount(design.array.ravel(), minlength=v)
    if (degree != r).any():
        return ResolutionOutcome(UNSAT, None, 0, time.perf_counter() - t0, info)
    deadline = None if budget is None else t0 + budget
    if automorphism is not None:
        info["automorphism"] = True
        try:
            found, nodes = _invariant_search(design, automorphism, deadline)
        except _Timeout:
            return ResolutionOutcome(TIMEOUT, None, 0, time.perf_counter() - t0, info)
        if found is None:
            return ResolutionOutcome(UNSAT, None, nodes, time.perf_counter() - t0, info)
        res = Resolution(tuple(tuple(c) for c in sorted(found, key=min)))
        if not verify_resolution(design, res):
            raise RuntimeError("invariant search produced an invalid resolution")
        return ResolutionOutcome(SAT, res, nodes, time.perf_counter() - t0, info)
    rng = np.random.default_rng(seed)
    perm = np.arange(design.b)
    cap: int | None = node_cap
    total = 0
    while True:
        info["attempts"] += 1
        if info["attempts"] > restarts:
            cap = None
        # shuffled block order on restarts; labels are mapped back afterwards
        state = CoverState(design.array[perm], v, r, pivot=int(design.array[perm[0], 0]))
        limit = 0
        status = PAUSED
        while status == PAUSED:
            limit += _CHUNK if cap is None else min(_CHUNK, cap - limit)
            status = state.run(limit, kernel)
            if status == PAUSED:
                if deadline is not None and time.perf_counter() > deadline:
                    total += state.nodes
                    return ResolutionOutcome(TIMEOUT, None, total, time.perf_counter() - t0, info)
                if cap is not None and limit >= cap:
                    break
        total += state.nodes
        if status == PAUSED:
            perm = rng.permutation(design.b)
            cap *= 2
            continue
        if status == UNSAT_CODE:
            return ResolutionOutcome(UNSAT, None, total, time.perf_counter() - t0, info)
        labels = np.empty(design.b, dtype=np.int64)
        labels[perm] = state.lab
        classes = [np.flatnonzero(labels == c).tolist() for c in range(r)]
        classes.sort(key=min)
        res = Resolution(tuple(tuple(c) for c in classes))
        if not verify_resolution(design, res):
            raise RuntimeError("exact cover produced an invalid resolution")
        return ResolutionOutcome(SAT, res, total, time.perf_counter() - t0, info)
