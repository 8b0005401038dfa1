"""Brute-force reference implementations used to check the solver.

Nothing here is clever: colourings are enumerated exhaustively (vectorised
in chunks so v = 15, delta = 3 stays in the seconds range) and resolutions
by plain recursion over candidate classes.
"""

from __future__ import annotations

import itertools

import numpy as np

CHUNK_BITS = 12


def _all_colourings(v: int, delta: int):
    """Yield arrays of shape (n, v) covering every map {0..v-1} -> {0..delta-1}."""
    low = min(v, CHUNK_BITS if delta == 2 else 8)
    tail = np.array(list(itertools.product(range(delta), repeat=low)), dtype=np.int8).reshape(-1, low)
    for head in itertools.product(range(delta), repeat=v - low):
        chunk = np.empty((tail.shape[0], v), dtype=np.int8)
        chunk[:, : v - low] = head
        chunk[:, v - low:] = tail
        yield chunk


def naive_colourings(blocks, v: int, delta: int, equitable: bool = False, required_type=None,
                     min_colours: int = 2, rainbow_class=None):
    """Yield every colouring (as a tuple) meeting the constraints."""
    arr = np.array(blocks, dtype=np.int64).reshape(-1, len(blocks[0]) if blocks else 3)
    want = None if required_type is None else sorted(required_type)
    for chunk in _all_colourings(v, delta):
        ok = np.ones(chunk.shape[0], dtype=bool)
        if arr.size:
            cols = np.sort(chunk[:, arr], axis=2)
            distinct = 1 + (cols[:, :, 1:] != cols[:, :, :-1]).sum(axis=2)
            ok &= (distinct >= min(min_colours, arr.shape[1])).all(axis=1)
            if rainbow_class is not None:
                ok &= (distinct[:, list(rainbow_class)] == 3).all(axis=1)
        if equitable or want is not None:
            counts = np.stack([(chunk == c).sum(axis=1) for c in range(delta)], axis=1)
            if equitable:
                ok &= counts.max(axis=1) - counts.min(axis=1) <= 1
            if want is not None:
                sizes = np.sort(counts, axis=1)
                nz = [sorted(x for x in row if x) for row in sizes.tolist()]
                ok &= np.array([row == [x for x in want if x] for row in nz], dtype=bool)
        for row in chunk[ok]:
            yield tuple(int(c) for c in row)


def naive_colourable(blocks, v: int, delta: int, **constraints) -> bool:
    return next(naive_colourings(blocks, v, delta, **constraints), None) is not None


def naive_chromatic(blocks, v: int, max_delta: int = 4) -> int | None:
    if not blocks:
        return 1
    for delta in range(2, max_delta + 1):
        if naive_colourable(blocks, v, delta):
            return delta
    return None


def naive_resolutions(blocks, v: int, limit: int | None = None) -> list[list[list[int]]]:
    """All partitions of ``blocks`` into parallel classes (class order canonical)."""
    k = len(blocks[0])
    per_class = v // k
    r = len(blocks) // per_class
    sets = [frozenset(b) for b in blocks]
    found: list[list[list[int]]] = []
    used = [False] * len(blocks)

    def classes_from(first: int):
        def rec(cur: list[int], covered: frozenset):
            if len(cur) == per_class:
                yield list(cur)
                return
            for j in range(cur[-1] + 1, len(blocks)):
                if not used[j] and not (sets[j] & covered):
                    cur.append(j)
                    yield from rec(cur, covered | sets[j])
                    cur.pop()

        yield from rec([first], sets[first])

    def place(acc):
        if limit is not None and len(found) >= limit:
            return
        if len(acc) == r:
            found.append([list(c) for c in acc])
            return
        first = used.index(False)
        for cls in classes_from(first):
            for j in cls:
                used[j] = True
            acc.append(cls)
            place(acc)
            acc.pop()
            for j in cls:
                used[j] = False

    if len(blocks) % per_class == 0 and v % k == 0:
        place([])
    return found


def naive_is_weak(blocks, colours) -> bool:
    return all(len({colours[p] for p in b}) > 1 for b in blocks)


def naive_pair_balanced(blocks, v: int) -> bool:
    seen = {}
    for b in blocks:
        for pair in itertools.combinations(sorted(b), 2):
            seen[pair] = seen.get(pair, 0) + 1
    return len(seen) == v * (v - 1) // 2 and all(c == 1 for c in seen.values())
