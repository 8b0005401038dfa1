from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..core import Colouring, Design, DesignError, Resolution, block_colour_counts, colour_type, is_weak
from . import kernels

SAT, UNSAT, TIMEOUT = "SAT", "UNSAT", "TIMEOUT"
INDETERMINATE = "INDETERMINATE"

# kernel decisions between wall-clock checks
_CHUNK = 200_000


@dataclass(frozen=True)
class SearchOptions:
    delta: int
    equitable: bool = False
    required_type: tuple[int, ...] | None = None
    min_colours_per_block: int = 2
    rainbow: Resolution | None = None
    time_budget: float | None = None
    ordering: str = "degree"
    seed: int = 0
    threads: int = 1
    split_depth: int = 4

    def __post_init__(self):
        if self.delta < 1:
            raise DesignError("delta must be positive")
        if self.min_colours_per_block < 2:
            raise DesignError("min_colours_per_block must be at least 2")
        if self.rainbow is not None and self.delta != 3:
            raise DesignError("rainbow search needs delta = 3")
        if self.ordering not in ("degree", "index", "random"):
            raise DesignError(f"unknown ordering policy {self.ordering!r}")
        if self.required_type is not None:
            object.__setattr__(self, "required_type", tuple(int(x) for x in self.required_type))


@dataclass
class SearchOutcome:
    status: str
    colouring: Colouring | None = None
    nodes: int = 0
    seconds: float = 0.0
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status == SAT


def _targets(v: int, opts: SearchOptions) -> list[int]:
    delta = opts.delta
    if opts.required_type is not None:
        parts = sorted(opts.required_type)
        if sum(parts) != v or len(parts) > delta or min(parts, default=1) < 0:
            raise DesignError(f"colour type {opts.required_type} does not fit v={v}, delta={delta}")
        return [0] * (delta - len(parts)) + parts
    if opts.equitable or opts.rainbow is not None:
        q, r = divmod(v, delta)
        return [q] * (delta - r) + [q + 1] * r
    return [v] * delta


def _tiekey(design: Design, opts: SearchOptions) -> np.ndarray:
    v = design.v
    if opts.ordering == "index":
        order = np.arange(v)
    elif opts.ordering == "random":
        order = np.random.default_rng(opts.seed).permutation(v)
    else:
        deg = np.bincount(design.array.ravel(), minlength=v) if design.b else np.zeros(v, int)
        order = np.lexsort((np.arange(v), -deg))
    key = np.empty(v, dtype=np.int64)
    key[order] = np.arange(v)
    return key


def _check(design: Design, col: Colouring, opts: SearchOptions, bmin: np.ndarray) -> None:
    """Independent re-verification of a certificate; raises on a kernel bug."""
    if not is_weak(design, col):
        raise RuntimeError("solver produced a colouring with a monochromatic block")
    if design.b and (block_colour_counts(design, col) < np.minimum(bmin, design.k)).any():
        raise RuntimeError("solver produced a colouring violating a per-block colour bound")
    sizes = sorted(colour_type(col, include_empty=True).elements())
    if opts.required_type is not None and sorted(x for x in sizes if x) != sorted(x for x in opts.required_type if x):
        raise RuntimeError("solver produced a colouring of the wrong type")
    if (opts.equitable or opts.rainbow is not None) and sizes and sizes[-1] - sizes[0] > 1:
        raise RuntimeError("solver produced a non-equitable colouring")


class _Run:
    """One constrained problem, possibly split into independent subtrees."""

    def __init__(self, design: Design, opts: SearchOptions, bmin: np.ndarray, deadline: float | None, kernel):
        self.design = design
        self.opts = opts
        self.bmin = bmin
        self.deadline = deadline
        self.kernel = kernel
        self.target = _targets(design.v, opts)
        self.first = [c == 0 or self.target[c] != self.target[c - 1] for c in range(opts.delta)]
        self.tiekey = _tiekey(design, opts)
        self.nodes = 0

    def state(self, fixed: np.ndarray) -> kernels.SearchState:
        blocks = self.design.array if self.design.b else np.zeros((0, self.design.k), dtype=np.int64)
        return kernels.SearchState(blocks, self.design.v, self.bmin, self.target, self.first, self.tiekey, fixed)

    def solve(self, fixed: np.ndarray) -> tuple[str, np.ndarray | None, int]:
        st = self.state(fixed)
        limit = 0
        while True:
            limit += _CHUNK
            status = st.run(limit, self.kernel)
            if status == kernels.SAT:
                return SAT, st.col.copy(), st.nodes
            if status == kernels.UNSAT:
                return UNSAT, None, st.nodes
            if self.deadline is not None and time.perf_counter() > self.deadline:
                return TIMEOUT, None, st.nodes

    def prefixes(self, depth: int) -> list[np.ndarray]:
        """Symmetry-reduced colour assignments to the first ``depth`` points of the static order."""
        v, delta = self.design.v, self.opts.delta
        pts = np.argsort(self.tiekey)[:depth]
        out: list[np.ndarray] = []

        def rec(i: int, fixed: np.ndarray, used: list[int]):
            if i == len(pts):
                out.append(fixed.copy())
                return
            for c in range(delta):
                if used[c] == self.target[c]:
                    continue
                if not used[c] and not self.first[c] and not used[c - 1]:
                    continue
                fixed[pts[i]] = c
                used[c] += 1
                rec(i + 1, fixed, used)
                used[c] -= 1
            fixed[pts[i]] = -1

        rec(0, np.full(v, -1, dtype=np.int64), [0] * delta)
        return out

    def run(self) -> tuple[str, np.ndarray | None]:
        v = self.design.v
        threads = max(1, self.opts.threads)
        if threads == 1 or v <= self.opts.split_depth:
            status, col, self.nodes = self.solve(np.full(v, -1, dtype=np.int64))
            return status, col
        subproblems = self.prefixes(self.opts.split_depth)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(self.solve, subproblems))
        self.nodes = sum(r[2] for r in results)
        for status, col, _ in results:
            if status == SAT:
                return SAT, col
        if any(r[0] == TIMEOUT for r in results):
            return TIMEOUT, None
        return UNSAT, None


def search_weak_colouring(design: Design, options: SearchOptions, kernel=None) -> SearchOutcome:
    """Exhaustive search for a weak colouring meeting the constraints in ``options``.

    ``kernel`` overrides the compiled search function (tests pass the plain
    Python one to compare the two).
    """
    t0 = time.perf_counter()
    deadline = None if options.time_budget is None else t0 + options.time_budget
    bmin = np.full(design.b, options.min_colours_per_block, dtype=np.int64)
    if options.min_colours_per_block > design.k:
        return SearchOutcome(UNSAT, seconds=time.perf_counter() - t0, info={"reason": "min colours exceeds k"})
    runs = [None] if options.rainbow is None else range(len(options.rainbow.classes))
    total_nodes = 0
    timed_out = False
    for r in runs:
        b = bmin.copy()
        if r is not None:
            b[list(options.rainbow.classes[r])] = 3
        run = _Run(design, options, b, deadline, kernel)
        status, col = run.run()
        total_nodes += run.nodes
        if status == SAT:
            colouring = Colouring(tuple(int(c) for c in col), options.delta)
            _check(design, colouring, options, b)
            info = {} if r is None else {"rainbow_class": r}
            return SearchOutcome(SAT, colouring, total_nodes, time.perf_counter() - t0, info)
        if status == TIMEOUT:
            timed_out = True
            break
    return SearchOutcome(TIMEOUT if timed_out else UNSAT, None, total_nodes, time.perf_counter() - t0)


@dataclass
class ChromaticOutcome:
    value: int | str
    outcomes: dict[int, SearchOutcome]

    @property
    def determined(self) -> bool:
        return self.value != INDETERMINATE


def chromatic_number(design: Design, max_delta: int = 8, budget: float | None = None,
                     threads: int = 1) -> ChromaticOutcome:
    """Least delta with a weak delta-colouring, proving UNSAT for every smaller delta >= 2."""
    if design.b == 0:
        return ChromaticOutcome(1, {})
    t0 = time.perf_counter()
    outcomes: dict[int, SearchOutcome] = {}
    for delta in range(2, max_delta + 1):
        left = None if budget is None else budget - (time.perf_counter() - t0)
        if left is not None and left <= 0:
            return ChromaticOutcome(INDETERMINATE, outcomes)
        out = search_weak_colouring(design, SearchOptions(delta, time_budget=left, threads=threads))
        outcomes[delta] = out
        if out.status == SAT:
            return ChromaticOutcome(delta, outcomes)
        if out.status == TIMEOUT:
            return ChromaticOutcome(INDETERMINATE, outcomes)
    return ChromaticOutcome(INDETERMINATE, outcomes)
