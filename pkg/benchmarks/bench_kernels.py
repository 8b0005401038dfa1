"""Compiled vs plain-Python search kernels on fixed workloads.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs once per kernel to warm up (compilation for numba), then
``--repeat`` timed runs; the median is reported along with node counts, which
must agree between the two kernels.
"""

from __future__ import annotations

import argparse
import statistics
import time

from ktscolour import catalog
from ktscolour.constructions import kq_build
from ktscolour.solver import SearchOptions, find_resolution, jit_available, search_weak_colouring
from ktscolour.solver import kernels


def colour_workloads():
    yield "kts15 delta=2 (UNSAT)", catalog.kts15().design, SearchOptions(2)
    yield "tv33-1 delta=3 (UNSAT)", catalog.tv_kts33(1).design, SearchOptions(3)
    yield "sigma21 delta=3 equitable", catalog.sigma_kts(21).design, SearchOptions(3, equitable=True)


def resolution_workloads():
    yield "K(Q(13)) resolution", kq_build(catalog.q13(), "written", resolve=False).design


def _time(fn, repeat: int):
    fn()
    runs = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs), result


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not jit_available():
        print("numba disabled (KTSCOLOUR_NO_NUMBA set or numba missing); both columns run Python")
    print(f"{'workload':34} {'nodes':>8} {'numba s':>10} {'python s':>10} {'speedup':>8}")
    rows = []
    for name, design, opts in colour_workloads():
        tj, oj = _time(lambda: search_weak_colouring(design, opts, kernel=kernels.search), args.repeat)
        tp, op = _time(lambda: search_weak_colouring(design, opts, kernel=kernels.search_py), args.repeat)
        assert (oj.status, oj.nodes) == (op.status, op.nodes), name
        rows.append((name, oj.nodes, tj, tp))
    for name, design in resolution_workloads():
        tj, oj = _time(lambda: find_resolution(design, kernel=kernels.cover), args.repeat)
        tp, op = _time(lambda: find_resolution(design, kernel=kernels.cover_py), args.repeat)
        assert (oj.status, oj.nodes) == (op.status, op.nodes), name
        rows.append((name, oj.nodes, tj, tp))
    for name, nodes, tj, tp in rows:
        print(f"{name:34} {nodes:>8} {tj:>10.4f} {tp:>10.4f} {tp / tj:>7.1f}x")


if __name__ == "__main__":
    main()
