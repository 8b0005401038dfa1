import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktscolour import catalog
from ktscolour.core import Design, DesignError, Permutation, colour_type, is_weak, verify_resolution
from ktscolour.solver import (
    SAT,
    TIMEOUT,
    UNSAT,
    SearchOptions,
    chromatic_number,
    find_resolution,
    search_weak_colouring,
)
from ktscolour.solver import kernels
from oracles import naive_chromatic, naive_colourable, naive_resolutions


def _solve(design, delta, kernel=None, **kw):
    return search_weak_colouring(design, SearchOptions(delta, **kw), kernel=kernel)


# -- known answers -----------------------------------------------------------

def test_kts9_has_no_weak_2_colouring():
    assert _solve(catalog.kts9().design, 2).status == UNSAT


def test_kts9_type_2_3_4():
    out = _solve(catalog.kts9().design, 3, required_type=(2, 3, 4))
    assert out.status == SAT
    assert sorted(colour_type(out.colouring).elements()) == [2, 3, 4]


def test_tv1_not_3_colourable():
    assert _solve(catalog.tv_kts33(1).design, 3).status == UNSAT


def test_single_block_two_colours():
    d = Design.from_blocks(3, [(0, 1, 2)], 3)
    out = _solve(d, 2)
    assert out.status == SAT and is_weak(d, out.colouring)


def test_min_colours_above_k_is_unsat():
    d = Design.from_blocks(3, [(0, 1, 2)], 3)
    assert _solve(d, 4, min_colours_per_block=4).status == UNSAT


@pytest.mark.parametrize("name,chi", [("kts9", 3), ("kts15", 3), ("q13", 2), ("tv33-1", 4), ("tv33-12", 4)])
def test_chromatic_numbers(name, chi):
    out = chromatic_number(catalog.get(name).design)
    assert out.determined and out.value == chi
    assert all(out.outcomes[d].status == UNSAT for d in range(2, chi))


def test_chromatic_of_empty_design():
    assert chromatic_number(Design(4, 3, ())).value == 1


def test_chromatic_budget_exhausted_is_indeterminate():
    out = chromatic_number(catalog.tv_kts33(2).design, budget=0.0)
    assert not out.determined


def test_rainbow_search_kts9():
    s = catalog.kts9()
    out = _solve(s.design, 3, rainbow=s.resolution)
    assert out.status == SAT
    cls = s.resolution.classes[out.info["rainbow_class"]]
    for bi in cls:
        assert len({out.colouring.colours[p] for p in s.design.blocks[bi]}) == 3


def test_timeout_reported():
    out = _solve(catalog.tv_kts33(3).design, 3, time_budget=0.0)
    assert out.status in (TIMEOUT, UNSAT)


# -- options -----------------------------------------------------------------

@pytest.mark.parametrize("kw", [
    dict(delta=0),
    dict(delta=3, min_colours_per_block=1),
    dict(delta=4, rainbow=catalog.kts9().resolution),
    dict(delta=3, ordering="bogus"),
])
def test_search_options_validation(kw):
    with pytest.raises(DesignError):
        SearchOptions(**kw)


def test_required_type_must_fit():
    with pytest.raises(DesignError):
        _solve(catalog.kts9().design, 3, required_type=(2, 2, 2))


@pytest.mark.parametrize("ordering", ["degree", "index", "random"])
def test_orderings_agree(ordering):
    d = catalog.kts15().design
    assert _solve(d, 2, ordering=ordering).status == UNSAT
    assert _solve(d, 3, ordering=ordering, seed=5).status == SAT


def test_deterministic():
    d = catalog.sigma_kts(21).design
    a = _solve(d, 3, equitable=True)
    b = _solve(d, 3, equitable=True)
    assert a.colouring == b.colouring and a.nodes == b.nodes


def test_threads_agree_with_single():
    for name, delta in [("kts15", 2), ("kts15", 3), ("tv33-1", 3), ("kts9", 3)]:
        d = catalog.get(name).design
        one = _solve(d, delta)
        many = _solve(d, delta, threads=3, split_depth=3)
        assert one.status == many.status
        if many.colouring is not None:
            assert is_weak(d, many.colouring)


def test_monotone_in_delta():
    d = catalog.kts15().design
    statuses = [_solve(d, delta).status for delta in range(2, 6)]
    first = statuses.index(SAT)
    assert all(s == SAT for s in statuses[first:])


# -- oracle agreement ----------------------------------------------------------

@pytest.mark.parametrize("name", ["kts9", "kts15"])
@pytest.mark.parametrize("delta", [2, 3])
def test_oracle_agreement_catalog(name, delta):
    d = catalog.get(name).design
    assert bool(_solve(d, delta)) == naive_colourable(list(d.blocks), d.v, delta)


def test_oracle_agreement_kts9_constraints():
    d = catalog.kts9().design
    blocks = list(d.blocks)
    assert bool(_solve(d, 3, equitable=True)) == naive_colourable(blocks, 9, 3, equitable=True)
    assert bool(_solve(d, 3, min_colours_per_block=3)) == naive_colourable(blocks, 9, 3, min_colours=3)
    for t in [(1, 4, 4), (3, 3, 3), (1, 1, 7), (2, 2, 5)]:
        assert bool(_solve(d, 3, required_type=t)) == naive_colourable(blocks, 9, 3, required_type=t)
    res = catalog.kts9().resolution
    for cls in res.classes:
        assert naive_colourable(blocks, 9, 3, equitable=True, rainbow_class=cls)


def _sub_design(data, max_points=12):
    """A random sub-hypergraph of tv33-1 induced on a handful of points, relabelled."""
    d = catalog.tv_kts33(1).design
    pts = sorted(data.draw(st.sets(st.integers(0, 32), min_size=3, max_size=max_points)))
    idx = {p: i for i, p in enumerate(pts)}
    blocks = [tuple(idx[p] for p in b) for b in d.blocks if all(p in idx for p in b)]
    if not blocks:
        blocks = [(0, 1, 2)]
    return Design.from_blocks(len(pts), blocks, 3)


@settings(max_examples=30)
@given(st.data())
def test_oracle_agreement_random_subsystems(data):
    d = _sub_design(data)
    delta = data.draw(st.integers(2, 3))
    got = _solve(d, delta)
    assert bool(got) == naive_colourable(list(d.blocks), d.v, delta)
    if got:
        assert is_weak(d, got.colouring)


@settings(max_examples=30)
@given(st.data())
def test_oracle_agreement_random_constraints(data):
    d = _sub_design(data, max_points=10)
    delta = data.draw(st.integers(2, 3))
    kind = data.draw(st.sampled_from(["equitable", "min3", "type"]))
    if kind == "equitable":
        kw, nk = dict(equitable=True), dict(equitable=True)
    elif kind == "min3":
        kw, nk = dict(min_colours_per_block=3), dict(min_colours=3)
    else:
        cut = sorted(data.draw(st.lists(st.integers(0, d.v), min_size=delta - 1, max_size=delta - 1)))
        parts = tuple(b - a for a, b in zip([0] + cut, cut + [d.v]))
        kw, nk = dict(required_type=parts), dict(required_type=parts)
    assert bool(_solve(d, delta, **kw)) == naive_colourable(list(d.blocks), d.v, delta, **nk)


@settings(max_examples=15)
@given(st.data())
def test_chromatic_matches_oracle(data):
    d = _sub_design(data, max_points=10)
    assert chromatic_number(d, max_delta=4).value == naive_chromatic(list(d.blocks), d.v, 4)


# -- kernels ---------------------------------------------------------------------

@pytest.mark.parametrize("name,delta,kw", [
    ("kts9", 2, {}), ("kts9", 3, dict(equitable=True)), ("kts15", 3, {}), ("tv33-1", 3, {}),
    ("sigma21", 3, dict(equitable=True)),
])
def test_search_kernels_agree(name, delta, kw):
    d = catalog.get(name).design
    a = _solve(d, delta, kernel=kernels.search, **kw)
    b = _solve(d, delta, kernel=kernels.search_py, **kw)
    assert (a.status, a.nodes, a.colouring) == (b.status, b.nodes, b.colouring)


def test_search_state_pause_resume_matches_single_run():
    d = catalog.tv_kts33(1).design
    args = (d.array, d.v, np.full(d.b, 2), [33] * 3, [True, False, False], np.arange(d.v), np.full(d.v, -1))
    whole = kernels.SearchState(*args)
    status = whole.run(10**9)
    step = kernels.SearchState(*args)
    limit, s = 0, kernels.PAUSED
    while s == kernels.PAUSED:
        limit += 7
        s = step.run(limit)
    assert s == status == kernels.UNSAT and step.nodes == whole.nodes


def test_fixed_prefix_is_respected():
    d = catalog.kts9().design
    fixed = np.full(9, -1)
    fixed[[0, 3, 6]] = [2, 1, 0]
    stt = kernels.SearchState(d.array, 9, np.full(d.b, 2), [9] * 3, [True, True, True], np.arange(9), fixed)
    assert stt.run(10**6) == kernels.SAT
    assert list(stt.col[[0, 3, 6]]) == [2, 1, 0]
    assert all(len(set(stt.col[list(b)])) > 1 for b in d.blocks)


def test_fixed_prefix_conflict():
    d = Design.from_blocks(3, [(0, 1, 2)], 3)
    stt = kernels.SearchState(d.array, 3, [2], [3, 3], [True, True], np.arange(3), np.zeros(3, dtype=np.int64))
    assert stt.run(100, kernels.search_py) == kernels.UNSAT


def test_cover_kernels_agree():
    d = catalog.kts15().design
    r = d.b // 5
    a = kernels.CoverState(d.array, d.v, r, int(d.array[0, 0]))
    b = kernels.CoverState(d.array, d.v, r, int(d.array[0, 0]))
    sa = a.run(10**7, kernels.cover)
    sb = b.run(10**7, kernels.cover_py)
    assert sa == sb == kernels.SAT
    assert a.nodes == b.nodes and (a.lab == b.lab).all()


# -- resolutions -----------------------------------------------------------------

def _as_sets(res):
    return sorted(sorted(c) for c in res.classes)


def test_kts9_resolution_is_the_unique_one():
    d = catalog.kts9().design
    out = find_resolution(d)
    assert out.status == SAT and verify_resolution(d, out.resolution)
    naive = naive_resolutions(list(d.blocks), 9)
    assert len(naive) == 1
    assert _as_sets(out.resolution) == sorted(sorted(c) for c in naive[0])


def test_kts15_resolution_with_kernels():
    d = catalog.kts15().design
    for kern in (kernels.cover, kernels.cover_py):
        out = find_resolution(d, kernel=kern)
        assert out.status == SAT and verify_resolution(d, out.resolution)


def test_rot33_resolution_via_automorphism():
    d = catalog.rotational_kts33().design
    shift = Permutation.from_cycles(33, [list(range(32))])
    out = find_resolution(d, automorphism=shift)
    assert out.status == SAT and verify_resolution(d, out.resolution)
    assert out.info["automorphism"]


def test_non_automorphism_rejected():
    d = catalog.kts9().design
    with pytest.raises(DesignError):
        find_resolution(d, automorphism=Permutation.from_cycles(9, [[0, 1]]))


def test_resolution_bad_order():
    with pytest.raises(DesignError):
        find_resolution(Design.from_blocks(13, [(a, a + 1, a + 2) for a in range(0, 12, 3)], 3))


def test_resolution_irregular_is_unsat():
    bad = Design.from_blocks(9, [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 1, 3), (0, 4, 6), (2, 5, 7)], 3)
    assert find_resolution(bad).status == UNSAT


def test_resolution_unsat_regular():
    # regular but with two blocks that can never be separated: both through 0 and 1
    blocks = [(0, 1, 2), (0, 1, 3), (4, 5, 6), (4, 7, 8), (2, 5, 7), (3, 6, 8)]
    d = Design.from_blocks(9, blocks, 3)
    assert bool(naive_resolutions(blocks, 9)) == (find_resolution(d).status == SAT)


def test_resolution_timeout():
    d = catalog.tv_kts33(4).design
    out = find_resolution(d, budget=0.0, node_cap=10**9)
    assert out.status in (TIMEOUT, SAT)


def test_no_numba_flag_selects_python_path():
    import os
    import subprocess
    import sys

    code = ("from ktscolour.solver import jit_available, kernels;"
            "from ktscolour import catalog;"
            "from ktscolour.solver import chromatic_number;"
            "print(jit_available(), kernels.search is kernels.search_py, chromatic_number(catalog.kts9().design).value)")
    env = dict(os.environ, KTSCOLOUR_NO_NUMBA="1")
    done = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert done.stdout.split() == ["False", "True", "3"]
