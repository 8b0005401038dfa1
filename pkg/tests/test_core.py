import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ktscolour import catalog
from ktscolour.core import (
    Colouring,
    Design,
    DesignError,
    GroupPartition,
    Permutation,
    Resolution,
    System,
    admissible,
    assemble,
    colour_type,
    delete_point,
    is_equitable,
    is_weak,
    parse_type,
    partition_string,
    rainbow_check,
    verify_frame,
    verify_gdd,
    verify_kts,
    verify_pairwise_balance,
    verify_resolution,
    verify_subsystem,
)
from oracles import naive_is_weak, naive_pair_balanced


@pytest.fixture(scope="module")
def k9():
    return catalog.kts9()


def test_design_rejects_bad_blocks():
    with pytest.raises(DesignError):
        Design(3, 3, ((0, 0, 1),))
    with pytest.raises(DesignError):
        Design(3, 3, ((0, 1, 3),))
    with pytest.raises(DesignError):
        Design(4, 3, ((0, 1, 2), (0, 1, 2)))
    with pytest.raises(DesignError):
        Design(3, 3, ((0, 1),))


def test_pair_balance_examples(k9):
    rep = verify_pairwise_balance(k9.design)
    assert rep and rep.info["pairs"] == 36
    bad = verify_pairwise_balance(Design.from_blocks(4, [(0, 1, 2), (0, 1, 3)]))
    assert not bad
    assert (0, 1, 2) in bad.violations
    assert verify_pairwise_balance(catalog.q13().design)


def test_degenerate_sts3_flagged():
    rep = verify_pairwise_balance(Design(3, 3, ((0, 1, 2),)))
    assert rep and rep.info["degenerate"] == "STS(3)"


def test_resolution_examples(k9):
    assert verify_resolution(k9.design, k9.resolution)
    classes = [list(c) for c in k9.resolution.classes]
    classes[0][0], classes[1][0] = classes[1][0], classes[0][0]
    assert not verify_resolution(k9.design, Resolution(tuple(map(tuple, classes))))
    with pytest.raises(DesignError):
        verify_resolution(k9.design, Resolution(((0, 1, 99),)))


def test_delete_point_gives_frame(k9):
    d, g, r = delete_point(k9.design, k9.resolution, 0)
    assert d.v == 8 and d.b == 8 and len(r.classes) == 4
    assert g.type_string() == "2^4"
    assert verify_frame(d, g, r)
    assert sorted(r.missing) == [0, 1, 2, 3]
    with pytest.raises(DesignError):
        delete_point(catalog.kts3().design, catalog.kts3().resolution)


def test_gdd_examples(k9):
    gdd = catalog.gdd_4x4()
    assert verify_gdd(gdd.design, gdd.groups)
    singletons = GroupPartition(tuple((p,) for p in range(9)))
    assert verify_gdd(k9.design, singletons)
    # move one point of a block into another group's slot
    blocks = [list(b) for b in gdd.design.blocks]
    blocks[0][1] = blocks[0][0] + 1 if blocks[0][0] % 4 != 3 else blocks[0][0] - 1
    broken = Design.from_blocks(16, blocks, 4)
    assert not verify_gdd(broken, gdd.groups)


def test_frame_rejects_odd_group(k9):
    d, g, r = delete_point(k9.design, k9.resolution, 0)
    groups = list(g.groups)
    groups[0], groups[1] = groups[0] + (groups[1][0],), groups[1][1:]
    assert not verify_frame(d, GroupPartition(tuple(groups)), r)


def test_is_weak_examples(k9):
    classes9 = Colouring.from_classes(9, [[1, 4, 9], [2, 5, 7], [3, 6, 8]], base=1)
    assert is_weak(k9.design, classes9)
    mono = is_weak(k9.design, Colouring((0,) * 9, 1))
    assert not mono and mono.n_violations == 12
    tv = catalog.tv_kts33(1)
    assert is_weak(tv.design, Colouring.from_string("111221112211122233324433344433444"))


def test_colour_type_and_equitable():
    col = Colouring.from_classes(9, [[1], [2, 3, 5, 9], [4, 6, 7, 8]], base=1)
    assert colour_type(col) == {1: 1, 4: 2}
    assert not is_equitable(col)
    tv = Colouring.from_string("111221112211122233324433344433444")
    assert partition_string(colour_type(tv)) == "8^3 9^1"
    assert is_equitable(tv)
    assert not is_equitable(Colouring((0,) * 9, 2))
    assert parse_type("2^1 3^1 4^1") == [2, 3, 4]
    assert parse_type("8^3 9^1") == [8, 8, 8, 9]


def test_rainbow_examples(k9):
    rb = rainbow_check(k9.design, k9.resolution, k9.colourings["kts9-3x3"])
    assert rb and k9.design.blocks[k9.resolution.classes[rb.info["rainbow_class"]][0]] in k9.design.blocks
    cls = k9.resolution.classes[rb.info["rainbow_class"]]
    assert (0, 1, 2) in [k9.design.blocks[b] for b in cls]
    k15 = catalog.kts15()
    part = Colouring.from_classes(15, [[1, 4, 7, 13, 14], [2, 5, 6, 8, 9], [3, 10, 11, 12, 15]], base=1)
    assert rainbow_check(k15.design, k15.resolution, part)
    with pytest.raises(DesignError):
        rainbow_check(k9.design, k9.resolution, Colouring((0, 1, 2, 3, 0, 1, 2, 3, 0), 4))


def test_equitable_but_not_rainbow(k9):
    from oracles import naive_colourings

    equitable = [Colouring(c, 3) for c in naive_colourings(k9.design.blocks, 9, 3, equitable=True)]
    plain = [c for c in equitable if not rainbow_check(k9.design, k9.resolution, c)]
    assert plain, "some equitable weak 3-colouring of KTS(9) should have no rainbow class"
    assert is_weak(k9.design, plain[0]) and is_equitable(plain[0])


def test_subsystem_examples(k9):
    assert verify_subsystem(k9.design, k9.resolution, (0, 1, 2))
    assert not verify_subsystem(k9.design, k9.resolution, (0, 1, 5))


@pytest.mark.parametrize("kind,params,expected", [
    ("KTS", {"v": 33}, True), ("KTS", {"v": 13}, False), ("STS", {"v": 13}, True), ("STS", {"v": 11}, False),
    ("QS", {"v": 13}, True), ("QS", {"v": 16}, True), ("QS", {"v": 10}, False),
    ("frame", {"g": 2, "u": 4}, True), ("frame", {"g": 2, "u": 5}, False), ("frame", {"g": 8, "u": 4}, True),
    ("frame1", {"g": 4, "u": 3, "m": 10}, False), ("frame1", {"g": 4, "u": 3, "m": 4}, True),
])
def test_admissible(kind, params, expected):
    assert admissible(kind, **params) is expected


def test_admissible_unknown_kind():
    with pytest.raises(DesignError):
        admissible("hypercube", v=3)


def test_permutation_and_assemble():
    p = Permutation.from_cycles(5, [[0, 1, 2]])
    assert p.images == (1, 2, 0, 3, 4)
    assert p.power(3).images == tuple(range(5))
    assert p.apply_block((0, 2, 3)) == (0, 1, 3)
    with pytest.raises(DesignError):
        Permutation((0, 0, 1))
    d, r = assemble(3, [[(2, 1, 0)]])
    assert d.blocks == ((0, 1, 2),) and verify_kts(d, r)


def test_kts_counting_identities():
    for name in ("kts9", "kts15", "sigma21", "tv33-4"):
        s = catalog.get(name)
        v = s.design.v
        assert s.design.b == v * (v - 1) // 6
        assert len(s.resolution.classes) == (v - 1) // 2


def test_report_lines_are_prefixed(k9):
    lines = verify_kts(k9.design, k9.resolution).lines()
    assert lines[0] == "kts: ok"
    assert all(line.startswith("kts") for line in lines)


def test_violation_list_is_bounded():
    rep = is_weak(catalog.tv_kts33(1).design, Colouring((0,) * 33, 1))
    assert rep.n_violations == 176 and len(rep.violations) == 16


# -- properties ---------------------------------------------------------------

@st.composite
def kts_and_perm(draw):
    name = draw(st.sampled_from(["kts9", "kts15", "sigma21", "tv33-2"]))
    s = catalog.get(name)
    perm = draw(st.permutations(range(s.design.v)))
    return s, list(perm)


@given(kts_and_perm())
def test_relabelling_preserves_verifiers(case):
    s, perm = case
    d = s.design.relabel(perm)
    assert verify_pairwise_balance(d)
    assert naive_pair_balanced(d.blocks, d.v)


@given(st.sampled_from(["kts9", "kts15", "tv33-5"]), st.data())
def test_weak_matches_naive_and_refinement_is_monotone(name, data):
    s = catalog.get(name)
    v = s.design.v
    cols = data.draw(st.lists(st.integers(0, 2), min_size=v, max_size=v))
    col = Colouring(tuple(cols), 3)
    weak = bool(is_weak(s.design, col))
    assert weak == naive_is_weak(s.design.blocks, cols)
    # split one colour class by moving some of its points to a new colour
    target = data.draw(st.integers(0, 2))
    moved = data.draw(st.lists(st.booleans(), min_size=v, max_size=v))
    refined = Colouring(tuple(3 if (c == target and m) else c for c, m in zip(cols, moved)), 4)
    if weak:
        assert is_weak(s.design, refined)


@given(st.sampled_from(["kts9", "kts15", "sigma21", "sigma33", "tv33-9"]), st.data())
def test_delete_point_always_frame(name, data):
    s = catalog.get(name)
    p = data.draw(st.integers(0, s.design.v - 1))
    d, g, r = delete_point(s.design, s.resolution, p)
    assert verify_frame(d, g, r)
    assert g.type_string() == f"2^{(s.design.v - 1) // 2}"


def test_delete_then_fill_round_trip(k9):
    from ktscolour.constructions import frame_fill_one_point

    d, g, r = delete_point(k9.design, k9.resolution, 8)
    k3 = catalog.kts3()
    out = frame_fill_one_point(System(d, r, g), [k3] * 4)
    assert out.design.canonical_key() == k9.design.canonical_key()


def test_verifiers_are_pure(k9):
    before = (k9.design.blocks, k9.resolution.classes)
    a = verify_kts(k9.design, k9.resolution)
    b = verify_kts(k9.design, k9.resolution)
    assert a == b and before == (k9.design.blocks, k9.resolution.classes)
    assert not np.shares_memory(k9.design.array, np.zeros(1))
