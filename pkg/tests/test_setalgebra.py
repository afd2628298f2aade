import pytest
from hypothesis import given, settings, strategies as st

from subjcat.corpus import Category
from subjcat.setalgebra import (
    IntersectionRecord,
    best_overlaps,
    closeness,
    intersection_histogram,
    relate,
    similarity_sweep,
)

from helpers import cats


def cat(name, members, system="a"):
    return Category(system, name, frozenset(members))


def test_closeness_examples():
    a = cat("A", range(10))
    b = cat("B", [*range(9), *range(100, 111)])
    assert closeness(a, a) == 1.0
    assert closeness(cat("X", [1, 2]), cat("Y", [3])) == 0.0
    assert len(b.members) == 20
    assert closeness(a, b) == pytest.approx(0.9)
    with pytest.raises(ValueError):
        closeness(a, cat("E", []))


def test_identical_sets_are_equivalent():
    rep = relate(cats("a", {"A": {1, 2}, "B": {1, 2}}), [], same_system=True)
    assert rep.equivalences == {(("a", "A"), ("a", "B"))}
    assert rep.subsets == {(("a", "A"), ("a", "B")), (("a", "B"), ("a", "A"))}


def test_pure_and_impure_subsets():
    # P's only journal sits in P and its supersets S1, S2: pure.
    # Q is a subset of T, but journal 6 is also in U, which does not contain Q: not pure.
    rep = relate(
        cats("b", {"P": {1}, "S1": {1, 2}, "S2": {1, 3}, "Q": {5, 6}, "T": {5, 6, 7}, "U": {6, 8}, "Solo": {9}}),
        [],
        same_system=True,
    )
    assert rep.pure_subsets == {("b", "P")}
    assert ("b", "Q") in rep.subset_categories
    assert rep.supersets == {("b", "S1"), ("b", "S2"), ("b", "T")}
    assert rep.standalone == {("b", "Solo")}
    assert rep.supersets_of(("b", "P")) == {("b", "S1"), ("b", "S2")}
    s = rep.summary()
    assert (s["n_subset_categories"], s["n_superset_categories"], s["n_pure_subsets"], s["n_standalone"]) == (2, 3, 1, 1)
    assert s["n_intersecting"] == 6


def test_intersection_records_are_canonical():
    rep = relate(cats("a", {"B": {1, 2}, "A": {2, 3, 4}}), [], same_system=True)
    (rec,) = rep.intersections
    assert rec == IntersectionRecord(("a", "A"), ("a", "B"), 1, 0.5)
    assert IntersectionRecord.make(("a", "B"), ("a", "A"), 1, 2, 3) == rec


def test_cross_system_subsets_both_directions():
    left = cats("a", {"Dent": {1, 2, 3, 4}, "Lit": {9}})
    right = cats("b", {"Oral": {1, 2}, "Ortho": {3}, "Lit2": {9, 10}})
    rep = relate(left, right, same_system=False)
    assert (("b", "Oral"), ("a", "Dent")) in rep.subsets
    assert (("a", "Lit"), ("b", "Lit2")) in rep.subsets
    assert rep.summary()["n_left_with_right_subsets"] == 1
    assert rep.summary()["n_left_subset_of_right"] == 1
    assert rep.pure_subsets == set()
    assert rep.standalone == set()


def test_intersection_histogram():
    hist = intersection_histogram(cats("a", {"X": {1, 2}, "Y": {1, 3}, "Z": {1, 4}, "W": {7}}))
    assert hist == {("a", "W"): 0, ("a", "X"): 2, ("a", "Y"): 2, ("a", "Z"): 2}


def _brute_sweep(src, dst, step):
    out = []
    for t in range(step, 101, step):
        hits = 0
        for s in src:
            if any(len(s.members & d.members) / len(s.members) * 100 > t + 1e-9 for d in dst):
                hits += 1
        out.append((t, hits / len(src)))
    return out


def test_sweep_against_recount():
    src = cats("a", {"A": range(10), "B": range(10, 20), "C": range(5, 15), "D": [0, 19], "E": [3]})
    dst = cats("b", {"X": range(0, 7), "Y": range(12, 20), "Z": [3, 4, 5, 15]})
    assert similarity_sweep(src, dst, 5) == _brute_sweep(src, dst, 5)
    curve = dict(similarity_sweep(src, dst, 5))
    assert curve[5] == 1.0
    assert curve[100] == 0.0  # strict comparison: a full overlap is not "more than 100%"
    assert best_overlaps(src, dst)[("a", "E")] == 1


def test_sweep_rejects_bad_step():
    with pytest.raises(ValueError):
        similarity_sweep([], [], 7)
    with pytest.raises(ValueError):
        similarity_sweep([], [], 0)


# random category collections over a small universe
collections = st.dictionaries(
    st.sampled_from([f"K{i}" for i in range(8)]),
    st.frozensets(st.integers(0, 14), min_size=1, max_size=10),
    min_size=1,
    max_size=8,
)


@settings(max_examples=100, deadline=None)
@given(collections)
def test_relate_properties(mapping):
    cs = cats("a", mapping)
    rep = relate(cs, cs, same_system=True)
    by_ref = {c.ref: c for c in cs}
    for x in cs:
        for y in cs:
            assert closeness(x, y) == closeness(y, x)
            if x.ref != y.ref and x.members <= y.members:
                assert closeness(x, y) == 1.0
                assert (x.ref, y.ref) in rep.subsets
    for a, b in rep.equivalences:
        assert (a, b) in rep.subsets and (b, a) in rep.subsets
    for a, b in rep.subsets:
        if (b, a) in rep.subsets:
            assert (min(a, b), max(a, b)) in rep.equivalences
    for r in rep.pure_subsets:
        assert r in rep.subset_categories
    for r in rep.standalone:
        assert all(r not in (i.cat_a, i.cat_b) for i in rep.intersections if i.size > 0)
    for i in rep.intersections:
        a, b = by_ref[i.cat_a], by_ref[i.cat_b]
        assert i.size == len(a.members & b.members)
        assert i.closeness == pytest.approx(closeness(a, b))


@settings(max_examples=100, deadline=None)
@given(collections, collections)
def test_relate_swap_transposes(left_map, right_map):
    left, right = cats("a", left_map), cats("b", right_map)
    fwd = relate(left, right, same_system=False)
    back = relate(right, left, same_system=False)
    assert fwd.subsets == back.subsets  # pairs are (sub, super) in both views
    assert fwd.intersections == back.intersections
    assert fwd.equivalences == back.equivalences
    assert fwd.standalone == back.standalone


@settings(max_examples=100, deadline=None)
@given(collections, st.integers(0, 14))
def test_adding_member_never_lowers_intersections(mapping, extra):
    cs = cats("a", mapping)
    before = intersection_histogram(cs)
    name = sorted(mapping)[0]
    grown = dict(mapping)
    grown[name] = mapping[name] | {extra}
    after = intersection_histogram(cats("a", grown))
    assert all(after[r] >= n for r, n in before.items() if r == ("a", name))
    assert all(after[r] >= n for r, n in before.items())


@settings(max_examples=100, deadline=None)
@given(collections, collections, st.sampled_from([1, 2, 5, 10, 20, 25, 50]))
def test_sweep_monotone_and_matches_recount(src_map, dst_map, step):
    src, dst = cats("a", src_map), cats("b", dst_map)
    curve = similarity_sweep(src, dst, step)
    assert [t for t, _ in curve] == list(range(step, 101, step))
    fracs = [f for _, f in curve]
    assert all(x >= y for x, y in zip(fracs, fracs[1:]))
    assert curve == _brute_sweep(src, dst, step)
