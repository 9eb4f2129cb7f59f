from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

import oracles as O
from treegroups import analysis as A
from treegroups import perm as P
from treegroups.group import SubgroupSpec
from treegroups.groups import grigorchuk, gupta_sidki, trivial_group, wreath_commensurated, wreath_tower
from treegroups.tree import DegreeSequence, index_to_vertex, level_vertices, vertex_to_index

GRIG = grigorchuk()
GS = gupta_sidki(3)
K2 = wreath_tower(2)
O2 = wreath_commensurated(2, parent=K2)


def brute_rist(spec, v, n):
    """Elements of the level-n quotient fixing every leaf outside the subtree at v."""
    q = spec.level_quotient(n)
    k = len(v)
    outside = [i for i in range(q.degree) if index_to_vertex(i, n, spec.degrees)[:k] != tuple(v)]
    return {g for g in O.closure(q.gens, q.degree) if all(g[i] == i for i in outside)}


def brute_derived(elems, n):
    comms = {O.pmul(O.pmul(O.pinv(x), O.pinv(y)), O.pmul(x, y)) for x in elems for y in elems}
    return O.closure(comms, n)


def test_level_quotient_examples():
    assert A.level_quotient(GRIG, 1).order() == 2
    assert A.level_quotient(GRIG, 2).order() == 8
    assert A.level_quotient(K2, 2).order() == 60 ** 6
    from treegroups.group import LevelBudgetExceeded
    with pytest.raises(LevelBudgetExceeded):
        A.level_quotient(GRIG, 19)


def test_level_transitivity():
    assert A.check_level_transitive(trivial_group(), 1) == [False]
    assert A.check_level_transitive(GRIG, 8) == [True] * 8
    assert A.check_level_transitive(GS, 5) == [True] * 5
    for n in range(1, 6):
        q = GRIG.level_quotient(n)
        assert O.orbit(q.gens, 0) == set(range(2 ** n))


def test_rist_quotient_examples():
    assert A.rist_quotient(GRIG, (), 4).order() == GRIG.level_quotient(4).order()
    r = A.rist_quotient(GRIG, (0,), 3)
    assert r.order() == len(brute_rist(GRIG, (0,), 3)) == 8
    # K_2 rist at a first-level vertex: the A5 acting below it
    assert A.rist_quotient(K2, (0,), 2).order() == 60
    with pytest.raises(ValueError):
        A.rist_quotient(GRIG, (0, 0, 0), 2)


def test_rist_quotient_against_brute_force():
    for n in (2, 3, 4):
        for k in range(0, n + 1):
            for v in level_vertices(k, GRIG.degrees):
                assert A.rist_quotient(GRIG, v, n).order() == len(brute_rist(GRIG, v, n))


def test_rist_level_report_examples():
    assert A.rist_level_report(GRIG, 0, 3).index == 1
    rep = A.rist_level_report(K2, 1, 2)
    assert rep.index == 60
    assert rep.vertex_orders == [60] * 5
    assert rep.is_direct_product and rep.commuting
    table = A.rist_index_table(GRIG, 1, range(2, 7))
    assert table.values == [2, 2, 16, 16, 16]
    assert table.monotone_nondecreasing and table.stabilized_window
    table2 = A.rist_index_table(GRIG, 2, range(2, 7))
    assert table2.values == [8, 8, 256, 1024, 1024]


def test_rist_index_brute_force_small_levels():
    for n in (2, 3, 4):
        q = GRIG.level_quotient(n)
        elems = set()
        for v in level_vertices(1, GRIG.degrees):
            elems |= brute_rist(GRIG, v, n)
        r = O.closure(elems, q.degree)
        assert A.rist_level_report(GRIG, 1, n).index == q.order() // len(r)


def test_ji_examples():
    c = A.ji_criterion_table(GRIG, 0, [1])
    assert c.values == [2]
    t = A.ji_criterion_table(GRIG, 1, range(2, 7))
    assert t.values == [4, 16, 64, 256, 256]
    assert t.monotone_nondecreasing
    assert A.ji_criterion_table(K2, 1, [2]).values == [1]
    assert A.ji_criterion_table(GRIG, 0, range(1, 7)).values == [2, 4, 8, 8, 8, 8]


def test_ji_brute_force_small_levels():
    for n in (2, 3):
        elems = set()
        for v in level_vertices(1, GRIG.degrees):
            elems |= brute_rist(GRIG, v, n)
        r = O.closure(elems, 2 ** n)
        d = brute_derived(r, 2 ** n)
        assert A.ji_criterion_table(GRIG, 1, [n]).values == [len(r) // len(d)]


def test_commensuration_examples():
    gen = O2.generators[0]
    t = A.commensuration_table(K2, O2, [gen], range(1, 3))[0]
    assert t.values == [1, 1]
    t = A.commensuration_table(wreath_tower(3), wreath_commensurated(3), [wreath_tower(3).generators["x"]],
                               range(1, 4))[0]
    assert t.values == [4, 4, 4] and t.stabilized_window
    assert [r.extra["reverse"] for r in t.rows] == [4, 4, 4]
    b = SubgroupSpec.from_words(GRIG, ["b"], normal=True)
    t = A.commensuration_table(GRIG, b, [GRIG.element("a")], range(1, 7))[0]
    assert t.values == [1] * 6
    assert all(r.extra["reverse"] == 1 for r in t.rows)


def test_commensuration_brute_force_level_one():
    k1 = wreath_tower(1)
    o1 = wreath_commensurated(1, parent=k1)
    x = k1.generators["x"].truncate(1)
    h = O.closure(o1.level_quotient(1).gens, 5)
    conj = {O.pmul(O.pmul(x, y), O.pinv(x)) for y in h}
    assert len(h) // len(h & conj) == 4
    assert A.commensuration_table(k1, o1, [k1.generators["x"]], [1])[0].values == [4]


def test_commensuration_element_outside_group():
    o1 = wreath_commensurated(1)
    alien = wreath_tower(1)
    from treegroups.elements import rooted
    odd = rooted(DegreeSequence.constant(5), (1, 0, 2, 3, 4))
    with pytest.raises(A.NotInGroup):
        A.commensuration_table(alien, o1, [odd], [1])


def test_commensuration_parallel_matches_serial():
    k3 = wreath_tower(2)
    o = wreath_commensurated(2, parent=k3)
    elems = [k3.generators["x"], k3.generators["x@1"]]
    serial = A.commensuration_table(k3, o, elems, range(1, 3))
    par = A.commensuration_table(k3, o, elems, range(1, 3), jobs=2)
    assert [t.to_dict() for t in serial] == [t.to_dict() for t in par]


def test_commensuration_overflow_marked():
    t = A.commensuration_table(K2, SubgroupSpec.trivial(K2), [K2.generators["x"]], [1], cap=1)[0]
    assert t.values == [1]
    t = A.commensuration_table(K2, SubgroupSpec.whole(K2), [K2.generators["x"]], [2], cap=1)[0]
    assert t.values == [1]
    t = A.commensuration_table(K2, O2, [K2.generators["x"]], [2], cap=2)[0]
    assert t.values == [None] and not t.complete


def test_infinite_index_examples():
    t = A.infinite_index_evidence(GRIG, SubgroupSpec.whole(GRIG), range(1, 5))
    assert t.values == [1, 1, 1, 1] and t.constant_from == 1
    o3 = wreath_commensurated(3)
    t = A.infinite_index_evidence(o3.parent, o3, range(1, 4))
    assert t.values == [5, 5 ** 6, 5 ** 31] and t.strictly_increasing
    assert t.values[2] == (60 // 12) ** ((5 ** 3 - 1) // 4)
    k = SubgroupSpec.from_words(GRIG, ["a*b*a*b"], normal=True)
    t = A.infinite_index_evidence(GRIG, k, range(1, 7))
    assert t.values == [2, 4, 16, 16, 16, 16]
    assert t.stabilized_window and t.constant_from == 3


def test_normal_closure_index_brute_force():
    k = SubgroupSpec.from_words(GRIG, ["a*b*a*b"], normal=True)
    for n in (1, 2, 3):
        q = GRIG.level_quotient(n)
        elems = O.closure(q.gens, q.degree)
        w = GRIG.element("a*b*a*b").truncate(n)
        conjs = {O.pmul(O.pmul(g, w), O.pinv(g)) for g in elems}
        sub = O.closure(conjs, q.degree)
        assert A.infinite_index_evidence(GRIG, k, [n]).values == [len(elems) // len(sub)]


def test_containment_examples():
    cert = A.containment_level(GRIG, SubgroupSpec.whole(GRIG), 3, depth=4)
    assert cert.level == 0
    b = SubgroupSpec.from_words(GRIG, ["b"], normal=True)
    cert = A.containment_level(GRIG, b, 3, depth=5)
    assert cert is not None and cert.level == 1
    assert A.verify_certificate(GRIG, b, cert)
    h5 = b.level_quotient(5)
    assert all(h5.contains(g) for g in cert.generators)
    assert A.containment_level(GRIG, SubgroupSpec.trivial(GRIG), 3, depth=6) is None


def test_containment_not_normal():
    h = SubgroupSpec.from_words(GRIG, ["b"])
    with pytest.raises(A.NotNormal) as info:
        A.containment_level(GRIG, h, 2, depth=3)
    assert info.value.level == 2
    assert "a" in info.value.witness


def test_schlichting_examples():
    s = A.schlichting_approximation(K2, SubgroupSpec.whole(K2), 1)
    assert s.coset_count == 1 and s.kernel_order == 60
    k1 = wreath_tower(1)
    s = A.schlichting_approximation(k1, wreath_commensurated(1, parent=k1), 1)
    assert (s.coset_count, s.image_order, s.kernel_order, s.transitive) == (5, 60, 1, True)
    s = A.schlichting_approximation(K2, O2, 2, cap=20000)
    assert s.coset_count == 15625 and s.transitive
    assert s.kernel_order == 1 == s.core_order
    assert s.image_order * s.kernel_order == 60 ** 6
    assert s.coset_count * O2.level_quotient(2).order() == 60 ** 6
    s = A.schlichting_approximation(K2, O2, 2, cap=100)
    assert s.overflow and s.kernel_order is None


def test_branch_verdicts():
    tr = A.check_level_transitive(trivial_group(), 3)
    assert A.branch_verdict(tr, [], []) == "fails-transitivity"
    rist = [A.rist_index_table(GRIG, 1, range(1, 7))]
    assert A.branch_verdict([True] * 6, rist, [True]) == "branch-evidence"
    grow = [A.rist_index_table(GS, 2, range(2, 5))]
    assert A.branch_verdict([True] * 4, grow, [True]) == "weakly-branch-evidence"
    assert A.branch_verdict([True] * 4, grow, [False]) == "inconclusive"


def test_index_table_flags_recomputed():
    t = A.IndexTable("x", [A.IndexRow(3, 5), A.IndexRow(1, 7), A.IndexRow(2, 5)])
    assert [r.level for r in t.rows] == [1, 2, 3]
    assert not t.monotone_nondecreasing
    t.rows[0].value = 1
    assert t.monotone_nondecreasing
    assert not t.stabilized_window
    t.window = 2
    assert t.stabilized_window


# -- properties -------------------------------------------------------------

_RIST: dict = {}


def rist(spec, v, n):
    key = (spec.name, v, n)
    if key not in _RIST:
        _RIST[key] = A.rist_quotient(spec, v, n)
    return _RIST[key]


def conj_action(g, v, spec, n):
    """Image of a level-k vertex under a level-n permutation."""
    k = len(v)
    leaf = vertex_to_index(v + (0,) * (n - k), spec.degrees)
    return index_to_vertex(g[leaf], n, spec.degrees)[:k]


CASES = [(GRIG, 5), (GS, 3), (K2, 2)]


@given(st.sampled_from(range(len(CASES))), st.integers(0, 2 ** 30), st.data())
def test_rist_conjugation_covariance(i, s, data):
    spec, n = CASES[i]
    q = spec.level_quotient(n)
    g = q.random_element(random.Random(s))
    k = data.draw(st.integers(0, min(2, n)))
    v = data.draw(st.sampled_from(list(level_vertices(k, spec.degrees))))
    w = conj_action(g, v, spec, n)
    r_v, r_w = rist(spec, v, n), rist(spec, w, n)
    assert r_v.order() == r_w.order()
    assert all(r_w.contains(P.conj(g, x)) for x in r_v.gens)


@given(st.sampled_from(range(len(CASES))), st.data())
def test_rist_disjoint_and_direct(i, data):
    spec, n = CASES[i]
    k = data.draw(st.integers(1, min(2, n)))
    verts = list(level_vertices(k, spec.degrees))
    v = data.draw(st.sampled_from(verts))
    w = data.draw(st.sampled_from(verts))
    rv, rw = rist(spec, v, n), rist(spec, w, n)
    support = set(range(*_leaf_span(spec, v, n)))
    for x in rv.gens:
        assert all(x[p] == p for p in range(len(x)) if p not in support)
    if v != w:
        for x in rv.gens:
            for y in rw.gens:
                assert P.mul(x, y) == P.mul(y, x)


def _leaf_span(spec, v, n):
    from treegroups.tree import leaves_below
    r = leaves_below(v, n, spec.degrees)
    return r.start, r.stop
