from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genpers.generators import random_lawvere, random_poset
from genpers.metrics import (
    INF,
    HullProjection,
    LawvereMetric,
    LawvereProjection,
    MetricError,
    SuperlinearFamily,
    TabulatedProjection,
    WeightedProjection,
    adjoint_check,
    asym_hausdorff,
    check_superlinear,
    family_from_omega,
    fmt,
    hausdorff,
    monotone_hull,
    offset,
    omega_from_family,
    omega_from_lawvere,
    shift_family,
    shortest_path_closure,
    sup_metric_on_grid,
    value,
    weak_offset,
)
from genpers.proset import chain, grid_proset, subset_proset
from genpers.translations import Translation, enumerate_translations, identity, trans_leq

LINE3 = LawvereMetric.from_table([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_value_and_fmt():
    assert value("1/2") == Fraction(1, 2)
    assert value("inf") == INF
    assert fmt(INF) == "inf" and fmt(Fraction(3, 4)) == "3/4"
    assert value(2) + INF == INF


def test_lawvere_axioms_checked():
    with pytest.raises(MetricError):
        LawvereMetric.from_table([[0, 5, 1], [0, 0, 0], [0, 1, 0]])
    with pytest.raises(MetricError):
        LawvereMetric.from_table([[1]])
    d = LawvereMetric.from_table([[0, "inf"], [1, 0]])
    assert not d.is_symmetric()


@given(st.integers(1, 5), st.integers(0, 10**6))
def test_closure_is_largest_metric_below(n, seed):
    import numpy as np

    rng = np.random.default_rng(seed)
    w = [[INF if rng.random() < 0.2 else Fraction(int(rng.integers(0, 5))) for _ in range(n)] for _ in range(n)]
    d = shortest_path_closure(w)
    assert not d.violations()
    for x, y in product(range(n), repeat=2):
        if x != y:
            assert d(x, y) <= w[x][y]
    # every path through the weight graph is at least as long as d
    for x, y, z in product(range(n), repeat=3):
        assert d(x, z) <= w[x][y] + w[y][z] or x == z


def test_omega_examples():
    P = chain(3)
    d = sup_metric_on_grid(P)
    assert omega_from_lawvere(P, d, identity(P)) == 0
    assert omega_from_lawvere(P, d, Translation(P, (1, 2, 2))) == 1
    G = grid_proset([range(5)])
    fam = shift_family(G, [0, 1, 2])
    assert omega_from_lawvere(G, sup_metric_on_grid(G), fam.at(2)) == 2


@pytest.mark.parametrize("seed", range(10))
def test_lawvere_projection_is_sublinear(seed):
    P = random_poset(2 + seed % 4, seed)
    w = LawvereProjection(P, random_lawvere(len(P), seed))
    assert w.is_sublinear(enumerate_translations(P))


def test_tabulated_violation_detected():
    P = chain(3)
    ts = enumerate_translations(P)
    table = {t.table: Fraction(1) for t in ts}
    table[identity(P).table] = Fraction(0)
    table[(2, 2, 2)] = Fraction(5)
    w = TabulatedProjection(P, table)
    assert not w.is_sublinear(ts)


def test_monotone_hull():
    P = chain(3)
    ts = enumerate_translations(P)
    d = sup_metric_on_grid(P)
    mono = LawvereProjection(P, d)
    for t in ts:
        assert monotone_hull(mono, t, ts) == mono(t)
    # not monotone: the bigger translation (2,2,2) is cheap
    vals = {t.table: Fraction(len(set(t.table))) for t in ts}
    vals[(0, 1, 2)] = Fraction(0)
    w = TabulatedProjection(P, vals)
    hull = HullProjection(w, ts)
    for t in ts:
        brute = min(vals[u.table] for u in ts if all(a <= b for a, b in zip(t.table, u.table)))
        assert hull(t) == brute
        assert HullProjection(hull, ts)(t) == hull(t)
    for a in ts:
        for b in ts:
            if trans_leq(a, b):
                assert hull(a) <= hull(b)


def test_standard_family_superlinear_and_adjoint():
    P = grid_proset([range(4)])
    fam = shift_family(P, [0, 1, 2, 3])
    assert check_superlinear(fam)
    ts = enumerate_translations(P)
    w = LawvereProjection(P, sup_metric_on_grid(P))
    assert adjoint_check(w, fam, ts)
    # shrink Omega_2 down to Omega_1
    shrunk = SuperlinearFamily(P, fam.eps, (fam.members[0], fam.members[1], fam.members[1], fam.members[3]))
    assert not adjoint_check(w, shrunk, ts)


def test_superlinear_violation():
    P = grid_proset([range(4)])
    f = shift_family(P, [0, 1, 2])
    bad = SuperlinearFamily(P, f.eps, (f.members[0], f.members[1], f.members[1]))
    assert not check_superlinear(bad)


def test_omega_from_family():
    P = grid_proset([range(4)])
    fam = shift_family(P, [0, 1, 2])
    assert omega_from_family(fam, identity(P)) == 0
    for e, m in fam:
        assert omega_from_family(fam, m) <= e
    # (3,3,3,3) needs a shift of 3, which is off this family's grid
    assert omega_from_family(fam, Translation(P, (3, 3, 3, 3))) == INF


def test_family_from_omega_recovers_shift():
    P = grid_proset([range(4)])
    ts = enumerate_translations(P)
    w = LawvereProjection(P, sup_metric_on_grid(P))
    fam = family_from_omega(w, [0, 1, 2, 3], ts)
    ref = shift_family(P, [0, 1, 2, 3])
    assert [m.table for m in fam.members] == [m.table for m in ref.members]
    assert w(fam.at(0)) == 0
    assert check_superlinear(fam) and adjoint_check(w, fam, ts)


def test_family_from_omega_on_subsets_is_offset():
    P = subset_proset(3)
    d = LINE3
    sets = P.elements
    w = LawvereProjection(P, LawvereMetric(tuple(tuple(asym_hausdorff(d, a, b) for b in sets) for a in sets)))
    ts = enumerate_translations(P)
    fam = family_from_omega(w, [0, 1, 2], ts)
    for e, m in fam:
        for i, a in enumerate(sets):
            assert sets[m.table[i]] == offset(d, a, e)


def test_hausdorff_examples():
    d = LINE3
    assert asym_hausdorff(d, {0, 1}, {0, 1}) == 0
    assert asym_hausdorff(d, {0, 1, 2}, {1}) == 0
    assert asym_hausdorff(d, {0}, {2}) == 2
    assert hausdorff(d, {0}, {0, 1}) == asym_hausdorff(d, {0}, {0, 1})
    assert hausdorff(d, {0}, {2}) == hausdorff(d, {2}, {0})
    assert asym_hausdorff(d, set(), {1}) == INF and asym_hausdorff(d, {1}, set()) == 0


def test_offset_examples():
    d = LINE3
    assert offset(d, {1}, 0) >= {1}
    assert offset(d, {1}, 1) == {0, 1, 2}
    assert offset(d, {0}, Fraction(1, 2)) == {0}


subsets = st.frozensets(st.integers(0, 4))


@given(st.integers(0, 10**6), subsets, subsets, subsets, st.integers(0, 3), st.integers(0, 3))
def test_hausdorff_and_offset_properties(seed, a, b, c, e1, e2):
    d = random_lawvere(5, seed)
    assert asym_hausdorff(d, a, c) <= asym_hausdorff(d, a, b) + asym_hausdorff(d, b, c)
    assert offset(d, a, e1) == weak_offset(d, a, e1)
    assert offset(d, offset(d, a, e1), e2) <= offset(d, a, e1 + e2)
    assert offset(d, a, min(e1, e2)) <= offset(d, a, max(e1, e2))
    assert offset(d, a & b, e1) <= offset(d, a, e1)
    # the offset is the largest set within asymmetric distance e of a
    assert asym_hausdorff(d, a, offset(d, a, e1)) <= e1 or not a


def test_weighted_projection():
    P = grid_proset([range(4), range(4)])
    shift = Translation(P, tuple(P.index[(min(x + 1, 3), min(y + 2, 3))] for x, y in P.elements))
    assert WeightedProjection(P, (1, 2))(shift) == 1
    assert WeightedProjection(P, (1, 1))(shift) == 2
    assert WeightedProjection(P, (1, 2))(identity(P)) == 0
    with pytest.raises(MetricError):
        WeightedProjection(P, (0, 1))


def test_family_grid_validation():
    P = chain(2)
    with pytest.raises(MetricError):
        SuperlinearFamily(P, (1,), (identity(P),))
