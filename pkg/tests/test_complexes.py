from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genpers import fp
from genpers.complexes import (
    ComplexError,
    SimplicialComplex,
    betti,
    components,
    components_induced,
    filled_triangle,
    hollow_triangle,
    homology_induced,
    path_complex,
)
from genpers.generators import random_complex


def union_find_components(K, sub):
    """Component count of a subcomplex by union-find on its edges."""
    verts = [K.simplices[i][0] for i in sub if len(K.simplices[i]) == 1]
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i in sub:
        s = K.simplices[i]
        if len(s) == 2:
            parent[find(s[0])] = find(s[1])
    return len({find(v) for v in verts})


def random_subcomplex(K, rng):
    keep = {v for v in range(len(K.vertices)) if rng.random() < 0.7}
    return K.full_subcomplex(keep)


def test_triangles():
    H, T = hollow_triangle(), filled_triangle()
    assert betti(H, H.full(), 0, 2) == 1 and betti(H, H.full(), 1, 2) == 1
    assert betti(T, T.full(), 1, 2) == 0
    # the hollow triangle inside the filled one: H_1 goes 1 -> 0
    hollow = frozenset(i for i, s in enumerate(T.simplices) if len(s) <= 2)
    m = homology_induced(T, hollow, T.full(), 1, 2)
    assert m.shape == (0, 1)


def test_identity_inclusion_is_identity():
    K = hollow_triangle()
    for k in (0, 1):
        m = homology_induced(K, K.full(), K.full(), k, 3)
        assert (m == fp.eye(m.shape[0], 3)).all()


def test_empty_complex_has_no_homology():
    K = path_complex(3)
    assert betti(K, frozenset(), 0, 2) == 0
    assert components(K, frozenset()) == ([], {})


@given(st.integers(1, 6), st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_euler_characteristic_and_components(n, seed, p):
    rng = np.random.default_rng(seed)
    K = random_complex(n, rng)
    sub = random_subcomplex(K, rng)
    chi = sum((-1) ** (len(K.simplices[i]) - 1) for i in sub)
    assert sum((-1) ** k * betti(K, sub, k, p) for k in range(K.dim + 1)) == chi
    assert betti(K, sub, 0, p) == union_find_components(K, sub)
    assert len(components(K, sub)[0]) == union_find_components(K, sub)


@given(st.integers(2, 6), st.integers(0, 10**6))
def test_induced_maps_are_functorial(n, seed):
    rng = np.random.default_rng(seed)
    K = random_complex(n, rng)
    order = list(rng.permutation(n))
    a = K.full_subcomplex(order[: n // 3])
    b = K.full_subcomplex(order[: 2 * n // 3])
    c = K.full()
    for k in range(2):
        ab, bc, ac = (homology_induced(K, s, t, k, 2) for s, t in ((a, b), (b, c), (a, c)))
        assert (fp.matmul(bc, ab, 2) == ac).all()
    ab, bc, ac = components_induced(K, a, b), components_induced(K, b, c), components_induced(K, a, c)
    assert tuple(bc[i] for i in ab) == ac


def test_merge_of_components():
    K = path_complex(3)
    ends = K.full_subcomplex([0, 2])
    f = components_induced(K, ends, K.full())
    assert len(f) == 2 and set(f) == {0}


def test_bad_inputs():
    with pytest.raises(ComplexError):
        SimplicialComplex.from_maximal([0, 0], [])
    with pytest.raises(ComplexError):
        SimplicialComplex.from_maximal([0, 1], [(0, 5)])
    K = path_complex(3)
    with pytest.raises(ComplexError):
        homology_induced(K, K.full(), frozenset(), 0, 2)


def test_from_maximal_adds_faces():
    K = SimplicialComplex.from_maximal("abc", ["abc"])
    assert len(K) == 7 and K.dim == 2
    assert K.is_subcomplex(K.full_subcomplex([0, 1]))
    assert not K.is_subcomplex(frozenset([K.index[(0, 1)]]))
