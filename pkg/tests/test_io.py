from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genpers.complexes import path_complex
from genpers.generators import random_finvect_module, random_lawvere, random_poset
from genpers.interleave import distance_family, verify_certificate
from genpers.invimage import VertexFunction, inv_image_module, sublevelset_family
from genpers.io import (
    FormatError,
    certificate_from_json,
    certificate_to_json,
    complex_from_json,
    complex_to_json,
    dumps,
    family_from_json,
    family_to_json,
    function_from_json,
    function_to_json,
    load_module,
    metric_from_json,
    metric_to_json,
    module_from_json,
    module_to_json,
    proset_from_json,
    proset_to_json,
    subset_family_from_json,
    to_json_value,
    write_json,
)
from genpers.metrics import INF, shift_family
from genpers.pmod import Dualize, Pi0, apply_functor, interval_module
from genpers.proset import grid_proset, interval_proset


def _rt(data):
    return json.loads(dumps(data))


def _same(F, G) -> bool:
    # modules loaded from JSON carry their own proset, so compare serializations
    return dumps(module_to_json(F)) == dumps(module_to_json(G))


def test_values():
    assert to_json_value(Fraction(3, 2)) == "3/2"
    assert to_json_value(Fraction(4)) == 4
    assert to_json_value(INF) == "inf"
    assert to_json_value((Fraction(1), frozenset({2, 1}))) == [1, [1, 2]]


@given(st.integers(0, 10**6))
def test_proset_round_trip(seed):
    P = random_poset(5, seed)
    Q = proset_from_json(_rt(proset_to_json(P)))
    assert Q.elements == P.elements and (Q.leq == P.leq).all()


def test_proset_generators():
    P = proset_from_json({"generator": "grid", "axes": [[0, "1/2"], [0, 1]]})
    R = grid_proset([[0, Fraction(1, 2)], [0, 1]])
    assert P.elements == R.elements and (P.leq == R.leq).all()
    Q = proset_from_json({"generator": "interval", "grid": [0, 1, 2]})
    assert (Q.leq == interval_proset([0, 1, 2]).leq).all()
    with pytest.raises(FormatError):
        proset_from_json({"generator": "torus"})
    with pytest.raises(FormatError):
        proset_from_json({"elements": [0, 1], "relations": [[0, 5]]})


@given(st.integers(0, 10**6))
def test_metric_round_trip(seed):
    d = random_lawvere(4, seed)
    assert metric_from_json(_rt(metric_to_json(d))).d == d.d


def test_family_round_trip():
    P = grid_proset([range(4)])
    fam = shift_family(P, [0, Fraction(1, 2), 1, 2])
    back = family_from_json(_rt(family_to_json(fam)), P)
    assert back.eps == fam.eps and [m.table for _, m in back] == [m.table for _, m in fam]


@given(st.integers(0, 10**6))
def test_finvect_module_round_trip(seed):
    F = random_finvect_module(random_poset(4, seed), seed)
    assert _same(module_from_json(_rt(module_to_json(F))), F)
    D = apply_functor(Dualize(2), F)
    assert _same(module_from_json(_rt(module_to_json(D))), D)


def test_simplicial_and_set_modules_round_trip():
    K = path_complex(3)
    fam = sublevelset_family([0, 1, 2])
    f = VertexFunction.from_points(K, fam.space, [0, 2, 1])
    F = inv_image_module(f, fam)
    G = module_from_json(_rt(module_to_json(F)))
    assert G.objects == F.objects and G.target.complex.simplices == K.simplices
    P0 = apply_functor(Pi0(), F)
    assert _same(module_from_json(_rt(module_to_json(P0))), P0)
    assert dumps(module_to_json(G)) == dumps(module_to_json(F))


def test_complex_and_function_round_trip():
    K = path_complex(4)
    K2 = complex_from_json(_rt(complex_to_json(K)))
    assert K2.simplices == K.simplices
    fam = subset_family_from_json({"generator": "sublevelset", "thresholds": [0, "1/2", 1]})
    f = VertexFunction.from_points(K2, fam.space, [0, Fraction(1, 2), 1, 0])
    g = function_from_json(_rt(function_to_json(f)), K2, fam.space)
    assert g.values == f.values
    with pytest.raises(FormatError):
        function_from_json({"values": {"0": 7}}, K2, fam.space)


def test_certificate_round_trip():
    P = grid_proset([range(5)])
    F, G = interval_module(P, [0, 1, 2]), interval_module(P, [1, 2, 3])
    c = distance_family(F, G, shift_family(P, range(5))).certificate
    back = certificate_from_json(_rt(certificate_to_json(c)), F, G)
    assert verify_certificate(F, G, back)


def test_module_file_with_proset_reference(tmp_path):
    P = grid_proset([range(3)])
    write_json(tmp_path / "p.json", proset_to_json(P))
    F = random_finvect_module(P, 0)
    write_json(tmp_path / "F.json", module_to_json(F, proset_ref="p.json"))
    G = load_module(tmp_path / "F.json")
    assert G.objects == F.objects and (G.proset.leq == P.leq).all()
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(FormatError):
        load_module(tmp_path / "bad.json")
    with pytest.raises(FormatError):
        module_from_json({"proset": proset_to_json(P), "target": {"tag": "finvect", "p": 2}, "objects": [1]})
