"""
Sizes of translations and families of translations
==================================================

A Lawvere metric grades translations by how far they move points.  Its
adjoint family is the largest translation of each size, and the two
interleaving distances built from them agree.
"""
from __future__ import annotations

import numpy as np

from genpers.generators import random_finvect_module, random_poset, zero_on_upset
from genpers.interleave import distance_bruteforce, distance_family
from genpers.metrics import (
    LawvereProjection,
    adjoint_check,
    check_superlinear,
    family_from_omega,
    fmt,
    shortest_path_closure,
)
from genpers.translations import enumerate_translations

rng = np.random.default_rng(7)
P = random_poset(4, rng, top=True)
print("relations:", [(P.elements[a], P.elements[b]) for a, b in P.generators])

# an asymmetric metric: each covering step up costs 1, walking down is
# free, and jumping between incomparable elements costs 3
n = len(P)
w = [[0 if P.leq[j, i] else (1 if (i, j) in P.generators else 3) for j in range(n)] for i in range(n)]
d = shortest_path_closure(w)
om = LawvereProjection(P, d)

ts = enumerate_translations(P)
print(len(ts), "translations; sizes:", sorted({fmt(om(t)) for t in ts}))
print("sublinear:", om.is_sublinear(ts))

vals = sorted({om(t) for t in ts})
fam = family_from_omega(om, vals, ts)
for e, m in fam:
    print(f"  Omega_{fmt(e)} =", m.table)
print("superlinear:", check_superlinear(fam), " adjoint:", adjoint_check(om, fam, ts))

# modules that vanish at the top element, so some shift can interleave them
F, G = (zero_on_upset(random_finvect_module(P, rng), [n - 1]) for _ in range(2))
print("dims:", F.objects, G.objects)
a = distance_bruteforce(F, G, om, ts)
b = distance_family(F, G, fam)
print("d from sizes:", fmt(a.value), "  d from the family:", fmt(b.value))
