"""
Vector-valued shifts on a 4x4 grid
==================================

For a two-parameter filtration the set of vectors e at which two modules
interleave is an up-set.  Here it is computed for the quadrant family of a
square, and the vector of componentwise sup differences of the two
functions lands inside it.
"""
from __future__ import annotations

from genpers.complexes import SimplicialComplex
from genpers.invimage import VertexFunction, inv_image_module, quadrant_family
from genpers.metrics import fmt
from genpers.pmod import Homology, apply_functor
from genpers.vecpers import componentwise_norm, d_a, d_set, delta_ab, eps_vectors

K = SimplicialComplex.from_maximal(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
fam = quadrant_family([range(4), range(4)])
f = VertexFunction.from_points(K, fam.space, [(0, 0), (1, 2), (3, 1), (2, 3)])
g = VertexFunction.from_points(K, fam.space, [(1, 0), (1, 3), (2, 1), (3, 3)])

F, G = inv_image_module(f, fam), inv_image_module(g, fam)
HF, HG = apply_functor(Homology(0, 2), F), apply_functor(Homology(0, 2), G)

grid = eps_vectors([range(4), range(4)])
D = d_set(F, G, grid)
DH = d_set(HF, HG, grid)

# print the up-sets as pictures: rows e1 = 3..0, columns e0 = 0..3
for name, U in (("D(F,G)", D), ("D(H0 F, H0 G)", DH)):
    print(name)
    for e1 in reversed(range(4)):
        print("  " + " ".join("#" if (e0, e1) in U else "." for e0 in range(4)))
    print("  minimal:", [tuple(fmt(v) for v in e) for e in U.minimal()])

e = componentwise_norm(f, g)
print("componentwise norm:", tuple(fmt(v) for v in e), "->", D.state(e))

# directional distance along the diagonal versus the diagonal line itself
print("d_(1,1):", fmt(d_a(HF, HG, (1, 1), range(4)).value))
print("line through 0 along (1,1):", fmt(delta_ab(HF, HG, (1, 1), (0, 0), range(4), range(4)).value))
