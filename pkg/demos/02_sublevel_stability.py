"""
Sublevel sets of a function on a path
=====================================

Pull a function on the vertices of a path back along the sublevel-set
family, apply homology and pi0, and check the stability chain
d(HF, HG) <= d(F, G) <= dinf(f, g).
"""
from __future__ import annotations

from genpers.complexes import path_complex
from genpers.invimage import VertexFunction, dinfty, inv_image_module, stability_suite, sublevelset_family
from genpers.metrics import fmt
from genpers.pmod import Homology, Pi0, apply_functor, merge_tree

K = path_complex(3)
fam = sublevelset_family([0, 1, 2, 3])
f = VertexFunction.from_points(K, fam.space, [0, 1, 2])
g = VertexFunction.from_points(K, fam.space, [1, 2, 3])
print("dinf(f, g) =", fmt(dinfty(f, g)))

F = inv_image_module(f, fam)
for t, obj in zip(fam.labels, F.objects):
    print(f"  f <= {fmt(t)}:", sorted(K.simplices[i] for i in obj))

H0 = apply_functor(Homology(0, 2), F)
print("H0 dims along the filtration:", H0.objects)

r = stability_suite(f, g, fam, Homology(0, 2))
print("chain:", fmt(r.d_HF.value), "<=", fmt(r.d_F.value), "<=", fmt(r.dinf))
print("sharp certificate found:", r.sharp_certificate is not None)
print("pushed-forward certificate verifies:", r.pushed_verified)

# two local minima that merge once the middle vertex enters
h = VertexFunction.from_points(K, fam.space, [0, 2, 1])
T = merge_tree(apply_functor(Pi0(), inv_image_module(h, fam)))
print("leaves:", len(T.leaves), "merges:", len(T.merges))
print(T.to_dot())
