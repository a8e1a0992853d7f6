"""
Two interval modules on a five-point grid
=========================================

Build two bars over {0, ..., 4}, find the smallest shift at which they
interleave, look at the certificate, and compare with the barcode oracle.
"""
from __future__ import annotations

from genpers import fp
from genpers.interleave import barcode_1d, bottleneck, distance_family, verify_certificate
from genpers.metrics import fmt, shift_family
from genpers.pmod import interval_module
from genpers.proset import grid_proset

P = grid_proset([range(5)])
F = interval_module(P, [0, 1, 2])   # the bar [0, 2]
G = interval_module(P, [1, 2, 3])   # the bar [1, 3]
print("dims of F:", F.objects)
print("dims of G:", G.objects)

# Omega_eps(t) = t + eps, clamped at 4
fam = shift_family(P, range(5))
res = distance_family(F, G, fam)
print("distance:", fmt(res.value))

# the certificate: phi: F => G Omega_1 and psi: G => F Omega_1
c = res.certificate
print("gamma table:", c.gamma.table)
for x in range(len(P)):
    print(f"  phi_{x} =", c.phi[x].tolist(), f"  psi_{x} =", c.psi[x].tolist())
print("certificate verifies:", verify_certificate(F, G, c))

# break the certificate and watch it fail
bad = type(c)(c.gamma, c.kappa, c.phi, type(c.psi)(c.psi.source, c.psi.target,
              tuple(fp.zeros(*m.shape, 2) for m in c.psi.components)))
print("with psi = 0:", verify_certificate(F, G, bad))

# the one-parameter oracle agrees
bf, bg = barcode_1d(F), barcode_1d(G)
print("bars:", [(fmt(b), fmt(d)) for b, d in bf.bars], [(fmt(b), fmt(d)) for b, d in bg.bars])
print("bottleneck, rounded up to the eps grid:", fmt(bottleneck(bf, bg, snap=range(5))))

# on {0, ..., 3} the bar [1, 3] touches the top, every translation fixes the
# top, and the two modules can no longer be interleaved at any shift
Q = grid_proset([range(4)])
r = distance_family(interval_module(Q, [0, 1, 2]), interval_module(Q, [1, 2, 3]), shift_family(Q, range(4)))
print("same bars on {0..3}:", fmt(r.value))
