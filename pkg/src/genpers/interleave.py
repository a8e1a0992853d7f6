"""Interleavings of persistence modules: certificates, exact existence
search per target category, the certificate calculus, the two interleaving
distances, and a one-parameter barcode/bottleneck oracle."""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import fp
from .metrics import INF, SublinearProjection, SuperlinearFamily
from .pmod import (
    Dualize,
    FinSet,
    FinVect,
    FinVectOp,
    Functor,
    ModuleError,
    NaturalTransformation,
    PersistenceModule,
    apply_functor,
    apply_functor_nat,
    direct_sum,
    interval_module,
    is_natural,
    precompose,
    same_module,
)
from .proset import Proset
from .translations import Translation, TranslationError, compose, identity, maximal, trans_leq

DEFAULT_GUARD = 1 << 16


class GuardExceeded(RuntimeError):
    """The search needed more nodes than allowed.  Distinct from a proof that
    no interleaving exists."""

    def __init__(self, nodes: int):
        super().__init__(f"search guard of {nodes} nodes exceeded")
        self.nodes = nodes


@dataclass(eq=False)
class InterleavingCertificate:
    """phi: F => G gamma and psi: G => F kappa."""

    gamma: Translation
    kappa: Translation
    phi: NaturalTransformation
    psi: NaturalTransformation


def _same_modules(a: PersistenceModule, b: PersistenceModule) -> bool:
    return same_module(a, b) or (a.target.thin and a.objects == b.objects and a.proset is b.proset)


def certificate_violations(F: PersistenceModule, G: PersistenceModule,
                           cert: InterleavingCertificate) -> list[str]:
    out = []
    gam, kap = cert.gamma, cert.kappa
    P = F.proset
    if G.proset is not P or gam.proset is not P or kap.proset is not P:
        return ["modules and translations must share one proset"]
    if F.target != G.target:
        return ["modules have different target categories"]
    Gg, _ = precompose(G, gam)
    Fk, _ = precompose(F, kap)
    phi, psi = cert.phi, cert.psi
    if not _same_modules(phi.source, F) or not _same_modules(phi.target, Gg):
        out.append("phi does not run from F to G gamma")
    if not _same_modules(psi.source, G) or not _same_modules(psi.target, Fk):
        out.append("psi does not run from G to F kappa")
    if out:
        return out
    cat = F.target
    if cat.thin:
        for x in range(len(P)):
            if not cat.obj_leq(F.objects[x], G.objects[gam.table[x]]):
                out.append(f"F <= G gamma fails at {P.elements[x]!r}")
            if not cat.obj_leq(G.objects[x], F.objects[kap.table[x]]):
                out.append(f"G <= F kappa fails at {P.elements[x]!r}")
        return out
    if not is_natural(phi):
        out.append("phi is not natural")
    if not is_natural(psi):
        out.append("psi is not natural")
    g, k = gam.table, kap.table
    for x in range(len(P)):
        lhs = cat.compose(psi[g[x]], phi[x])
        if not cat.equal(lhs, F.morphism(x, k[g[x]])):
            out.append(f"(psi gamma) phi differs from the shift of F at {P.elements[x]!r}")
        lhs = cat.compose(phi[k[x]], psi[x])
        if not cat.equal(lhs, G.morphism(x, g[k[x]])):
            out.append(f"(phi kappa) psi differs from the shift of G at {P.elements[x]!r}")
    return out


def verify_certificate(F: PersistenceModule, G: PersistenceModule, cert: InterleavingCertificate) -> bool:
    return not certificate_violations(F, G, cert)


def _build(F, G, gam, kap, phi_comps, psi_comps) -> InterleavingCertificate:
    Gg, _ = precompose(G, gam)
    Fk, _ = precompose(F, kap)
    return InterleavingCertificate(
        gam, kap, NaturalTransformation(F, Gg, tuple(phi_comps)), NaturalTransformation(G, Fk, tuple(psi_comps))
    )


def exists_interleaving(F: PersistenceModule, G: PersistenceModule, gam: Translation, kap: Translation,
                        guard: int = DEFAULT_GUARD) -> InterleavingCertificate | None:
    """A (gamma, kappa)-interleaving of F and G, or None if none exists.

    Raises GuardExceeded if the search would visit more than ``guard`` nodes.
    """
    P = F.proset
    if G.proset is not P or gam.proset is not P or kap.proset is not P:
        raise TranslationError("modules and translations must share one proset")
    cat = F.target
    if cat.thin:
        if G.target != cat:
            raise ModuleError("modules have different target categories")
        ok = all(cat.obj_leq(F.objects[x], G.objects[gam.table[x]]) for x in range(len(P))) and all(
            cat.obj_leq(G.objects[x], F.objects[kap.table[x]]) for x in range(len(P))
        )
        return _build(F, G, gam, kap, [None] * len(P), [None] * len(P)) if ok else None
    if F.target != G.target:
        raise ModuleError("modules have different target categories")
    if isinstance(cat, FinSet):
        return _FinSetSearch(F, G, gam, kap, guard).run()
    if type(cat) is FinVectOp:
        dual = Dualize(cat.p)
        Fd, Gd = apply_functor(dual, F), apply_functor(dual, G)
        c = exists_interleaving(Fd, Gd, gam, kap, guard)
        if c is None:
            return None
        phi = [np.ascontiguousarray(m.T) for m in c.phi.components]
        psi = [np.ascontiguousarray(m.T) for m in c.psi.components]
        return _build(F, G, gam, kap, phi, psi)
    if isinstance(cat, FinVect):
        return _finvect_search(F, G, gam, kap, guard)
    raise ModuleError(f"no interleaving search for target {cat.tag}")


def is_isomorphic(F: PersistenceModule, G: PersistenceModule, guard: int = DEFAULT_GUARD) -> bool:
    """Isomorphic iff identity-interleaved."""
    I = identity(F.proset)
    return exists_interleaving(F, G, I, I, guard) is not None


# ------------------------------------------------------------ vector spaces


def hom_constraints(F: PersistenceModule, G: PersistenceModule) -> tuple[np.ndarray, list[int], list[tuple[int, int]]]:
    """Linear constraints on the flattened components of a transformation
    F => G.  Component x is a (dim G(x)) x (dim F(x)) matrix flattened row by
    row at ``offsets[x]``."""
    p = F.target.p
    shapes = [(G.objects[x], F.objects[x]) for x in range(len(F.proset))]
    offsets = [0]
    for r, c in shapes:
        offsets.append(offsets[-1] + r * c)
    n = offsets[-1]
    rows = []
    for (u, v) in F.proset.generators:
        a, b = G.morphisms[(u, v)], F.morphisms[(u, v)]
        (ru, cu), (rv, cv) = shapes[u], shapes[v]
        if rv * cu == 0:
            continue
        block = fp.zeros(rv * cu, n, p)
        # G(u->v) X_u  minus  X_v F(u->v)
        if ru * cu:
            block[:, offsets[u]:offsets[u + 1]] = np.kron(a, fp.eye(cu, p)) % p
        if rv * cv:
            block[:, offsets[v]:offsets[v + 1]] = (block[:, offsets[v]:offsets[v + 1]]
                                                   - np.kron(fp.eye(rv, p), b.T)) % p
        rows.append(block)
    mat = np.concatenate(rows, axis=0) if rows else fp.zeros(0, n, p)
    return mat, offsets, shapes


def hom_basis(F: PersistenceModule, G: PersistenceModule) -> list[list[np.ndarray]]:
    """Basis of the space of natural transformations F => G, each element a
    list of components."""
    p = F.target.p
    mat, offsets, shapes = hom_constraints(F, G)
    null = fp.nullspace(mat, p)
    return [_unflatten(null[:, j], offsets, shapes) for j in range(null.shape[1])]


def _unflatten(vec, offsets, shapes) -> list[np.ndarray]:
    return [np.asarray(vec[offsets[x]:offsets[x + 1]]).reshape(shapes[x]) for x in range(len(shapes))]


def _rank_obstruction(F, G, gam, kap) -> bool:
    """Necessary conditions from factoring shifts through the interleaving:
    F(x -> kappa gamma y) = psi_{gamma y} G(gamma x -> gamma y) phi_x, so its
    rank is at most that of G(gamma x -> gamma y), and symmetrically."""
    P = F.proset
    g, k = gam.table, kap.table
    for x, y in P.relations():
        if F.rank(x, k[g[y]]) > G.rank(g[x], g[y]):
            return True
        if G.rank(x, g[k[y]]) > F.rank(k[x], k[y]):
            return True
    return False


def _finvect_search(F, G, gam, kap, guard):
    if _rank_obstruction(F, G, gam, kap):
        return None
    Gg, _ = precompose(G, gam)
    Fk, _ = precompose(F, kap)
    phi_mat, phi_off, phi_shapes = hom_constraints(F, Gg)
    psi_mat, psi_off, psi_shapes = hom_constraints(G, Fk)
    p = F.target.p
    phi_null = fp.nullspace(phi_mat, p)
    psi_null = fp.nullspace(psi_mat, p)
    if psi_null.shape[1] < phi_null.shape[1]:
        # enumerate the smaller side: swap the roles of the two modules
        c = _SplitSearch(G, F, kap, gam, psi_null, psi_off, psi_shapes, phi_null, phi_off, phi_shapes, guard).run()
        return None if c is None else _build(F, G, gam, kap, c[1], c[0])
    c = _SplitSearch(F, G, gam, kap, phi_null, phi_off, phi_shapes, psi_null, psi_off, psi_shapes, guard).run()
    return None if c is None else _build(F, G, gam, kap, c[0], c[1])


class _SplitSearch:
    """Enumerate phi over its solution space; given phi the triangle
    identities are linear in psi, so psi is solved for incrementally and the
    branch is cut as soon as that system becomes inconsistent."""

    def __init__(self, F, G, gam, kap, phi_null, phi_off, phi_shapes, psi_null, psi_off, psi_shapes, guard):
        self.F, self.G = F, G
        self.g, self.k = gam.table, kap.table
        self.p = F.target.p
        self.guard = guard
        self.nodes = 0
        self.phi_off, self.phi_shapes = phi_off, phi_shapes
        self.psi_null = psi_null
        self.psi_off, self.psi_shapes = psi_off, psi_shapes
        n = len(phi_shapes)
        self.kpsi = psi_null.shape[1]
        # stacked psi basis blocks: shape (kpsi, rows, cols) per element
        self.psi_blocks = [
            np.stack([np.asarray(psi_null[psi_off[z]:psi_off[z + 1], j]).reshape(psi_shapes[z])
                      for j in range(self.kpsi)]) if self.kpsi else None
            for z in range(n)
        ]
        # order phi coordinates block by block, smallest blocks first, each
        # block column by column, and bring the basis into reduced echelon
        # form in that order.  The first triangle identity can then be
        # checked one column at a time, the second once a block is complete.
        order = sorted(range(n), key=lambda x: (phi_shapes[x][0] * phi_shapes[x][1], x))
        perm = []
        ends = []
        for x in order:
            r, c = phi_shapes[x]
            for col in range(c):
                perm.extend(phi_off[x] + i * c + col for i in range(r))
                ends.append((len(perm), ("col", x, col)))
            ends.append((len(perm), ("block", x, None)))
        self.perm = perm
        if phi_null.shape[1]:
            red, pivots = fp.rref(phi_null[perm, :].T, self.p)
            self.basis = red[: len(pivots)]
        else:
            pivots = []
            self.basis = fp.zeros(0, len(perm), self.p)
        self.kphi = len(pivots)
        self.events: list[list[tuple]] = [[] for _ in range(self.kphi + 1)]
        for end, ev in ends:
            self.events[bisect.bisect_left(pivots, end)].append(ev)
        self.inverse_perm = np.argsort(perm)
        self.pre_k: dict[int, list[int]] = {x: [] for x in range(n)}
        for z in range(n):
            self.pre_k[self.k[z]].append(z)

    def _block(self, cur, x):
        flat = cur[self.inverse_perm]
        r, c = self.phi_shapes[x]
        return np.asarray(flat[self.phi_off[x]:self.phi_off[x + 1]]).reshape(r, c)

    def _constrain(self, system, cur, event) -> bool:
        """Add the psi equations that become linear once part of phi is known."""
        kind, x, col = event
        F, G, g, k, p = self.F, self.G, self.g, self.k, self.p
        X = self._block(cur, x)
        if kind == "col":
            # (psi gamma) phi = F(x -> kappa gamma x), column col
            target = F.morphism(x, k[g[x]])[:, col]
            if not target.size:
                return True
            if self.kpsi:
                coeffs = (np.matmul(self.psi_blocks[g[x]], X[:, col]) % p).T
            else:
                coeffs = fp.zeros(target.size, 0, p)
            return system.add(coeffs, target)
        # (phi kappa) psi = G(z -> gamma kappa z) for z with kappa(z) = x
        for z in self.pre_k[x]:
            target = G.morphism(z, g[k[z]])
            if not target.size:
                continue
            if self.kpsi:
                coeffs = (np.matmul(X, self.psi_blocks[z]) % p).reshape(self.kpsi, -1).T
            else:
                coeffs = fp.zeros(target.size, 0, p)
            if not system.add(coeffs, target.reshape(-1)):
                return False
        return True

    def run(self):
        p = self.p
        cur = fp.zeros(1, len(self.perm), p)[0]
        found = self._rec(0, cur, fp.IncrementalSystem(self.kpsi, p))
        if found is None:
            return None
        cur, system = found
        flat = cur[self.inverse_perm]
        phi = [np.asarray(flat[self.phi_off[x]:self.phi_off[x + 1]]).reshape(self.phi_shapes[x])
               for x in range(len(self.phi_shapes))]
        d = system.solution()
        psi_flat = (self.psi_null @ d) % p if self.kpsi else fp.zeros(self.psi_off[-1], 1, p)[:, 0]
        psi = [np.asarray(psi_flat[self.psi_off[z]:self.psi_off[z + 1]]).reshape(self.psi_shapes[z])
               for z in range(len(self.psi_shapes))]
        return phi, psi

    def _rec(self, j, cur, system):
        self.nodes += 1
        if self.nodes > self.guard:
            raise GuardExceeded(self.guard)
        if self.events[j]:
            system = system.copy()
            for ev in self.events[j]:
                if not self._constrain(system, cur, ev):
                    return None
        if j == self.kphi:
            return cur, system
        row = self.basis[j]
        for v in range(self.p):
            nxt = (cur + v * row) % self.p if v else cur
            res = self._rec(j + 1, nxt, system)
            if res is not None:
                return res
        return None


# -------------------------------------------------------------------- sets


class _FinSetSearch:
    """Backtracking over the entries of all components, with propagation of
    forced values.  Every constraint equates two terms built from constants,
    known functions, and lookups into the unknown component tables."""

    def __init__(self, F, G, gam, kap, guard):
        self.F, self.G = F, G
        self.g, self.k = gam.table, kap.table
        self.guard = guard
        self.nodes = 0
        P = F.proset
        n = len(P)
        # families: ('phi', x) : F(x) -> G(g x);  ('psi', z) : G(z) -> F(k z)
        self.size = {}
        self.codomain = {}
        for x in range(n):
            self.size[("phi", x)] = F.objects[x]
            self.codomain[("phi", x)] = G.objects[self.g[x]]
            self.size[("psi", x)] = G.objects[x]
            self.codomain[("psi", x)] = F.objects[self.k[x]]
        self.cons: list[tuple] = []
        self.watch: dict[tuple, list[int]] = {}
        for (u, v) in P.generators:
            gm = G.morphism(self.g[u], self.g[v])
            fm = F.morphisms[(u, v)]
            for i in range(F.objects[u]):
                # G(gu -> gv) phi_u(i) == phi_v(F(u -> v) i)
                self._add(("fn", gm, ("var", ("phi", u), ("const", i))),
                          ("var", ("phi", v), ("const", fm[i])),
                          [(("phi", u), i), (("phi", v), fm[i])])
            fm2 = F.morphism(self.k[u], self.k[v])
            gm2 = G.morphisms[(u, v)]
            for j in range(G.objects[u]):
                self._add(("fn", fm2, ("var", ("psi", u), ("const", j))),
                          ("var", ("psi", v), ("const", gm2[j])),
                          [(("psi", u), j), (("psi", v), gm2[j])])
        for x in range(n):
            tgt = F.morphism(x, self.k[self.g[x]])
            gx = self.g[x]
            for i in range(F.objects[x]):
                watch = [(("phi", x), i)] + [(("psi", gx), j) for j in range(G.objects[gx])]
                self._add(("var", ("psi", gx), ("var", ("phi", x), ("const", i))), ("const", tgt[i]), watch)
            tgt = G.morphism(x, self.g[self.k[x]])
            kx = self.k[x]
            for j in range(G.objects[x]):
                watch = [(("psi", x), j)] + [(("phi", kx), i) for i in range(F.objects[kx])]
                self._add(("var", ("phi", kx), ("var", ("psi", x), ("const", j))), ("const", tgt[j]), watch)
        order = P.linear_extension()
        self.variables = [((fam, x), i) for x in order for fam in ("phi", "psi")
                          for i in range(self.size[(fam, x)])]
        self.assign: dict[tuple, int] = {}

    def _add(self, lhs, rhs, watch):
        c = len(self.cons)
        self.cons.append((lhs, rhs))
        for key in watch:
            self.watch.setdefault(key, []).append(c)

    def _eval(self, t):
        kind = t[0]
        if kind == "const":
            return t[1]
        if kind == "fn":
            v = self._eval(t[2])
            return None if v is None else t[1][v]
        idx = self._eval(t[2])
        if idx is None:
            return None
        return self.assign.get((t[1], idx))

    def _forceable(self, t):
        """Key of an unassigned lookup whose index is known."""
        if t[0] != "var":
            return None
        idx = self._eval(t[2])
        if idx is None:
            return None
        key = (t[1], idx)
        return None if key in self.assign else key

    def _set(self, key, val, trail) -> bool:
        if val >= self.codomain[key[0]]:
            return False
        self.assign[key] = val
        trail.append(key)
        queue = list(self.watch.get(key, ()))
        while queue:
            lhs, rhs = self.cons[queue.pop()]
            a, b = self._eval(lhs), self._eval(rhs)
            if a is not None and b is not None:
                if a != b:
                    return False
                continue
            if a is None and b is not None:
                lhs, rhs, a, b = rhs, lhs, b, a
            if a is not None:
                fk = self._forceable(rhs)
                if fk is not None:
                    if a >= self.codomain[fk[0]]:
                        return False
                    self.assign[fk] = a
                    trail.append(fk)
                    queue.extend(self.watch.get(fk, ()))
        return True

    def _undo(self, trail, mark):
        while len(trail) > mark:
            del self.assign[trail.pop()]

    def run(self):
        trail: list = []
        if not self._rec(0, trail):
            return None
        n = len(self.F.proset)
        phi = [tuple(self.assign[(("phi", x), i)] for i in range(self.F.objects[x])) for x in range(n)]
        psi = [tuple(self.assign[(("psi", x), j)] for j in range(self.G.objects[x])) for x in range(n)]
        return _build(self.F, self.G, _T(self.F.proset, self.g), _T(self.F.proset, self.k), phi, psi)

    def _rec(self, pos, trail) -> bool:
        while pos < len(self.variables) and self.variables[pos] in self.assign:
            pos += 1
        if pos == len(self.variables):
            return True
        self.nodes += 1
        if self.nodes > self.guard:
            raise GuardExceeded(self.guard)
        key = self.variables[pos]
        for val in range(self.codomain[key[0]]):
            mark = len(trail)
            if self._set(key, val, trail) and self._rec(pos + 1, trail):
                return True
            self._undo(trail, mark)
        return False


def _T(P: Proset, table) -> Translation:
    return Translation(P, tuple(table))


# ------------------------------------------------------- certificate calculus


def compose_certificates(F, G, H, c1: InterleavingCertificate, c2: InterleavingCertificate) -> InterleavingCertificate:
    """From a (g1, k1)-interleaving of F, G and a (g2, k2)-interleaving of
    G, H, the (g2 g1, k1 k2)-interleaving of F, H with phi = (phi2 g1) phi1
    and psi = (psi1 k2) psi2."""
    if not (_same_modules(c1.psi.source, G) and _same_modules(c2.phi.source, G)):
        raise ModuleError("certificates do not share the middle module")
    g1, k1, g2, k2 = c1.gamma, c1.kappa, c2.gamma, c2.kappa
    cat = F.target
    phi = [cat.compose(c2.phi[g1.table[x]], c1.phi[x]) for x in range(len(F.proset))]
    psi = [cat.compose(c1.psi[k2.table[z]], c2.psi[z]) for z in range(len(F.proset))]
    return _build(F, H, compose(g2, g1), compose(k1, k2), phi, psi)


def weaken_certificate(F, G, cert: InterleavingCertificate, gam2: Translation, kap2: Translation) -> InterleavingCertificate:
    """Push a (g1, k1)-interleaving to any (g2, k2) >= (g1, k1) by following
    phi and psi with the maps induced by g1 <= g2 and k1 <= k2."""
    if not (trans_leq(cert.gamma, gam2) and trans_leq(cert.kappa, kap2)):
        raise TranslationError("weakening needs larger translations")
    cat = F.target
    g1, k1 = cert.gamma.table, cert.kappa.table
    phi = [cat.compose(G.morphism(g1[x], gam2.table[x]), cert.phi[x]) for x in range(len(F.proset))]
    psi = [cat.compose(F.morphism(k1[z], kap2.table[z]), cert.psi[z]) for z in range(len(F.proset))]
    return _build(F, G, gam2, kap2, phi, psi)


def pushforward_certificate(H: Functor, F, G, cert: InterleavingCertificate,
                            HF: PersistenceModule | None = None,
                            HG: PersistenceModule | None = None) -> tuple[PersistenceModule, PersistenceModule, InterleavingCertificate]:
    """Apply H to every component: H phi, H psi interleave HF and HG."""
    HF = HF if HF is not None else apply_functor(H, F)
    HG = HG if HG is not None else apply_functor(H, G)
    HGg, _ = precompose(HG, cert.gamma)
    HFk, _ = precompose(HF, cert.kappa)
    phi = apply_functor_nat(H, cert.phi, HF, HGg)
    psi = apply_functor_nat(H, cert.psi, HG, HFk)
    return HF, HG, InterleavingCertificate(cert.gamma, cert.kappa, phi, psi)


def identity_certificate(F: PersistenceModule) -> InterleavingCertificate:
    I = identity(F.proset)
    comps = [F.target.identity(a) for a in F.objects]
    return _build(F, F, I, I, comps, comps)


# ----------------------------------------------------------------- distances


@dataclass
class DistanceResult:
    """Exact when lower == upper; otherwise the search guard hid the answer
    somewhere in [lower, upper]."""

    lower: object
    upper: object
    certificate: InterleavingCertificate | None = None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self):
        if not self.exact:
            raise ValueError(f"distance only known to lie in [{self.lower}, {self.upper}]")
        return self.lower


def distance_bruteforce(F, G, omega: SublinearProjection, translations: Sequence[Translation],
                        guard: int = DEFAULT_GUARD, exhaustive: bool = False) -> DistanceResult:
    """min over interleaving pairs (gamma, kappa) of max(omega gamma, omega kappa).

    Levels are visited in increasing order of omega; at each level only the
    maximal translations of size at most that level are tried, since any
    smaller pair that interleaves can be weakened to one of them.  With
    ``exhaustive`` every pair is tried instead.
    """
    vals = {t: omega(t) for t in translations}
    if exhaustive:
        return _bruteforce_all(F, G, vals, translations, guard)
    levels = sorted({v for v in vals.values() if v != INF})
    lower = None
    for e in levels:
        cands = maximal([t for t in translations if vals[t] <= e])
        unknown = False
        for a in cands:
            for b in cands:
                try:
                    c = exists_interleaving(F, G, a, b, guard)
                except GuardExceeded:
                    unknown = True
                    continue
                if c is not None:
                    return DistanceResult(e if lower is None else lower, e, c)
        if unknown and lower is None:
            lower = e
    return DistanceResult(INF if lower is None else lower, INF, None)


def _bruteforce_all(F, G, vals, translations, guard) -> DistanceResult:
    best, best_cert, lower = INF, None, INF
    for a in translations:
        for b in translations:
            e = max(vals[a], vals[b])
            if e >= best and e >= lower:
                continue
            try:
                c = exists_interleaving(F, G, a, b, guard)
            except GuardExceeded:
                lower = min(lower, e)
                continue
            if c is not None and e < best:
                best, best_cert = e, c
    return DistanceResult(min(lower, best), best, best_cert)


def distance_family(F, G, fam: SuperlinearFamily, guard: int = DEFAULT_GUARD) -> DistanceResult:
    """Smallest grid eps with an (Omega_eps, Omega_eps)-interleaving."""
    lower = None
    for e, m in fam:
        try:
            c = exists_interleaving(F, G, m, m, guard)
        except GuardExceeded:
            if lower is None:
                lower = e
            continue
        if c is not None:
            return DistanceResult(e if lower is None else lower, e, c)
    return DistanceResult(INF if lower is None else lower, INF, None)


def interleaved_at(F, G, fam: SuperlinearFamily, e, guard: int = DEFAULT_GUARD) -> bool:
    m = fam.at(e)
    return exists_interleaving(F, G, m, m, guard) is not None


# ---------------------------------------------------- one-parameter oracle


@dataclass(frozen=True)
class Barcode:
    """Closed bars [b, d] on the grid; d is inf for bars alive at the top."""

    bars: tuple[tuple, ...]
    grid: tuple

    def successor(self, d):
        if d == INF:
            return INF
        k = self.grid.index(d)
        return self.grid[k + 1] if k + 1 < len(self.grid) else INF


def _chain_order(F: PersistenceModule) -> tuple[list[int], tuple]:
    P = F.proset
    if not P.is_total() or not P.is_poset():
        raise ModuleError("barcodes need a module over a finite chain")
    order = P.linear_extension()
    vals = []
    for i in order:
        e = P.elements[i]
        e = e[0] if isinstance(e, tuple) and len(e) == 1 else e
        vals.append(e if isinstance(e, (int, Fraction)) else order.index(i))
    return order, tuple(Fraction(v) for v in vals)


def barcode_1d(F: PersistenceModule) -> Barcode:
    """Bars by inclusion-exclusion on ranks: the number of bars equal to
    [s, t] is r(s,t) - r(s-1,t) - r(s,t+1) + r(s-1,t+1)."""
    if type(F.target) is not FinVect:
        raise ModuleError("barcodes need a FinVect module")
    order, vals = _chain_order(F)
    n = len(order)

    def r(i, j):
        if i < 0 or j >= n:
            return 0
        return F.rank(order[i], order[j])

    bars = []
    for i in range(n):
        for j in range(i, n):
            mult = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            if mult < 0:
                raise ModuleError("negative bar multiplicity; module is not valid")
            death = INF if j == n - 1 else vals[j]
            bars.extend([(vals[i], death)] * mult)
    return Barcode(tuple(bars), vals)


def barcode_module(bc: Barcode, F_like: PersistenceModule, p: int = 2) -> PersistenceModule:
    """Direct sum of the interval modules of a barcode, on F_like's chain."""
    order, vals = _chain_order(F_like)
    P = F_like.proset
    pieces = []
    for b, d in bc.bars:
        support = [order[k] for k, v in enumerate(vals) if b <= v and (d == INF or v <= d)]
        pieces.append(interval_module(P, support, p))
    if not pieces:
        return PersistenceModule(P, FinVect(p), (0,) * len(P), {g: fp.zeros(0, 0, p) for g in P.generators})
    return direct_sum(pieces)


def _costs(bc1: Barcode, bc2: Barcode):
    def half_open(bc, bar):
        return bar[0], bc.successor(bar[1])

    a = [half_open(bc1, b) for b in bc1.bars]
    b = [half_open(bc2, x) for x in bc2.bars]

    def match(u, v):
        db = abs(u[0] - v[0])
        if u[1] == INF and v[1] == INF:
            return db
        if u[1] == INF or v[1] == INF:
            return INF
        return max(db, abs(u[1] - v[1]))

    def delete(u):
        return INF if u[1] == INF else (u[1] - u[0]) / 2

    m = [[match(u, v) for v in b] for u in a]
    return m, [delete(u) for u in a], [delete(v) for v in b]


def _perfect(n, m, cm, da, db, c) -> bool:
    rows, cols = [], []
    # left: bars of A, then m diagonal slots; right: bars of B, then n slots
    for i in range(n):
        for j in range(m):
            if cm[i][j] <= c:
                rows.append(i), cols.append(j)
        if da[i] <= c:
            rows.append(i), cols.append(m + i)
    for j in range(m):
        if db[j] <= c:
            rows.append(n + j), cols.append(j)
        for i in range(n):
            rows.append(n + j), cols.append(m + i)
    size = n + m
    if size == 0:
        return True
    g = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(g, perm_type="column")
    return bool((match >= 0).all())


def bottleneck(bc1: Barcode, bc2: Barcode, snap: Sequence | None = None):
    """Bottleneck distance of the half-open extensions [b, d+) of the bars,
    where d+ is the next grid value.  With ``snap`` the result is rounded up
    to the given grid of eps values (inf if it lies beyond it)."""
    cm, da, db = _costs(bc1, bc2)
    n, m = len(da), len(db)
    cands = sorted({c for row in cm for c in row} | set(da) | set(db) | {Fraction(0)})
    finite = [c for c in cands if c != INF]
    lo, hi = 0, len(finite) - 1
    if not _perfect(n, m, cm, da, db, finite[hi]):
        val = INF
    else:
        while lo < hi:
            mid = (lo + hi) // 2
            if _perfect(n, m, cm, da, db, finite[mid]):
                hi = mid
            else:
                lo = mid + 1
        val = finite[lo]
    if snap is None or val == INF:
        return val
    snap = sorted(Fraction(s) for s in snap)
    k = bisect.bisect_left(snap, val)
    return snap[k] if k < len(snap) else INF


def check_barcode(F: PersistenceModule, bc: Barcode | None = None) -> bool:
    """The module is isomorphic to the sum of its bars' interval modules."""
    bc = bc if bc is not None else barcode_1d(F)
    return is_isomorphic(F, barcode_module(bc, F, F.target.p))


def dual_module(F: PersistenceModule) -> PersistenceModule:
    return apply_functor(Dualize(F.target.p), F)

