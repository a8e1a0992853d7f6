"""Seeded random instances: prosets, metrics, modules, complexes and
vertex functions."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from . import fp
from .complexes import SimplicialComplex
from .invimage import FiniteMetricSpace, VertexFunction
from .metrics import INF, LawvereMetric, shortest_path_closure
from .pmod import FinVect, PersistenceModule
from .proset import Proset, all_preorders, chain, make_proset


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_poset(n: int, rng, density: float = 0.4, top: bool = False) -> Proset:
    """Random partial order: a random DAG on a shuffled linear order, closed.
    With ``top`` the last element is placed above all others."""
    rng = rng_from(rng)
    m = n - 1 if top else n
    order = rng.permutation(m)
    rels = [(int(order[i]), int(order[j])) for i in range(m) for j in range(i + 1, m) if rng.random() < density]
    if top:
        rels += [(i, m) for i in range(m)]
    return make_proset(range(n), rels)


def zero_on_upset(M: PersistenceModule, upset) -> PersistenceModule:
    """Replace M by 0 on an up-closed set of elements."""
    upset = set(upset)
    P, cat = M.proset, M.target
    if any(y not in upset for x in upset for y in P.up(x)):
        raise ValueError("not an up-closed set")
    objs = tuple(0 if x in upset else a for x, a in enumerate(M.objects))
    mors = {(a, b): (cat.zero(objs[a], objs[b]) if b in upset else f) for (a, b), f in M.morphisms.items()}
    return PersistenceModule(P, cat, objs, mors)


def random_preorder(n: int, rng, density: float = 0.3) -> Proset:
    rng = rng_from(rng)
    rels = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < density]
    return make_proset(range(n), rels)


def canonical_preorders(n: int) -> list[Proset]:
    """One preorder on {0, ..., n-1} from each isomorphism class."""
    seen = set()
    out = []
    perms = list(permutations(range(n)))
    for p in all_preorders(n):
        key = min(p.leq[np.ix_(s, s)].tobytes() for s in perms)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def random_lawvere(n: int, rng, max_value: int = 3, p_inf: float = 0.15) -> LawvereMetric:
    """Closure of random small integer weights, some of them infinite."""
    rng = rng_from(rng)
    w = [[INF if rng.random() < p_inf else Fraction(int(rng.integers(0, max_value + 1))) for _ in range(n)]
         for _ in range(n)]
    return shortest_path_closure(w)


def random_subspace(rng, k: int, dim: int, p: int, within: np.ndarray | None = None) -> np.ndarray:
    """Columns spanning a random subspace of dimension <= dim, optionally
    inside the column space of ``within``."""
    if within is not None:
        if within.shape[1] == 0 or dim == 0:
            return fp.zeros(k, 0, p)
        coeff = rng.integers(0, p, size=(within.shape[1], dim))
        return fp.matmul(within, coeff, p)
    return rng.integers(0, p, size=(k, dim)).astype(np.int64) % p


def subquotient_module(P: Proset, U: Sequence[np.ndarray], W: Sequence[np.ndarray], p: int) -> PersistenceModule:
    """x -> U_x / W_x for monotone families of subspaces W_x <= U_x of F_p^k,
    with maps induced by inclusion."""
    bases = []
    for u, w in zip(U, W):
        bw = fp.column_space_basis(w, p) if w.shape[1] else w
        stacked = np.concatenate([bw, u], axis=1)
        _, piv = fp.rref(stacked, p) if stacked.size else (None, [])
        reps = u[:, [c - bw.shape[1] for c in piv if c >= bw.shape[1]]]
        bases.append((bw, reps))
    objs = tuple(b[1].shape[1] for b in bases)
    mors = {}
    for (a, b) in P.generators:
        bw, reps = bases[b]
        src = bases[a][1]
        if src.shape[1] == 0 or reps.shape[1] == 0:
            mors[(a, b)] = fp.zeros(objs[b], objs[a], p)
            continue
        sol = fp.solve(np.concatenate([bw, reps], axis=1), src, p)
        mors[(a, b)] = sol[bw.shape[1]:, :]
    return PersistenceModule(P, FinVect(p), objs, mors)


def random_finvect_module(P: Proset, rng, p: int = 2, max_dim: int = 2, ambient: int | None = None) -> PersistenceModule:
    """Random module with all dimensions <= max_dim.

    On a chain the maps are arbitrary matrices.  Otherwise the module is a
    subquotient of monotone subspace families, which is functorial by
    construction; samples with a dimension above max_dim are redrawn.
    """
    rng = rng_from(rng)
    n = len(P)
    if P.is_total() and P.is_poset():
        dims = [int(rng.integers(0, max_dim + 1)) for _ in range(n)]
        mors = {(a, b): rng.integers(0, p, size=(dims[b], dims[a])).astype(np.int64) for (a, b) in P.generators}
        return PersistenceModule(P, FinVect(p), tuple(dims), mors)
    k = ambient if ambient is not None else max_dim + 1
    for _ in range(200):
        gens = [random_subspace(rng, k, int(rng.integers(0, 2)), p) for _ in range(n)]
        U = [np.concatenate([gens[z] for z in P.down(x)] + [fp.zeros(k, 0, p)], axis=1) for x in range(n)]
        kill = [random_subspace(rng, k, int(rng.integers(0, 2)), p, within=U[x]) for x in range(n)]
        W = [np.concatenate([kill[z] for z in P.down(x)] + [fp.zeros(k, 0, p)], axis=1) for x in range(n)]
        M = subquotient_module(P, U, W, p)
        if max(M.objects, default=0) <= max_dim:
            return M
    raise RuntimeError("could not draw a module within the dimension bound")


def random_chain_module(n: int, rng, p: int = 2, max_total: int = 5, P: Proset | None = None) -> PersistenceModule:
    """Random module over an n-chain with total dimension <= max_total."""
    rng = rng_from(rng)
    P = P if P is not None else chain(n)
    total = int(rng.integers(0, max_total + 1))
    cuts = np.sort(rng.integers(0, total + 1, size=n - 1)) if n > 1 else np.array([], dtype=int)
    bounds = np.concatenate([[0], cuts, [total]])
    dims = [int(bounds[i + 1] - bounds[i]) for i in range(n)]
    rng.shuffle(dims)
    order = P.linear_extension()
    objs = [0] * n
    for pos, x in enumerate(order):
        objs[x] = dims[pos]
    mors = {(a, b): rng.integers(0, p, size=(objs[b], objs[a])).astype(np.int64) for (a, b) in P.generators}
    return PersistenceModule(P, FinVect(p), tuple(objs), mors)


def random_complex(n_vertices: int, rng, p_edge: float = 0.5, p_triangle: float = 0.5) -> SimplicialComplex:
    """Random graph on n vertices, with some of its triangles filled."""
    rng = rng_from(rng)
    edges = [e for e in combinations(range(n_vertices), 2) if rng.random() < p_edge]
    es = set(edges)
    tris = [t for t in combinations(range(n_vertices), 3)
            if {(t[0], t[1]), (t[0], t[2]), (t[1], t[2])} <= es and rng.random() < p_triangle]
    return SimplicialComplex.from_maximal(range(n_vertices), edges + tris + [(v,) for v in range(n_vertices)])


def random_vertex_function(K: SimplicialComplex, M: FiniteMetricSpace, rng) -> VertexFunction:
    rng = rng_from(rng)
    return VertexFunction(K, M, tuple(int(v) for v in rng.integers(0, len(M), size=len(K.vertices))))


def perturb(f: VertexFunction, rng, radius: int = 1) -> VertexFunction:
    """Move each value to a random point within ``radius`` (in the metric)."""
    rng = rng_from(rng)
    d = f.space.d
    vals = []
    for v in f.values:
        near = [m for m in range(len(f.space)) if d(v, m) <= radius and d(m, v) <= radius]
        vals.append(int(near[int(rng.integers(0, len(near)))]))
    return VertexFunction(f.complex, f.space, tuple(vals))


__all__ = [
    "rng_from",
    "random_poset",
    "random_preorder",
    "canonical_preorders",
    "random_lawvere",
    "random_finvect_module",
    "zero_on_upset",
    "random_chain_module",
    "subquotient_module",
    "random_complex",
    "random_vertex_function",
    "perturb",
]
