"""Finite simplicial complexes, their subcomplexes, simplicial homology over
F_p and connected components."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import fp


class ComplexError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Simplices are sorted tuples of vertex indices, listed by dimension and
    then lexicographically.  A subcomplex is a frozenset of simplex indices."""

    vertices: tuple
    simplices: tuple[tuple[int, ...], ...]
    _homology: dict = field(default_factory=dict, repr=False, compare=False)
    _pi0: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_maximal(cls, vertices: Sequence[Hashable], maximal: Iterable[Iterable]) -> "SimplicialComplex":
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise ComplexError("duplicate vertex labels")
        idx = {v: i for i, v in enumerate(vertices)}
        faces: set[tuple[int, ...]] = {(i,) for i in range(len(vertices))}
        for s in maximal:
            try:
                top = tuple(sorted({idx[v] for v in s}))
            except KeyError as e:
                raise ComplexError(f"unknown vertex {e.args[0]!r}") from None
            for r in range(1, len(top) + 1):
                faces.update(combinations(top, r))
        return cls(vertices, tuple(sorted(faces, key=lambda s: (len(s), s))))

    def __len__(self) -> int:
        return len(self.simplices)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {s: i for i, s in enumerate(self.simplices)}

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @cached_property
    def by_dim(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.dim + 2)]
        for i, s in enumerate(self.simplices):
            out[len(s) - 1].append(i)
        return out

    @cached_property
    def position(self) -> list[int]:
        """Position of each simplex within the list of its dimension."""
        pos = [0] * len(self.simplices)
        for ids in self.by_dim:
            for k, i in enumerate(ids):
                pos[i] = k
        return pos

    def check(self) -> None:
        for s in self.simplices:
            for r in range(1, len(s)):
                for face in combinations(s, r):
                    if face not in self.index:
                        raise ComplexError(f"face {face} of {s} missing")

    def maximal(self) -> list[tuple[int, ...]]:
        sets = [frozenset(s) for s in self.simplices]
        return [s for s, a in zip(self.simplices, sets) if not any(a < b for b in sets)]

    def full(self) -> frozenset[int]:
        return frozenset(range(len(self.simplices)))

    def full_subcomplex(self, vertex_ids: Iterable[int]) -> frozenset[int]:
        """Simplices all of whose vertices lie in ``vertex_ids``."""
        vs = set(vertex_ids)
        return frozenset(i for i, s in enumerate(self.simplices) if vs.issuperset(s))

    def is_subcomplex(self, sub: Iterable[int]) -> bool:
        sub = set(sub)
        for i in sub:
            s = self.simplices[i]
            for r in range(1, len(s)):
                if any(self.index[f] not in sub for f in combinations(s, r)):
                    return False
        return True

    def count(self, k: int) -> int:
        return len(self.by_dim[k]) if 0 <= k < len(self.by_dim) else 0

    def boundary(self, k: int, p: int) -> np.ndarray:
        """Boundary C_k -> C_{k-1} over F_p in ambient coordinates."""
        rows, cols = self.count(k - 1), self.count(k)
        d = fp.zeros(rows, cols, p)
        if k <= 0 or cols == 0:
            return d
        for c, i in enumerate(self.by_dim[k]):
            s = self.simplices[i]
            for j in range(len(s)):
                face = s[:j] + s[j + 1:]
                d[self.position[self.index[face]], c] = (-1) ** j % p
        return d

    def describe(self, sub: Iterable[int]) -> list[tuple]:
        return [tuple(self.vertices[v] for v in self.simplices[i]) for i in sorted(sub)]


@dataclass(frozen=True)
class HomologyBasis:
    """Boundaries B and class representatives R of H_k, as ambient chains
    (columns), and the stacked basis [B | R] of the cycle space."""

    boundaries: np.ndarray
    reps: np.ndarray

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    @property
    def cycles(self) -> np.ndarray:
        return np.concatenate([self.boundaries, self.reps], axis=1)


def homology_basis(K: SimplicialComplex, sub: frozenset[int], k: int, p: int) -> HomologyBasis:
    key = ("basis", sub, k, p)
    if key in K._homology:
        return K._homology[key]
    n_k = K.count(k)
    cols_k = [K.position[i] for i in K.by_dim[k] if i in sub] if n_k else []
    cols_k1 = [K.position[i] for i in K.by_dim[k + 1] if i in sub] if K.count(k + 1) else []
    d_k = _boundary_cached(K, k, p)
    d_k1 = _boundary_cached(K, k + 1, p)

    z_local = fp.nullspace(d_k[:, cols_k], p)
    z = fp.zeros(n_k, z_local.shape[1], p)
    z[cols_k, :] = z_local
    b = fp.column_space_basis(d_k1[:, cols_k1], p) if cols_k1 else fp.zeros(n_k, 0, p)
    # extend a basis of B to one of Z by the pivot columns of [B | Z]
    stacked = np.concatenate([b, z], axis=1)
    _, pivots = fp.rref(stacked, p) if stacked.size else (None, [])
    extra = [c - b.shape[1] for c in pivots if c >= b.shape[1]]
    basis = HomologyBasis(b, z[:, extra])
    K._homology[key] = basis
    return basis


def _boundary_cached(K: SimplicialComplex, k: int, p: int) -> np.ndarray:
    key = ("boundary", k, p)
    if key not in K._homology:
        K._homology[key] = K.boundary(k, p)
    return K._homology[key]


def betti(K: SimplicialComplex, sub: frozenset[int], k: int, p: int) -> int:
    return homology_basis(K, sub, k, p).dim


def homology_induced(K: SimplicialComplex, sub: frozenset[int], sup: frozenset[int], k: int, p: int) -> np.ndarray:
    """Matrix of H_k(sub) -> H_k(sup) induced by inclusion, in the bases of
    ``homology_basis``; shape (dim H_k(sup), dim H_k(sub))."""
    key = ("induced", sub, sup, k, p)
    if key in K._homology:
        return K._homology[key]
    if not sub <= sup:
        raise ComplexError("not an inclusion of subcomplexes")
    src = homology_basis(K, sub, k, p)
    dst = homology_basis(K, sup, k, p)
    if src.dim == 0 or dst.dim == 0:
        out = fp.zeros(dst.dim, src.dim, p)
    else:
        coeffs = fp.solve(dst.cycles, src.reps, p)
        if coeffs is None:
            raise ComplexError("cycle of the subcomplex is not a cycle of the supercomplex")
        out = coeffs[dst.boundaries.shape[1]:, :]
    K._homology[key] = out
    return out


def components(K: SimplicialComplex, sub: frozenset[int]) -> tuple[list[int], dict[int, int]]:
    """Connected components of a subcomplex, numbered in order of their
    smallest vertex.  Returns the smallest vertex of each component and the
    component number of each vertex."""
    if sub in K._pi0:
        return K._pi0[sub]
    verts = sorted(K.simplices[i][0] for i in sub if len(K.simplices[i]) == 1)
    if not verts:
        K._pi0[sub] = ([], {})
        return K._pi0[sub]
    local = {v: j for j, v in enumerate(verts)}
    edges = [K.simplices[i] for i in sub if len(K.simplices[i]) == 2]
    rows = [local[a] for a, _ in edges]
    cols = [local[b] for _, b in edges]
    g = coo_matrix((np.ones(len(edges)), (rows, cols)), shape=(len(verts), len(verts)))
    _, labels = connected_components(g, directed=False)
    # relabel by smallest vertex; verts is sorted so first sight is smallest
    order: dict[int, int] = {}
    for lab in labels:
        order.setdefault(int(lab), len(order))
    comp = {v: order[int(labels[j])] for j, v in enumerate(verts)}
    roots = [0] * len(order)
    for v in reversed(verts):
        roots[comp[v]] = v
    K._pi0[sub] = (roots, comp)
    return K._pi0[sub]


def components_induced(K: SimplicialComplex, sub: frozenset[int], sup: frozenset[int]) -> tuple[int, ...]:
    """Function pi0(sub) -> pi0(sup) induced by inclusion."""
    if not sub <= sup:
        raise ComplexError("not an inclusion of subcomplexes")
    roots, _ = components(K, sub)
    _, comp = components(K, sup)
    return tuple(comp[r] for r in roots)


def path_complex(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_maximal(range(n), [(i, i + 1) for i in range(n - 1)])


def hollow_triangle() -> SimplicialComplex:
    return SimplicialComplex.from_maximal(range(3), [(0, 1), (1, 2), (0, 2)])


def filled_triangle() -> SimplicialComplex:
    return SimplicialComplex.from_maximal(range(3), [(0, 1, 2)])
