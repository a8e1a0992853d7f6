"""Inverse-image persistence: a function from the vertices of a simplicial
complex into a finite metric space, pulled back along a family of subsets.

Families are explicit lists of subsets of the metric space, preordered by
inclusion.  Subsets are frozensets of point indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from .complexes import SimplicialComplex
from .interleave import (
    DEFAULT_GUARD,
    DistanceResult,
    InterleavingCertificate,
    distance_family,
    exists_interleaving,
    pushforward_certificate,
    verify_certificate,
)
from .metrics import (
    INF,
    LawvereMetric,
    LawvereProjection,
    SuperlinearFamily,
    hausdorff_metric,
    offset,
    symmetric_hausdorff_metric,
    value,
)
from .pmod import FinSimp, Functor, PersistenceModule, apply_functor
from .proset import SUBSET_GUARD, Proset
from .translations import Translation

FAMILY_GUARD = 1 << SUBSET_GUARD


class FamilyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    points: tuple
    d: LawvereMetric

    def __post_init__(self):
        if len(self.points) != self.d.n:
            raise FamilyError("one label per point is required")

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}


def line_space(values: Sequence) -> FiniteMetricSpace:
    """Points of a strictly increasing grid on the real line, |a - b|."""
    vals = tuple(Fraction(v) for v in values)
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise FamilyError("grid values must be strictly increasing")
    return FiniteMetricSpace(vals, LawvereMetric(tuple(tuple(abs(a - b) for b in vals) for a in vals)))


def grid_space(axes: Sequence[Sequence]) -> FiniteMetricSpace:
    """Product grid with the sup distance."""
    axes = [tuple(Fraction(v) for v in a) for a in axes]
    pts = tuple(product(*axes))
    d = tuple(tuple(max(abs(a - b) for a, b in zip(x, y)) for y in pts) for x in pts)
    return FiniteMetricSpace(pts, LawvereMetric(d))


def circle_space(m: int) -> FiniteMetricSpace:
    """m equispaced points on a circle with the geodesic step distance."""
    d = tuple(tuple(Fraction(min((i - j) % m, (j - i) % m)) for j in range(m)) for i in range(m))
    return FiniteMetricSpace(tuple(range(m)), LawvereMetric(d))


@dataclass(frozen=True, eq=False)
class VertexFunction:
    """values[v] is the index of the point that vertex v maps to."""

    complex: SimplicialComplex
    space: FiniteMetricSpace
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.complex.vertices):
            raise FamilyError("one value per vertex is required")
        if any(not 0 <= v < len(self.space) for v in self.values):
            raise FamilyError("function value off the declared grid")

    @classmethod
    def from_points(cls, K: SimplicialComplex, M: FiniteMetricSpace, pts: Sequence) -> "VertexFunction":
        """Values given as point labels; labels that are numbers or tuples of
        numbers are compared exactly after conversion to Fractions."""
        idx = []
        for p in pts:
            key = p
            if key not in M.index:
                key = tuple(Fraction(v) for v in p) if isinstance(p, (tuple, list)) else Fraction(p)
            if key not in M.index:
                raise FamilyError(f"value {p!r} is not a point of the grid")
            idx.append(M.index[key])
        return cls(K, M, tuple(idx))

    def point(self, v: int):
        return self.space.points[self.values[v]]


def dinfty_hat(f: VertexFunction, g: VertexFunction):
    _same_domain(f, g)
    d = f.space.d
    return max((d(a, b) for a, b in zip(f.values, g.values)), default=Fraction(0))


def dinfty(f: VertexFunction, g: VertexFunction):
    return max(dinfty_hat(f, g), dinfty_hat(g, f))


def _same_domain(f: VertexFunction, g: VertexFunction) -> None:
    if f.complex is not g.complex or f.space is not g.space:
        raise FamilyError("functions must share the complex and the metric space")


@dataclass(eq=False)
class SubsetFamily:
    """Subsets of a metric space preordered by inclusion.  Distinct labels may
    name equal subsets (the family is then a preorder)."""

    space: FiniteMetricSpace
    members: tuple[frozenset, ...]
    labels: tuple = ()
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.members = tuple(frozenset(m) for m in self.members)
        if len(self.members) > FAMILY_GUARD:
            raise FamilyError(f"family exceeds {FAMILY_GUARD} members")
        if not self.labels:
            self.labels = tuple(range(len(self.members)))
        if len(self.labels) != len(self.members) or len(set(self.labels)) != len(self.labels):
            raise FamilyError("labels must be distinct, one per member")
        n = len(self.space)
        if any(not 0 <= i < n for m in self.members for i in m):
            raise FamilyError("member contains a point outside the space")

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def proset(self) -> Proset:
        masks = np.array([sum(1 << i for i in m) for m in self.members], dtype=object)
        n = len(masks)
        if len(self.space) <= 62:
            masks = masks.astype(np.int64)
            leq = (masks[:, None] & ~masks[None, :]) == 0
        else:
            leq = np.array([[a & ~b == 0 for b in masks] for a in masks], dtype=bool).reshape(n, n)
        return Proset(tuple(self.labels), leq)

    @cached_property
    def lookup(self) -> dict[frozenset, list[int]]:
        out: dict[frozenset, list[int]] = {}
        for i, m in enumerate(self.members):
            out.setdefault(m, []).append(i)
        return out

    def least_containing(self, s: frozenset) -> int | None:
        """Index of a member below every member containing ``s``."""
        cands = [i for i, m in enumerate(self.members) if s <= m]
        if not cands:
            return None
        sizes = [len(self.members[i]) for i in cands]
        best = cands[int(np.argmin(sizes))]
        if all(self.members[best] <= self.members[i] for i in cands):
            return best
        return None

    def metric(self) -> LawvereMetric:
        """Asymmetric Hausdorff distance between members."""
        return hausdorff_metric(self.space.d, self.members)

    def symmetric_metric(self) -> LawvereMetric:
        return symmetric_hausdorff_metric(self.space.d, self.members)

    def omega(self) -> LawvereProjection:
        """omega_G = sup_A l_H(A, G A)."""
        return LawvereProjection(self.proset, self.metric())

    def omega_symmetric(self) -> LawvereProjection:
        return LawvereProjection(self.proset, self.symmetric_metric())

    def eps_values(self) -> list:
        """Finite asymmetric Hausdorff distances between members, with 0."""
        vals = {v for row in self.metric().d for v in row if v != INF}
        return sorted(vals | {Fraction(0)})


def inv_image_module(f: VertexFunction, fam: SubsetFamily) -> PersistenceModule:
    """A -> the full subcomplex on the vertices v with f(v) in A."""
    if f.space is not fam.space:
        raise FamilyError("function and family use different metric spaces")
    K = f.complex
    objs = tuple(
        K.full_subcomplex(v for v, pt in enumerate(f.values) if pt in m) for m in fam.members
    )
    return PersistenceModule(fam.proset, FinSimp(K), objs)


def enough_translations(fam: SubsetFamily, eps, eta=None) -> Translation | None:
    """G(A) = least member containing the eps-offset of A, or None if some
    offset has no least member above it.  ``eta`` only has to exceed eps;
    this constructor never needs the slack."""
    e = value(eps)
    if e < 0:
        raise FamilyError("eps must be nonnegative")
    if eta is not None and not value(eta) > e:
        raise FamilyError("eta must exceed eps")
    d = fam.space.d
    table = []
    for m in fam.members:
        k = fam.least_containing(offset(d, m, e))
        if k is None:
            return None
        table.append(k)
    return Translation(fam.proset, tuple(table))


def is_offset_closed(fam: SubsetFamily, eps_values: Sequence | None = None) -> bool:
    d = fam.space.d
    eps_values = fam.eps_values() if eps_values is None else [value(e) for e in eps_values]
    return all(offset(d, m, e) in fam.lookup for m in fam.members for e in eps_values)


def offset_family(fam: SubsetFamily, eps_grid: Sequence | None = None) -> SuperlinearFamily:
    """Omega_eps : A -> least member containing the eps-offset of A."""
    eps_grid = fam.eps_values() if eps_grid is None else sorted({value(e) for e in eps_grid} | {Fraction(0)})
    members = []
    for e in eps_grid:
        t = enough_translations(fam, e)
        if t is None:
            raise FamilyError(f"offsets at eps={e} have no least member above them")
        members.append(t)
    return SuperlinearFamily(fam.proset, tuple(eps_grid), tuple(members))


# ------------------------------------------------------------ generators


def sublevelset_family(thresholds: Sequence) -> SubsetFamily:
    """I^t = {s <= t} on the line through the thresholds."""
    M = line_space(thresholds)
    n = len(M)
    members = [frozenset(range(k + 1)) for k in range(n)]
    return SubsetFamily(M, tuple(members), tuple(M.points), "sublevelset", {"thresholds": list(M.points)})


def quadrant_family(axes: Sequence[Sequence]) -> SubsetFamily:
    """Q^a = {x <= a componentwise} on a product grid with the sup distance."""
    M = grid_space(axes)
    pts = M.points
    members = [frozenset(i for i, x in enumerate(pts) if all(u <= v for u, v in zip(x, a))) for a in pts]
    return SubsetFamily(M, tuple(members), tuple(pts), "quadrant", {"axes": [list(map(Fraction, a)) for a in axes]})


def interval_family(grid: Sequence) -> SubsetFamily:
    """Closed intervals [a, b] of the grid."""
    M = line_space(grid)
    n = len(M)
    labels, members = [], []
    for i in range(n):
        for j in range(i, n):
            labels.append((M.points[i], M.points[j]))
            members.append(frozenset(range(i, j + 1)))
    return SubsetFamily(M, tuple(members), tuple(labels), "interval", {"grid": list(M.points)})


def arc_family(m: int) -> SubsetFamily:
    """Arcs {i, ..., i+k} (mod m) and the full circle, labelled as in
    ``arc_proset``."""
    if m < 3:
        raise FamilyError("circle resolution must be at least 3")
    M = circle_space(m)
    labels, members = [], []
    for k in range(m):
        for i in range(m):
            labels.append((i, k))
            members.append(frozenset((i + s) % m for s in range(k + 1)))
    labels.append("circle")
    members.append(frozenset(range(m)))
    return SubsetFamily(M, tuple(members), tuple(labels), "arc", {"m": m})


def full_family(M: FiniteMetricSpace) -> SubsetFamily:
    """All subsets, in bitmask order.  In a finite metric space every subset
    is open, so this is also the family of open sets."""
    n = len(M)
    if n > SUBSET_GUARD:
        raise FamilyError(f"full family on {n} points exceeds the guard of {SUBSET_GUARD}")
    members = [frozenset(k for k in range(n) if (mask >> k) & 1) for mask in range(1 << n)]
    return SubsetFamily(M, tuple(members), tuple(members), "full", {})


# ------------------------------------------------------------- stability


@dataclass
class StabilityReport:
    dinf: object
    functor: str
    d_F: DistanceResult
    d_HF: DistanceResult
    sharp_certificate: InterleavingCertificate | None
    pushed_certificate: InterleavingCertificate | None
    pushed_verified: bool

    @property
    def violations(self) -> list[str]:
        out = []
        if self.d_F.lower > self.dinf:
            out.append(f"d(F,G) >= {self.d_F.lower} exceeds dinf = {self.dinf}")
        if self.d_HF.lower > self.d_F.upper:
            out.append(f"d(HF,HG) >= {self.d_HF.lower} exceeds d(F,G) <= {self.d_F.upper}")
        if self.pushed_certificate is not None and not self.pushed_verified:
            out.append("pushed-forward certificate does not verify")
        return out

    @property
    def ok(self) -> bool:
        return not self.violations


def stability_suite(f: VertexFunction, g: VertexFunction, fam: SubsetFamily, H: Functor | None,
                    eps_grid: Sequence | None = None, guard: int = DEFAULT_GUARD) -> StabilityReport:
    """Compute d(HF,HG), d(F,G) and dinf(f,g) for the inverse-image modules
    and record the certificates behind them."""
    _same_domain(f, g)
    di = dinfty(f, g)
    grid = sorted(set(fam.eps_values() if eps_grid is None else map(value, eps_grid)) | {di, Fraction(0)})
    grid = [e for e in grid if e != INF]
    Om = offset_family(fam, grid)
    F, G = inv_image_module(f, fam), inv_image_module(g, fam)
    dF = distance_family(F, G, Om, guard)
    sharp = None
    if is_offset_closed(fam, [di]):
        t = Om.at(di)
        sharp = exists_interleaving(F, G, t, t, guard)
    if H is None:
        return StabilityReport(di, "none", dF, dF, sharp, None, True)
    HF, HG = apply_functor(H, F), apply_functor(H, G)
    pushed, ok = None, True
    if dF.certificate is not None:
        _, _, pushed = pushforward_certificate(H, F, G, dF.certificate, HF, HG)
        ok = verify_certificate(HF, HG, pushed)
    dHF = distance_family(HF, HG, Om, guard)
    return StabilityReport(di, H.name, dF, dHF, sharp, pushed, ok)


__all__ = [
    "FiniteMetricSpace",
    "VertexFunction",
    "SubsetFamily",
    "line_space",
    "grid_space",
    "circle_space",
    "dinfty",
    "dinfty_hat",
    "inv_image_module",
    "enough_translations",
    "is_offset_closed",
    "offset_family",
    "sublevelset_family",
    "quadrant_family",
    "interval_family",
    "arc_family",
    "full_family",
    "stability_suite",
    "StabilityReport",
]
