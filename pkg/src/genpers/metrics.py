"""Lawvere metrics, sublinear projections, superlinear families and the
Galois connection between them, plus Hausdorff distances and offsets on a
finite metric space.

Values live in [0, inf]: finite values are ``Fraction``s and infinity is
``math.inf``.  Python's mixed comparisons and ``Fraction + inf == inf`` give
saturating arithmetic for free.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .proset import Proset
from .translations import (
    Translation,
    TranslationError,
    identity,
    is_translation,
    pointwise_join,
    trans_leq,
)

INF = math.inf


def value(v) -> Fraction | float:
    """Parse an exact value: ints, Fractions, rational strings, or 'inf'."""
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity", "+inf"):
        return INF
    if isinstance(v, float) and math.isinf(v):
        if v < 0:
            raise ValueError("negative infinity is not a distance")
        return INF
    return Fraction(v)


def fmt(v) -> str:
    return "inf" if v == INF else str(Fraction(v))


class MetricError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LawvereMetric:
    """d: P x P -> [0, inf] with d(x,x) = 0 and the triangle inequality.
    No symmetry is required."""

    d: tuple[tuple, ...]

    @classmethod
    def from_table(cls, table, check: bool = True) -> "LawvereMetric":
        m = cls(tuple(tuple(value(v) for v in row) for row in table))
        if check:
            m.check()
        return m

    @property
    def n(self) -> int:
        return len(self.d)

    def __call__(self, x: int, y: int):
        return self.d[x][y]

    def violations(self) -> list[str]:
        n = self.n
        out = []
        for x in range(n):
            if len(self.d[x]) != n:
                out.append(f"row {x} has length {len(self.d[x])}")
                return out
            if self.d[x][x] != 0:
                out.append(f"d({x},{x}) = {self.d[x][x]}")
            for y in range(n):
                if self.d[x][y] < 0:
                    out.append(f"d({x},{y}) < 0")
        for x, y, z in product(range(n), repeat=3):
            if self.d[x][z] > self.d[x][y] + self.d[y][z]:
                out.append(f"triangle fails at ({x},{y},{z})")
        return out

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise MetricError("; ".join(bad[:5]))

    def is_symmetric(self) -> bool:
        return all(self.d[x][y] == self.d[y][x] for x in range(self.n) for y in range(self.n))

    def values(self) -> list:
        return sorted({v for row in self.d for v in row})


def shortest_path_closure(table) -> LawvereMetric:
    """Largest Lawvere metric below a table of nonnegative weights
    (Floyd-Warshall); the diagonal is forced to 0."""
    n = len(table)
    d = [[value(v) for v in row] for row in table]
    for x in range(n):
        d[x][x] = Fraction(0)
    for k in range(n):
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            for j in range(n):
                alt = dik + d[k][j]
                if alt < d[i][j]:
                    d[i][j] = alt
    return LawvereMetric(tuple(tuple(r) for r in d))


# ---------------------------------------------------------------- projections


class SublinearProjection:
    """Map from translations of ``proset`` to [0, inf].

    Subclasses implement ``__call__``.  ``check`` verifies the two axioms
    over a supplied list of translations.
    """

    tag = "abstract"
    proset: Proset

    def __call__(self, g: Translation):
        raise NotImplementedError

    def violations(self, translations: Sequence[Translation]) -> list[str]:
        out = []
        if self(identity(self.proset)) != 0:
            out.append("omega(I) != 0")
        vals = {t.table: self(t) for t in translations}
        for a in translations:
            for b in translations:
                ab = tuple(a.table[i] for i in b.table)
                v = vals[ab] if ab in vals else self(Translation(self.proset, ab))
                if v > vals[a.table] + vals[b.table]:
                    out.append(f"sublinearity fails for {a.table}, {b.table}")
        return out

    def is_sublinear(self, translations: Sequence[Translation]) -> bool:
        return not self.violations(translations)


@dataclass(eq=False)
class LawvereProjection(SublinearProjection):
    """omega(G) = sup_x d(x, G(x))."""

    proset: Proset
    metric: LawvereMetric
    tag = "lawvere"

    def __post_init__(self):
        if self.metric.n != len(self.proset):
            raise MetricError("metric and proset sizes differ")

    def __call__(self, g: Translation):
        return omega_from_lawvere(self.proset, self.metric, g)


@dataclass(eq=False)
class TabulatedProjection(SublinearProjection):
    """Explicit value per translation table; missing tables map to ``default``."""

    proset: Proset
    table: Mapping[tuple, object]
    default: object = INF
    tag = "tabulated"

    def __call__(self, g: Translation):
        return self.table.get(tuple(g.table), self.default)


@dataclass(eq=False)
class WeightedProjection(SublinearProjection):
    """omega(G) = sup_{x,k} (G(x) - x)_k / a_k on a grid proset whose
    elements are coordinate tuples; ``a`` must be strictly positive."""

    proset: Proset
    weights: tuple
    tag = "vector-weighted"

    def __post_init__(self):
        self.weights = tuple(Fraction(a) for a in self.weights)
        if any(a <= 0 for a in self.weights):
            raise MetricError("weights must be strictly positive")

    def __call__(self, g: Translation):
        el = self.proset.elements
        best = Fraction(0)
        for x, gx in enumerate(g.table):
            for k, a in enumerate(self.weights):
                best = max(best, (el[gx][k] - el[x][k]) / a)
        return best


@dataclass(eq=False)
class FamilyProjection(SublinearProjection):
    """omega(G) = inf { eps : G <= Omega_eps }."""

    family: "SuperlinearFamily"
    tag = "from-family"

    @property
    def proset(self) -> Proset:
        return self.family.proset

    def __call__(self, g: Translation):
        return omega_from_family(self.family, g)


@dataclass(eq=False)
class HullProjection(SublinearProjection):
    """Monotone hull of another projection over an exhaustive translation list."""

    base: SublinearProjection
    translations: Sequence[Translation]
    tag = "monotone-hull"
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def proset(self) -> Proset:
        return self.base.proset

    def __call__(self, g: Translation):
        key = tuple(g.table)
        if key not in self._cache:
            self._cache[key] = monotone_hull(self.base, g, self.translations)
        return self._cache[key]


def omega_from_lawvere(p: Proset, d: LawvereMetric, g: Translation):
    if g.proset is not p:
        raise TranslationError("translation is on another proset")
    return max((d(x, gx) for x, gx in enumerate(g.table)), default=Fraction(0))


def monotone_hull(omega: SublinearProjection, g: Translation, all_translations: Sequence[Translation]):
    """inf of omega over the translations above ``g``."""
    cands = [omega(h) for h in all_translations if trans_leq(g, h)]
    if not cands:
        raise TranslationError("translation list is not exhaustive: nothing above g")
    return min(cands)


def omega_values(omega: SublinearProjection, translations: Iterable[Translation]) -> list:
    return sorted({omega(t) for t in translations})


# ------------------------------------------------------------------- families


def floor_index(grid: Sequence, v) -> int | None:
    """Index of the largest grid value <= v, or None if v is below the grid."""
    k = bisect.bisect_right(grid, v) - 1
    return k if k >= 0 else None


@dataclass(eq=False)
class SuperlinearFamily:
    """Translations Omega_eps indexed by a finite grid of eps values.

    Grid values stand for the step extension: Omega_eps for an arbitrary
    eps >= 0 is the member at the largest grid value <= eps.
    """

    proset: Proset
    eps: tuple
    members: tuple[Translation, ...]

    def __post_init__(self):
        self.eps = tuple(value(e) for e in self.eps)
        if not self.eps or self.eps[0] != 0:
            raise MetricError("eps grid must start at 0")
        if any(a >= b for a, b in zip(self.eps, self.eps[1:])):
            raise MetricError("eps grid must be strictly increasing")
        if len(self.members) != len(self.eps):
            raise MetricError("one translation per grid value is required")
        for m in self.members:
            if m.proset is not self.proset:
                raise TranslationError("family member lives on another proset")

    @classmethod
    def from_function(cls, p: Proset, eps: Sequence, fn: Callable) -> "SuperlinearFamily":
        eps = tuple(value(e) for e in eps)
        return cls(p, eps, tuple(Translation(p, tuple(fn(e))) for e in eps))

    def at(self, e) -> Translation:
        if e == INF:
            raise MetricError("Omega_inf is not defined")
        k = floor_index(self.eps, value(e))
        if k is None:
            raise MetricError(f"eps {e} is negative")
        return self.members[k]

    def __iter__(self):
        return iter(zip(self.eps, self.members))


def superlinear_violations(fam: SuperlinearFamily) -> list[str]:
    out = []
    for (e1, m1), (e2, m2) in zip(fam, list(fam)[1:]):
        if not trans_leq(m1, m2):
            out.append(f"not monotone between {fmt(e1)} and {fmt(e2)}")
    for (e1, m1), (e2, m2) in product(fam, repeat=2):
        comp = tuple(m1.table[i] for i in m2.table)
        target = fam.at(e1 + e2)
        if not all(fam.proset.leq[a, b] for a, b in zip(comp, target.table)):
            out.append(f"Omega_{fmt(e1)} Omega_{fmt(e2)} is not below Omega_{fmt(e1 + e2)}")
    return out


def check_superlinear(fam: SuperlinearFamily) -> bool:
    """Monotone, and Omega_{e1+e2} >= Omega_{e1} Omega_{e2} for all grid
    pairs (sums off the grid are read through the step extension)."""
    return not superlinear_violations(fam)


def omega_from_family(fam: SuperlinearFamily, g: Translation):
    for e, m in fam:
        if trans_leq(g, m):
            return e
    return INF


def adjoint_violations(omega: SublinearProjection, fam: SuperlinearFamily,
                       translations: Sequence[Translation]) -> list[str]:
    out = []
    grid = fam.eps
    for g in translations:
        w = omega(g)
        for e, m in fam:
            if (w <= e) != trans_leq(g, m):
                out.append(f"omega={fmt(w)} vs Omega_{fmt(e)} disagree at {g.table}")
        # between grid points the family is constant, so omega may not take
        # a finite value strictly inside a gap or beyond the last grid value
        if w != INF and w not in grid:
            out.append(f"omega value {fmt(w)} of {g.table} falls between grid points")
    return out


def adjoint_check(omega: SublinearProjection, fam: SuperlinearFamily,
                  translations: Sequence[Translation]) -> bool:
    """omega_G <= eps  <=>  G <= Omega_eps for every translation G and every
    eps >= 0, with the family read as its step extension."""
    return not adjoint_violations(omega, fam, translations)


class SupremumError(ValueError):
    def __init__(self, eps, msg):
        super().__init__(f"eps={fmt(eps)}: {msg}")
        self.eps = eps


def family_from_omega(omega: SublinearProjection, eps_grid: Sequence,
                      translations: Sequence[Translation]) -> SuperlinearFamily:
    """Omega_eps = sup { G : omega_G <= eps }, computed pointwise and then
    checked to be a translation that is itself an eps-translation."""
    p = omega.proset
    eps_grid = sorted({value(e) for e in eps_grid} | {Fraction(0)})
    members = []
    for e in eps_grid:
        cands = [t.table for t in translations if omega(t) <= e]
        if not cands:
            raise SupremumError(e, "no translation has omega <= eps")
        join = pointwise_join(p, cands)
        if join is None or not is_translation(p, join):
            raise SupremumError(e, "pointwise supremum is not a translation")
        members.append(Translation(p, join))
    return SuperlinearFamily(p, tuple(eps_grid), tuple(members))


def shift_family(p: Proset, eps_grid: Sequence, direction: Sequence | None = None) -> SuperlinearFamily:
    """Omega_eps(x) = x + eps * a, rounded down to the grid and clamped at
    the top of each axis.  ``p`` must come from ``grid_proset``."""
    axes = grid_axes(p)
    a = tuple(Fraction(1) for _ in axes) if direction is None else tuple(Fraction(v) for v in direction)
    if len(a) != len(axes):
        raise MetricError("direction has the wrong dimension")
    if any(v < 0 for v in a):
        raise MetricError("direction must be nonnegative")
    idx = p.index

    def fn(e):
        out = []
        for x in p.elements:
            y = tuple(ax[floor_index(ax, xk + e * ak)] for ax, xk, ak in zip(axes, x, a))
            out.append(idx[y])
        return out

    return SuperlinearFamily.from_function(p, eps_grid, fn)


def grid_axes(p: Proset) -> list[tuple]:
    """Recover the axes of a proset built by ``grid_proset``."""
    el = p.elements
    if not el or not isinstance(el[0], tuple):
        raise MetricError("not a grid proset")
    dim = len(el[0])
    return [tuple(sorted({x[k] for x in el})) for k in range(dim)]


def sup_metric_on_grid(p: Proset) -> LawvereMetric:
    """l-infinity distance between grid coordinates."""
    el = p.elements
    return LawvereMetric(tuple(
        tuple(max((abs(a - b) for a, b in zip(x, y)), default=Fraction(0)) for y in el) for x in el
    ))


# ------------------------------------------------------ Hausdorff and offsets


def asym_hausdorff(d: LawvereMetric, a: Iterable[int], b: Iterable[int]):
    """sup_{y in B} inf_{x in A} d(x, y); sup over nothing is 0, inf over
    nothing is inf."""
    a, b = list(a), list(b)
    return max((min((d(x, y) for x in a), default=INF) for y in b), default=Fraction(0))


def hausdorff(d: LawvereMetric, a: Iterable[int], b: Iterable[int]):
    a, b = list(a), list(b)
    return max(asym_hausdorff(d, a, b), asym_hausdorff(d, b, a))


def offset(d: LawvereMetric, a: Iterable[int], e) -> frozenset[int]:
    """{ m : inf_{x in A} d(x, m) <= e }."""
    a = list(a)
    e = value(e)
    if e < 0:
        raise MetricError("offset radius must be nonnegative")
    return frozenset(m for m in range(d.n) if min((d(x, m) for x in a), default=INF) <= e)


def weak_offset(d: LawvereMetric, a: Iterable[int], e) -> frozenset[int]:
    """{ m : d(x, m) <= e for some x in A }.  In a finite space the infimum
    is attained, so this coincides with ``offset``."""
    a = list(a)
    e = value(e)
    return frozenset(m for m in range(d.n) if any(d(x, m) <= e for x in a))


def hausdorff_metric(d: LawvereMetric, sets: Sequence[Iterable[int]]) -> LawvereMetric:
    """Asymmetric Hausdorff distance as a Lawvere metric on a list of subsets."""
    sets = [list(s) for s in sets]
    return LawvereMetric(tuple(tuple(asym_hausdorff(d, a, b) for b in sets) for a in sets))


def symmetric_hausdorff_metric(d: LawvereMetric, sets: Sequence[Iterable[int]]) -> LawvereMetric:
    sets = [list(s) for s in sets]
    return LawvereMetric(tuple(tuple(hausdorff(d, a, b) for b in sets) for a in sets))


def as_array(d: LawvereMetric) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in d.d])
