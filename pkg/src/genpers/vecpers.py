"""Vector persistence on product grids: vector-valued sizes of
translations, directional distances, restriction to lines, and the up-set
of vector shifts at which two modules interleave."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .interleave import (
    DEFAULT_GUARD,
    DistanceResult,
    GuardExceeded,
    distance_family,
    exists_interleaving,
)
from .metrics import (
    MetricError,
    WeightedProjection,
    floor_index,
    grid_axes,
    shift_family,
)
from .pmod import ModuleError, PersistenceModule
from .proset import Proset, grid_proset
from .translations import Translation, maximal

IN, OUT, UNKNOWN = "in", "out", "unknown"


def _vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def vec_leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class UpSet:
    """Three-valued membership over a finite grid of vectors.  Points whose
    search hit the guard are ``unknown`` and belong to neither side."""

    grid: tuple[tuple[Fraction, ...], ...]
    status: tuple[str, ...]

    @property
    def members(self) -> list[tuple]:
        return [e for e, s in zip(self.grid, self.status) if s == IN]

    @property
    def unknown(self) -> list[tuple]:
        return [e for e, s in zip(self.grid, self.status) if s == UNKNOWN]

    def __contains__(self, e) -> bool:
        e = _vec(e)
        return any(g == e and s == IN for g, s in zip(self.grid, self.status))

    def state(self, e) -> str:
        e = _vec(e)
        for g, s in zip(self.grid, self.status):
            if g == e:
                return s
        raise KeyError(e)

    def violations(self) -> list[str]:
        """Pairs e <= e' with e in and e' out."""
        out = []
        for e, s in zip(self.grid, self.status):
            if s != IN:
                continue
            for e2, s2 in zip(self.grid, self.status):
                if s2 == OUT and vec_leq(e, e2):
                    out.append(f"{_fmt(e)} is in but {_fmt(e2)} is out")
        return out

    def is_upset(self) -> bool:
        return not self.violations()

    def minimal(self) -> list[tuple]:
        ms = self.members
        return [e for e in ms if not any(f != e and vec_leq(f, e) for f in ms)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        dim = len(self.grid[0]) if self.grid else 0
        w.writerow([f"e{k}" for k in range(dim)] + ["status"])
        for e, s in zip(self.grid, self.status):
            w.writerow([str(x) for x in e] + [s])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "UpSet":
        rows = list(csv.reader(io.StringIO(text)))
        grid, status = [], []
        for row in rows[1:]:
            grid.append(_vec(row[:-1]))
            status.append(row[-1])
        return cls(tuple(grid), tuple(status))


def _fmt(e) -> str:
    return "(" + ", ".join(str(x) for x in e) + ")"


def eps_vectors(axes: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Product grid of vector eps values."""
    return tuple(product(*[tuple(Fraction(v) for v in a) for a in axes]))


# -------------------------------------------------------- sizes and shifts


def omega_vec(g: Translation) -> tuple[Fraction, ...]:
    """Componentwise sup of g(x) - x on a grid proset."""
    el = g.proset.elements
    dim = len(el[0])
    out = [Fraction(0)] * dim
    for x, gx in enumerate(g.table):
        for k in range(dim):
            out[k] = max(out[k], el[gx][k] - el[x][k])
    return tuple(out)


def omega_weighted(g: Translation, a: Sequence) -> Fraction:
    """sup over x and k of (g(x) - x)_k / a_k, for strictly positive a."""
    return WeightedProjection(g.proset, tuple(a))(g)


def vector_shift(P: Proset, e: Sequence) -> Translation:
    """x -> x + e, rounded down to the grid and clamped at the top."""
    axes = grid_axes(P)
    e = _vec(e)
    if len(e) != len(axes) or any(v < 0 for v in e):
        raise MetricError("shift must be a nonnegative vector of the grid's dimension")
    idx = P.index
    table = tuple(
        idx[tuple(ax[floor_index(ax, xk + ek)] for ax, xk, ek in zip(axes, x, e))] for x in P.elements
    )
    return Translation(P, table)


def componentwise_norm(f, g) -> tuple | None:
    """(max_v |f_1(v) - g_1(v)|, ..., max_v |f_n(v) - g_n(v)|)."""
    n = len(f.complex.vertices)
    if n == 0:
        return None
    pf, pg = [f.point(v) for v in range(n)], [g.point(v) for v in range(n)]
    return tuple(max(abs(Fraction(a[k]) - Fraction(b[k])) for a, b in zip(pf, pg)) for k in range(len(pf[0])))



# ------------------------------------------------------- scalar distances


def d_a(F: PersistenceModule, G: PersistenceModule, a: Sequence, eps_grid: Sequence,
        guard: int = DEFAULT_GUARD) -> DistanceResult:
    """Family distance for Omega_eps(x) = x + eps a."""
    fam = shift_family(F.proset, eps_grid, a)
    return distance_family(F, G, fam, guard)


def line_points(P: Proset, a: Sequence, b: Sequence, t_grid: Sequence) -> list[int]:
    a, b = _vec(a), _vec(b)
    if any(v < 0 for v in a):
        raise MetricError("line direction must be nonnegative")
    out = []
    for t in t_grid:
        pt = tuple(bk + Fraction(t) * ak for ak, bk in zip(a, b))
        if pt not in P.index:
            raise ModuleError(f"line point {_fmt(pt)} at t={t} is off the grid")
        out.append(P.index[pt])
    return out


def line_reaches_top(P: Proset, a: Sequence, b: Sequence, t_grid: Sequence) -> bool:
    """Whether the last line point sits at the top of every axis along which
    the line moves.  Only then does clamping on the line agree with clamping
    on the grid."""
    axes = grid_axes(P)
    last = P.elements[line_points(P, a, b, t_grid)[-1]]
    return all(ak == 0 or last[k] == axes[k][-1] for k, ak in enumerate(_vec(a)))


def line_restrict(F: PersistenceModule, a: Sequence, b: Sequence, t_grid: Sequence,
                  line: Proset | None = None) -> PersistenceModule:
    """F along t -> b + t a, as a module over the chain t_grid (or over
    ``line``, which must be that chain)."""
    pts = line_points(F.proset, a, b, t_grid)
    L = line if line is not None else grid_proset([t_grid])
    mors = {(u, v): F.morphism(pts[u], pts[v]) for (u, v) in L.generators}
    return PersistenceModule(L, F.target, tuple(F.objects[x] for x in pts), mors)


def delta_ab(F: PersistenceModule, G: PersistenceModule, a: Sequence, b: Sequence, t_grid: Sequence,
             eps_grid: Sequence, guard: int = DEFAULT_GUARD) -> DistanceResult:
    L = grid_proset([t_grid])
    FL, GL = line_restrict(F, a, b, t_grid, L), line_restrict(G, a, b, t_grid, L)
    fam = shift_family(FL.proset, eps_grid)
    return distance_family(FL, GL, fam, guard)


# --------------------------------------------------------------- up-sets


def d_set(F: PersistenceModule, G: PersistenceModule, grid: Sequence[Sequence],
          guard: int = DEFAULT_GUARD) -> UpSet:
    """e is in when F and G are (Omega_e, Omega_e)-interleaved."""
    grid = tuple(_vec(e) for e in grid)
    status = []
    for e in grid:
        t = vector_shift(F.proset, e)
        try:
            status.append(IN if exists_interleaving(F, G, t, t, guard) is not None else OUT)
        except GuardExceeded:
            status.append(UNKNOWN)
    return UpSet(grid, tuple(status))


def d_set_omega(F: PersistenceModule, G: PersistenceModule, grid: Sequence[Sequence],
                translations: Sequence[Translation], guard: int = DEFAULT_GUARD) -> UpSet:
    """e is in when some (g, k) with omega_vec(g), omega_vec(k) <= e
    interleaves F and G."""
    grid = tuple(_vec(e) for e in grid)
    sizes = {t: omega_vec(t) for t in translations}
    status = []
    for e in grid:
        cands = maximal([t for t in translations if vec_leq(sizes[t], e)])
        state = OUT
        for g in cands:
            for k in cands:
                try:
                    if exists_interleaving(F, G, g, k, guard) is not None:
                        state = IN
                        break
                except GuardExceeded:
                    state = UNKNOWN
            if state == IN:
                break
        status.append(state)
    return UpSet(grid, tuple(status))


def minkowski_violations(d_ef: UpSet, d_fg: UpSet, d_eg: UpSet) -> list[str]:
    """Sums e1 + e2 of members that land on d_eg's grid but are not in it.
    Sums that fall off the grid are skipped."""
    out = []
    index = {e: s for e, s in zip(d_eg.grid, d_eg.status)}
    for e1 in d_ef.members:
        for e2 in d_fg.members:
            s = tuple(x + y for x, y in zip(e1, e2))
            if index.get(s) == OUT:
                out.append(f"{_fmt(e1)} + {_fmt(e2)} is out")
    return out


def superset_violations(big: UpSet, small: UpSet) -> list[str]:
    """Members of ``small`` that ``big`` reports as out."""
    index = {e: s for e, s in zip(big.grid, big.status)}
    return [f"{_fmt(e)} is out" for e in small.members if index.get(e) == OUT]
