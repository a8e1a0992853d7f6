"""Finite preordered sets, monotone maps and the index posets of the
example persistence theories."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Sequence

import numpy as np

SUBSET_GUARD = 12


class ProsetError(ValueError):
    pass


def _closure(leq: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by iterated boolean squaring."""
    n = leq.shape[0]
    m = leq.copy() | np.eye(n, dtype=bool)
    while True:
        nxt = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if (nxt == m).all():
            return m
        m = nxt


@dataclass(frozen=True, eq=False)
class Proset:
    """A finite preordered set.

    ``leq[i, j]`` is True iff element ``i`` is below element ``j``.  All
    algorithms work on indices; labels are only for display and lookup.
    """

    elements: tuple
    leq: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.leq.setflags(write=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(range(len(self.elements)))

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def le(self, i: int, j: int) -> bool:
        return bool(self.leq[i, j])

    def equivalent(self, i: int, j: int) -> bool:
        return bool(self.leq[i, j] and self.leq[j, i])

    def check(self) -> None:
        n = len(self)
        if self.leq.shape != (n, n):
            raise ProsetError("relation table has the wrong shape")
        if not np.diag(self.leq).all():
            raise ProsetError("relation is not reflexive")
        if not (_closure(self.leq) == self.leq).all():
            raise ProsetError("relation is not transitive")

    def is_poset(self) -> bool:
        sym = self.leq & self.leq.T
        return bool((sym == np.eye(len(self), dtype=bool)).all())

    def is_total(self) -> bool:
        return bool((self.leq | self.leq.T).all())

    def up(self, i: int) -> list[int]:
        return [int(j) for j in np.nonzero(self.leq[i])[0]]

    def down(self, i: int) -> list[int]:
        return [int(j) for j in np.nonzero(self.leq[:, i])[0]]

    @cached_property
    def classes(self) -> list[tuple[int, ...]]:
        """Equivalence classes under x <= y <= x, ordered by smallest member."""
        seen: set[int] = set()
        out = []
        for i in range(len(self)):
            if i in seen:
                continue
            cls = tuple(j for j in range(len(self)) if self.equivalent(i, j))
            seen.update(cls)
            out.append(cls)
        return out

    @cached_property
    def generators(self) -> tuple[tuple[int, int], ...]:
        """Generating arrows: every relation is a composite of these.

        Each equivalence class contributes a directed cycle through its
        members; each covering pair of classes contributes one arrow between
        their smallest members.
        """
        arrows: list[tuple[int, int]] = []
        classes = self.classes
        for cls in classes:
            if len(cls) > 1:
                arrows.extend(zip(cls, cls[1:] + cls[:1]))
        reps = [c[0] for c in classes]
        strict = self.leq[np.ix_(reps, reps)] & ~self.leq[np.ix_(reps, reps)].T
        for a, b in zip(*np.nonzero(strict)):
            between = strict[a] & strict[:, b]
            if not between.any():
                arrows.append((reps[a], reps[b]))
        return tuple(sorted(arrows))

    @cached_property
    def _out_arrows(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {i: [] for i in range(len(self))}
        for a, b in self.generators:
            out[a].append(b)
        return out

    def path(self, i: int, j: int) -> list[int]:
        """A shortest generator path from ``i`` to ``j`` (requires i <= j)."""
        if not self.leq[i, j]:
            raise ProsetError(f"{self.elements[i]!r} is not below {self.elements[j]!r}")
        parent = {i: None}
        queue = deque([i])
        while queue:
            u = queue.popleft()
            if u == j:
                break
            for v in self._out_arrows[u]:
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        out = [j]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out[::-1]

    def bfs_tree(self, i: int) -> dict[int, int | None]:
        """Parent pointers of a breadth-first tree of generator paths from i."""
        parent: dict[int, int | None] = {i: None}
        order = [i]
        queue = deque([i])
        while queue:
            u = queue.popleft()
            for v in self._out_arrows[u]:
                if v not in parent:
                    parent[v] = u
                    order.append(v)
                    queue.append(v)
        return {v: parent[v] for v in order}

    def relations(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.leq))]

    def linear_extension(self) -> list[int]:
        """Indices sorted so that i before j whenever i < j strictly."""
        below = self.leq.sum(axis=0)
        return sorted(range(len(self)), key=lambda i: (int(below[i]), i))

    def __repr__(self) -> str:
        return f"Proset(n={len(self)}, relations={int(self.leq.sum())})"


def from_table(elements: Sequence, leq, validate: bool = True) -> Proset:
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise ProsetError("duplicate labels")
    table = np.array(leq, dtype=bool)
    p = Proset(elements, table)
    if validate:
        p.check()
    return p


def make_proset(elements: Iterable[Hashable], relations: Iterable[tuple]) -> Proset:
    """Proset generated by ``relations`` (pairs of labels, or of indices when
    the labels are not themselves used)."""
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise ProsetError("duplicate labels")
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.zeros((n, n), dtype=bool)
    for a, b in relations:
        ia = idx[a] if a in idx else a
        ib = idx[b] if b in idx else b
        if not (isinstance(ia, (int, np.integer)) and isinstance(ib, (int, np.integer))):
            raise ProsetError(f"unknown element in relation {(a, b)!r}")
        table[ia, ib] = True
    return Proset(elements, _closure(table))


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    source: Proset
    target: Proset
    table: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.table[i]

    def is_monotone(self) -> bool:
        s, t = self.source.leq, self.target.leq
        tab = np.asarray(self.table)
        return bool((~s | t[np.ix_(tab, tab)]).all())


def quotient_poset(p: Proset) -> tuple[Proset, MonotoneMap]:
    """Poset of equivalence classes and the projection onto it."""
    classes = p.classes
    cls_of = {}
    for k, cls in enumerate(classes):
        for i in cls:
            cls_of[i] = k
    reps = [c[0] for c in classes]
    labels = tuple(
        p.elements[c[0]] if len(c) == 1 else tuple(p.elements[i] for i in c) for c in classes
    )
    q = Proset(labels, p.leq[np.ix_(reps, reps)].copy())
    proj = MonotoneMap(p, q, tuple(cls_of[i] for i in range(len(p))))
    return q, proj


def chain(n: int) -> Proset:
    return grid_proset([list(range(n))])


def _as_axis(axis) -> tuple[Fraction, ...]:
    vals = tuple(Fraction(v) for v in axis)
    if not vals:
        raise ProsetError("empty axis")
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise ProsetError("axis values must be strictly increasing")
    return vals


def grid_proset(axes: Sequence[Sequence]) -> Proset:
    """Finite product grid with the componentwise order.  Elements are
    coordinate tuples of Fractions; a single axis gives a chain whose
    elements are still 1-tuples."""
    axes = [_as_axis(a) for a in axes]
    points = list(product(*axes))
    # compare grid positions rather than values: exact and vectorised
    pos = np.array(list(product(*[range(len(a)) for a in axes]))).reshape(len(points), len(axes))
    leq = (pos[:, None, :] <= pos[None, :, :]).all(axis=2)
    return Proset(tuple(points), leq)


def interval_proset(grid: Sequence) -> Proset:
    """Closed intervals [a, b] on the grid, ordered by containment:
    (a1, b1) <= (a2, b2) iff a1 >= a2 and b1 <= b2."""
    g = _as_axis(grid)
    pairs = [(a, b) for i, a in enumerate(g) for b in g[i:]]
    n = len(pairs)
    leq = np.zeros((n, n), dtype=bool)
    for i, (a1, b1) in enumerate(pairs):
        for j, (a2, b2) in enumerate(pairs):
            leq[i, j] = a1 >= a2 and b1 <= b2
    return Proset(tuple(pairs), leq)


def arc_points(m: int, start: int, length: int) -> frozenset[int]:
    return frozenset((start + k) % m for k in range(length + 1))


def arc_proset(m: int) -> Proset:
    """Arcs [i, i+k] (mod m), 0 <= k <= m-1, plus the full circle, ordered by
    containment.  Arcs of length m-1 cover the circle, so they are
    equivalent to the full circle: this is a preorder, not a poset."""
    if m < 3:
        raise ProsetError("circle resolution must be at least 3")
    labels = [(i, k) for k in range(m) for i in range(m)] + ["circle"]
    sets = [arc_points(m, i, k) for k in range(m) for i in range(m)] + [frozenset(range(m))]
    n = len(labels)
    leq = np.array([[sets[a] <= sets[b] for b in range(n)] for a in range(n)], dtype=bool)
    return Proset(tuple(labels), leq)


def subset_proset(n: int) -> Proset:
    """All subsets of {0, ..., n-1} ordered by inclusion; elements are
    frozensets, listed in order of their bitmask."""
    if n > SUBSET_GUARD:
        raise ProsetError(f"subset poset on {n} points exceeds the guard of {SUBSET_GUARD}")
    if n < 0:
        raise ProsetError("negative ambient size")
    masks = np.arange(1 << n)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    labels = tuple(frozenset(k for k in range(n) if (m >> k) & 1) for m in range(1 << n))
    return Proset(labels, leq)


def all_preorders(n: int) -> Iterable[Proset]:
    """Every preorder on the labelled set {0, ..., n-1}."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = set()
    for bits in product((False, True), repeat=len(pairs)):
        table = np.eye(n, dtype=bool)
        for (i, j), b in zip(pairs, bits):
            table[i, j] = b
        if not (_closure(table) == table).all():
            continue
        key = table.tobytes()
        if key in seen:
            continue
        seen.add(key)
        yield Proset(tuple(range(n)), table)


def comparable_pairs(p: Proset) -> int:
    return int(p.leq.sum())


__all__ = [
    "Proset",
    "ProsetError",
    "MonotoneMap",
    "make_proset",
    "from_table",
    "quotient_poset",
    "chain",
    "grid_proset",
    "interval_proset",
    "arc_proset",
    "arc_points",
    "subset_proset",
    "all_preorders",
]
