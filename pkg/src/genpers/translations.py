"""Translations of a finite proset: the ordered monoid Trans_P."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .proset import Proset

DEFAULT_CAP = 100_000


class TranslationError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """Raised when exhaustive enumeration would exceed its cap."""


def is_translation(p: Proset, table: Sequence[int]) -> bool:
    """True iff ``table`` is monotone and inflationary on ``p``."""
    tab = np.asarray(table, dtype=np.int64)
    n = len(p)
    if tab.shape != (n,) or (tab < 0).any() or (tab >= n).any():
        return False
    if not p.leq[np.arange(n), tab].all():
        return False
    return bool((~p.leq | p.leq[np.ix_(tab, tab)]).all())


@dataclass(frozen=True, eq=False)
class Translation:
    proset: Proset
    table: tuple[int, ...]

    def __post_init__(self):
        if not is_translation(self.proset, self.table):
            raise TranslationError(f"not a translation: {self.table}")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def __eq__(self, other):
        return (
            isinstance(other, Translation)
            and other.proset is self.proset
            and other.table == self.table
        )

    def __hash__(self):
        return hash((id(self.proset), self.table))

    def __le__(self, other: "Translation") -> bool:
        return trans_leq(self, other)

    def __matmul__(self, other: "Translation") -> "Translation":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Translation({list(self.table)})"


def identity(p: Proset) -> Translation:
    return Translation(p, tuple(range(len(p))))


def _same(a: Translation, b: Translation) -> None:
    if a.proset is not b.proset:
        raise TranslationError("translations live on different prosets")


def compose(g: Translation, k: Translation) -> Translation:
    """(g k)(x) = g(k(x))."""
    _same(g, k)
    return Translation(g.proset, tuple(g.table[k.table[i]] for i in range(len(g.table))))


def trans_leq(g: Translation, k: Translation) -> bool:
    _same(g, k)
    leq = g.proset.leq
    return all(leq[a, b] for a, b in zip(g.table, k.table))


def trans_equiv(g: Translation, k: Translation) -> bool:
    return trans_leq(g, k) and trans_leq(k, g)


def enumerate_translations(p: Proset, cap: int = DEFAULT_CAP) -> list[Translation]:
    """All translations of ``p`` in lexicographic order of their tables.

    Raises CapExceeded once more than ``cap`` have been found.
    """
    n = len(p)
    leq = p.leq
    ups = [p.up(i) for i in range(n)]
    table = [0] * n
    out: list[Translation] = []

    def ok(i: int, v: int) -> bool:
        for j in range(i):
            if leq[j, i] and not leq[table[j], v]:
                return False
            if leq[i, j] and not leq[v, table[j]]:
                return False
        return True

    def rec(i: int) -> None:
        if i == n:
            if len(out) >= cap:
                raise CapExceeded(f"more than {cap} translations")
            out.append(Translation.__new__(Translation))
            object.__setattr__(out[-1], "proset", p)
            object.__setattr__(out[-1], "table", tuple(table))
            return
        for v in ups[i]:
            if ok(i, v):
                table[i] = v
                rec(i + 1)

    rec(0)
    return out


def maximal(translations: Sequence[Translation]) -> list[Translation]:
    """One representative of each maximal equivalence class."""
    if not translations:
        return []
    leq = translations[0].proset.leq
    tabs = np.array([t.table for t in translations], dtype=np.int64)
    out: list[Translation] = []
    kept: list[int] = []
    for i, g in enumerate(translations):
        above = leq[tabs[i][None, :], tabs].all(axis=1)
        below = leq[tabs, tabs[i][None, :]].all(axis=1)
        if (above & ~below).any():
            continue
        if any(above[k] and below[k] for k in kept):
            continue
        kept.append(i)
        out.append(g)
    return out


def pointwise_join(p: Proset, tables: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Pointwise least upper bound of several tables, or None if at some
    element the candidates have no least upper bound in ``p``."""
    n = len(p)
    out = []
    for x in range(n):
        vals = {t[x] for t in tables}
        uppers = [u for u in range(n) if all(p.leq[v, u] for v in vals)]
        least = [u for u in uppers if all(p.leq[u, w] for w in uppers)]
        if not least:
            return None
        out.append(least[0])
    return tuple(out)
