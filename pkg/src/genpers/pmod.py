"""Persistence modules: functors from a finite proset into one of five
concrete target categories, natural transformations between them, and the
functors that post-compose with a module."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import fp
from .complexes import (
    SimplicialComplex,
    components,
    components_induced,
    homology_basis,
    homology_induced,
)
from .proset import Proset, ProsetError
from .translations import Translation


class ModuleError(ValueError):
    pass


# --------------------------------------------------------------- categories


class Category:
    """Interface of a target category.  Morphism data:

    * thin categories (Thin, FinSimp): ``None``, existence is decided by
      ``obj_leq``;
    * FinSet: tuple f with f[i] the image of i;
    * FinVect(p): matrix of shape (dim b, dim a) for a map a -> b;
    * FinVectOp(p): a map a -> b is a linear map b -> a, stored as a matrix
      of shape (dim a, dim b).
    """

    tag = ""
    thin = False

    def obj_leq(self, a, b) -> bool:
        raise NotImplementedError

    def identity(self, a):
        return None

    def compose(self, g, f):
        """g after f."""
        return None

    def equal(self, f, g) -> bool:
        return True

    def check_object(self, a) -> str | None:
        return None

    def check_morphism(self, f, a, b) -> str | None:
        if self.thin and not self.obj_leq(a, b):
            return f"no morphism {a!r} -> {b!r}"
        return None

    def is_iso(self, f, a, b) -> bool:
        return self.obj_leq(a, b) and self.obj_leq(b, a)


@dataclass(frozen=True)
class Thin(Category):
    q: Proset
    tag = "thin"
    thin = True

    def obj_leq(self, a, b) -> bool:
        return bool(self.q.leq[a, b])

    def check_object(self, a):
        if not (isinstance(a, (int, np.integer)) and 0 <= a < len(self.q)):
            return f"{a!r} is not an element index of the target proset"
        return None


@dataclass(frozen=True)
class FinSimp(Category):
    complex: SimplicialComplex
    tag = "finsimp"
    thin = True

    def obj_leq(self, a, b) -> bool:
        return a <= b

    def check_object(self, a):
        if not isinstance(a, frozenset) or not self.complex.is_subcomplex(a):
            return "object is not a subcomplex"
        return None


class FinSet(Category):
    tag = "finset"

    def __eq__(self, other):
        return isinstance(other, FinSet)

    def __hash__(self):
        return hash("finset")

    def identity(self, a):
        return tuple(range(a))

    def compose(self, g, f):
        return tuple(g[i] for i in f)

    def equal(self, f, g) -> bool:
        return tuple(f) == tuple(g)

    def check_object(self, a):
        if not isinstance(a, (int, np.integer)) or a < 0:
            return f"set size {a!r} is not a nonnegative integer"
        return None

    def check_morphism(self, f, a, b):
        if len(f) != a or any(not 0 <= v < b for v in f):
            return f"not a function from a {a}-set to a {b}-set"
        return None

    def is_iso(self, f, a, b) -> bool:
        return a == b and len(set(f)) == a


@dataclass(frozen=True)
class FinVect(Category):
    p: int
    tag = "finvect"

    def identity(self, a):
        return fp.eye(a, self.p)

    def compose(self, g, f):
        return fp.matmul(g, f, self.p)

    def equal(self, f, g) -> bool:
        return f.shape == g.shape and bool(((f - g) % self.p == 0).all())

    def shape(self, a, b) -> tuple[int, int]:
        return (b, a)

    def check_object(self, a):
        if not isinstance(a, (int, np.integer)) or a < 0:
            return f"dimension {a!r} is not a nonnegative integer"
        return None

    def check_morphism(self, f, a, b):
        if not isinstance(f, np.ndarray) or f.shape != self.shape(a, b):
            got = getattr(f, "shape", None)
            return f"expected a matrix of shape {self.shape(a, b)}, got {got}"
        return None

    def zero(self, a, b):
        return fp.zeros(*self.shape(a, b), self.p)

    def is_iso(self, f, a, b) -> bool:
        return a == b and fp.rank(f, self.p) == a


@dataclass(frozen=True)
class FinVectOp(FinVect):
    tag = "finvectop"

    def compose(self, g, f):
        return fp.matmul(f, g, self.p)

    def shape(self, a, b) -> tuple[int, int]:
        return (a, b)


# ------------------------------------------------------------------ modules


@dataclass(eq=False)
class PersistenceModule:
    """Functor ``proset -> target``.  ``morphisms`` holds one datum per
    generating arrow of the proset; all other morphisms are composites."""

    proset: Proset
    target: Category
    objects: tuple
    morphisms: dict = field(default_factory=dict)
    _from: dict = field(default_factory=dict, repr=False)
    _ranks: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        if len(self.objects) != len(self.proset):
            raise ModuleError("one object per element is required")
        for x, a in enumerate(self.objects):
            bad = self.target.check_object(a)
            if bad:
                raise ModuleError(f"at {self.proset.elements[x]!r}: {bad}")
        if self.target.thin:
            self.morphisms = {g: None for g in self.proset.generators}
        missing = [g for g in self.proset.generators if g not in self.morphisms]
        if missing:
            raise ModuleError(f"no morphism given for arrows {missing[:3]}")
        for (u, v), f in self.morphisms.items():
            bad = self.target.check_morphism(f, self.objects[u], self.objects[v])
            if bad:
                raise ModuleError(f"arrow {u}->{v}: {bad}")

    def __len__(self) -> int:
        return len(self.proset)

    def __repr__(self) -> str:
        return f"PersistenceModule({self.target!r}, objects={self.objects})"

    def _tree(self, x: int) -> dict:
        if x not in self._from:
            cat = self.target
            out = {x: cat.identity(self.objects[x])}
            for v, u in self.proset.bfs_tree(x).items():
                if u is not None:
                    out[v] = cat.compose(self.morphisms[(u, v)], out[u])
            self._from[x] = out
        return self._from[x]

    def morphism(self, x: int, y: int):
        """F(x <= y), composed along a generator path."""
        if not self.proset.leq[x, y]:
            raise ModuleError(f"{self.proset.elements[x]!r} is not below {self.proset.elements[y]!r}")
        return self._tree(x)[y]

    def __call__(self, x: int):
        return self.objects[x]

    def rank(self, x: int, y: int) -> int:
        """Rank of F(x <= y) for vector-space targets."""
        if (x, y) not in self._ranks:
            self._ranks[(x, y)] = fp.rank(self.morphism(x, y), self.target.p)
        return self._ranks[(x, y)]

    @property
    def p(self) -> int | None:
        return getattr(self.target, "p", None)

    def total_dim(self) -> int:
        return int(sum(self.objects))


def validate_module(F: PersistenceModule) -> tuple[bool, str | None]:
    """Check functoriality.  For each source x every generator u -> v with
    x <= u must satisfy F(x->v) = F(u->v) F(x->u); by induction all paths
    from x then agree.  Returns (ok, description of the first violation)."""
    P, cat = F.proset, F.target
    if cat.thin:
        for x, y in P.relations():
            if not cat.obj_leq(F.objects[x], F.objects[y]):
                return False, f"objects at {P.elements[x]!r} <= {P.elements[y]!r} are not ordered"
        return True, None
    for x in range(len(P)):
        tree = F._tree(x)
        for (u, v), g in F.morphisms.items():
            if u not in tree:
                continue
            if not cat.equal(tree[v], cat.compose(g, tree[u])):
                a = [P.elements[i] for i in P.path(x, v)]
                b = [P.elements[i] for i in P.path(x, u)] + [P.elements[v]]
                return False, f"paths {a} and {b} give different morphisms"
    return True, None


def make_module(proset: Proset, target: Category, objects: Sequence, morphisms: dict | None = None,
                check: bool = True) -> PersistenceModule:
    """Build a module from morphisms on any set of relations that includes
    the generators; extra relations are checked against path composites."""
    morphisms = dict(morphisms or {})
    if isinstance(target, FinVect):
        morphisms = {k: fp.asmat(v, target.p, target.shape(objects[k[0]], objects[k[1]]))
                     for k, v in morphisms.items()}
    elif isinstance(target, FinSet):
        morphisms = {k: tuple(int(i) for i in v) for k, v in morphisms.items()}
    gens = set(proset.generators)
    F = PersistenceModule(proset, target, objects, {k: v for k, v in morphisms.items() if k in gens})
    if check:
        ok, why = validate_module(F)
        if not ok:
            raise ModuleError(why)
        for (u, v), f in morphisms.items():
            if (u, v) not in gens and not target.equal(F.morphism(u, v), f):
                raise ModuleError(f"given morphism {u}->{v} disagrees with the composite")
    return F


def constant_module(proset: Proset, target: Category, obj) -> PersistenceModule:
    return PersistenceModule(
        proset, target, (obj,) * len(proset),
        {g: target.identity(obj) for g in proset.generators},
    )


def zero_module(proset: Proset, p: int) -> PersistenceModule:
    return constant_module(proset, FinVect(p), 0)


def interval_module(proset: Proset, support, p: int = 2) -> PersistenceModule:
    """F_p on ``support`` (a convex set of indices), zero elsewhere, with
    identity maps inside the support."""
    support = set(support)
    objs = tuple(1 if x in support else 0 for x in range(len(proset)))
    cat = FinVect(p)
    mors = {}
    for u, v in proset.generators:
        mors[(u, v)] = fp.eye(1, p) if (u in support and v in support) else cat.zero(objs[u], objs[v])
    F = PersistenceModule(proset, cat, objs, mors)
    ok, why = validate_module(F)
    if not ok:
        raise ModuleError(f"support is not convex: {why}")
    return F


def direct_sum(modules: Sequence[PersistenceModule]) -> PersistenceModule:
    if not modules:
        raise ModuleError("empty direct sum")
    P, cat = modules[0].proset, modules[0].target
    if not isinstance(cat, FinVect) or type(cat) is not FinVect:
        raise ModuleError("direct sums are implemented for FinVect")
    objs = tuple(sum(M.objects[x] for M in modules) for x in range(len(P)))
    mors = {}
    for g in P.generators:
        blocks = [M.morphisms[g] for M in modules]
        out = cat.zero(objs[g[0]], objs[g[1]])
        r = c = 0
        for b in blocks:
            out[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        mors[g] = out
    return PersistenceModule(P, cat, objs, mors)


# ---------------------------------------------------- natural transformations


@dataclass(eq=False)
class NaturalTransformation:
    source: PersistenceModule
    target: PersistenceModule
    components: tuple

    def __repr__(self) -> str:
        return f"NaturalTransformation({len(self.components)} components)"

    def __post_init__(self):
        F, G = self.source, self.target
        if F.proset is not G.proset:
            raise ModuleError("modules live on different prosets")
        if F.target != G.target and not (F.target.thin and G.target.thin):
            raise ModuleError("modules have different target categories")
        cat = F.target
        if cat.thin:
            self.components = (None,) * len(F.proset)
        self.components = tuple(self.components)
        if len(self.components) != len(F.proset):
            raise ModuleError("one component per element is required")
        for x, c in enumerate(self.components):
            bad = cat.check_morphism(c, F.objects[x], G.objects[x])
            if bad:
                raise ModuleError(f"component at {F.proset.elements[x]!r}: {bad}")

    def __getitem__(self, x: int):
        return self.components[x]


def is_natural(phi: NaturalTransformation) -> bool:
    F, G = phi.source, phi.target
    cat = F.target
    if cat.thin:
        return True  # components exist, so every square commutes
    for (u, v) in F.proset.generators:
        lhs = cat.compose(G.morphisms[(u, v)], phi[u])
        rhs = cat.compose(phi[v], F.morphisms[(u, v)])
        if not cat.equal(lhs, rhs):
            return False
    return True


def natural(F: PersistenceModule, G: PersistenceModule, components: Sequence) -> NaturalTransformation:
    """Checked constructor."""
    cat = F.target
    if isinstance(cat, FinVect):
        components = [fp.asmat(c, cat.p, cat.shape(F.objects[x], G.objects[x]))
                      for x, c in enumerate(components)]
    phi = NaturalTransformation(F, G, tuple(components))
    if not is_natural(phi):
        raise ModuleError("components are not natural")
    return phi


def nat_exists_thin(F: PersistenceModule, G: PersistenceModule) -> bool:
    """A transformation F => G into a thin category exists (and is then
    unique) iff F(x) <= G(x) for every x."""
    if not (F.target.thin and G.target.thin):
        raise ModuleError("thin targets required")
    return all(F.target.obj_leq(a, b) for a, b in zip(F.objects, G.objects))


def thin_transformation(F: PersistenceModule, G: PersistenceModule) -> NaturalTransformation | None:
    if not nat_exists_thin(F, G):
        return None
    return NaturalTransformation(F, G, (None,) * len(F.proset))


def identity_nat(F: PersistenceModule) -> NaturalTransformation:
    return NaturalTransformation(F, F, tuple(F.target.identity(a) for a in F.objects))


def zero_nat(F: PersistenceModule, G: PersistenceModule) -> NaturalTransformation:
    cat = F.target
    return NaturalTransformation(F, G, tuple(cat.zero(a, b) for a, b in zip(F.objects, G.objects)))


def vertical(psi: NaturalTransformation, phi: NaturalTransformation) -> NaturalTransformation:
    """psi after phi."""
    if phi.target is not psi.source and not same_module(phi.target, psi.source):
        raise ModuleError("transformations are not composable")
    cat = phi.source.target
    comps = tuple(cat.compose(b, a) for a, b in zip(phi.components, psi.components))
    return NaturalTransformation(phi.source, psi.target, comps)


def same_module(F: PersistenceModule, G: PersistenceModule) -> bool:
    if F is G:
        return True
    if F.proset is not G.proset or F.target != G.target or F.objects != G.objects:
        return False
    return all(F.target.equal(F.morphisms[g], G.morphisms[g]) for g in F.proset.generators)


def is_isomorphism(phi: NaturalTransformation) -> bool:
    cat = phi.source.target
    return all(cat.is_iso(c, a, b) for c, a, b in zip(phi.components, phi.source.objects, phi.target.objects))


def precompose(F: PersistenceModule, g: Translation) -> tuple[PersistenceModule, NaturalTransformation]:
    """The module F g, x -> F(g(x)), and the shift map F => F g whose
    component at x is F(x <= g(x))."""
    if g.proset is not F.proset:
        raise ProsetError("translation lives on another proset")
    t = g.table
    mors = {(u, v): F.morphism(t[u], t[v]) for (u, v) in F.proset.generators}
    Fg = PersistenceModule(F.proset, F.target, tuple(F.objects[t[x]] for x in range(len(t))), mors)
    shift = NaturalTransformation(F, Fg, tuple(F.morphism(x, t[x]) for x in range(len(t))))
    return Fg, shift


def shift_map(F: PersistenceModule, g: Translation) -> NaturalTransformation:
    return precompose(F, g)[1]


def whisker_right(phi: NaturalTransformation, g: Translation) -> NaturalTransformation:
    """phi g : F g => G g, with component phi_{g(x)} at x."""
    Fg, _ = precompose(phi.source, g)
    Gg, _ = precompose(phi.target, g)
    return NaturalTransformation(Fg, Gg, tuple(phi.components[g.table[x]] for x in range(len(g.table))))


# ----------------------------------------------------------------- functors


class Functor:
    """Post-composition functor between target categories."""

    name = ""

    def target_category(self, cat: Category) -> Category:
        raise NotImplementedError

    def obj(self, cat: Category, a):
        raise NotImplementedError

    def mor(self, cat: Category, f, a, b):
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Homology(Functor):
    k: int
    p: int = 2

    @property
    def name(self) -> str:
        return f"homology({self.k},{self.p})"

    def target_category(self, cat):
        if not isinstance(cat, FinSimp):
            raise ModuleError(f"{self.name} applies to subcomplex-valued modules")
        return FinVect(self.p)

    def obj(self, cat, a):
        return homology_basis(cat.complex, a, self.k, self.p).dim

    def mor(self, cat, f, a, b):
        return homology_induced(cat.complex, a, b, self.k, self.p)


@dataclass(frozen=True)
class Pi0(Functor):
    name = "pi0"

    def target_category(self, cat):
        if not isinstance(cat, FinSimp):
            raise ModuleError("pi0 applies to subcomplex-valued modules")
        return FinSet()

    def obj(self, cat, a):
        return len(components(cat.complex, a)[0])

    def mor(self, cat, f, a, b):
        return components_induced(cat.complex, a, b)


@dataclass(frozen=True)
class Linearize(Functor):
    p: int = 2

    @property
    def name(self) -> str:
        return f"linearize({self.p})"

    def target_category(self, cat):
        if not isinstance(cat, FinSet):
            raise ModuleError("linearize applies to set-valued modules")
        return FinVect(self.p)

    def obj(self, cat, a):
        return a

    def mor(self, cat, f, a, b):
        m = fp.zeros(b, a, self.p)
        for i, j in enumerate(f):
            m[j, i] = 1
        return m


@dataclass(frozen=True)
class Dualize(Functor):
    """Vector spaces to their duals: FinVect(p) -> FinVectOp(p) and back.
    With the storage conventions above the matrix of a dual map is the
    transpose."""

    p: int = 2

    @property
    def name(self) -> str:
        return f"dualize({self.p})"

    def target_category(self, cat):
        if type(cat) is FinVect and cat.p == self.p:
            return FinVectOp(self.p)
        if type(cat) is FinVectOp and cat.p == self.p:
            return FinVect(self.p)
        raise ModuleError(f"{self.name} applies to vector-space-valued modules over F_{self.p}")

    def obj(self, cat, a):
        return a

    def mor(self, cat, f, a, b):
        return np.ascontiguousarray(f.T)


@dataclass(frozen=True)
class Composite(Functor):
    """``second`` after ``first``."""

    second: Functor
    first: Functor

    @property
    def name(self) -> str:
        return f"{self.second.name}.{self.first.name}"

    def target_category(self, cat):
        return self.second.target_category(self.first.target_category(cat))

    def obj(self, cat, a):
        return self.second.obj(self.first.target_category(cat), self.first.obj(cat, a))

    def mor(self, cat, f, a, b):
        mid = self.first.target_category(cat)
        return self.second.mor(mid, self.first.mor(cat, f, a, b), self.first.obj(cat, a), self.first.obj(cat, b))


def functor_from_tag(tag: str) -> Functor:
    """Parse 'homology(k,p)', 'pi0', 'linearize(p)', 'dualize(p)' and
    composites written 'dualize(2).homology(0,2)'."""
    tag = tag.replace(" ", "")
    if "." in tag:
        head, _, rest = tag.partition(".")
        return Composite(functor_from_tag(head), functor_from_tag(rest))
    name, _, args = tag.partition("(")
    vals = [int(v) for v in args.rstrip(")").split(",") if v]
    if name in ("homology", "H") and len(vals) in (1, 2):
        return Homology(*vals)
    if name == "pi0" and not vals:
        return Pi0()
    if name == "linearize" and len(vals) <= 1:
        return Linearize(*vals)
    if name == "dualize" and len(vals) <= 1:
        return Dualize(*vals)
    raise ModuleError(f"unknown functor {tag!r}")


def apply_functor(H: Functor, F: PersistenceModule) -> PersistenceModule:
    cat = F.target
    out = H.target_category(cat)
    objs = tuple(H.obj(cat, a) for a in F.objects)
    mors = {
        (u, v): H.mor(cat, f, F.objects[u], F.objects[v]) for (u, v), f in F.morphisms.items()
    }
    return PersistenceModule(F.proset, out, objs, mors)


def apply_functor_nat(H: Functor, phi: NaturalTransformation, HF: PersistenceModule | None = None,
                      HG: PersistenceModule | None = None) -> NaturalTransformation:
    """H phi, with component H(phi_x) at x."""
    F, G = phi.source, phi.target
    HF = HF if HF is not None else apply_functor(H, F)
    HG = HG if HG is not None else apply_functor(H, G)
    cat = F.target
    comps = tuple(H.mor(cat, c, a, b) for c, a, b in zip(phi.components, F.objects, G.objects))
    return NaturalTransformation(HF, HG, comps)


# --------------------------------------------------------------- merge trees


@dataclass(frozen=True)
class MergeTree:
    """Nodes are (kind, level, component) with kind 'birth' or 'merge';
    edges run from child to parent, with parent None standing for the
    unbounded top of the tree."""

    nodes: tuple[tuple[str, object, int], ...]
    edges: tuple[tuple[int, int | None], ...]

    @property
    def leaves(self) -> list[int]:
        return [i for i, n in enumerate(self.nodes) if n[0] == "birth"]

    @property
    def merges(self) -> list[int]:
        return [i for i, n in enumerate(self.nodes) if n[0] == "merge"]

    def to_dot(self) -> str:
        lines = ["digraph mergetree {"]
        for i, (kind, level, comp) in enumerate(self.nodes):
            shape = "circle" if kind == "birth" else "box"
            lines.append(f'  n{i} [label="{kind} {level} #{comp}", shape={shape}];')
        if any(par is None for _, par in self.edges):
            lines.append('  top [label="inf", shape=plaintext];')
        for c, par in self.edges:
            lines.append(f"  n{c} -> {'top' if par is None else f'n{par}'};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def merge_tree(F: PersistenceModule) -> MergeTree:
    """Merge tree of a set-valued module over a total order, usually pi0 of
    a filtration.  Levels before the first nonempty one contribute nothing."""
    P = F.proset
    if not isinstance(F.target, FinSet):
        raise ModuleError("merge trees need a set-valued module")
    if not P.is_total():
        raise ModuleError("merge trees need a totally ordered index")
    order = P.linear_extension()
    nodes: list[tuple[str, object, int]] = []
    edges: list[tuple[int, int | None]] = []
    current: list[int] = []
    prev = None
    for t in order:
        n = F.objects[t]
        pre: list[list[int]] = [[] for _ in range(n)]
        if prev is not None:
            for j, c in enumerate(F.morphism(prev, t)):
                pre[c].append(j)
        nxt = []
        for c in range(n):
            if not pre[c]:
                nodes.append(("birth", P.elements[t], c))
                nxt.append(len(nodes) - 1)
            elif len(pre[c]) == 1:
                nxt.append(current[pre[c][0]])
            else:
                nodes.append(("merge", P.elements[t], c))
                nxt.append(len(nodes) - 1)
                edges.extend((current[j], len(nodes) - 1) for j in pre[c])
        current, prev = nxt, t
    edges.extend((c, None) for c in current)
    return MergeTree(tuple(nodes), tuple(edges))


def module_from_function(proset: Proset, target: Category, obj: Callable, mor: Callable) -> PersistenceModule:
    """Module with objects obj(x) and generator morphisms mor(u, v)."""
    objs = tuple(obj(x) for x in range(len(proset)))
    return PersistenceModule(proset, target, objs, {g: mor(*g) for g in proset.generators})
