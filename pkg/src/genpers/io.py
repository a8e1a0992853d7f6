"""JSON file formats for prosets, translations, metrics, families, modules,
complexes, vertex functions and certificates.

Exact values are written as integers, rational strings "a/b", or "inf".
Labels that are tuples are written as lists and read back as tuples.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .complexes import SimplicialComplex
from .interleave import InterleavingCertificate, _build
from .invimage import (
    FiniteMetricSpace,
    SubsetFamily,
    VertexFunction,
    arc_family,
    full_family,
    grid_space,
    interval_family,
    line_space,
    quadrant_family,
    sublevelset_family,
)
from .metrics import INF, LawvereMetric, SuperlinearFamily, fmt, value
from .pmod import (
    Category,
    FinSet,
    FinSimp,
    FinVect,
    FinVectOp,
    PersistenceModule,
    Thin,
    make_module,
)
from .proset import Proset, arc_proset, chain, grid_proset, interval_proset, make_proset, subset_proset
from .translations import Translation

_RATIONAL = re.compile(r"^-?\d+/\d+$")


class FormatError(ValueError):
    pass


def to_json_value(v):
    if v == INF and not isinstance(v, (str, tuple, frozenset)):
        return "inf"
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (tuple, list)):
        return [to_json_value(x) for x in v]
    if isinstance(v, frozenset):
        return sorted(to_json_value(x) for x in v)
    return v


def from_json_label(v):
    if isinstance(v, list):
        return tuple(from_json_label(x) for x in v)
    if isinstance(v, str) and _RATIONAL.match(v):
        return Fraction(v)
    return v


def from_json_value(v):
    if isinstance(v, list):
        return [from_json_value(x) for x in v]
    return value(v)


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: {e}") from None


def write_json(path, data) -> None:
    Path(path).write_text(dumps(data))


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _resolve(ref, base: Path | None, loader):
    """``ref`` is either inline data or a path relative to ``base``."""
    if isinstance(ref, str):
        path = Path(ref)
        if base is not None and not path.is_absolute():
            path = base / path
        return loader(read_json(path), path.parent)
    return loader(ref, base)


# ------------------------------------------------------------------ prosets

_PROSET_GENERATORS = {
    "grid": lambda d: grid_proset(d["axes"]),
    "chain": lambda d: chain(int(d["n"])),
    "interval": lambda d: interval_proset(d["grid"]),
    "arc": lambda d: arc_proset(int(d["m"])),
    "subsets": lambda d: subset_proset(int(d["n"])),
}


def proset_from_json(data: dict, base: Path | None = None) -> Proset:
    """Either {"elements": [...], "relations": [[i, j], ...]} (indices into
    the element list; the closure is taken) or {"generator": name, ...}."""
    if "generator" in data:
        try:
            return _PROSET_GENERATORS[data["generator"]]({k: _params(v) for k, v in data.items()})
        except KeyError as e:
            raise FormatError(f"unknown proset generator or missing field {e}") from None
    try:
        elements = [from_json_label(e) for e in data["elements"]]
        rels = [(int(a), int(b)) for a, b in data["relations"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad proset file: {e}") from None
    n = len(elements)
    if any(not (0 <= a < n and 0 <= b < n) for a, b in rels):
        raise FormatError("relation index out of range")
    idx_rel = [(elements[a], elements[b]) for a, b in rels]
    return make_proset(elements, idx_rel)


def _params(v):
    if isinstance(v, list):
        return [_params(x) for x in v]
    if isinstance(v, str) and _RATIONAL.match(v):
        return Fraction(v)
    return v


def proset_to_json(P: Proset) -> dict:
    return {
        "elements": [to_json_value(e) for e in P.elements],
        "relations": [list(g) for g in P.generators],
    }


def load_proset(path) -> Proset:
    p = Path(path)
    return proset_from_json(read_json(p), p.parent)


# ------------------------------------------------------- metrics, families


def metric_from_json(data: dict) -> LawvereMetric:
    try:
        n = int(data["n"])
        d = [[value(v) for v in row] for row in data["d"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad metric file: {e}") from None
    if len(d) != n or any(len(r) != n for r in d):
        raise FormatError("metric table must be n by n")
    return LawvereMetric.from_table(d)


def metric_to_json(d: LawvereMetric) -> dict:
    return {"n": d.n, "d": [[to_json_value(v) for v in row] for row in d.d]}


def translation_from_json(data: dict, base: Path | None = None, proset: Proset | None = None) -> Translation:
    P = proset if proset is not None else _resolve(data["proset"], base, proset_from_json)
    return Translation(P, tuple(int(v) for v in data["table"]))


def family_from_json(data: dict, proset: Proset) -> SuperlinearFamily:
    eps = [value(e) for e in data["eps"]]
    tables = [Translation(proset, tuple(int(v) for v in t)) for t in data["tables"]]
    return SuperlinearFamily(proset, tuple(eps), tuple(tables))


def family_to_json(fam: SuperlinearFamily) -> dict:
    return {"eps": [to_json_value(e) for e in fam.eps], "tables": [list(m.table) for m in fam.members]}


# ---------------------------------------------------------------- complexes


def complex_from_json(data: dict, base: Path | None = None) -> SimplicialComplex:
    try:
        verts = [from_json_label(v) for v in data["vertices"]]
        simp = [[from_json_label(v) for v in s] for s in data["maximal_simplices"]]
    except (KeyError, TypeError) as e:
        raise FormatError(f"bad complex file: {e}") from None
    K = SimplicialComplex.from_maximal(verts, simp)
    return K


def complex_to_json(K: SimplicialComplex) -> dict:
    return {
        "vertices": [to_json_value(v) for v in K.vertices],
        "maximal_simplices": [[to_json_value(K.vertices[i]) for i in s] for s in K.maximal()],
    }


def load_complex(path) -> SimplicialComplex:
    return complex_from_json(read_json(path))


def space_from_json(data: dict) -> FiniteMetricSpace:
    if "line" in data:
        return line_space(data["line"])
    if "grid" in data:
        return grid_space(data["grid"])
    if "points" in data and "metric" in data:
        return FiniteMetricSpace(tuple(from_json_label(p) for p in data["points"]), metric_from_json(data["metric"]))
    raise FormatError("metric space needs 'line', 'grid', or 'points' with 'metric'")


def subset_family_from_json(data: dict, base: Path | None = None) -> SubsetFamily:
    """{"generator": "sublevelset", "thresholds": [...]}, "quadrant" with
    "axes", "interval" with "grid", "arc" with "m", "full" with "space"."""
    gen = data.get("generator")
    try:
        if gen == "sublevelset":
            return sublevelset_family(data["thresholds"])
        if gen == "quadrant":
            return quadrant_family(data["axes"])
        if gen == "interval":
            return interval_family(data["grid"])
        if gen == "arc":
            return arc_family(int(data["m"]))
        if gen == "full":
            return full_family(space_from_json(data["space"]))
    except KeyError as e:
        raise FormatError(f"family generator {gen!r} needs field {e}") from None
    raise FormatError(f"unknown family generator {gen!r}")


def load_subset_family(path) -> SubsetFamily:
    return subset_family_from_json(read_json(path))


def function_from_json(data: dict, K: SimplicialComplex, M: FiniteMetricSpace) -> VertexFunction:
    """{"values": {"vertex label": point label, ...}}.  Keys are matched
    against the string form of the vertex labels."""
    vals = data.get("values")
    if not isinstance(vals, dict):
        raise FormatError("function file needs a 'values' object")
    pts = []
    for v in K.vertices:
        key = str(to_json_value(v))
        if key not in vals:
            raise FormatError(f"no value for vertex {v!r}")
        pts.append(from_json_label(vals[key]))
    try:
        return VertexFunction.from_points(K, M, pts)
    except ValueError as e:
        raise FormatError(str(e)) from None


def function_to_json(f: VertexFunction) -> dict:
    return {"values": {str(to_json_value(v)): to_json_value(f.point(i)) for i, v in enumerate(f.complex.vertices)}}


# ------------------------------------------------------------------ modules


def target_from_json(data: dict, base: Path | None = None) -> Category:
    tag = data.get("tag")
    if tag == "finvect":
        return FinVect(int(data.get("p", 2)))
    if tag == "finvectop":
        return FinVectOp(int(data.get("p", 2)))
    if tag == "finset":
        return FinSet()
    if tag == "thin":
        return Thin(_resolve(data["proset"], base, proset_from_json))
    if tag == "finsimp":
        return FinSimp(_resolve(data["complex"], base, complex_from_json))
    raise FormatError(f"unknown target tag {tag!r}")


def target_to_json(cat: Category) -> dict:
    if isinstance(cat, FinVect):
        return {"tag": cat.tag, "p": cat.p}
    if isinstance(cat, FinSet):
        return {"tag": "finset"}
    if isinstance(cat, Thin):
        return {"tag": "thin", "proset": proset_to_json(cat.q)}
    if isinstance(cat, FinSimp):
        return {"tag": "finsimp", "complex": complex_to_json(cat.complex)}
    raise FormatError(f"cannot serialise target {cat!r}")


def _object_from_json(cat: Category, o):
    if isinstance(cat, FinSimp):
        K = cat.complex
        sub = set()
        for s in o:
            ids = tuple(sorted(K.vertex_index[from_json_label(v)] for v in s))
            if ids not in K.index:
                raise FormatError(f"{s} is not a simplex")
            sub.add(K.index[ids])
        return frozenset(sub)
    return int(o)


def _object_to_json(cat: Category, o):
    if isinstance(cat, FinSimp):
        K = cat.complex
        return [[to_json_value(K.vertices[v]) for v in K.simplices[i]] for i in sorted(o)]
    return int(o)


def _morphism_to_json(cat: Category, f):
    if f is None:
        return None
    if isinstance(f, np.ndarray):
        return [[int(v) for v in row] for row in f]
    return [int(v) for v in f]


def _morphism_from_json(cat: Category, f, a, b):
    if isinstance(cat, FinVect):
        shape = cat.shape(a, b)
        return np.array(f if f else [], dtype=np.int64).reshape(shape) % cat.p
    if isinstance(cat, FinSet):
        return tuple(int(v) for v in f)
    return None


def module_from_json(data: dict, base: Path | None = None, proset: Proset | None = None) -> PersistenceModule:
    try:
        P = proset if proset is not None else _resolve(data["proset"], base, proset_from_json)
        cat = target_from_json(data["target"], base)
        objs = [_object_from_json(cat, o) for o in data["objects"]]
        mors = {}
        for key, f in (data.get("morphisms") or {}).items():
            a, _, b = key.partition("->")
            a, b = int(a), int(b)
            mors[(a, b)] = _morphism_from_json(cat, f, objs[a], objs[b])
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad module file: {e}") from None
    if len(objs) != len(P):
        raise FormatError("one object per proset element is required")
    return make_module(P, cat, objs, mors)


def module_to_json(F: PersistenceModule, proset_ref=None) -> dict:
    cat = F.target
    return {
        "proset": proset_ref if proset_ref is not None else proset_to_json(F.proset),
        "target": target_to_json(cat),
        "objects": [_object_to_json(cat, o) for o in F.objects],
        "morphisms": {} if cat.thin else {f"{a}->{b}": _morphism_to_json(cat, f) for (a, b), f in F.morphisms.items()},
    }


def load_module(path, proset: Proset | None = None) -> PersistenceModule:
    p = Path(path)
    return module_from_json(read_json(p), p.parent, proset)


# ------------------------------------------------------------- certificates


def certificate_to_json(cert: InterleavingCertificate) -> dict:
    cat = cert.phi.source.target
    return {
        "gamma": list(cert.gamma.table),
        "kappa": list(cert.kappa.table),
        "phi": [_morphism_to_json(cat, c) for c in cert.phi.components],
        "psi": [_morphism_to_json(cat, c) for c in cert.psi.components],
    }


def certificate_from_json(data: dict, F: PersistenceModule, G: PersistenceModule) -> InterleavingCertificate:
    P, cat = F.proset, F.target
    try:
        gam = Translation(P, tuple(int(v) for v in data["gamma"]))
        kap = Translation(P, tuple(int(v) for v in data["kappa"]))
        phi = [_morphism_from_json(cat, c, F.objects[x], G.objects[gam.table[x]]) for x, c in enumerate(data["phi"])]
        psi = [_morphism_from_json(cat, c, G.objects[z], F.objects[kap.table[z]]) for z, c in enumerate(data["psi"])]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad certificate file: {e}") from None
    return _build(F, G, gam, kap, phi, psi)


__all__ = [
    "FormatError",
    "fmt",
    "dumps",
    "read_json",
    "write_json",
    "proset_from_json",
    "proset_to_json",
    "load_proset",
    "metric_from_json",
    "metric_to_json",
    "translation_from_json",
    "family_from_json",
    "family_to_json",
    "complex_from_json",
    "complex_to_json",
    "load_complex",
    "space_from_json",
    "subset_family_from_json",
    "load_subset_family",
    "function_from_json",
    "function_to_json",
    "module_from_json",
    "module_to_json",
    "load_module",
    "certificate_to_json",
    "certificate_from_json",
]
