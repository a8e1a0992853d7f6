"""Command-line interface: build, compute, verify and report.

Exit codes: 0 success, 1 property violation, 2 input error,
3 guard hit (only bounds are known).
"""
from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path

from . import io as gio
from .generators import perturb, random_complex, random_finvect_module, random_poset, random_vertex_function, rng_from, zero_on_upset
from .interleave import (
    DEFAULT_GUARD,
    GuardExceeded,
    barcode_1d,
    certificate_violations,
    distance_bruteforce,
    distance_family,
)
from .invimage import (
    SubsetFamily,
    arc_family,
    interval_family,
    inv_image_module,
    quadrant_family,
    stability_suite,
    sublevelset_family,
)
from .metrics import LawvereProjection, fmt, grid_axes, shift_family, value
from .pmod import FinSet, PersistenceModule, Pi0, apply_functor, functor_from_tag, interval_module, merge_tree
from .proset import grid_proset
from .translations import CapExceeded, enumerate_translations
from .vecpers import componentwise_norm, d_set, eps_vectors

OK, VIOLATION, INPUT_ERROR, BOUNDS_ONLY = 0, 1, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- reports


class Report:
    def __init__(self, argv):
        self.data = {"command": list(argv), "inputs": {}, "outputs": {}}
        self.code = OK

    def input(self, path) -> Path:
        p = Path(path)
        try:
            self.data["inputs"][str(path)] = hashlib.sha256(p.read_bytes()).hexdigest()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        return p

    def out(self, key, v):
        self.data["outputs"][key] = v

    def flag(self, code):
        self.code = max(self.code, code)


def distance_json(res) -> dict:
    if res.exact:
        return {"exact": True, "value": fmt(res.lower)}
    return {"exact": False, "lower": fmt(res.lower), "upper": fmt(res.upper)}


def _parse_values(text: str) -> list:
    try:
        return [value(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise InputError(f"bad value list {text!r}: {e}") from None


def _parse_grid(text: str) -> list[list]:
    """'0,1,2;0,1' -> per-axis value lists."""
    return [_parse_values(part) for part in text.split(";")]


def _axis_differences(axes) -> list[list]:
    return [sorted({abs(a - b) for a in ax for b in ax}) for ax in axes]


def _write(args, name: str, text: str) -> str | None:
    if args.out_dir is None:
        return None
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text)
    return str(d / name)


def _load_modules(rep: Report, paths) -> tuple[PersistenceModule, PersistenceModule]:
    F = gio.load_module(rep.input(paths[0]))
    G = gio.load_module(rep.input(paths[1]), proset=F.proset)
    return F, G


def _load_functions(rep: Report, args) -> tuple:
    fam = gio.load_subset_family(rep.input(args.family))
    K = gio.load_complex(rep.input(args.complex))
    fs = [gio.function_from_json(gio.read_json(rep.input(p)), K, fam.space) for p in args.functions]
    return K, fam, fs


# --------------------------------------------------------------- commands


def cmd_distance(args, rep: Report) -> None:
    F, G = _load_modules(rep, args.modules)
    if args.metric:
        d = gio.metric_from_json(gio.read_json(rep.input(args.metric)))
        if d.n != len(F.proset):
            raise InputError("metric size does not match the proset")
        ts = enumerate_translations(F.proset)
        res = distance_bruteforce(F, G, LawvereProjection(F.proset, d), ts, args.guard_size)
        rep.out("method", "bruteforce")
    else:
        if args.family == "standard":
            eps = _parse_values(args.eps) if args.eps else sorted(set().union(*_axis_differences(grid_axes(F.proset))))
            fam = shift_family(F.proset, eps)
        else:
            fam = gio.family_from_json(gio.read_json(rep.input(args.family)), F.proset)
        res = distance_family(F, G, fam, args.guard_size)
        rep.out("method", "family")
    rep.out("distance", distance_json(res))
    if res.certificate is not None:
        rep.out("certificate", _write(args, "certificate.json", gio.dumps(gio.certificate_to_json(res.certificate))))
    if not res.exact:
        rep.flag(BOUNDS_ONLY)


def _stability_one(f, g, fam, H, eps, guard) -> dict:
    r = stability_suite(f, g, fam, H, eps, guard)
    out = {
        "dinf": fmt(r.dinf),
        "d_F": distance_json(r.d_F),
        "d_HF": distance_json(r.d_HF),
        "functor": r.functor,
        "sharp_certificate": r.sharp_certificate is not None,
        "pushed_certificate_verified": r.pushed_verified,
        "violations": r.violations,
        "exact": r.d_F.exact and r.d_HF.exact,
    }
    return out


def cmd_stability(args, rep: Report) -> None:
    H = functor_from_tag(args.functor) if args.functor != "none" else None
    eps = _parse_values(args.eps) if args.eps else None
    if args.random:
        rng = rng_from(args.seed)
        fam = _random_family(args.family)
        rows = []
        for _ in range(args.random):
            K = random_complex(int(rng.integers(1, 7)), rng)
            f = random_vertex_function(K, fam.space, rng)
            g = perturb(f, rng, radius=1)
            rows.append(_stability_one(f, g, fam, H, eps, args.guard_size))
        bad = [i for i, r in enumerate(rows) if r["violations"]]
        rep.out("instances", len(rows))
        rep.out("violations", bad)
        rep.out("bounds_only", sum(not r["exact"] for r in rows))
        if bad:
            rep.flag(VIOLATION)
        elif any(not r["exact"] for r in rows):
            rep.flag(BOUNDS_ONLY)
        return
    if not (args.complex and args.functions and args.family):
        raise InputError("stability needs --complex, --functions and --family (or --random N)")
    K, fam, (f, g) = _load_functions(rep, args)
    row = _stability_one(f, g, fam, H, eps, args.guard_size)
    rep.out("chain", row)
    if row["violations"]:
        rep.flag(VIOLATION)
    elif not row["exact"]:
        rep.flag(BOUNDS_ONLY)


def _random_family(name: str) -> SubsetFamily:
    families = {
        "sublevelset": lambda: sublevelset_family(range(4)),
        "quadrant": lambda: quadrant_family([range(3), range(3)]),
        "interval": lambda: interval_family(range(4)),
        "arc": lambda: arc_family(4),
    }
    if name is None:
        name = "sublevelset"
    if name not in families:
        try:
            return gio.load_subset_family(name)
        except OSError:
            raise InputError(f"unknown family {name!r}") from None
    return families[name]()


def cmd_dset(args, rep: Report) -> None:
    if args.modules:
        F, G = _load_modules(rep, args.modules)
        e_norm = None
    else:
        if not (args.complex and args.functions and args.family):
            raise InputError("dset needs --modules, or --complex, --functions and --family")
        K, fam, (f, g) = _load_functions(rep, args)
        F, G = inv_image_module(f, fam), inv_image_module(g, fam)
        if args.functor != "none":
            H = functor_from_tag(args.functor)
            F, G = apply_functor(H, F), apply_functor(H, G)
        e_norm = componentwise_norm(f, g)
    axes = _parse_grid(args.grid) if args.grid else _axis_differences(grid_axes(F.proset))
    if e_norm is not None and not args.grid:
        axes = [sorted(set(ax) | {e}) for ax, e in zip(axes, e_norm)]
    U = d_set(F, G, eps_vectors(axes), args.guard_size)
    rep.out("upset", _write(args, "dset.csv", U.to_csv()))
    rep.out("minimal", [[fmt(v) for v in e] for e in U.minimal()])
    rep.out("unknown", len(U.unknown))
    if e_norm is not None:
        rep.out("e", [fmt(v) for v in e_norm])
        rep.out("e_state", U.state(e_norm))
        if U.state(e_norm) == "out":
            rep.flag(VIOLATION)
    if not U.is_upset():
        rep.flag(VIOLATION)
    if U.unknown:
        rep.flag(BOUNDS_ONLY)
    rep.csv = U.to_csv()


def cmd_barcode(args, rep: Report) -> None:
    F = gio.load_module(rep.input(args.module))
    bc = barcode_1d(F)
    bars = [[fmt(b), fmt(d)] for b, d in bc.bars]
    rep.out("bars", bars)
    lines = ["birth,death"] + [f"{b},{d}" for b, d in bars]
    rep.csv = "\n".join(lines) + "\n"
    rep.out("file", _write(args, "barcode.csv" if args.format == "csv" else "barcode.json",
                           rep.csv if args.format == "csv" else gio.dumps({"bars": bars})))


def cmd_mergetree(args, rep: Report) -> None:
    if args.module:
        F = gio.load_module(rep.input(args.module))
        if not isinstance(F.target, FinSet):
            F = apply_functor(Pi0(), F)
    else:
        if not (args.complex and args.functions and args.family):
            raise InputError("mergetree needs --module, or --complex, --functions and --family")
        K, fam, fs = _load_functions(rep, args)
        F = apply_functor(Pi0(), inv_image_module(fs[0], fam))
    T = merge_tree(F)
    rep.out("leaves", len(T.leaves))
    rep.out("merges", len(T.merges))
    rep.dot = T.to_dot()
    rep.out("file", _write(args, "mergetree.dot", rep.dot))


def cmd_check(args, rep: Report) -> None:
    F, G = _load_modules(rep, args.modules)
    cert = gio.certificate_from_json(gio.read_json(rep.input(args.certificate)), F, G)
    bad = certificate_violations(F, G, cert)
    rep.out("verified", not bad)
    rep.out("violations", bad)
    if bad:
        rep.flag(VIOLATION)


def cmd_gen(args, rep: Report) -> None:
    if args.out_dir is None:
        raise InputError("gen needs --out-dir")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, data):
        (out / name).write_text(gio.dumps(data))
        written.append(name)

    # interval modules on the grid {0,...,4}
    put("grid5.json", {"generator": "grid", "axes": [list(range(5))]})
    P = grid_proset([range(5)])
    put("interval_F.json", gio.module_to_json(interval_module(P, [0, 1, 2]), "grid5.json"))
    put("interval_G.json", gio.module_to_json(interval_module(P, [1, 2, 3]), "grid5.json"))

    # path complex with two sublevel-set functions
    put("path3.json", {"vertices": [0, 1, 2], "maximal_simplices": [[0, 1], [1, 2]]})
    put("sublevel4.json", {"generator": "sublevelset", "thresholds": [0, 1, 2, 3]})
    put("path_f.json", {"values": {"0": 0, "1": 1, "2": 2}})
    put("path_g.json", {"values": {"0": 1, "1": 2, "2": 3}})
    # two local minima joined through a higher middle vertex
    put("two_min.json", {"values": {"0": 0, "1": 2, "2": 1}})

    # refined multidimensional instance on a 4x4 quadrant family
    put("quadrant4.json", {"generator": "quadrant", "axes": [[0, 1, 2, 3], [0, 1, 2, 3]]})
    put("square.json", {"vertices": [0, 1, 2, 3], "maximal_simplices": [[0, 1], [1, 2], [2, 3], [0, 3]]})
    put("multi_f.json", {"values": {"0": [0, 0], "1": [1, 2], "2": [3, 1], "3": [2, 3]}})
    put("multi_g.json", {"values": {"0": [1, 0], "1": [1, 3], "2": [2, 1], "3": [3, 3]}})

    # seeded random FinVect(2) modules over a poset with a top element
    rng = rng_from(args.seed)
    for i in range(args.count):
        Q = random_poset(5, rng, top=True)
        put(f"random_proset_{i}.json", gio.proset_to_json(Q))
        for side in "FG":
            M = zero_on_upset(random_finvect_module(Q, rng), [4])
            put(f"random_{i}_{side}.json", gio.module_to_json(M, f"random_proset_{i}.json"))
    rep.out("written", written)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--guard-size", type=int, default=DEFAULT_GUARD,
                        help=f"search node budget per interleaving test (default {DEFAULT_GUARD})")
    common.add_argument("--out-dir", default=None, help="directory for exported artifacts")
    common.add_argument("--format", choices=["json", "csv", "dot"], default=None, help="stdout format")
    common.add_argument("--timing", action="store_true", help="print elapsed time on stderr")

    ap = argparse.ArgumentParser(prog="genpers", description="Exact interleaving distances of generalized persistence modules.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common], help="distance between two module files")
    p.add_argument("--modules", nargs=2, required=True, metavar=("F", "G"))
    p.add_argument("--family", default="standard", help="'standard' grid shifts or a family JSON file")
    p.add_argument("--eps", help="comma-separated eps grid for the standard family")
    p.add_argument("--metric", help="Lawvere metric file: brute-force distance over all translations")
    p.set_defaults(fn=cmd_distance)

    p = sub.add_parser("stability", parents=[common], help="check d(HF,HG) <= d(F,G) <= dinf(f,g)")
    p.add_argument("--complex")
    p.add_argument("--functions", nargs=2, metavar=("f", "g"))
    p.add_argument("--family", help="family file, or a generator name in random mode")
    p.add_argument("--functor", default="homology(0,2)", help="e.g. pi0, homology(1,2), dualize(2).homology(0,2), none")
    p.add_argument("--eps", help="extra eps values")
    p.add_argument("--random", type=int, default=0, metavar="N", help="run N seeded random instances")
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("dset", parents=[common], help="up-set of vector shifts at which F and G interleave")
    p.add_argument("--modules", nargs=2, metavar=("F", "G"))
    p.add_argument("--complex")
    p.add_argument("--functions", nargs=2, metavar=("f", "g"))
    p.add_argument("--family")
    p.add_argument("--functor", default="none")
    p.add_argument("--grid", help="per-axis eps values, e.g. '0,1,2;0,1'")
    p.set_defaults(fn=cmd_dset)

    p = sub.add_parser("barcode", parents=[common], help="barcode of a module over a chain")
    p.add_argument("--module", required=True)
    p.set_defaults(fn=cmd_barcode)

    p = sub.add_parser("mergetree", parents=[common], help="merge tree of a sublevel-set filtration")
    p.add_argument("--module")
    p.add_argument("--complex")
    p.add_argument("--functions", nargs=1, metavar="f")
    p.add_argument("--family")
    p.set_defaults(fn=cmd_mergetree)

    p = sub.add_parser("check", parents=[common], help="re-verify an exported certificate")
    p.add_argument("--modules", nargs=2, required=True, metavar=("F", "G"))
    p.add_argument("--certificate", required=True)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("gen", parents=[common], help="write the example corpus")
    p.add_argument("--count", type=int, default=3, help="number of random module pairs")
    p.set_defaults(fn=cmd_gen)
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    rep = Report(argv)
    rep.csv = rep.dot = None
    start = time.perf_counter()
    try:
        args.fn(args, rep)
    except GuardExceeded as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return BOUNDS_ONLY
    except CapExceeded as e:
        print(f"too many translations: {e}", file=sys.stderr)
        return BOUNDS_ONLY
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    fmt_ = args.format or "json"
    if fmt_ == "csv" and rep.csv is not None:
        sys.stdout.write(rep.csv)
    elif fmt_ == "dot" and rep.dot is not None:
        sys.stdout.write(rep.dot)
    else:
        sys.stdout.write(gio.dumps(rep.data))
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return rep.code


if __name__ == "__main__":
    raise SystemExit(main())
