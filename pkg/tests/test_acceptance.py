"""Acceptance suite.  Each test prints one PASS/FAIL line with its counts.

Run on its own with ``python3 tests/test_acceptance.py`` or
``pytest tests/test_acceptance.py -s``.
"""
from __future__ import annotations

import time

import numpy as np
import pytest

from genpers.generators import (
    canonical_preorders,
    perturb,
    random_chain_module,
    random_complex,
    random_finvect_module,
    random_lawvere,
    random_poset,
    random_vertex_function,
    zero_on_upset,
)
from genpers.interleave import (
    barcode_1d,
    bottleneck,
    distance_bruteforce,
    distance_family,
    dual_module,
    verify_certificate,
)
from genpers.invimage import (
    FiniteMetricSpace,
    arc_family,
    circle_space,
    dinfty,
    enough_translations,
    full_family,
    interval_family,
    inv_image_module,
    line_space,
    offset_family,
    quadrant_family,
    stability_suite,
    sublevelset_family,
)
from genpers.metrics import (
    INF,
    LawvereProjection,
    SupremumError,
    TabulatedProjection,
    WeightedProjection,
    adjoint_check,
    check_superlinear,
    family_from_omega,
    monotone_hull,
    shift_family,
    sup_metric_on_grid,
    trans_leq,
)
from genpers.pmod import Homology, Pi0, apply_functor, functor_from_tag
from genpers.proset import grid_proset
from genpers.translations import enumerate_translations
from genpers.vecpers import (
    componentwise_norm,
    d_a,
    d_set,
    delta_ab,
    eps_vectors,
    line_reaches_top,
    minkowski_violations,
    superset_violations,
)

SEED = 20240601


def report(capsys, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")


def leq_bound(a, b) -> bool:
    """Could a <= b fail?  Only if a's lower bound exceeds b's upper bound."""
    return not a.lower > b.upper


def _families():
    return {
        "sublevelset": sublevelset_family(range(4)),
        "quadrant": quadrant_family([range(3), range(3)]),
        "interval": interval_family(range(4)),
        "arc": arc_family(4),
    }


def _function_pair(fam, rng, max_vertices=6):
    K = random_complex(int(rng.integers(1, max_vertices + 1)), rng)
    f = random_vertex_function(K, fam.space, rng)
    g = perturb(f, rng, radius=int(rng.integers(1, 3))) if rng.random() < 0.7 else random_vertex_function(K, fam.space, rng)
    return f, g


# ------------------------------------------------------------ pseudometric


def test_pseudometric(capsys):
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    triples = violations = finite = 0
    for _ in range(500):
        n = int(rng.integers(2, 6))
        P = random_poset(n, rng, top=True)
        ts = enumerate_translations(P)
        om = LawvereProjection(P, random_lawvere(n, rng))
        # zero at the top element keeps most distances finite
        E, F, G = (zero_on_upset(random_finvect_module(P, rng), [n - 1]) for _ in range(3))

        def d(a, b):
            return distance_bruteforce(a, b, om, ts)

        ef, fe, fg, eg, ee = d(E, F), d(F, E), d(F, G), d(E, G), d(E, E)
        bad = ee.upper != 0
        bad |= ef.exact and fe.exact and ef.value != fe.value
        bad |= eg.lower > ef.upper + fg.upper
        violations += bool(bad)
        finite += ef.upper != INF
        triples += 1
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed <= 300
    report(capsys, "pseudometric", ok,
           f"{triples} triples, {violations} violations, {finite} finite d(E,F), {elapsed:.1f}s")
    assert ok


# ------------------------------------------------------- functor stability


def test_functor_stability(capsys):
    rng = np.random.default_rng(SEED + 1)
    functors = [Homology(0, 2), Homology(1, 2), Pi0(), functor_from_tag("dualize(2).homology(0,2)")]
    pairs = violations = bounds_only = 0
    for name, fam in _families().items():
        for _ in range(50):
            f, g = _function_pair(fam, rng)
            di = dinfty(f, g)
            grid = sorted({e for e in fam.eps_values() + [di] if e != INF})
            Om = offset_family(fam, grid)
            F, G = inv_image_module(f, fam), inv_image_module(g, fam)
            dF = distance_family(F, G, Om)
            for H in functors:
                HF, HG = apply_functor(H, F), apply_functor(H, G)
                dH = distance_family(HF, HG, Om)
                bounds_only += not dH.exact
                violations += not leq_bound(dH, dF)
            pairs += 1
    ok = violations == 0 and pairs >= 200
    report(capsys, "functor stability", ok,
           f"{pairs} pairs x {len(functors)} functors, {violations} violations, {bounds_only} bounds-only")
    assert ok


# -------------------------------------------------- inverse-image stability


def test_inverse_image_stability(capsys):
    rng = np.random.default_rng(SEED + 2)
    lines = []
    total_bad = 0
    for name, fam in _families().items():
        n = bad = sharp = 0
        for _ in range(200):
            f, g = _function_pair(fam, rng)
            r = stability_suite(f, g, fam, None)
            bad += not leq_bound(r.d_F, type(r.d_F)(r.dinf, r.dinf))
            if r.dinf != INF:
                c = r.sharp_certificate
                t = enough_translations(fam, r.dinf)
                F, G = inv_image_module(f, fam), inv_image_module(g, fam)
                good = (c is not None and c.gamma.table == t.table and c.kappa.table == t.table
                        and verify_certificate(F, G, c))
                sharp += good
                bad += not good
            n += 1
        total_bad += bad
        lines.append(f"{name} {n} pairs/{sharp} sharp")
    ok = total_bad == 0
    report(capsys, "inverse-image stability", ok, f"{', '.join(lines)}; {total_bad} violations")
    assert ok


# --------------------------------------------------------- equal metrics


def _grid_instances(rng):
    for n in range(2, 6):
        yield grid_proset([range(n)])
    for axes in ([2, 2], [2, 3], [3, 3]):
        yield grid_proset([range(a) for a in axes])


def test_equal_metrics(capsys):
    rng = np.random.default_rng(SEED + 3)
    checked = mismatches = skipped = 0
    one_d = two_d = 0
    grids = list(_grid_instances(rng))
    cache = {id(P): enumerate_translations(P) for P in grids}
    while checked < 120:
        P = grids[int(rng.integers(len(grids)))]
        ts = cache[id(P)]
        dim = len(P.elements[0])
        if rng.random() < 0.5:
            om = LawvereProjection(P, sup_metric_on_grid(P))
            direction = None
        else:
            w = tuple(int(v) for v in rng.integers(1, 3, size=dim))
            om = WeightedProjection(P, w)
            direction = w
        vals = sorted({om(t) for t in ts} - {INF})
        fam = shift_family(P, vals, direction)
        if not (check_superlinear(fam) and adjoint_check(om, fam, ts)):
            skipped += 1
            continue
        if dim == 1:
            F, G = random_chain_module(len(P), rng, P=P), random_chain_module(len(P), rng, P=P)
        else:
            F, G = random_finvect_module(P, rng), random_finvect_module(P, rng)
        a, b = distance_bruteforce(F, G, om, ts), distance_family(F, G, fam)
        mismatches += not (a.exact and b.exact and a.value == b.value)
        checked += 1
        one_d += dim == 1
        two_d += dim == 2
    ok = mismatches == 0 and checked >= 100 and one_d and two_d
    report(capsys, "equal metrics", ok,
           f"{checked} instances ({one_d} 1-D, {two_d} 2-D), {mismatches} mismatches, {skipped} skipped (no adjunction)")
    assert ok


# --------------------------------------------------------------- oracle


def test_oracle_agreement(capsys):
    rng = np.random.default_rng(SEED + 4)
    pairs = mismatches = 0
    grids = {n: grid_proset([range(n)]) for n in range(1, 6)}
    fams = {n: shift_family(P, range(n)) for n, P in grids.items()}
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        P = grids[n]
        F, G = random_chain_module(n, rng, P=P), random_chain_module(n, rng, P=P)
        d = distance_family(F, G, fams[n])
        b = bottleneck(barcode_1d(F), barcode_1d(G), snap=range(n))
        mismatches += not (d.exact and d.value == b)
        pairs += 1
    ok = mismatches == 0
    report(capsys, "oracle agreement", ok, f"{pairs} pairs, {mismatches} mismatches")
    assert ok


# ------------------------------------------------------------ adjunction


def _hull_table(base, ts, above):
    """Monotone hull, as a table.  Agrees with ``monotone_hull``."""
    vals = {t.table: base(t) for t in ts}
    return TabulatedProjection(ts[0].proset, {t.table: min(vals[h.table] for h in above[t.table]) for t in ts})


def _adjunction_items(om, fam, ts, above) -> list[str]:
    bad = []
    grid = list(fam.eps)
    probes = grid + [(a + b) / 2 for a, b in zip(grid, grid[1:])] + [grid[-1] + 1]
    for g in ts:
        w = om(g)
        if w != INF and not trans_leq(g, fam.at(w)):
            bad.append("unit")
    for e in probes:
        if om(fam.at(e)) > e:
            bad.append("co-unit")
    for g in ts:
        if any(om(g) > om(h) for h in above[g.table]):
            bad.append("omega monotone")
    for e1, e2 in zip(probes, probes[1:]):
        if not trans_leq(fam.at(min(e1, e2)), fam.at(max(e1, e2))):
            bad.append("Omega monotone")
    sub = om.is_sublinear(ts)
    sup = check_superlinear(fam)
    if sub != sup:
        bad.append("sublinear <-> superlinear")
    return bad


def test_adjunction(capsys):
    rng = np.random.default_rng(SEED + 5)
    prosets = [P for n in range(1, 5) for P in canonical_preorders(n)]
    adjoint = no_adjoint = failing = 0
    sub_true = sub_false = 0
    for P in prosets:
        ts = enumerate_translations(P)
        above = {t.table: [h for h in ts if trans_leq(t, h)] for t in ts}
        n = len(P)
        hull_checked = False
        for _ in range(50):
            d = random_lawvere(n, rng)
            base = LawvereProjection(P, d)
            # squaring keeps monotonicity but usually breaks sublinearity
            sq = TabulatedProjection(P, {t.table: (base(t) ** 2 if base(t) != INF else INF) for t in ts})
            for raw in (base, sq):
                om = _hull_table(raw, ts, above)
                if not hull_checked:
                    assert all(om(t) == monotone_hull(raw, t, ts) for t in ts)
                    hull_checked = True
                vals = sorted({om(t) for t in ts} - {INF})
                try:
                    fam = family_from_omega(om, vals, ts)
                except SupremumError:
                    no_adjoint += 1
                    continue
                if not adjoint_check(om, fam, ts):
                    no_adjoint += 1
                    continue
                adjoint += 1
                if om.is_sublinear(ts):
                    sub_true += 1
                else:
                    sub_false += 1
                failing += bool(_adjunction_items(om, fam, ts, above))
                # an adjunction forces monotonicity, so a non-monotone raw
                # projection never passes the check against the same family
                if adjoint_check(raw, fam, ts) and any(raw(t) != om(t) for t in ts):
                    failing += 1
    ok = failing == 0 and sub_true > 0 and sub_false > 0
    report(capsys, "adjunction", ok,
           f"{len(prosets)} prosets x 50 metrics; {adjoint} adjoint pairs "
           f"({sub_true} sublinear, {sub_false} not), {no_adjoint} without adjoint, {failing} failures")
    assert ok


# ------------------------------------------------ asymmetric vs symmetric


def test_hausdorff_sizes_agree(capsys):
    rng = np.random.default_rng(SEED + 6)
    spaces = [line_space(range(n)) for n in range(1, 4)] + [circle_space(3)]
    for n in range(1, 4):
        for _ in range(50):
            spaces.append(FiniteMetricSpace(tuple(range(n)), random_lawvere(n, rng)))
    translations = mismatches = 0
    for M in spaces:
        fam = full_family(M)
        a, b = fam.omega(), fam.omega_symmetric()
        for g in enumerate_translations(fam.proset):
            translations += 1
            mismatches += a(g) != b(g)
    ok = mismatches == 0
    report(capsys, "asymmetric = symmetric Hausdorff size", ok,
           f"{len(spaces)} spaces, {translations} translations, {mismatches} mismatches")
    assert ok


# ---------------------------------------------------- vector persistence


def test_vector_persistence(capsys):
    rng = np.random.default_rng(SEED + 7)
    fam = quadrant_family([range(4), range(4)])
    P = fam.proset
    grid = eps_vectors([range(4), range(4)])
    H = Homology(0, 2)
    lines = [((1, 1), (0, 0)), ((1, 0), (0, 2)), ((0, 1), (3, 0)), ((1, 1), (1, 0)), ((1, 1), (0, 2))]
    instances = 0
    problems: dict[str, int] = {}

    def note(kind, bad):
        if bad:
            problems[kind] = problems.get(kind, 0) + 1

    while instances < 50:
        K = random_complex(int(rng.integers(2, 6)), rng)
        f, g, h = (random_vertex_function(K, fam.space, rng) for _ in range(3))
        g = perturb(f, rng) if rng.random() < 0.5 else g
        F, G, E = (inv_image_module(x, fam) for x in (f, g, h))
        HF, HG, HE = (apply_functor(H, M) for M in (F, G, E))
        D = d_set(F, G, grid)
        DH = d_set(HF, HG, grid)
        DEF, DEG = d_set(HE, HF, grid), d_set(HE, HG, grid)
        for U in (D, DH, DEF, DEG):
            note("up-set", not U.is_upset())
            note("unknown", bool(U.unknown))
        note("functor superset", superset_violations(DH, D))
        note("Minkowski", minkowski_violations(DEF, DH, DEG))
        e = componentwise_norm(f, g)
        note("norm vector", e is not None and (D.state(e) != "in" or DH.state(e) != "in"))
        for a, b in lines:
            t = range(4 - max(b))
            if not line_reaches_top(P, a, b, t):
                continue
            note("line bound", not leq_bound(delta_ab(HF, HG, a, b, t, range(4)), d_a(HF, HG, a, range(4))))
        instances += 1
    ok = not problems
    detail = ", ".join(f"{k}: {v}" for k, v in sorted(problems.items())) or "0 violations"
    report(capsys, "vector persistence", ok, f"{instances} instances on a 4x4 grid, {detail}")
    assert ok


# -------------------------------------------------------------- duality


def test_dualization_isometry(capsys):
    rng = np.random.default_rng(SEED + 8)
    P = grid_proset([range(3)])
    fam = shift_family(P, range(3))
    pairs = mismatches = 0
    for _ in range(100):
        F, G = random_finvect_module(P, rng), random_finvect_module(P, rng)
        a = distance_family(F, G, fam)
        b = distance_family(dual_module(F), dual_module(G), fam)
        mismatches += not (a.exact and b.exact and a.value == b.value)
        pairs += 1
    ok = mismatches == 0
    report(capsys, "dualization isometry", ok, f"{pairs} pairs, {mismatches} mismatches")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
