"""Acceptance checks, shared by ``zkstokes selftest`` and the test suite.

Every check is deterministic (fixed seeds) and returns a plain dict with an
``ok`` flag, so reports are byte-identical across runs.
"""

from __future__ import annotations

import itertools
import random

from . import homalg
from .labelling import Labelling, check_admissible, check_equivariant, random_labelling, tautological_labelling
from .resolutions import (
    MinimalElement,
    StandardChain,
    bar_boundary,
    minimal_boundary,
    standard_boundary,
    verify_f_chain_map,
)
from .ring import GroupRingElement, RingSpec, Z, coords_in_basis, from_coords, sigma, sigma_r, tau, tau_r
from .simplicial import (
    JoinVertex,
    SimplicialChain,
    alt_subcomplex,
    complex_from_facets,
    join_chains,
    join_complex,
    pseudomanifold_analysis,
)
from .stokes import (
    alpha_invariance_experiment,
    alpha_sequence,
    build_ezk_sphere,
    build_sphere_homologically,
    dold_exhaustive,
    plus_alternating_count,
    stokes_sides,
    subdivision_tucker_check,
    verify_generalized_sphere,
)


def random_element(rng: random.Random, k: int, ring: RingSpec = Z, bound: int = 9) -> GroupRingElement:
    return GroupRingElement.from_coeffs(k, ring, [rng.randint(-bound, bound) for _ in range(k)])


def random_chain(rng: random.Random, X, r: int, ring: RingSpec = Z, density: float = 0.5, bound: int = 3) -> SimplicialChain:
    faces = X.faces(r)
    return SimplicialChain(X, r, {s: rng.randint(-bound, bound) for s in faces if rng.random() < density}, ring)


def leibniz_holds(x: SimplicialChain, y: SimplicialChain) -> bool:
    """d(x*y) == dx*y + (-1)^(deg x + 1) x*dy, with d of a 0-chain the augmentation."""
    lhs = join_chains(x, y).boundary() if x.degree + y.degree + 1 > 0 else None
    if x.degree == 0:
        first = y * x.coefficient_sum()
    else:
        first = join_chains(x.boundary(), y)
    if y.degree == 0:
        second = x * y.coefficient_sum()
    else:
        second = join_chains(x, y.boundary())
    sign = -1 if x.degree % 2 == 0 else 1
    return lhs == first + second * sign


def criterion_chain_map() -> dict:
    runs = [verify_f_chain_map(k, 4) for k in range(2, 7)]
    return {
        "checked": {r["k"]: r["checked"] for r in runs},
        "failures": sum(len(r["failures"]) for r in runs),
        "ok": all(not r["failures"] for r in runs),
    }


def _octahedron_chain(d: int):
    X, action = join_complex(2, d + 1)
    return X, pseudomanifold_analysis(X).orientation_chain


def criterion_stokes(labellings: int = 100) -> dict:
    checked = mismatches = 0
    simplex = complex_from_facets([range(4)])
    octahedra = [_octahedron_chain(d) for d in (1, 2, 3)]
    for k in (2, 3, 4):
        alt = alt_subcomplex(k, 4, 2)
        rng = random.Random(1000 + k)
        alt_chains = [random_chain(rng, alt, r) for r in (1, 2, 3) for _ in range(2)]
        for seed in range(labellings):
            l = random_labelling(simplex, k, 4, "admissible", seed)
            cases = [SimplicialChain.simplex(simplex, s) for r in (1, 2, 3) for s in simplex.faces(r)]
            la = random_labelling(alt, k, 5, "admissible", seed)
            for X, o in octahedra:
                lo = random_labelling(X, k, len(X.vertices) // 2 + 1, "admissible", seed)
                reports = [stokes_sides(o, lo)]
                reports += [stokes_sides(SimplicialChain.simplex(X, f), lo) for f in X.facets[:2]]
                checked += len(reports)
                mismatches += sum(not rep.equal for rep in reports)
            for x in cases:
                checked += 1
                mismatches += not stokes_sides(x, l).equal
            for x in alt_chains:
                checked += 1
                mismatches += not stokes_sides(x, la).equal
    return {"checked": checked, "mismatches": mismatches, "ok": mismatches == 0}


def criterion_fan_tucker(labellings: int = 50) -> dict:
    z2 = RingSpec.mod(2)
    results = []
    for d in (1, 2, 3):
        gs = build_ezk_sphere(2, d, z2)
        X, action = gs.complex, gs.action
        for seed in range(labellings):
            m = d + 1 + seed % 3
            l = random_labelling(X, 2, m, "equivariant_admissible", seed, action)
            count = plus_alternating_count(X, l)
            alpha = alpha_sequence(gs, l).values[-1]
            results.append({"d": d, "colors": m, "seed": seed, "count": count, "alpha": alpha,
                            "ok": count % 2 == 1 and alpha == count % 2})
    return {"runs": len(results), "failures": [r for r in results if not r["ok"]],
            "ok": all(r["ok"] for r in results)}


def criterion_tucker(labellings: int = 25, sd_seeds: int = 10) -> dict:
    failures = []
    runs = 0
    for k in (2, 3, 4):
        for d in range(4):
            gs = build_ezk_sphere(k, d)
            if not verify_generalized_sphere(gs)["ok"]:
                failures.append({"k": k, "d": d, "what": "sphere"})
                continue
            for seed in range(labellings):
                l = random_labelling(gs.complex, k, d + 3, "equivariant_admissible", seed, gs.action)
                seq = alpha_sequence(gs, l)
                runs += 1
                if seq.values[0] != 1 or not seq.congruent:
                    failures.append({"k": k, "d": d, "seed": seed, "alpha": seq.values})
    subdivision = []
    for k in (2, 3):
        for d in (0, 1):
            rep = subdivision_tucker_check(k, d, 1, range(sd_seeds))
            subdivision.append({"k": k, "d": d, "counts": [r["count"] for r in rep["runs"]], "ok": rep["ok"]})
    ok = not failures and all(s["ok"] for s in subdivision)
    return {"runs": runs, "failures": failures, "subdivision": subdivision, "ok": ok}


def criterion_invariance(labellings: int = 20) -> dict:
    out = []
    for k in (2, 3):
        for d in (1, 2, 3):
            gs = build_ezk_sphere(k, d)
            ls = [random_labelling(gs.complex, k, d + 3, "equivariant_admissible", s, gs.action) for s in range(labellings)]
            rep = alpha_invariance_experiment(gs.complex, gs.action, gs.chains[-1], ls)
            out.append({"k": k, "d": d, "classes": rep["classes"], "ok": rep["ok"]})
    return {"cases": out, "ok": all(c["ok"] for c in out)}


def criterion_homological_dold() -> dict:
    spheres = []
    for k in (2, 3):
        for r in range(3):
            X, action = join_complex(k, r + 2)
            for depth in (r, r + 1):
                built = build_sphere_homologically(X, action, depth)
                ok = built.ok and verify_generalized_sphere(built.sphere)["ok"]
                spheres.append({"k": k, "r": r, "depth": depth, "ok": ok})
    dold = dold_exhaustive(2, 3, 2)
    return {"spheres": spheres, "dold": dold["values"],
            "ok": all(s["ok"] for s in spheres) and dold["verdict"] == "pass"}


def criterion_retract() -> dict:
    retracts = [homalg.homology_retract_check(k, m, d) for k, d, m in [(2, 1, 3), (2, 1, 4), (2, 2, 4), (3, 0, 3), (3, 1, 3)]]
    joins = []
    for k in (2, 3):
        for d in range(3):
            X, _ = join_complex(k, d + 1)
            H = homalg.reduced_homology(X)
            ok = all(h.is_zero() for i, h in enumerate(H) if i != d) and H[d] == homalg.HomologyGroup((k - 1) ** (d + 1))
            joins.append({"k": k, "d": d, "H": [h.to_json() for h in H], "ok": ok})
    return {"retracts": [{key: r[key] for key in ("k", "m", "d", "match")} for r in retracts],
            "joins": joins,
            "ok": all(r["match"] for r in retracts) and all(j["ok"] for j in joins)}


def criterion_substrate(trials: int = 1000) -> dict:
    rng = random.Random(8)
    counts = dict.fromkeys(
        ["sigma_tau", "tau_sigma_i", "sigma_squared", "basis_roundtrip", "bar_dd", "minimal_dd", "simplicial_dd", "leibniz", "snf"], 0
    )
    bad = dict.fromkeys(counts, 0)
    joins = {k: join_complex(k, 4)[0] for k in (2, 3)}
    for _ in range(trials):
        k = rng.randint(2, 6)
        ring = rng.choice([Z, RingSpec.mod(rng.randint(2, 12))])
        x = random_element(rng, k, ring)
        s, t = sigma(k, ring), tau(k, ring)
        counts["sigma_tau"] += 1
        bad["sigma_tau"] += not ((s * (t * x)).is_zero() and (t * (s * x)).is_zero())
        i = rng.randint(1, k)
        counts["tau_sigma_i"] += 1
        bad["tau_sigma_i"] += t * sigma_r(k, i, ring) != tau_r(k, i, ring)
        counts["sigma_squared"] += 1
        bad["sigma_squared"] += s * s != s.scale(k)
        basis = rng.choice(["T", "Sigma"])
        counts["basis_roundtrip"] += 1
        bad["basis_roundtrip"] += from_coords(k, ring, coords_in_basis(x, basis), basis) != x

        w = tuple(rng.randrange(k) for _ in range(rng.randint(2, 4)))
        c = StandardChain(k, ring, len(w), {w: random_element(rng, k, ring)})
        counts["bar_dd"] += 1
        bad["bar_dd"] += not standard_boundary(standard_boundary(c)).is_zero()
        deg = rng.randint(2, 8)
        counts["minimal_dd"] += 1
        bad["minimal_dd"] += not minimal_boundary(minimal_boundary(MinimalElement(deg, x))).value.is_zero()

        kk = rng.choice([2, 3])
        J = joins[kk]
        r = rng.randint(2, 3)
        counts["simplicial_dd"] += 1
        bad["simplicial_dd"] += bool(random_chain(rng, J, r, density=0.3).boundary().boundary())

        split = rng.randint(1, 3)
        lo = [f for f in J.faces(rng.randint(0, split - 1)) if all(v.copy <= split for v in f)]
        hi = [f for f in J.faces(rng.randint(0, 3 - split)) if all(v.copy > split for v in f)]
        xa = SimplicialChain(J, len(lo[0]) - 1, {f: rng.randint(-2, 2) for f in rng.sample(lo, min(3, len(lo)))})
        ya = SimplicialChain(J, len(hi[0]) - 1, {f: rng.randint(-2, 2) for f in rng.sample(hi, min(3, len(hi)))})
        counts["leibniz"] += 1
        bad["leibniz"] += not leibniz_holds(xa, ya)

        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        A = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        counts["snf"] += 1
        bad["snf"] += not snf_invariants_hold(A)
    return {"counts": counts, "failures": bad, "ok": not any(bad.values())}


def snf_invariants_hold(A: list) -> bool:
    dec = homalg.smith_normal_form(A)
    if homalg.matmul(homalg.matmul(dec.U, A), dec.V) != dec.S:
        return False
    if abs(homalg.det(dec.U)) != 1 or abs(homalg.det(dec.V)) != 1:
        return False
    m, n = len(A), len(A[0])
    for i in range(m):
        for j in range(n):
            if i != j and dec.S[i][j]:
                return False
    d = dec.diagonal
    if any(v < 0 for v in d):
        return False
    return all(d[i + 1] % d[i] == 0 if d[i] else d[i + 1] == 0 for i in range(len(d) - 1))


CRITERIA = [
    ("1 chain-map exactness", criterion_chain_map, 5),
    ("2 Stokes formula", criterion_stokes, 30),
    ("3 k=2 Fan/Tucker parity", criterion_fan_tucker, 10),
    ("4 generalized Tucker", criterion_tucker, 60),
    ("5 labelling invariance", criterion_invariance, 10),
    ("6 homological sphere and Dold", criterion_homological_dold, 60),
    ("7 retract homology", criterion_retract, 60),
    ("8 algebra substrate", criterion_substrate, 10),
]


def run_all() -> dict:
    results = {}
    for name, fn, _budget in CRITERIA:
        results[name] = fn()
    return {"format": 1, "command": "selftest", "criteria": results,
            "verdict": "pass" if all(r["ok"] for r in results.values()) else "fail"}
