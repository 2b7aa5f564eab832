"""Combinatorial Stokes formula, generalized spheres, Tucker invariants and Dold refutations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from .errors import DegreeError, DomainError, PreconditionError
from .homalg import boundary_matrix, homology_vanishes_through, solve_linear
from .labelling import (
    Labelling,
    check_admissible,
    check_admissible_on,
    check_equivariant,
    h_ell,
    pattern,
    pattern_expansion,
    random_labelling,
)
from .resolutions import f_map, is_strongly_alternating
from .ring import RingSpec, Z, evaluate, sigma, tau
from .simplicial import (
    GroupAction,
    JoinVertex,
    SimplicialChain,
    SimplicialComplex,
    barycentric_subdivision,
    join_chains,
    join_complex,
    k_gon_join_sphere,
    vertex_id,
)


@dataclass
class StokesReport:
    degree: int
    lhs_count: int
    rhs_count: int
    lhs_alg: int
    rhs_alg: int

    @property
    def equal(self) -> bool:
        return self.lhs_count == self.lhs_alg == self.rhs_alg == self.rhs_count

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "lhs_count": self.lhs_count,
            "rhs_count": self.rhs_count,
            "lhs_alg": self.lhs_alg,
            "rhs_alg": self.rhs_alg,
            "equal": self.equal,
        }


def stokes_sides(x: SimplicialChain, l: Labelling) -> StokesReport:
    """Both sides of the Stokes identity, by pattern counting and through u f h."""
    r = x.degree
    if r < 1:
        raise DegreeError("the Stokes formula needs a chain of degree >= 1")
    k, ring = l.k, x.ring
    dx = x.boundary()
    P = pattern_expansion(x, l)
    Q = pattern_expansion(dx, l, check=False)
    sa = lambda t: is_strongly_alternating(t, k)
    if r % 2 == 0:
        lhs = sum(c for t, c in Q.items() if sa((1,) + t))
        rhs = sum(c for t, c in P.items() if sa(t))
        mult = sigma(k, ring)
    else:
        lhs = sum(c for t, c in Q.items() if t[0] == 0 and sa(t))
        rhs = sum(c for t, c in P.items() if sa((0,) + t)) - sum(c for t, c in P.items() if sa((1,) + t))
        mult = tau(k, ring)
    lhs_alg = evaluate(f_map(h_ell(dx, l, check=False)).value, 0)
    rhs_alg = evaluate(mult * f_map(h_ell(x, l, check=False)).value, 0)
    return StokesReport(r, ring.reduce(lhs), ring.reduce(rhs), lhs_alg, rhs_alg)


@dataclass
class GeneralizedSphere:
    complex: SimplicialComplex
    action: GroupAction
    chains: list

    @property
    def ring(self) -> RingSpec:
        return self.chains[0].ring

    @property
    def top(self) -> int:
        return len(self.chains) - 1

    def to_json(self) -> dict:
        return {
            "format": 1,
            "ring": str(self.ring),
            "complex": self.complex.to_json(self.action),
            "chains": [c.to_json() for c in self.chains],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GeneralizedSphere":
        X, action = SimplicialComplex.from_json(doc["complex"])
        if action is None:
            raise DomainError("a generalized sphere needs a complex with an action")
        chains = [SimplicialChain.from_json(c, X) for c in doc["chains"]]
        return cls(X, action, chains)


def verify_generalized_sphere(gs: GeneralizedSphere) -> dict:
    """Check d x_i = sigma x_{i-1} (i even) / tau x_{i-1} (i odd) and the degrees."""
    k, ring = gs.action.k, gs.ring
    for i, x in enumerate(gs.chains):
        if x.degree != i:
            return {"ok": False, "first_failure": i, "reason": f"x_{i} has degree {x.degree}"}
    for i in range(1, len(gs.chains)):
        m = sigma(k, ring) if i % 2 == 0 else tau(k, ring)
        lhs = gs.chains[i].boundary()
        rhs = gs.chains[i - 1].lmul(m, gs.action)
        if lhs != rhs:
            return {"ok": False, "first_failure": i, "reason": f"boundary of x_{i} differs from {'sigma' if i % 2 == 0 else 'tau'} x_{i - 1}"}
    return {"ok": True, "first_failure": None, "reason": None}


def _sphere_from_marks(X, action, us, ws, top) -> list:
    """x_{2s} = u^s * o^{s-1} * ... * o^0 and x_{2s+1} = w^s * o^{s-1} * ... * o^0, o^i = sigma w^i."""
    k, ring = action.k, us[0].ring
    os_ = [w.lmul(sigma(k, ring), action) for w in ws]
    chains = []
    for j in range(top + 1):
        s = j // 2
        x = us[s] if j % 2 == 0 else ws[s]
        for i in range(s - 1, -1, -1):
            x = join_chains(x, os_[i])
        chains.append(x)
    return chains


def build_ezk_sphere(k: int, d: int, ring: RingSpec = Z) -> GeneralizedSphere:
    """Generalized d-sphere in (Z_k)^{*(d+1)} from hemisphere-type chains.

    Copies are numbered 1..d+1, so the marked vertex u^i sits in copy d-2i+1.
    """
    if k < 2 or d < 0:
        raise DomainError("build_ezk_sphere needs k >= 2 and d >= 0")
    X, action = join_complex(k, d + 1)
    us, ws = [], []
    for i in range(d // 2 + 1):
        c = d - 2 * i + 1
        us.append(SimplicialChain.simplex(X, (JoinVertex(c, 0),), ring=ring))
        if c >= 2:
            a, b0, b1 = JoinVertex(c - 1, 0), JoinVertex(c, 1), JoinVertex(c, 0)
            ws.append(SimplicialChain.from_simplices(X, [((a, b0), 1), ((a, b1), -1)], ring))
    return GeneralizedSphere(X, action, _sphere_from_marks(X, action, us, ws, d))


def build_kgon_sphere(k: int, m: int, ring: RingSpec = Z) -> GeneralizedSphere:
    """Generalized (2m+1)-sphere on the join of m+1 k-gons."""
    X, action, us, ws = k_gon_join_sphere(k, m)
    if ring != Z:
        us = [SimplicialChain(X, 0, u.terms, ring) for u in us]
        ws = [SimplicialChain(X, 1, w.terms, ring) for w in ws]
    return GeneralizedSphere(X, action, _sphere_from_marks(X, action, us, ws, 2 * m + 1))


def alpha_value(x: SimplicialChain, l: Labelling) -> int:
    """u(sigma * f(h^l(x)))."""
    return evaluate(sigma(l.k, x.ring) * f_map(h_ell(x, l)).value, 0)


def congruence_modulus(k: int, ring: RingSpec) -> int:
    """Order of R/kR."""
    return k if ring.modulus is None else gcd(k, ring.modulus)


@dataclass
class AlphaSequence:
    values: list
    k: int
    ring: RingSpec
    alpha0_direct: int

    @property
    def modulus(self) -> int:
        return congruence_modulus(self.k, self.ring)

    @property
    def congruent(self) -> bool:
        n = self.modulus
        return all((a - self.values[0]) % n == 0 for a in self.values)

    def to_json(self) -> dict:
        return {
            "alpha": self.values,
            "k": self.k,
            "ring": str(self.ring),
            "alpha0_direct": self.alpha0_direct,
            "congruent": self.congruent,
        }


def alpha_sequence(gs: GeneralizedSphere, l: Labelling) -> AlphaSequence:
    if l.k != gs.action.k:
        raise PreconditionError("labelling and action disagree on k")
    eq = check_equivariant(l, gs.action)
    if not eq.ok:
        raise PreconditionError(f"labelling is not equivariant at {vertex_id(eq.violations[0])}")
    values = [alpha_value(x, l) for x in gs.chains]
    return AlphaSequence(values, l.k, gs.ring, gs.chains[0].coefficient_sum())


def subdivide_sphere(gs: GeneralizedSphere, rounds: int) -> GeneralizedSphere:
    for _ in range(rounds):
        sub = barycentric_subdivision(gs.complex, gs.action)
        gs = GeneralizedSphere(sub.complex, sub.action, [sub.chain_map(x) for x in gs.chains])
    return gs


def subdivision_tucker_check(k: int, d: int, rounds: int, seeds, color_count: int | None = None) -> dict:
    """Count of alpha_{d+1} on subdivisions of (Z_k)^{*(d+2)} for random equivariant labellings."""
    gs = subdivide_sphere(build_ezk_sphere(k, d + 1), rounds)
    colors = color_count or (d + 2) * (rounds + 1) + 1
    runs = []
    for seed in seeds:
        l = random_labelling(gs.complex, k, colors, "equivariant_admissible", seed, gs.action)
        seq = alpha_sequence(gs, l)
        top = seq.values[-1]
        runs.append({"seed": seed, "alpha": seq.values, "count": top, "ok": top % k == 1 % k})
    return {
        "k": k,
        "d": d,
        "rounds": rounds,
        "vertices": len(gs.complex.vertices),
        "facets": len(gs.complex.facets),
        "sphere_ok": verify_generalized_sphere(gs)["ok"],
        "runs": runs,
        "ok": all(r["ok"] for r in runs) and verify_generalized_sphere(gs)["ok"],
    }


@dataclass
class SphereConstruction:
    sphere: GeneralizedSphere | None
    obstruction_degree: int | None = None
    obstruction_target: SimplicialChain | None = None

    @property
    def ok(self) -> bool:
        return self.sphere is not None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "obstruction_degree": self.obstruction_degree,
            "obstruction_target": self.obstruction_target.to_json() if self.obstruction_target is not None else None,
        }


def build_sphere_homologically(X: SimplicialComplex, action: GroupAction, r: int, ring: RingSpec = Z) -> SphereConstruction:
    """Generalized r-sphere by solving d x_{i+1} = tau x_i (i even) / sigma x_i (i odd)."""
    k = action.k
    if not ring.k_is_nonunit(k):
        raise PreconditionError(f"{k} is invertible in {ring}; need kR != R")
    problems = action.validate(X)
    if problems:
        raise PreconditionError(problems[0])
    x0 = SimplicialChain.simplex(X, (X.vertices[0],), ring=ring)
    chains = [x0]
    for i in range(r):
        target = chains[-1].lmul(tau(k, ring) if i % 2 == 0 else sigma(k, ring), action)
        if i + 1 > X.dim:
            if target:
                return SphereConstruction(None, i + 1, target)
            chains.append(SimplicialChain(X, i + 1, {}, ring))
            continue
        D = boundary_matrix(X, i + 1)
        sol = solve_linear(D, target.to_vector(), ring, cols=len(X.faces(i + 1)))
        if sol is None:
            return SphereConstruction(None, i + 1, target)
        chains.append(SimplicialChain.from_vector(X, i + 1, sol, ring))
    return SphereConstruction(GeneralizedSphere(X, action, chains))


@dataclass
class WitnessReport:
    status: str  # witness | precondition_violated | no_sphere | contradiction
    simplex: tuple | None = None
    pattern: tuple | None = None
    source: str | None = None
    alpha: list | None = None
    failed: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "simplex": [vertex_id(v) for v in self.simplex] if self.simplex else None,
            "pattern": list(self.pattern) if self.pattern else None,
            "source": self.source,
            "alpha": self.alpha,
            "failed": self.failed,
        }


def _strongly_alternating_simplex(simplices, l: Labelling, r: int):
    for s in simplices:
        p = pattern(s, l)
        if p is not None and len(p[1]) == r + 2 and is_strongly_alternating(p[1], l.k):
            return s, p[1]
    return None


def hom_bound_witness(
    X: SimplicialComplex,
    action: GroupAction,
    l: Labelling,
    r: int,
    sphere: GeneralizedSphere | None = None,
    ring: RingSpec = Z,
) -> WitnessReport:
    """Find an (r+1)-simplex with r+2 colors and a strongly alternating pattern."""
    failed = []
    if not check_admissible(X, l).ok:
        failed.append("admissible")
    if not check_equivariant(l, action).ok:
        failed.append("equivariant")
    if failed:
        return WitnessReport("precondition_violated", failed=failed)
    if sphere is None:
        built = build_sphere_homologically(X, action, r + 1, ring)
        if not built.ok:
            return WitnessReport("no_sphere", failed=[f"homology obstruction in degree {built.obstruction_degree}"])
        sphere = built.sphere
    alpha = alpha_sequence(sphere, l).values
    found = _strongly_alternating_simplex(sphere.chains[r + 1].support(), l, r)
    source = "sphere"
    if found is None:
        found = _strongly_alternating_simplex(X.faces(r + 1), l, r)
        source = "complex"
    if found is None:
        return WitnessReport("contradiction", alpha=alpha, failed=["no strongly alternating (r+1)-simplex"])
    return WitnessReport("witness", found[0], found[1], source, alpha)


def orbit_labelling(Y: SimplicialComplex, action: GroupAction) -> Labelling | None:
    """Color = orbit index, sign = position in the orbit; None if this is not admissible."""
    labels = {}
    for c, orb in enumerate(action.orbits(Y), start=1):
        for j, v in enumerate(orb):
            labels[v] = (j, c)
    l = Labelling(action.k, labels)
    return l if check_admissible(Y, l).ok else None


def dimension_labelling(Y: SimplicialComplex, action: GroupAction) -> Labelling:
    """Labelling of the barycentric subdivision of Y: color = face dimension + 1."""
    labels = {}
    for orb in action.orbits(Y):
        for j, v in enumerate(orb):
            labels[v] = (j, len(v))
    return Labelling(action.k, labels)


def is_equivariant_map(phi: dict, aX: GroupAction, aY: GroupAction) -> bool:
    return all(phi[aX.vertex(v)] == aY.vertex(phi[v]) for v in phi)


def is_simplicial_map(phi: dict, X: SimplicialComplex, Y: SimplicialComplex) -> bool:
    return all(Y.sort(set(phi[v] for v in f)) in Y for f in X.facets)


def refute_equivariant_map(
    X: SimplicialComplex,
    aX: GroupAction,
    Y: SimplicialComplex,
    aY: GroupAction,
    phi: dict,
    r: int | None = None,
    ring: RingSpec = Z,
) -> dict:
    """Show that ``phi`` is not an equivariant simplicial map X -> Y.

    Hypotheses: dim Y <= r, kR != R and the reduced homology of X vanishes
    through degree r.  When phi survives the direct checks the pulled-back
    labelling is run through ``hom_bound_witness`` to expose the contradiction.
    """
    k = aX.k
    r = Y.dim if r is None else r
    hyp = {
        "dim_Y_le_r": Y.dim <= r,
        "k_nonunit": ring.k_is_nonunit(k) and aY.k == k,
        "free_actions": not aX.validate(X) and not aY.validate(Y),
        "homology_X_vanishes": homology_vanishes_through(X, r, ring),
    }
    total = set(phi) == set(X.vertices) and all(w in Y.index for w in phi.values())
    checks = {
        "total": total,
        "equivariant": total and is_equivariant_map(phi, aX, aY),
        "simplicial": total and is_simplicial_map(phi, X, Y),
    }
    report = {
        "theorem": "dold",
        "hypotheses": hyp,
        "checks": checks,
        "phi": {vertex_id(v): vertex_id(w) for v, w in phi.items()} if total else None,
        "certificate": None,
    }
    if not all(checks.values()):
        failed = next(name for name, ok in checks.items() if not ok)
        report.update(verdict="refuted", reason=f"map is not {failed}")
        return report
    # phi is an equivariant simplicial map: pull back a labelling with <= r+1 colors per simplex
    lY = orbit_labelling(Y, aY)
    if lY is not None:
        Xs, aXs, lX = X, aX, lY.pullback(phi)
    else:
        sX, sY = barycentric_subdivision(X, aX), barycentric_subdivision(Y, aY)
        lYs = dimension_labelling(sY.complex, sY.action)
        sphi = {F: sY.complex.sort(set(phi[v] for v in F)) for F in sX.complex.vertices}
        Xs, aXs, lX = sX.complex, sX.action, lYs.pullback(sphi)
    w = hom_bound_witness(Xs, aXs, lX, r, ring=ring)
    report["certificate"] = w.to_json()
    if all(hyp.values()):
        report.update(verdict="refuted", reason=f"pulled-back labelling gives {w.status}, contradicting the homological bound")
    else:
        failed = [name for name, ok in hyp.items() if not ok]
        report.update(verdict="hypothesis_failed", reason=f"hypotheses fail: {', '.join(failed)}")
    return report


def equivariant_vertex_maps(X: SimplicialComplex, aX: GroupAction, Y: SimplicialComplex, aY: GroupAction):
    """All equivariant vertex maps, generated from images of orbit representatives."""
    reps = [orb for orb in aX.orbits(X)]
    for images in itertools.product(Y.vertices, repeat=len(reps)):
        phi = {}
        for orb, w in zip(reps, images):
            for j, v in enumerate(orb):
                phi[v] = aY.vertex(w, j)
        yield phi


def dold_exhaustive(k: int, m: int, n: int, ring: RingSpec = Z) -> dict:
    """Refute every equivariant vertex map (Z_k)^{*m} -> (Z_k)^{*n} (needs n <= m-1)."""
    X, aX = join_complex(k, m)
    Y, aY = join_complex(k, n)
    r = m - 2
    reports = [refute_equivariant_map(X, aX, Y, aY, phi, r, ring) for phi in equivariant_vertex_maps(X, aX, Y, aY)]
    return {
        "theorem": "dold",
        "inputs": {"k": k, "m": m, "n": n, "r": r, "ring": str(ring)},
        "values": {
            "maps": len(reports),
            "refuted": sum(1 for rep in reports if rep["verdict"] == "refuted"),
            "reasons": sorted({rep["reason"] for rep in reports}),
        },
        "verdict": "pass" if reports and all(rep["verdict"] == "refuted" for rep in reports) else "fail",
    }


def alpha_invariance_experiment(X: SimplicialComplex, action: GroupAction, x: SimplicialChain, labellings) -> dict:
    """alpha = u(sigma f h^l(x)) for several labellings; all should agree mod k."""
    k, ring = action.k, x.ring
    if x.degree % 2 == 0:
        y = x.lmul(tau(k, ring), action)
    else:
        y = x.lmul(sigma(k, ring), action)
    if x.degree > 0 and y.boundary():
        raise PreconditionError("the chain does not satisfy the cycle condition")
    n = congruence_modulus(k, ring)
    values = [alpha_value(x, l) for l in labellings]
    classes = sorted({v % n for v in values})
    return {"values": values, "classes": classes, "modulus": n, "ok": len(classes) <= 1}


def plus_alternating_count(X: SimplicialComplex, l: Labelling) -> int:
    """Facets whose color-sorted signs read e, g, e, g, ... (k = 2)."""
    count = 0
    for f in X.facets:
        p = pattern(f, l)
        if p is not None and all(s == i % 2 for i, s in enumerate(p[1])):
            count += 1
    return count
