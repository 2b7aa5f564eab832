"""Z_k x N vertex labellings and the pattern chain map into the standard resolution."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .errors import AdmissibilityError, DomainError, FormatError, GenerationFailed
from .resolutions import StandardChain, tensor_to_bar
from .ring import GroupRingElement
from .simplicial import (
    GroupAction,
    JoinVertex,
    SimplicialChain,
    SimplicialComplex,
    complex_from_facets,
    parse_vertex_id,
    permutation_sign,
    vertex_id,
)


@dataclass
class Labelling:
    """Vertex -> (sign in Z_k, color >= 1)."""

    k: int
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for v, (s, c) in self.labels.items():
            if int(c) < 1:
                raise DomainError(f"color of {v!r} must be >= 1, got {c}")
            clean[v] = (int(s) % self.k, int(c))
        self.labels = clean

    def __getitem__(self, v) -> tuple[int, int]:
        try:
            return self.labels[v]
        except KeyError:
            raise DomainError(f"vertex {vertex_id(v)} is not labelled") from None

    def sign(self, v) -> int:
        return self[v][0]

    def color(self, v) -> int:
        return self[v][1]

    def shifted(self, j: int) -> "Labelling":
        """Same colors, every sign multiplied by g^j."""
        return Labelling(self.k, {v: (s + j, c) for v, (s, c) in self.labels.items()})

    def pullback(self, phi: dict) -> "Labelling":
        return Labelling(self.k, {v: self[w] for v, w in phi.items()})

    def to_json(self) -> dict:
        return {
            "format": 1,
            "k": self.k,
            "labels": {vertex_id(v): {"sign": s, "color": c} for v, (s, c) in self.labels.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Labelling":
        try:
            return cls(
                int(doc["k"]),
                {parse_vertex_id(str(v)): (int(l["sign"]), int(l["color"])) for v, l in doc["labels"].items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad labelling document: {exc}") from exc


def tautological_labelling(k: int, X: SimplicialComplex) -> Labelling:
    """Label every join vertex (copy c, sign s) by (s, c)."""
    return Labelling(k, {v: (v.sign, v.copy) for v in X.vertices})


def _edge_ok(l: Labelling, a, b) -> bool:
    (sa, ca), (sb, cb) = l[a], l[b]
    return ca != cb or sa == sb


@dataclass
class CheckReport:
    ok: bool
    violations: list

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [[vertex_id(v) for v in e] if isinstance(e, tuple) else vertex_id(e) for e in self.violations],
        }


def check_admissible(X: SimplicialComplex, l: Labelling) -> CheckReport:
    missing = [v for v in X.vertices if v not in l.labels]
    if missing:
        raise DomainError(f"{len(missing)} vertices are not labelled, e.g. {vertex_id(missing[0])}")
    bad = [e for e in X.edges() if not _edge_ok(l, *e)]
    return CheckReport(not bad, bad)


def check_admissible_on(simplices, l: Labelling) -> CheckReport:
    """Admissibility restricted to the edges of the given simplices."""
    bad = set()
    for s in simplices:
        for i in range(len(s)):
            for j in range(i + 1, len(s)):
                if not _edge_ok(l, s[i], s[j]):
                    bad.add((s[i], s[j]))
    return CheckReport(not bad, sorted(bad, key=lambda e: (vertex_id(e[0]), vertex_id(e[1]))))


def check_equivariant(l: Labelling, action: GroupAction) -> CheckReport:
    bad = []
    for v, gv in action.generator.items():
        s, c = l[v]
        if l[gv] != ((s + 1) % action.k, c):
            bad.append(v)
    return CheckReport(not bad, bad)


def pattern(simplex, l: Labelling) -> tuple[int, tuple] | None:
    """(orientation sign, sign tensor sorted by color), or None if colors repeat."""
    labs = [l[v] for v in simplex]
    colors = [c for _, c in labs]
    if len(set(colors)) < len(colors):
        return None
    order = sorted(range(len(labs)), key=lambda i: colors[i])
    return permutation_sign(colors), tuple(labs[i][0] for i in order)


def _require_admissible(x: SimplicialChain, l: Labelling):
    rep = check_admissible_on(x.terms, l)
    if not rep.ok:
        a, b = rep.violations[0]
        raise AdmissibilityError(
            f"labelling is not admissible on the chain: edge {vertex_id(a)}-{vertex_id(b)} has "
            f"labels {l[a]} and {l[b]}"
        )


def pattern_expansion(x: SimplicialChain, l: Labelling, check: bool = True) -> dict:
    """h^l(x) expanded in the standard R-basis: tensor -> coefficient."""
    if check:
        _require_admissible(x, l)
    out: dict = {}
    for s, c in x.terms.items():
        p = pattern(s, l)
        if p is not None:
            sign, t = p
            out[t] = out.get(t, 0) + sign * c
    ring = x.ring
    return {t: ring.reduce(c) for t, c in sorted(out.items()) if ring.reduce(c)}


def h_ell(x: SimplicialChain, l: Labelling, check: bool = True) -> StandardChain:
    """The pattern chain map C_r(X) -> S_r."""
    if check:
        _require_admissible(x, l)
    k, ring = l.k, x.ring
    terms: dict = {}
    for s, c in x.terms.items():
        p = pattern(s, l)
        if p is None:
            continue
        sign, t = p
        lead, word = tensor_to_bar(t, k)
        coeff = GroupRingElement.group(k, lead, ring).scale(sign * c)
        terms[word] = terms[word] + coeff if word in terms else coeff
    return StandardChain(k, ring, x.degree, terms)


def relabel_chain(x: SimplicialChain, l: Labelling) -> SimplicialChain:
    """Push a chain forward along the simplicial map to the universal label space.

    The image lives on the subcomplex of the join of copies of Z_k spanned by
    the image simplices; simplices whose labels collapse are dropped.
    """
    _require_admissible(x, l)
    items = []
    for s, c in x.terms.items():
        img = [JoinVertex(l.color(v), l.sign(v)) for v in s]
        if len(set(img)) == len(img):
            items.append((img, c))
    if not items:
        X = complex_from_facets([[JoinVertex(1, 0)]])
        return SimplicialChain(X, x.degree, {}, x.ring)
    X = complex_from_facets([img for img, _ in items])
    return SimplicialChain.from_simplices(X, items, x.ring, x.degree)


def random_labelling(
    X: SimplicialComplex,
    k: int,
    color_count: int,
    mode: str = "admissible",
    seed: int = 0,
    action: GroupAction | None = None,
    max_steps: int = 20000,
) -> Labelling:
    """Seeded random admissible (optionally equivariant) labelling.

    Units (single vertices, or vertex orbits in equivariant mode) are labelled
    greedily in random order; when a unit has no conflict-free label it takes a
    random one and the conflicting neighbouring units are released and
    requeued.
    """
    if color_count < 1:
        raise DomainError("color_count must be >= 1")
    rng = random.Random(seed)
    if mode == "equivariant_admissible":
        if action is None or action.k != k:
            raise DomainError("equivariant mode needs a Z_k action")
        if not action.is_free(X):
            raise DomainError("equivariant labellings need a free action")
        units = action.orbits(X)
    elif mode == "admissible":
        units = [[v] for v in X.vertices]
    else:
        raise DomainError(f"unknown labelling mode {mode!r}")

    unit_of = {v: i for i, u in enumerate(units) for j, v in enumerate(u)}
    offset = {v: j for u in units for j, v in enumerate(u)}
    nb = X.neighbours
    for i, u in enumerate(units):
        if any(unit_of[w] == i for v in u for w in nb[v]):
            raise GenerationFailed("adjacent vertices in one orbit cannot be labelled equivariantly and admissibly")
    unit_nb = [sorted({unit_of[w] for v in u for w in nb[v]}) for u in units]

    assigned: dict = {}

    def labels_of(i, lab):
        s, c = lab
        return {v: ((s + offset[v]) % k, c) for v in units[i]}

    def conflicts(i, lab) -> list:
        mine = labels_of(i, lab)
        out = []
        for j in unit_nb[i]:
            if j not in assigned:
                continue
            theirs = labels_of(j, assigned[j])
            for v in units[i]:
                sv, cv = mine[v]
                if any(w in theirs and theirs[w][1] == cv and theirs[w][0] != sv for w in nb[v]):
                    out.append(j)
                    break
        return out

    candidates = [(s, c) for s in range(k) for c in range(1, color_count + 1)]
    queue = deque(rng.sample(range(len(units)), len(units)))
    steps = 0
    while queue:
        steps += 1
        if steps > max_steps:
            raise GenerationFailed(f"no admissible labelling found within {max_steps} steps; try more colors")
        i = queue.popleft()
        if i in assigned:
            continue
        order = rng.sample(candidates, len(candidates))
        for lab in order:
            if not conflicts(i, lab):
                assigned[i] = lab
                break
        else:
            lab = order[0]
            for j in conflicts(i, lab):
                del assigned[j]
                queue.append(j)
            assigned[i] = lab
    labels = {}
    for i, lab in assigned.items():
        labels.update(labels_of(i, lab))
    return Labelling(k, labels)
