"""Finite ordered simplicial complexes, sparse chains and Z_k actions.

Simplices are tuples of vertices sorted by the complex's vertex order; the
sorted tuple carries orientation +1 and every other sign lives in chain
coefficients.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import DegreeError, DimensionMismatch, DomainError, FormatError, SizeGuardError
from .ring import GroupRingElement, RingSpec, Z

DEFAULT_FACET_CAP = 10**6


class JoinVertex(NamedTuple):
    """Vertex of a join of copies of Z_k; tuples order by (copy, sign)."""

    copy: int
    sign: int

    def __str__(self):
        return f"s{self.sign}c{self.copy}"


def vertex_id(v) -> str:
    if isinstance(v, JoinVertex):
        return str(v)
    if isinstance(v, tuple):
        return "b(" + ",".join(vertex_id(w) for w in v) + ")"
    return str(v)


def parse_vertex_id(text: str):
    if text.startswith("s") and "c" in text:
        sign, _, copy = text[1:].partition("c")
        if sign.isdigit() and copy.isdigit():
            return JoinVertex(int(copy), int(sign))
    return text


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (distinct entries)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class SimplicialComplex:
    """Downward closure of a set of facets over a totally ordered vertex list."""

    def __init__(self, vertices: Iterable[Hashable], facets: Iterable[Iterable[Hashable]]):
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise FormatError("duplicate vertex identifiers")
        cleaned = set()
        for f in facets:
            f = tuple(f)
            if not f:
                continue
            if len(set(f)) != len(f):
                raise FormatError(f"facet {f} repeats a vertex")
            for v in f:
                if v not in self.index:
                    raise FormatError(f"facet {f} uses unknown vertex {v!r}")
            cleaned.add(self.sort(f))
        if not cleaned:
            raise FormatError("a complex needs at least one nonempty facet")
        maximal = []
        for f in sorted(cleaned, key=len, reverse=True):
            fs = set(f)
            if not any(fs < set(g) for g in maximal):
                maximal.append(f)
        self.facets = tuple(sorted(maximal, key=lambda f: (len(f), self.key(f))))

    def key(self, simplex: Sequence) -> tuple:
        return tuple(self.index[v] for v in simplex)

    def sort(self, simplex: Iterable) -> tuple:
        return tuple(sorted(simplex, key=self.index.__getitem__))

    def sort_signed(self, simplex: Sequence) -> tuple[int, tuple | None]:
        """Sorted simplex and the sign of the sorting permutation (0 if degenerate)."""
        keys = [self.index[v] for v in simplex]
        if len(set(keys)) != len(keys):
            return 0, None
        return permutation_sign(keys), self.sort(simplex)

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) == 1

    @cached_property
    def _faces(self) -> list:
        by_dim: list = [set() for _ in range(self.dim + 1)]
        for f in self.facets:
            for r in range(1, len(f) + 1):
                by_dim[r - 1].update(itertools.combinations(f, r))
        return [sorted(s, key=self.key) for s in by_dim]

    @cached_property
    def _face_index(self) -> list:
        return [{s: i for i, s in enumerate(faces)} for faces in self._faces]

    def faces(self, r: int) -> list:
        if r < 0 or r > self.dim:
            return []
        return self._faces[r]

    def face_index(self, r: int) -> dict:
        if r < 0 or r > self.dim:
            return {}
        return self._face_index[r]

    def f_vector(self) -> list:
        return [len(f) for f in self._faces]

    def __contains__(self, simplex) -> bool:
        simplex = tuple(simplex)
        return simplex in self.face_index(len(simplex) - 1)

    def edges(self) -> list:
        return self.faces(1)

    @cached_property
    def neighbours(self) -> dict:
        nb: dict = {v: set() for v in self.vertices}
        for a, b in self.edges():
            nb[a].add(b)
            nb[b].add(a)
        return nb

    def subcomplex(self, facets: Iterable) -> "SimplicialComplex":
        facets = [self.sort(f) for f in facets]
        used = {v for f in facets for v in f}
        return SimplicialComplex([v for v in self.vertices if v in used], facets)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.facets == other.facets

    def __hash__(self):
        return hash((self.vertices, self.facets))

    def __repr__(self):
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self.facets)} facets, dim {self.dim})"

    def to_json(self, action: "GroupAction | None" = None) -> dict:
        doc = {
            "format": 1,
            "vertices": [vertex_id(v) for v in self.vertices],
            "facets": [[vertex_id(v) for v in f] for f in self.facets],
        }
        if action is not None:
            doc["action"] = {
                "k": action.k,
                "generator": {vertex_id(v): vertex_id(w) for v, w in action.generator.items()},
            }
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> tuple["SimplicialComplex", "GroupAction | None"]:
        try:
            verts = [parse_vertex_id(str(v)) for v in doc["vertices"]]
            facets = [[parse_vertex_id(str(v)) for v in f] for f in doc["facets"]]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad complex document: {exc}") from exc
        X = cls(verts, facets)
        action = None
        if doc.get("action"):
            a = doc["action"]
            gen = {parse_vertex_id(str(v)): parse_vertex_id(str(w)) for v, w in a["generator"].items()}
            action = GroupAction(int(a["k"]), gen)
            action.validate(X)
        return X, action


def complex_from_facets(facets: Iterable[Iterable[Hashable]], vertices: Iterable[Hashable] | None = None) -> SimplicialComplex:
    """Build a complex; without an explicit vertex list the vertices are sorted."""
    facets = [list(f) for f in facets]
    if not facets:
        raise FormatError("empty facet list")
    if vertices is None:
        seen = {v for f in facets for v in f}
        try:
            vertices = sorted(seen)
        except TypeError:
            vertices = list(dict.fromkeys(v for f in facets for v in f))
    return SimplicialComplex(vertices, facets)


class SimplicialChain:
    """Sparse chain of fixed degree on a complex."""

    __slots__ = ("complex", "degree", "ring", "terms")

    def __init__(self, complex: SimplicialComplex, degree: int, terms: dict | None = None, ring: RingSpec = Z, check: bool = True):
        self.complex = complex
        self.degree = degree
        self.ring = ring
        clean = {}
        for s, c in (terms or {}).items():
            c = ring.reduce(c)
            if c:
                if check:
                    if len(s) != degree + 1:
                        raise DimensionMismatch(f"simplex {s} does not have degree {degree}")
                    if s not in complex.face_index(degree):
                        raise DomainError(f"{s} is not a sorted face of the complex")
                clean[s] = c
        self.terms = clean

    @classmethod
    def from_simplices(cls, complex: SimplicialComplex, items: Iterable[tuple[Sequence, int]], ring: RingSpec = Z, degree: int | None = None) -> "SimplicialChain":
        """Accumulate (possibly unsorted) vertex sequences with coefficients."""
        terms: dict = {}
        for simplex, c in items:
            if degree is None:
                degree = len(simplex) - 1
            sign, s = complex.sort_signed(simplex)
            if sign:
                terms[s] = terms.get(s, 0) + sign * c
        if degree is None:
            raise DegreeError("cannot infer the degree of an empty chain")
        return cls(complex, degree, terms, ring)

    @classmethod
    def simplex(cls, complex: SimplicialComplex, simplex: Sequence, coeff: int = 1, ring: RingSpec = Z) -> "SimplicialChain":
        return cls.from_simplices(complex, [(simplex, coeff)], ring)

    def _new(self, terms: dict, degree: int | None = None) -> "SimplicialChain":
        return SimplicialChain(self.complex, self.degree if degree is None else degree, terms, self.ring, check=False)

    def zero_like(self, degree: int | None = None) -> "SimplicialChain":
        return self._new({}, degree)

    def _check(self, other):
        if not isinstance(other, SimplicialChain):
            raise TypeError(f"cannot combine a chain with {type(other).__name__}")
        if other.degree != self.degree or other.ring != self.ring:
            raise DimensionMismatch("chains of different degree or ring")
        if other.complex is not self.complex and other.complex != self.complex:
            raise DimensionMismatch("chains live on different complexes")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms.get(s, 0) + c
        return self._new(terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._new({s: -c for s, c in self.terms.items()})

    def __mul__(self, c: int):
        return self._new({s: c * v for s, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SimplicialChain):
            return NotImplemented
        return self.degree == other.degree and self.ring == other.ring and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        items = ", ".join(f"{c}*{tuple(vertex_id(v) for v in s)}" for s, c in self.sorted_terms())
        return f"<{self.degree}-chain {items or '0'}>"

    def sorted_terms(self) -> list:
        key = self.complex.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def support(self) -> list:
        return [s for s, _ in self.sorted_terms()]

    def coefficient_sum(self) -> int:
        return self.ring.reduce(sum(self.terms.values()))

    def boundary(self) -> "SimplicialChain":
        if self.degree == 0:
            raise DegreeError("boundary of a 0-chain is the augmentation; use coefficient_sum()")
        terms: dict = {}
        for s, c in self.terms.items():
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                terms[face] = terms.get(face, 0) + (c if i % 2 == 0 else -c)
        return self._new(terms, self.degree - 1)

    def apply(self, action: "GroupAction", j: int = 1) -> "SimplicialChain":
        return apply_action(action, j, self)

    def lmul(self, x: GroupRingElement, action: "GroupAction") -> "SimplicialChain":
        """Group ring element acting through ``action``."""
        if x.k != action.k:
            raise DimensionMismatch("group ring and action disagree on k")
        out = self.zero_like()
        for j, c in enumerate(x.coeffs):
            if c:
                out = out + apply_action(action, j, self) * c
        return out

    def to_vector(self) -> list:
        idx = self.complex.face_index(self.degree)
        v = [0] * len(idx)
        for s, c in self.terms.items():
            v[idx[s]] = c
        return v

    @classmethod
    def from_vector(cls, complex: SimplicialComplex, degree: int, vec: Sequence[int], ring: RingSpec = Z) -> "SimplicialChain":
        faces = complex.faces(degree)
        return cls(complex, degree, {faces[i]: c for i, c in enumerate(vec) if c}, ring, check=False)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "degree": self.degree,
            "ring": str(self.ring),
            "terms": [{"simplex": [vertex_id(v) for v in s], "coeff": c} for s, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, doc: dict, complex: SimplicialComplex | None = None) -> "SimplicialChain":
        """Load a chain; without ``complex`` the closure of the support is used."""
        try:
            ring = RingSpec.parse(doc.get("ring", "Z"))
            degree = int(doc["degree"])
            items = [([parse_vertex_id(str(v)) for v in t["simplex"]], int(t["coeff"])) for t in doc["terms"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad chain document: {exc}") from exc
        if complex is None:
            if not items:
                raise FormatError("cannot infer a complex from an empty chain")
            complex = complex_from_facets([s for s, _ in items])
        for s, _ in items:
            if len(s) != degree + 1:
                raise FormatError(f"simplex {s} does not match degree {degree}")
        return cls.from_simplices(complex, items, ring, degree)


class GroupAction:
    """Z_k acting on a complex through a vertex permutation of order k."""

    def __init__(self, k: int, generator: dict):
        self.k = k
        self.generator = dict(generator)
        self._powers = [{v: v for v in self.generator}]
        for _ in range(1, k):
            prev = self._powers[-1]
            self._powers.append({v: self.generator[prev[v]] for v in self.generator})

    def vertex(self, v, j: int = 1):
        return self._powers[j % self.k][v]

    def power(self, j: int) -> dict:
        return self._powers[j % self.k]

    def validate(self, X: SimplicialComplex, require_free: bool = True) -> list:
        """Problems found (empty list if the action is a valid free action)."""
        problems = []
        if set(self.generator) != set(X.vertices) or set(self.generator.values()) != set(X.vertices):
            return ["generator is not a permutation of the vertex set"]
        if any(self.vertex(v, self.k) != v for v in X.vertices):
            problems.append("generator does not have order dividing k")
        elif any(all(self.vertex(v, j) == v for v in X.vertices) for j in range(1, self.k)):
            problems.append("generator has order smaller than k")
        for f in X.facets:
            if X.sort(self.vertex(v) for v in f) not in X:
                problems.append(f"image of facet {f} is not a simplex")
                break
        if require_free and not problems:
            fixed = self.fixed_simplices(X)
            if fixed:
                problems.append(f"action is not free: {fixed[0]} is fixed by g^{fixed[0][1]}")
        return problems

    def fixed_simplices(self, X: SimplicialComplex) -> list:
        out = []
        for r in range(X.dim + 1):
            for s in X.faces(r):
                ss = set(s)
                for j in range(1, self.k):
                    if {self.vertex(v, j) for v in s} == ss:
                        out.append((s, j))
                        break
        return out

    def is_free(self, X: SimplicialComplex) -> bool:
        return not self.fixed_simplices(X)

    def orbits(self, X: SimplicialComplex) -> list:
        """Vertex orbits as lists ``[v, g v, g^2 v, ...]`` keyed by first vertex in order."""
        seen = set()
        out = []
        for v in X.vertices:
            if v in seen:
                continue
            orb = [self.vertex(v, j) for j in range(self.k)]
            seen.update(orb)
            out.append(orb)
        return out


def canonical_action(k: int, X: SimplicialComplex) -> GroupAction:
    """Shift the sign of every join vertex by one."""
    return GroupAction(k, {v: JoinVertex(v.copy, (v.sign + 1) % k) for v in X.vertices})


def apply_action(action: GroupAction, j: int, x):
    """Act by g^j on a vertex sequence (returns the image tuple) or a chain."""
    if isinstance(x, SimplicialChain):
        if j % action.k == 0:
            return x
        g = action.power(j)
        return SimplicialChain.from_simplices(
            x.complex, (([g[v] for v in s], c) for s, c in x.terms.items()), x.ring, x.degree
        )
    return tuple(action.vertex(v, j) for v in x)


def join_complex(k: int, m: int, cap: int = DEFAULT_FACET_CAP) -> tuple[SimplicialComplex, GroupAction]:
    """(Z_k)^{*m} with copies numbered 1..m and the sign-shifting action."""
    if k < 2 or m < 1:
        raise DomainError("join_complex needs k >= 2 and m >= 1")
    if k**m > cap:
        raise SizeGuardError(f"{k}^{m} facets exceed the cap {cap}")
    verts = [JoinVertex(c, s) for c in range(1, m + 1) for s in range(k)]
    facets = [tuple(JoinVertex(c + 1, s) for c, s in enumerate(signs)) for signs in itertools.product(range(k), repeat=m)]
    X = SimplicialComplex(verts, facets)
    return X, canonical_action(k, X)


def jumps(signs: Sequence[int]) -> int:
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def alt_subcomplex(k: int, m: int, d: int, cap: int = DEFAULT_FACET_CAP) -> SimplicialComplex:
    """Subcomplex of (Z_k)^{*m} generated by facets with at most d sign jumps."""
    if d < 0 or m < d + 1:
        raise DomainError(f"alt_subcomplex needs m >= d+1 >= 1, got m={m}, d={d}")
    if k**m > cap:
        raise SizeGuardError(f"{k}^{m} candidate facets exceed the cap {cap}")
    verts = [JoinVertex(c, s) for c in range(1, m + 1) for s in range(k)]
    facets = [
        tuple(JoinVertex(c + 1, s) for c, s in enumerate(signs))
        for signs in itertools.product(range(k), repeat=m)
        if jumps(signs) <= d
    ]
    return SimplicialComplex(verts, facets)


def join_chains(x: SimplicialChain, y: SimplicialChain) -> SimplicialChain:
    """Join of chains on disjoint sets of copies of a common ambient complex.

    Vertex lists are concatenated and re-sorted; the sorting sign enters the
    coefficient.  With this convention
    ``d(x*y) = dx*y + (-1)^(deg x + 1) x*dy``.
    """
    if x.complex is not y.complex and x.complex != y.complex:
        raise DimensionMismatch("join_chains needs a common ambient complex")
    if x.ring != y.ring:
        raise DimensionMismatch("join_chains needs a common ring")

    def groups(c):
        return {v.copy if isinstance(v, JoinVertex) else v for s in c.terms for v in s}

    if groups(x) & groups(y):
        raise DomainError("join_chains: the chains share copies")
    X = x.complex
    items = [(s + t, a * b) for s, a in x.terms.items() for t, b in y.terms.items()]
    out = SimplicialChain.from_simplices(X, items, x.ring, x.degree + y.degree + 1)
    return out


@dataclass
class PseudomanifoldReport:
    is_pseudomanifold: bool
    dimension: int
    pure: bool
    max_ridge_degree: int
    boundary_ridges: list
    boundary_complex: SimplicialComplex | None
    orientable: bool
    orientation_chain: SimplicialChain | None

    def summary(self) -> dict:
        return {
            "is_pseudomanifold": self.is_pseudomanifold,
            "dimension": self.dimension,
            "pure": self.pure,
            "max_ridge_degree": self.max_ridge_degree,
            "closed": self.is_pseudomanifold and not self.boundary_ridges,
            "boundary_ridges": len(self.boundary_ridges),
            "orientable": self.orientable,
        }


def pseudomanifold_analysis(X: SimplicialComplex) -> PseudomanifoldReport:
    d = X.dim
    pure = X.is_pure
    incidence: dict = {}
    for f in X.facets:
        for i in range(len(f)):
            incidence.setdefault(f[:i] + f[i + 1 :], []).append((f, -1 if i % 2 else 1))
    max_deg = max((len(v) for v in incidence.values()), default=0)
    is_pm = pure and max_deg <= 2
    boundary = [r for r, fs in sorted(incidence.items(), key=lambda t: X.key(t[0])) if len(fs) == 1]
    if not is_pm:
        return PseudomanifoldReport(False, d, pure, max_deg, boundary, None, False, None)
    bcomplex = X.subcomplex(boundary) if boundary and d > 0 else None

    orient: dict = {}
    consistent = True
    adjacency: dict = {f: [] for f in X.facets}
    for r, fs in incidence.items():
        if len(fs) == 2:
            (f1, s1), (f2, s2) = fs
            adjacency[f1].append((f2, s1, s2))
            adjacency[f2].append((f1, s2, s1))
    for start in X.facets:
        if start in orient:
            continue
        orient[start] = 1
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for g, sf, sg in adjacency[f]:
                # induced orientations on the shared ridge must cancel
                want = -orient[f] * sf * sg
                if g not in orient:
                    orient[g] = want
                    queue.append(g)
                elif orient[g] != want:
                    consistent = False
    chain = SimplicialChain(X, d, dict(orient)) if consistent else None
    return PseudomanifoldReport(True, d, pure, max_deg, boundary, bcomplex, consistent, chain)


@dataclass
class Subdivision:
    complex: SimplicialComplex
    original: SimplicialComplex
    action: GroupAction | None
    _cache: dict

    def simplex_image(self, s: tuple) -> dict:
        """sd of one sorted simplex as a dict of sorted simplices to coefficients."""
        if s in self._cache:
            return self._cache[s]
        Xp = self.complex
        if len(s) == 1:
            out = {(s,): 1}
        else:
            out = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                sign = -1 if i % 2 else 1
                for t, c in self.simplex_image(face).items():
                    ps, ts = Xp.sort_signed((s,) + t)
                    out[ts] = out.get(ts, 0) + ps * sign * c
            out = {t: c for t, c in out.items() if c}
        self._cache[s] = out
        return out

    def chain_map(self, x: SimplicialChain) -> SimplicialChain:
        terms: dict = {}
        for s, c in x.terms.items():
            for t, v in self.simplex_image(s).items():
                terms[t] = terms.get(t, 0) + c * v
        return SimplicialChain(self.complex, x.degree, terms, x.ring, check=False)


def barycentric_subdivision(X: SimplicialComplex, action: GroupAction | None = None) -> Subdivision:
    """Vertices of the subdivision are the faces of X, ordered by (dimension, face order).

    The chain map sends a simplex to the cone from its barycenter over the
    subdivided boundary.
    """
    verts = [f for r in range(X.dim + 1) for f in X.faces(r)]
    facets = []
    for f in X.facets:
        for perm in itertools.permutations(f):
            facets.append(tuple(X.sort(perm[: i + 1]) for i in range(len(perm))))
    Xp = SimplicialComplex(verts, facets)
    new_action = None
    if action is not None:
        problems = action.validate(X, require_free=False)
        if problems:
            raise DomainError(f"action is not simplicial on X: {problems[0]}")
        new_action = GroupAction(action.k, {f: X.sort(action.vertex(v) for v in f) for f in verts})
    return Subdivision(Xp, X, new_action, {})


def k_gon_join_sphere(k: int, m: int) -> tuple[SimplicialComplex, GroupAction, list, list]:
    """Join of m+1 k-gons (a (2m+1)-sphere) with the rotation action.

    Copies are numbered 1..m+1; vertex ``JoinVertex(c, j)`` is the j-th corner
    of copy c.  Returns the marked vertices u^i (corner 0 of copy m+1-i) and
    the edge chains w^i from u^i to g u^i.
    """
    if k <= 2:
        raise DomainError("k_gon_join_sphere needs k > 2")
    if m < 0:
        raise DomainError("m must be >= 0")
    copies = range(1, m + 2)
    verts = [JoinVertex(c, j) for c in copies for j in range(k)]
    edges_per_copy = [[(JoinVertex(c, j), JoinVertex(c, (j + 1) % k)) for j in range(k)] for c in copies]
    facets = [sum(choice, ()) for choice in itertools.product(*edges_per_copy)]
    X = SimplicialComplex(verts, facets)
    action = canonical_action(k, X)
    us, ws = [], []
    for i in range(m + 1):
        c = m + 1 - i
        u = JoinVertex(c, 0)
        us.append(SimplicialChain.simplex(X, (u,)))
        ws.append(SimplicialChain.simplex(X, (u, action.vertex(u))))
    return X, action, us, ws
