"""Standard (bar) resolution, minimal resolution, and the chain map between them.

Bar words are plain tuples of exponents ``(a_1, ..., a_r)`` standing for
``[g^a_1 | ... | g^a_r]``; tensors are tuples ``(b_0, ..., b_r)`` standing for
``g^b_0 (x) ... (x) g^b_r``.  A :class:`StandardChain` is a Lambda-linear
combination of bar words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .errors import DegreeError, DimensionMismatch, FormatError, SizeGuardError
from .ring import GroupRingElement, RingSpec, Z, sigma, sigma_r, tau

DEFAULT_WORD_CAP = 10**6


def tensor_to_bar(t: tuple, k: int) -> tuple[int, tuple]:
    """Rewrite ``h_0 (x) ... (x) h_r`` as ``h_0 [h_0^-1 h_1 | ... ]``."""
    lead = t[0] % k
    return lead, tuple((t[i] - t[i - 1]) % k for i in range(1, len(t)))


def bar_to_tensor(lead: int, word: tuple, k: int) -> tuple:
    out = [lead % k]
    for a in word:
        out.append((out[-1] + a) % k)
    return tuple(out)


def is_alternating(t: tuple) -> bool:
    """Adjacent tensor entries differ."""
    return all(t[i] != t[i + 1] for i in range(len(t) - 1))


def is_alternating_word(word: tuple) -> bool:
    return all(a != 0 for a in word)


def _pairs_ok(letters: tuple, k: int) -> bool:
    return all(letters[i] + letters[i + 1] >= k for i in range(0, len(letters) - 1, 2))


def is_strongly_alternating_word(word: tuple, k: int) -> bool:
    """Strong alternation of the basis element ``[word]``, i.e. of the tensor
    ``e (x) g^a_1 (x) ...``.

    Even length: consecutive pairs of letters sum to at least k.  Odd length:
    the first letter is nonzero and the remaining (even-length) word passes
    the pair test.
    """
    if len(word) % 2 == 0:
        return _pairs_ok(word, k)
    return word[0] != 0 and _pairs_ok(word[1:], k)


def is_strongly_alternating(t: tuple, k: int) -> bool:
    """Strong alternation of a tensor ``h_0 (x) ... (x) h_r``.

    Strong alternation is invariant under the diagonal action, so only the bar
    word matters.
    """
    return is_strongly_alternating_word(tensor_to_bar(t, k)[1], k)


@lru_cache(maxsize=None)
def f_word(word: tuple, k: int, ring: RingSpec = Z) -> GroupRingElement:
    """Value of the chain map on the bar basis element ``[word]``."""
    r = len(word)
    if r % 2 == 0:
        if _pairs_ok(word, k):
            return GroupRingElement.one(k, ring)
        return GroupRingElement.zero(k, ring)
    rest = f_word(word[1:], k, ring)
    if rest.is_zero():
        return rest
    return sigma_r(k, word[0], ring) * rest


def f_tensor(t: tuple, k: int, ring: RingSpec = Z) -> GroupRingElement:
    lead, word = tensor_to_bar(t, k)
    return f_word(word, k, ring).shift(lead)


@dataclass
class StandardChain:
    """Element of S_r written in the bar basis with group ring coefficients."""

    k: int
    ring: RingSpec
    degree: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            w = tuple(a % self.k for a in w)
            if len(w) != self.degree:
                raise DimensionMismatch(f"word {w} has degree {len(w)}, chain has degree {self.degree}")
            if not c.is_zero():
                clean[w] = clean[w] + c if w in clean else c
        self.terms = {w: clean[w] for w in sorted(clean) if not clean[w].is_zero()}

    @classmethod
    def basis(cls, word: Iterable[int], k: int, ring: RingSpec = Z) -> "StandardChain":
        word = tuple(word)
        return cls(k, ring, len(word), {word: GroupRingElement.one(k, ring)})

    @classmethod
    def from_tensor(cls, t: tuple, k: int, ring: RingSpec = Z, coeff: int = 1) -> "StandardChain":
        lead, word = tensor_to_bar(t, k)
        return cls(k, ring, len(word), {word: GroupRingElement.group(k, lead, ring).scale(coeff)})

    def zero_like(self, degree: int | None = None) -> "StandardChain":
        return StandardChain(self.k, self.ring, self.degree if degree is None else degree)

    def _check(self, other: "StandardChain"):
        if (self.k, self.ring, self.degree) != (other.k, other.ring, other.degree):
            raise DimensionMismatch("standard chains live in different modules")

    def __add__(self, other: "StandardChain") -> "StandardChain":
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] + c if w in terms else c
        return StandardChain(self.k, self.ring, self.degree, terms)

    def __neg__(self):
        return StandardChain(self.k, self.ring, self.degree, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def lmul(self, x: GroupRingElement) -> "StandardChain":
        """Left multiplication by a group ring element (the diagonal action)."""
        return StandardChain(self.k, self.ring, self.degree, {w: x * c for w, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, StandardChain):
            return NotImplemented
        return (self.k, self.ring, self.degree, self.terms) == (other.k, other.ring, other.degree, other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def to_tensors(self) -> dict:
        """R-linear expansion in the standard basis ``h_0 (x) ... (x) h_r``."""
        out: dict = {}
        for w, c in self.terms.items():
            for a, coeff in enumerate(c.coeffs):
                if coeff:
                    t = bar_to_tensor(a, w, self.k)
                    out[t] = self.ring.reduce(out.get(t, 0) + coeff)
        return {t: c for t, c in sorted(out.items()) if c}

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "ring": str(self.ring),
            "degree": self.degree,
            "terms": [{"word": list(w), "coeff": list(c.coeffs)} for w, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "StandardChain":
        try:
            k, ring = int(doc["k"]), RingSpec.parse(doc["ring"])
            terms: dict = {}
            for t in doc["terms"]:
                w = tuple(t["word"])
                c = GroupRingElement.from_coeffs(k, ring, t["coeff"])
                terms[w] = terms[w] + c if w in terms else c
            return cls(k, ring, int(doc["degree"]), terms)
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad standard chain document: {exc}") from exc


def bar_boundary(word: tuple, k: int, ring: RingSpec = Z) -> StandardChain:
    r = len(word)
    if r == 0:
        raise DegreeError("the bar boundary starts in degree 1; use augment() in degree 0")
    one = GroupRingElement.one(k, ring)
    terms: dict = {}

    def put(w, c):
        terms[w] = terms[w] + c if w in terms else c

    put(word[1:], GroupRingElement.group(k, word[0], ring))
    for i in range(1, r):
        merged = word[: i - 1] + ((word[i - 1] + word[i]) % k,) + word[i + 1 :]
        put(merged, one if i % 2 == 0 else -one)
    put(word[:-1], one if r % 2 == 0 else -one)
    return StandardChain(k, ring, r - 1, terms)


def standard_boundary(c: StandardChain) -> StandardChain:
    if c.degree == 0:
        raise DegreeError("the bar boundary starts in degree 1; use augment() in degree 0")
    out = c.zero_like(c.degree - 1)
    for w, coeff in c.terms.items():
        out = out + bar_boundary(w, c.k, c.ring).lmul(coeff)
    return out


@dataclass(frozen=True)
class MinimalElement:
    degree: int
    value: GroupRingElement


def f_map(c: StandardChain) -> MinimalElement:
    value = GroupRingElement.zero(c.k, c.ring)
    for w, coeff in c.terms.items():
        fw = f_word(w, c.k, c.ring)
        if not fw.is_zero():
            value = value + coeff * fw
    return MinimalElement(c.degree, value)


def minimal_boundary(x: MinimalElement) -> MinimalElement:
    if x.degree == 0:
        raise DegreeError("the minimal resolution boundary starts in degree 1")
    k, ring = x.value.k, x.value.ring
    m = sigma(k, ring) if x.degree % 2 == 0 else tau(k, ring)
    return MinimalElement(x.degree - 1, m * x.value)


def all_words(k: int, r: int):
    return itertools.product(range(k), repeat=r)


def verify_f_chain_map(k: int, max_degree: int, ring: RingSpec = Z, cap: int = DEFAULT_WORD_CAP) -> dict:
    """Check ``f(d w) = d f(w)`` on every bar word of degree 1..max_degree."""
    if k < 2 or max_degree < 1:
        raise DegreeError("need k >= 2 and max_degree >= 1")
    total = sum(k**r for r in range(1, max_degree + 1))
    if total > cap:
        raise SizeGuardError(f"{total} words exceed the enumeration cap {cap}")
    failures = []
    checked = 0
    for r in range(1, max_degree + 1):
        for w in all_words(k, r):
            lhs = minimal_boundary(f_map(StandardChain.basis(w, k, ring)))
            rhs = f_map(bar_boundary(w, k, ring))
            checked += 1
            if lhs.value != rhs.value:
                failures.append({"word": list(w), "d_f": list(lhs.value.coeffs), "f_d": list(rhs.value.coeffs)})
    return {"k": k, "max_degree": max_degree, "ring": str(ring), "checked": checked, "failures": failures}
