"""Exact arithmetic in the group ring R[Z_k] for R = Z or R = Z/m.

Elements are stored as length-k coefficient tuples, ``coeffs[a]`` being the
coefficient of ``g**a``.  Coefficients are Python ints, so nothing ever
overflows; modular coefficients are kept in canonical form ``[0, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, DomainError, FormatError


@dataclass(frozen=True)
class RingSpec:
    """Coefficient ring: the integers (``modulus=None``) or Z/m."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise DomainError(f"modulus must be >= 2, got {self.modulus}")

    @classmethod
    def mod(cls, m: int) -> "RingSpec":
        return cls(int(m))

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Accepts ``Z``, ``Z/m`` and ``Zmod:m``."""
        text = text.strip()
        if text == "Z":
            return cls()
        for prefix in ("Z/", "Zmod:"):
            if text.startswith(prefix):
                try:
                    return cls(int(text[len(prefix):]))
                except ValueError:
                    break
        raise FormatError(f"unknown ring {text!r}")

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    def reduce(self, value: int) -> int:
        if self.modulus is None:
            return int(value)
        return int(value) % self.modulus

    def is_zero(self, value: int) -> bool:
        return self.reduce(value) == 0

    def k_is_nonunit(self, k: int) -> bool:
        """True iff kR != R."""
        if self.modulus is None:
            return k != 1 and k != -1
        from math import gcd

        return gcd(k, self.modulus) != 1

    def __str__(self) -> str:
        return "Z" if self.modulus is None else f"Z/{self.modulus}"


Z = RingSpec()


@dataclass(frozen=True)
class GroupRingElement:
    k: int
    ring: RingSpec
    coeffs: tuple

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"k must be >= 2, got {self.k}")
        if len(self.coeffs) != self.k:
            raise DimensionMismatch(f"expected {self.k} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_coeffs(cls, k: int, ring: RingSpec, coeffs: Iterable[int]) -> "GroupRingElement":
        return cls(k, ring, tuple(ring.reduce(c) for c in coeffs))

    @classmethod
    def zero(cls, k: int, ring: RingSpec = Z) -> "GroupRingElement":
        return cls(k, ring, (0,) * k)

    @classmethod
    def group(cls, k: int, a: int, ring: RingSpec = Z) -> "GroupRingElement":
        """The group element g**a (exponent taken mod k)."""
        c = [0] * k
        c[a % k] = ring.reduce(1)
        return cls(k, ring, tuple(c))

    @classmethod
    def one(cls, k: int, ring: RingSpec = Z) -> "GroupRingElement":
        return cls.group(k, 0, ring)

    def _check(self, other: "GroupRingElement"):
        if not isinstance(other, GroupRingElement):
            raise TypeError(f"cannot combine group ring element with {type(other).__name__}")
        if other.k != self.k or other.ring != self.ring:
            raise DimensionMismatch(
                f"group ring mismatch: ({self.k}, {self.ring}) vs ({other.k}, {other.ring})"
            )

    def __add__(self, other):
        self._check(other)
        r = self.ring
        return GroupRingElement(self.k, r, tuple(r.reduce(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        r = self.ring
        return GroupRingElement(self.k, r, tuple(r.reduce(a - b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        r = self.ring
        return GroupRingElement(self.k, r, tuple(r.reduce(-a) for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        k = self.k
        out = [0] * k
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % k] += a * b
        return GroupRingElement.from_coeffs(k, self.ring, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: int) -> "GroupRingElement":
        r = self.ring
        return GroupRingElement(self.k, r, tuple(r.reduce(c * a) for a in self.coeffs))

    def shift(self, a: int) -> "GroupRingElement":
        """Multiply by g**a; cheaper than a full convolution."""
        k = self.k
        a %= k
        return GroupRingElement(self.k, self.ring, self.coeffs[-a:] + self.coeffs[:-a] if a else self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def to_json(self) -> dict:
        return {"k": self.k, "ring": str(self.ring), "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, doc: dict) -> "GroupRingElement":
        try:
            return cls.from_coeffs(int(doc["k"]), RingSpec.parse(doc["ring"]), doc["coeffs"])
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad group ring element: {doc!r}") from exc

    def __repr__(self):
        terms = []
        for a, c in enumerate(self.coeffs):
            if c:
                g = "e" if a == 0 else ("g" if a == 1 else f"g^{a}")
                terms.append(g if c == 1 else f"{c}{g}")
        return f"<{' + '.join(terms) or '0'} in {self.ring}[Z_{self.k}]>"


def sigma_r(k: int, r: int, ring: RingSpec = Z) -> GroupRingElement:
    """e + g + ... + g**(r-1)."""
    if not 0 <= r <= k:
        raise DomainError(f"sigma_r needs 0 <= r <= k, got r={r}, k={k}")
    return GroupRingElement.from_coeffs(k, ring, [1 if a < r else 0 for a in range(k)])


def tau_r(k: int, r: int, ring: RingSpec = Z) -> GroupRingElement:
    """g**r - e."""
    if not 0 <= r <= k:
        raise DomainError(f"tau_r needs 0 <= r <= k, got r={r}, k={k}")
    c = [0] * k
    c[r % k] += 1
    c[0] -= 1
    return GroupRingElement.from_coeffs(k, ring, c)


def sigma(k: int, ring: RingSpec = Z) -> GroupRingElement:
    return sigma_r(k, k, ring)


def tau(k: int, ring: RingSpec = Z) -> GroupRingElement:
    return tau_r(k, 1, ring)


def special_element(k: int, ring: RingSpec, which: str, arg: int) -> GroupRingElement:
    """``which`` is one of ``sigma_r``, ``tau_r`` or ``group``."""
    if which == "sigma_r":
        return sigma_r(k, arg, ring)
    if which == "tau_r":
        return tau_r(k, arg, ring)
    if which == "group":
        if not 0 <= arg < k:
            raise DomainError(f"group exponent must lie in [0, {k}), got {arg}")
        return GroupRingElement.group(k, arg, ring)
    raise DomainError(f"unknown special element {which!r}")


def evaluate(x: GroupRingElement, j: int = 0) -> int:
    """Coefficient of g**j; ``j = 0`` is the evaluation at the neutral element."""
    if not 0 <= j < x.k:
        raise DomainError(f"evaluation index must lie in [0, {x.k}), got {j}")
    return x.coeffs[j]


def augment(x: GroupRingElement) -> int:
    return x.ring.reduce(sum(x.coeffs))


def coords_in_basis(x: GroupRingElement, basis: str) -> tuple:
    """Coordinates of ``x`` in the basis ``T = (e, tau_1, ..., tau_{k-1})`` or
    ``Sigma = (sigma_1, ..., sigma_k)``.

    Both change-of-basis matrices are unitriangular over Z, hence invertible
    over every Z/m as well.
    """
    r, c = x.ring, x.coeffs
    if basis == "T":
        return (augment(x),) + tuple(c[1:])
    if basis == "Sigma":
        ext = c + (0,)
        return tuple(r.reduce(ext[i] - ext[i + 1]) for i in range(x.k))
    raise DomainError(f"unknown basis {basis!r}")


def from_coords(k: int, ring: RingSpec, coords: Sequence[int], basis: str) -> GroupRingElement:
    if len(coords) != k:
        raise DimensionMismatch(f"expected {k} coordinates, got {len(coords)}")
    if basis == "T":
        elems = [GroupRingElement.one(k, ring)] + [tau_r(k, i, ring) for i in range(1, k)]
    elif basis == "Sigma":
        elems = [sigma_r(k, i, ring) for i in range(1, k + 1)]
    else:
        raise DomainError(f"unknown basis {basis!r}")
    out = GroupRingElement.zero(k, ring)
    for c, b in zip(coords, elems):
        out = out + b.scale(c)
    return out
