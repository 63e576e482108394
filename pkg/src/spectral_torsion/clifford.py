"""Exact complexified Clifford algebra Cl(R^n).

Generators g^1..g^n obey g^a g^b + g^b g^a = 2 delta^{ab}.  Elements are kept
in the canonical basis of strictly increasing index words, with coefficients in
any ring that supports +, *, QQi scalar action, trace() and truthiness (QQi
itself, exact matrices, ...).  The normalized trace is Tr(1) = 2^m with
m = n/2 for even n and m = (n+1)/2 for odd n; the odd case is the trace of the
doubled representation g -> diag(g, -g), under which every odd-length word
(epsilon-type words included) has trace zero, so the even-n pairing rule holds
verbatim in all dimensions.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Sequence, Tuple, Union

from .scalars import QQi, ScalarLike

IndexWord = Tuple[int, ...]


def _check_indices(indices: Sequence[int], dim: int) -> None:
    for a in indices:
        if not isinstance(a, int) or not (1 <= a <= dim):
            raise ValueError(f"gamma index {a!r} outside 1..{dim}")


def reduce_word(indices: Sequence[int]) -> Tuple[int, IndexWord]:
    """Reduce a gamma word to (sign, strictly increasing word).

    Repeated indices contract with delta = +1; each transposition flips the
    sign.  Pure index combinatorics, no coefficients.
    """
    out: list[int] = []
    sign = 1
    for x in indices:
        p = bisect_left(out, x)
        if p < len(out) and out[p] == x:
            # move x left until adjacent to its twin, then g g = 1
            if (len(out) - (p + 1)) % 2:
                sign = -sign
            out.pop(p)
        else:
            if (len(out) - p) % 2:
                sign = -sign
            out.insert(p, x)
    return sign, tuple(out)


@dataclass(frozen=True)
class GammaWord:
    """A scalar multiple of a product g^{a_1} ... g^{a_k}, not yet reduced."""

    indices: Tuple[int, ...]
    scalar: QQi = field(default_factory=lambda: QQi(Fraction(1)))

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "scalar", QQi.coerce(self.scalar))


class Multivector:
    """Finite sum of canonical words with ring coefficients.

    terms maps strictly increasing index tuples to nonzero coefficients; the
    empty tuple is the scalar slot.  Coefficients commute with the gammas
    (they act on an auxiliary space), so products multiply coefficients in
    encounter order and reduce words independently.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Dict[IndexWord, object] | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        self.terms: Dict[IndexWord, object] = {}
        if terms:
            for word, coeff in terms.items():
                _check_indices(word, dim)
                if list(word) != sorted(set(word)):
                    raise ValueError(f"non-canonical word {word}")
                if coeff:
                    self.terms[word] = coeff

    # constructors ---------------------------------------------------------
    @staticmethod
    def scalar(dim: int, value: ScalarLike | object) -> "Multivector":
        v = QQi.coerce(value) if isinstance(value, (int, Fraction, QQi)) else value
        return Multivector(dim, {(): v} if v else {})

    @staticmethod
    def unit(dim: int) -> "Multivector":
        return Multivector.scalar(dim, QQi(Fraction(1)))

    @staticmethod
    def gamma(dim: int, a: int) -> "Multivector":
        _check_indices([a], dim)
        return Multivector(dim, {(a,): QQi(Fraction(1))})

    # ring structure -------------------------------------------------------
    def _same_dim(self, other: "Multivector") -> None:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._same_dim(other)
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            acc = out.get(word)
            acc = coeff if acc is None else acc + coeff
            if acc:
                out[word] = acc
            else:
                out.pop(word, None)
        r = Multivector(self.dim)
        r.terms = out
        return r

    def __neg__(self) -> "Multivector":
        r = Multivector(self.dim)
        r.terms = {w: -c for w, c in self.terms.items()}
        return r

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            self._same_dim(other)
            out: Dict[IndexWord, object] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    sign, word = reduce_word(w1 + w2)
                    coeff = c1 * c2
                    if sign < 0:
                        coeff = -coeff
                    acc = out.get(word)
                    acc = coeff if acc is None else acc + coeff
                    if acc:
                        out[word] = acc
                    else:
                        out.pop(word, None)
            r = Multivector(self.dim)
            r.terms = out
            return r
        if isinstance(other, (int, Fraction, QQi)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            # QQi scalars commute with everything in sight
            return self.scale(other)
        return NotImplemented

    def scale(self, s: ScalarLike) -> "Multivector":
        s = QQi.coerce(s)
        r = Multivector(self.dim)
        if s:
            r.terms = {w: v for w, v in ((w, s * c) for w, c in self.terms.items()) if v}
        return r

    def scale_coeff(self, a: object) -> "Multivector":
        """Right-multiply every coefficient by a ring element."""
        r = Multivector(self.dim)
        r.terms = {w: v for w, v in ((w, c * a) for w, c in self.terms.items()) if v}
        return r

    # queries ----------------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Multivector):
            return self.dim == other.dim and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def coefficient(self, word: Sequence[int]) -> object:
        sign, canon = reduce_word(word)
        c = self.terms.get(canon)
        if c is None:
            return QQi()
        return c if sign > 0 else -c

    def scalar_part(self) -> object:
        return self.terms.get((), QQi())

    def grade(self, k: int) -> "Multivector":
        r = Multivector(self.dim)
        r.terms = {w: c for w, c in self.terms.items() if len(w) == k}
        return r

    def max_grade(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for word in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[word]
            name = "".join(f"g{a}" for a in word) or "1"
            bits.append(f"({c})*{name}")
        return " + ".join(bits)

    __repr__ = __str__


def canonicalize(word: GammaWord, dim: int) -> Multivector:
    """Reduce a raw gamma word to canonical multivector form."""
    _check_indices(word.indices, dim)
    sign, canon = reduce_word(word.indices)
    coeff = word.scalar if sign > 0 else -word.scalar
    return Multivector(dim, {canon: coeff} if coeff else {})


def mul(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def trace_power(dim: int) -> int:
    """m with Tr(1) = 2^m: n/2 for even n, (n+1)/2 (doubled rep) for odd n."""
    return (dim + 1) // 2


def clifford_trace(x: Multivector) -> object:
    """Normalized trace: 2^m times the trace of the scalar-slot coefficient.

    Words of grade >= 1 are traceless (for odd n this is the doubled
    representation's trace), so only the empty word contributes.
    """
    return (2 ** trace_power(x.dim)) * x.scalar_part().trace()


def chirality(dim: int) -> Multivector:
    """(-i)^{n/2} g^1 ... g^n for even n; squares to +1."""
    if dim % 2:
        raise ValueError("chirality requires even dimension")
    phase = QQi(Fraction(1))
    minus_i = QQi(Fraction(0), Fraction(-1))
    for _ in range(dim // 2):
        phase = phase * minus_i
    return Multivector(dim, {tuple(range(1, dim + 1)): phase})


def clifford_action(components: Sequence[ScalarLike], dim: int) -> Multivector:
    """One-form action: sum_a u_a g^a, components listed for a = 1..n."""
    if len(components) != dim:
        raise ValueError(f"expected {dim} components, got {len(components)}")
    terms: Dict[IndexWord, object] = {}
    for a, ua in enumerate(components, start=1):
        c = QQi.coerce(ua) if isinstance(ua, (int, Fraction, QQi)) else ua
        if c:
            terms[(a,)] = c
    return Multivector(dim, terms)
