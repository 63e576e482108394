"""Exact Gaussian-rational scalars.

Every coefficient that reaches a trace or a sphere integral in this package is a
Gaussian rational a + b*i with a, b in Q.  Floats appear only in numeric
renderings and in the quantum-model module, never inside the symbol calculus.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RatLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "QQi"]


def _frac(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class QQi:
    """Gaussian rational re + im*i with exact Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @staticmethod
    def coerce(x: ScalarLike) -> "QQi":
        if isinstance(x, QQi):
            return x
        return QQi(_frac(x))

    def __add__(self, other: ScalarLike) -> "QQi":
        o = QQi.coerce(other)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "QQi":
        return QQi(-self.re, -self.im)

    def __sub__(self, other: ScalarLike) -> "QQi":
        return self + (-QQi.coerce(other))

    def __rsub__(self, other: ScalarLike) -> "QQi":
        return QQi.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            o = QQi.coerce(other)
            return QQi(self.re * o.re - self.im * o.im,
                       self.re * o.im + self.im * o.re)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "QQi":
        o = QQi.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * o.re + self.im * o.im) / d,
                   (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other: ScalarLike) -> "QQi":
        return QQi.coerce(other) / self

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, QQi)):
            o = QQi.coerce(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def conj(self) -> "QQi":
        return QQi(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    def trace(self) -> "QQi":
        # Scalars are their own trace; lets Multivector coefficients be traced
        # uniformly whether they are scalars or matrices.
        return self

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self) -> str:
        return f"QQi({self.re!s}, {self.im!s})"


ZERO = QQi()
ONE = QQi(Fraction(1))
I = QQi(Fraction(0), Fraction(1))


def qi(re: RatLike = 0, im: RatLike = 0) -> QQi:
    return QQi(_frac(re), _frac(im))


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or a decimal or integer literal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except ZeroDivisionError as exc:
        raise ValueError(f"zero denominator in {text!r}") from exc


def parse_complex_rational(text: str) -> QQi:
    """Parse strings like '2', '-3/2', 'i', '1+2i', '1/2-3/4i', '0.5+0.25i'."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if not s.endswith(("i", "I", "j", "J")):
        return QQi(parse_rational(s))
    body = s[:-1]
    # split off the real part at the last top-level +/- that is not a leading
    # sign and not part of a fraction or exponent
    split = -1
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE/+-":
            split = k
            break
    if split == -1:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:split], body[split:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return QQi(parse_rational(re_part), parse_rational(im_part))
