"""Exact complex-rational matrices.

Coefficient algebras for symbols (matrix algebras M_N, endomorphism algebras of
M_N) are represented as square matrices with QQi entries.  The interface
matches what the Clifford layer expects from a coefficient: ring arithmetic,
scalar action by QQi, a trace() method and truthiness as a zero test.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .scalars import QQi, ScalarLike


@dataclass(frozen=True)
class MatrixQQ:
    rows: Tuple[Tuple[QQi, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        rows = tuple(tuple(QQi.coerce(x) for x in r) for r in self.rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @staticmethod
    def from_rows(rows: Iterable[Sequence[ScalarLike]]) -> "MatrixQQ":
        return MatrixQQ(tuple(tuple(QQi.coerce(x) for x in r) for r in rows))

    @staticmethod
    def zero(n: int) -> "MatrixQQ":
        z = QQi()
        return MatrixQQ(tuple(tuple(z for _ in range(n)) for _ in range(n)))

    @staticmethod
    def identity(n: int) -> "MatrixQQ":
        return MatrixQQ(tuple(tuple(QQi(Fraction(int(i == j))) for j in range(n))
                              for i in range(n)))

    @staticmethod
    def unit(n: int, i: int, j: int) -> "MatrixQQ":
        """Matrix unit E_ij (0-based)."""
        return MatrixQQ(tuple(tuple(QQi(Fraction(int(r == i and c == j)))
                                    for c in range(n)) for r in range(n)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def __add__(self, other: "MatrixQQ") -> "MatrixQQ":
        return MatrixQQ(tuple(tuple(a + b for a, b in zip(ra, rb))
                              for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self) -> "MatrixQQ":
        return MatrixQQ(tuple(tuple(-a for a in r) for r in self.rows))

    def __sub__(self, other: "MatrixQQ") -> "MatrixQQ":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MatrixQQ):
            n = self.size
            cols = tuple(zip(*other.rows))
            return MatrixQQ(tuple(
                tuple(sum((a * b for a, b in zip(row, col)), QQi())
                      for col in cols)
                for row in self.rows))
        if isinstance(other, (int, Fraction, QQi)):
            s = QQi.coerce(other)
            return MatrixQQ(tuple(tuple(a * s for a in r) for r in self.rows))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            return self * other
        return NotImplemented

    def __bool__(self) -> bool:
        return any(any(x for x in r) for r in self.rows)

    def __eq__(self, other) -> bool:
        if isinstance(other, MatrixQQ):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.rows)

    def trace(self) -> QQi:
        return sum((self.rows[i][i] for i in range(self.size)), QQi())

    def conj_transpose(self) -> "MatrixQQ":
        return MatrixQQ(tuple(tuple(self.rows[j][i].conj()
                                    for j in range(self.size))
                              for i in range(self.size)))

    def is_anti_hermitian(self) -> bool:
        return self.conj_transpose() == -self

    def entry(self, i: int, j: int) -> QQi:
        return self.rows[i][j]
