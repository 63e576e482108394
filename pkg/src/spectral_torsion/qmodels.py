"""Quantum models: noncommutative torus traces and the quantum-disc boundary.

This module is numeric by design (irrational deformation parameters, spectral
truncations); every check here carries an explicit tolerance, in contrast to
the exact symbol pipeline.

Torus: Weyl unitaries U^p, p in Z^n, with U^p U^q = exp(-i pi p.theta q) U^{p+q}
for an antisymmetric theta.  The canonical trace tau picks the p = 0
coefficient and is tracial because p.theta.p = 0; derivations act by
delta_j U^p = i p_j U^p.  The trace identity tau(k^alpha delta_j(k) k^beta) = 0
holds order by order in t for k = exp(t h), which is how it is tested.

Quantum disc: generators z, z* with z* z = q^2 z z* + (1 - q^2), represented
by the weighted shift pi(z) e_k = sqrt(1 - q^{2(k+1)}) e_{k+1}.  tau_1 is the
circle-symbol integral; tau_0 arises as the finite part of truncated traces
against two different eigenvalue-counting offsets (N + 3/2 and N + 1/2) whose
difference cancels against tau_1 exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import cmath
import math

import numpy as np


class ConvergenceError(RuntimeError):
    """Successive truncations disagree beyond tolerance."""


# noncommutative torus ---------------------------------------------------------

Mode = Tuple[int, ...]


def antisymmetric_theta(entries) -> Tuple[Tuple[float, ...], ...]:
    th = tuple(tuple(float(x) for x in row) for row in entries)
    n = len(th)
    for row in th:
        if len(row) != n:
            raise ValueError("theta must be square")
    for i in range(n):
        for j in range(n):
            if abs(th[i][j] + th[j][i]) > 1e-14:
                raise ValueError("theta must be antisymmetric")
    return th


class TorusElement:
    """Finite combination sum_p c_p U^p on the n-torus with deformation theta."""

    __slots__ = ("theta", "coeffs")

    def __init__(self, theta, coeffs: Optional[Dict[Mode, complex]] = None):
        self.theta = antisymmetric_theta(theta)
        self.coeffs: Dict[Mode, complex] = {}
        n = len(self.theta)
        if coeffs:
            for p, c in coeffs.items():
                if len(p) != n or not all(isinstance(x, int) for x in p):
                    raise ValueError(f"bad mode {p}")
                c = complex(c)
                if c != 0:
                    self.coeffs[tuple(p)] = c

    @property
    def dim(self) -> int:
        return len(self.theta)

    @staticmethod
    def weyl(theta, p: Mode, c: complex = 1.0) -> "TorusElement":
        return TorusElement(theta, {tuple(p): complex(c)})

    @staticmethod
    def zero(theta) -> "TorusElement":
        return TorusElement(theta)

    def _phase(self, p: Mode, q: Mode) -> complex:
        s = 0.0
        for i, pi_ in enumerate(p):
            if pi_:
                row = self.theta[i]
                s += pi_ * sum(row[j] * qj for j, qj in enumerate(q) if qj)
        return cmath.exp(-1j * math.pi * s)

    def __add__(self, other: "TorusElement") -> "TorusElement":
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            v = out.get(p, 0) + c
            if v:
                out[p] = v
            else:
                out.pop(p, None)
        return TorusElement(self.theta, out)

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + other.scale(-1)

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        out: Dict[Mode, complex] = {}
        for p, cp in self.coeffs.items():
            for q, cq in other.coeffs.items():
                r = tuple(a + b for a, b in zip(p, q))
                v = out.get(r, 0) + cp * cq * self._phase(p, q)
                if v:
                    out[r] = v
                else:
                    out.pop(r, None)
        return TorusElement(self.theta, out)

    def scale(self, s: complex) -> "TorusElement":
        return TorusElement(self.theta, {p: s * c for p, c in self.coeffs.items()})

    def adjoint(self) -> "TorusElement":
        # (U^p)* = U^{-p}: the Weyl phase exp(i pi p.theta.p) is 1 by antisymmetry
        return TorusElement(self.theta,
                            {tuple(-x for x in p): c.conjugate()
                             for p, c in self.coeffs.items()})

    def trace(self) -> complex:
        return self.coeffs.get((0,) * self.dim, 0j)

    def derive(self, j: int) -> "TorusElement":
        """delta_j: U^p -> i p_j U^p; j is 1-based."""
        if not (1 <= j <= self.dim):
            raise ValueError(f"derivation index {j} outside 1..{self.dim}")
        return TorusElement(self.theta,
                            {p: 1j * p[j - 1] * c for p, c in self.coeffs.items()})

    def norm1(self) -> float:
        return sum(abs(c) for c in self.coeffs.values())

    def distance(self, other: "TorusElement") -> float:
        return (self - other).norm1()

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        return self.distance(self.adjoint()) <= tol


def torus_mul(a: TorusElement, b: TorusElement) -> TorusElement:
    return a * b


def torus_trace(a: TorusElement) -> complex:
    return a.trace()


def torus_derive(a: TorusElement, j: int) -> TorusElement:
    return a.derive(j)


class FormalSeries:
    """Polynomial in a formal parameter t with TorusElement coefficients."""

    __slots__ = ("orders",)

    def __init__(self, orders: List[TorusElement]):
        if not orders:
            raise ValueError("need at least the constant order")
        self.orders = list(orders)

    @property
    def truncation(self) -> int:
        return len(self.orders) - 1

    def __mul__(self, other: "FormalSeries") -> "FormalSeries":
        k = min(self.truncation, other.truncation)
        theta = self.orders[0].theta
        out = [TorusElement.zero(theta) for _ in range(k + 1)]
        for i, a in enumerate(self.orders[:k + 1]):
            if not a.coeffs:
                continue
            for j, b in enumerate(other.orders[:k + 1 - i]):
                if b.coeffs:
                    out[i + j] = out[i + j] + a * b
        return FormalSeries(out)

    def derive(self, j: int) -> "FormalSeries":
        return FormalSeries([a.derive(j) for a in self.orders])


def torus_exp(h: TorusElement, scale: float, truncation: int) -> FormalSeries:
    """exp(scale * t * h) as a series in t up to the given order."""
    theta = h.theta
    one = TorusElement.weyl(theta, (0,) * h.dim, 1.0)
    orders = [one]
    term = one
    for k in range(1, truncation + 1):
        term = (term * h).scale(scale / k)
        orders.append(term)
    return FormalSeries(orders)


def torus_trace_identity(h: TorusElement, alpha: int, beta: int, j: int,
                         truncation: int, tol: float = 1e-12) -> float:
    """Residual of tau(k^alpha delta_j(k) k^beta) = 0, k = exp(t h), order by order.

    Returns the largest |tau| over t-orders 0..truncation; h must be
    self-adjoint so that k is a positive invertible element.
    """
    if not h.is_self_adjoint(tol):
        raise ValueError("h must be self-adjoint")
    ka = torus_exp(h, float(alpha), truncation)
    dk = torus_exp(h, 1.0, truncation).derive(j)
    kb = torus_exp(h, float(beta), truncation)
    prod = ka * dk * kb
    return max(abs(term.trace()) for term in prod.orders)


# quantum disc / SU_q(2) boundary ----------------------------------------------

@lru_cache(maxsize=None)
def _swap(q: float, c: int, a: int) -> Tuple[Tuple[int, int, complex], ...]:
    """Normal form of z*^c z^a as sum of z^{a'} z*^{c'} monomials."""
    if c == 0 or a == 0:
        return (((a, c), 1.0 + 0j),)
    out: Dict[Tuple[int, int], complex] = {}
    q2 = q * q
    # z*^c z^a = q^2 z*^{c-1} z (z* z^{a-1}) + (1 - q^2) z*^{c-1} z^{a-1}
    for (a2, c2), w in _swap(q, 1, a - 1):
        for (a3, c3), w2 in _swap(q, c - 1, a2 + 1):
            key = (a3, c3 + c2)
            out[key] = out.get(key, 0) + q2 * w * w2
    for (a4, c4), w in _swap(q, c - 1, a - 1):
        key = (a4, c4)
        out[key] = out.get(key, 0) + (1 - q2) * w
    return tuple(sorted(out.items()))


class QuantumDiscElement:
    """Polynomial in z, z* modulo z* z = q^2 z z* + (1 - q^2).

    Stored on the normal-form basis z^a z*^c (the (z*z)^b factor of the
    z^a (z*z)^b z*^c normal form expanded onto it).
    """

    __slots__ = ("q", "coeffs")

    def __init__(self, q: float, coeffs: Optional[Dict[Tuple[int, int], complex]] = None):
        if not (0 < q < 1):
            raise ValueError("q must lie in (0, 1)")
        self.q = float(q)
        self.coeffs: Dict[Tuple[int, int], complex] = {}
        if coeffs:
            for (a, c), v in coeffs.items():
                if a < 0 or c < 0:
                    raise ValueError(f"bad monomial {(a, c)}")
                v = complex(v)
                if v != 0:
                    self.coeffs[(a, c)] = v

    @staticmethod
    def one(q: float) -> "QuantumDiscElement":
        return QuantumDiscElement(q, {(0, 0): 1.0})

    @staticmethod
    def z(q: float) -> "QuantumDiscElement":
        return QuantumDiscElement(q, {(1, 0): 1.0})

    @staticmethod
    def zstar(q: float) -> "QuantumDiscElement":
        return QuantumDiscElement(q, {(0, 1): 1.0})

    def __add__(self, other: "QuantumDiscElement") -> "QuantumDiscElement":
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return QuantumDiscElement(self.q, out)

    def __sub__(self, other: "QuantumDiscElement") -> "QuantumDiscElement":
        return self + other.scale(-1)

    def __mul__(self, other: "QuantumDiscElement") -> "QuantumDiscElement":
        self._same(other)
        out: Dict[Tuple[int, int], complex] = {}
        for (a1, c1), v1 in self.coeffs.items():
            for (a2, c2), v2 in other.coeffs.items():
                for (am, cm), w in _swap(self.q, c1, a2):
                    key = (a1 + am, cm + c2)
                    s = out.get(key, 0) + v1 * v2 * w
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        return QuantumDiscElement(self.q, out)

    def power(self, k: int) -> "QuantumDiscElement":
        out = QuantumDiscElement.one(self.q)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, s: complex) -> "QuantumDiscElement":
        return QuantumDiscElement(self.q, {k: s * v for k, v in self.coeffs.items()})

    def adjoint(self) -> "QuantumDiscElement":
        return QuantumDiscElement(self.q,
                                  {(c, a): v.conjugate()
                                   for (a, c), v in self.coeffs.items()})

    def total_degree(self) -> int:
        return max((a + c for a, c in self.coeffs), default=0)

    def distance(self, other: "QuantumDiscElement") -> float:
        d = self - other
        return sum(abs(v) for v in d.coeffs.values())

    def _same(self, other: "QuantumDiscElement") -> None:
        if abs(self.q - other.q) > 0:
            raise ValueError("mixing different deformation parameters")


def zstar_z(q: float) -> QuantumDiscElement:
    return QuantumDiscElement.zstar(q) * QuantumDiscElement.z(q)


def disc_represent(x: QuantumDiscElement, n_trunc: int, q: Optional[float] = None) -> np.ndarray:
    """Truncated representation on span(e_0..e_N): pi(z) e_k = sqrt(1-q^{2(k+1)}) e_{k+1}.

    Operators are multiplied on an enlarged space and cut down afterwards, so
    entries inside the window are exactly those of the infinite representation.
    """
    q = x.q if q is None else q
    big = n_trunc + x.total_degree() + 2
    z_mat = np.zeros((big, big), dtype=complex)
    for k in range(big - 1):
        z_mat[k + 1, k] = math.sqrt(1.0 - q ** (2 * (k + 1)))
    zs_mat = z_mat.conj().T
    out = np.zeros((big, big), dtype=complex)
    for (a, c), v in x.coeffs.items():
        m = np.eye(big, dtype=complex)
        for _ in range(a):
            m = m @ z_mat
        for _ in range(c):
            m = m @ zs_mat
        out += v * m
    return out[:n_trunc + 1, :n_trunc + 1]


def _diag_weight(a: int, k: int, q: float) -> float:
    """<e_k| pi(z^a z*^a) |e_k> = prod_{i=0}^{a-1} (1 - q^{2(k-i)})."""
    w = 1.0
    for i in range(a):
        f = 1.0 - q ** (2 * (k - i))
        if f == 0.0:
            return 0.0
        w *= f
    return w


def disc_truncated_trace(x: QuantumDiscElement, n_trunc: int) -> complex:
    """Tr over e_0..e_N of the represented element; only z^a z*^a terms hit the
    diagonal.  Matches disc_represent(x, N).trace() exactly."""
    total = 0j
    for (a, c), v in x.coeffs.items():
        if a != c:
            continue
        total += v * sum(_diag_weight(a, k, x.q) for k in range(n_trunc + 1))
    return total


def tau1(x: QuantumDiscElement) -> complex:
    """Circle-symbol trace: sigma(z) is the unimodular coordinate, sigma(z*z) = 1,
    so (1/2pi) int sigma(z^a z*^c) = delta_{ac}."""
    return sum(v for (a, c), v in x.coeffs.items() if a == c)


def _tau0(x: QuantumDiscElement, n_trunc: int, offset: float,
          tol: float, check: bool) -> complex:
    val = disc_truncated_trace(x, n_trunc) - (n_trunc + offset) * tau1(x)
    if check:
        half = disc_truncated_trace(x, n_trunc // 2) - (n_trunc // 2 + offset) * tau1(x)
        if abs(val - half) > tol:
            raise ConvergenceError(
                f"tau0 truncations at N={n_trunc} and N={n_trunc // 2} differ by "
                f"{abs(val - half):.3e} (tol {tol:.1e})")
    return val


def tau0_up(x: QuantumDiscElement, n_trunc: int, tol: float = 1e-8,
            check: bool = True) -> complex:
    """lim_N [Tr_N pi(x) - (N + 3/2) tau1(x)], evaluated at truncation N."""
    return _tau0(x, n_trunc, 1.5, tol, check)


def tau0_dn(x: QuantumDiscElement, n_trunc: int, tol: float = 1e-8,
            check: bool = True) -> complex:
    """Same finite part with the (N + 1/2) counting offset."""
    return _tau0(x, n_trunc, 0.5, tol, check)


@dataclass(frozen=True)
class CancellationReport:
    tau1: complex
    tau0_up: complex
    tau0_dn: complex

    @property
    def residual(self) -> float:
        """|tau0_up - tau0_dn + tau1|; zero in exact arithmetic for every N."""
        return abs(self.tau0_up - self.tau0_dn + self.tau1)


def suq2_residue_cancellation(x: QuantumDiscElement, n_trunc: int,
                              tol: float = 1e-8) -> CancellationReport:
    """The boundary cancellation tau0_up - tau0_dn = -tau1 at truncation N."""
    return CancellationReport(tau1(x),
                              tau0_up(x, n_trunc, tol),
                              tau0_dn(x, n_trunc, tol))


def suq2_paired_combination(x: QuantumDiscElement, y: QuantumDiscElement,
                            n_trunc: int, tol: float = 1e-8) -> float:
    """|(tau1 (x) Delta - Delta (x) tau1)(x (x) y)| with Delta = tau0_up - tau0_dn."""
    dx = tau0_up(x, n_trunc, tol) - tau0_dn(x, n_trunc, tol)
    dy = tau0_up(y, n_trunc, tol) - tau0_dn(y, n_trunc, tol)
    return abs(tau1(x) * dy - dx * tau1(y))


class Suq2DiracSpec:
    """Eigenvalue data of the SU_q(2) Dirac operator: for half-integer j,
    up eigenvalue 2j + 3/2 with multiplicity (2j+1)(2j+2) and down eigenvalue
    -(2j + 1/2) with multiplicity (2j+1)(2j)."""

    @staticmethod
    def eigen_up(two_j: int) -> float:
        return two_j + 1.5

    @staticmethod
    def mult_up(two_j: int) -> int:
        return (two_j + 1) * (two_j + 2)

    @staticmethod
    def eigen_dn(two_j: int) -> float:
        return -(two_j + 0.5)

    @staticmethod
    def mult_dn(two_j: int) -> int:
        return (two_j + 1) * two_j

    @staticmethod
    def partial_zeta(s: float, j_max: float) -> float:
        """sum |lambda|^{-s} with multiplicities over j <= j_max."""
        total = 0.0
        for two_j in range(0, int(2 * j_max) + 1):
            total += Suq2DiracSpec.mult_up(two_j) * Suq2DiracSpec.eigen_up(two_j) ** (-s)
            if two_j >= 1:
                total += Suq2DiracSpec.mult_dn(two_j) * abs(Suq2DiracSpec.eigen_dn(two_j)) ** (-s)
        return total
