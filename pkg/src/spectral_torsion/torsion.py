"""Spectral torsion functionals via exact symbol calculus.

The central object is T(u, v, w) = W(u^ v^ w^ D_T |D_T|^{-n}): Clifford-act
three one-forms, multiply by the torsion Dirac operator, normalize by
|D_T|^{-n} and take the Wodzicki residue, i.e. integrate the degree -n symbol
over the unit cosphere and trace.  Everything is exact: Gaussian-rational
coefficients, symbolic sphere moments, the volume V(S^{n-1}) carried as a
unit.  Results are densities at the base point ("per unit volume"): the
global residue is this density integrated over the manifold.

The Dirac operator with torsion acts as D_T = D - (i/8) T_{jkl} g^j g^k g^l
for a totally antisymmetric torsion tensor T, giving the full symbol
sigma(D_T) = -g^j xi_j - (i/8) T_{jkl} g^j g^k g^l (plus an optional x-linear
Levi-Civita term used by the curvature-independence tests).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .clifford import (Multivector, chirality, clifford_action, clifford_trace,
                       trace_power)
from .scalars import QQi, ScalarLike, qi
from .symcalc import (HomogeneousSymbol, PiValue, SymbolSum, compose,
                      negative_power, parametrix, sphere_integrate,
                      sphere_volume, sqrt_symbol)

OmegaJet = Mapping[Tuple[int, int, int, int], Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {x!r}")


@dataclass(frozen=True)
class TorsionTensor:
    """Totally antisymmetric 3-tensor; entries stored on strictly increasing keys."""

    dim: int
    entries: Mapping[Tuple[int, int, int], Fraction]

    def __post_init__(self) -> None:
        clean: Dict[Tuple[int, int, int], Fraction] = {}
        for (a, b, c), v in self.entries.items():
            if not (1 <= a < b < c <= self.dim):
                raise ValueError(f"torsion key {(a, b, c)} not strictly increasing in 1..{self.dim}")
            v = _frac(v)
            if v:
                clean[(a, b, c)] = v
        object.__setattr__(self, "entries", clean)

    @staticmethod
    def zero(dim: int) -> "TorsionTensor":
        return TorsionTensor(dim, {})

    def get(self, i: int, j: int, k: int) -> Fraction:
        if len({i, j, k}) < 3:
            return Fraction(0)
        order = tuple(sorted((i, j, k)))
        base = self.entries.get(order, Fraction(0))
        if not base:
            return base
        # parity of the permutation taking sorted order to (i, j, k)
        perm = [order.index(x) for x in (i, j, k)]
        sign = 1
        for p in range(3):
            for q in range(p + 1, 3):
                if perm[p] > perm[q]:
                    sign = -sign
        return base if sign > 0 else -base

    def is_zero(self) -> bool:
        return not self.entries


@dataclass(frozen=True)
class ContorsionTensor:
    """3-tensor antisymmetric in the last two indices: t_{ijk} = -t_{ikj}.

    Also serves for frame-connection rotation coefficients, which share this
    symmetry.  Entries stored with j < k.
    """

    dim: int
    entries: Mapping[Tuple[int, int, int], Fraction]

    def __post_init__(self) -> None:
        clean: Dict[Tuple[int, int, int], Fraction] = {}
        for (i, j, k), v in self.entries.items():
            if not all(1 <= x <= self.dim for x in (i, j, k)) or not j < k:
                raise ValueError(f"contorsion key {(i, j, k)} must have 1 <= j < k <= {self.dim}")
            v = _frac(v)
            if v:
                clean[(i, j, k)] = v
        object.__setattr__(self, "entries", clean)

    def get(self, i: int, j: int, k: int) -> Fraction:
        if j == k:
            return Fraction(0)
        if j < k:
            return self.entries.get((i, j, k), Fraction(0))
        return -self.entries.get((i, k, j), Fraction(0))


@dataclass(frozen=True)
class FrameConnection:
    """Structure constants c_{ijk} of a frame: [e_i, e_j] = c_{ijk} e_k.

    Antisymmetric in the first two indices; entries stored with i < j.
    """

    dim: int
    entries: Mapping[Tuple[int, int, int], Fraction]

    def __post_init__(self) -> None:
        clean: Dict[Tuple[int, int, int], Fraction] = {}
        for (i, j, k), v in self.entries.items():
            if not all(1 <= x <= self.dim for x in (i, j, k)) or not i < j:
                raise ValueError(f"structure key {(i, j, k)} must have 1 <= i < j <= {self.dim}")
            v = _frac(v)
            if v:
                clean[(i, j, k)] = v
        object.__setattr__(self, "entries", clean)

    def get(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.entries.get((i, j, k), Fraction(0))
        return -self.entries.get((j, i, k), Fraction(0))


def contorsion_from_torsion(t: TorsionTensor) -> ContorsionTensor:
    """tau_{ijk} = (T_{ijk} + T_{kij} + T_{kji}) / 2."""
    entries: Dict[Tuple[int, int, int], Fraction] = {}
    rng = range(1, t.dim + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                if j < k:
                    v = (t.get(i, j, k) + t.get(k, i, j) + t.get(k, j, i)) / 2
                    if v:
                        entries[(i, j, k)] = v
    return ContorsionTensor(t.dim, entries)


def torsion_components_from_contorsion(tau: ContorsionTensor) -> Dict[Tuple[int, int, int], Fraction]:
    """All components of T_{ijk} = tau_{ijk} - tau_{jik}.

    The result is antisymmetric in the first two indices for every admissible
    tau; it is totally antisymmetric exactly when tau arises from a totally
    antisymmetric torsion.
    """
    out: Dict[Tuple[int, int, int], Fraction] = {}
    rng = range(1, tau.dim + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                v = tau.get(i, j, k) - tau.get(j, i, k)
                if v:
                    out[(i, j, k)] = v
    return out


def torsion_from_contorsion(tau: ContorsionTensor) -> TorsionTensor:
    """Recover the totally antisymmetric torsion; rejects contorsions that
    do not come from one."""
    comp = torsion_components_from_contorsion(tau)
    entries: Dict[Tuple[int, int, int], Fraction] = {}
    for (i, j, k), v in comp.items():
        if len({i, j, k}) < 3:
            if v:
                raise ValueError("contorsion does not yield a totally antisymmetric torsion")
            continue
        if i < j < k:
            entries[(i, j, k)] = v
    t = TorsionTensor(tau.dim, entries)
    for key, v in comp.items():
        if t.get(*key) != v:
            raise ValueError("contorsion does not yield a totally antisymmetric torsion")
    return t


def levi_civita_from_structure(c: FrameConnection) -> ContorsionTensor:
    """Levi-Civita rotation coefficients omega_{ijk} = (c_{ijk} + c_{kij} + c_{kji}) / 2."""
    entries: Dict[Tuple[int, int, int], Fraction] = {}
    rng = range(1, c.dim + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                if j < k:
                    v = (c.get(i, j, k) + c.get(k, i, j) + c.get(k, j, i)) / 2
                    if v:
                        entries[(i, j, k)] = v
    return ContorsionTensor(c.dim, entries)


@dataclass(frozen=True)
class OneForm:
    """Scalar one-form at the base point: components u_a for a = 1..n."""

    dim: int
    components: Tuple[QQi, ...]

    def __post_init__(self) -> None:
        comps = tuple(QQi.coerce(x) for x in self.components)
        if len(comps) != self.dim:
            raise ValueError(f"expected {self.dim} components")
        object.__setattr__(self, "components", comps)

    @staticmethod
    def frame(dim: int, a: int) -> "OneForm":
        if not (1 <= a <= dim):
            raise ValueError(f"frame index {a} outside 1..{dim}")
        return OneForm(dim, tuple(QQi(Fraction(int(i == a))) for i in range(1, dim + 1)))

    def action(self) -> Multivector:
        return clifford_action(self.components, self.dim)


@dataclass(frozen=True)
class ResidueValue:
    """Exact residue density: mult * V(S^{n-1})^vpow, mult a Gaussian rational."""

    mult: QQi
    dim: int
    vpow: int = 1

    def pi_form(self) -> Tuple[QQi, int]:
        """Normalize to (Gaussian rational, pi power)."""
        coeff, pipow = self.mult, 0
        if self.vpow:
            v = sphere_volume(self.dim)
            coeff = coeff * (v.rational ** self.vpow)
            pipow = v.pipow * self.vpow
        return coeff, pipow

    def is_zero(self) -> bool:
        return not self.mult

    def __eq__(self, other) -> bool:
        if isinstance(other, ResidueValue):
            return self.dim == other.dim and self.pi_form() == other.pi_form()
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dim,) + self.pi_form())

    def __add__(self, other: "ResidueValue") -> "ResidueValue":
        if self.dim != other.dim or self.vpow != other.vpow:
            raise ValueError("incompatible residue values")
        return ResidueValue(self.mult + other.mult, self.dim, self.vpow)

    def scale(self, s: ScalarLike) -> "ResidueValue":
        return ResidueValue(self.mult * QQi.coerce(s), self.dim, self.vpow)

    def to_complex(self) -> complex:
        from math import pi
        coeff, pipow = self.pi_form()
        return coeff.to_complex() * pi ** pipow

    def __str__(self) -> str:
        coeff, pipow = self.pi_form()
        unit = "" if pipow == 0 else ("*pi" if pipow == 1 else f"*pi^{pipow}")
        return f"({self.mult})*V(S^{self.dim - 1}) = ({coeff}){unit} ~ {self.to_complex():.12g}"


# Dirac symbol and the residue pipeline --------------------------------------

def torsion_form_multivector(t: TorsionTensor) -> Multivector:
    """sum_{jkl} T_{jkl} g^j g^k g^l as a canonical multivector."""
    out = Multivector(t.dim)
    for (a, b, c) in t.entries:
        for p in permutations((a, b, c)):
            out = out + (Multivector.gamma(t.dim, p[0]) * Multivector.gamma(t.dim, p[1])
                         * Multivector.gamma(t.dim, p[2])).scale(t.get(*p))
    return out


def dirac_symbol(t: TorsionTensor, dim: int,
                 omega_jet: Optional[OmegaJet] = None) -> SymbolSum:
    """Full symbol of D_T in normal coordinates at the base point.

    Degree 1: -g^j xi_j.  Degree 0: -(i/8) T_{jkl} g^j g^k g^l, plus the
    x-linear Levi-Civita part -(i/4) omega_{jkl;s} g^j g^k g^l x_s when a
    connection jet is supplied (it cannot change the residue; tests prove so).
    """
    if t.dim != dim:
        raise ValueError("torsion dimension mismatch")
    deg1 = HomogeneousSymbol(dim, 1)
    for j in range(1, dim + 1):
        alpha = tuple(int(l == j) for l in range(1, dim + 1))
        deg1._merge((alpha, 0, 0), Multivector.gamma(dim, j).scale(-1))
    deg0 = HomogeneousSymbol(dim, 0)
    theta = torsion_form_multivector(t).scale(qi(0, Fraction(-1, 8)))
    if theta:
        deg0._merge(((0,) * dim, 0, 0), theta)
    if omega_jet:
        per_s: Dict[int, Multivector] = {}
        for (j, k, l, s), v in omega_jet.items():
            if not all(1 <= x <= dim for x in (j, k, l, s)):
                raise ValueError(f"connection jet index {(j, k, l, s)} outside 1..{dim}")
            word = (Multivector.gamma(dim, j) * Multivector.gamma(dim, k)
                    * Multivector.gamma(dim, l)).scale(qi(0, Fraction(-1, 4)) * Fraction(v))
            per_s[s] = per_s.get(s, Multivector(dim)) + word
        for s, mv in per_s.items():
            if mv:
                deg0._merge(((0,) * dim, 0, s), mv)
    parts = {1: deg1}
    if deg0:
        parts[0] = deg0
    return SymbolSum(dim, parts, budget=2)


def inverse_power_symbol(t: TorsionTensor, dim: int,
                         omega_jet: Optional[OmegaJet] = None) -> SymbolSum:
    """Symbol of |D_T|^{-n} to two leading degrees.

    Even n: the (n/2)-fold composed parametrix of D_T^2.  Odd n: the
    ((n-1)/2)-power composed with the parametrix of sqrt(D_T^2).
    """
    d = dirac_symbol(t, dim, omega_jet)
    d2 = compose(d, d, 2)
    if dim % 2 == 0:
        return negative_power(d2, dim // 2, 2)
    half = negative_power(d2, (dim - 1) // 2, 2) if dim > 1 else None
    inv_sqrt = parametrix(sqrt_symbol(d2, 2), 2)
    if half is None:
        return inv_sqrt
    return compose(half, inv_sqrt, 2)


def _zero_order_symbol(mv: Multivector, budget: int = 2) -> SymbolSum:
    return SymbolSum(mv.dim, {0: HomogeneousSymbol(mv.dim, 0, {((0,) * mv.dim, 0, 0): mv})},
                     budget) if mv else SymbolSum(mv.dim, {}, budget)


def residue_of_symbol(sym: SymbolSum, dim: int) -> ResidueValue:
    """Wodzicki residue density of an order >= -n symbol: integrate and trace
    the degree -n component.  Rejects symbols whose tracked window misses -n."""
    if sym.parts:
        lead = sym.leading_degree
        if not (lead >= -dim > lead - sym.budget):
            raise ValueError(f"degree -{dim} component not tracked (leading {lead}, "
                             f"budget {sym.budget})")
    comp = sym.component(-dim)
    integrated = sphere_integrate(comp)
    mult = clifford_trace(integrated)
    if not isinstance(mult, QQi):
        raise TypeError("residue trace did not reduce to a scalar")
    return ResidueValue(mult, dim)


def torsion_functional(u: OneForm, v: OneForm, w: OneForm, t: TorsionTensor,
                       dim: int, omega_jet: Optional[OmegaJet] = None) -> ResidueValue:
    """W(u^ v^ w^ D_T |D_T|^{-n}) as an exact density, full symbol pipeline."""
    if not (u.dim == v.dim == w.dim == t.dim == dim):
        raise ValueError("dimension mismatch among inputs")
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    lead = _zero_order_symbol(u.action() * v.action() * w.action())
    d = dirac_symbol(t, dim, omega_jet)
    pw = inverse_power_symbol(t, dim, omega_jet)
    full = compose(lead, compose(d, pw, 2), 2)
    return residue_of_symbol(full, dim)


def torsion_contraction(u: OneForm, v: OneForm, w: OneForm, t: TorsionTensor) -> QQi:
    """sum_{abc} u_a v_b w_c T_{abc}, exact."""
    out = QQi()
    rng = range(1, t.dim + 1)
    for a in rng:
        ua = u.components[a - 1]
        if not ua:
            continue
        for b in rng:
            vb = v.components[b - 1]
            if not vb:
                continue
            for c in rng:
                wc = w.components[c - 1]
                if wc:
                    out = out + ua * vb * wc * t.get(a, b, c)
    return out


def closed_form_torsion(u: OneForm, v: OneForm, w: OneForm, t: TorsionTensor,
                        dim: int) -> ResidueValue:
    """The closed-form candidate -2^m i V(S^{n-1}) sum u_a v_b w_c T_{abc}.

    Note: this constant does NOT reproduce the symbol pipeline; the calculus
    yields pipeline_coefficient(dim) = -3 * 2^(m-1) i, a factor 3/2 larger in
    magnitude (see README).  Kept as stated so the discrepancy is visible.
    """
    mult = qi(0, -(2 ** trace_power(dim))) * torsion_contraction(u, v, w, t)
    return ResidueValue(mult, dim)


def pipeline_coefficient(dim: int) -> QQi:
    """Constant c(n) with torsion_functional = c(n) * contraction * V(S^{n-1}).

    The symbol pipeline produces c(n) = -3 * 2^(m-1) * i (m as in Tr(1) = 2^m)
    for every n >= 3; the unit tests pin this against independent gamma-matrix
    oracles.  It differs from closed_form_torsion's -2^m i by a factor 3/2.
    """
    return qi(0, Fraction(-3 * 2 ** (trace_power(dim) - 1)))


def chirality_functional(u: OneForm, t: TorsionTensor, dim: int = 4) -> ResidueValue:
    """W(chi u^ D_T |D_T|^{-4}) with chi the chirality element; n = 4 only."""
    if dim != 4:
        raise ValueError("chirality functional is defined for n = 4")
    if u.dim != 4 or t.dim != 4:
        raise ValueError("dimension mismatch among inputs")
    lead = _zero_order_symbol(chirality(dim) * u.action())
    d = dirac_symbol(t, dim)
    pw = inverse_power_symbol(t, dim)
    full = compose(lead, compose(d, pw, 2), 2)
    return residue_of_symbol(full, dim)


def spectral_closedness_check(p: Multivector, dim: int) -> ResidueValue:
    """W(P D |D|^{-n}) for a zero-order P and the torsion-free D; exactly 0."""
    if p.dim != dim:
        raise ValueError("dimension mismatch")
    t0 = TorsionTensor.zero(dim)
    lead = _zero_order_symbol(p)
    d = dirac_symbol(t0, dim)
    pw = inverse_power_symbol(t0, dim)
    full = compose(lead, compose(d, pw, 2), 2)
    return residue_of_symbol(full, dim)


def metric_functional(u: OneForm, v: OneForm, dim: int) -> ResidueValue:
    """W(u^ v^ D^{-n}) for even n: equals 2^m V(S^{n-1}) u.v."""
    if dim % 2:
        raise ValueError("metric functional requires even dimension")
    if u.dim != dim or v.dim != dim:
        raise ValueError("dimension mismatch among inputs")
    lead = _zero_order_symbol(u.action() * v.action())
    pw = inverse_power_symbol(TorsionTensor.zero(dim), dim)
    return residue_of_symbol(compose(lead, pw, 2), dim)


def volume_functional(f: ScalarLike, dim: int) -> ResidueValue:
    """W(f D^{-n}) for even n and a scalar f: equals 2^m V(S^{n-1}) f."""
    if dim % 2:
        raise ValueError("volume functional requires even dimension")
    lead = _zero_order_symbol(Multivector.scalar(dim, QQi.coerce(f)))
    pw = inverse_power_symbol(TorsionTensor.zero(dim), dim)
    return residue_of_symbol(compose(lead, pw, 2), dim)
