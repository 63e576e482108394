"""Pseudodifferential symbol calculus at a point, in normal coordinates.

A homogeneous symbol of degree d is a finite sum of terms

    coeff * xi^alpha * ||xi||^rho * (1 or x_j)      with |alpha| + rho = d,

where coeff is a Multivector (Clifford element with ring coefficients), alpha
is an exponent multi-index and rho an integer power of the Euclidean norm.
x-dependence is kept as a jet of order 1: a term either has no x factor or a
single linear factor x_j.  Products of two x-linear terms leave the truncated
class and are dropped; since evaluation happens at x = 0 and curvature enters
the metric only at x-order 2, the truncation is exact for every degree kept by
the budgets used here.

Composition follows sigma(AB) = sum_alpha (1/alpha!) d_xi^alpha A . (-i d_x)^alpha B;
with order-1 jets only |alpha| <= 1 contributes, exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .clifford import Multivector
from .scalars import QQi

TermKey = Tuple[Tuple[int, ...], int, int]   # (alpha, rho, xj); xj = 0 means none
MINUS_I = QQi(Fraction(0), Fraction(-1))


def _check_key(key: TermKey, dim: int) -> None:
    alpha, rho, xj = key
    if len(alpha) != dim or any(a < 0 for a in alpha):
        raise ValueError(f"bad exponent multi-index {alpha}")
    if not (0 <= xj <= dim):
        raise ValueError(f"bad x index {xj}")
    del rho


class HomogeneousSymbol:
    """Single homogeneity component; terms maps TermKey -> Multivector."""

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int,
                 terms: Optional[Mapping[TermKey, Multivector]] = None):
        self.dim = dim
        self.degree = degree
        self.terms: Dict[TermKey, Multivector] = {}
        if terms:
            for key, mv in terms.items():
                _check_key(key, dim)
                alpha, rho, _ = key
                if sum(alpha) + rho != degree:
                    raise ValueError(f"term {key} is not homogeneous of degree {degree}")
                if mv.dim != dim:
                    raise ValueError("coefficient dimension mismatch")
                if mv:
                    self.terms[key] = mv

    @staticmethod
    def zero(dim: int, degree: int) -> "HomogeneousSymbol":
        return HomogeneousSymbol(dim, degree)

    @staticmethod
    def radial(dim: int, rho: int, coeff: Multivector) -> "HomogeneousSymbol":
        """coeff * ||xi||^rho."""
        return HomogeneousSymbol(dim, rho, {((0,) * dim, rho, 0): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _merge(self, key: TermKey, mv: Multivector) -> None:
        acc = self.terms.get(key)
        acc = mv if acc is None else acc + mv
        if acc:
            self.terms[key] = acc
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "HomogeneousSymbol") -> "HomogeneousSymbol":
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ValueError("cannot add symbols of different degree or dimension")
        out = HomogeneousSymbol(self.dim, self.degree, self.terms)
        for key, mv in other.terms.items():
            out._merge(key, mv)
        return out

    def __neg__(self) -> "HomogeneousSymbol":
        out = HomogeneousSymbol(self.dim, self.degree)
        out.terms = {k: -mv for k, mv in self.terms.items()}
        return out

    def __sub__(self, other: "HomogeneousSymbol") -> "HomogeneousSymbol":
        return self + (-other)

    def scale(self, s) -> "HomogeneousSymbol":
        out = HomogeneousSymbol(self.dim, self.degree)
        out.terms = {k: v for k, v in ((k, mv.scale(s)) for k, mv in self.terms.items()) if v}
        return out

    def at_x0(self) -> "HomogeneousSymbol":
        """Evaluate the jet at the base point: drop x-linear terms."""
        out = HomogeneousSymbol(self.dim, self.degree)
        out.terms = {k: mv for k, mv in self.terms.items() if k[2] == 0}
        return out


def hs_mul(a: HomogeneousSymbol, b: HomogeneousSymbol) -> HomogeneousSymbol:
    """Pointwise product (the |alpha| = 0 part of composition)."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    out = HomogeneousSymbol(a.dim, a.degree + b.degree)
    for (al1, r1, x1), m1 in a.terms.items():
        for (al2, r2, x2), m2 in b.terms.items():
            if x1 and x2:
                continue  # x^2 exceeds the jet order
            key = (tuple(p + q for p, q in zip(al1, al2)), r1 + r2, x1 or x2)
            out._merge(key, m1 * m2)
    return out


def hs_dxi(h: HomogeneousSymbol, l: int) -> HomogeneousSymbol:
    """d/d xi_l; degree drops by one.  l is 1-based."""
    out = HomogeneousSymbol(h.dim, h.degree - 1)
    i = l - 1
    for (alpha, rho, xj), mv in h.terms.items():
        if alpha[i]:
            down = list(alpha)
            down[i] -= 1
            out._merge((tuple(down), rho, xj), mv.scale(alpha[i]))
        if rho:
            up = list(alpha)
            up[i] += 1
            out._merge((tuple(up), rho - 2, xj), mv.scale(rho))
    return out


def hs_dx(h: HomogeneousSymbol, l: int) -> HomogeneousSymbol:
    """d/d x_l on the order-1 jet; same xi-degree, x factor consumed."""
    out = HomogeneousSymbol(h.dim, h.degree)
    for (alpha, rho, xj), mv in h.terms.items():
        if xj == l:
            out._merge((alpha, rho, 0), mv)
    return out


def _norm2_power(dim: int, k: int) -> Dict[Tuple[int, ...], int]:
    """Expansion of (xi_1^2 + ... + xi_n^2)^k into monomial exponents."""
    acc: Dict[Tuple[int, ...], int] = {(0,) * dim: 1}
    for _ in range(k):
        nxt: Dict[Tuple[int, ...], int] = {}
        for alpha, c in acc.items():
            for l in range(dim):
                up = list(alpha)
                up[l] += 2
                key = tuple(up)
                nxt[key] = nxt.get(key, 0) + c
        acc = nxt
    return acc


def hs_is_zero(h: HomogeneousSymbol) -> bool:
    """Decide vanishing as a function on R^n \\ {0} x (jet in x).

    Within each parity class of rho, factor out the lowest norm power and
    expand the rest into polynomials; ||xi|| times a nonzero rational function
    is never rational, so the two classes must vanish separately.
    """
    for parity in (0, 1):
        terms = {k: mv for k, mv in h.terms.items() if k[1] % 2 == parity % 2}
        if not terms:
            continue
        rho_min = min(k[1] for k in terms)
        poly: Dict[Tuple[Tuple[int, ...], int], Multivector] = {}
        for (alpha, rho, xj), mv in terms.items():
            for beta, c in _norm2_power(h.dim, (rho - rho_min) // 2).items():
                key = (tuple(p + q for p, q in zip(alpha, beta)), xj)
                acc = poly.get(key)
                acc = mv.scale(c) if acc is None else acc + mv.scale(c)
                if acc:
                    poly[key] = acc
                else:
                    poly.pop(key, None)
        if poly:
            return False
    return True


def hs_equal(a: HomogeneousSymbol, b: HomogeneousSymbol) -> bool:
    return hs_is_zero(a - b)


class SymbolSum:
    """Asymptotic expansion: homogeneous components for the top `budget` degrees.

    parts maps degree -> HomogeneousSymbol.  Degrees below
    leading_degree - budget + 1 are not tracked and carry no meaning.
    """

    __slots__ = ("dim", "parts", "budget")

    def __init__(self, dim: int, parts: Mapping[int, HomogeneousSymbol], budget: int):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.dim = dim
        self.budget = budget
        self.parts: Dict[int, HomogeneousSymbol] = {}
        for deg, hs in parts.items():
            if hs.dim != dim or hs.degree != deg:
                raise ValueError("component mismatch")
            if hs:
                self.parts[deg] = hs

    @property
    def leading_degree(self) -> int:
        if not self.parts:
            raise ValueError("zero symbol has no leading degree")
        return max(self.parts)

    def component(self, degree: int) -> HomogeneousSymbol:
        return self.parts.get(degree, HomogeneousSymbol.zero(self.dim, degree))

    def tracked_degrees(self) -> range:
        lead = self.leading_degree
        return range(lead, lead - self.budget, -1)

    def __sub__(self, other: "SymbolSum") -> "SymbolSum":
        degs = set(self.parts) | set(other.parts)
        parts = {}
        for d in degs:
            h = self.component(d) - other.component(d)
            if h:
                parts[d] = h
        return SymbolSum(self.dim, parts, min(self.budget, other.budget))


def unit_symbol(dim: int, budget: int = 1) -> SymbolSum:
    return SymbolSum(dim, {0: HomogeneousSymbol.radial(dim, 0, Multivector.unit(dim))},
                     budget)


def compose(a: SymbolSum, b: SymbolSum, budget: int) -> SymbolSum:
    """Symbol of the operator product, valid for the top `budget` degrees."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if min(a.budget, b.budget) < budget:
        raise ValueError("insufficient budget on an input symbol")
    if not a.parts or not b.parts:
        return SymbolSum(a.dim, {}, budget)
    lead = a.leading_degree + b.leading_degree
    parts: Dict[int, HomogeneousSymbol] = {}
    for d in range(lead, lead - budget, -1):
        acc = HomogeneousSymbol.zero(a.dim, d)
        for da in a.tracked_degrees():
            db = d - da
            if db in b.parts and da in a.parts:
                acc = acc + hs_mul(a.parts[da], b.parts[db])
            # first-order correction: d_xi A at degree da lands at da - 1
            dbc = d + 1 - da
            if da in a.parts and dbc in b.parts:
                bb = b.parts[dbc]
                for l in range(1, a.dim + 1):
                    dxb = hs_dx(bb, l)
                    if dxb:
                        dxa = hs_dxi(a.parts[da], l)
                        if dxa:
                            acc = acc + hs_mul(dxa, dxb).scale(MINUS_I)
        if acc:
            parts[d] = acc
    return SymbolSum(a.dim, parts, budget)


def _unit_scalar(mv: Multivector):
    """Split a Multivector of the form c * unit-word * ring-one into (c, one)."""
    coeff = mv.terms.get(())
    if coeff is None or len(mv.terms) != 1:
        raise ValueError("leading coefficient is not a multiple of the unit")
    if isinstance(coeff, QQi):
        if not coeff:
            raise ValueError("non-invertible leading term")
        return coeff, QQi(Fraction(1))
    # matrix-like coefficient: must be c * identity
    size = coeff.size
    diag = coeff.entry(0, 0)
    for i in range(size):
        for j in range(size):
            want = diag if i == j else QQi()
            if coeff.entry(i, j) != want:
                raise ValueError("leading coefficient is not a multiple of the unit")
    if not diag:
        raise ValueError("non-invertible leading term")
    from .matrices import MatrixQQ
    return diag, MatrixQQ.identity(size)


def _leading_scalar(hs: HomogeneousSymbol):
    """Require the leading part to equal c * ||xi||^p * unit; return (p, c, one).

    c is the invertible QQi factor and `one` the ring identity coefficient it
    multiplies (QQi one, or an identity matrix for matrix coefficients).
    Compositions spell ||xi||^2 as sum_j xi_j^2, so the radial form is
    reconstructed by evaluating at xi = e_1 and verified exactly.
    """
    if any(xj != 0 for (_, _, xj) in hs.terms):
        raise ValueError("leading term is not a radial scalar")
    # value at xi = e_1: only terms whose monomial part lives on coordinate 1
    cand = None
    for (alpha, _, _), mv in hs.terms.items():
        if not any(alpha[1:]):
            cand = mv if cand is None else cand + mv
    if cand is None:
        raise ValueError("leading term is not a radial scalar")
    if not hs_is_zero(hs - HomogeneousSymbol.radial(hs.dim, hs.degree, cand)):
        raise ValueError("leading term is not a radial scalar")
    c, one = _unit_scalar(cand)
    return hs.degree, c, one


def parametrix(a: SymbolSum, budget: int) -> SymbolSum:
    """Right-inverse expansion: compose(parametrix(a), a) = 1 within budget."""
    if a.budget < budget:
        raise ValueError("insufficient budget on input symbol")
    p, c, one = _leading_scalar(a.component(a.leading_degree))
    dim = a.dim
    inv_scale = QQi(Fraction(1)) / c
    inv_lead = HomogeneousSymbol.radial(dim, -p, Multivector.scalar(dim, one).scale(inv_scale))
    b = SymbolSum(dim, {-p: inv_lead}, budget)
    # identity in the same coefficient ring as a's leading term
    ident = SymbolSum(dim, {0: HomogeneousSymbol.radial(dim, 0, Multivector.scalar(dim, one))},
                      budget)
    for step in range(1, budget):
        err = (compose(b, a, budget) - ident).component(-step)
        if err:
            b.parts[-p - step] = hs_mul(err, inv_lead).scale(QQi(Fraction(-1)))
    return b


def negative_power(a: SymbolSum, m: int, budget: int) -> SymbolSum:
    """Symbol of a^{-m} as an m-fold composition of the parametrix."""
    if m < 1:
        raise ValueError("power must be >= 1")
    p = parametrix(a, budget)
    out = p
    for _ in range(m - 1):
        out = compose(out, p, budget)
    return out


def sqrt_symbol(a: SymbolSum, budget: int = 2) -> SymbolSum:
    """Square-root expansion of a second-order symbol with leading ||xi||^2.

    Fixed by the binding property compose(s, s) = a within budget; the degree
    1-k component solves s_1 s_{1-k} + s_{1-k} s_1 = (remainder), and the
    scalar leading term makes that division exact.
    """
    if a.budget < budget:
        raise ValueError("insufficient budget on input symbol")
    p, c, one = _leading_scalar(a.component(a.leading_degree))
    if p != 2 or c != QQi(Fraction(1)):
        raise ValueError("sqrt requires leading term ||xi||^2 times the unit")
    dim = a.dim
    half_inv = HomogeneousSymbol.radial(
        dim, -1, Multivector.scalar(dim, one).scale(QQi(Fraction(1, 2))))
    s = SymbolSum(dim, {1: HomogeneousSymbol.radial(dim, 1, Multivector.scalar(dim, one))},
                  budget)
    for k in range(1, budget):
        err = (a - compose(s, s, budget)).component(2 - k)
        if err:
            s.parts[1 - k] = hs_mul(err, half_inv)
    return s


# sphere integration ---------------------------------------------------------

def _double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def moment(alpha: Iterable[int], dim: int) -> Fraction:
    """int_{S^{n-1}} xi^alpha dS in units of V(S^{n-1}).

    Zero for odd exponents; otherwise prod (alpha_l - 1)!! / prod_{i<k} (n + 2i)
    with 2k = |alpha|.
    """
    alpha = tuple(alpha)
    if any(x % 2 for x in alpha):
        return Fraction(0)
    k = sum(alpha) // 2
    num = 1
    for x in alpha:
        num *= _double_factorial(x - 1)
    den = 1
    for i in range(k):
        den *= dim + 2 * i
    return Fraction(num, den)


def sphere_integrate(h: HomogeneousSymbol) -> Multivector:
    """Integrate over ||xi|| = 1 at x = 0; result is in units of V(S^{n-1})."""
    out = Multivector(h.dim)
    for (alpha, _rho, xj), mv in h.terms.items():
        if xj:
            continue  # x = 0 at the base point
        c = moment(alpha, h.dim)
        if c:
            out = out + mv.scale(c)
    return out


@dataclass(frozen=True)
class PiValue:
    """Exact value rational * pi^pipow."""

    rational: Fraction
    pipow: int

    def __float__(self) -> float:
        from math import pi
        return float(self.rational) * pi ** self.pipow

    def __mul__(self, other) -> "PiValue":
        if isinstance(other, PiValue):
            return PiValue(self.rational * other.rational, self.pipow + other.pipow)
        return PiValue(self.rational * Fraction(other), self.pipow)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.pipow == 0:
            return str(self.rational)
        p = "pi" if self.pipow == 1 else f"pi^{self.pipow}"
        return f"{self.rational}*{p}"


def sphere_volume(dim: int) -> PiValue:
    """V(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2), kept exact as rational * pi^k."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if dim % 2 == 0:
        return PiValue(Fraction(2, factorial(dim // 2 - 1)), dim // 2)
    return PiValue(Fraction(2 ** ((dim + 1) // 2), _double_factorial(dim - 2)),
                   (dim - 1) // 2)


# curvature jets --------------------------------------------------------------

class CurvatureJet:
    """Normal-coordinate curvature data at the base point.

    riemann maps (a,b,c,d) to exact rational R_{abcd}; entries not stored are
    zero.  Validated: antisymmetry in (a,b) and (c,d), pair symmetry, first
    Bianchi identity.  ricci is the (1,3) contraction Ric_{cd} = sum_a R_{acad};
    gamma_linear returns the normal-coordinate Christoffel jet
    Gamma^a_{bc}(x) = -(1/3)(R_{abcd} + R_{acbd}) x^d.
    """

    def __init__(self, dim: int, riemann: Mapping[Tuple[int, int, int, int], Fraction]):
        self.dim = dim
        R: Dict[Tuple[int, int, int, int], Fraction] = {}
        for key, val in riemann.items():
            if len(key) != 4 or not all(1 <= i <= dim for i in key):
                raise ValueError(f"bad riemann index {key}")
            v = Fraction(val)
            if v:
                R[key] = v
        self.riemann = R
        self._validate()

    def r(self, a: int, b: int, c: int, d: int) -> Fraction:
        return self.riemann.get((a, b, c, d), Fraction(0))

    def _validate(self) -> None:
        rng = range(1, self.dim + 1)
        for a in rng:
            for b in rng:
                for c in rng:
                    for d in rng:
                        v = self.r(a, b, c, d)
                        if v != -self.r(b, a, c, d):
                            raise ValueError("riemann not antisymmetric in first pair")
                        if v != -self.r(a, b, d, c):
                            raise ValueError("riemann not antisymmetric in second pair")
                        if v != self.r(c, d, a, b):
                            raise ValueError("riemann not pair symmetric")
                        bianchi = v + self.r(a, c, d, b) + self.r(a, d, b, c)
                        if bianchi:
                            raise ValueError("riemann violates first Bianchi identity")

    def ricci(self, c: int, d: int) -> Fraction:
        return sum((self.r(a, c, a, d) for a in range(1, self.dim + 1)), Fraction(0))

    def gamma_linear(self, a: int, b: int, c: int, d: int) -> Fraction:
        return Fraction(-1, 3) * (self.r(a, b, c, d) + self.r(a, c, b, d))

    def spin_connection_linear(self) -> Dict[Tuple[int, int, int, int], Fraction]:
        """omega_{jkl}(x) = sum_s w[(j,k,l,s)] x_s, one standard normal-coordinate jet."""
        out: Dict[Tuple[int, int, int, int], Fraction] = {}
        for (a, b, c, d), v in self.riemann.items():
            # omega_{j k l ; s} = -1/2 R_{k l j s}
            key = (c, a, b, d)
            out[key] = out.get(key, Fraction(0)) - v / 2
        return {k: v for k, v in out.items() if v}
