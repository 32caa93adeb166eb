"""Exact polynomial engine for the nilpotent-Toda tau functions.

Everything here is exact rational arithmetic.  The complete homogeneous
polynomials h_k live in the weighted time variables of each type (only odd
times for B/C/D, only t1 and t5 for G2, plus the extra parameter s for D);
the Schur polynomial S_(i1<...<ik) is the Wronskian determinant
det(h_{i_a - b + 1}), which works because dh_n/dt1 = h_{n-1}.

The per-type tau lists, their minimal degrees, tangent cones, the Hirota
bilinear check, and the Sturm-count real-root experiment all sit on top.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import (
    NoConstantFitsError,
    NotAPerfectSquareError,
    UnsupportedTypeError,
    ValidationError,
    ZeroPolynomialError,
)
from .rootdata import LieType, cartan_matrix

ZERO = Fraction(0)
ONE = Fraction(1)


class PolyRing:
    """Variable names and weights for one Lie type's tau functions.

    ``times`` lists the (weight, position) pairs of the flow variables that
    feed the h_k recursion; the D-series parameter s is a ring variable but
    not a time.
    """

    def __init__(self, names, weights, time_positions=None):
        self.names = tuple(names)
        self.weights = tuple(weights)
        if time_positions is None:
            time_positions = tuple(range(len(names)))
        self.times = tuple((self.weights[p], p) for p in time_positions)
        self._h_cache = [self.one()]

    def zero(self) -> "ExactPoly":
        return ExactPoly(self, {})

    def one(self) -> "ExactPoly":
        return self.const(ONE)

    def const(self, c) -> "ExactPoly":
        c = Fraction(c)
        return ExactPoly(self, {} if c == 0 else {(0,) * len(self.names): c})

    def monomial(self, exps, coeff=ONE) -> "ExactPoly":
        coeff = Fraction(coeff)
        return ExactPoly(self, {} if coeff == 0 else {tuple(exps): coeff})

    def var(self, name) -> "ExactPoly":
        pos = self.names.index(name)
        exps = [0] * len(self.names)
        exps[pos] = 1
        return self.monomial(exps)

    def __repr__(self):
        return f"PolyRing({self.names}, weights={self.weights})"


class ExactPoly:
    """Multivariate polynomial with exact Fraction coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms  # exponent tuple -> nonzero Fraction

    # -- basics ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, ExactPoly)
            and self.ring.names == other.ring.names
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other.ring.names != self.ring.names:
            raise ValidationError("polynomials live in different rings")
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return ExactPoly(self.ring, out)

    def __neg__(self):
        return ExactPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                return self.ring.zero()
            return ExactPoly(self.ring, {e: c * f for e, c in self.terms.items()})
        if other.ring.names != self.ring.names:
            raise ValidationError("polynomials live in different rings")
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return ExactPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValidationError("negative polynomial power")
        acc = self.ring.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def _coerce(self, other):
        if isinstance(other, ExactPoly):
            return other
        return self.ring.const(other)

    # -- calculus and structure -------------------------------------------

    def diff(self, name="t1") -> "ExactPoly":
        pos = self.ring.names.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[pos]:
                ne = list(e)
                ne[pos] -= 1
                out[tuple(ne)] = c * e[pos]
        return ExactPoly(self.ring, out)

    def min_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialError("minimal degree of the zero polynomial")
        return min(sum(e) for e in self.terms)

    def lowest_part(self) -> "ExactPoly":
        d = self.min_degree()
        return ExactPoly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def weighted_degrees(self) -> set[int]:
        w = self.ring.weights
        return {sum(x * y for x, y in zip(e, w)) for e in self.terms}

    def is_weighted_homogeneous(self) -> bool:
        return len(self.weighted_degrees()) <= 1

    def leading(self):
        """(exponents, coefficient) maximal in graded-lex order."""
        if not self.terms:
            raise ZeroPolynomialError("leading term of the zero polynomial")
        e = max(self.terms, key=lambda e: (sum(e), e))
        return e, self.terms[e]

    def trailing(self):
        """(exponents, coefficient) minimal in graded-lex order."""
        if not self.terms:
            raise ZeroPolynomialError("trailing term of the zero polynomial")
        e = min(self.terms, key=lambda e: (sum(e), e))
        return e, self.terms[e]

    def degree_in(self, name) -> int:
        pos = self.ring.names.index(name)
        return max((e[pos] for e in self.terms), default=-1)

    def restrict_t1(self) -> "UniPoly":
        """Set every variable except t1 to zero."""
        pos = self.ring.names.index("t1")
        coeffs = {}
        for e, c in self.terms.items():
            if all(x == 0 for j, x in enumerate(e) if j != pos):
                coeffs[e[pos]] = coeffs.get(e[pos], ZERO) + c
        return UniPoly.from_dict(coeffs)

    def slice_t1(self, values: dict) -> "UniPoly":
        """Substitute rationals for every variable except t1."""
        names = self.ring.names
        pos = names.index("t1")
        vals = {}
        for j, name in enumerate(names):
            if j == pos:
                continue
            if name not in values:
                raise ValidationError(f"missing substitution for {name}")
            vals[j] = Fraction(values[name])
        coeffs = {}
        for e, c in self.terms.items():
            f = c
            for j, v in vals.items():
                if e[j]:
                    f *= v ** e[j]
            coeffs[e[pos]] = coeffs.get(e[pos], ZERO) + f
        return UniPoly.from_dict(coeffs)

    def to_json(self) -> dict:
        monos = sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]))
        return {
            "variables": list(self.ring.names),
            "weights": list(self.ring.weights),
            "monomials": [
                {"exponents": list(e), "numerator": c.numerator, "denominator": c.denominator}
                for e, c in monos
            ],
        }

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0])):
            factors = [
                self.ring.names[j] + (f"^{x}" if x > 1 else "")
                for j, x in enumerate(e)
                if x
            ]
            body = "*".join(factors) if factors else "1"
            parts.append(f"({c})*{body}")
        return " + ".join(parts)

    __repr__ = __str__


# -- univariate exact polynomials (for Sturm counting) -----------------------


class UniPoly:
    """Univariate polynomial over Fraction, low-to-high coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_dict(cls, d):
        if not d:
            return cls()
        out = [ZERO] * (max(d) + 1)
        for k, v in d.items():
            out[k] = v
        return cls(out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def derivative(self) -> "UniPoly":
        return UniPoly([c * k for k, c in enumerate(self.coeffs)][1:])

    def rem(self, other) -> "UniPoly":
        if other.is_zero():
            raise ZeroDivisionError("polynomial remainder by zero")
        r = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        while len(r) - 1 >= d and r:
            f = r[-1] / lead
            shift = len(r) - 1 - d
            for i, c in enumerate(other.coeffs):
                r[shift + i] -= f * c
            while r and r[-1] == 0:
                r.pop()
        return UniPoly(r)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return UniPoly([c / lead for c in self.coeffs])


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a.rem(b)
    return a.monic()


def square_free_part(f: UniPoly) -> UniPoly:
    if f.degree < 1:
        return f.monic()
    g = uni_gcd(f, f.derivative())
    if g.degree == 0:
        return f.monic()
    # exact division f / g via remainder-free long division
    num = list(f.coeffs)
    den = g.coeffs
    out = [ZERO] * (len(num) - len(den) + 1)
    while len(num) >= len(den) and num:
        k = len(num) - len(den)
        c = num[-1] / den[-1]
        out[k] = c
        for i, dc in enumerate(den):
            num[k + i] -= c * dc
        while num and num[-1] == 0:
            num.pop()
    if num:
        raise ValidationError("inexact division in square-free reduction")
    return UniPoly(out).monic()


def sturm_real_roots(f) -> int:
    """Exact count of distinct real roots via a Sturm chain.

    Accepts a UniPoly or a low-to-high coefficient sequence.  Multiple roots
    count once (the square-free part is taken first).
    """
    if not isinstance(f, UniPoly):
        f = UniPoly(f)
    if f.is_zero():
        raise ZeroPolynomialError("root count of the zero polynomial")
    f = square_free_part(f)
    if f.degree < 1:
        return 0
    chain = [f, f.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2].rem(chain[-1])
        if r.is_zero():
            break
        chain.append(UniPoly([-c for c in r.coeffs]))

    def variations(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)

    at_plus = [1 if p.coeffs[-1] > 0 else -1 for p in chain if not p.is_zero()]
    at_minus = [
        (1 if p.coeffs[-1] > 0 else -1) * (-1 if p.degree % 2 else 1)
        for p in chain
        if not p.is_zero()
    ]
    return variations(at_minus) - variations(at_plus)


# -- complete homogeneous polynomials and Schur Wronskians -------------------


def ring_for(t: LieType) -> PolyRing:
    """The time variables (and weights) of the nilpotent tau system of t."""
    if t.affine:
        raise UnsupportedTypeError("tau systems are for finite types")
    s, l = t.series, t.rank
    if s == "A":
        idx = list(range(1, l + 1))
    elif s in ("B", "C"):
        idx = list(range(1, 2 * l, 2))
    elif s == "G":
        idx = [1, 5]
    elif s == "D":
        idx = list(range(1, 2 * l - 2, 2))
        names = [f"t{j}" for j in idx] + ["s"]
        weights = idx + [l - 1]
        return PolyRing(names, weights, time_positions=range(len(idx)))
    else:
        raise UnsupportedTypeError(f"no tau-function realization for type {t}")
    return PolyRing([f"t{j}" for j in idx], idx)


def hk(n: int, ring: PolyRing) -> ExactPoly:
    """Complete homogeneous polynomial h_n in the ring's active times.

    h_n = sum over i_j >= 0 with sum j*i_j = n of prod t_j^{i_j} / i_j!,
    computed through n*h_n = sum_j j*t_j*h_{n-j}; h_0 = 1, h_{<0} = 0.
    """
    if n < 0:
        return ring.zero()
    cache = ring._h_cache
    while len(cache) <= n:
        m = len(cache)
        acc = ring.zero()
        for wt, pos in ring.times:
            if wt <= m:
                exps = [0] * len(ring.names)
                exps[pos] = 1
                acc = acc + ring.monomial(exps, Fraction(wt, m)) * cache[m - wt]
        cache.append(acc)
    return cache[n]


def _det(entries) -> ExactPoly:
    """Determinant of a square matrix of ExactPoly, memoized over column subsets."""
    k = len(entries)
    ring = entries[0][0].ring
    memo = {}

    def rec(cols):
        if not cols:
            return ring.one()
        got = memo.get(cols)
        if got is not None:
            return got
        row = k - len(cols)
        acc = ring.zero()
        for idx, c in enumerate(cols):
            if entries[row][c].is_zero():
                continue
            sub = rec(cols[:idx] + cols[idx + 1:])
            term = entries[row][c] * sub
            acc = acc + term if idx % 2 == 0 else acc - term
        memo[cols] = acc
        return acc

    return rec(tuple(range(k)))


def schur_wronskian(indices, ring: PolyRing) -> ExactPoly:
    """S_(i1<...<ik) = det(h_{i_a - b + 1}) over the ring's active times."""
    idx = list(indices)
    if any(a >= b for a, b in zip(idx, idx[1:])) or not idx:
        raise ValidationError(f"indices must be strictly increasing, got {indices}")
    k = len(idx)
    entries = [[hk(idx[a] - b, ring) for b in range(k)] for a in range(k)]
    return _det(entries)


def wronskian(fns) -> ExactPoly:
    """Wronskian determinant in t1: rows are successive t1-derivatives."""
    fns = list(fns)
    k = len(fns)
    rows = [fns]
    for _ in range(k - 1):
        rows.append([f.diff("t1") for f in rows[-1]])
    return _det([[rows[i][j] for j in range(k)] for i in range(k)])


# -- perfect squares and exact division --------------------------------------


def _sqrt_fraction(c: Fraction) -> Fraction:
    if c < 0:
        raise NotAPerfectSquareError(f"negative leading coefficient {c}")
    n, d = c.numerator, c.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise NotAPerfectSquareError(f"{c} is not a rational square")
    return Fraction(rn, rd)


def poly_sqrt(p: ExactPoly) -> ExactPoly:
    """Exact square root of a perfect-square polynomial (graded-lex iteration)."""
    if p.is_zero():
        return p
    lead_e, lead_c = p.leading()
    if any(x % 2 for x in lead_e):
        raise NotAPerfectSquareError("leading monomial has odd exponents")
    half = tuple(x // 2 for x in lead_e)
    c = _sqrt_fraction(lead_c)
    r = p.ring.monomial(half, c)
    twice_lead = 2 * c
    for _ in range(10 * len(p.terms) + 40):
        err = p - r * r
        if err.is_zero():
            return r
        e, coeff = err.leading()
        q = tuple(a - b for a, b in zip(e, half))
        if any(x < 0 for x in q):
            raise NotAPerfectSquareError("stray monomial below the square root")
        r = r + p.ring.monomial(q, coeff / twice_lead)
    raise NotAPerfectSquareError("square-root iteration did not terminate")


def _squarefree_decompose(n: int):
    """n > 0 as (squarefree, root) with n = squarefree * root**2."""
    sf, rt = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            rt *= d ** (e // 2)
            if e % 2:
                sf *= d
        d += 1 if d == 2 else 2
    return sf * n if n > 1 else sf, rt


def poly_sqrt_content(p: ExactPoly):
    """Write p = content * P**2 with a signed squarefree rational content.

    Tau functions are only defined up to constant scale, so a determinant
    that is c * (polynomial)^2 yields the polynomial; c is returned for the
    record.  Raises NotAPerfectSquareError when no such splitting exists.
    """
    if p.is_zero():
        raise NotAPerfectSquareError("zero polynomial has no square splitting")
    _, lead_c = p.leading()
    num_sf, _ = _squarefree_decompose(abs(lead_c.numerator))
    den_sf, _ = _squarefree_decompose(lead_c.denominator)
    content = Fraction(num_sf, den_sf)
    if lead_c < 0:
        content = -content
    root = poly_sqrt(p * (1 / content))
    return normalize_trailing_positive(root), content


def normalize_trailing_positive(p: ExactPoly) -> ExactPoly:
    """Flip the overall sign so the graded-lex minimal monomial is positive."""
    if p.is_zero():
        return p
    _, c = p.trailing()
    return -p if c < 0 else p


def exact_divide(p: ExactPoly, d: ExactPoly) -> ExactPoly:
    """Quotient p/d when the division is exact; raises ValidationError else."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = p.ring
    q = ring.zero()
    lead_e, lead_c = d.leading()
    rem = p
    for _ in range(10 * (len(p.terms) + len(d.terms)) + 40):
        if rem.is_zero():
            return q
        e, c = rem.leading()
        t = tuple(a - b for a, b in zip(e, lead_e))
        if any(x < 0 for x in t):
            raise ValidationError("inexact polynomial division")
        mono = ring.monomial(t, c / lead_c)
        q = q + mono
        rem = rem - mono * d
    raise ValidationError("polynomial division did not terminate")


# -- tau systems --------------------------------------------------------------


@dataclass(frozen=True)
class TauSystem:
    lie_type: LieType
    ring: PolyRing
    taus: tuple[ExactPoly, ...]
    notes: tuple[str, ...] = ()

    def product(self) -> ExactPoly:
        acc = self.ring.one()
        for tau in self.taus:
            acc = acc * tau
        return acc


def tau_functions(t: LieType) -> TauSystem:
    """The nilpotent tau polynomials (types A, B, C, D, G2)."""
    if t.affine:
        raise UnsupportedTypeError("tau systems are for finite types")
    ring = ring_for(t)
    s, l = t.series, t.rank
    notes = []
    if s == "A":
        taus = []
        for k in range(1, l + 1):
            sign = -1 if (k * (k - 1) // 2) % 2 else 1
            taus.append(sign * schur_wronskian(range(l - k + 1, l + 1), ring))
    elif s == "B":
        taus = [wronskian(hk(2 * l - j, ring) for j in range(k)) for k in range(1, l)]
        inner = wronskian(hk(2 * l - j, ring) for j in range(l))
        root, content = poly_sqrt_content(inner)
        taus.append(root)
        notes.append(f"tau_{l}: Wronskian = ({content}) * tau_{l}^2, trailing sign +")
    elif s == "C":
        taus = [wronskian(hk(2 * l - 1 - j, ring) for j in range(k)) for k in range(1, l + 1)]
    elif s == "G":
        taus = [schur_wronskian([6], ring), schur_wronskian([5, 6], ring)]
        notes.append("tau_2 = S_(5,6) with the standard Wronskian sign "
                     "(reproduces the displayed polynomial)")
    elif s == "D":
        taus, d_notes = _tau_functions_d(ring, l)
        notes.extend(d_notes)
    else:
        raise UnsupportedTypeError(f"no tau-function list for type {t}")
    return TauSystem(t, ring, tuple(taus), tuple(notes))


def _tau_functions_d(ring: PolyRing, l: int):
    """D-series tau functions: Wronskians of s-shifted h's plus one sqrt."""
    s_var = ring.var("s")

    def f(j):
        # generating sequence; df_j/dt1 = f_{j+1}
        if l % 2 == 0:
            return s_var * hk(l - j, ring) + 2 * hk(2 * l - 1 - j, ring)
        if j == 1:
            return s_var * s_var + 2 * hk(2 * l - 2, ring)
        return 2 * hk(2 * l - 1 - j, ring)

    taus = [wronskian(f(j + 1) for j in range(k)) for k in range(1, l - 1)]
    pair = wronskian(f(j + 1) for j in range(l - 1))

    border = [s_var + hk(l - 1, ring)] + [hk(l - a, ring) for a in range(2, l)]
    corner = ring.zero() if l % 2 == 0 else ring.one()
    m = [[f(a + b + 1) for b in range(l - 1)] + [border[a]] for a in range(l - 1)]
    m.append(border + [corner])
    bordered = _det(m)

    tau_l, content = poly_sqrt_content(bordered)
    tau_prev = exact_divide(pair, tau_l)
    taus.extend([tau_prev, tau_l])
    notes = [
        f"tau_{l}: bordered determinant = ({content}) * tau_{l}^2, trailing sign +; "
        f"tau_{l-1} = Wr(...)/tau_{l}",
    ]
    return taus, notes


def minimal_degree(p: ExactPoly) -> int:
    """Lowest total degree of a monomial (all variables graded by 1)."""
    return p.min_degree()


def minimal_degrees(t_or_system) -> tuple[int, ...]:
    system = t_or_system if isinstance(t_or_system, TauSystem) else tau_functions(t_or_system)
    return tuple(minimal_degree(tau) for tau in system.taus)


def tangent_cone(t_or_system):
    """(lowest homogeneous part of prod tau_j, its degree, cancellation flag).

    The flag is set when the product's minimal degree exceeds the sum of the
    factor minimal degrees, i.e. when lowest parts cancelled.
    """
    system = t_or_system if isinstance(t_or_system, TauSystem) else tau_functions(t_or_system)
    prod = system.product()
    d = prod.min_degree()
    expected = sum(minimal_degrees(system))
    return prod.lowest_part(), d, d != expected


def nu_degrees(t_or_system) -> tuple[int, ...]:
    """Vanishing order of each tau_k along the t1 axis."""
    system = t_or_system if isinstance(t_or_system, TauSystem) else tau_functions(t_or_system)
    out = []
    for k, tau in enumerate(system.taus, start=1):
        restricted = tau.restrict_t1()
        if restricted.is_zero():
            raise ZeroPolynomialError(f"tau_{k} vanishes identically on the t1 axis")
        nu = next(i for i, c in enumerate(restricted.coeffs) if c != 0)
        out.append(nu)
    return tuple(out)


def nu_check(t_or_system) -> tuple[bool, ...]:
    """Per-tau flags: does the t1-axis vanishing order equal 2*rowsum(C^-1)?"""
    from .rootdata import tau_multiplicities

    system = t_or_system if isinstance(t_or_system, TauSystem) else tau_functions(t_or_system)
    return tuple(a == b for a, b in
                 zip(nu_degrees(system), tau_multiplicities(system.lie_type)))


def hirota_residual(t_or_system, k: int):
    """Fit the constant in tau_k tau_k'' - (tau_k')^2 = a_k0 prod tau_j^{-C_kj}.

    ``k`` is 1-based.  Returns (a_k0, residual); the residual is the zero
    polynomial when the constant fits exactly, otherwise NoConstantFitsError
    is raised with the offending residual attached.
    """
    system = t_or_system if isinstance(t_or_system, TauSystem) else tau_functions(t_or_system)
    C = cartan_matrix(system.lie_type)
    l = system.lie_type.rank
    if not 1 <= k <= l:
        raise ValidationError(f"tau index {k} out of range 1..{l}")
    tau = system.taus[k - 1]
    dtau = tau.diff("t1")
    lhs = tau * dtau.diff("t1") - dtau * dtau
    rhs = system.ring.one()
    for j in range(1, l + 1):
        if j == k:
            continue
        e = -C[k - 1][j - 1]
        if e < 0:
            raise ValidationError(f"negative Cartan exponent -C[{k}][{j}] = {e}")
        if e:
            rhs = rhs * system.taus[j - 1] ** e
    if lhs.is_zero():
        return Fraction(0), system.ring.zero()
    e, c = rhs.leading()
    if e not in lhs.terms:
        err = NoConstantFitsError(f"no constant matches tau_{k} bilinear form")
        err.residual = lhs
        raise err
    a0 = lhs.terms[e] / c
    residual = lhs - a0 * rhs
    if not residual.is_zero():
        err = NoConstantFitsError(f"no constant matches tau_{k} bilinear form")
        err.residual = residual
        raise err
    return a0, residual


# -- real-root experiment -----------------------------------------------------


@dataclass(frozen=True)
class RealRootReport:
    lie_type: LieType
    samples: int
    seed: int
    counts: tuple[int, ...]
    modal_count: int
    modal_fraction: float
    expected: int
    matches_expected: bool
    exceptional: tuple[dict, ...]  # slices off the modal count, with assignments

    def as_dict(self) -> dict:
        return {
            "type": str(self.lie_type),
            "samples": self.samples,
            "seed": self.seed,
            "counts": list(self.counts),
            "modal_count": self.modal_count,
            "modal_fraction": self.modal_fraction,
            "expected_degree": self.expected,
            "matches_expected": self.matches_expected,
            "exceptional_slices": list(self.exceptional),
        }


def random_nonzero_rational(rng: random.Random, bound: int = 20) -> Fraction:
    num = rng.choice([n for n in range(-bound, bound + 1) if n != 0])
    den = rng.randint(1, bound)
    return Fraction(num, den)


def real_root_count_experiment(t: LieType, samples: int = 20, seed: int = 0) -> RealRootReport:
    """Sturm-count the real t1 roots of prod tau_j on random generic slices."""
    from .rootdata import compact_dual_info

    if samples < 1:
        raise ValidationError("need at least one sample")
    system = tau_functions(t)
    rng = random.Random(seed)
    others = [n for n in system.ring.names if n != "t1"]
    counts = []
    assignments = []
    for _ in range(samples):
        values = {n: random_nonzero_rational(rng) for n in others}
        poly = UniPoly([1])
        for tau in system.taus:
            poly = poly * tau.slice_t1(values)
        counts.append(sturm_real_roots(poly))
        assignments.append({n: str(v) for n, v in values.items()})
    modal = max(set(counts), key=lambda c: (counts.count(c), -c))
    frac = counts.count(modal) / len(counts)
    expected = sum(compact_dual_info(t).degrees)
    exceptional = tuple(
        {"sample": i, "count": c, "assignment": assignments[i]}
        for i, c in enumerate(counts)
        if c != modal
    )
    return RealRootReport(
        t, samples, seed, tuple(counts), modal, frac, expected,
        modal == expected, exceptional,
    )
