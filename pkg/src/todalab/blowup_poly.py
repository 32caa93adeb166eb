"""The blow-up polynomial p_eps(q), its closed factorizations, and finite-group
point counts.

p_eps(q) = (-1)^{l(w*)} * sum_w (-1)^{l(w)} q^{eta(w, eps)}.  For the all-minus
sign it equals q^{-r} |K(F_q)| for the maximal compact K of the Langlands-dual
group, with the explicit per-type factorization prod (q^{d_i} - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AssumptionViolatedError, CapExceededError, InvalidQError
from .rootdata import LieType, compact_dual_info
from .signflow import eta_table
from .weyl import WeylGroup


class IntPolynomial:
    """Integer polynomial in one variable, coefficients low to high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(int(x) for x in c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    def __str__(self):
        return format_poly(self.coeffs, "q")

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"


def format_poly(coeffs, var: str) -> str:
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            term = str(mag)
        else:
            base = var if k == 1 else f"{var}^{k}"
            term = base if mag == 1 else f"{mag}*{base}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


@dataclass(frozen=True)
class FactoredForm:
    """prod_i (q^{d_i} - 1), stored as the exponent list (d_1, ..., d_g)."""

    exponents: tuple[int, ...]

    def expand(self) -> IntPolynomial:
        acc = IntPolynomial([1])
        for d in self.exponents:
            acc = acc * IntPolynomial([-1] + [0] * (d - 1) + [1])
        return acc

    def __str__(self):
        out = []
        for d in sorted(set(self.exponents)):
            m = self.exponents.count(d)
            base = "(q-1)" if d == 1 else f"(q^{d}-1)"
            out.append(base if m == 1 else f"{base}^{m}")
        return "".join(out) if out else "1"


def p_epsilon(group_or_type, eps, cap=None) -> IntPolynomial:
    """Exact alternating sum of q^eta over the whole Weyl group."""
    group = _as_group(group_or_type, cap)
    table = eta_table(group, eps)
    lw = max(group.lengths)
    coeffs = [0] * (max(table.values) + 1)
    for eid, e in enumerate(table.values):
        coeffs[e] += -1 if (lw - group.lengths[eid]) % 2 else 1
    return IntPolynomial(coeffs)


def _as_group(group_or_type, cap):
    if isinstance(group_or_type, WeylGroup):
        return group_or_type
    kwargs = {} if cap is None else {"cap": cap}
    return WeylGroup.generate(group_or_type, **kwargs)


def closed_form_p(t: LieType) -> FactoredForm:
    """The theorem factorization of p(q), read off the compact-dual degrees."""
    return FactoredForm(compact_dual_info(t).degrees)


def smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = smallest_prime_factor(q)
    while q % p == 0:
        q //= p
    return q == 1


def check_odd_prime_power(q: int):
    if q % 2 == 0:
        raise InvalidQError(f"q={q} is even; the point counts require odd characteristic")
    if not is_prime_power(q):
        raise InvalidQError(f"q={q} is not a prime power")


def chevalley_order(t: LieType, q: int) -> int:
    """|K(F_q)| = q^r * p(q) with r = dim(K) - deg p(q)."""
    check_odd_prime_power(q)
    info = compact_dual_info(t)
    return q ** info.r * closed_form_p(t).expand()(q)


# -- brute-force oracles over F_q -------------------------------------------

SO2_CAP = 10_000
SO3_CAP = 7


def brute_force_so_order(n: int, q: int) -> int:
    """|SO(n, F_q)| by raw enumeration; the independent check on q^r p(q).

    n=2 counts the solutions of x^2 + y^2 = 1 (requires sqrt(-1) in F_q,
    as in the circle example); n=3 checks A^T A = I and det A = 1 over all
    q^9 matrices.
    """
    check_odd_prime_power(q)
    if n == 2:
        if q > SO2_CAP:
            raise CapExceededError(f"SO(2) enumeration capped at q<={SO2_CAP}")
        squares = np.zeros(q, dtype=bool)
        squares[(np.arange(q, dtype=np.int64) ** 2) % q] = True
        if not squares[q - 1]:
            raise AssumptionViolatedError(
                f"-1 is not a square in F_{q}; the q-1 count assumes sqrt(-1) exists"
            )
        x = np.arange(q, dtype=np.int64)
        rhs = (1 - x * x) % q
        counts = np.bincount((np.arange(q, dtype=np.int64) ** 2) % q, minlength=q)
        return int(counts[rhs].sum())
    if n == 3:
        if q > SO3_CAP:
            raise CapExceededError(f"SO(3) enumeration capped at q<={SO3_CAP}")
        return _so3_enumerate(q)
    raise InvalidQError(f"brute-force SO order only implemented for n in (2, 3), got {n}")


def _so3_enumerate(q: int) -> int:
    """Walk all q^9 matrices over F_q in vectorized batches."""
    eye = np.eye(3, dtype=np.int64)
    total = 0
    batch = q ** 6
    digits_lo = np.empty((batch, 6), dtype=np.int64)
    rem = np.arange(batch, dtype=np.int64)
    for k in range(6):
        digits_lo[:, k] = rem % q
        rem //= q
    for head in range(q ** 3):
        h = []
        rem_h = head
        for _ in range(3):
            h.append(rem_h % q)
            rem_h //= q
        if (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]) % q != 1:
            continue  # rows of an orthogonal matrix are unit vectors
        mats = np.empty((batch, 3, 3), dtype=np.int64)
        mats[:, 0, 0], mats[:, 0, 1], mats[:, 0, 2] = h[0], h[1], h[2]
        mats[:, 1, 0] = digits_lo[:, 0]
        mats[:, 1, 1] = digits_lo[:, 1]
        mats[:, 1, 2] = digits_lo[:, 2]
        mats[:, 2, 0] = digits_lo[:, 3]
        mats[:, 2, 1] = digits_lo[:, 4]
        mats[:, 2, 2] = digits_lo[:, 5]
        gram = np.einsum("nij,nik->njk", mats, mats) % q
        ok = (gram == eye).all(axis=(1, 2))
        if ok.any():
            m = mats[ok]
            det = (
                m[:, 0, 0] * (m[:, 1, 1] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 1])
                - m[:, 0, 1] * (m[:, 1, 0] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 0])
                + m[:, 0, 2] * (m[:, 1, 0] * m[:, 2, 1] - m[:, 1, 1] * m[:, 2, 0])
            ) % q
            total += int((det == 1).sum())
    return total


def poincare_polynomial_k(t: LieType) -> IntPolynomial:
    """Rational Poincare polynomial of K: prod (1 + x^{2 d_i - 1})."""
    acc = IntPolynomial([1])
    for d in compact_dual_info(t).degrees:
        acc = acc * IntPolynomial([1] + [0] * (2 * d - 2) + [1])
    return acc
