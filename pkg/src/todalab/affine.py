"""Affine Weyl group sign dynamics for the untwisted A series.

Elements are affine permutations: bijections w of Z with w(i+n) = w(i)+n
(n = l+1) and sum(w(1..n)) = sum(1..n).  The window (w(1),...,w(n)) is a
canonical key; breadth-first search over the generators enumerates the
group by length and hands every element a witness reduced word.  The sign
action uses the extended Cartan matrix with the same word rule as the
finite case, and the alternating sum of q^eta becomes a power series whose
low coefficients stabilize as the length cutoff grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CapExceededError,
    InsufficientDataError,
    NonReducedWordError,
    ValidationError,
)
from .rootdata import LieType, extended_cartan

DEFAULT_LMAX_CAP = 40


@dataclass(frozen=True)
class AffineElement:
    """An affine permutation with its semidirect-product coordinates."""

    window: tuple[int, ...]       # (w(1), ..., w(n)); canonical key
    perm: tuple[int, ...]         # finite part: w(i) mod n, ranked to 1..n
    translation: tuple[int, ...]  # (w(i) - perm(i)) / n; sums to zero
    length: int
    word: tuple[int, ...]         # witness reduced word over 0..l

    def __str__(self):
        if not self.word:
            return "e"
        if max(self.word) > 9:  # two-digit letters need a separator
            return ".".join(str(i) for i in self.word)
        return "".join(str(i) for i in self.word)


def _decompose(window):
    n = len(window)
    perm = []
    trans = []
    for v in window:
        m = v % n
        residue = n if m == 0 else m
        perm.append(residue)
        trans.append((v - residue) // n)
    return tuple(perm), tuple(trans)


def length_by_inversions(window) -> int:
    """Coxeter length from the affine inversion formula (independent oracle).

    l(w) = sum over 1 <= i < j <= n of |floor((w(j) - w(i)) / n)|.
    """
    n = len(window)
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            total += abs((window[j] - window[i]) // n)
    return total


def _apply_right(window, k):
    """Window of w * s_k (generators k = 0..l)."""
    n = len(window)
    w = list(window)
    if k == 0:
        # s_0 swaps positions 0 <-> 1 modulo n-periodicity
        w[0], w[n - 1] = w[n - 1] - n, w[0] + n
    else:
        w[k - 1], w[k] = w[k], w[k - 1]
    return tuple(w)


class AffineWeylGroup:
    """Length-graded enumeration of the affine Weyl group of A(1)_l."""

    def __init__(self, lie_type: LieType):
        if not (lie_type.affine and lie_type.series == "A"):
            raise ValidationError(f"expected an affine A type, got {lie_type}")
        self.lie_type = lie_type
        self.rank = lie_type.rank
        self.n = lie_type.rank + 1
        self.cartan = extended_cartan(lie_type)
        self.windows = [tuple(range(1, self.n + 1))]
        self.lengths = [0]
        self.parents = [-1]
        self.letters = [-1]
        self.index = {self.windows[0]: 0}
        self._frontier = [0]
        self._lmax_done = 0

    def extend_to(self, lmax: int, cap: int = DEFAULT_LMAX_CAP):
        if lmax > cap:
            raise CapExceededError(f"affine enumeration capped at Lmax<={cap}")
        while self._lmax_done < lmax and self._frontier:
            new = {}
            for eid in self._frontier:
                win = self.windows[eid]
                for k in range(self.n):
                    img = _apply_right(win, k)
                    if img not in self.index and img not in new:
                        new[img] = (eid, k)
            frontier = []
            for win in sorted(new):
                par, k = new[win]
                # BFS depth must agree with the affine inversion formula
                assert self.lengths[par] + 1 == length_by_inversions(win)
                self.index[win] = len(self.windows)
                frontier.append(len(self.windows))
                self.windows.append(win)
                self.lengths.append(self.lengths[par] + 1)
                self.parents.append(par)
                self.letters.append(k)
            self._frontier = frontier
            self._lmax_done += 1
        return self

    def elements_by_length(self, lmax: int) -> list[AffineElement]:
        self.extend_to(lmax)
        return [self.element(i) for i in range(len(self.windows))
                if self.lengths[i] <= lmax]

    def count_per_length(self, lmax: int) -> list[int]:
        self.extend_to(lmax)
        out = [0] * (lmax + 1)
        for ln in self.lengths:
            if ln <= lmax:
                out[ln] += 1
        return out

    def word(self, eid: int) -> tuple[int, ...]:
        out = []
        while eid > 0:
            out.append(self.letters[eid])
            eid = self.parents[eid]
        return tuple(reversed(out))

    def element(self, eid: int) -> AffineElement:
        win = self.windows[eid]
        perm, trans = _decompose(win)
        return AffineElement(win, perm, trans, self.lengths[eid], self.word(eid))

    def evaluate_word(self, word) -> tuple[int, ...]:
        win = self.windows[0]
        for k in word:
            if not 0 <= k < self.n:
                raise ValidationError(f"letter {k} out of range 0..{self.rank}")
            win = _apply_right(win, k)
        return win

    def iter_reduced_words(self, eid: int):
        """All reduced words of element eid (DFS over length-dropping letters)."""

        def rec(win, ln, suffix):
            if ln == 0:
                yield tuple(suffix[::-1])
                return
            for k in range(self.n):
                down = _apply_right(win, k)
                if length_by_inversions(down) == ln - 1:
                    suffix.append(k)
                    yield from rec(down, ln - 1, suffix)
                    suffix.pop()

        yield from rec(self.windows[eid], self.lengths[eid], [])


def affine_eta(C_hat, word_or_element, eps, group: AffineWeylGroup | None = None,
               verify_reduced: bool = False) -> int:
    """Blow-up count along a reduced affine word, extended-Cartan sign rule."""
    from .signflow import reflect_sign

    if isinstance(word_or_element, AffineElement):
        word = word_or_element.word
    else:
        word = tuple(word_or_element)
        if verify_reduced:
            if group is None:
                raise ValidationError("verify_reduced requires the group")
            win = group.evaluate_word(word)
            if length_by_inversions(win) != len(word):
                raise NonReducedWordError(f"affine word {word} is not reduced")
    count = 0
    cur = tuple(eps)
    for i in word:
        if cur[i] < 0:
            count += 1
            cur = reflect_sign(C_hat, i, cur)
    return count


@dataclass(frozen=True)
class TruncatedSeries:
    """Partial alternating sum over the affine group, with stability marks.

    coefficient k is marked stable when no element of length in
    (lmax - buffer, lmax] contributed to it, buffer = 2(l+1).  That is a
    heuristic cutoff, not a proof.
    """

    lie_type: LieType
    eps: tuple[int, ...]
    lmax: int
    coeffs: tuple[int, ...]
    last_contribution: tuple[int, ...]
    buffer: int

    def stable(self) -> tuple[bool, ...]:
        return tuple(lc <= self.lmax - self.buffer for lc in self.last_contribution)

    def stable_coeffs(self) -> list[int]:
        flags = self.stable()
        out = []
        for c, ok in zip(self.coeffs, flags):
            if not ok:
                break
            out.append(c)
        return out

    def as_dict(self) -> dict:
        return {
            "type": str(self.lie_type),
            "sign": "".join("+" if e > 0 else "-" for e in self.eps),
            "lmax": self.lmax,
            "coeffs": list(self.coeffs),
            "stable": list(self.stable()),
            "buffer": self.buffer,
        }


def p_series(t: LieType, eps, lmax: int, group: AffineWeylGroup | None = None,
             cap: int = DEFAULT_LMAX_CAP) -> TruncatedSeries:
    """sum over l(w) <= lmax of (-1)^{l(w)} q^{eta(w, eps)} with stability marks."""
    eps = tuple(eps)
    if group is None:
        group = AffineWeylGroup(t)
    if len(eps) != group.n:
        raise ValidationError(f"affine sign vector must have length {group.n}")
    group.extend_to(lmax, cap=cap)
    C_hat = group.cartan
    from .signflow import reflect_sign

    n_el = len(group.windows)
    etas = [0] * n_el
    signs = [eps] * n_el
    for eid in range(1, n_el):
        par, i = group.parents[eid], group.letters[eid]
        sig = signs[par]
        if sig[i] < 0:
            etas[eid] = etas[par] + 1
            signs[eid] = reflect_sign(C_hat, i, sig)
        else:
            etas[eid] = etas[par]
            signs[eid] = sig
    coeffs = {}
    last = {}
    for eid in range(n_el):
        ln = group.lengths[eid]
        if ln > lmax:
            continue
        e = etas[eid]
        coeffs[e] = coeffs.get(e, 0) + (-1 if ln % 2 else 1)
        last[e] = max(last.get(e, 0), ln)
    top = max(coeffs) if coeffs else 0
    coeff_list = [coeffs.get(k, 0) for k in range(top + 1)]
    last_list = [last.get(k, 0) for k in range(top + 1)]
    return TruncatedSeries(t, eps, lmax, tuple(coeff_list), tuple(last_list),
                           2 * (t.rank + 1))


@dataclass(frozen=True)
class RationalFunction:
    """num(q)/den(q) with integer coefficients, den(0) = 1."""

    num: tuple[int, ...]
    den: tuple[int, ...]

    def series(self, order: int) -> list[Fraction]:
        out = []
        for k in range(order + 1):
            acc = Fraction(self.num[k] if k < len(self.num) else 0)
            for j in range(1, min(k, len(self.den) - 1) + 1):
                acc -= self.den[j] * out[k - j]
            out.append(acc / self.den[0])
        return out

    def __str__(self):
        from .blowup_poly import format_poly

        return f"({format_poly(self.num, 'q')}) / ({format_poly(self.den, 'q')})"


MIN_STABLE_FOR_GUESS = 6


def rational_guess(series: TruncatedSeries, max_degree: int = 4):
    """Pade-style reconstruction of the stable prefix as a small rational function.

    Returns a RationalFunction verified against every stable coefficient, or
    None when no fit of total degree <= max_degree matches.
    """
    stable = series.stable_coeffs()
    if len(stable) < MIN_STABLE_FOR_GUESS:
        raise InsufficientDataError(
            f"need {MIN_STABLE_FOR_GUESS} stable coefficients, have {len(stable)}"
        )
    target = [Fraction(c) for c in stable]
    for total in range(max_degree + 1):
        for dq in range(total + 1):
            dp = total - dq
            if dp + dq + 2 > len(stable):
                continue
            fit = _fit_rational(target, dp, dq)
            if fit is not None:
                return fit
    return None


def _fit_rational(target, dp, dq):
    """Solve c * (1 + q1 q + ...) = p exactly; verify on all of target."""
    n = len(target)
    # unknowns: q_1..q_dq then p_0..p_dp
    rows = []
    rhs = []
    for k in range(n):
        row = [Fraction(0)] * (dq + dp + 1)
        for j in range(1, dq + 1):
            if k - j >= 0:
                row[j - 1] = target[k - j]
        if k <= dp:
            row[dq + k] = Fraction(-1)
        rows.append(row)
        rhs.append(-target[k])
    sol = _solve_exact(rows, rhs)
    if sol is None:
        return None
    den = [Fraction(1)] + sol[:dq]
    num = sol[dq:]
    num_i, den_i = _int_coeffs(num), _int_coeffs(den)
    if num_i is None or den_i is None:
        return None
    cand = RationalFunction(num_i, den_i)
    check = cand.series(n - 1)
    if all(a == b for a, b in zip(check, target)):
        return cand
    return None


def _int_coeffs(fracs):
    if any(f.denominator != 1 for f in fracs):
        return None  # keep den(0)=1 and integer coefficients
    return tuple(int(f) for f in fracs)


def _solve_exact(rows, rhs):
    """Least-structure exact solve of possibly overdetermined rows * x = rhs."""
    m = len(rows)
    if m == 0:
        return None
    ncol = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = Fraction(1) / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][ncol] != 0:
            return None  # inconsistent
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncol]
    return sol
