"""Sign dynamics of the simple reflections and the blow-up count eta.

A sign vector tracks sgn(a_i).  The reflection s_i sends eps_j to
eps_j * eps_i^(-C[j][i]); since signs square to one this means: nothing
moves when eps_i = +, and when eps_i = - exactly the eps_j with C[j][i]
odd flip.  Applying a reduced word letter by letter, eta counts the steps
taken at a node currently carrying a minus sign; those are the blow-ups.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonReducedWordError, ValidationError
from .rootdata import cartan_matrix
from .weyl import WeylElement, WeylGroup


def parse_signs(text: str) -> tuple[int, ...]:
    """``"--+"`` -> (-1, -1, +1).  Accepts ASCII + and -."""
    out = []
    for ch in text.strip():
        if ch == "+":
            out.append(1)
        elif ch == "-":
            out.append(-1)
        else:
            raise ValidationError(f"bad sign character {ch!r} in {text!r}")
    if not out:
        raise ValidationError("empty sign vector")
    return tuple(out)


def format_signs(eps) -> str:
    return "".join("+" if e > 0 else "-" for e in eps)


def all_minus(rank: int) -> tuple[int, ...]:
    return (-1,) * rank


def _flip_sets(C):
    """For each node i, the set of j whose sign flips when s_i fires at a minus."""
    n = len(C)
    return [frozenset(j for j in range(n) if C[j][i] % 2 != 0) for i in range(n)]


def reflect_sign(C, i: int, eps) -> tuple[int, ...]:
    """Apply s_i to a sign vector (entries +1/-1) under the Cartan matrix C."""
    n = len(C)
    if not 0 <= i < n:
        raise IndexError(f"node index {i} out of range for rank {n}")
    if len(eps) != n:
        raise ValidationError(f"sign vector length {len(eps)} != matrix size {n}")
    if eps[i] > 0:
        return tuple(eps)
    return tuple(-e if C[j][i] % 2 != 0 else e for j, e in enumerate(eps))


def reflect_sign_by_exponent(C, i: int, eps) -> tuple[int, ...]:
    """Same action computed literally as eps_j * eps_i^(-C[j][i]) (test oracle)."""
    return tuple(e * eps[i] ** ((-C[j][i]) % 2) for j, e in enumerate(eps))


def act_word(C, word, eps) -> tuple[int, ...]:
    """Apply the letters left to right: eps -> s_{j1} eps -> s_{j2} s_{j1} eps -> ...

    The result is the transported sign that the graph conditions call w^{-1} eps.
    """
    cur = tuple(eps)
    for i in word:
        cur = reflect_sign(C, i, cur)
    return cur


def eta(C, word_or_element, eps, group: WeylGroup | None = None,
        verify_reduced: bool = False) -> int:
    """Number of blow-up steps along a reduced word starting from eps.

    Accepts a word (iterable of node indices) or a WeylElement, whose witness
    word is used.  With ``verify_reduced`` and a group, a plain word is
    checked to be reduced first (eta is only reduced-word independent on
    reduced words).
    """
    if isinstance(word_or_element, WeylElement):
        word = word_or_element.word
    else:
        word = tuple(word_or_element)
        if verify_reduced:
            if group is None:
                raise ValidationError("verify_reduced requires the group")
            if group.act_on_word(word).length != len(word):
                raise NonReducedWordError(f"word {word} is not reduced")
    count = 0
    cur = tuple(eps)
    for i in word:
        if cur[i] < 0:
            count += 1
            cur = reflect_sign(C, i, cur)
        # a step at eps_i = + leaves the vector unchanged
    return count


@dataclass(frozen=True)
class EtaTable:
    """eta(w, eps) for every group element, plus the transported signs."""

    group: WeylGroup
    eps: tuple[int, ...]
    values: tuple[int, ...]                   # indexed by element id
    transported: tuple[tuple[int, ...], ...]  # w^{-1} eps per element id

    def value(self, el) -> int:
        return self.values[self.group.id_of(el)]

    def max_value(self) -> int:
        return max(self.values)

    def as_rows(self):
        for eid in range(len(self.group)):
            el = self.group.element(eid)
            yield {
                "word": str(el),
                "length": el.length,
                "eta": self.values[eid],
                "sign": format_signs(self.transported[eid]),
            }


def eta_table(group: WeylGroup, eps) -> EtaTable:
    """eta for every element in one pass over the BFS tree (no word replay)."""
    eps = tuple(eps)
    C = cartan_matrix(group.lie_type)
    if len(eps) != len(C):
        raise ValidationError(f"sign vector length {len(eps)} != rank {len(C)}")
    flips = _flip_sets(C)
    n = len(group)
    values = [0] * n
    transported = [eps] * n
    for eid in range(1, n):
        par = group.parents[eid]
        i = group.letters[eid]
        sig = transported[par]
        if sig[i] < 0:
            fs = flips[i]
            values[eid] = values[par] + 1
            transported[eid] = tuple(-s if j in fs else s for j, s in enumerate(sig))
        else:
            values[eid] = values[par]
            transported[eid] = sig
    return EtaTable(group, eps, tuple(values), tuple(transported))
