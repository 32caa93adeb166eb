"""The blow-up graph: vertices are Weyl elements, edges are the Bruhat covers
along which nothing blows up (equal eta, equal transported sign).

Undirected connected components of this graph reproduce the connected
components of the sign polytope minus the divisors; when the edge set is a
partial matching, the unmatched vertices per length are candidate rational
Betti numbers of the compact group.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blowup_poly import IntPolynomial
from .signflow import EtaTable, eta_table, format_signs
from .weyl import WeylGroup


@dataclass(frozen=True)
class BlowupGraph:
    group: WeylGroup
    eps: tuple[int, ...]
    table: EtaTable
    edges: tuple[tuple[int, int], ...]  # (lower id, upper id), lexicographic

    @property
    def num_vertices(self) -> int:
        return len(self.group)


def build_graph(group_or_type, eps, cap=None) -> BlowupGraph:
    """Edges = Bruhat covers with equal eta and equal transported sign."""
    group = group_or_type
    if not isinstance(group, WeylGroup):
        kwargs = {} if cap is None else {"cap": cap}
        group = WeylGroup.generate(group, **kwargs)
    table = eta_table(group, eps)
    edges = [
        (lo, hi)
        for lo, hi in group.bruhat_covers()
        if table.values[lo] == table.values[hi]
        and table.transported[lo] == table.transported[hi]
    ]
    return BlowupGraph(group, tuple(eps), table, tuple(sorted(edges)))


def components(graph: BlowupGraph) -> list[list[int]]:
    """Undirected connected components, each sorted, ordered by smallest member."""
    parent = list(range(graph.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in graph.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for v in range(graph.num_vertices):
        groups.setdefault(find(v), []).append(v)
    return [sorted(groups[r]) for r in sorted(groups)]


def vertex_rows(graph: BlowupGraph) -> list[dict]:
    return list(graph.table.as_rows())


def alternating_sum(graph: BlowupGraph) -> IntPolynomial:
    """(-1)^{l(w*)} sum over vertices of (-1)^{l(w)} q^{eta(w)}; must equal p_eps."""
    lw = max(graph.group.lengths)
    coeffs = [0] * (max(graph.table.values) + 1)
    for eid, e in enumerate(graph.table.values):
        coeffs[e] += -1 if (lw - graph.group.lengths[eid]) % 2 else 1
    return IntPolynomial(coeffs)


def to_dot(graph: BlowupGraph) -> str:
    """Deterministic DOT rendering with word/eta/sign labels."""
    comps = components(graph)
    lines = [
        "digraph blowup {",
        f'  // type={graph.group.lie_type} sign={format_signs(graph.eps)} '
        f"vertices={graph.num_vertices} edges={len(graph.edges)} "
        f"components={len(comps)}",
        "  rankdir=TB;",
        '  node [shape=box, fontname="monospace"];',
    ]
    for eid in range(graph.num_vertices):
        el = graph.group.element(eid)
        label = (
            f"{el}|eta={graph.table.values[eid]}"
            f"|{format_signs(graph.table.transported[eid])}"
        )
        lines.append(f'  n{eid} [label="{label}"];')
    for a, b in graph.edges:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(graph: BlowupGraph) -> dict:
    """JSON-ready adjacency document."""
    return {
        "schema_version": 1,
        "type": str(graph.group.lie_type),
        "sign": format_signs(graph.eps),
        "vertices": vertex_rows(graph),
        "edges": [list(e) for e in graph.edges],
        "components": components(graph),
    }


@dataclass(frozen=True)
class MatchingReport:
    """Whether the edge set is a partial matching, and the Betti candidates.

    The incidence numbers on the edges are +/-2, so over the rationals each
    matched pair cancels; when every vertex meets at most one edge the
    unmatched vertices counted by length give the rational Betti numbers.
    When the matching property fails the Betti numbers are withheld (the
    unsigned graph does not determine the boundary ranks).
    """

    is_matching: bool
    max_degree: int
    betti: tuple[int, ...] | None
    offending: tuple[int, ...]  # vertex ids with degree >= 2

    def betti_polynomial(self) -> IntPolynomial:
        if self.betti is None:
            raise ValueError("no Betti numbers: edge set is not a matching")
        return IntPolynomial(self.betti)


def matching_report(graph: BlowupGraph) -> MatchingReport:
    deg = [0] * graph.num_vertices
    for a, b in graph.edges:
        deg[a] += 1
        deg[b] += 1
    offending = tuple(v for v, d in enumerate(deg) if d >= 2)
    if offending:
        return MatchingReport(False, max(deg), None, offending)
    max_len = max(graph.group.lengths)
    betti = [0] * (max_len + 1)
    for v, d in enumerate(deg):
        if d == 0:
            betti[graph.group.lengths[v]] += 1
    return MatchingReport(True, max(deg, default=0), tuple(betti), ())
