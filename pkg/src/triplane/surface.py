"""Topological type of the surface behind a tri-plane diagram.

Everything here depends only on the three arc pairings: the components of
the surface are the connected pieces of the union of the pairing graphs, and
the components of each closure are cycles of two pairings.
"""

from __future__ import annotations

from .diagram import TriPlaneDiagram, pairing_graph_bipartite
from .words import arc_pairing


def _components(n: int, edges) -> list[set]:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    groups: dict = {}
    for v in range(1, n + 1):
        groups.setdefault(find(v), set()).add(v)
    return sorted(groups.values(), key=min)


def surface_pieces(D: TriPlaneDiagram) -> list[tuple[int, bool]]:
    """(chi, orientable) for each component of the surface."""
    n = 2 * D.b
    pairings = [arc_pairing(t) for t in D.tangles]
    out = []
    for comp in _components(n, [e for p in pairings for e in p]):
        chi = -len(comp) // 2
        for i in range(3):
            sub = [e for e in pairings[i] + pairings[(i + 1) % 3] if e[0] in comp]
            chi += sum(1 for c in _components(n, sub) if c & comp and len(c) > 1)
        local = [[e for e in p if e[0] in comp] for p in pairings]
        out.append((chi, pairing_graph_bipartite(local, n)))
    return out


def piece_name(chi: int, orientable: bool) -> str:
    if orientable:
        g = (2 - chi) // 2
        return "S2" if g == 0 else "T2" if g == 1 else f"#{g}T2"
    k = 2 - chi
    return "P2" if k == 1 else "P2#P2" if k == 2 else f"#{k}P2"


def surface_type(D: TriPlaneDiagram) -> str:
    """Component types joined by '+', e.g. ``S2+T2``."""
    names = sorted(piece_name(c, o) for c, o in surface_pieces(D))
    return "+".join(names)
