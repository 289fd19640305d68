"""Independent reference computations used only by the test suite."""

from __future__ import annotations

import itertools

import sympy
from sympy.matrices.normalforms import smith_normal_form

from triplane.diagram import pairing_graph_bipartite
from triplane.words import CAP, CROSS, CUP, arc_pairing, widths

T = sympy.Symbol("t")


# ---------------------------------------------------------------------------
# plain 2^n state sum for the bracket, by explicit loop counting


def _loops_after_smoothing(slices, choice) -> int:
    """Count circles of the crossingless diagram given by smoothing choices.

    choice[k] = 0 keeps the crossing's strands vertical, 1 turns it back.
    """
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    ws = widths(slices)
    k = 0
    for t, s in enumerate(slices):
        w = ws[t]
        up = lambda p: ("n", t, p)
        dn = lambda p: ("n", t + 1, p)
        if s.kind == CAP:
            union(dn(s.pos), dn(s.pos + 1))
            for p in range(1, w + 1):
                union(up(p), dn(p if p < s.pos else p + 2))
        elif s.kind == CUP:
            union(up(s.pos), up(s.pos + 1))
            for p in range(1, w + 1):
                if p < s.pos:
                    union(up(p), dn(p))
                elif p > s.pos + 1:
                    union(up(p), dn(p - 2))
        else:
            j = s.pos
            for p in range(1, w + 1):
                if p not in (j, j + 1):
                    union(up(p), dn(p))
            if choice[k] == 0:
                union(up(j), dn(j))
                union(up(j + 1), dn(j + 1))
            else:
                union(up(j), up(j + 1))
                union(dn(j), dn(j + 1))
            k += 1
    nodes = [("n", t, p) for t, w in enumerate(ws) for p in range(1, w + 1)]
    return len({find(v) for v in nodes})


def brute_bracket(slices) -> dict:
    """Bracket as {exponent: coefficient} from the full state sum."""
    signs = [s.sign for s in slices if s.kind == CROSS]
    A = sympy.Symbol("A")
    d = -A**2 - A**-2
    total = 0
    for choice in itertools.product((0, 1), repeat=len(signs)):
        weight = 1
        for c, sg in zip(choice, signs):
            weight *= A**sg if c == 0 else A**-sg
        total += weight * d ** _loops_after_smoothing(slices, choice)
    # shift into an ordinary polynomial to read off exponents
    shift = 4 * len(signs) + 4 * len(slices) + 4
    poly = sympy.Poly(sympy.expand(total * A**shift), A)
    return {int(m[0]) - shift: int(c) for m, c in poly.terms() if c}


# ---------------------------------------------------------------------------
# Alexander polynomial of an orientable tri-plane diagram, from the group
# presented by the bridge-point meridians and the Wirtinger relations of the
# three tangles


def _tangle_relations(slices, tag, colour):
    """Rows {generator: coefficient} for one cup-free tangle word."""
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    n = len(slices)
    ws = widths(slices)
    seg = lambda lvl, p: ("x", p) if lvl == n else (tag, lvl, p)
    # strand links between consecutive levels: (top node, bottom node, is_over/under)
    links = []
    crossings = []
    for t, s in enumerate(slices):
        w = ws[t]
        if s.kind == CAP:
            union(seg(t + 1, s.pos), seg(t + 1, s.pos + 1))
            for p in range(1, w + 1):
                q = p if p < s.pos else p + 2
                union(seg(t, p), seg(t + 1, q))
                links.append((seg(t, p), seg(t + 1, q)))
            links.append(("cap", seg(t + 1, s.pos), seg(t + 1, s.pos + 1)))
        else:
            j = s.pos
            for p in range(1, w + 1):
                if p not in (j, j + 1):
                    union(seg(t, p), seg(t + 1, p))
                    links.append((seg(t, p), seg(t + 1, p)))
            if s.sign > 0:
                over = (seg(t, j + 1), seg(t + 1, j))
                under = (seg(t, j), seg(t + 1, j + 1))
            else:
                over = (seg(t, j), seg(t + 1, j + 1))
                under = (seg(t, j + 1), seg(t + 1, j))
            union(*over)
            links.append(over)
            links.append(("under",) + under)
            crossings.append((s.sign, over, under))
    # orientation: walk each arc from its colour-0 endpoint
    down = {}
    adj: dict = {}
    for ln in links:
        if ln[0] == "cap":
            a, b = ln[1], ln[2]
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        else:
            a, b = ln[-2], ln[-1]
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    level = lambda v: n if v[0] == "x" else v[1]
    for p in range(1, 2 * (ws[-1] // 2) + 1):
        if colour[p] != 0:
            continue
        prev, cur = None, ("x", p)
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                break
            u = nxt[0]
            if level(u) < level(cur):
                down[cur] = -1
                down[u] = -1
            elif level(u) > level(cur):
                down[cur] = 1
                down[u] = 1
            else:  # across a cap: direction flips there
                down[cur] = -1
                down[u] = 1
            prev, cur = cur, u
    rows = []
    for sign, over, under in crossings:
        top_u, bot_u = under
        # writhe sign from the two strand directions
        d_over = down[over[1]]
        d_under = down[bot_u]
        eps = sign * d_over * d_under
        if d_under > 0:
            b_in, c_out = top_u, bot_u
        else:
            b_in, c_out = bot_u, top_u
        a = find(over[0])
        b_in, c_out = find(b_in), find(c_out)
        row: dict = {}
        add = lambda g, v: row.__setitem__(g, row.get(g, 0) + v)
        if eps > 0:
            add(a, 1 - T)
            add(b_in, T)
            add(c_out, -1)
        else:
            add(a, T - 1)
            add(b_in, 1)
            add(c_out, -T)
        rows.append(row)
    return rows, find


def alexander_polynomial(D):
    """Normalized Alexander polynomial (sympy expr in t) of an orientable diagram."""
    pairings = [arc_pairing(t) for t in D.tangles]
    n2 = 2 * D.b
    assert pairing_graph_bipartite(pairings, n2)
    colour = {}
    adj = {v: [] for v in range(1, n2 + 1)}
    for pr in pairings:
        for a, b in pr:
            adj[a].append(b)
            adj[b].append(a)
    for s in adj:
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in colour:
                    colour[u] = 1 - colour[v]
                    stack.append(u)
    rows = []
    finds = []
    for k, t in enumerate(D.tangles):
        r, f = _tangle_relations(t.slices, k, colour)
        rows += [(r_, f) for r_ in r]
        finds.append(f)
    # global generator classes: union of per-tangle classes through shared x_p
    parent: dict = {}

    def g_find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in finds:
        for p in range(1, n2 + 1):
            parent.setdefault(g_find(("x", p)), g_find(("x", p)))
            r = f(("x", p))
            parent[g_find(r)] = g_find(("x", p))
    cols = {}
    mat_rows = []
    for row, _ in rows:
        mr = {}
        for g, v in row.items():
            key = g_find(g)
            mr[key] = mr.get(key, 0) + v
        mat_rows.append(mr)
        for key in mr:
            cols.setdefault(key, len(cols))
    for p in range(1, n2 + 1):
        cols.setdefault(g_find(("x", p)), len(cols))
    ncol = len(cols)
    if ncol == 1:
        return sympy.Integer(1)
    M = sympy.zeros(max(len(mat_rows), 1), ncol)
    for i, mr in enumerate(mat_rows):
        for key, v in mr.items():
            M[i, cols[key]] += v
    M = M[:, 1:]  # drop one generator column
    from sympy import QQ
    S = smith_normal_form(M, domain=QQ[T])
    prod = sympy.Integer(1)
    r = min(S.shape)
    for i in range(ncol - 1):
        if i >= r:
            return sympy.Integer(0)
        prod *= S[i, i]
    return normalize_poly(prod)


def normalize_poly(p):
    """Integer-primitive, t-free at zero, positive leading coefficient."""
    p = sympy.Poly(sympy.expand(p), T)
    if p.is_zero:
        return sympy.Integer(0)
    coeffs = list(p.all_coeffs())
    while coeffs[-1] == 0:
        coeffs.pop()
    q = sympy.Poly(coeffs, T, domain=sympy.QQ)
    _, q = q.clear_denoms()
    q = q.primitive()[1]
    if q.LC() < 0:
        q = -q
    return q.as_expr()


# ---------------------------------------------------------------------------
# Fox p-colourings: orientation-free, computable from either diagram type


class _DSU:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent
        while p.setdefault(x, x) != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _word_arcs(slices, tag, dsu, bottom=None, marks_join=True):
    """Union diagram segments into arcs; return crossing triples (over, u1, u2)."""
    n = len(slices)
    ws = widths(slices)

    def seg(lvl, p):
        if bottom is not None and lvl == n:
            return bottom(p)
        return (tag, lvl, p)

    rows = []
    for t, s in enumerate(slices):
        w = ws[t]
        j = s.pos
        if s.kind == CAP:
            dsu.union(seg(t + 1, j), seg(t + 1, j + 1))
            for p in range(1, w + 1):
                dsu.union(seg(t, p), seg(t + 1, p if p < j else p + 2))
        elif s.kind == CUP:
            dsu.union(seg(t, j), seg(t, j + 1))
            for p in range(1, w + 1):
                if p < j:
                    dsu.union(seg(t, p), seg(t + 1, p))
                elif p > j + 1:
                    dsu.union(seg(t, p), seg(t + 1, p - 2))
        else:
            for p in range(1, w + 1):
                if p not in (j, j + 1):
                    dsu.union(seg(t, p), seg(t + 1, p))
            if s.kind == CROSS:
                if s.sign > 0:
                    over, under = (seg(t, j + 1), seg(t + 1, j)), (seg(t, j), seg(t + 1, j + 1))
                else:
                    over, under = (seg(t, j), seg(t + 1, j + 1)), (seg(t, j + 1), seg(t + 1, j))
                dsu.union(*over)
                rows.append((over[0], under[0], under[1]))
            else:  # marked vertex: all four edges carry one meridian
                for q in (seg(t, j + 1), seg(t + 1, j), seg(t + 1, j + 1)):
                    dsu.union(seg(t, j), q)
    return rows


def _count_solutions(rows, dsu, extra_nodes, p: int) -> int:
    """p ** dim of the colouring space for relations 2a - b - c = 0."""
    keys: dict = {}
    for node in extra_nodes:
        keys.setdefault(dsu.find(node), len(keys))
    mat = []
    for a, b, c in rows:
        for v in (a, b, c):
            keys.setdefault(dsu.find(v), len(keys))
        r = [0] * 0
        mat.append((dsu.find(a), dsu.find(b), dsu.find(c)))
    n = len(keys)
    M = []
    for a, b, c in mat:
        r = [0] * n
        r[keys[a]] += 2
        r[keys[b]] -= 1
        r[keys[c]] -= 1
        M.append([x % p for x in r])
    rank = _rank_mod_p(M, n, p)
    return p ** (n - rank)


def _rank_mod_p(M, n, p) -> int:
    M = [row[:] for row in M]
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(M)) if M[i][col] % p), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                f = M[i][col]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def fox_colourings_word(slices, p: int) -> int:
    """Colourings of a closed word; marked vertices identify their four edges."""
    dsu = _DSU()
    rows = _word_arcs(tuple(slices), "w", dsu)
    nodes = [("w", t, q) for t, w in enumerate(widths(slices)) for q in range(1, w + 1)]
    return _count_solutions(rows, dsu, nodes, p)


def fox_colourings_triplane(D, p: int) -> int:
    dsu = _DSU()
    rows = []
    for k, t in enumerate(D.tangles):
        rows += _word_arcs(t.slices, k, dsu, bottom=lambda q: ("x", q))
    nodes = [("x", q) for q in range(1, 2 * D.b + 1)]
    return _count_solutions(rows, dsu, nodes, p)
