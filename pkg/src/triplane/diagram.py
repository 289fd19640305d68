"""Tri-plane diagrams: three trivial tangle words on a common set of 2b points."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .moves import Move, MoveError, apply_local_move
from .words import (
    CAP,
    CROSS,
    Slice,
    TangleWord,
    WordError,
    arc_pairing,
    cap,
    closure,
    cross,
    format_tangle,
    parse_tangle_word,
    trace,
    widths,
    writhe,
)


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class TriPlaneDiagram:
    tangles: tuple

    def __post_init__(self):
        ts = tuple(self.tangles)
        object.__setattr__(self, "tangles", ts)
        if len(ts) != 3:
            raise DiagramError("a tri-plane diagram has exactly three tangles")
        bs = {t.b for t in ts}
        if len(bs) != 1:
            raise DiagramError(f"mismatched strand counts {[t.b for t in ts]}")
        for k, t in enumerate(ts):
            if not t.trivial:
                raise DiagramError(f"D{k + 1} is not a trivial tangle word (has cups)")

    @property
    def b(self) -> int:
        return self.tangles[0].b

    @property
    def crossings(self) -> tuple:
        return tuple(t.crossings for t in self.tangles)

    @property
    def c(self) -> int:
        return sum(self.crossings)

    def closures(self) -> tuple:
        """D_i followed by the mirror of D_{i+1}, i = 1, 2, 3."""
        t = self.tangles
        return tuple(closure(t[i], t[(i + 1) % 3]) for i in range(3))

    def key(self) -> tuple:
        return tuple(t.slices for t in self.tangles)

    def __str__(self) -> str:
        return format_triplane(self)


def make_diagram(*words: Sequence[Slice], b: int | None = None) -> TriPlaneDiagram:
    """Build a diagram from three slice sequences; b is inferred if omitted."""
    if len(words) == 1 and len(words[0]) == 3 and not isinstance(words[0][0], Slice):
        words = tuple(words[0])
    out = []
    for w in words:
        w = tuple(w)
        bb = b if b is not None else widths(w)[-1] // 2
        out.append(TangleWord(bb, w))
    return TriPlaneDiagram(tuple(out))


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class InvariantReport:
    b: int
    crossings: tuple
    patch_counts: Optional[tuple]
    chi: Optional[int]
    e: int
    orientable: bool
    concentrated: bool

    @property
    def c(self) -> int:
        return sum(self.crossings)

    def as_line(self) -> str:
        def show(v):
            if v is None:
                return "?"
            if isinstance(v, bool):
                return "true" if v else "false"
            return str(v)

        pc = "?" if self.patch_counts is None else ",".join(map(str, self.patch_counts))
        return (
            f"b={self.b} c={self.c} chi={show(self.chi)} e={self.e} "
            f"orientable={show(self.orientable)} concentrated={show(self.concentrated)} "
            f"crossings={','.join(map(str, self.crossings))} patches={pc}"
        )


def normal_euler(D: TriPlaneDiagram) -> int:
    return sum(writhe(L) for L in D.closures())


def pairing_graph_bipartite(pairings: Sequence[Sequence[tuple]], n: int) -> bool:
    """Two-colour the points 1..n so that every pair joins opposite colours."""
    adj: dict = {v: [] for v in range(1, n + 1)}
    for pairing in pairings:
        for a, b in pairing:
            adj[a].append(b)
            adj[b].append(a)
    colour: dict = {}
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
                elif colour[u] == colour[v]:
                    return False
    return True


def is_orientable(D: TriPlaneDiagram) -> bool:
    return pairing_graph_bipartite([arc_pairing(t) for t in D.tangles], 2 * D.b)


def is_concentrated(D: TriPlaneDiagram) -> bool:
    return sum(1 for n in D.crossings if n) <= 1


def invariants(D: TriPlaneDiagram, patch_counts: Optional[tuple] = None) -> InvariantReport:
    """Invariant report.  Patch counts must come from certified closures.

    Crossingless closures are unlinks by definition, so their component counts
    are filled in automatically; otherwise pass counts from a certifier (see
    ``validate_triplane``) or they are reported unknown.
    """
    if patch_counts is None:
        cls = D.closures()
        if all(L.crossings == 0 for L in cls):
            patch_counts = tuple(trace(L.slices).ncomp for L in cls)
    chi = None if patch_counts is None else sum(patch_counts) - D.b
    return InvariantReport(
        b=D.b,
        crossings=D.crossings,
        patch_counts=patch_counts,
        chi=chi,
        e=normal_euler(D),
        orientable=is_orientable(D),
        concentrated=is_concentrated(D),
    )


@dataclass
class TriPlaneValidation:
    certifications: tuple
    status: str = field(init=False)

    def __post_init__(self):
        states = [c.status for c in self.certifications]
        if "refuted" in states:
            self.status = "refuted"
        elif all(s == "certified" for s in states):
            self.status = "certified"
        else:
            self.status = "unknown"

    @property
    def patch_counts(self) -> Optional[tuple]:
        if self.status != "certified":
            return None
        return tuple(c.components for c in self.certifications)

    def summary(self) -> str:
        parts = []
        for c in self.certifications:
            if c.status == "certified":
                parts.append(str(c.components))
            elif c.status == "refuted":
                parts.append("R")
            else:
                parts.append("?")
        return f"{self.status.capitalize()} ({','.join(parts)})"


def validate_triplane(D: TriPlaneDiagram, certifier: Callable | None = None) -> TriPlaneValidation:
    """Certify the three closures as unlinks (or refute them)."""
    if certifier is None:
        from .search import certify_unlink as certifier
    return TriPlaneValidation(tuple(certifier(L) for L in D.closures()))


def certified_invariants(D: TriPlaneDiagram, certifier: Callable | None = None) -> InvariantReport:
    v = validate_triplane(D, certifier)
    return invariants(D, v.patch_counts)


# ---------------------------------------------------------------------------
# word surgery helpers


def mirror_slices(slices: Sequence[Slice]) -> tuple:
    """Reflect a word over a vertical line in the diagram plane."""
    out = []
    w = 0
    for s in slices:
        if s.kind == CAP:
            out.append(s._replace(pos=w + 2 - s.pos))
            w += 2
        elif s.kind == CROSS:
            out.append(s._replace(pos=w - s.pos, sign=-s.sign))
        elif s.kind == "cup":
            out.append(s._replace(pos=w - s.pos))
            w -= 2
        else:
            out.append(s._replace(pos=w - s.pos))
    return tuple(out)


def shift_slices(slices: Sequence[Slice], k: int) -> tuple:
    return tuple(s._replace(pos=s.pos + k) for s in slices)


def _free_cap(slices: tuple, endpoint: int):
    """Locate the cap whose leg ends at `endpoint` untouched by later slices.

    Returns (index, leg) with leg 0 for a left leg and 1 for a right leg, or
    None if that strand meets a crossing after its maximum.
    """
    pos = endpoint
    for t in range(len(slices) - 1, -1, -1):
        s = slices[t]
        if s.kind == CROSS:
            if s.pos in (pos, pos - 1):
                return None
        elif s.kind == CAP:
            if s.pos == pos:
                return t, 0
            if s.pos + 1 == pos:
                return t, 1
            if s.pos < pos:
                pos -= 2
    return None


def _remove_cap(slices: tuple, idx: int) -> tuple:
    """Delete cap slices[idx] whose legs are never touched afterwards."""
    q = slices[idx].pos
    out = list(slices[:idx])
    for s in slices[idx + 1:]:
        if s.kind == CAP:
            if s.pos <= q:
                q += 2
                out.append(s)
            elif s.pos == q + 1:
                raise DiagramError("cap inserted between the legs")
            else:
                out.append(s._replace(pos=s.pos - 2))
        else:
            if s.pos + 1 < q:
                out.append(s)
            elif s.pos > q + 1:
                out.append(s._replace(pos=s.pos - 2))
            else:
                raise DiagramError("slice touches a removed leg")
    return tuple(out)


def _splice_left(A: tuple, bA: int, B: tuple) -> tuple | None:
    """A to the left of B, A's last endpoint joined to B's first.

    Needs B's first endpoint to be a crossing-free left leg.
    """
    hit = _free_cap(B, 1)
    if hit is None or hit[1] != 0:
        return None
    idx, _ = hit
    k = 2 * bA
    Bs = list(shift_slices(B, k))
    # the born left leg sits at k+1; the right leg becomes A's strand at k
    out = list(A) + Bs[:idx]
    for s in Bs[idx + 1:]:
        out.append(s._replace(pos=s.pos - 2))
    return tuple(out)


def boundary_sum(A: TangleWord, B: TangleWord) -> TangleWord:
    """Join the rightmost endpoint of A to the leftmost endpoint of B."""
    w = _splice_left(A.slices, A.b, B.slices)
    if w is None:
        # mirror picture: B's leftmost becomes rightmost and vice versa
        m = _splice_left(mirror_slices(B.slices), B.b, mirror_slices(A.slices))
        if m is None:
            raise DiagramError("no crossing-free splice between these tangles")
        w = mirror_slices(m)
    return TangleWord(A.b + B.b - 1, w)


def connected_sum(D: TriPlaneDiagram, E: TriPlaneDiagram) -> TriPlaneDiagram:
    """Boundary connected sum of corresponding tangles, with no new crossings.

    Raises DiagramError when some tangle pair has crossings on both joined
    strands, in either order of the summands.
    """
    try:
        return TriPlaneDiagram(tuple(boundary_sum(a, b) for a, b in zip(D.tangles, E.tangles)))
    except DiagramError:
        return TriPlaneDiagram(tuple(boundary_sum(b, a) for a, b in zip(D.tangles, E.tangles)))


def splittable(D: TriPlaneDiagram, E: TriPlaneDiagram) -> bool:
    try:
        connected_sum(D, E)
        return True
    except DiagramError:
        return False


def split_union(D: TriPlaneDiagram, E: TriPlaneDiagram) -> TriPlaneDiagram:
    """Distant union: E drawn to the right of D."""
    return TriPlaneDiagram(tuple(
        TangleWord(a.b + b.b, a.slices + shift_slices(b.slices, 2 * a.b))
        for a, b in zip(D.tangles, E.tangles)
    ))


# ---------------------------------------------------------------------------
# moves


def mutual_braid(D: TriPlaneDiagram, j: int, sign: int) -> TriPlaneDiagram:
    if not 1 <= j <= 2 * D.b - 1:
        raise DiagramError(f"braid index {j} out of range 1..{2 * D.b - 1}")
    if sign not in (1, -1):
        raise DiagramError("sign must be +1 or -1")
    x = cross(j, sign)
    return TriPlaneDiagram(tuple(TangleWord(t.b, t.slices + (x,)) for t in D.tangles))


def mutual_unbraid(D: TriPlaneDiagram) -> TriPlaneDiagram:
    """Inverse of mutual_braid: drop a crossing shared by all three bottoms."""
    lasts = {t.slices[-1] if t.slices else None for t in D.tangles}
    if len(lasts) != 1:
        raise DiagramError("tangles do not end with a common crossing")
    (s,) = lasts
    if s is None or s.kind != CROSS:
        raise DiagramError("tangles do not end with a common crossing")
    return TriPlaneDiagram(tuple(TangleWord(t.b, t.slices[:-1]) for t in D.tangles))


def interior_move(D: TriPlaneDiagram, index: int, move: Move) -> TriPlaneDiagram:
    """Apply a local move inside tangle D_index (1-based)."""
    if index not in (1, 2, 3):
        raise DiagramError("tangle index must be 1, 2 or 3")
    t = D.tangles[index - 1]
    w = apply_local_move(t.slices, move)
    if any(s.kind != CAP and s.kind != CROSS for s in w):
        raise MoveError(f"{move} leaves a cup in a trivial tangle word")
    ts = list(D.tangles)
    ts[index - 1] = TangleWord(t.b, w)
    return TriPlaneDiagram(tuple(ts))


# Stabilization templates, both appended at the bottom of the three words at
# endpoint p.  A new arc is added next to endpoint p: in two tangles it joins
# the new points p+1, p+2 (cap p+1), in the odd tangle it joins p, p+1 (cap p)
# so that the odd tangle's old arc at p is pushed out to p+2.  Kind 2 is the
# left-right reflection: the odd tangle gets cap p+1 and the others cap p.
# In both cases two closures pick up a cancelling cap/cup snake and the third
# gains a split unknotted circle, so b and one patch count rise by one.


def _stab_caps(kind: int, p: int, odd: int) -> tuple:
    if kind == 1:
        plain, special = p + 1, p
    elif kind == 2:
        plain, special = p, p + 1
    else:
        raise DiagramError(f"unknown stabilization kind {kind}")
    return tuple(special if k == odd else plain for k in range(1, 4))


def stabilize(D: TriPlaneDiagram, kind: int, site: tuple) -> TriPlaneDiagram:
    """site = (p, odd): endpoint p in 1..2b and odd tangle index 1..3."""
    p, odd = site
    if not 1 <= p <= 2 * D.b or odd not in (1, 2, 3):
        raise DiagramError(f"bad stabilization site {site}")
    caps = _stab_caps(kind, p, odd)
    return TriPlaneDiagram(tuple(
        TangleWord(t.b + 1, t.slices + (cap(c),)) for t, c in zip(D.tangles, caps)
    ))


def _arc_cap(slices: tuple, left: int):
    """Index of a crossing-free cap forming the arc (left, left+1), or None."""
    hit = _free_cap(slices, left)
    if hit is None or hit[1] != 0:
        return None
    other = _free_cap(slices, left + 1)
    if other is None or other != (hit[0], 1):
        return None
    return hit[0]


def destabilize(D: TriPlaneDiagram, kind: int, site: tuple) -> TriPlaneDiagram:
    """Remove a stabilization pattern at (p, odd).

    The template arcs need not sit at the bottom of the words: any
    crossing-free arc between adjacent endpoints can be commuted there by
    planar isotopy, so it is matched wherever it occurs.
    """
    p, odd = site
    if D.b < 2 or not 1 <= p <= 2 * D.b - 2 or odd not in (1, 2, 3):
        raise DiagramError(f"bad destabilization site {site}")
    caps = _stab_caps(kind, p, odd)
    out = []
    for t, c in zip(D.tangles, caps):
        idx = _arc_cap(t.slices, c)
        if idx is None:
            raise DiagramError(f"no {kind}-destabilization template at {site}")
        out.append(TangleWord(t.b - 1, _remove_cap(t.slices, idx)))
    return TriPlaneDiagram(tuple(out))


def destabilization_sites(D: TriPlaneDiagram):
    """All (kind, site) pairs at which destabilize applies."""
    if D.b < 2:
        return
    for p in range(1, 2 * D.b - 1):
        arcs = [(_arc_cap(t.slices, p) is not None, _arc_cap(t.slices, p + 1) is not None)
                for t in D.tangles]
        for odd in (1, 2, 3):
            others = [k for k in range(3) if k != odd - 1]
            if arcs[odd - 1][0] and all(arcs[k][1] for k in others):
                yield 1, (p, odd)
            if arcs[odd - 1][1] and all(arcs[k][0] for k in others):
                yield 2, (p, odd)


# ---------------------------------------------------------------------------
# file format


def format_triplane(D: TriPlaneDiagram) -> str:
    lines = ["triplane v1", f"b={D.b}"]
    for k, t in enumerate(D.tangles, 1):
        body = format_tangle(t).split(":", 1)[1]
        lines.append(f"D{k}:{body}")
    return "\n".join(lines) + "\n"


def parse_triplane(text: str) -> TriPlaneDiagram:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "triplane v1":
        raise WordError("expected header 'triplane v1'")
    if len(lines) != 5:
        raise WordError(f"expected 5 lines after comments, found {len(lines)}")
    head = lines[1].replace(" ", "")
    if not head.startswith("b="):
        raise WordError("expected 'b=<INT>' on line 2")
    try:
        b = int(head[2:])
    except ValueError:
        raise WordError(f"bad bridge count {head[2:]!r}") from None
    ts = []
    for k, ln in enumerate(lines[2:], 1):
        tag = f"D{k}:"
        if not ln.startswith(tag):
            raise WordError(f"expected '{tag}' line")
        ts.append(parse_tangle_word(f"b={b}:{ln[len(tag):]}"))
    try:
        return TriPlaneDiagram(tuple(ts))
    except DiagramError as exc:
        raise WordError(str(exc)) from None
