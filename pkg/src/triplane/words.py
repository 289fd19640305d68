"""Morse-word encodings of tangle and link diagrams.

A diagram is read top to bottom as a sequence of slices.  Each slice is one
elementary event at a strand position (1-based):

* ``cap j``   a new arc is born; strands at ``>= j`` shift right by two
* ``cup j``   strands ``j`` and ``j+1`` are joined; strands to the right shift left
* ``x j s``   strands ``j`` and ``j+1`` swap; ``s`` is the crossing sign when
  both strands are oriented downward.  For ``s = +1`` the strand moving
  leftward (top position ``j+1`` to bottom position ``j``) is the over-strand.
* ``mark j a`` a marked vertex between strands ``j`` and ``j+1``; ``a`` says
  whether the ``+`` resolution is parallel (``p``) or a turnback (``t``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

CAP, CUP, CROSS, MARK = "cap", "cup", "x", "mark"


class WordError(ValueError):
    """Raised for malformed or illegal Morse words."""


class Slice(NamedTuple):
    kind: str
    pos: int
    sign: int = 0
    axis: str = ""

    def __str__(self) -> str:
        if self.kind == CROSS:
            return f"x{self.pos}{'+' if self.sign > 0 else '-'}"
        if self.kind == MARK:
            return f"mark{self.pos}{self.axis}"
        return f"{self.kind}{self.pos}"


def cap(j: int) -> Slice:
    return Slice(CAP, j)


def cup(j: int) -> Slice:
    return Slice(CUP, j)


def cross(j: int, sign: int) -> Slice:
    return Slice(CROSS, j, 1 if sign > 0 else -1)


def mark(j: int, axis: str = "p") -> Slice:
    return Slice(MARK, j, 0, axis)


Word = tuple  # tuple[Slice, ...]

# ---------------------------------------------------------------------------
# width profile


def width_delta(s: Slice) -> int:
    if s.kind == CAP:
        return 2
    if s.kind == CUP:
        return -2
    return 0


def check_slice(s: Slice, width: int) -> None:
    if s.kind == CAP:
        ok = 1 <= s.pos <= width + 1
    else:
        ok = 1 <= s.pos <= width - 1
    if not ok:
        raise WordError(f"illegal {s} at width {width}")


def widths(slices: Sequence[Slice], start: int = 0) -> list[int]:
    """Width before each slice plus the final width; raises on illegal slices."""
    out = [start]
    w = start
    for i, s in enumerate(slices):
        try:
            check_slice(s, w)
        except WordError as exc:
            raise WordError(f"slice {i + 1}: {exc}") from None
        w += width_delta(s)
        out.append(w)
    return out


def final_width(slices: Sequence[Slice], start: int = 0) -> int:
    return widths(slices, start)[-1]


def crossing_count(slices: Iterable[Slice]) -> int:
    return sum(1 for s in slices if s.kind == CROSS)


# ---------------------------------------------------------------------------
# word types


@dataclass(frozen=True)
class TangleWord:
    """A b-strand tangle diagram: width 0 at the top, 2b at the bottom.

    Cup-free words are trivial tangle diagrams (every arc has one maximum).
    Words with cups are generic tangle words, the raw output of ch-diagram
    splitting; they must still have no closed components.
    """

    b: int
    slices: tuple

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(self.slices))
        if self.b < 1:
            raise WordError("b must be at least 1")
        if any(s.kind == MARK for s in self.slices):
            raise WordError("tangle words cannot contain marks")
        w = final_width(self.slices)
        if w != 2 * self.b:
            raise WordError(f"final width {w} != 2b = {2 * self.b}")
        if not self.trivial:
            arc_pairing(self)  # rejects closed components

    @property
    def trivial(self) -> bool:
        return all(s.kind != CUP for s in self.slices)

    @property
    def crossings(self) -> int:
        return crossing_count(self.slices)

    def __str__(self) -> str:
        return format_tangle(self)


@dataclass(frozen=True)
class LinkWord:
    """A closed Morse word (width 0 at both ends), without marks."""

    slices: tuple

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(self.slices))
        if any(s.kind == MARK for s in self.slices):
            raise WordError("link words cannot contain marks")
        w = final_width(self.slices)
        if w != 0:
            raise WordError(f"link word ends at width {w}")

    @property
    def crossings(self) -> int:
        return crossing_count(self.slices)

    def __str__(self) -> str:
        return format_link(self.slices)


def tangle(b: int, slices: Iterable[Slice]) -> TangleWord:
    return TangleWord(b, tuple(slices))


def trivial_tangle(slices: Iterable[Slice]) -> TangleWord:
    """Build a tangle word, inferring b from its final width."""
    slices = tuple(slices)
    w = final_width(slices)
    if w % 2 or w == 0:
        raise WordError(f"tangle word ends at width {w}")
    t = TangleWord(w // 2, slices)
    if not t.trivial:
        raise WordError("trivial tangle words cannot contain cups")
    return t


# ---------------------------------------------------------------------------
# text format v1

_TOKEN = re.compile(r"^(?:(cap|cup)(\d+)|x(\d+)([+-])|mark(\d+)([pt]))$")


def parse_slices(text: str) -> tuple:
    out = []
    for k, tok in enumerate(text.split()):
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"syntax error at token {k + 1}: {tok!r}")
        if m.group(1):
            out.append(Slice(m.group(1), int(m.group(2))))
        elif m.group(3):
            out.append(cross(int(m.group(3)), 1 if m.group(4) == "+" else -1))
        else:
            out.append(mark(int(m.group(5)), m.group(6)))
    return tuple(out)


def format_slices(slices: Iterable[Slice]) -> str:
    return " ".join(str(s) for s in slices)


def parse_tangle_word(text: str) -> TangleWord:
    m = re.match(r"^\s*b\s*=\s*(\d+)\s*:(.*)$", text)
    if not m:
        raise WordError(f"syntax error: expected 'b=<INT>:' in {text!r}")
    return TangleWord(int(m.group(1)), parse_slices(m.group(2)))


def format_tangle(t: TangleWord) -> str:
    body = format_slices(t.slices)
    return f"b={t.b}: {body}" if body else f"b={t.b}:"


def parse_link_word(text: str) -> LinkWord:
    m = re.match(r"^\s*link\s*:(.*)$", text)
    if not m:
        raise WordError(f"syntax error: expected 'link:' in {text!r}")
    return LinkWord(parse_slices(m.group(1)))


def format_link(slices: Iterable[Slice]) -> str:
    body = format_slices(slices)
    return f"link: {body}" if body else "link:"


# ---------------------------------------------------------------------------
# strand tracing
#
# Nodes are (level, position) with level 0..n between slices.  Every slice
# contributes edges between level t and level t+1 ("vertical") and possibly
# one edge inside level t+1 (cap) or level t (cup).


@dataclass
class Trace:
    """Strand-level structure of a word.

    ``comp`` maps every node to a component id.  ``direction`` maps the top
    node ``(t, p)`` of each vertical edge of slice ``t`` to +1 when the
    canonical orientation runs downward along it and -1 otherwise.
    """

    widths: list
    comp: dict
    ncomp: int
    direction: dict
    closed: list
    paths: list


def _graph(slices: Sequence[Slice], start: int = 0):
    ws = widths(slices, start)
    adj: dict = {}
    cap_edges = {}
    eid = 0

    def link(a, b):
        nonlocal eid
        adj.setdefault(a, []).append((b, eid))
        adj.setdefault(b, []).append((a, eid))
        eid += 1

    for p in range(1, ws[0] + 1):
        adj.setdefault((0, p), [])
    for t, s in enumerate(slices):
        w = ws[t]
        j = s.pos
        if s.kind == CAP:
            for p in range(1, w + 1):
                link((t, p), (t + 1, p if p < j else p + 2))
            cap_edges[t] = eid
            link((t + 1, j), (t + 1, j + 1))
        elif s.kind == CUP:
            for p in range(1, w + 1):
                if p < j:
                    link((t, p), (t + 1, p))
                elif p > j + 1:
                    link((t, p), (t + 1, p - 2))
            link((t, j), (t, j + 1))
        else:
            for p in range(1, w + 1):
                q = p
                if s.kind == CROSS and p == j:
                    q = j + 1
                elif s.kind == CROSS and p == j + 1:
                    q = j
                link((t, p), (t + 1, q))
    return ws, adj, cap_edges


def _walk(adj, node, via=None):
    """Nodes along a curve from node, leaving by an edge other than via."""
    path = [node]
    first = node
    prev_e = via
    while True:
        nxt = [(v, e) for v, e in adj[node] if e != prev_e]
        if not nxt:
            return path, False
        v, e = nxt[0]
        if v == first:
            return path, True
        path.append(v)
        node, prev_e = v, e


def trace(slices: Sequence[Slice], start: int = 0) -> Trace:
    """Trace strands and orient every component canonically.

    Components are numbered by their earliest cap; arcs entering from the
    top boundary come last.  Each component is oriented so that the left leg
    of its earliest cap runs downward; capless arcs run downward from their
    top endpoint.
    """
    slices = tuple(slices)
    ws, adj, cap_edges = _graph(slices, start)
    comp: dict = {}
    direction: dict = {}
    closed = []
    paths = []

    def add(path, is_closed):
        cid = len(paths)
        for v in path:
            comp[v] = cid
        paths.append(path)
        closed.append(is_closed)
        pairs = list(zip(path, path[1:]))
        if is_closed:
            pairs.append((path[-1], path[0]))
        for a, b in pairs:
            if a[0] + 1 == b[0]:
                direction[a] = 1
            elif b[0] + 1 == a[0]:
                direction[b] = -1

    for t, s in enumerate(slices):
        if s.kind != CAP or (t + 1, s.pos) in comp:
            continue
        left, right = (t + 1, s.pos), (t + 1, s.pos + 1)
        fwd, is_closed = _walk(adj, left, via=cap_edges[t])
        if is_closed:
            add(fwd, True)
        else:
            back, _ = _walk(adj, right, via=cap_edges[t])
            add(list(reversed(back)) + fwd, False)
    for p in range(1, ws[0] + 1):
        if (0, p) not in comp:
            path, _ = _walk(adj, (0, p))
            add(path, False)
    return Trace(ws, comp, len(paths), direction, closed, paths)


def crossing_sign(tr: Trace, t: int, s: Slice) -> int:
    """Writhe sign of the crossing slice s at index t under tr's orientation."""
    return s.sign * tr.direction[(t, s.pos)] * tr.direction[(t, s.pos + 1)]


def arc_pairing(t: TangleWord | Sequence[Slice]) -> tuple:
    """Bottom-endpoint matching of a tangle word as sorted pairs.

    Raises WordError if the word has a closed component.
    """
    slices = t.slices if isinstance(t, TangleWord) else tuple(t)
    tr = trace(slices)
    if any(tr.closed):
        raise WordError("closed component in tangle word")
    n = len(slices)
    pairs = []
    for path in tr.paths:
        ends = sorted(v[1] for v in (path[0], path[-1]))
        if path[0][0] != n or path[-1][0] != n:
            raise WordError("arc does not end on the bottom boundary")
        pairs.append(tuple(ends))
    return tuple(sorted(pairs))


def reflect_slices(slices: Sequence[Slice]) -> tuple:
    """Mirror through the bridge plane: reverse order, cap<->cup, negate signs."""
    out = []
    for s in reversed(tuple(slices)):
        if s.kind == CAP:
            out.append(Slice(CUP, s.pos))
        elif s.kind == CUP:
            out.append(Slice(CAP, s.pos))
        elif s.kind == CROSS:
            out.append(Slice(CROSS, s.pos, -s.sign))
        else:
            out.append(s)
    return tuple(out)


def reflect_tangle(t: TangleWord) -> tuple:
    return reflect_slices(t.slices)


def closure(ti: TangleWord, tj: TangleWord) -> LinkWord:
    """The link diagram D_i followed by the mirror of D_j."""
    if ti.b != tj.b:
        raise WordError(f"mismatched strand counts {ti.b} and {tj.b}")
    return LinkWord(ti.slices + reflect_tangle(tj))


def _slices_of(L) -> tuple:
    return L.slices if hasattr(L, "slices") else tuple(L)


def component_count(L) -> int:
    return trace(_slices_of(L)).ncomp


def component_labels(L) -> dict:
    """Component id of every strand segment, keyed by (level, position)."""
    return dict(trace(_slices_of(L)).comp)


def canonical_orientation(L) -> dict:
    return dict(trace(_slices_of(L)).direction)


def writhe(L, orientation: dict | None = None) -> int:
    slices = _slices_of(L)
    tr = trace(slices)
    if orientation is not None:
        tr.direction = orientation
    return sum(crossing_sign(tr, t, s) for t, s in enumerate(slices) if s.kind == CROSS)


def flip_components(L, flips: Iterable[int]) -> dict:
    """Canonical orientation with the listed components reversed."""
    slices = _slices_of(L)
    tr = trace(slices)
    flips = set(flips)
    return {
        v: (-d if tr.comp[v] in flips else d) for v, d in tr.direction.items()
    }


def linking_matrix(L) -> list:
    """Pairwise linking numbers under the canonical orientation."""
    slices = _slices_of(L)
    tr = trace(slices)
    n = tr.ncomp
    twice = [[0] * n for _ in range(n)]
    for t, s in enumerate(slices):
        if s.kind != CROSS:
            continue
        a, b = tr.comp[(t, s.pos)], tr.comp[(t, s.pos + 1)]
        if a != b:
            sg = crossing_sign(tr, t, s)
            twice[a][b] += sg
            twice[b][a] += sg
    return [[v // 2 for v in row] for row in twice]
