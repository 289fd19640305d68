"""Local rewrites of Morse words.

Every move is a planar isotopy or a Reidemeister move, applied to a window of
consecutive slices.  Sites are 1-based slice indices of the window's first
slice (for insertions, the gap before slice ``site``; ``len(word) + 1`` is the
bottom).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .words import CAP, CROSS, CUP, MARK, Slice, cross, widths


class MoveError(ValueError):
    """The move's pattern does not match at the requested site."""


@dataclass(frozen=True)
class Move:
    name: str
    site: int
    args: tuple = ()

    def __str__(self) -> str:
        extra = "".join(f" {a}" for a in self.args)
        return f"{self.name} @ {self.site}{extra}"


# crossing-count change of each move
DELTA_CROSSINGS = {
    "commute": 0, "r3": 0, "twist": 0, "snake": 0, "snake+": 0, "lift": 0,
    "r1": -1, "kink": -1, "r2": -2, "slide": -2,
    "r1+": 1, "r2+": 2, "slide+": 2,
}


def _box(s: Slice) -> tuple[int, int]:
    if s.kind == CAP:
        return 0, 2
    if s.kind == CUP:
        return 2, 0
    return 2, 2


def commute_pair(a: Slice, b: Slice) -> tuple[Slice, Slice] | None:
    """Swap adjacent slices a, b (a first) if they act on disjoint strands."""
    ka_in, ka_out = _box(a)
    kb_in, kb_out = _box(b)
    if b.pos + kb_in <= a.pos:
        return b, a._replace(pos=a.pos + kb_out - kb_in)
    if b.pos >= a.pos + ka_out:
        return b._replace(pos=b.pos - ka_out + ka_in), a
    return None


def r3_triple(a: Slice, b: Slice, c: Slice) -> tuple | None:
    """Braid-like third Reidemeister move on three crossings, or None.

    x(j,p) x(j+1,q) x(j,r)  <->  x(j+1,r) x(j,q) x(j+1,p), valid unless the
    three over/under relations are cyclic (p == r != q).
    """
    if not (a.kind == b.kind == c.kind == CROSS and a.pos == c.pos):
        return None
    if abs(b.pos - a.pos) != 1:
        return None
    if a.sign == c.sign != b.sign:
        return None
    return (cross(b.pos, c.sign), cross(a.pos, b.sign), cross(b.pos, a.sign))


def _slide_reduce(w: tuple, i: int):
    """Cap/cup passing under or over a strand: three slices -> one."""
    if i + 2 >= len(w):
        return None
    a, b, c = w[i], w[i + 1], w[i + 2]
    if a.kind == CAP and b.kind == c.kind == CROSS and b.sign == c.sign:
        j = a.pos
        if b.pos == j + 1 and c.pos == j:
            return (Slice(CAP, j + 1),)
        if j >= 2 and b.pos == j - 1 and c.pos == j:
            return (Slice(CAP, j - 1),)
    if c.kind == CUP and a.kind == b.kind == CROSS and a.sign == b.sign:
        j = c.pos
        if a.pos == j and b.pos == j + 1:
            return (Slice(CUP, j + 1),)
        if j >= 2 and a.pos == j and b.pos == j - 1:
            return (Slice(CUP, j - 1),)
    return None


def _twist(w: tuple, i: int):
    """Carry a crossing around two nested caps or cups.

    A crossing on the two left ends of a nested pair equals the same crossing
    on the two right ends: the twist slides along the parallel arcs.
    """
    if i + 2 >= len(w):
        return None
    a, b, c = w[i], w[i + 1], w[i + 2]
    if a.kind == CROSS and b.kind == CUP and c.kind == CUP and c.pos == b.pos - 1:
        k = b.pos
        if a.pos == k - 1:
            return (cross(k + 1, a.sign), b, c)
        if a.pos == k + 1:
            return (cross(k - 1, a.sign), b, c)
    if c.kind == CROSS and a.kind == CAP and b.kind == CAP and b.pos == a.pos + 1:
        k = a.pos
        if c.pos == k:
            return (a, b, cross(k + 2, c.sign))
        if c.pos == k + 2:
            return (a, b, cross(k, c.sign))
    return None


def _match(w: tuple, move: Move) -> tuple[int, int, tuple]:
    """(start, stop, replacement) for a move, 0-based half-open window."""
    i = move.site - 1
    n = len(w)
    name = move.name
    if name == "commute":
        if 0 <= i < n - 1:
            r = commute_pair(w[i], w[i + 1])
            if r:
                return i, i + 2, r
    elif name == "r1":
        if 0 <= i < n - 1:
            a, b = w[i], w[i + 1]
            if a.kind == CAP and b.kind == CROSS and b.pos == a.pos:
                return i, i + 2, (a,)
            if a.kind == CROSS and b.kind == CUP and a.pos == b.pos:
                return i, i + 2, (b,)
    elif name == "kink":
        if 0 <= i < n - 2:
            a, b, c = w[i], w[i + 1], w[i + 2]
            if a.kind == CAP and b.kind == CROSS and c.kind == CUP and a.pos == c.pos:
                if b.pos in (a.pos - 1, a.pos + 1):
                    return i, i + 3, ()
    elif name == "r2":
        if 0 <= i < n - 1:
            a, b = w[i], w[i + 1]
            if a.kind == b.kind == CROSS and a.pos == b.pos and a.sign == -b.sign:
                return i, i + 2, ()
    elif name == "r3":
        if 0 <= i < n - 2:
            r = r3_triple(w[i], w[i + 1], w[i + 2])
            if r:
                return i, i + 3, r
    elif name == "twist":
        if 0 <= i:
            r = _twist(w, i)
            if r:
                return i, i + 3, r
    elif name == "snake":
        if 0 <= i < n - 1:
            a, b = w[i], w[i + 1]
            if a.kind == CAP and b.kind == CUP and abs(a.pos - b.pos) == 1:
                return i, i + 2, ()
    elif name == "lift":
        # a split circle cap j, cup j is carried to the bottom of a link word
        if 0 <= i and i + 2 < n and w[i].kind == CAP and w[i + 1].kind == CUP \
                and w[i].pos == w[i + 1].pos and widths(w)[-1] == 0:
            return i, n, w[i + 2:] + (Slice(CAP, 1), Slice(CUP, 1))
    elif name == "slide":
        if 0 <= i:
            r = _slide_reduce(w, i)
            if r:
                return i, i + 3, r
    elif name == "r2+":
        j, s = move.args
        if 0 <= i <= n:
            width = widths(w[:i])[-1]
            if 1 <= j <= width - 1:
                return i, i, (cross(j, s), cross(j, -s))
    elif name == "r1+":
        s, = move.args
        if 0 <= i < n and w[i].kind == CAP:
            return i, i + 1, (w[i], cross(w[i].pos, s))
        if 0 <= i < n and w[i].kind == CUP:
            return i, i + 1, (cross(w[i].pos, s), w[i])
    elif name == "snake+":
        j, side = move.args
        if 0 <= i <= n:
            width = widths(w[:i])[-1]
            if 1 <= j <= width:
                if side == "L":
                    return i, i, (Slice(CAP, j), Slice(CUP, j + 1))
                return i, i, (Slice(CAP, j + 1), Slice(CUP, j))
    elif name == "slide+":
        # inverse of slide on a single cap/cup slice; args: direction, sign
        d, s = move.args
        if 0 <= i < n:
            a = w[i]
            width = widths(w[:i])[-1]
            j = a.pos
            if a.kind == CAP and d == "L" and j >= 2:
                # cap(j) == cap(j-1) x(j,s) x(j-1,s)  (strand moves left)
                return i, i + 1, (Slice(CAP, j - 1), cross(j, s), cross(j - 1, s))
            if a.kind == CAP and d == "R" and j <= width:
                return i, i + 1, (Slice(CAP, j + 1), cross(j, s), cross(j + 1, s))
            if a.kind == CUP and d == "L" and j >= 2:
                return i, i + 1, (cross(j - 1, s), cross(j, s), Slice(CUP, j - 1))
            if a.kind == CUP and d == "R" and j + 2 <= width:
                return i, i + 1, (cross(j + 1, s), cross(j, s), Slice(CUP, j + 1))
    else:
        raise MoveError(f"unknown move {name!r}")
    raise MoveError(f"{name} does not match at site {move.site}")


def apply_local_move(word: Sequence[Slice], move: Move) -> tuple:
    w = tuple(word)
    lo, hi, rep = _match(w, move)
    return w[:lo] + tuple(rep) + w[hi:]


def reducing_moves(w: tuple) -> Iterator[Move]:
    """Moves that lower the crossing count or remove a cap/cup pair."""
    n = len(w)
    for i in range(n - 1):
        a, b = w[i], w[i + 1]
        if a.kind == CROSS and b.kind == CROSS and a.pos == b.pos and a.sign == -b.sign:
            yield Move("r2", i + 1)
        if (a.kind == CAP and b.kind == CROSS and a.pos == b.pos) or (
            a.kind == CROSS and b.kind == CUP and a.pos == b.pos
        ):
            yield Move("r1", i + 1)
        if a.kind == CAP and b.kind == CUP and abs(a.pos - b.pos) == 1:
            yield Move("snake", i + 1)
        if i + 2 < n:
            c = w[i + 2]
            if a.kind == CAP and b.kind == CROSS and c.kind == CUP and a.pos == c.pos \
                    and b.pos in (a.pos - 1, a.pos + 1):
                yield Move("kink", i + 1)
            if _slide_reduce(w, i):
                yield Move("slide", i + 1)


def neutral_moves(w: tuple) -> Iterator[Move]:
    """Crossing-preserving moves: commutations, twists and third Reidemeister moves."""
    n = len(w)
    for i in range(n - 1):
        if commute_pair(w[i], w[i + 1]):
            yield Move("commute", i + 1)
        if i + 2 < n and r3_triple(w[i], w[i + 1], w[i + 2]):
            yield Move("r3", i + 1)
        if _twist(w, i):
            yield Move("twist", i + 1)
        if i + 2 < n and w[i].kind == CAP and w[i + 1].kind == CUP \
                and w[i].pos == w[i + 1].pos and not has_marks(w) and widths(w)[-1] == 0:
            yield Move("lift", i + 1)


def legal_moves(w: tuple, uphill: bool = False) -> Iterator[Move]:
    yield from reducing_moves(w)
    yield from neutral_moves(w)
    if uphill:
        ws = widths(w)
        for i in range(len(w) + 1):
            for j in range(1, ws[i]):
                for s in (1, -1):
                    yield Move("r2+", i + 1, (j, s))


def has_marks(w: Sequence[Slice]) -> bool:
    return any(s.kind == MARK for s in w)
