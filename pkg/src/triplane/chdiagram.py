"""Marked (ch-) diagrams: resolutions, bridge position and conversion to tri-plane form."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .diagram import TriPlaneDiagram
from .moves import Move, MoveError, apply_local_move, neutral_moves, reducing_moves
from .search import (
    SearchBudget,
    _best_first,
    certify_unlink,
    commute_normal_form,
    commute_then_reduce,
)
from .words import (
    CAP,
    CUP,
    MARK,
    Slice,
    TangleWord,
    WordError,
    cap,
    crossing_count,
    cup,
    format_slices,
    parse_slices,
    reflect_slices,
    trace,
    widths,
)


class ConversionError(ValueError):
    """kind is "input" (malformed word), "refuted" or "budget"."""

    def __init__(self, message: str, kind: str = "input"):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class MarkedWord:
    slices: tuple

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(self.slices))
        ws = widths(self.slices)  # raises on illegal slices
        if ws[-1] != 0:
            raise WordError(f"marked word ends at width {ws[-1]}")

    @property
    def marks(self) -> int:
        return sum(1 for s in self.slices if s.kind == MARK)

    def __str__(self) -> str:
        return format_ch(self)


def parse_ch(text: str) -> MarkedWord:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "chdiagram v1":
        raise WordError("expected header 'chdiagram v1'")
    if len(lines) != 2 or not lines[1].startswith("link:"):
        raise WordError("expected exactly one 'link:' line")
    return MarkedWord(parse_slices(lines[1][len("link:"):]))


def format_ch(M: MarkedWord, comment: str = "") -> str:
    head = "".join(f"# {ln}\n" for ln in comment.splitlines())
    body = format_slices(M.slices)
    return f"{head}chdiagram v1\nlink: {body}\n".replace("link: \n", "link:\n")


def _parallel(s: Slice, sign: str) -> bool:
    return (sign == "+") == (s.axis == "p")


def resolve_slices(slices: Sequence[Slice], sign: str) -> tuple:
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    out = []
    for s in slices:
        if s.kind != MARK:
            out.append(s)
        elif not _parallel(s, sign):
            out += [cup(s.pos), cap(s.pos)]
    return tuple(out)


def resolve(M: MarkedWord | Sequence[Slice], sign: str) -> tuple:
    """Replace every marked vertex by its parallel or turnback smoothing."""
    slices = M.slices if isinstance(M, MarkedWord) else tuple(M)
    return resolve_slices(slices, sign)


@dataclass
class ChValidation:
    plus: object
    minus: object

    @property
    def status(self) -> str:
        st = {self.plus.status, self.minus.status}
        if "refuted" in st:
            return "refuted"
        if st == {"certified"}:
            return "certified"
        return "unknown"

    def summary(self) -> str:
        return f"{self.status.capitalize()} (+:{self.plus}, -:{self.minus})"


def validate_ch(M: MarkedWord, certifier: Callable | None = None) -> ChValidation:
    certifier = certifier or certify_unlink
    return ChValidation(certifier(resolve(M, "+")), certifier(resolve(M, "-")))


def surface_chi(M: MarkedWord, v: ChValidation) -> Optional[int]:
    """minima + maxima - saddles, from certified component counts."""
    if v.status != "certified":
        return None
    return v.plus.components + v.minus.components - M.marks


# ---------------------------------------------------------------------------
# bridge position


_PHASE = {CAP: 0, MARK: 1, CUP: 2}


def bridge_diagnostic(slices: Sequence[Slice]) -> str:
    """Empty string if the word factors as caps/crossings, marks, crossings/cups."""
    kinds = [s.kind for s in slices]
    marks = [i for i, k in enumerate(kinds) if k == MARK]
    caps = [i for i, k in enumerate(kinds) if k == CAP]
    cups = [i for i, k in enumerate(kinds) if k == CUP]
    if caps and cups and max(caps) > min(cups):
        return f"cap at slice {max(caps) + 1} lies below cup at slice {min(cups) + 1}"
    if marks:
        lo, hi = min(marks), max(marks)
        if caps and max(caps) > lo:
            return f"cap at slice {max(caps) + 1} lies below mark at slice {lo + 1}"
        if cups and min(cups) < hi:
            return f"cup at slice {min(cups) + 1} lies above mark at slice {hi + 1}"
        for i in range(lo, hi + 1):
            if kinds[i] != MARK:
                return f"slice {i + 1} separates the marks"
        # one level means every mark sits on its own pair of strands
        for a in range(lo, hi + 1):
            for c in range(a + 1, hi + 1):
                if abs(slices[a].pos - slices[c].pos) < 2:
                    return f"marks at slices {a + 1} and {c + 1} share a strand"
    return ""


def is_bridge_position(M: MarkedWord | Sequence[Slice]) -> tuple[bool, str]:
    slices = M.slices if isinstance(M, MarkedWord) else tuple(M)
    d = bridge_diagnostic(slices)
    return (not d), d


def _disorder(w: tuple) -> tuple:
    bad = 0
    seen = [0, 0, 0]
    for s in w:
        ph = _PHASE.get(s.kind)
        if ph is None:
            continue
        bad += sum(seen[ph + 1:])
        seen[ph] += 1
    marks = [i for i, s in enumerate(w) if s.kind == MARK]
    gap = 0
    if marks:
        gap = sum(1 for s in w[min(marks):max(marks) + 1] if s.kind != MARK)
    return (bad + gap, crossing_count(w), len(w))


def _planar_neighbours(w: tuple):
    for m in neutral_moves(w):
        if m.name != "commute":
            continue
        try:
            yield m, apply_local_move(w, m)
        except MoveError:
            pass
    for m in reducing_moves(w):
        if m.name in ("snake", "slide", "r1", "r2", "kink"):
            try:
                yield m, apply_local_move(w, m)
            except MoveError:
                pass


def normalize_to_bridge_position(M: MarkedWord, budget: SearchBudget | None = None):
    """Best-effort rewrite into bridge position; returns (word, moves) or None."""
    budget = budget or SearchBudget(max_states=10_000)
    goal = lambda w: not bridge_diagnostic(w)
    end, path, ok = _best_first(M.slices, _planar_neighbours, _disorder, goal, budget)
    if not ok:
        return None
    return MarkedWord(end), path


@dataclass(frozen=True)
class BridgeSplit:
    upper: tuple      # caps, crossings and all marks
    lower: tuple      # crossings and cups
    level: int        # number of slices above the split


def split_bridge(M: MarkedWord) -> BridgeSplit:
    ok, why = is_bridge_position(M)
    if not ok:
        raise ConversionError(f"not in bridge position: {why}")
    s = M.slices
    marks = [i for i, x in enumerate(s) if x.kind == MARK]
    if marks:
        level = max(marks) + 1
    else:
        caps = [i for i, x in enumerate(s) if x.kind == CAP]
        level = max(caps) + 1
    return BridgeSplit(s[:level], s[level:], level)


# ---------------------------------------------------------------------------
# cup elimination


def _cup_score(w: tuple) -> tuple:
    return (sum(1 for s in w if s.kind == CUP), crossing_count(w), len(w))


def _tangle_neighbours(rng: random.Random, max_cross: int):
    def gen(w: tuple):
        yield from commute_then_reduce(w)
        moves = [m for m in reducing_moves(w)] + [m for m in neutral_moves(w)]
        n = crossing_count(w)
        if n + 2 <= max_cross:
            for i, s in enumerate(w):
                if s.kind in (CAP, CUP):
                    for d in "LR":
                        for sg in (1, -1):
                            moves.append(Move("slide+", i + 1, (d, sg)))
        rng.shuffle(moves)
        for m in moves:
            try:
                yield m, apply_local_move(w, m)
            except MoveError:
                pass
    return gen


def eliminate_cups(slices: Sequence[Slice], budget: SearchBudget | None = None):
    """Rewrite a generic tangle word into a cup-free one by planar and
    Reidemeister moves.  Returns (word, moves) or raises ConversionError."""
    w = tuple(slices)
    if all(s.kind != CUP for s in w):
        return w, []
    budget = budget or SearchBudget(max_states=10_000)
    rng = random.Random(budget.seed)
    goal = lambda x: all(s.kind != CUP for s in x)
    for allowance in sorted({0, budget.uphill}):
        end, path, ok = _best_first(
            w, _tangle_neighbours(rng, crossing_count(w) + allowance), _cup_score, goal,
            budget, normal=commute_normal_form,
        )
        if ok:
            return end, path
    raise ConversionError(
        f"cup elimination failed within budget; best word has "
        f"{_cup_score(end)[0]} cups: {format_slices(end)}", "budget"
    )


@dataclass
class Conversion:
    diagram: TriPlaneDiagram
    raw: tuple               # (D1, D2, D3) slice words before cup elimination
    logs: tuple              # moves used on D1 and D2


def ch_to_triplane(M: MarkedWord, budget: SearchBudget | None = None,
                   validate: bool = True, certifier: Callable | None = None) -> Conversion:
    """Split at the level below the marks: D1 = upper part resolved -,
    D2 = upper part resolved +, D3 = mirror of the lower part."""
    if validate:
        v = validate_ch(M, certifier)
        if v.status == "refuted":
            raise ConversionError(f"resolutions are not unlinks: {v.summary()}", "refuted")
        if v.status != "certified":
            raise ConversionError(f"could not certify resolutions: {v.summary()}", "budget")
    sp = split_bridge(M)
    b2 = widths(sp.upper)[-1]
    if b2 == 0:
        raise ConversionError("empty split level")
    raw1 = resolve_slices(sp.upper, "-")
    raw2 = resolve_slices(sp.upper, "+")
    raw3 = reflect_slices(sp.lower)
    for k, raw in enumerate((raw1, raw2, raw3), 1):
        if any(trace(raw).closed):
            raise ConversionError(f"split piece {k} contains a closed component")
    w1, log1 = eliminate_cups(raw1, budget)
    w2, log2 = eliminate_cups(raw2, budget)
    b = b2 // 2
    D = TriPlaneDiagram((TangleWord(b, w1), TangleWord(b, w2), TangleWord(b, raw3)))
    return Conversion(D, (raw1, raw2, raw3), (tuple(log1), tuple(log2)))
