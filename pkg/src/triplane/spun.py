"""Spun two-bridge knots.

A two-bridge knot is given as a plat: caps at 1 and 3, a braid word on the
first three strands (generators at positions 1 and 2 only), cups at 3 and 1.

The spun knot gets four bridges.  All crossings sit in the first tangle: the
plat braid on strands 1-3 followed by its inverse moved over to strands 3-5.
The other two tangles are crossingless.
"""

from __future__ import annotations

import re
from typing import Sequence

from .diagram import TriPlaneDiagram
from .words import CROSS, Slice, TangleWord, WordError, cap, component_count, cross, cup

_TOP1 = (cap(1), cap(1), cap(1), cap(6))
_TOP2 = (cap(1), cap(2), cap(3), cap(3))
_TOP3 = (cap(1), cap(1), cap(2), cap(3))


def parse_plat(plat: str | Sequence[Slice]) -> tuple:
    """Read a plat braid: tokens like ``x2+`` or signed generators ``2,-1``."""
    if not isinstance(plat, str):
        word = tuple(plat)
    else:
        toks = [t for t in re.split(r"[,\s]+", plat.strip()) if t]
        word = []
        for t in toks:
            m = re.fullmatch(r"x([12])([+-])", t) or re.fullmatch(r"([+-]?)([12])", t)
            if m is None:
                raise WordError(f"bad plat token {t!r}")
            if t.startswith("x"):
                word.append(cross(int(m.group(1)), 1 if m.group(2) == "+" else -1))
            else:
                word.append(cross(int(m.group(2)), -1 if m.group(1) == "-" else 1))
        word = tuple(word)
    for s in word:
        if s.kind != CROSS or s.pos not in (1, 2):
            raise WordError("plat braids use crossings at positions 1 and 2 only")
    if not word:
        raise WordError("empty plat braid")
    return word


def plat_closure(plat: str | Sequence[Slice]) -> tuple:
    """Link word of the two-bridge knot itself."""
    return (cap(1), cap(3)) + parse_plat(plat) + (cup(3), cup(1))


def _shifted_inverse(beta: tuple, k: int) -> tuple:
    return tuple(cross(s.pos + k, -s.sign) for s in reversed(beta))


def spun_diagram(plat: str | Sequence[Slice]) -> TriPlaneDiagram:
    """Concentrated 4-bridge diagram with twice as many crossings as the plat."""
    beta = parse_plat(plat)
    if component_count(plat_closure(beta)) != 1:
        raise WordError("plat closure is a link, not a knot")
    d1 = _TOP1 + beta + _shifted_inverse(beta, 2)
    return TriPlaneDiagram((TangleWord(4, d1), TangleWord(4, _TOP2), TangleWord(4, _TOP3)))
