"""Generators for the standard diagram families."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

from .diagram import TriPlaneDiagram, connected_sum, make_diagram, mirror_slices
from .words import TangleWord, WordError, parse_slices


class FamilyError(ValueError):
    pass


def _d(a: str, b: str, c: str) -> TriPlaneDiagram:
    return make_diagram(parse_slices(a), parse_slices(b), parse_slices(c))


def sphere() -> TriPlaneDiagram:
    return _d("cap1", "cap1", "cap1")


def projective_plus() -> TriPlaneDiagram:
    return _d("cap1 cap3", "cap1 cap2", "cap1 cap3 x2+")


def projective_minus() -> TriPlaneDiagram:
    return _d("cap1 cap3", "cap1 cap2", "cap1 cap3 x2-")


def torus1() -> TriPlaneDiagram:
    # pairings {12,34,56}, {16,25,34}, {14,23,56}: each pair of them is one circle
    return _d("cap1 cap3 cap4", "cap1 cap2 cap3", "cap1 cap2 cap5")


def p11() -> TriPlaneDiagram:
    """One-crossing diagram of P(1,1), reached from P+ # P- by tri-plane moves."""
    return _d("cap1 cap2 cap5", "cap1 cap2 cap4 x3-", "cap1 cap3 cap4")


def mirror(D: TriPlaneDiagram) -> TriPlaneDiagram:
    """Mirror image: reflect every tangle over a vertical line."""
    return TriPlaneDiagram(tuple(TangleWord(t.b, mirror_slices(t.slices)) for t in D.tangles))


def _sum(parts) -> TriPlaneDiagram:
    return reduce(connected_sum, parts)


def torus(g: int) -> TriPlaneDiagram:
    if g < 1:
        raise FamilyError("genus must be at least 1")
    return _sum([torus1()] * g)


def p_nn(n: int) -> TriPlaneDiagram:
    """P(n,n) with one crossing: P(1,1) summed with n-1 tori."""
    if n < 1:
        raise FamilyError("n must be at least 1")
    return _sum([p11()] + [torus1()] * (n - 1))


def p_n1n(n: int) -> TriPlaneDiagram:
    """P(n+1,n) with one crossing: P+ summed with n tori."""
    if n < 0:
        raise FamilyError("n must be non-negative")
    return _sum([projective_plus()] + [torus1()] * n)


def p(n: int, m: int) -> TriPlaneDiagram:
    """Connected sum of n copies of P+ and m copies of P-, with max(1,|n-m|) crossings."""
    if n < 0 or m < 0 or n + m < 1:
        raise FamilyError("need n, m >= 0 with n + m >= 1")
    if n < m:
        return mirror(p(m, n))
    if n == m:
        return p_nn(n)
    return _sum([p_n1n(m)] + [projective_plus()] * (n - m - 1))


# ---------------------------------------------------------------------------
# spun two-bridge knots


def spun_two_bridge(plat: str | tuple) -> TriPlaneDiagram:
    from .spun import spun_diagram

    return spun_diagram(plat)


# ---------------------------------------------------------------------------
# family spec strings


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple = ()


def parse_family(text: str) -> FamilySpec:
    t = text.strip()
    if t == "sphere":
        return FamilySpec("sphere")
    if t in ("p+", "p+:"):
        return FamilySpec("p+")
    if t in ("p-", "p-:"):
        return FamilySpec("p-")
    m = re.fullmatch(r"torus:(\d+)", t)
    if m:
        return FamilySpec("torus", (int(m.group(1)),))
    m = re.fullmatch(r"p:(\d+),(\d+)", t)
    if m:
        return FamilySpec("p", (int(m.group(1)), int(m.group(2))))
    m = re.fullmatch(r"spun:(.+)", t)
    if m:
        return FamilySpec("spun", (m.group(1).strip(),))
    raise FamilyError(f"unknown family {text!r}")


def generate(spec: FamilySpec | str) -> TriPlaneDiagram:
    if isinstance(spec, str):
        spec = parse_family(spec)
    f, a = spec.family, spec.params
    if f == "sphere":
        return sphere()
    if f == "p+":
        return projective_plus()
    if f == "p-":
        return projective_minus()
    if f == "torus":
        return torus(*a)
    if f == "p":
        return p(*a)
    if f == "spun":
        try:
            return spun_two_bridge(a[0])
        except WordError as exc:
            raise FamilyError(str(exc)) from None
    raise FamilyError(f"unknown family {f!r}")
