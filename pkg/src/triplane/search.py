"""Bounded rewrite search: unlink certification, diagram simplification, census."""

from __future__ import annotations

import heapq
import itertools
import os
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .bracket import CrossingBoundExceeded, normalized_bracket, unlink_polynomial
from .diagram import (
    DiagramError,
    TriPlaneDiagram,
    destabilization_sites,
    destabilize,
    interior_move,
    mutual_braid,
    mutual_unbraid,
    stabilize,
)
from .moves import Move, MoveError, apply_local_move, commute_pair, neutral_moves, reducing_moves
from .words import CAP, CROSS, CUP, Slice, TangleWord, cap, crossing_count, linking_matrix, trace, widths

DEFAULT_STATES = 100_000
DEFAULT_DEPTH = 64
DEFAULT_TIME_MS = 60_000


def _env_time_ms() -> int:
    v = os.environ.get("TRIPLANE_BUDGET_MS")
    try:
        return int(v) if v else DEFAULT_TIME_MS
    except ValueError:
        return DEFAULT_TIME_MS


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = DEFAULT_STATES
    max_depth: int = DEFAULT_DEPTH
    seed: int = 0
    time_limit_ms: int = field(default_factory=_env_time_ms)
    uphill: int = 2
    bracket_bound: int = 20

    def __post_init__(self):
        for name in ("max_states", "max_depth", "time_limit_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.uphill < 0:
            raise ValueError("uphill must be non-negative")


@dataclass(frozen=True)
class Certification:
    status: str                       # "certified" | "refuted" | "unknown"
    components: Optional[int] = None
    witness: tuple = ()               # moves taking the word to a crossingless one
    reason: str = ""
    obstruction: object = None

    def __str__(self) -> str:
        if self.status == "certified":
            return f"Certified({self.components})"
        if self.status == "refuted":
            return f"Refuted({self.reason})"
        return "Unknown"


def replay(word: Sequence[Slice], moves: Iterable[Move]) -> tuple:
    w = tuple(word)
    for m in moves:
        w = apply_local_move(w, m)
    return w


# ---------------------------------------------------------------------------
# commutation normal form (used to merge search states)


_RANK = {CAP: 0, CROSS: 1, "mark": 2, CUP: 3}
_BOX = {CAP: (0, 2), CUP: (2, 0), CROSS: (2, 2), "mark": (2, 2)}


def _key(s: Slice) -> tuple:
    return (s.pos, _RANK[s.kind], s.sign)


def commute_normal_form(word: Sequence[Slice], limit: int = 0) -> tuple[tuple, list]:
    """Bubble slices upward while they commute to a smaller sort key.

    Returns the rewritten word and the commute moves that produced it.
    """
    w = list(word)
    log: list = []
    limit = limit or len(w) * len(w) + 1
    changed = True
    while changed and len(log) < limit:
        changed = False
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            a_in, a_out = _BOX[a.kind]
            b_in, b_out = _BOX[b.kind]
            # same test as commute_pair, but keys are compared before building slices
            if b.pos + b_in <= a.pos:
                new_pos = b.pos
            elif b.pos >= a.pos + a_out:
                new_pos = b.pos - a_out + a_in
            else:
                continue
            if (new_pos, _RANK[b.kind], b.sign) >= _key(a):
                continue
            w[i], w[i + 1] = commute_pair(a, b)
            log.append(Move("commute", i + 1))
            changed = True
            if len(log) >= limit:
                break
    return tuple(w), log


# ---------------------------------------------------------------------------
# generic best-first search


def _best_first(start, neighbours: Callable, score: Callable, goal: Callable,
                budget: SearchBudget, normal: Callable | None = None):
    """Returns (state, path) for the first goal state popped, else (best, path, False).

    `neighbours(state)` yields (label, next_state), where a list label stands
    for several moves; `normal(state)` may rewrite a state into a
    representative, returning (state, labels).
    """
    deadline = time.monotonic() + budget.time_limit_ms / 1000.0
    if normal:
        start, pre = normal(start)
    else:
        pre = []
    tie = itertools.count()
    parents: dict = {start: (None, tuple(pre))}
    depth = {start: 0}
    heap = [(score(start), next(tie), start)]
    best = start
    best_score = score(start)
    expanded = 0
    while heap:
        sc, _, st = heapq.heappop(heap)
        if goal(st):
            return st, _path(parents, st), True
        if sc < best_score:
            best, best_score = st, sc
        expanded += 1
        if expanded >= budget.max_states or time.monotonic() > deadline:
            break
        if depth[st] >= budget.max_depth:
            continue
        for label, nxt in neighbours(st):
            extra: list = []
            if normal:
                nxt, extra = normal(nxt)
            if nxt in parents:
                continue
            labels = tuple(label) if isinstance(label, list) else (label,)
            parents[nxt] = (st, labels + tuple(extra))
            depth[nxt] = depth[st] + 1
            heapq.heappush(heap, (score(nxt), next(tie), nxt))
    return best, _path(parents, best), False


def _path(parents: dict, st) -> list:
    out: list = []
    while st is not None:
        prev, labels = parents[st]
        out.append(labels)
        st = prev
    flat: list = []
    for labels in reversed(out):
        flat.extend(labels)
    return flat


# ---------------------------------------------------------------------------
# unlink certification


def commute_then_reduce(w: tuple):
    """Reductions that only appear after one commute.

    The commute normal form can undo such a commute, so the pair is offered
    as a single step.
    """
    for m in neutral_moves(w):
        if m.name != "commute":
            continue
        v = apply_local_move(w, m)
        for r in reducing_moves(v):
            try:
                yield [m, r], apply_local_move(v, r)
            except MoveError:
                continue


def _link_neighbours(uphill_cap: int, rng: random.Random):
    def gen(w: tuple):
        yield from commute_then_reduce(w)
        moves = list(reducing_moves(w)) + list(neutral_moves(w))
        n = crossing_count(w)
        if n + 2 <= uphill_cap:
            ws = widths(w)
            for i in range(len(w) + 1):
                for j in range(1, ws[i]):
                    for s in (1, -1):
                        moves.append(Move("r2+", i + 1, (j, s)))
        rng.shuffle(moves)
        for m in moves:
            try:
                yield m, apply_local_move(w, m)
            except MoveError:
                continue
    return gen


def _link_score(w: tuple) -> tuple:
    return (crossing_count(w), len(w))


def refute_unlink(L, bound: int = 20) -> Optional[Certification]:
    slices = L.slices if hasattr(L, "slices") else tuple(L)
    lk = linking_matrix(slices)
    if any(v for row in lk for v in row):
        return Certification("refuted", reason="nonzero linking number", obstruction=lk)
    c = trace(slices).ncomp
    try:
        nb = normalized_bracket(slices, bound)
    except CrossingBoundExceeded:
        return None
    if nb != unlink_polynomial(c):
        return Certification("refuted", reason="bracket differs from unlink", obstruction=nb)
    return None


def certify_unlink(L, budget: SearchBudget | None = None) -> Certification:
    """Certify a link word as an unlink by rewriting it to a crossingless word."""
    budget = budget or SearchBudget()
    slices = tuple(L.slices if hasattr(L, "slices") else L)
    ncomp = trace(slices).ncomp
    if crossing_count(slices) == 0:
        return Certification("certified", ncomp)
    ref = refute_unlink(slices, budget.bracket_bound)
    if ref is not None:
        return ref
    rng = random.Random(budget.seed)
    goal = lambda w: crossing_count(w) == 0
    # first without uphill moves, then with the allowance
    for allowance in sorted({0, budget.uphill}):
        cap_ = crossing_count(slices) + allowance
        _, path, ok = _best_first(
            slices, _link_neighbours(cap_, rng), _link_score, goal, budget,
            normal=commute_normal_form,
        )
        if ok:
            return Certification("certified", ncomp, witness=tuple(path))
    return Certification("unknown", ncomp, reason="search budget exhausted")


def check_certificate(L, cert: Certification) -> bool:
    """Replay a certificate: witnesses must reach a crossingless word with the
    same component count; refutations must recompute to a nonzero obstruction."""
    slices = tuple(L.slices if hasattr(L, "slices") else L)
    if cert.status == "certified":
        end = replay(slices, cert.witness)
        return crossing_count(end) == 0 and trace(end).ncomp == cert.components
    if cert.status == "refuted":
        if cert.reason == "nonzero linking number":
            lk = linking_matrix(slices)
            return lk == cert.obstruction and any(v for row in lk for v in row)
        nb = normalized_bracket(slices)
        return nb == cert.obstruction and nb != unlink_polynomial(trace(slices).ncomp)
    return True


# ---------------------------------------------------------------------------
# tri-plane simplification


@dataclass(frozen=True)
class LogEntry:
    target: str      # "1", "2", "3" or "all"
    move: Move

    def __str__(self) -> str:
        return f"{self.target}: {self.move}"


def parse_log_line(line: str) -> LogEntry:
    head, _, rest = line.partition(":")
    parts = rest.split()
    if len(parts) < 3 or parts[1] != "@":
        raise ValueError(f"bad move log line {line!r}")
    args = []
    for a in parts[3:]:
        try:
            args.append(int(a))
        except ValueError:
            args.append(a)
    return LogEntry(head.strip(), Move(parts[0], int(parts[2]), tuple(args)))


def apply_log_entry(D: TriPlaneDiagram, e: LogEntry) -> TriPlaneDiagram:
    m = e.move
    if e.target == "all":
        if m.name == "braid":
            return mutual_braid(D, m.site, m.args[0])
        if m.name == "unbraid":
            return mutual_unbraid(D)
        if m.name in ("stab1", "stab2"):
            return stabilize(D, int(m.name[-1]), (m.site, m.args[0]))
        if m.name in ("destab1", "destab2"):
            return destabilize(D, int(m.name[-1]), (m.site, m.args[0]))
        raise ValueError(f"unknown diagram move {m.name!r}")
    return interior_move(D, int(e.target), m)


def replay_log(D: TriPlaneDiagram, log: Iterable[LogEntry]) -> TriPlaneDiagram:
    for e in log:
        D = apply_log_entry(D, e)
    return D


def _tangle_normal(D: TriPlaneDiagram):
    ts = []
    labels: list = []
    for k, t in enumerate(D.tangles, 1):
        w, log = commute_normal_form(t.slices)
        labels.extend(LogEntry(str(k), m) for m in log)
        ts.append(TangleWord(t.b, w))
    return TriPlaneDiagram(tuple(ts)), labels


_TANGLE_MOVES = ("r1", "r2", "slide", "commute", "r3", "twist")


def _diagram_neighbours(uphill_cap: int, rng: random.Random):
    def gen(D: TriPlaneDiagram):
        out: list = []
        for k, t in enumerate(D.tangles, 1):
            w = t.slices
            for m in itertools.chain(reducing_moves(w), neutral_moves(w)):
                if m.name in _TANGLE_MOVES:
                    out.append(LogEntry(str(k), m))
        out.append(LogEntry("all", Move("unbraid", 0)))
        for kind, (p, odd) in destabilization_sites(D):
            out.append(LogEntry("all", Move(f"destab{kind}", p, (odd,))))
        if D.c + 3 <= uphill_cap:
            for j in range(1, 2 * D.b):
                for s in (1, -1):
                    out.append(LogEntry("all", Move("braid", j, (s,))))
        rng.shuffle(out)
        for e in out:
            try:
                yield e, apply_log_entry(D, e)
            except (MoveError, DiagramError):
                continue
    return gen


def _diagram_score(D: TriPlaneDiagram) -> tuple:
    return (D.c, D.b, sum(len(t.slices) for t in D.tangles))


def simplify_triplane(D: TriPlaneDiagram, budget: SearchBudget | None = None,
                      target_c: int | None = None, target_b: int | None = None):
    """Search for a diagram with fewer crossings (then fewer strands).

    Returns (diagram, log) where replaying log on D reproduces the diagram.
    The search stops early once the targets (if given) are reached.
    """
    budget = budget or SearchBudget()
    rng = random.Random(budget.seed)
    # one mutual braid (+3) must always be affordable
    cap_ = D.c + max(budget.uphill, 3)

    def goal(E):
        if target_c is None and target_b is None:
            return E.c == 0 and not any(True for _ in destabilization_sites(E))
        return (target_c is None or E.c <= target_c) and (target_b is None or E.b <= target_b)

    end, path, _ = _best_first(D, _diagram_neighbours(cap_, rng), _diagram_score, goal,
                               budget, normal=_tangle_normal)
    if _diagram_score(end) > _diagram_score(D):
        return D, []
    return end, list(path)


# ---------------------------------------------------------------------------
# census and random diagrams


def noncrossing_matchings(n: int) -> list:
    """All non-crossing perfect matchings of 1..2n, as sorted pair tuples."""
    if n == 0:
        return [()]
    out = []
    for k in range(n):
        # 1 is matched with 2k+2; inside has k arcs, outside n-1-k arcs
        for inner in noncrossing_matchings(k):
            for outer in noncrossing_matchings(n - 1 - k):
                arcs = [(1, 2 * k + 2)]
                arcs += [(a + 1, b + 1) for a, b in inner]
                arcs += [(a + 2 * k + 2, b + 2 * k + 2) for a, b in outer]
                out.append(tuple(sorted(arcs)))
    return out


def matching_word(matching: Sequence[tuple]) -> tuple:
    """A crossingless cap word realizing a non-crossing matching."""
    made: list = []
    out = []
    for a, b in sorted(matching):
        pos = 1 + sum(1 for e in made if e < a)
        out.append(cap(pos))
        made += [a, b]
    return tuple(out)


CENSUS_BOUND = 4


def enumerate_zero_crossing(b: int, bound: int = CENSUS_BOUND) -> Iterator[TriPlaneDiagram]:
    if not 1 <= b <= bound:
        raise ValueError(f"bridge number {b} outside 1..{bound}")
    words = [TangleWord(b, matching_word(m)) for m in noncrossing_matchings(b)]
    for t1 in words:
        for t2 in words:
            for t3 in words:
                yield TriPlaneDiagram((t1, t2, t3))


def random_crossingless(b: int, rng: random.Random) -> TriPlaneDiagram:
    ms = noncrossing_matchings(b)
    return TriPlaneDiagram(tuple(TangleWord(b, matching_word(rng.choice(ms))) for _ in range(3)))


def _random_interior(D: TriPlaneDiagram, rng: random.Random, room: int):
    k = rng.randint(1, 3)
    w = D.tangles[k - 1].slices
    n = len(w)
    cands = [m for m in itertools.chain(reducing_moves(w), neutral_moves(w)) if m.name in _TANGLE_MOVES]
    if room >= 2:
        i = rng.randint(0, n)
        width = widths(w)[i]
        if width >= 2:
            cands.append(Move("r2+", i + 1, (rng.randint(1, width - 1), rng.choice((1, -1)))))
    if room >= 1:
        caps = [i for i, s in enumerate(w) if s.kind == CAP]
        i = rng.choice(caps)
        cands.append(Move("r1+", i + 1, (rng.choice((1, -1)),)))
    if room >= 2:
        caps = [i for i, s in enumerate(w) if s.kind == CAP]
        i = rng.choice(caps)
        cands.append(Move("slide+", i + 1, (rng.choice("LR"), rng.choice((1, -1)))))
    if not cands:
        return None
    m = rng.choice(cands)
    try:
        return LogEntry(str(k), m), interior_move(D, k, m)
    except (MoveError, DiagramError):
        return None


def random_move(D: TriPlaneDiagram, rng: random.Random, max_c: int, max_b: int):
    """One random surface-preserving move, or None if the draw did not apply."""
    room = max_c - D.c
    r = rng.random()
    if r < 0.15 and room >= 3:
        e = LogEntry("all", Move("braid", rng.randint(1, 2 * D.b - 1), (rng.choice((1, -1)),)))
    elif r < 0.25 and D.b < max_b:
        e = LogEntry("all", Move(f"stab{rng.randint(1, 2)}", rng.randint(1, 2 * D.b), (rng.randint(1, 3),)))
    elif r < 0.32:
        sites = list(destabilization_sites(D))
        if not sites:
            return None
        kind, (p, odd) = rng.choice(sites)
        e = LogEntry("all", Move(f"destab{kind}", p, (odd,)))
    elif r < 0.36:
        e = LogEntry("all", Move("unbraid", 0))
    else:
        return _random_interior(D, rng, room)
    try:
        return e, apply_log_entry(D, e)
    except (MoveError, DiagramError):
        return None


def random_valid_diagram(b: int, crossing_budget: int, seed: int, steps: int = 30,
                         max_b: int = 5) -> TriPlaneDiagram:
    """A random crossingless triple perturbed by surface-preserving moves."""
    if b < 1 or crossing_budget < 0 or steps < 0:
        raise ValueError("parameters must be positive")
    rng = random.Random(seed)
    D = random_crossingless(b, rng)
    if crossing_budget == 0:
        return D
    for _ in range(steps):
        r = random_move(D, rng, crossing_budget, max(max_b, b))
        if r is not None:
            D = r[1]
    return D
