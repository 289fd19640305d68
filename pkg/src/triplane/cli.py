"""Command-line interface: ``triplane <command> ...``.

Exit codes for checking commands: 0 certified, 1 refuted, 2 unreadable
input, 3 undecided within budget.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .chdiagram import (
    ConversionError,
    MarkedWord,
    ch_to_triplane,
    parse_ch,
    surface_chi,
    validate_ch,
)
from .diagram import (
    TriPlaneDiagram,
    format_triplane,
    invariants,
    parse_triplane,
    validate_triplane,
)
from .families import FamilyError, generate
from .render import render_triplane, render_word
from .search import (
    CENSUS_BOUND,
    SearchBudget,
    certify_unlink,
    enumerate_zero_crossing,
    simplify_triplane,
)
from .surface import surface_type
from .words import WordError

EXIT_OK, EXIT_REFUTED, EXIT_PARSE, EXIT_UNKNOWN = 0, 1, 2, 3
_STATUS_EXIT = {"certified": EXIT_OK, "refuted": EXIT_REFUTED, "unknown": EXIT_UNKNOWN}


class InputError(Exception):
    pass


def read_input(path: str):
    """Parse a file as a tri-plane diagram or a marked word, by its header."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    head = next((ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.strip().startswith("#")), "")
    try:
        if head.startswith("triplane"):
            return parse_triplane(text)
        if head.startswith("chdiagram"):
            return parse_ch(text)
    except (WordError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    raise InputError(f"{path}: unrecognised header {head!r}")


def _budget(args) -> SearchBudget:
    kw = {"seed": getattr(args, "seed", 0) or 0}
    if getattr(args, "budget", None):
        kw["max_states"] = args.budget
    return SearchBudget(**kw)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    obj = read_input(args.file)
    budget = _budget(args)
    cert = lambda L: certify_unlink(L, budget)
    if isinstance(obj, TriPlaneDiagram):
        v = validate_triplane(obj, cert)
        for (i, j), c in zip(((1, 2), (2, 3), (3, 1)), v.certifications):
            line = f"closure {i}{j}: {c}"
            if c.status == "refuted":
                line += f" obstruction={c.obstruction}"
            print(line)
    else:
        v = validate_ch(obj, cert)
        for name, c in (("+", v.plus), ("-", v.minus)):
            line = f"resolution {name}: {c}"
            if c.status == "refuted":
                line += f" obstruction={c.obstruction}"
            print(line)
        chi = surface_chi(obj, v)
        if chi is not None:
            print(f"chi={chi}")
    print(v.summary())
    return _STATUS_EXIT[v.status]


def _diagram_of(obj, budget: SearchBudget) -> TriPlaneDiagram:
    if isinstance(obj, TriPlaneDiagram):
        return obj
    return ch_to_triplane(obj, budget).diagram


def cmd_invariants(args) -> int:
    obj = read_input(args.file)
    budget = _budget(args)
    D = _diagram_of(obj, budget)
    v = validate_triplane(D, lambda L: certify_unlink(L, budget))
    print(invariants(D, v.patch_counts).as_line())
    return _STATUS_EXIT[v.status]


def cmd_simplify(args) -> int:
    obj = read_input(args.file)
    budget = _budget(args)
    D = _diagram_of(obj, budget)
    E, log = simplify_triplane(D, budget, target_c=args.target_c, target_b=args.target_b)
    for e in log:
        print(e)
    print(f"# c {D.c} -> {E.c}, b {D.b} -> {E.b}")
    if args.output:
        Path(args.output).write_text(format_triplane(E))
    else:
        sys.stdout.write(format_triplane(E))
    return EXIT_OK


def cmd_convert(args) -> int:
    obj = read_input(args.file)
    if not isinstance(obj, MarkedWord):
        raise InputError("convert expects a chdiagram file")
    conv = ch_to_triplane(obj, _budget(args))
    for k, log in enumerate(conv.logs, 1):
        for m in log:
            print(f"# {k}: {m}")
    _write(format_triplane(conv.diagram), args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        D = generate(args.spec)
    except FamilyError as exc:
        raise InputError(str(exc)) from None
    _write(format_triplane(D), args.output)
    return EXIT_OK


def cmd_census(args) -> int:
    bs = [args.bridge] if args.bridge else list(range(1, CENSUS_BOUND + 1))
    for b in bs:
        try:
            total = orientable = 0
            for D in enumerate_zero_crossing(b):
                total += 1
                orientable += invariants(D).orientable
        except ValueError as exc:
            raise InputError(str(exc)) from None
        print(f"b={b} diagrams={total} orientable={orientable} nonorientable={total - orientable}")
    return EXIT_OK


def cmd_render(args) -> int:
    obj = read_input(args.file)
    svg = render_triplane(obj) if isinstance(obj, TriPlaneDiagram) else render_word(obj.slices)
    _write(svg, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# corpus table


@dataclass(frozen=True)
class CorpusEntry:
    label: str
    ch_file: str
    type: str
    bridge: int
    crossings: int
    concentrated: bool
    euler: int
    note: str = ""


def read_corpus(directory: str | Path) -> list[CorpusEntry]:
    """Entries from ``table.txt``: one ``key=value`` line per surface."""
    d = Path(directory)
    entries = []
    try:
        text = (d / "table.txt").read_text()
    except OSError as exc:
        raise InputError(f"cannot read corpus table in {d}: {exc.strerror}") from None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        # '#' also appears inside surface types such as P2#P2
        if not line or line.startswith("#"):
            continue
        try:
            kv = dict(tok.split("=", 1) for tok in line.split())
            entries.append(CorpusEntry(
                label=kv["label"], ch_file=kv["file"], type=kv["type"],
                bridge=int(kv["bridge"]), crossings=int(kv["crossings"]),
                concentrated=kv.get("concentrated", "false") == "true",
                euler=int(kv["euler"]), note=kv.get("note", ""),
            ))
        except (KeyError, ValueError) as exc:
            raise InputError(f"table.txt line {n}: bad entry ({exc})") from None
    return entries


@dataclass
class TableRow:
    label: str
    status: str          # "pass" | "soft" | "fail"
    detail: str


def run_entry(entry: CorpusEntry, directory: str, seed: int = 0,
              max_states: int | None = None) -> TableRow:
    path = Path(directory) / entry.ch_file
    if not path.exists():
        return TableRow(entry.label, "fail", f"no transcription ({entry.ch_file})")
    kw = {"seed": seed}
    if max_states:
        kw["max_states"] = max_states
    budget = SearchBudget(**kw)
    try:
        M = parse_ch(path.read_text())
        v = validate_ch(M, lambda L: certify_unlink(L, budget))
        if v.status != "certified":
            return TableRow(entry.label, "fail", f"ch-diagram {v.summary()}")
        D = ch_to_triplane(M, budget, validate=False).diagram
    except (WordError, ConversionError) as exc:
        return TableRow(entry.label, "fail", f"conversion: {exc}")
    E, _ = simplify_triplane(D, budget, target_c=entry.crossings, target_b=entry.bridge)
    val = validate_triplane(E, lambda L: certify_unlink(L, budget))
    rep = invariants(E, val.patch_counts)
    kind = surface_type(E)
    got = f"type={kind} b={E.b} c={E.c} e={rep.e} chi={rep.chi}"
    problems = []
    if val.status != "certified":
        problems.append(f"diagram {val.summary()}")
    if kind != entry.type:
        problems.append(f"type {kind} != {entry.type}")
    if E.b != entry.bridge:
        problems.append(f"b {E.b} != {entry.bridge}")
    if rep.e != entry.euler:
        problems.append(f"e {rep.e} != {entry.euler}")
    if problems:
        return TableRow(entry.label, "fail", f"{got}; " + "; ".join(problems))
    if E.c > entry.crossings:
        hard = entry.concentrated and entry.bridge <= 4
        return TableRow(entry.label, "fail" if hard else "soft",
                        f"{got}; c {E.c} > bound {entry.crossings}")
    return TableRow(entry.label, "pass", got)


def _run_entry_star(a):
    return run_entry(*a)


def cmd_table(args) -> int:
    entries = read_corpus(args.corpus)
    jobs = [(e, args.corpus, args.seed, args.budget) for e in entries]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_run_entry_star, jobs))
    else:
        rows = [_run_entry_star(j) for j in jobs]
    for r in rows:
        print(f"{r.label:<12} {r.status:<5} {r.detail}")
    n = {s: sum(r.status == s for r in rows) for s in ("pass", "soft", "fail")}
    print(f"summary pass={n['pass']} soft={n['soft']} fail={n['fail']} total={len(rows)}")
    return EXIT_REFUTED if n["fail"] else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="triplane", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def search_opts(q):
        q.add_argument("--budget", type=int, help="maximum search states per closure")
        q.add_argument("--seed", type=int, default=0)

    q = sub.add_parser("validate", help="certify closures or resolutions as unlinks")
    q.add_argument("file")
    search_opts(q)
    q.set_defaults(func=cmd_validate)

    q = sub.add_parser("invariants", help="print b, c, chi, e, orientability")
    q.add_argument("file")
    search_opts(q)
    q.set_defaults(func=cmd_invariants)

    q = sub.add_parser("simplify", help="reduce crossings by tri-plane moves")
    q.add_argument("file")
    search_opts(q)
    q.add_argument("--target-c", type=int)
    q.add_argument("--target-b", type=int)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_simplify)

    q = sub.add_parser("convert", help="marked diagram to tri-plane diagram")
    q.add_argument("file")
    search_opts(q)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_convert)

    q = sub.add_parser("generate", help="diagram for a family, e.g. p:2,1 or spun:x2+,x2+,x2+")
    q.add_argument("spec")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_generate)

    q = sub.add_parser("census", help="crossingless diagrams and their orientability")
    q.add_argument("--bridge", type=int)
    q.set_defaults(func=cmd_census)

    q = sub.add_parser("table", help="reproduce the corpus table")
    q.add_argument("--corpus", required=True)
    q.add_argument("--budget", type=int)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(func=cmd_table)

    q = sub.add_parser("render", help="draw a diagram as SVG")
    q.add_argument("file")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConversionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return {"refuted": EXIT_REFUTED, "budget": EXIT_UNKNOWN}.get(exc.kind, EXIT_PARSE)


if __name__ == "__main__":
    sys.exit(main())
