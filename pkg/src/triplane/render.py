"""Static SVG drawings of tri-plane diagrams and marked words.

Each tangle is drawn as a vertical strip read top to bottom, one row per
slice.  The bridge points sit on the bottom line of every strip.  Output is a
pure function of the input, so identical diagrams give byte-identical files.
"""

from __future__ import annotations

from typing import Sequence

from .diagram import TriPlaneDiagram
from .words import CAP, CROSS, CUP, MARK, Slice, widths

DX = 24      # horizontal gap between strand positions
DY = 28      # height of one slice row
PAD = 16
GAP = 0.22   # fraction of a crossing's diagonal left blank for the under strand


def _f(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _line(x1, y1, x2, y2) -> str:
    return f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}"/>'


def _strip(slices: Sequence[Slice], x0: float, y0: float, rows: int) -> list[str]:
    """SVG elements for one word, bottom-aligned to ``rows`` slice rows."""
    out = []
    ws = widths(slices)
    top = y0 + (rows - len(slices)) * DY
    X = lambda p: x0 + p * DX
    for t, s in enumerate(slices):
        ya, yb = top + t * DY, top + (t + 1) * DY
        w = ws[t]
        j = s.pos
        if s.kind == CAP:
            for p in range(1, w + 1):
                out.append(_line(X(p), ya, X(p if p < j else p + 2), yb))
            r = DX / 2
            out.append(f'<path d="M {_f(X(j))} {_f(yb)} A {_f(r)} {_f(r)} 0 0 1 '
                       f'{_f(X(j + 1))} {_f(yb)}"/>')
        elif s.kind == CUP:
            for p in range(1, w + 1):
                if p < j:
                    out.append(_line(X(p), ya, X(p), yb))
                elif p > j + 1:
                    out.append(_line(X(p), ya, X(p - 2), yb))
            out.append(f'<path d="M {_f(X(j))} {_f(ya)} A {_f(DX / 2)} {_f(DX / 2)} 0 0 0 '
                       f'{_f(X(j + 1))} {_f(ya)}"/>')
        else:
            for p in range(1, w + 1):
                if p not in (j, j + 1):
                    out.append(_line(X(p), ya, X(p), yb))
            if s.kind == CROSS:
                # over strand runs from top j+1 to bottom j when the sign is +
                over = (X(j + 1), X(j)) if s.sign > 0 else (X(j), X(j + 1))
                under = (over[1], over[0])
                out.append(_line(over[0], ya, over[1], yb))
                ux = lambda f: under[0] + (under[1] - under[0]) * f
                uy = lambda f: ya + DY * f
                out.append(_line(ux(0), uy(0), ux(0.5 - GAP), uy(0.5 - GAP)))
                out.append(_line(ux(0.5 + GAP), uy(0.5 + GAP), ux(1), uy(1)))
            elif s.kind == MARK:
                out.append(_line(X(j), ya, X(j + 1), yb))
                out.append(_line(X(j + 1), ya, X(j), yb))
                mx, my = (X(j) + X(j + 1)) / 2, (ya + yb) / 2
                h = DX * 0.3
                bar = (_line(mx - h, my, mx + h, my) if s.axis == "p"
                       else _line(mx, my - h, mx, my + h))
                out.append(bar.replace("/>", ' stroke-width="4"/>'))
    return out


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
            f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">\n'
            '<g fill="none" stroke="black" stroke-width="2">\n')
    return head + "\n".join(body) + "\n</g>\n</svg>\n"


def render_triplane(D: TriPlaneDiagram) -> str:
    rows = max(len(t.slices) for t in D.tangles)
    panel = (2 * D.b + 1) * DX
    body = []
    for k, t in enumerate(D.tangles):
        x0 = PAD + k * (panel + PAD)
        body += _strip(t.slices, x0, PAD, rows)
        yb = PAD + rows * DY
        body.append(f'<line x1="{_f(x0)}" y1="{_f(yb)}" x2="{_f(x0 + panel)}" '
                    f'y2="{_f(yb)}" stroke="gray" stroke-width="1"/>')
        body.append(f'<text x="{_f(x0 + panel / 2)}" y="{_f(yb + PAD + 4)}" '
                    f'text-anchor="middle" stroke="none" fill="black" '
                    f'font-family="sans-serif" font-size="12">D{k + 1}</text>')
    width = PAD + 3 * (panel + PAD)
    height = PAD + rows * DY + 2 * PAD + 4
    return _svg(width, height, body)


def render_word(slices: Sequence[Slice]) -> str:
    """Draw a single closed word, e.g. a marked ch-diagram."""
    ws = widths(slices)
    body = _strip(slices, PAD, PAD, len(slices))
    width = 2 * PAD + (max(ws) + 1) * DX
    return _svg(width, 2 * PAD + len(slices) * DY, body)
