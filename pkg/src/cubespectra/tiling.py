"""Exact tiling oracle: multiplicity counting on a finite quotient group.

With ``q`` the common denominator of ``R`` and the offsets, every cube
``I^d + l`` is a union of ``q^d`` grid cells of side ``1/q``.  Cells are
indexed by ``Z^d`` and the lattice acts on them through ``qR Z^d``, so the
cubes tile space exactly when each element of ``Z^d / qR Z^d`` is hit by
exactly one cell.  The quotient is enumerated through the Smith normal
form ``U (qR) V = S``: ``x`` maps to ``((U x)_i mod s_i)_i``, encoded as a
row-major mixed-radix integer over the invariant factors.

This deliberately shares nothing with the packing/density test in
:mod:`cubespectra.periodic` beyond the Smith normal form routine.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import exact
from .errors import BudgetExceeded, UnsupportedDimension
from .periodic import PeriodicSet

DEFAULT_CELL_CAP = 10**8


@dataclass(frozen=True)
class QuotientGrid:
    q: int
    group_order: int
    invariant_factors: tuple[int, ...]
    multiplicity: dict[int, int] = field(hash=False)
    cells: int = 0

    @property
    def is_tiling(self) -> bool:
        return (self.group_order == self.cells
                and len(self.multiplicity) == self.group_order
                and all(c == 1 for c in self.multiplicity.values()))

    def histogram_json(self) -> str:
        return json.dumps({str(k): v for k, v in sorted(self.multiplicity.items())},
                          separators=(",", ":"))


def rasterized_tiling_check(ps: PeriodicSet, refine: int = 1,
                            cell_cap: int = DEFAULT_CELL_CAP):
    """Return ``(tiles, QuotientGrid)`` for the cube translates ``I^d + ps``.

    ``refine`` multiplies the grid resolution beyond the minimal common
    denominator; the verdict must not depend on it.
    """
    d = ps.dim
    q = exact.lcm_denominators(
        itertools.chain((x for row in ps.R for x in row),
                        (x for l in ps.offsets for x in l))) * refine
    qR = [[int(x * q) for x in row] for row in ps.R]
    order = abs(int(exact.det(qR)))
    cells = len(ps.offsets) * q**d
    budget = q**d * order
    if budget > cell_cap:
        raise BudgetExceeded("rasterized tiling check", budget, cell_cap)

    u, s, _ = exact.smith_normal_form(qR)
    factors = [s[i][i] for i in range(d)]
    live = [i for i in range(d) if factors[i] > 1]
    rows = [[x % factors[i] for x in u[i]] for i in live]
    mods = [factors[i] for i in live]
    radix = []
    acc = 1
    for m in reversed(mods):
        radix.append(acc)
        acc *= m
    radix.reverse()

    # image of each unit cell step e_j, and of each cube corner q*l
    step_images = [[row[j] for row in rows] for j in range(d)]
    counts: Counter = Counter()
    cell_offsets = list(itertools.product(range(q), repeat=d))
    cell_images = []
    for e in cell_offsets:
        cell_images.append([sum(step_images[j][t] * e[j] for j in range(d))
                            for t in range(len(rows))])
    for l in ps.offsets:
        base = [int(x * q) for x in l]
        base_img = [sum(r * b for r, b in zip(row, base)) for row in rows]
        for img in cell_images:
            idx = 0
            for t, m in enumerate(mods):
                idx += ((base_img[t] + img[t]) % m) * radix[t]
            counts[idx] += 1

    grid = QuotientGrid(q, order, tuple(factors), dict(counts), cells)
    tiles = grid.is_tiling
    if tiles:
        # volume law for a lattice tile
        assert Fraction(len(ps.offsets)) == abs(ps.det)
    return tiles, grid


# -- SVG -------------------------------------------------------------------

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
)
STROKE_WIDTH = "0.02"


def _num(x: Fraction) -> str:
    text = f"{float(x):.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def emit_tiling_svg(ps: PeriodicSet, window: int) -> str:
    """Draw ``I^2 + lambda`` for the window points, one color per offset.

    Output is a pure function of the input: same set and window, same bytes.
    The y axis points up (the drawing is flipped with a group transform).
    """
    if ps.dim != 2:
        raise UnsupportedDimension(f"SVG rendering needs dim 2, got {ps.dim}")
    rng = range(-window, window + 1)
    squares = []
    for idx, l in enumerate(ps.offsets):
        for k in itertools.product(rng, repeat=2):
            squares.append((ps.point(idx, k), idx))
    squares.sort()
    xs = [p[0] for p, _ in squares]
    ys = [p[1] for p, _ in squares]
    x0, x1 = min(xs), max(xs) + 1
    y0, y1 = min(ys), max(ys) + 1
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_num(x0)} {_num(-y1)} {_num(x1 - x0)} {_num(y1 - y0)}">',
        f'<g transform="scale(1,-1)" stroke="#000000" stroke-width="{STROKE_WIDTH}">',
    ]
    for p, idx in squares:
        lines.append(
            f'<rect x="{_num(p[0])}" y="{_num(p[1])}" width="1" height="1" '
            f'fill="{PALETTE[idx % len(PALETTE)]}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


