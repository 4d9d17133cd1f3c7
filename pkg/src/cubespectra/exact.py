"""Exact rational vectors/matrices and integer lattice solvers.

Rationals are :class:`fractions.Fraction`; vectors and matrices are plain
tuples of them so every value is immutable and hashable.  Integer matrices
(for Smith normal form and the affine solver) are lists of lists of ``int``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InputError

MAX_DIM = 16

RatVec = tuple[Fraction, ...]
RatMat = tuple[RatVec, ...]
IntVec = tuple[int, ...]


def as_rational(value) -> Fraction:
    """Parse ``value`` into a Fraction, rejecting anything inexact.

    Accepts ints, Fractions and strings such as ``"3"``, ``"-1/2"`` or
    ``"0.25"``.  Floats are refused: they cannot carry an exact rational
    reliably and irrational entries are outside the decidable scope.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r} ({type(value).__name__})")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def as_vector(values: Iterable, max_dim: int = MAX_DIM) -> RatVec:
    vec = tuple(as_rational(v) for v in values)
    if not 1 <= len(vec) <= max_dim:
        raise DimensionMismatch(f"vector length {len(vec)} outside [1, {max_dim}]")
    return vec


def as_matrix(rows: Iterable[Iterable], max_dim: int = MAX_DIM) -> RatMat:
    mat = tuple(as_vector(r, max_dim) for r in rows)
    if len(mat) == 0 or any(len(r) != len(mat) for r in mat):
        raise DimensionMismatch("matrix must be square and nonempty")
    return mat


def identity(d: int) -> RatMat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def diag(*entries) -> RatMat:
    d = len(entries)
    return tuple(
        tuple(as_rational(entries[i]) if i == j else Fraction(0) for j in range(d))
        for i in range(d)
    )


def vadd(a: Sequence, b: Sequence) -> RatVec:
    if len(a) != len(b):
        raise DimensionMismatch(f"lengths {len(a)} and {len(b)} differ")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> RatVec:
    if len(a) != len(b):
        raise DimensionMismatch(f"lengths {len(a)} and {len(b)} differ")
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Sequence) -> RatVec:
    return tuple(-x for x in a)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), 0) for col in cols) for row in a)


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(tuple(col) for col in zip(*m))


def det(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("det needs a square matrix")
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * result


def inverse(m: Sequence[Sequence]) -> RatMat:
    """Exact inverse by Gauss-Jordan; raises ZeroDivisionError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def lcm_denominators(values: Iterable[Fraction]) -> int:
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)


def is_integral(v: Iterable[Fraction]) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def floor_vec(v: Iterable[Fraction]) -> IntVec:
    return tuple(math.floor(x) for x in v)


# -- Smith normal form -----------------------------------------------------


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Return ``(U, S, V)`` with ``U @ M @ V == S``.

    ``S`` is diagonal (rectangular allowed) with nonnegative entries
    forming a divisibility chain; ``U`` and ``V`` are unimodular.  All
    three are returned as lists of lists of Python ints.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = [[int(x) for x in row] for row in m]
    if any(len(r) != cols for r in s):
        raise DimensionMismatch("ragged integer matrix")
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (s, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        s[dst] = [a + f * b for a, b in zip(s[dst], s[src])]
        u[dst] = [a + f * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for mat in (s, v):
            for row in mat:
                row[dst] += f * row[src]

    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(s[i][j]), i, j) for i in range(t, rows)
                       for j in range(t, cols) if s[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, cols):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue
            # pivot must divide the whole trailing block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if s[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < rows and t < cols and s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return u, s, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    _, s, _ = smith_normal_form(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


# -- integer affine systems ------------------------------------------------


@dataclass(frozen=True)
class AffineLattice:
    """The set ``point + span_Z(basis)`` of integer vectors."""

    point: IntVec
    basis: tuple[IntVec, ...]

    @property
    def is_point(self) -> bool:
        return not self.basis

    def contains(self, k: Sequence[int]) -> bool:
        diff = [Fraction(a - b) for a, b in zip(k, self.point)]
        if not self.basis:
            return not any(diff)
        coeffs = _solve_rational_columns(self.basis, diff)
        return coeffs is not None and all(c.denominator == 1 for c in coeffs)

    def sample(self, coeffs: Sequence[int]) -> IntVec:
        out = list(self.point)
        for c, b in zip(coeffs, self.basis):
            for i, x in enumerate(b):
                out[i] += c * x
        return tuple(out)


def _solve_rational_columns(columns, target):
    """Solve sum_i c_i * columns[i] = target for rational c; None if no solution."""
    r = len(columns)
    n = len(target)
    a = [[Fraction(columns[i][row]) for i in range(r)] + [Fraction(target[row])]
         for row in range(n)]
    piv_row = 0
    pivots = []
    for col in range(r):
        p = next((i for i in range(piv_row, n) if a[i][col] != 0), None)
        if p is None:
            continue
        a[piv_row], a[p] = a[p], a[piv_row]
        pv = a[piv_row][col]
        a[piv_row] = [x / pv for x in a[piv_row]]
        for i in range(n):
            if i != piv_row and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[piv_row])]
        pivots.append(col)
        piv_row += 1
    if any(a[i][r] != 0 for i in range(piv_row, n)):
        return None
    coeffs = [Fraction(0)] * r
    for i, col in enumerate(pivots):
        coeffs[col] = a[i][r]
    return coeffs


class AffineSolver:
    """Repeated solves of ``A k = b`` with ``k = residue (mod m)`` for a fixed
    ``A`` and modulus ``m`` (a positive integer or one per coordinate).

    Substituting ``k = residue + diag(m) t`` gives ``A diag(m) t = rhs``;
    the Smith form of ``A diag(m)`` is computed once.
    """

    def __init__(self, a: Sequence[Sequence[int]], modulus, dim: int):
        if isinstance(modulus, int):
            modulus = (modulus,) * dim
        self.m = tuple(int(x) for x in modulus)
        if len(self.m) != dim or any(x < 1 for x in self.m):
            raise InputError("modulus must be positive, one entry per coordinate")
        if any(len(row) != dim for row in a):
            raise DimensionMismatch("inconsistent system shape")
        self.a = [[int(x) for x in row] for row in a]
        self.dim = dim
        if self.a:
            scaled = [[x * mi for x, mi in zip(row, self.m)] for row in self.a]
            self.u, self.s, self.v = smith_normal_form(scaled)
            rank = [i for i in range(min(len(scaled), dim)) if self.s[i][i] != 0]
            self.diag = [self.s[i][i] if i in rank else 0 for i in range(len(scaled))]
            free = [i for i in range(dim) if i >= len(scaled) or self.s[i][i] == 0]
            self.basis = tuple(tuple(self.m[r] * self.v[r][i] for r in range(dim))
                               for i in free)
        else:
            self.basis = tuple(tuple(self.m[i] * int(i == j) for j in range(dim))
                               for i in range(dim))

    def solve(self, b: Sequence[int], residue: Sequence[int] | None = None
              ) -> AffineLattice | None:
        dim = self.dim
        if residue is None:
            residue = (0,) * dim
        if len(residue) != dim or len(b) != len(self.a):
            raise DimensionMismatch("inconsistent system shape")
        if not self.a:
            return AffineLattice(tuple(int(x) for x in residue), self.basis)
        rhs = [bi - sum(x * y for x, y in zip(row, residue)) for row, bi in zip(self.a, b)]
        c = [sum(x * y for x, y in zip(row, rhs)) for row in self.u]
        y = [0] * dim
        for i, si in enumerate(self.diag):
            if si == 0:
                if c[i] != 0:
                    return None
            elif c[i] % si:
                return None
            elif i < dim:
                y[i] = c[i] // si
        t0 = [sum(self.v[r][i] * y[i] for i in range(dim)) for r in range(dim)]
        point = tuple(int(r0) + mi * t for r0, mi, t in zip(residue, self.m, t0))
        return AffineLattice(point, self.basis)


def solve_integer_affine(a: Sequence[Sequence[int]], b: Sequence[int],
                         modulus=1, residue: Sequence[int] | None = None,
                         dim: int | None = None) -> AffineLattice | None:
    """Describe ``{k in Z^d : A k = b, k = residue (mod modulus)}``.

    ``modulus`` is a positive integer or a per-coordinate tuple.  Returns
    ``None`` when the set is empty.  ``A`` may have zero rows, in which case
    ``dim`` (or ``residue``) fixes ``d``.
    """
    if dim is None:
        dim = len(a[0]) if a else len(residue or ())
    if isinstance(modulus, int) and modulus < 1:
        raise InputError("modulus must be positive")
    if residue is not None and len(residue) != dim:
        raise DimensionMismatch("inconsistent system shape")
    return AffineSolver(a, modulus, dim).solve(b, residue)


# -- Hermite normal form for rational lattices -----------------------------


def column_hnf(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Lower-triangular column Hermite form of the lattice spanned by the
    columns of an ``n x m`` integer matrix of rank ``n`` (``m >= n``):
    positive diagonal and ``0 <= H[i][j] < H[i][i]`` for ``j < i``.
    Returns the ``n x n`` basis; extra columns reduce to zero."""
    n = len(m)
    h = [[int(x) for x in row] for row in m]
    cols = len(h[0]) if h else 0

    def col_op(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for row in h:
            x, y = row[i], row[j]
            row[i], row[j] = a * x + b * y, c * x + d * y

    for i in range(n):
        for j in range(i + 1, cols):
            x, y = h[i][i], h[i][j]
            if y == 0:
                continue
            g, p, q = _ext_gcd(x, y)
            col_op(i, j, p, q, -y // g, x // g)
        if h[i][i] == 0:
            raise ZeroDivisionError("singular matrix")
        if h[i][i] < 0:
            for row in h:
                row[i] = -row[i]
        for j in range(i):
            f = h[i][j] // h[i][i]
            if f:
                for row in h:
                    row[j] -= f * row[i]
    return [row[:n] for row in h]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lattice_hnf(r: Sequence[Sequence[Fraction]]) -> RatMat:
    """Canonical generator of the rational lattice spanned by the columns
    of ``r`` (square and nonsingular, or ``d x m`` of rank ``d``)."""
    scale = lcm_denominators(x for row in r for x in row)
    ints = [[int(x * scale) for x in row] for row in r]
    h = column_hnf(ints)
    return tuple(tuple(Fraction(x, scale) for x in row) for row in h)
