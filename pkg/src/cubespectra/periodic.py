"""Periodic translation sets ``offsets + R Z^d`` and their spectral/tiling verdict.

A periodic set is a spectrum of the unit cube exactly when it is a tiling
set for it, and both are equivalent to

* ``|offsets| == |det R|``, and
* every vector ``R k + (l - l')`` is zero or has a nonzero integer
  coordinate (the *packing* condition).

The packing condition quantifies over all of ``Z^d``.  Whether coordinate
``j`` of ``R k + delta`` is an integer depends only on ``k`` modulo the
common denominator ``N`` of ``R`` and ``delta``, so the check runs over the
``N^d`` residue classes and, inside a class, asks an integer affine system
whether the integral coordinates can all vanish at once.
"""

from __future__ import annotations

import enum
import itertools
import math
import operator
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import exact
from .exact import RatMat, RatVec, IntVec
from .errors import (BudgetExceeded, DimensionMismatch, InputError,
                     NonIntegerDensityWarning, SingularLattice)
from .zeroset import DifferenceWitness, in_zero_set

DEFAULT_WORK_CAP = 10**8
WINDOW_POINT_CAP = 10**6


@dataclass(frozen=True)
class PeriodicSet:
    """Canonical periodic set; build it with :func:`make_periodic_set`.

    ``R`` is in lower-triangular column Hermite form and every offset is
    reduced into the half-open cell ``R [0, 1)^d``, deduplicated and
    sorted lexicographically.
    """

    dim: int
    R: RatMat
    offsets: tuple[RatVec, ...]

    @cached_property
    def R_inv(self) -> RatMat:
        return exact.inverse(self.R)

    @cached_property
    def det(self) -> Fraction:
        return exact.det(self.R)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.offsets)) / abs(self.det)

    def translate(self, t: Sequence) -> "PeriodicSet":
        t = exact.as_vector(t)
        return make_periodic_set(self.R, [exact.vadd(l, t) for l in self.offsets])

    def permute(self, perm: Sequence[int]) -> "PeriodicSet":
        """Coordinate permutation: new coordinate ``i`` is old ``perm[i]``."""
        R = tuple(self.R[p] for p in perm)
        return make_periodic_set(R, [tuple(l[p] for p in perm) for l in self.offsets])

    def with_full_periods(self) -> "PeriodicSet":
        """Same point set over its largest period lattice."""
        return make_periodic_set(self.R, self.offsets, full_periods=True)

    def same_points(self, other: "PeriodicSet") -> bool:
        return self.with_full_periods() == other.with_full_periods()

    def point(self, offset_index: int, k: Sequence[int]) -> RatVec:
        return exact.vadd(self.offsets[offset_index], exact.matvec(self.R, k))

    def to_json(self) -> dict:
        fmt = exact.format_rational
        return {
            "dim": self.dim,
            "R": [[fmt(x) for x in row] for row in self.R],
            "offsets": [[fmt(x) for x in l] for l in self.offsets],
        }


class _Reducer:
    """Integer reduction of offsets (scaled by ``D``) into ``H [0, 1)^d``."""

    def __init__(self, H: RatMat, D: int):
        self.d = len(H)
        self.Hs = [[int(x * D) for x in row] for row in H]
        self.det_s = int(exact.det(self.Hs))
        # H^-1 l = adj(Hs) (l D) / det(Hs); det_s > 0 for a Hermite form
        self.adj = [[int(x * self.det_s) for x in row] for row in exact.inverse(self.Hs)]

    def __call__(self, ls) -> IntVec:
        d, Hs = self.d, self.Hs
        k = [sum(a * b for a, b in zip(row, ls)) // self.det_s for row in self.adj]
        return tuple(ls[i] - sum(Hs[i][j] * k[j] for j in range(d)) for i in range(d))


def _is_period(reps: set, t: IntVec, reduce: _Reducer) -> bool:
    return all(reduce(tuple(a + b for a, b in zip(x, t))) in reps for x in reps)


def make_periodic_set(R, offsets, full_periods: bool = False) -> PeriodicSet:
    """Validate and canonicalize ``offsets + R Z^d``.

    The lattice ``R Z^d`` is kept (in Hermite form) unless ``full_periods``
    is set, in which case it is enlarged to the full group of periods of the
    set; then any two descriptions of the same point set give identical
    results.
    """
    R = exact.as_matrix(R)
    d = len(R)
    offs = [exact.as_vector(l) for l in offsets]
    if not offs:
        raise InputError("offset list must be nonempty")
    if any(len(l) != d for l in offs):
        raise DimensionMismatch(f"offsets must have dimension {d}")
    if exact.det(R) == 0:
        raise SingularLattice("lattice generator R is singular")
    H = exact.lattice_hnf(R)
    D = exact.lcm_denominators(
        itertools.chain((x for row in H for x in row), (x for l in offs for x in l)))
    reduce = _Reducer(H, D)
    reps = {reduce([int(x * D) for x in l]) for l in offs}
    # every period moves some offset onto another: try differences from one base
    grown = full_periods
    while grown and len(reps) > 1:
        grown = False
        ordered = sorted(reps)
        base = ordered[0]
        for r in ordered[1:]:
            t = tuple(a - b for a, b in zip(r, base))
            if _is_period(reps, t, reduce):
                cols = [list(row) + [x] for row, x in zip(reduce.Hs, t)]
                H = tuple(tuple(Fraction(x, D) for x in row) for row in exact.column_hnf(cols))
                reduce = _Reducer(H, D)
                reps = {reduce(x) for x in reps}
                grown = True
                break
    offsets_q = sorted(tuple(Fraction(x, D) for x in l) for l in reps)
    return PeriodicSet(d, H, tuple(offsets_q))


def periodic_set_from_json(data: dict) -> PeriodicSet:
    try:
        R = data["R"]
        offsets = data["offsets"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"periodic set JSON needs 'R' and 'offsets': {exc}") from exc
    ps = make_periodic_set(R, offsets)
    if "dim" in data and data["dim"] != ps.dim:
        raise DimensionMismatch(f"declared dim {data['dim']} but R is {ps.dim}x{ps.dim}")
    return ps


# -- packing ---------------------------------------------------------------


@dataclass(frozen=True)
class PackingWitness:
    """``R k + delta`` is nonzero and has no nonzero integer coordinate."""

    delta: RatVec
    k: IntVec
    vector: RatVec


class _Scaled:
    """Integer picture of a periodic set: everything multiplied by ``D``."""

    def __init__(self, ps: PeriodicSet):
        self.ps = ps
        self.D = exact.lcm_denominators(
            itertools.chain((x for row in ps.R for x in row),
                            (x for l in ps.offsets for x in l)))
        D = self.D
        self.R = [[int(x * D) for x in row] for row in ps.R]
        self.offsets = [tuple(int(x * D) for x in l) for l in ps.offsets]
        # (R k)_j mod 1 depends on k_i only modulo the denominators in column i
        self.moduli = tuple(exact.lcm_denominators(row[i] for row in ps.R)
                            for i in range(ps.dim))

    def differences(self) -> list[IntVec]:
        """``0`` plus ``l_j - l_i`` for ``i < j`` (one of each +-pair suffices,
        since ``-(R k + delta) = R(-k) - delta``)."""
        offs = self.offsets
        zero = (0,) * len(offs[0])
        ordered = dict.fromkeys([zero])
        for j, lj in enumerate(offs):
            ordered.update(dict.fromkeys(tuple(map(operator.sub, lj, li)) for li in offs[:j]))
        return list(ordered)


def packing_check(ps: PeriodicSet, work_cap: int = DEFAULT_WORK_CAP):
    """Decide ``R Z^d + (L - L)`` is inside the zero set plus the origin.

    The integrality pattern of ``R k + delta`` depends only on ``k`` modulo
    the per-column denominators ``m`` of ``R``.  Each residue class is either
    an immediate violation (no integral coordinate), harmless (all
    coordinates integral), or decided by an integer affine system on the
    integral coordinates.  Returns ``(True, None)`` or
    ``(False, PackingWitness)``; raises :class:`BudgetExceeded` when
    ``prod(m) * |L|^2`` exceeds ``work_cap``.
    """
    sc = _Scaled(ps)
    work = math.prod(sc.moduli) * len(ps.offsets) ** 2
    if work > work_cap:
        raise BudgetExceeded("packing check", work, work_cap)
    classes = [(c, [sum(sc.R[j][i] * c[i] for i in range(ps.dim)) for j in range(ps.dim)])
               for c in itertools.product(*(range(m) for m in sc.moduli))]
    solvers: dict[tuple[int, ...], exact.AffineSolver] = {}
    for delta in sc.differences():
        witness = _check_difference(sc, delta, classes, solvers)
        if witness is not None:
            return False, witness
    return True, None


def _check_difference(sc: _Scaled, delta: IntVec, classes, solvers) -> PackingWitness | None:
    D = sc.D
    d = len(delta)
    for c, rc in classes:
        J = tuple(j for j in range(d) if (delta[j] + rc[j]) % D == 0)
        if not J:
            return _witness(sc, delta, c)
        if len(J) == d:
            # all coordinates integral: only R k + delta = 0 avoids the zero set,
            # and that vector is the origin itself
            continue
        solver = solvers.get(J)
        if solver is None:
            solver = solvers[J] = exact.AffineSolver([sc.R[j] for j in J], sc.moduli, d)
        sol = solver.solve([-delta[j] for j in J], c)
        if sol is not None:
            # coordinates outside J are non-integral, hence nonzero
            return _witness(sc, delta, sol.point)
    return None


def _witness(sc: _Scaled, delta: IntVec, k) -> PackingWitness:
    D = sc.D
    k = tuple(int(x) for x in k)
    delta_q = tuple(Fraction(x, D) for x in delta)
    vec = exact.vadd(delta_q, exact.matvec(sc.ps.R, k))
    assert not in_zero_set(vec) and any(vec)
    return PackingWitness(delta_q, k, vec)


# -- classification --------------------------------------------------------


class Status(str, enum.Enum):
    SPECTRAL_AND_TILING = "SpectralAndTiling"
    PACKING_ONLY_INCOMPLETE = "PackingOnlyIncomplete"
    NOT_PACKING = "NotPacking"


@dataclass(frozen=True)
class PairVerdict:
    status: Status
    density: Fraction
    witness: PackingWitness | None = None

    @property
    def positive(self) -> bool:
        return self.status is Status.SPECTRAL_AND_TILING

    def to_json(self) -> dict:
        fmt = exact.format_rational
        out = {"status": self.status.value, "density": fmt(self.density)}
        if self.witness is not None:
            w = self.witness
            out["witness"] = {
                "delta": [fmt(x) for x in w.delta],
                "k": list(w.k),
                "vector": [fmt(x) for x in w.vector],
            }
        return out


def classify_pair(ps: PeriodicSet, work_cap: int = DEFAULT_WORK_CAP) -> PairVerdict:
    """Classify ``(I^d, ps)``: spectral-and-tiling, packing only, or neither."""
    det = abs(ps.det)
    if det.denominator != 1:
        warnings.warn(f"|det R| = {det} is not an integer; density can never be 1",
                      NonIntegerDensityWarning, stacklevel=2)
    density = ps.density
    ok, witness = packing_check(ps, work_cap)
    if not ok:
        return PairVerdict(Status.NOT_PACKING, density, witness)
    # a packing by unit cubes has density at most 1
    assert density <= 1, "packing with density above 1"
    if density == 1:
        return PairVerdict(Status.SPECTRAL_AND_TILING, density)
    return PairVerdict(Status.PACKING_ONLY_INCOMPLETE, density)


def enumerate_window(ps: PeriodicSet, box_radius: int,
                     point_cap: int = WINDOW_POINT_CAP) -> list[RatVec]:
    """All ``l + R k`` with ``k`` in ``[-r, r]^d``, sorted."""
    if box_radius < 0:
        raise InputError("box_radius must be nonnegative")
    count = len(ps.offsets) * (2 * box_radius + 1) ** ps.dim
    if count > point_cap:
        raise BudgetExceeded("window enumeration", count, point_cap)
    rng = range(-box_radius, box_radius + 1)
    shifts = [exact.matvec(ps.R, k) for k in itertools.product(rng, repeat=ps.dim)]
    return sorted(exact.vadd(l, s) for l in ps.offsets for s in shifts)


def section(ps: PeriodicSet, coord: int, value) -> PeriodicSet | None:
    """Points of ``ps`` whose coordinate ``coord`` equals ``value``, as a
    periodic set in the remaining ``d - 1`` coordinates (``None`` if empty)."""
    d = ps.dim
    if d < 2:
        raise DimensionMismatch("sections need dim >= 2")
    value = exact.as_rational(value)
    scale = exact.lcm_denominators(
        itertools.chain(ps.R[coord], (l[coord] for l in ps.offsets), (value,)))
    row = [int(x * scale) for x in ps.R[coord]]
    keep = [j for j in range(d) if j != coord]
    kernel = None
    points = []
    for idx, l in enumerate(ps.offsets):
        sol = exact.solve_integer_affine([row], [int((value - l[coord]) * scale)])
        if sol is None:
            continue
        kernel = sol.basis
        p = ps.point(idx, sol.point)
        points.append(tuple(p[j] for j in keep))
    if not points:
        return None
    cols = [exact.matvec(ps.R, b) for b in kernel]
    R2 = tuple(tuple(col[j] for col in cols) for j in keep)
    return make_periodic_set(R2, points)
