"""Zero set of the cube's exponential integral and difference-set checks.

For the unit cube ``I^d = [0, 1)^d`` the integral of ``exp(2 pi i z.x)``
splits into one factor per coordinate, and it vanishes exactly when some
coordinate of ``z`` is a nonzero integer.  Membership is decided on exact
rationals; the complex value is only a floating point cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import RatVec, as_vector, vsub
from .errors import DimensionMismatch


@dataclass(frozen=True)
class CubeEvaluation:
    z: RatVec
    value: complex
    in_zero_set: bool


@dataclass(frozen=True)
class DifferenceWitness:
    a: RatVec
    b: RatVec
    delta: RatVec


def in_zero_set(z: Sequence[Fraction]) -> bool:
    """True iff ``z != 0`` and some coordinate is a nonzero integer."""
    return any(x != 0 and Fraction(x).denominator == 1 for x in z)


def in_zero_set_or_origin(z: Sequence[Fraction]) -> bool:
    return in_zero_set(z) or not any(z)


def _factor(x: Fraction) -> complex:
    if x == 0:
        return 1.0 + 0j
    t = 2 * math.pi * float(x)
    if Fraction(x).denominator == 1:
        return 0j
    return (cmath.exp(1j * t) - 1) / (1j * t)


def eval_F_cube(z: Sequence[Fraction]) -> complex:
    """Evaluate the product of ``(exp(2 pi i z_j) - 1) / (2 pi i z_j)``.

    A factor is exactly ``0`` when ``z_j`` is a nonzero integer (the float
    formula would leave rounding noise there) and ``1`` when ``z_j == 0``.
    """
    value = 1.0 + 0j
    for x in z:
        value *= _factor(Fraction(x))
    return value


def evaluate(z) -> CubeEvaluation:
    vec = as_vector(z)
    return CubeEvaluation(vec, eval_F_cube(vec), in_zero_set(vec))


def inner_product(lam: Sequence[Fraction], lam2: Sequence[Fraction]) -> complex:
    """``<e_lam, e_lam2>`` in L^2 of the unit cube (conjugate-linear in the
    first slot)."""
    return eval_F_cube(vsub(lam2, lam))


def diffs_in_zeroset(points: Sequence[Sequence[Fraction]]):
    """Check that every difference of two distinct points lies in the zero set.

    Returns ``(True, None)`` or ``(False, DifferenceWitness)``.  Points are
    scanned in input order and the witness is ``(points[j], points[i])``
    for the first offending ``i < j``.
    """
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if pts and any(len(p) != len(pts[0]) for p in pts):
        raise DimensionMismatch("points of different dimensions")
    for j in range(len(pts)):
        for i in range(j):
            if pts[i] == pts[j]:
                continue
            delta = vsub(pts[j], pts[i])
            if not in_zero_set(delta):
                return False, DifferenceWitness(pts[j], pts[i], delta)
    return True, None
