"""Seeded random instances for property checks and the acceptance battery.

Every generator takes a ``numpy.random.Generator``; batch drivers derive one
stream per trial from ``(seed, trial)`` so any single trial can be replayed.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import exact
from .lca import FiniteGroup, Measure, annihilator, subgroup_generated
from .lowdim import (Dim1Form, Dim2Form, Dim3Form, Orientation, PeriodicTable,
                     build)
from .periodic import PeriodicSet, make_periodic_set


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def rand_unit(rng: np.random.Generator, max_den: int = 4) -> Fraction:
    """Random rational in ``[0, 1)`` with denominator at most ``max_den``."""
    den = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(0, den)), den)


def rand_rational(rng: np.random.Generator, lo: int, hi: int, max_den: int = 4) -> Fraction:
    den = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


def random_table(rng, periods, max_den) -> PeriodicTable:
    return PeriodicTable.build(periods, [rand_unit(rng, max_den)
                                         for _ in range(math.prod(periods))])


# -- catalog forms -----------------------------------------------------------


def random_dim1(rng, max_den: int = 4) -> Dim1Form:
    return Dim1Form(rand_unit(rng, max_den))


def random_dim2(rng, max_period: int = 4, max_den: int = 4) -> Dim2Form:
    orient = Orientation.COLUMN if rng.integers(2) == 0 else Orientation.ROW
    p = int(rng.integers(1, max_period + 1))
    return Dim2Form(orient, rand_unit(rng, max_den), random_table(rng, [p], max_den))


def random_dim3(rng, max_period: int = 2, max_den: int = 4) -> Dim3Form:
    P = int(rng.integers(1, max_period + 1))
    pa = int(rng.integers(1, max_period + 1))
    pb = int(rng.integers(1, max_period + 1))
    part = tuple("A" if rng.integers(2) == 0 else "B" for _ in range(P))
    return Dim3Form(part, random_table(rng, [P], max_den), random_table(rng, [P, pa], max_den),
                    random_table(rng, [P], max_den), random_table(rng, [P, pb], max_den))


def random_form(rng, dim: int, max_den: int = 4):
    if dim == 1:
        return random_dim1(rng, max_den)
    if dim == 2:
        return random_dim2(rng, max_den=max_den)
    if dim == 3:
        return random_dim3(rng, max_den=max_den)
    raise ValueError(f"no catalog for dimension {dim}")


def leading_coordinate(form) -> int:
    """The coordinate the catalog pins to a single class mod 1."""
    if isinstance(form, Dim2Form) and form.orientation is Orientation.ROW:
        return 1
    return 0


def double_period(ps: PeriodicSet, coord: int) -> tuple[list, list]:
    """Same set written with the lattice column ``coord`` doubled.

    Returns raw ``(R, offsets)``; canonicalizing would undo the doubling.
    """
    R = [list(row) for row in ps.R]
    col = [row[coord] for row in ps.R]
    for row in R:
        row[coord] *= 2
    offsets = [list(l) for l in ps.offsets] + [list(exact.vadd(l, col)) for l in ps.offsets]
    return R, offsets


def perturb_one_offset(ps: PeriodicSet, coord: int, amount=Fraction(1, 7)) -> PeriodicSet:
    """Double the period along ``coord`` and move one offset by ``amount``.

    The untouched copy of that offset has the same other coordinates, so
    the pair differs only by a non-integer amount along ``coord`` plus
    lattice vectors: the result can never pack.
    """
    R, offsets = double_period(ps, coord)
    offsets[0][coord] += amount
    return make_periodic_set(R, offsets)


def random_translation(rng, d: int, max_den: int = 4) -> tuple:
    return tuple(rand_rational(rng, -2, 2, max_den) for _ in range(d))


# -- generic periodic sets ---------------------------------------------------


def random_lattice(rng, d: int, max_det: int = 8, max_den: int = 4) -> list[list[Fraction]]:
    """Lower-triangular rational generator with ``0 < |det| <= max_det``."""
    while True:
        R = [[Fraction(0)] * d for _ in range(d)]
        for i in range(d):
            R[i][i] = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, max_den + 1)))
            for j in range(i):
                if rng.random() < 0.4:
                    R[i][j] = rand_rational(rng, -1, 1, max_den)
        if 0 < abs(math.prod(R[i][i] for i in range(d))) <= max_det:
            return R


def random_periodic_set(rng, max_offsets: int = 8, max_den: int = 4) -> PeriodicSet:
    """Mixture used for the spectral-vs-tiling agreement battery.

    Half the cases come from the catalogs (translated and permuted), so the
    positive class is well represented; the rest are perturbed catalog sets
    and random lattices with random offsets at or below full density.
    """
    d = int(rng.integers(1, 4))
    kind = rng.random()
    if kind < 0.7:
        for _ in range(100):
            ps = build(random_form(rng, d, max_den))
            if len(ps.offsets) <= max_offsets:
                break
        ps = ps.translate(random_translation(rng, d, max_den))
        ps = ps.permute(list(rng.permutation(d)))
        if kind < 0.5:
            return ps
        offs = [list(l) for l in ps.offsets]
        i, j = int(rng.integers(len(offs))), int(rng.integers(d))
        offs[i][j] += rand_rational(rng, -1, 1, max_den)
        return make_periodic_set(ps.R, offs)
    R = random_lattice(rng, d, max_offsets, max_den)
    det = abs(exact.det(R))
    full = det.denominator == 1 and rng.random() < 0.6
    count = int(det) if full else int(rng.integers(1, max(2, min(max_offsets, math.ceil(det))) + 1))
    offsets = [[rand_rational(rng, 0, 2, max_den) for _ in range(d)] for _ in range(count)]
    return make_periodic_set(R, offsets)


# -- finite-group measures ---------------------------------------------------


def random_group(rng, max_order: int = 32) -> FiniteGroup:
    while True:
        k = int(rng.integers(1, 3))
        orders = tuple(int(rng.integers(1, max_order + 1)) for _ in range(k))
        if math.prod(orders) <= max_order and math.prod(orders) > 1:
            return FiniteGroup(orders)


def _random_subset(rng, group: FiniteGroup, size: int | None = None) -> list:
    el = group.elements
    if size is None:
        size = int(rng.integers(1, len(el) + 1))
    idx = rng.choice(len(el), size=size, replace=False)
    return [el[i] for i in sorted(idx)]


def subgroup_spectral_pair(rng, group: FiniteGroup) -> tuple[Measure, Measure]:
    """``c`` times counting on a coset ``a + H`` with ``(1 / (c |H|))`` times
    counting on a random transversal of the annihilator of ``H``."""
    gens = _random_subset(rng, group, int(rng.integers(1, 3)))
    H = subgroup_generated(group, gens)
    a = group.elements[int(rng.integers(group.order))]
    c = Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
    mu = Measure.counting(group, [group.add(a, h) for h in H], c)
    perp = set(annihilator(group, H))
    cosets: dict = {}
    order = [group.elements[i] for i in rng.permutation(group.order)]
    for xi in order:
        key = min(group.add(xi, group.neg(p)) for p in perp)
        cosets.setdefault(key, xi)
    nu = Measure.counting(group, cosets.values(), 1 / (c * len(H)))
    return mu, nu


def random_measure(rng, group: FiniteGroup, support: list | None = None) -> Measure:
    if support is None:
        support = _random_subset(rng, group)
    return Measure.from_weights(group, {x: Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
                                        for x in support})


def random_measure_pair(rng, max_order: int = 32) -> tuple[Measure, Measure]:
    """Spectral pairs, near misses and unstructured pairs in roughly equal parts."""
    group = random_group(rng, max_order)
    kind = rng.random()
    if kind < 0.4:
        return subgroup_spectral_pair(rng, group)
    if kind < 0.7:
        mu, nu = subgroup_spectral_pair(rng, group)
        weights = dict(nu.weights)
        x = list(weights)[int(rng.integers(len(weights)))]
        if rng.random() < 0.5:
            weights[x] *= 2
        else:
            del weights[x]
            weights[group.elements[int(rng.integers(group.order))]] = nu.weights[0][1]
        return mu, Measure.from_weights(group, weights)
    size = int(rng.integers(1, group.order + 1))
    support = _random_subset(rng, group, size)
    mu = Measure.counting(group, support) if rng.random() < 0.5 else random_measure(rng, group, support)
    nu = Measure.counting(group, _random_subset(rng, group, size), 1 / mu.total)
    return mu, nu


def random_function(rng, mu: Measure) -> np.ndarray:
    """Complex values on ``supp mu``; sometimes sparse so concentration varies."""
    n = len(mu.support)
    f = rng.normal(size=n) + 1j * rng.normal(size=n)
    if rng.random() < 0.3:
        f[rng.random(n) < 0.7] = 0
    if not np.any(f):
        f[int(rng.integers(n))] = 1
    return f
