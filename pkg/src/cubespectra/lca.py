"""Spectral and tiling pairs of measures on finite abelian groups.

``G = Z_{n_1} x ... x Z_{n_k}`` is represented with its dual in the same
coordinates, paired by ``<x, xi> = exp(2 pi i sum_j x_j xi_j / n_j)``.
Haar measure on ``G`` is counting measure and the dual Haar measure is
``1/|G|`` times counting measure.

For measures ``mu`` on ``G`` and ``nu`` on the dual, the transform
``(Ff)(xi) = sum_x f(x) conj<x, xi> mu(x)`` is an isometry of ``L^2(mu)``
onto ``L^2(nu)`` exactly when ``B^H D_nu B = D_mu`` on ``supp mu`` (``B`` the
matrix of ``F``) and the supports have equal size.  The isometry test runs
in complex doubles at tolerance ``1e-9``; weights are exact rationals.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import exact
from .errors import GroupMismatch, InputError, NotSpectralPair, ZeroFunction

SPECTRAL_TOL = 1e-9
UNCERTAINTY_SLACK = 1e-12
MAX_GROUP_ORDER = 4096

Element = tuple[int, ...]


@dataclass(frozen=True)
class FiniteGroup:
    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders or any(n < 1 for n in orders):
            raise InputError(f"cyclic orders must be positive, got {self.orders}")
        if math.prod(orders) > MAX_GROUP_ORDER:
            raise InputError(f"group order above {MAX_GROUP_ORDER}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls((n,))

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.orders)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x: Element) -> int:
        return self._index[self.element(x)]

    def element(self, x) -> Element:
        if isinstance(x, int):
            x = (x,)
        x = tuple(int(v) for v in x)
        if len(x) != len(self.orders):
            raise InputError(f"element {x} does not match group {self.orders}")
        return tuple(v % n for v, n in zip(x, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple(-v % n for v, n in zip(x, self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    @cached_property
    def _phase_units(self) -> tuple[int, tuple[int, ...]]:
        m = math.lcm(*self.orders)
        return m, tuple(m // n for n in self.orders)

    def phase(self, x: Element, xi: Element) -> Fraction:
        """``<x, xi>`` as an exact fraction of a full turn, in ``[0, 1)``."""
        m, units = self._phase_units
        return Fraction(sum(a * b * u for a, b, u in zip(x, xi, units)) % m, m)

    @cached_property
    def character_table(self) -> np.ndarray:
        """``T[i, j] = <elements[j], elements[i]>`` (rows indexed by the dual)."""
        m, units = self._phase_units
        el = np.array(self.elements, dtype=np.int64)
        k = (el * np.array(units, dtype=np.int64)) @ el.T % m
        table = np.exp(2j * np.pi * k / m)
        table.setflags(write=False)
        return table


def pairing(group: FiniteGroup, x, xi) -> complex:
    turn = group.phase(group.element(x), group.element(xi))
    return complex(np.exp(2j * np.pi * float(turn)))


@dataclass(frozen=True)
class Measure:
    """Nonnegative rational weights; only positive weights are stored."""

    group: FiniteGroup
    weights: tuple[tuple[Element, Fraction], ...]

    @classmethod
    def from_weights(cls, group: FiniteGroup, weights: Mapping) -> "Measure":
        acc: dict[Element, Fraction] = {}
        for x, w in weights.items():
            w = exact.as_rational(w)
            if w < 0:
                raise InputError(f"negative weight {w} at {x}")
            el = group.element(x)
            acc[el] = acc.get(el, Fraction(0)) + w
        return cls(group, tuple(sorted((x, w) for x, w in acc.items() if w > 0)))

    @classmethod
    def counting(cls, group: FiniteGroup, subset: Iterable | None = None,
                 scale=1) -> "Measure":
        elems = group.elements if subset is None else subset
        s = exact.as_rational(scale)
        return cls.from_weights(group, {group.element(x): s for x in elems})

    @cached_property
    def as_dict(self) -> dict[Element, Fraction]:
        return dict(self.weights)

    def weight(self, x) -> Fraction:
        return self.as_dict.get(self.group.element(x), Fraction(0))

    @property
    def support(self) -> tuple[Element, ...]:
        return tuple(x for x, _ in self.weights)

    @property
    def total(self) -> Fraction:
        return sum((w for _, w in self.weights), Fraction(0))

    def mass(self, subset: Iterable) -> Fraction:
        return sum((self.weight(x) for x in set(map(self.group.element, subset))), Fraction(0))

    def dense(self) -> np.ndarray:
        out = np.zeros(self.group.order)
        for x, w in self.weights:
            out[self.group.index(x)] = float(w)
        return out

    def to_json(self) -> dict:
        return {"group": list(self.group.orders),
                "weights": {format_element(x): exact.format_rational(w)
                            for x, w in self.weights}}


def format_element(x: Element) -> str:
    return "(" + ",".join(str(v) for v in x) + ")"


_ELEMENT_RE = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*,?\s*\)$")


def parse_element(text: str) -> tuple[int, ...]:
    m = _ELEMENT_RE.match(text.strip())
    if not m:
        raise InputError(f"bad group element {text!r}")
    return tuple(int(v) for v in m.group(1).split(","))


def measure_from_json(data: Mapping, group: FiniteGroup | None = None) -> Measure:
    try:
        g = FiniteGroup(tuple(data["group"])) if "group" in data else group
        if g is None:
            raise InputError("measure JSON needs a group")
        if group is not None and g != group:
            raise GroupMismatch(f"measure group {g.orders} differs from {group.orders}")
        weights = {parse_element(k): v for k, v in data["weights"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"bad measure JSON: {exc!r}") from exc
    return Measure.from_weights(g, weights)


def reflect_measure(mu: Measure) -> Measure:
    """``mu o m_G^{-1}``: the weight at ``x`` moves to ``-x``."""
    return Measure.from_weights(mu.group, {mu.group.neg(x): w for x, w in mu.weights})


def _same_group(mu: Measure, nu: Measure) -> FiniteGroup:
    if mu.group != nu.group:
        raise GroupMismatch(f"{mu.group.orders} vs {nu.group.orders}")
    return mu.group


# -- Fourier transform -----------------------------------------------------


@dataclass(frozen=True)
class FourierOperator:
    """Matrix of ``F``: rows over all of the dual group, columns over ``supp mu``."""

    source: Measure
    matrix: np.ndarray

    @classmethod
    def of(cls, mu: Measure) -> "FourierOperator":
        g = mu.group
        cols = [g.index(x) for x in mu.support]
        w = np.array([float(v) for _, v in mu.weights])
        mat = np.conj(g.character_table[:, cols]) * w
        mat.setflags(write=False)
        return cls(mu, mat)

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.matrix @ f


def _on_support(mu: Measure, f) -> np.ndarray:
    """Accept ``f`` as a mapping element -> value, a vector over ``supp mu``,
    or a vector over the whole group."""
    g = mu.group
    if isinstance(f, Mapping):
        return np.array([complex(f.get(x, 0)) for x in mu.support])
    arr = np.asarray(f, dtype=complex)
    if arr.shape == (len(mu.support),):
        return arr
    if arr.shape == (g.order,):
        return arr[[g.index(x) for x in mu.support]]
    raise InputError(f"function has shape {arr.shape}, expected support or group size")


def fourier_transform(mu: Measure, f) -> np.ndarray:
    """``(Ff)(xi)`` for every ``xi`` of the dual, in ``group.elements`` order."""
    return FourierOperator.of(mu).apply(_on_support(mu, f))


def inverse_transform(mu: Measure, nu: Measure, g) -> np.ndarray:
    """``sum_xi g(xi) <x, xi> nu(xi)`` for ``x`` in ``supp mu``.

    This is the adjoint of ``F``; for a spectral pair it inverts ``F``.
    """
    grp = _same_group(mu, nu)
    gv = _on_support(nu, g)
    rows = [grp.index(xi) for xi in nu.support]
    cols = [grp.index(x) for x in mu.support]
    chars = grp.character_table[np.ix_(rows, cols)]
    w = np.array([float(v) for _, v in nu.weights])
    return chars.T @ (gv * w)


def is_spectral_pair_measures(mu: Measure, nu: Measure, tol: float = SPECTRAL_TOL) -> bool:
    _same_group(mu, nu)
    if len(mu.support) != len(nu.support) or not mu.support:
        return False
    b = FourierOperator.of(mu).matrix
    d_nu = nu.dense()
    lhs = b.conj().T @ (d_nu[:, None] * b)
    rhs = np.diag([float(w) for _, w in mu.weights])
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


def gram(mu: Measure, frequencies: Sequence[Element]) -> np.ndarray:
    """``<e_xi, e_eta>`` in ``L^2(mu)`` for the given frequencies."""
    g = mu.group
    rows = [g.index(xi) for xi in frequencies]
    cols = [g.index(x) for x in mu.support]
    e = g.character_table[np.ix_(rows, cols)]
    w = np.array([float(v) for _, v in mu.weights])
    return (e.conj() * w) @ e.T


@dataclass(frozen=True)
class TranslationUnitary:
    """``U(t)`` seen through ``F``: multiplication by ``<t, xi>`` on the dual side."""

    t: Element
    multipliers: np.ndarray

    @classmethod
    def of(cls, group: FiniteGroup, t) -> "TranslationUnitary":
        el = group.element(t)
        return cls(el, group.character_table[:, group.index(el)].copy())

    @staticmethod
    def shift(group: FiniteGroup, f: np.ndarray, t) -> np.ndarray:
        """``(U(t) f)(x) = f(x + t)`` for ``f`` given over all of ``G``."""
        el = group.element(t)
        idx = [group.index(group.add(x, el)) for x in group.elements]
        return np.asarray(f)[idx]


def translation_unitary(group: FiniteGroup, t) -> TranslationUnitary:
    return TranslationUnitary.of(group, t)


# -- tiling pairs ----------------------------------------------------------


def convolve(mu: Measure, nu: Measure) -> dict[Element, Fraction]:
    grp = _same_group(mu, nu)
    out: dict[Element, Fraction] = {}
    for a, wa in mu.weights:
        for b, wb in nu.weights:
            s = grp.add(a, b)
            out[s] = out.get(s, 0) + wa * wb
    return out


def is_tiling_pair_measures(mu: Measure, nu: Measure) -> bool:
    """``mu * nu`` equals counting measure on ``G``, exactly."""
    grp = _same_group(mu, nu)
    conv = convolve(mu, nu)
    return len(conv) == grp.order and all(v == 1 for v in conv.values())


# -- uncertainty -----------------------------------------------------------


@dataclass(frozen=True)
class UncertaintyReport:
    epsilon: float
    delta: float
    A: tuple[Element, ...]
    B: tuple[Element, ...]
    lhs: float
    rhs: float
    holds: bool

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "delta": self.delta,
                "A": [format_element(x) for x in self.A],
                "B": [format_element(x) for x in self.B],
                "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def uncertainty_report(mu: Measure, nu: Measure, f, A: Iterable, B: Iterable,
                       verified: bool = False) -> UncertaintyReport:
    """Concentration of ``f`` on ``A`` and of ``Ff`` on ``B`` against ``mu(A) nu(B)``.

    ``epsilon`` and ``delta`` are the attained ratios
    ``||f - 1_A f||_mu / ||f||_mu`` and ``||Ff - 1_B Ff||_nu / ||f||_mu``.
    """
    grp = _same_group(mu, nu)
    if not verified and not is_spectral_pair_measures(mu, nu):
        raise NotSpectralPair("uncertainty bound needs a spectral pair")
    fv = _on_support(mu, f)
    w_mu = np.array([float(w) for _, w in mu.weights])
    norm = math.sqrt(float(np.sum(w_mu * np.abs(fv) ** 2)))
    if norm == 0:
        raise ZeroFunction("f vanishes in L^2(mu)")
    a_set = tuple(sorted(set(map(grp.element, A))))
    b_set = tuple(sorted(set(map(grp.element, B))))
    outside_a = np.array([x not in set(a_set) for x in mu.support])
    eps = math.sqrt(float(np.sum((w_mu * np.abs(fv) ** 2)[outside_a]))) / norm
    ff = FourierOperator.of(mu).apply(fv)
    d_nu = nu.dense()
    outside_b = np.ones(grp.order, dtype=bool)
    outside_b[[grp.index(xi) for xi in b_set]] = False
    delta = math.sqrt(float(np.sum((d_nu * np.abs(ff) ** 2)[outside_b]))) / norm
    lhs = max(0.0, 1.0 - eps - delta) ** 2
    rhs = float(mu.mass(a_set) * nu.mass(b_set))
    return UncertaintyReport(eps, delta, a_set, b_set, lhs, rhs, lhs <= rhs + UNCERTAINTY_SLACK)


# -- spectra of subsets ----------------------------------------------------


def annihilator(group: FiniteGroup, subset: Iterable) -> tuple[Element, ...]:
    sub = [group.element(x) for x in subset]
    return tuple(xi for xi in group.elements if all(group.phase(x, xi) == 0 for x in sub))


def subgroup_generated(group: FiniteGroup, gens: Iterable) -> tuple[Element, ...]:
    zero = tuple(0 for _ in group.orders)
    seen = {zero}
    frontier = [zero]
    gens = [group.element(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


def find_spectrum(mu: Measure, limit: int = 200_000) -> Measure | None:
    """Search for ``nu`` with ``(mu, nu)`` spectral, supported on a set
    containing 0 (spectra are translation invariant).  Only uniform ``mu``
    can have one; the weight of ``nu`` is forced to ``1 / mu(G)``.

    Returns the lexicographically first spectrum found, or ``None``.
    """
    g = mu.group
    n = len(mu.support)
    if n == 0 or len({w for _, w in mu.weights}) != 1:
        return None
    zero = tuple(0 for _ in g.orders)
    rest = [x for x in g.elements if x != zero]
    w = 1 / mu.total
    for count, combo in enumerate(itertools.combinations(rest, n - 1)):
        if count >= limit:
            break
        nu = Measure.counting(g, (zero,) + combo, w)
        if is_spectral_pair_measures(mu, nu):
            return nu
    return None
