"""Catalog constructors and recognizers for cube spectra in dimensions 1-3.

In dimension 1 the spectra of ``[0, 1)`` are the translates ``alpha + Z``.
In dimension 2 they are column-shifted sets ``{(alpha + m, beta_m + n)}`` or
their coordinate swap.  In dimension 3 they are, up to translation and a
coordinate permutation, unions over the integers ``a`` of planar slices
that are column-shifted (residues in ``A``) or row-shifted (residues in
``B``).  Everything here keeps the shift tables explicitly periodic so the
resulting sets are lattice periodic and can be verified by
:func:`cubespectra.periodic.classify_pair`.

Recognition normalizes as follows, so round trips are deterministic:

* every table is reduced to its minimal period; unused table entries
  (e.g. ``alpha0`` at a ``B`` residue) are zero;
* a planar slice that is both column- and row-shifted (a translate of
  ``Z^2``) is reported as column-shifted, i.e. put in ``A``;
* ``ColumnShifted`` is preferred over ``RowShifted`` in dimension 2;
* in dimension 3 the lexicographically least working coordinate
  permutation is used, the other working ones are listed as alternatives,
  and the translation is only along the first (permuted) coordinate,
  which the catalog pins to the integers.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import exact
from .errors import (BudgetExceeded, DimensionMismatch, InputError, InvalidForm,
                     NotSpectral, UnsupportedDimension)
from .exact import RatVec
from .periodic import (DEFAULT_WORK_CAP, PeriodicSet, Status, classify_pair,
                       make_periodic_set, section)

TOWER_OFFSET_CAP = 4096


def _unit_interval(x: Fraction, what: str) -> Fraction:
    x = exact.as_rational(x)
    if not 0 <= x < 1:
        raise InvalidForm(f"{what} = {x} is not in [0, 1)")
    return x


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class PeriodicTable:
    """A function ``Z^r -> [0, 1)`` periodic with the given period per index.

    ``values`` is row-major over ``range(periods[0]) x ... x range(periods[-1])``.
    """

    periods: tuple[int, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.periods or any(p < 1 for p in self.periods):
            raise InvalidForm(f"periods must be positive, got {self.periods}")
        if len(self.values) != math.prod(self.periods):
            raise InvalidForm("table size does not match its periods")
        for v in self.values:
            _unit_interval(v, "table value")

    @classmethod
    def build(cls, periods: Sequence[int], values: Sequence) -> "PeriodicTable":
        return cls(tuple(int(p) for p in periods),
                   tuple(exact.as_rational(v) for v in values))

    @classmethod
    def constant(cls, value, periods: Sequence[int] = (1,)) -> "PeriodicTable":
        return cls.build(periods, [value] * math.prod(periods))

    @classmethod
    def from_function(cls, periods: Sequence[int], fn) -> "PeriodicTable":
        idx = itertools.product(*(range(p) for p in periods))
        return cls.build(periods, [fn(*i) for i in idx])

    def at(self, *index: int) -> Fraction:
        flat = 0
        for i, p in zip(index, self.periods):
            flat = flat * p + i % p
        return self.values[flat]

    def row(self, first: int) -> tuple[Fraction, ...]:
        """Values with the first index fixed (a 1-index sequence over the second)."""
        return tuple(self.at(first, k) for k in range(self.periods[1]))

    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    def minimized(self) -> "PeriodicTable":
        """Same function with every period reduced to its minimum."""
        periods = list(self.periods)
        for axis in range(len(periods)):
            for p in sorted(_divisors(periods[axis])):
                trial = periods[:axis] + [p] + periods[axis + 1:]
                if all(self.at(*i) == self.at(*(x % t for x, t in zip(i, trial)))
                       for i in itertools.product(*(range(q) for q in periods))):
                    periods = trial
                    break
        return PeriodicTable.from_function(periods, self.at)

    def to_json(self) -> dict:
        return {"periods": list(self.periods),
                "values": [exact.format_rational(v) for v in self.values]}

    @classmethod
    def from_json(cls, data) -> "PeriodicTable":
        if isinstance(data, Mapping):
            return cls.build(data["periods"], data["values"])
        values = list(data)  # bare list: one index
        return cls.build([len(values)], values)


def _divisors(n: int) -> list[int]:
    return [p for p in range(1, n + 1) if n % p == 0]


def minimal_period(seq: Sequence) -> int:
    n = len(seq)
    for p in _divisors(n):
        if all(seq[i] == seq[i % p] for i in range(n)):
            return p
    return n


class Orientation(str, enum.Enum):
    COLUMN = "ColumnShifted"
    ROW = "RowShifted"


@dataclass(frozen=True)
class Dim1Form:
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", _unit_interval(self.alpha, "alpha"))

    def to_json(self) -> dict:
        return {"kind": "dim1", "alpha": exact.format_rational(self.alpha)}


@dataclass(frozen=True)
class Dim2Form:
    orientation: Orientation
    alpha: Fraction
    beta: PeriodicTable

    def __post_init__(self):
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        object.__setattr__(self, "alpha", _unit_interval(self.alpha, "alpha"))
        if len(self.beta.periods) != 1:
            raise InvalidForm("beta must be a one-index table")

    def normalized(self) -> "Dim2Form":
        beta = self.beta.minimized()
        if self.orientation is Orientation.ROW and beta.periods == (1,):
            # a translate of Z^2 is reported column-shifted
            return Dim2Form(Orientation.COLUMN, beta.values[0], PeriodicTable.constant(self.alpha))
        return Dim2Form(self.orientation, self.alpha, beta)

    def to_json(self) -> dict:
        return {"kind": "dim2", "orientation": self.orientation.value,
                "alpha": exact.format_rational(self.alpha), "beta": self.beta.to_json()}


@dataclass(frozen=True)
class Dim3Form:
    """``partition[a % P]`` says whether the slice ``x_1 = a`` is column-shifted
    (``"A"``: points ``(a, alpha0(a) + k, alpha1(a, k) + l)``) or row-shifted
    (``"B"``: points ``(a, beta1(a, n) + m, beta0(a) + n)``)."""

    partition: tuple[str, ...]
    alpha0: PeriodicTable
    alpha1: PeriodicTable
    beta0: PeriodicTable
    beta1: PeriodicTable

    def __post_init__(self):
        part = tuple(self.partition)
        if not part or any(c not in ("A", "B") for c in part):
            raise InvalidForm("partition must be a nonempty sequence of 'A'/'B'")
        object.__setattr__(self, "partition", part)
        P = len(part)
        for name in ("alpha0", "beta0"):
            if getattr(self, name).periods != (P,):
                raise InvalidForm(f"{name} must have periods ({P},)")
        for name in ("alpha1", "beta1"):
            t = getattr(self, name)
            if len(t.periods) != 2 or t.periods[0] != P:
                raise InvalidForm(f"{name} must have periods ({P}, p)")

    @property
    def period(self) -> int:
        return len(self.partition)

    def normalized(self) -> "Dim3Form":
        return normalize_dim3(self)

    def to_json(self) -> dict:
        return {"kind": "dim3", "partition": "".join(self.partition),
                "alpha0": self.alpha0.to_json(), "alpha1": self.alpha1.to_json(),
                "beta0": self.beta0.to_json(), "beta1": self.beta1.to_json()}


@dataclass(frozen=True)
class TowerSpec:
    """``betas[i]`` takes ``i + 1`` indices; the set has dimension ``len(betas) + 1``."""

    alpha: Fraction
    betas: tuple[PeriodicTable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", exact.as_rational(self.alpha))
        object.__setattr__(self, "betas", tuple(self.betas))
        for i, t in enumerate(self.betas):
            if len(t.periods) != i + 1:
                raise InvalidForm(f"beta_{i + 1} must take {i + 1} indices")

    @property
    def dim(self) -> int:
        return len(self.betas) + 1

    def to_json(self) -> dict:
        return {"kind": "tower", "alpha": exact.format_rational(self.alpha),
                "betas": [t.to_json() for t in self.betas]}


@dataclass(frozen=True)
class CrossProductSpec:
    left: PeriodicSet
    right: PeriodicSet
    beta: Mapping[RatVec, RatVec] = field(hash=False)

    def to_json(self) -> dict:
        fmt = exact.format_rational
        return {"kind": "cross", "left": self.left.to_json(), "right": self.right.to_json(),
                "beta": [{"offset": [fmt(x) for x in k], "shift": [fmt(x) for x in v]}
                         for k, v in sorted(self.beta.items())]}


# -- constructors ----------------------------------------------------------


def build_1d(f: Dim1Form) -> PeriodicSet:
    return make_periodic_set([[1]], [(f.alpha,)])


def build_2d(f: Dim2Form) -> PeriodicSet:
    p = f.beta.periods[0]
    pts = [(f.alpha + m, f.beta.at(m)) for m in range(p)]
    if f.orientation is Orientation.COLUMN:
        return make_periodic_set(exact.diag(p, 1), pts)
    return make_periodic_set(exact.diag(1, p), [(y, x) for x, y in pts])


def build_3d(f: Dim3Form) -> PeriodicSet:
    P = f.period
    pa = f.alpha1.periods[1]
    pb = f.beta1.periods[1]
    pts = []
    for a, cls in enumerate(f.partition):
        if cls == "A":
            pts.extend((Fraction(a), f.alpha0.at(a) + k, f.alpha1.at(a, k) + l)
                       for k in range(pa) for l in range(pb))
        else:
            pts.extend((Fraction(a), f.beta1.at(a, n) + m, f.beta0.at(a) + n)
                       for m in range(pa) for n in range(pb))
    return make_periodic_set(exact.diag(P, pa, pb), pts)


def build_tower(f: TowerSpec, offset_cap: int = TOWER_OFFSET_CAP) -> PeriodicSet:
    d = f.dim
    periods = [1] * d
    for m, table in enumerate(f.betas):
        for i, p in enumerate(table.periods):
            periods[i] = math.lcm(periods[i], p)
    count = math.prod(periods)
    if count > offset_cap:
        raise BudgetExceeded("tower offsets", count, offset_cap)
    pts = []
    for k in itertools.product(*(range(p) for p in periods)):
        pt = [f.alpha + k[0]]
        for j in range(1, d):
            pt.append(f.betas[j - 1].at(*k[:j]) + k[j])
        pts.append(pt)
    return make_periodic_set(exact.diag(*periods), pts)


def cross_product(spec: CrossProductSpec, work_cap: int = DEFAULT_WORK_CAP) -> PeriodicSet:
    left, right = spec.left, spec.right
    for name, ps in (("left", left), ("right", right)):
        if classify_pair(ps, work_cap).status is not Status.SPECTRAL_AND_TILING:
            raise NotSpectral(f"{name} factor is not a spectral/tiling set")
    beta = {tuple(exact.as_rational(x) for x in k): exact.as_vector(v)
            for k, v in spec.beta.items()}
    d1, d2 = left.dim, right.dim
    R = [list(row) + [Fraction(0)] * d2 for row in left.R]
    R += [[Fraction(0)] * d1 + list(row) for row in right.R]
    pts = []
    for l1 in left.offsets:
        if l1 not in beta:
            raise InvalidForm(f"beta undefined on left offset {l1}")
        shift = beta[l1]
        if len(shift) != d2:
            raise DimensionMismatch(f"beta values must have dimension {d2}")
        pts.extend(l1 + exact.vadd(shift, l2) for l2 in right.offsets)
    return make_periodic_set(R, pts)


def build(form, work_cap: int = DEFAULT_WORK_CAP) -> PeriodicSet:
    if isinstance(form, Dim1Form):
        return build_1d(form)
    if isinstance(form, Dim2Form):
        return build_2d(form)
    if isinstance(form, Dim3Form):
        return build_3d(form)
    if isinstance(form, TowerSpec):
        return build_tower(form)
    if isinstance(form, CrossProductSpec):
        return cross_product(form, work_cap)
    raise TypeError(f"not a form: {form!r}")


# -- normalization ---------------------------------------------------------


def normalize_dim3(f: Dim3Form) -> Dim3Form:
    """Canonical representative of the same set (see module docstring)."""
    P = f.period
    part = list(f.partition)
    a0 = [Fraction(0)] * P
    b0 = [Fraction(0)] * P
    a1: list[tuple] = [()] * P
    b1: list[tuple] = [()] * P
    for a in range(P):
        if part[a] == "B":
            row = f.beta1.row(a)
            if len(set(row)) == 1:
                # (c + m, beta0 + n) is also column-shifted: alpha0 = c, alpha1 = beta0
                part[a] = "A"
                a0[a] = row[0]
                a1[a] = (f.beta0.at(a),)
            else:
                b0[a] = f.beta0.at(a)
                b1[a] = row
        else:
            a0[a] = f.alpha0.at(a)
            a1[a] = f.alpha1.row(a)
    # minimal second periods
    a1 = [r[:minimal_period(r)] if r else r for r in a1]
    b1 = [r[:minimal_period(r)] if r else r for r in b1]
    pa = math.lcm(*(len(r) for r in a1 if r), 1)
    pb = math.lcm(*(len(r) for r in b1 if r), 1)

    def expand(r, p):
        return tuple(r[k % len(r)] for k in range(p)) if r else (Fraction(0),) * p

    a1 = [expand(r, pa) for r in a1]
    b1 = [expand(r, pb) for r in b1]
    data = [(part[a], a0[a], b0[a], a1[a], b1[a]) for a in range(P)]
    Pm = minimal_period(data)
    return Dim3Form(
        tuple(part[:Pm]),
        PeriodicTable.build([Pm], a0[:Pm]),
        PeriodicTable.build([Pm, pa], [x for r in a1[:Pm] for x in r]),
        PeriodicTable.build([Pm], b0[:Pm]),
        PeriodicTable.build([Pm, pb], [x for r in b1[:Pm] for x in r]),
    )


def normalize(form):
    if isinstance(form, Dim1Form):
        return form
    if isinstance(form, (Dim2Form, Dim3Form)):
        return form.normalized()
    raise TypeError(f"no catalog normalization for {type(form).__name__}")


# -- recognition -----------------------------------------------------------


@dataclass(frozen=True)
class Recognition:
    """Result of :func:`recognize`.

    ``form`` is ``None`` for NotCatalogForm.  The input point set equals
    ``build(form)`` translated by ``translation`` and then with coordinates
    un-permuted (old coordinate ``permutation[i]`` is catalog coordinate ``i``);
    :meth:`rebuild` performs exactly that.  The rebuilt lattice may be a
    different period lattice of the same points, so compare with
    :meth:`PeriodicSet.same_points`.
    """

    form: Dim1Form | Dim2Form | Dim3Form | None
    translation: RatVec
    permutation: tuple[int, ...]
    alternatives: tuple[tuple[int, ...], ...] = ()

    @property
    def kind(self) -> str:
        if self.form is None:
            return "NotCatalogForm"
        return type(self.form).__name__

    def rebuild(self) -> PeriodicSet:
        if self.form is None:
            raise InvalidForm("nothing to rebuild from NotCatalogForm")
        ps = build(self.form).translate(self.translation)
        inv = [0] * len(self.permutation)
        for i, p in enumerate(self.permutation):
            inv[p] = i
        return ps.permute(inv)

    def to_json(self) -> dict:
        fmt = exact.format_rational
        return {"kind": self.kind,
                "form": None if self.form is None else self.form.to_json(),
                "translation": [fmt(x) for x in self.translation],
                "permutation": list(self.permutation),
                "alternatives": [list(p) for p in self.alternatives]}


def _single_class(ps: PeriodicSet, coord: int) -> Fraction | None:
    """Common value of ``x_coord mod 1`` over the whole set, if there is one.

    For a lower-triangular ``R`` the lattice moves ``x_0`` by multiples of
    ``R[0][0]`` only; other coordinates are handled by permuting first.
    """
    if coord != 0:
        raise ValueError("only the leading coordinate is supported")
    if ps.R[0][0].denominator != 1:
        return None
    classes = {_frac(l[0]) for l in ps.offsets}
    return classes.pop() if len(classes) == 1 else None


def _column_period(ps: PeriodicSet) -> int:
    """A multiple of the leading-coordinate period that shifts the other
    coordinates by integers only (so fractional parts repeat)."""
    first_col = [row[0] for row in ps.R]
    return int(first_col[0]) * exact.lcm_denominators(first_col[1:])


def _recognize_1d(ps: PeriodicSet) -> Dim1Form | None:
    if ps.dim != 1:
        return None
    alpha = _single_class(ps, 0)
    if alpha is None or Fraction(len(ps.offsets)) != abs(ps.det):
        return None
    return Dim1Form(alpha)


def _recognize_column(ps: PeriodicSet) -> Dim2Form | None:
    alpha = _single_class(ps, 0)
    if alpha is None:
        return None
    M = _column_period(ps)
    betas = []
    for m in range(M):
        sec = section(ps, 0, alpha + m)
        if sec is None:
            return None
        f = _recognize_1d(sec)
        if f is None:
            return None
        betas.append(f.alpha)
    return Dim2Form(Orientation.COLUMN, alpha, PeriodicTable.build([M], betas)).normalized()


def _recognize_2d(ps: PeriodicSet) -> Dim2Form | None:
    f = _recognize_column(ps)
    if f is not None:
        return f
    g = _recognize_column(ps.permute((1, 0)))
    if g is not None:
        return Dim2Form(Orientation.ROW, g.alpha, g.beta)
    return None


def _recognize_3d_frame(ps: PeriodicSet) -> tuple[Dim3Form, Fraction] | None:
    theta = _single_class(ps, 0)
    if theta is None:
        return None
    shifted = ps.translate((-theta, 0, 0))
    M = _column_period(shifted)
    part, a0, b0, a1, b1 = [], [], [], [], []
    for a in range(M):
        sec = section(shifted, 0, a)
        if sec is None:
            return None
        f = _recognize_2d(sec)
        if f is None:
            return None
        seq = f.beta.values
        if f.orientation is Orientation.COLUMN:
            part.append("A")
            a0.append(f.alpha), a1.append(seq), b0.append(Fraction(0)), b1.append(())
        else:
            part.append("B")
            b0.append(f.alpha), b1.append(seq), a0.append(Fraction(0)), a1.append(())
    pa = math.lcm(*(len(r) for r in a1 if r), 1)
    pb = math.lcm(*(len(r) for r in b1 if r), 1)

    def flat(rows, p):
        return [r[k % len(r)] if r else Fraction(0) for r in rows for k in range(p)]

    raw = Dim3Form(tuple(part), PeriodicTable.build([M], a0), PeriodicTable.build([M, pa], flat(a1, pa)),
                   PeriodicTable.build([M], b0), PeriodicTable.build([M, pb], flat(b1, pb)))
    return normalize_dim3(raw), theta


def recognize(ps: PeriodicSet, work_cap: int = DEFAULT_WORK_CAP,
              verified: bool = False) -> Recognition:
    """Recover catalog parameters of a verified spectral set in dimension <= 3."""
    d = ps.dim
    if d > 3:
        raise UnsupportedDimension(f"no catalog for dimension {d}")
    if not verified and classify_pair(ps, work_cap).status is not Status.SPECTRAL_AND_TILING:
        raise NotSpectral("input is not a verified spectral/tiling set")
    zero = (Fraction(0),) * d
    ident = tuple(range(d))
    if d == 1:
        return Recognition(_recognize_1d(ps), zero, ident)
    if d == 2:
        return Recognition(_recognize_2d(ps), zero, ident)
    found = []
    for perm in itertools.permutations(range(3)):
        hit = _recognize_3d_frame(ps.permute(perm))
        if hit is not None:
            found.append((perm, hit))
    if not found:
        return Recognition(None, zero, ident)
    perm, (form, theta) = found[0]
    return Recognition(form, (theta, Fraction(0), Fraction(0)), perm,
                       tuple(p for p, _ in found[1:]))


# -- JSON ------------------------------------------------------------------


def form_from_json(data: dict):
    from .periodic import periodic_set_from_json

    try:
        kind = data["kind"]
        if kind == "dim1":
            return Dim1Form(exact.as_rational(data["alpha"]))
        if kind == "dim2":
            orient = data.get("orientation", "ColumnShifted")
            orient = {"column": Orientation.COLUMN, "row": Orientation.ROW}.get(orient, orient)
            return Dim2Form(Orientation(orient), exact.as_rational(data["alpha"]),
                            PeriodicTable.from_json(data["beta"]))
        if kind == "dim3":
            return Dim3Form(tuple(data["partition"]),
                            *(PeriodicTable.from_json(data[k])
                              for k in ("alpha0", "alpha1", "beta0", "beta1")))
        if kind == "tower":
            return TowerSpec(exact.as_rational(data["alpha"]),
                             tuple(PeriodicTable.from_json(t) for t in data.get("betas", [])))
        if kind == "cross":
            beta = {exact.as_vector(e["offset"]): exact.as_vector(e["shift"])
                    for e in data["beta"]}
            return CrossProductSpec(periodic_set_from_json(data["left"]),
                                    periodic_set_from_json(data["right"]), beta)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad form JSON: {exc!r}") from exc
    raise InputError(f"unknown form kind {data.get('kind')!r}")
