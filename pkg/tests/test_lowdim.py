import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cubespectra import generators as gen
from cubespectra.errors import (BudgetExceeded, DimensionMismatch, InvalidForm, NotSpectral,
                                UnsupportedDimension)
from cubespectra.lowdim import (CrossProductSpec, Dim1Form, Dim2Form, Dim3Form, Orientation,
                                PeriodicTable, TowerSpec, build, build_1d, build_2d, build_3d,
                                build_tower, cross_product, form_from_json, normalize, recognize)
from cubespectra.periodic import Status, classify_pair, make_periodic_set
from cubespectra.tiling import rasterized_tiling_check
from cubespectra.zeroset import diffs_in_zeroset

F = Fraction
T = PeriodicTable.build
WORKED = make_periodic_set([[2, 0], [0, 1]], [(0, 0), (1, F(1, 2))])


def _spectral_and_tiling(ps):
    return classify_pair(ps).status is Status.SPECTRAL_AND_TILING and rasterized_tiling_check(ps)[0]


def test_build_1d():
    assert build_1d(Dim1Form(0)) == make_periodic_set([[1]], [(0,)])
    ps = build_1d(Dim1Form(F(1, 3)))
    assert ps.offsets == ((F(1, 3),),) and _spectral_and_tiling(ps)
    with pytest.raises(InvalidForm):
        Dim1Form(1)


def test_build_2d():
    assert build_2d(Dim2Form(Orientation.COLUMN, 0, T([1], [0]))) == \
        make_periodic_set([[1, 0], [0, 1]], [(0, 0)])
    col = build_2d(Dim2Form(Orientation.COLUMN, 0, T([2], [0, "1/2"])))
    assert col == WORKED and _spectral_and_tiling(col)
    row = build_2d(Dim2Form(Orientation.ROW, 0, T([2], [0, "1/2"])))
    assert row == col.permute((1, 0)) and _spectral_and_tiling(row)
    with pytest.raises(InvalidForm):
        T([2], [0, 1])


A_B_MIX = Dim3Form(("A", "B"), T([2], [0, 0]), T([2, 2], [0, "1/2", 0, 0]),
                   T([2], [0, "1/2"]), T([2, 1], [0, 0]))


def test_build_3d():
    all_a = Dim3Form(("A",), T([1], [0]), T([1, 1], [0]), T([1], [0]), T([1, 1], [0]))
    assert build_3d(all_a) == make_periodic_set(
        [[int(i == j) for j in range(3)] for i in range(3)], [(0, 0, 0)])
    assert _spectral_and_tiling(build_3d(A_B_MIX))
    column = Dim3Form(("A", "A"), T([2], [0, "1/2"]), T([2, 1], [0, 0]),
                      T([2], [0, 0]), T([2, 1], [0, 0]))
    assert _spectral_and_tiling(build_3d(column))
    with pytest.raises(InvalidForm):
        Dim3Form(("A", "C"), T([2], [0, 0]), T([2, 1], [0, 0]), T([2], [0, 0]), T([2, 1], [0, 0]))


def test_build_tower():
    two = build_tower(TowerSpec(0, (T([2], [0, "1/2"]),)))
    assert two == WORKED
    three = build_tower(TowerSpec(F(1, 4), (T([1], [0]), T([1, 1], [0]))))
    assert three == make_periodic_set([[int(i == j) for j in range(3)] for i in range(3)],
                                      [(F(1, 4), 0, 0)])
    ten = build_tower(TowerSpec(0, tuple(PeriodicTable.constant(0, [1] * (i + 1)) for i in range(9))))
    assert ten.dim == 10 and classify_pair(ten).status is Status.SPECTRAL_AND_TILING
    big = TowerSpec(0, (T([8], [0] * 8), T([8, 8], [0] * 64), T([1, 1, 128], [0] * 128)))
    with pytest.raises(BudgetExceeded):
        build_tower(big)


def test_tower_is_spectral_random():
    for trial in range(20):
        rng = gen.trial_rng(3, trial)
        betas = []
        for i in range(int(rng.integers(1, 4))):
            periods = [int(rng.integers(1, 3)) for _ in range(i + 1)]
            betas.append(gen.random_table(rng, periods, 2))
        ps = build_tower(TowerSpec(gen.rand_unit(rng), tuple(betas)))
        assert _spectral_and_tiling(ps)


def test_cross_product():
    z1 = make_periodic_set([[1]], [(0,)])
    assert cross_product(CrossProductSpec(z1, z1, {(0,): (0,)})) == \
        make_periodic_set([[1, 0], [0, 1]], [(0, 0)])
    shifted = cross_product(CrossProductSpec(z1, z1, {(0,): ("1/2",)}))
    assert shifted == make_periodic_set([[1, 0], [0, 1]], [(0, F(1, 2))])
    assert _spectral_and_tiling(shifted)
    left = make_periodic_set([[2]], [(0,), (1,)])
    worked = cross_product(CrossProductSpec(left, z1, {(0,): (0,), (1,): ("1/2",)}))
    assert worked == WORKED
    with pytest.raises(DimensionMismatch):
        cross_product(CrossProductSpec(z1, z1, {(0,): (0, 0)}))
    with pytest.raises(InvalidForm):
        cross_product(CrossProductSpec(left, z1, {(0,): (0,)}))
    half = make_periodic_set([[2]], [(0,)])
    with pytest.raises(NotSpectral):
        cross_product(CrossProductSpec(half, z1, {(0,): (0,)}))


def test_recognize_examples():
    r = recognize(make_periodic_set([[1, 0], [0, 1]], [(0, 0)]))
    assert r.form == Dim2Form(Orientation.COLUMN, 0, T([1], [0]))
    r = recognize(WORKED)
    assert r.form == Dim2Form(Orientation.COLUMN, 0, T([2], [0, "1/2"]))
    r = recognize(build_3d(A_B_MIX))
    assert r.form == normalize(A_B_MIX) and r.rebuild().same_points(build_3d(A_B_MIX))


def test_ab_mix_normalization():
    # residue 1 is (c + m, 1/2 + n): both orientations fit, reported as column-shifted
    norm = normalize(A_B_MIX)
    assert norm.partition == ("A", "A")
    assert norm.alpha1 == T([2, 2], [0, "1/2", "1/2", "1/2"])


def test_recognize_errors():
    with pytest.raises(UnsupportedDimension):
        recognize(make_periodic_set([[int(i == j) for j in range(4)] for i in range(4)],
                                    [(0,) * 4]))
    with pytest.raises(NotSpectral):
        recognize(make_periodic_set([[2, 0], [0, 2]], [(0, 0), (1, 0)]))


def test_recognize_reports_alternatives():
    r = recognize(make_periodic_set([[int(i == j) for j in range(3)] for i in range(3)],
                                    [(0, 0, 0)]))
    assert r.permutation == (0, 1, 2) and len(r.alternatives) == 5


@pytest.mark.parametrize("dim", [1, 2, 3])
@given(seed=st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_round_trip(dim, seed):
    rng = gen.trial_rng(seed, dim)
    form = gen.random_form(rng, dim)
    ps = build(form)
    assert _spectral_and_tiling(ps)
    assert recognize(ps, verified=True).form == normalize(form)
    moved = ps.translate(gen.random_translation(rng, dim)).permute(
        [int(i) for i in rng.permutation(dim)])
    rec = recognize(moved)
    assert rec.form is not None and rec.rebuild().same_points(moved)
    assert normalize(rec.form) == rec.form


@pytest.mark.parametrize("dim", [1, 2, 3])
@given(seed=st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_perturbation_breaks_packing(dim, seed):
    form = gen.random_form(gen.trial_rng(seed, 100 + dim), dim)
    bad = gen.perturb_one_offset(build(form), gen.leading_coordinate(form))
    v = classify_pair(bad)
    assert v.status is Status.NOT_PACKING and v.witness is not None


def test_single_offset_perturbation_is_not_always_fatal():
    # moving the only offset of Z^2 just translates it; a second offset is needed
    z2 = make_periodic_set([[1, 0], [0, 1]], [(F(1, 7), 0)])
    assert classify_pair(z2).status is Status.SPECTRAL_AND_TILING
    # a non-leading coordinate of a column-shifted set may also survive
    worked = make_periodic_set([[2, 0], [0, 1]], [(0, 0), (1, F(1, 2) + F(1, 7))])
    assert classify_pair(worked).status is Status.SPECTRAL_AND_TILING


def test_completeness_in_the_plane():
    """Every spectral set over diag(p, q), p q <= 4, with offsets of
    denominator at most 3 is column- or row-shifted."""
    vals = [F(0), F(1, 3), F(1, 2), F(2, 3)]
    seen = set()
    for p, q in [(a, b) for a in range(1, 5) for b in range(1, 5) if a * b <= 4]:
        cell = [(F(a) + x, F(b) + y) for a in range(p) for b in range(q)
                for x in vals for y in vals]
        others = [c for c in cell if c != (0, 0)]
        # translation invariance: one offset can be placed at the origin
        for rest in itertools.combinations(others, p * q - 1):
            pts = ((F(0), F(0)),) + rest
            if not diffs_in_zeroset(pts)[0]:
                continue
            ps = make_periodic_set([[p, 0], [0, q]], pts)
            if ps in seen:
                continue
            seen.add(ps)
            if classify_pair(ps).status is not Status.SPECTRAL_AND_TILING:
                continue
            rec = recognize(ps, verified=True)
            assert isinstance(rec.form, Dim2Form)
            assert rec.rebuild().same_points(ps)
            bad = gen.perturb_one_offset(build(rec.form), gen.leading_coordinate(rec.form))
            assert classify_pair(bad).status is Status.NOT_PACKING
    assert len(seen) > 100


def _points(fn, ranges):
    return [fn(*idx) for idx in itertools.product(*ranges)]


def test_cyclic_pattern_with_three_varying_tables_fails():
    """(n + a(m), m + b(l), l + c(n)) with a, b, c all non-constant."""
    tab = [F(0), F(1, 2)]
    pts = _points(lambda n, m, l: (n + tab[m % 2], m + tab[l % 2], l + tab[n % 2]),
                  [range(3)] * 3)
    assert not diffs_in_zeroset(pts)[0]
    # with one table constant it is a genuine tiling
    const = make_periodic_set([[2, 0, 0], [0, 2, 0], [0, 0, 2]],
                              _points(lambda n, m, l: (n, m + tab[l], l + tab[n]), [range(2)] * 3))
    assert classify_pair(const).status is Status.SPECTRAL_AND_TILING


def test_mixed_partition_pattern_fails():
    """Residues split between (n + a(m), m + b(l), l + c(n)) and
    (n + a(m), m + b0, l + c(m, n)) with a and b both non-constant."""
    tab = [F(0), F(1, 2)]
    b0 = F(1, 4)
    pts = []
    for n, m, l in itertools.product(range(4), range(3), range(3)):
        if n % 2 == 0:
            pts.append((n + tab[m % 2], m + tab[l % 2], F(l)))
        else:
            pts.append((n + tab[m % 2], m + b0, F(l)))
    assert not diffs_in_zeroset(pts)[0]


def test_form_json_round_trip():
    for form in (Dim1Form(F(1, 3)), Dim2Form(Orientation.ROW, F(1, 2), T([3], [0, "1/4", "1/2"])),
                 A_B_MIX, TowerSpec(0, (T([2], [0, "1/2"]),))):
        text = json.dumps(form.to_json())
        assert form_from_json(json.loads(text)) == form
    z1 = make_periodic_set([[1]], [(0,)])
    spec = CrossProductSpec(z1, z1, {(F(0),): (F(1, 2),)})
    back = form_from_json(json.loads(json.dumps(spec.to_json())))
    assert build(back) == build(spec)
