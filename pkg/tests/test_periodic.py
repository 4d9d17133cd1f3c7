import itertools
import json
import time
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cubespectra import generators as gen
from cubespectra.errors import (BudgetExceeded, DimensionMismatch, InputError,
                                NonIntegerDensityWarning, SingularLattice)
from cubespectra.periodic import (Status, classify_pair, enumerate_window, make_periodic_set,
                                  packing_check, periodic_set_from_json, section)
from cubespectra.zeroset import diffs_in_zeroset, in_zero_set

from conftest import rat_vectors

F = Fraction
WORKED = ([[2, 0], [0, 1]], [(0, 0), (1, F(1, 2))])


def test_canonical_examples():
    ps = make_periodic_set([[1, 0], [0, 1]], [(0, 0)])
    assert ps.offsets == ((0, 0),)
    ps = make_periodic_set([[2, 0], [0, 1]], [(2, 3), (1, F(1, 2))])
    assert ps.offsets == ((0, 0), (1, F(1, 2)))
    ps = make_periodic_set([[1, 0], [0, 1]], [(0, 0), (1, 0)])
    assert ps.offsets == ((0, 0),)


def test_canonical_errors():
    with pytest.raises(SingularLattice):
        make_periodic_set([[1, 2], [2, 4]], [(0, 0)])
    with pytest.raises(DimensionMismatch):
        make_periodic_set([[1, 0], [0, 1]], [(0,)])
    with pytest.raises(InputError):
        make_periodic_set([[1]], [])


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_canonicalization_idempotent_and_reduced(seed):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonIntegerDensityWarning)
        ps = gen.random_periodic_set(gen.trial_rng(seed, 0))
    assert make_periodic_set(ps.R, ps.offsets) == ps
    for l in ps.offsets:
        coords = [sum(a * b for a, b in zip(row, l)) for row in ps.R_inv]
        assert all(0 <= c < 1 for c in coords)
    # offsets moved by lattice vectors give the same form
    shifted = [tuple(x + y for x, y in zip(l, [row[0] for row in ps.R])) for l in ps.offsets]
    assert make_periodic_set(ps.R, shifted) == ps


def test_same_points_across_lattices():
    a = make_periodic_set([[1, 0], [0, 3]], [(0, F(1, 6)), (0, F(7, 6)), (0, F(13, 6))])
    b = make_periodic_set([[1, 0], [0, 1]], [(0, F(1, 6))])
    assert a != b and a.same_points(b)
    assert a.with_full_periods() == b


def test_json_round_trip():
    ps = make_periodic_set(*WORKED)
    text = json.dumps(ps.to_json())
    assert periodic_set_from_json(json.loads(text)) == ps
    assert json.loads(text)["offsets"] == [["0/1", "0/1"], ["1/1", "1/2"]]
    with pytest.raises(DimensionMismatch):
        periodic_set_from_json({"dim": 3, "R": [["1"]], "offsets": [["0"]]})


@pytest.mark.parametrize("d", [1, 2, 5, 10])
def test_integer_lattice_packs(d):
    ps = make_periodic_set([[int(i == j) for j in range(d)] for i in range(d)], [(0,) * d])
    assert packing_check(ps) == (True, None)
    v = classify_pair(ps)
    assert v.status is Status.SPECTRAL_AND_TILING and v.density == 1


def test_worked_examples():
    assert packing_check(make_periodic_set(*WORKED))[0]
    ok, w = packing_check(make_periodic_set([[2, 0], [0, 1]], [(0, 0), (F(1, 2), F(1, 2))]))
    assert not ok and w.delta == (F(1, 2), F(1, 2)) and w.k == (0, 0)
    v = classify_pair(make_periodic_set([[2, 0], [0, 2]], [(0, 0), (1, 0)]))
    assert v.status is Status.PACKING_ONLY_INCOMPLETE and v.density == F(1, 2)
    assert classify_pair(make_periodic_set(*WORKED)).status is Status.SPECTRAL_AND_TILING


def test_verdict_json():
    v = classify_pair(make_periodic_set([[2, 0], [0, 1]], [(0, 0), (F(1, 2), F(1, 2))]))
    assert v.to_json() == {"status": "NotPacking", "density": "1/1",
                           "witness": {"delta": ["1/2", "1/2"], "k": [0, 0],
                                       "vector": ["1/2", "1/2"]}}


def test_non_integer_density_warns():
    with pytest.warns(NonIntegerDensityWarning):
        v = classify_pair(make_periodic_set([["1/2"]], [(0,)]))
    assert v.status is Status.NOT_PACKING


def test_budget():
    ps = make_periodic_set([["1/7", 0], [0, "1/9"]], [(0, 0)])
    with pytest.raises(BudgetExceeded) as exc:
        packing_check(ps, work_cap=10)
    assert exc.value.needed == 63 and exc.value.cap == 10


def test_window_examples():
    z1 = make_periodic_set([[1]], [(0,)])
    assert enumerate_window(z1, 2) == [(F(k),) for k in range(-2, 3)]
    ps = make_periodic_set(*WORKED)
    assert len(enumerate_window(ps, 1)) == 18
    assert enumerate_window(ps, 0) == sorted(ps.offsets)
    with pytest.raises(BudgetExceeded):
        enumerate_window(ps, 10**4)


def _window_radius(witness):
    return max(abs(k) for k in witness.k)


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_packing_agrees_with_windows(seed):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonIntegerDensityWarning)
        ps = gen.random_periodic_set(gen.trial_rng(seed, 1))
    ok, witness = packing_check(ps)
    if ok:
        for r in (0, 1):
            assert diffs_in_zeroset(enumerate_window(ps, r))[0]
    else:
        assert not in_zero_set(witness.vector) and any(witness.vector)
        r = _window_radius(witness)
        if len(ps.offsets) * (2 * r + 1) ** ps.dim <= 5000:
            assert not diffs_in_zeroset(enumerate_window(ps, r))[0]


@given(st.integers(0, 10**6), st.integers(1, 3).flatmap(lambda d: rat_vectors(d, max_den=4)))
@settings(max_examples=60, deadline=None)
def test_translation_invariance(seed, t):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonIntegerDensityWarning)
        ps = gen.random_periodic_set(gen.trial_rng(seed, 2))
        if len(t) != ps.dim:
            return
        assert classify_pair(ps).status == classify_pair(ps.translate(t)).status


def test_large_case_is_fast():
    start = time.perf_counter()
    ps = make_periodic_set([[2 * (i == j) for j in range(10)] for i in range(10)],
                           list(itertools.product((0, 1), repeat=10)))
    assert len(ps.offsets) == 1024
    assert classify_pair(ps).status is Status.SPECTRAL_AND_TILING
    assert time.perf_counter() - start < 10


def test_section():
    ps = make_periodic_set(*WORKED)
    s0 = section(ps, 0, 0)
    assert s0.R == ((1,),) and s0.offsets == ((0,),)
    s1 = section(ps, 0, 1)
    assert s1.offsets == ((F(1, 2),),)
    assert section(ps, 0, F(1, 2)) is None
