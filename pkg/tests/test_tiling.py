import json
import warnings
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from cubespectra import generators as gen
from cubespectra.errors import BudgetExceeded, NonIntegerDensityWarning, UnsupportedDimension
from cubespectra.lowdim import Dim2Form, Orientation, PeriodicTable, build_2d
from cubespectra.periodic import Status, classify_pair, enumerate_window, make_periodic_set
from cubespectra.tiling import PALETTE, emit_tiling_svg, rasterized_tiling_check

F = Fraction
WORKED = make_periodic_set([[2, 0], [0, 1]], [(0, 0), (1, F(1, 2))])


def test_integer_lattice_tiles():
    ok, grid = rasterized_tiling_check(make_periodic_set([[1, 0], [0, 1]], [(0, 0)]))
    assert ok and grid.q == 1 and grid.group_order == 1
    assert set(grid.multiplicity.values()) == {1}


def test_worked_example_counts():
    ok, grid = rasterized_tiling_check(WORKED)
    assert ok
    assert (grid.q, grid.group_order, grid.cells) == (2, 8, 8)
    assert sorted(grid.multiplicity) == list(range(8))
    assert json.loads(grid.histogram_json()) == {str(i): 1 for i in range(8)}


def test_half_density_does_not_tile():
    ps = make_periodic_set([[2, 0], [0, 2]], [(0, 0), (1, 0)])
    ok, grid = rasterized_tiling_check(ps)
    assert not ok and grid.cells * 2 == grid.group_order
    assert sum(grid.multiplicity.values()) == len(ps.offsets) * grid.q ** ps.dim


def test_overlap_does_not_tile():
    ok, grid = rasterized_tiling_check(
        make_periodic_set([[2, 0], [0, 1]], [(0, 0), (F(1, 2), F(1, 2))]))
    assert not ok and max(grid.multiplicity.values()) > 1


def test_budget():
    with pytest.raises(BudgetExceeded):
        rasterized_tiling_check(WORKED, cell_cap=10)


@given(st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_refinement_stability(seed):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonIntegerDensityWarning)
        ps = gen.random_periodic_set(gen.trial_rng(seed, 10))
    base, grid = rasterized_tiling_check(ps)
    try:
        refined = rasterized_tiling_check(ps, refine=2)[0]
    except BudgetExceeded:
        assume(False)
    assert refined == base
    assert sum(grid.multiplicity.values()) == grid.cells
    if base:
        assert len(ps.offsets) == abs(ps.det)


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_agrees_with_classification(seed):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonIntegerDensityWarning)
        ps = gen.random_periodic_set(gen.trial_rng(seed, 11))
        positive = classify_pair(ps).status is Status.SPECTRAL_AND_TILING
    assert rasterized_tiling_check(ps)[0] == positive


def test_svg_integer_lattice():
    svg = emit_tiling_svg(make_periodic_set([[1, 0], [0, 1]], [(0, 0)]), 2)
    assert svg.count("<rect") == 25
    assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')
    assert 'viewBox="-2 -3 5 5"' in svg and 'stroke-width="0.02"' in svg


def test_svg_worked_example():
    svg = emit_tiling_svg(WORKED, 1)
    assert svg.count("<rect") == len(enumerate_window(WORKED, 1)) == 18
    colors = {c for c in PALETTE if f'fill="{c}"' in svg}
    assert colors == set(PALETTE[:2])


def test_svg_is_deterministic():
    form = Dim2Form(Orientation.COLUMN, 0, PeriodicTable.build([2], [0, "1/2"]))
    assert emit_tiling_svg(build_2d(form), 3) == emit_tiling_svg(build_2d(form), 3)


def test_svg_needs_plane():
    with pytest.raises(UnsupportedDimension):
        emit_tiling_svg(make_periodic_set([[1]], [(0,)]), 1)
