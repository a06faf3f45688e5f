import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsx.stepfn import (
    INF,
    NegativeLength,
    NonMonotoneBreakpoints,
    OutsideDomain,
    StepError,
    StepFunction,
    dilate,
    distribution,
    indicator,
    piece_grid,
    rank_function,
    rearrange,
    resample,
    tandori_majorant,
    zero,
)


@st.composite
def steps(draw, signed=True, max_pieces=12):
    n = draw(st.integers(1, max_pieces))
    lengths = draw(st.lists(st.floats(0.01, 5.0), min_size=n, max_size=n))
    elems = st.floats(-100, 100) if signed else st.floats(0, 100)
    vals = draw(st.lists(elems, min_size=n, max_size=n))
    return StepFunction(np.cumsum(lengths), vals)


def test_rejects_bad_breakpoints():
    with pytest.raises(NonMonotoneBreakpoints):
        StepFunction([1.0, 1.0], [1.0, 2.0])
    with pytest.raises(NegativeLength):
        StepFunction([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(OutsideDomain):
        StepFunction([0.5, 2.0], [1.0, 2.0], L=1.0)
    with pytest.raises(NegativeLength):
        StepFunction([], [], L=0.0)
    with pytest.raises(StepError):
        StepFunction([1.0], [1.0, 2.0])


def test_canonical_merges_and_trims():
    f = StepFunction([1.0, 2.0, 3.0, 4.0], [2.0, 2.0, 5.0, 0.0])
    assert f.breaks.tolist() == [2.0, 3.0]
    assert f.vals.tolist() == [2.0, 5.0]


def test_evaluation_is_right_continuous():
    f = StepFunction([1.0, 2.0], [3.0, 4.0])
    assert f(0.5) == 3.0
    assert f(1.0) == 4.0
    assert f(2.0) == 0.0
    assert f(-1.0) == 0.0


def test_immutable():
    f = indicator(1.0)
    with pytest.raises(AttributeError):
        f.L = 2.0


def test_rearrange_known():
    f = StepFunction([1.0, 3.0, 4.0], [1.0, -5.0, 2.0])
    s = rearrange(f)
    assert s.breaks.tolist() == [2.0, 3.0, 4.0]
    assert s.vals.tolist() == [5.0, 2.0, 1.0]


def test_rearrange_drops_gaps():
    f = StepFunction([1.0, 2.0, 3.0], [0.0, 1.0, 0.5])
    s = rearrange(f)
    assert s.breaks.tolist() == [1.0, 2.0]


def test_tandori_majorant():
    f = StepFunction([1.0, 2.0, 3.0], [1.0, 3.0, 2.0])
    assert tandori_majorant(f).vals.tolist() == [3.0, 2.0]
    assert tandori_majorant(f).breaks.tolist() == [2.0, 3.0]


def test_dilate_truncates_on_bounded_domain():
    f = StepFunction([0.25, 0.75], [1.0, 2.0], L=1.0)
    g = dilate(f, 2.0)
    assert g.breaks.tolist() == [0.5, 1.0]
    assert g.L == 1.0


def test_json_and_csv_round_trip():
    f = StepFunction([0.5, 1.5], [1.0, -2.0], L=3.0)
    assert StepFunction.from_json(f.to_json()) == f
    assert StepFunction.from_csv(f.to_csv()) == f
    g = indicator(2.0)
    assert json.loads(g.to_json())["L"] == "inf"
    assert StepFunction.from_json(g.to_json()) == g


def test_zero():
    z = zero()
    assert z.is_zero() and rearrange(z).is_zero()


def test_resample_error_bound():
    g = lambda t: 1.0 / np.asarray(t)
    s, err = resample(g, [1.0, 2.0, 3.0])
    assert s.n == 3
    assert err > 0
    assert math.isclose(s(1.5), 1 / 1.5)


def test_piece_grid_geometric():
    f = StepFunction([1.0, 2.0], [1.0, 2.0])
    g = piece_grid(f, density=2, geometric=3)
    assert g[:3].tolist() == [0.0625, 0.125, 0.25]
    assert g[-1] == 2.0


@given(steps())
@settings(max_examples=200, deadline=None)
def test_rearrangement_equimeasurable(f):
    s = rearrange(f)
    assert np.all(np.diff(s.vals) <= 0)
    for lam in np.unique(np.abs(f.vals)):
        assert math.isclose(distribution(f, lam), distribution(s, lam), rel_tol=1e-12, abs_tol=1e-12)


@given(steps())
@settings(max_examples=200, deadline=None)
def test_rank_pullback_reconstructs_modulus(f):
    rk = rank_function(f)
    back = rk.pullback(rearrange(f))
    mids = 0.5 * (f.lefts + f.breaks)
    assert np.allclose(back(mids), np.abs(f(mids)), rtol=1e-12)


@given(steps())
@settings(max_examples=100, deadline=None)
def test_json_round_trip_property(f):
    assert StepFunction.from_json(f.to_json()) == f


@given(steps(), st.floats(0.1, 10))
@settings(max_examples=100, deadline=None)
def test_dilation_scales_distribution(f, s):
    g = dilate(f, s)
    for lam in np.unique(np.abs(f.vals)):
        assert math.isclose(distribution(g, lam), s * distribution(f, lam), rel_tol=1e-9, abs_tol=1e-9)


def test_construction_examples():
    assert StepFunction([1.0], [1.0]) == indicator(1.0)
    assert StepFunction([1.0, 2.0], [1.0, 1.0]) == indicator(2.0)
    with pytest.raises(NonMonotoneBreakpoints):
        StepFunction([2.0, 1.0], [1.0, 2.0])


F3 = StepFunction([1.0, 2.0, 3.0], [1.0, 3.0, 2.0])


def test_distribution_examples():
    assert distribution(indicator(1.0, value=2.0), 1.0) == 1.0
    assert distribution(indicator(1.0, value=2.0), 2.0) == 0.0
    assert distribution(F3, 1.5) == 2.0


def test_rearrange_examples():
    assert rearrange(F3) == StepFunction([1.0, 2.0, 3.0], [3.0, 2.0, 1.0])
    g = StepFunction([1.0, 3.0], [2.0, 1.0])
    assert rearrange(g) == g
    h = StepFunction([1.0, 3.0], [-2.0, 1.0])
    assert rearrange(h) == g


def test_rank_examples():
    f = StepFunction([1.0, 2.0], [1.0, 3.0])
    rk = rank_function(f)
    assert sorted(rk.pairs()) == [((0.0, 1.0), 1.0), ((1.0, 2.0), 0.0)]
    # equal values: the earlier piece is mapped first
    tie = StepFunction([1.0, 2.0, 3.0], [1.0, 0.0, 1.0])
    assert rank_function(tie).pairs() == [((0.0, 1.0), 0.0), ((2.0, 3.0), 1.0)]
    dec = StepFunction([1.0, 2.0], [2.0, 1.0])
    assert [o for (_, o) in rank_function(dec).pairs()] == [0.0, 1.0]


def test_dilate_examples():
    assert dilate(indicator(1.0), 2.0) == indicator(2.0)
    assert dilate(indicator(1.0), 1.0) == indicator(1.0)
    assert dilate(indicator(0.75, L=1.0), 0.5) == indicator(0.375, L=1.0)


def test_majorant_examples():
    assert tandori_majorant(indicator(1.0, 2.0)) == indicator(2.0)
    f = StepFunction([1.0, 2.0, 3.0], [2.0, 3.0, 1.0])
    assert tandori_majorant(f) == StepFunction([2.0, 3.0], [3.0, 1.0])


def test_resample_examples():
    s, err = resample(lambda t: np.ones_like(t), [0.5, 1.0, 2.0])
    assert s == indicator(2.0) and err == 0.0
    s, _ = resample(lambda t: np.minimum(1.0, 1.0 / t), [1.0, 2.0])
    assert s.vals.tolist() == [1.0, 2.0 / 3.0]
    from fsx.operators import hardy_dual
    from fsx.stepfn import EvaluableUndefinedAt

    with pytest.raises(EvaluableUndefinedAt):
        resample(hardy_dual(indicator(1.0)), [0.0, 0.5])


@given(steps(), steps())
@settings(max_examples=100, deadline=None)
def test_rearrangement_subadditive(f, g):
    lhs = rearrange(f + g)
    fs, gs = rearrange(f), rearrange(g)
    t = np.linspace(0.01, max(lhs.support_bound, 0.02), 200)
    assert np.all(lhs(t) <= fs(t / 2) + gs(t / 2) + 1e-9)


@given(steps())
@settings(max_examples=100, deadline=None)
def test_majorant_properties(f):
    m = tandori_majorant(f)
    assert np.all(np.diff(m.vals) <= 0)
    mids = 0.5 * (f.lefts + f.breaks)
    assert np.all(m(mids) >= np.abs(f(mids)))
    assert tandori_majorant(m) == m


@given(steps(), st.sampled_from([0.5, 2.0, 4.0, 0.25]))
@settings(max_examples=100, deadline=None)
def test_dilation_inverse(f, s):
    assert dilate(dilate(f, s), 1 / s) == f
