import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsx.banks import random_bank
from fsx.factorize import (
    ExponentMismatch,
    UnsupportedWeight,
    WeightMismatch,
    certify_factorization,
    explicit_sym_factorize,
    lp_factorize,
    smoothed_factor,
    smoothing_constants,
)
from fsx.norms import WeightedLebesgue, norm
from fsx.stepfn import StepFunction, indicator, resample
from fsx.weights import Exp, Power

L4 = WeightedLebesgue(4.0)


def test_lp_indicator():
    fac = lp_factorize(indicator(1.0), 2.0, 4.0, 4.0)
    assert fac.g == indicator(1.0) and fac.h == indicator(1.0)
    assert fac.norm_product == 1.0 == fac.target_norm


def test_lp_power_profile():
    grid = np.linspace(1e-4, 1.0, 4001)
    f, _ = resample(lambda t: t ** -0.25, grid)
    fac = lp_factorize(f, 2.0, 4.0, 4.0)
    assert np.allclose(fac.g.vals, f.vals ** 0.5)
    assert math.isclose(fac.norm_product, fac.target_norm, rel_tol=1e-12)
    # the exact profile t^{-1/4} has ||.||_2 = sqrt(2) and factors t^{-1/8}
    assert math.isclose(fac.target_norm, math.sqrt(2.0), rel_tol=1e-2)


def test_lp_errors():
    with pytest.raises(ExponentMismatch):
        lp_factorize(indicator(1.0), 2.0, 3.0, 4.0)
    with pytest.raises(WeightMismatch):
        lp_factorize(indicator(1.0), 2.0, 4.0, 4.0, Power(0.1), Power(0.0), Power(0.0))
    with pytest.raises(UnsupportedWeight):
        lp_factorize(indicator(1.0), 2.0, 4.0, 4.0, Exp(1.0), Exp(1.0), Power(0.0))


@given(st.integers(0, 10**6), st.sampled_from([(2.0, 4.0, 4.0), (1.0, 2.0, 2.0), (2.0, 3.0, 6.0)]))
@settings(max_examples=60, deadline=None)
def test_lp_exact(seed, ps):
    f = random_bank(seed, 1, signed=True)[0]
    fac = lp_factorize(f, *ps)
    assert abs(fac.norm_product - fac.target_norm) <= 1e-9 * fac.target_norm
    assert fac.product_residual <= 1e-12
    assert np.all(fac.h.vals >= 0)


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_lp_weighted_exact(seed):
    f = random_bank(seed, 1)[0]
    fac = lp_factorize(f, 2.0, 4.0, 4.0, Power(0.3), Power(0.1), Power(0.2))
    assert abs(fac.norm_product - fac.target_norm) <= 1e-9 * fac.target_norm


def test_pipeline_indicator():
    fac = explicit_sym_factorize(indicator(1.0), L4, L4)
    assert fac.product_residual <= 1e-6
    phi, phi2, _ = smoothed_factor(indicator(1.0))
    # resampled at piece midpoints: phi2^2 = 1 - log t there
    mids = 0.5 * (phi2.lefts + phi2.breaks)
    assert np.allclose(phi2.vals ** 2, 1 - np.log(mids), rtol=1e-13)
    assert np.all(phi2.vals >= 1.0)
    cert = certify_factorization(fac, fac.kappa)
    assert cert.status == "PASS"


def test_pipeline_permuted():
    x = StepFunction([1.0, 2.0], [1.0, 3.0])
    fac = explicit_sym_factorize(x, L4, L4)
    assert fac.product_residual <= 1e-6


def test_pipeline_signed_and_zero():
    x = StepFunction([1.0, 2.0, 4.0], [-2.0, 0.0, 1.0])
    fac = explicit_sym_factorize(x, L4, L4)
    mids = np.array([0.5, 1.5, 3.0])
    assert np.allclose(fac.g(mids) * fac.h(mids), x(mids))
    assert np.all(fac.h.vals >= 0)
    z = explicit_sym_factorize(StepFunction([], []), L4, L4)
    assert z.product_residual == 0.0 and z.g.is_zero()


def test_smoothing_constants():
    sc = smoothing_constants(L4, L4)
    # E^{(1/2)} = L^2: ||H|| = ||H*|| = 2
    assert sc == {"C0": 2.0, "D0": 2.0, "C1": 2.0, "D1": 2.0, "kappa": 4.0}


def test_certificate_catches_corruption():
    f = StepFunction([1.0, 2.0, 3.0], [2.0, 1.0, 4.0])
    fac = lp_factorize(f, 2.0, 4.0, 4.0)
    assert certify_factorization(fac, 1.0).status == "PASS"
    hv = fac.h.vals.copy()
    hv[1] *= 10
    fac.h = StepFunction(fac.h.breaks, hv)
    mids = 0.5 * (f.lefts + f.breaks)
    fac.product_residual = float(np.max(np.abs(fac.g(mids) * fac.h(mids) / f(mids) - 1)))
    assert certify_factorization(fac, 1.0).status == "FAIL"


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_pipeline_reconstruction(seed):
    x = random_bank(seed, 1, signed=True)[0]
    fac = explicit_sym_factorize(x, L4, L4)
    assert fac.product_residual <= 1e-6


@given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 2.0]))
@settings(max_examples=25, deadline=None)
def test_smoothed_factor_monotone_and_dominating(seed, r):
    x = random_bank(seed, 1)[0]
    phi, phi2, err = smoothed_factor(x, r)
    T = phi.support_bound
    v = phi2.vals[phi2.breaks <= T]
    assert np.all(np.diff(v) <= err + 1e-12)
    mids = 0.5 * (phi2.lefts + phi2.breaks)[phi2.breaks <= T]
    assert np.all(phi2(mids) >= phi(mids) * (1 - 1e-12))


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_smoothed_norm_control(seed):
    E = WeightedLebesgue(4.0, Power(0.1))
    sc = smoothing_constants(E, E)
    x = random_bank(seed, 1)[0]
    phi, phi2, _ = smoothed_factor(x)
    assert norm(E, phi2) <= math.sqrt(sc["C0"] * sc["D0"]) * norm(E, phi) * (1 + 1e-9)
