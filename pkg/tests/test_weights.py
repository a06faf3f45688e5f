import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from fsx.weights import (
    NAMED_IDS,
    Alternating,
    Decay,
    Exp,
    InverseDistance,
    Power,
    ShiftedPole,
    dyadic_weights,
    named_weight,
)


def _oracle(w, a, b, p, beta=0.0):
    val, _ = integrate.quad(lambda t: float(w(t)) ** p * t ** beta, a, b, limit=400)
    return val


@given(st.floats(-0.9, 3.0), st.floats(0.01, 5.0), st.floats(0.1, 5.0), st.floats(0.5, 4.0))
@settings(max_examples=100, deadline=None)
def test_power_moment_matches_quadrature(alpha, a, width, p):
    w = Power(alpha)
    assert math.isclose(w.moment(a, a + width, p), _oracle(w, a, a + width, p), rel_tol=1e-8)


def test_power_moment_divergence():
    assert math.isinf(Power(-1.0).moment(0.0, 1.0, 1.0))
    assert math.isinf(Power(0.0).moment(1.0, math.inf, 1.0))
    assert math.isclose(Power(-2.0).moment(1.0, math.inf, 1.0), 1.0)


@pytest.mark.parametrize(
    "w, a, b, p",
    [
        (Exp(1.0), 0.0, 3.0, 1.0),
        (Exp(-1.0), 0.5, 4.0, 2.0),
        (ShiftedPole(1.0), 0.0, 0.9, 1.0),
        (ShiftedPole(1.0), 1.5, 4.0, 1.0),
        (ShiftedPole(1.0), 1.0, 3.0, 0.5),
        (InverseDistance(1.0), 0.0, 0.5, 1.0),
        (Decay(9.0), 0.0, 6.0, 1.0),
        (Alternating(0, Decay(9.0)), 0.0, 7.5, 1.0),
        (Alternating(1, Decay(9.0)), 0.3, 6.0, 2.0),
    ],
)
def test_moments_match_quadrature(w, a, b, p):
    pts = [float(n) for n in range(int(math.ceil(a)), int(b) + 1) if a < n < b]
    val, _ = integrate.quad(lambda t: float(w(t)) ** p, a, b, limit=400, points=pts or None)
    assert math.isclose(w.moment(a, b, p), val, rel_tol=1e-7)


def test_singular_moments():
    assert math.isinf(ShiftedPole(1.0).moment(0.0, 2.0, 1.0))
    assert math.isinf(InverseDistance(1.0).moment(0.0, 1.0, 1.0))
    assert math.isinf(Exp(1.0).moment(0.0, math.inf, 1.0))
    assert Exp(1.0).moment(0.0, 2000.0, 1.0) == math.inf


def test_sup_on():
    assert Power(0.5).sup_on(0.0, 4.0) == 2.0
    assert math.isinf(Power(-0.5).sup_on(0.0, 4.0))
    assert Exp(1.0).sup_on(0.0, 1.0) == math.e
    assert math.isinf(InverseDistance(1.0).sup_on(0.0, 1.0))


def test_named_weights():
    for name in NAMED_IDS:
        w = named_weight(name)
        assert float(w(0.25)) > 0
    with pytest.raises(KeyError):
        named_weight("nope")


def test_dyadic_pair():
    w, v = dyadic_weights()
    # block n = 1 is (1/2, 1): w is 1 then 3/2, v is 3/2 throughout
    assert w(0.6) == 1.0 and w(0.9) == 1.5
    assert v(0.6) == 1.5 and v(0.3) == 2.25
    assert np.all(w(np.array([0.6, 0.3])) <= v(np.array([0.6, 0.3])))
