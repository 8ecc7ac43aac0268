import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from envlab import (SampledWeight, SlopeInterval, UnboundedTransformError,
                    convexity_defect, equilibrium_envelope, hull_envelope,
                    legendre_transform, legendre_values)
from conftest import bumpy_model_weight, piecewise_quadratic_weight


def _softplus_weight(n=4097):
    s = np.linspace(-20, 20, n)
    u = np.log1p(np.exp(-np.abs(s))) + np.maximum(s, 0.0)  # log(1+e^s), stable
    return SampledWeight(s, u, 0.0, 1.0)


def test_conjugate_of_softplus():
    # sup_s(s/2 - log(1+e^s)) = -log 2, attained at s = 0
    w = _softplus_weight()
    val = legendre_values(w, [0.5])[0]
    assert val == pytest.approx(-np.log(2.0), abs=1e-8)


def test_conjugate_unbounded_outside_slope_range():
    w = _softplus_weight()
    with pytest.raises(UnboundedTransformError):
        legendre_values(w, [1.5])
    with pytest.raises(UnboundedTransformError):
        legendre_values(w, [-0.1])


def test_legendre_transform_convex():
    w = _softplus_weight()
    conj = legendre_transform(w, SlopeInterval(0.0, 1.0))
    assert convexity_defect(conj) <= 1e-12
    # endpoint values: w*(0) = 0 (inf of u), w*(1) = 0 (sup of s - u)
    assert conj(0.0) == pytest.approx(0.0, abs=1e-8)
    assert conj(1.0) == pytest.approx(0.0, abs=1e-8)


def test_degenerate_interval():
    w = _softplus_weight()
    conj = legendre_transform(w, SlopeInterval(0.5, 0.5))
    assert np.allclose(conj.values, -np.log(2.0), atol=1e-8)
    env = equilibrium_envelope(w, SlopeInterval(0.0, 0.0))
    assert np.allclose(env.values, w.values.min(), atol=1e-12)


def test_convex_weight_is_fixed_point():
    w = _softplus_weight()
    env = equilibrium_envelope(w, SlopeInterval(0.0, 1.0))
    assert np.abs(env.values - w.values).max() <= 1e-10


def test_envelope_below_weight_and_convex(rng):
    for _ in range(5):
        w = bumpy_model_weight(rng)
        env = equilibrium_envelope(w, SlopeInterval(0.0, 1.0))
        assert (env.values - w.values).max() <= 1e-12
        assert convexity_defect(env) <= 1e-10


def test_dual_routes_agree(rng):
    for d in (1, 2, 3):
        w = piecewise_quadratic_weight(rng, n=1024, d=d)
        iv = SlopeInterval(0.0, float(d))
        a = equilibrium_envelope(w, iv)
        b = hull_envelope(w, iv)
        assert np.abs(a.values - b.values).max() <= 1e-10


def test_convexity_defect_values():
    s = np.linspace(-1, 1, 101)
    assert convexity_defect(SampledWeight(s, s * s, -2.0, 2.0)) == 0.0
    w = SampledWeight(s, -s * s, -2.0, 2.0)
    assert convexity_defect(w) == pytest.approx(2.0, rel=1e-6)


@st.composite
def bumpy_weights(draw):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    d = draw(st.integers(min_value=1, max_value=3))
    rng = np.random.default_rng(seed)
    return bumpy_model_weight(rng, n=257, d=d)


@settings(max_examples=25, deadline=None)
@given(bumpy_weights())
def test_envelope_idempotent(w):
    iv = SlopeInterval(0.0, w.slope_right)
    env = equilibrium_envelope(w, iv)
    again = equilibrium_envelope(env, iv)
    assert np.abs(again.values - env.values).max() <= 1e-12


@settings(max_examples=25, deadline=None)
@given(bumpy_weights(), st.floats(min_value=-5.0, max_value=5.0,
                                  allow_nan=False))
def test_envelope_translation_equivariant(w, c):
    iv = SlopeInterval(0.0, w.slope_right)
    a = equilibrium_envelope(w.shifted(c), iv).values
    b = equilibrium_envelope(w, iv).values + c
    assert np.abs(a - b).max() <= 1e-10


@settings(max_examples=25, deadline=None)
@given(bumpy_weights())
def test_envelope_monotone_in_weight(w):
    iv = SlopeInterval(0.0, w.slope_right)
    lower = equilibrium_envelope(w, iv).values
    bumped = w.with_values(w.values + np.abs(np.sin(w.grid)))
    upper = equilibrium_envelope(bumped, iv).values
    assert (lower - upper).max() <= 1e-10
