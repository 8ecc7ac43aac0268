"""Shared fixtures and random-weight generators for the test suite."""

import numpy as np
import pytest

from envlab import ModelBundlePair, SampledWeight


def piecewise_quadratic_weight(rng, n=4096, d=1, span=20.0):
    """Random non-convex piecewise-quadratic weight with slope data (v0, v1).

    The derivative is a continuous piecewise-linear interpolation through
    random knot values, rescaled so the endpoint slopes satisfy v0 <= 0
    and v1 >= d; integrating it gives a piecewise-quadratic weight whose
    envelope over [0, d] is nontrivial.
    """
    s = np.linspace(-span, span, n)
    knots = np.sort(rng.uniform(-span, span, rng.integers(4, 9)))
    knots = np.concatenate([[-span], knots, [span]])
    raw = rng.uniform(-2.0, float(d) + 2.0, knots.size)
    v0 = rng.uniform(-1.0, 0.0)
    v1 = rng.uniform(float(d), float(d) + 1.0)
    if abs(raw[-1] - raw[0]) < 1e-3:
        raw[-1] += 1.0
    v_knots = v0 + (raw - raw[0]) * (v1 - v0) / (raw[-1] - raw[0])
    v = np.interp(s, knots, v_knots)
    u = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(s))])
    return SampledWeight(s, u, float(v[0]), float(v[-1]))


def bumpy_model_weight(rng, n=2049, d=1, span=20.0):
    """Smooth non-convex weight with slope data exactly (0, d)."""
    s = np.linspace(-span, span, n)
    u = d * (np.log1p(np.exp(-np.abs(s))) + np.maximum(s, 0.0))
    for _ in range(rng.integers(2, 6)):
        c = rng.uniform(-8.0, 8.0)
        u += rng.uniform(-1.5, 1.5) * np.exp(-((s - c) / rng.uniform(0.5, 3.0)) ** 2)
    return SampledWeight(s, u, 0.0, float(d))


def model_pair(n=513, d_A=2, d_L=1, seed=None):
    """Model bundle pair: convex phi_A, bumpy phi_L."""
    s = np.linspace(-20.0, 20.0, n)
    soft = np.log1p(np.exp(-np.abs(s))) + np.maximum(s, 0.0)
    rng = np.random.default_rng(0 if seed is None else seed)
    bumps = -0.6 * np.exp(-2.0 * (s + 2.0) ** 2) + 0.9 * np.exp(-(s - 3.0) ** 2)
    if seed is not None:
        bumps = np.zeros_like(s)
        for _ in range(3):
            c = rng.uniform(-6.0, 6.0)
            bumps += rng.uniform(-1.0, 1.0) * np.exp(-((s - c) / rng.uniform(0.8, 2.5)) ** 2)
    phi_A = SampledWeight(s, d_A * soft, 0.0, float(d_A))
    phi_L = SampledWeight(s, d_L * soft + bumps, 0.0, float(d_L))
    return ModelBundlePair(phi_A, d_A, phi_L, d_L)


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)


@pytest.fixture
def bump_pair():
    return model_pair()
