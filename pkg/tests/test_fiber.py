import math

import numpy as np
import pytest
from scipy.special import gamma as scipy_gamma

from envlab import (FiberMeasure, InvalidInputError, InvalidParameterError,
                    STATED_NORMALIZATION,
                    bergman_fiber_integral, fiber_volume, gamma,
                    holder_fiber_chain, oracle_normalization)


def test_fiber_measure_validation():
    with pytest.raises(InvalidInputError):
        FiberMeasure(0.0, 1.0)
    with pytest.raises(InvalidInputError):
        FiberMeasure(1.0, -2.0)


def test_fiber_volume_unit_mass(rng):
    for _ in range(30):
        a, b = rng.uniform(0.1, 10.0, size=2)
        assert abs(fiber_volume(FiberMeasure(a, b)) - 1.0) <= 1e-10


def test_gamma_against_scipy():
    for x in (0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 7.5, 10.0):
        assert gamma(x) == pytest.approx(scipy_gamma(x), rel=1e-13)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    with pytest.raises(InvalidParameterError):
        gamma(0.0)
    with pytest.raises(InvalidParameterError):
        gamma(-2.0)


def test_oracle_normalization_routes_agree():
    closed = oracle_normalization()
    quad = oracle_normalization(use_quadrature=True)
    assert closed == pytest.approx(2.0, abs=1e-14)
    assert quad == pytest.approx(closed, rel=1e-10)


def test_stated_constant_disagrees_with_oracle():
    # both constants are reported side by side; they do not match
    assert STATED_NORMALIZATION == 4.0
    assert abs(oracle_normalization() - STATED_NORMALIZATION) > 1.0


def test_gamma_identity_random_parameters(rng):
    K = oracle_normalization()
    for _ in range(10):
        a, b = rng.uniform(0.1, 10.0, size=2)
        m = FiberMeasure(a, b)
        for t in (0.0, 0.25, 0.5, 0.75, 1.0):
            lhs = math.exp(-bergman_fiber_integral(m, t)
                           + t * math.log(a) + (1.0 - t) * math.log(b))
            rhs = gamma(1.0 + t) * gamma(2.0 - t) / K
            assert lhs == pytest.approx(rhs, rel=1e-10)


def test_bergman_integral_closed_values():
    m = FiberMeasure(1.0, 1.0)
    # I(0) = 1/2 and I(1/2) = pi/8 for a = b = 1
    assert math.exp(-bergman_fiber_integral(m, 0.0)) == pytest.approx(0.5, rel=1e-12)
    assert math.exp(-bergman_fiber_integral(m, 0.5)) == pytest.approx(math.pi / 8.0,
                                                                      rel=1e-12)


def test_holder_chain(rng):
    for _ in range(5):
        a, b = rng.uniform(0.5, 5.0, size=2)
        rep = holder_fiber_chain(FiberMeasure(a, b), 0.5, 2)
        assert rep.passed
