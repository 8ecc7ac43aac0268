"""Fiber measure and fiber integrals over the model P^1 fibers.

At a base point with weight values phi_A, phi_L the fiber carries the
radial density

    rho(r) = 2 r a b / (r^2 a + b)^2,      a = e^{phi_A}, b = e^{phi_L},

which integrates to one over (0, inf).  The weighted moments

    I(t) = int_0^inf r^{2t} (r^2 a + b)^{-1} rho(r) dr

reduce by the substitution v = r^2 a / b to a Beta integral, giving the
closed form

    -log I(t) = t phi_A + (1 - t) phi_L - log(Gamma(1+t) Gamma(2-t) / K)

with a normalization constant K that is the same for every (a, b, t).  The
t = 0 moment has an elementary antiderivative, which pins K = 2; the
reference derivation this artifact follows states K = 4 instead, and
:func:`bergman_fiber_integral` reports are expected to surface both values
(see :func:`oracle_normalization` and the fiber-check report in the CLI).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import InvalidInputError, InvalidParameterError, PrecisionError
from .report import VerificationReport

__all__ = [
    "FiberMeasure",
    "fiber_volume",
    "bergman_fiber_integral",
    "gamma",
    "oracle_normalization",
    "STATED_NORMALIZATION",
    "holder_fiber_chain",
]

#: Normalization constant printed in the source derivation of the Gamma
#: identity.  The t = 0 oracle disagrees; both are reported, never silently
#: reconciled.
STATED_NORMALIZATION = 4.0


@dataclass(frozen=True)
class FiberMeasure:
    """Fiber density parameters a = e^{phi_A(x)}, b = e^{phi_L(x)}."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0.0 and np.isfinite(self.a)):
            raise InvalidInputError(f"a must be positive and finite, got {self.a}")
        if not (self.b > 0.0 and np.isfinite(self.b)):
            raise InvalidInputError(f"b must be positive and finite, got {self.b}")

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return 2.0 * r * self.a * self.b / (r * r * self.a + self.b) ** 2


def _integrate_halfline(f, epsabs=1e-12, epsrel=1e-12):
    """Adaptive quadrature over (0, inf) via the substitution r = tan(pi theta / 2)."""

    def g(theta):
        c = math.cos(math.pi * theta / 2.0)
        if c <= 0.0:
            return 0.0
        r = math.tan(math.pi * theta / 2.0)
        return f(r) * (math.pi / 2.0) / (c * c)

    value, err = quad(g, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=200)
    return value, err


def fiber_volume(m: FiberMeasure, tol: float = 1e-10) -> float:
    """Total mass of the fiber density; equals 1 by construction."""
    value, err = _integrate_halfline(lambda r: float(m.density(r)))
    if err > tol:
        raise PrecisionError(
            f"fiber volume quadrature error {err:.2e} exceeds {tol:.1e}",
            estimate=value)
    return value


# Lanczos approximation, g = 7, 9 coefficients; relative error well below
# 1e-12 on the positive axis.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function on the positive axis (Lanczos approximation)."""
    x = float(x)
    if not (x > 0.0 and np.isfinite(x)):
        raise InvalidParameterError(f"gamma requires x > 0, got {x}")
    if x < 0.5:
        # reflection keeps the series argument away from the pole
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def oracle_normalization(use_quadrature: bool = False) -> float:
    """Normalization constant K pinned by the t = 0 moment at a = b = 1.

    The contract -log I(0) = -log(Gamma(1) Gamma(2) / K) gives
    K = Gamma(1) Gamma(2) / I(0), and I(0) = 1/2 from the antiderivative
    -(r^2 + 1)^{-2} / 2.  With ``use_quadrature`` the moment is re-derived
    numerically instead of using the closed form.
    """
    if use_quadrature:
        m = FiberMeasure(1.0, 1.0)
        i0, err = _integrate_halfline(
            lambda r: float(m.density(r)) / (r * r + 1.0))
        if err > 1e-10:
            raise PrecisionError("normalization quadrature did not converge",
                                 estimate=i0)
    else:
        i0 = 0.5
    return gamma(1.0) * gamma(2.0) / i0


def bergman_fiber_integral(m: FiberMeasure, t: float, tol: float = 1e-10) -> float:
    """-log of the weighted fiber moment I(t); see the module docstring."""
    t = float(t)
    if not (0.0 <= t <= 1.0):
        raise InvalidParameterError(f"t must lie in [0, 1], got {t}")

    def integrand(r):
        return r ** (2.0 * t) / (r * r * m.a + m.b) * float(m.density(r))

    if t < 0.25:
        # split at the density's mode to help the subdivision near r = 0
        r0 = math.sqrt(m.b / m.a)

        def g(r):
            return integrand(r)

        v1, e1 = quad(g, 0.0, r0, epsabs=1e-13, epsrel=1e-13, limit=200)
        v2, e2 = _integrate_halfline(lambda r: g(r + r0))
        value, err = v1 + v2, e1 + e2
    else:
        value, err = _integrate_halfline(integrand)
    if err > tol or value <= 0.0:
        raise PrecisionError(
            f"fiber moment quadrature error {err:.2e} exceeds {tol:.1e}",
            estimate=value)
    return -math.log(value)


def holder_fiber_chain(m: FiberMeasure, t: float, m_pow: int,
                       tol: float = 1e-10) -> VerificationReport:
    """Power-mean inequality for g(r) = r^{2t} e^{-log(r^2 a + b)}.

    Verifies int g^m dnu >= (int g dnu)^m (int dnu)^{-(m-1)} against the
    unit-mass fiber measure nu, reporting both sides.
    """
    m_pow = int(m_pow)
    if m_pow < 1:
        raise InvalidParameterError(f"power must be >= 1, got {m_pow}")
    ell = t * m_pow
    if abs(ell - round(ell)) > 1e-9 or not (0.0 <= t <= 1.0):
        raise InvalidParameterError(
            f"t must be ell/{m_pow} for an integer 0 <= ell <= {m_pow}, got {t}")

    def g(r):
        return r ** (2.0 * t) / (r * r * m.a + m.b)

    lhs, e1 = _integrate_halfline(lambda r: g(r) ** m_pow * float(m.density(r)))
    mean, e2 = _integrate_halfline(lambda r: g(r) * float(m.density(r)))
    mass, e3 = _integrate_halfline(lambda r: float(m.density(r)))
    rhs = mean ** m_pow * mass ** (-(m_pow - 1))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return VerificationReport(
        check="fiber-power-mean",
        max_violation=(rhs - lhs) / scale,
        tolerance=tol,
        grid={"quadrature": "adaptive tan-substituted", "errors": [e1, e2, e3]},
        details={"lhs": lhs, "rhs": rhs, "t": t, "power": m_pow,
                 "a": m.a, "b": m.b})
