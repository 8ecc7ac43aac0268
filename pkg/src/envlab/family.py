"""The one-parameter envelope family and the fibered weight it induces.

For a pair of model weights (phi_A of degree d_A >= 1, phi_L of degree
d_L >= 0) the mixture t phi_A + (1-t) phi_L carries the slope interval
[0, t d_A + (1-t) d_L].  Its envelope offset psi_t <= 0 varies with t, the
rescalings psi_t / (1-t) increase in t and are right-continuous, and the
fibered weight

    phi(tau, s) = max_t ( t tau + (t phi_A + (1-t) phi_L)_e(s) )

is convex with tau-slopes in [0, 1].  This module builds the family and
the fibered weight and runs the quantitative checks on them, including the
comparison of the naive fibered weight log(e^{tau + phi_A} + e^{phi_L})
against phi after taking its 2-d envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .envelope import equilibrium_envelope
from .envelope2d import equilibrium_envelope_2d
from .errors import InvalidInputError, InvalidParameterError
from .fiber import gamma, oracle_normalization
from .measures import DEFAULT_BASE_MEASURE
from .report import VerificationReport
from .weights import SampledWeight, SampledWeight2D, SlopeInterval

__all__ = [
    "ModelBundlePair",
    "FamilyCurve",
    "mix_weights",
    "family_curve",
    "default_t_grid",
    "monotone_t_grid",
    "check_monotone_family",
    "check_right_continuity",
    "check_upper_semicontinuity",
    "fibered_weight",
    "naive_fibered_weight",
    "minimal_singularity_gap",
]

#: t-grid cap used by the monotonicity check; t = 1 is handled separately.
T_CAP = 1.0 - 1.0 / 1024.0


@dataclass(frozen=True)
class ModelBundlePair:
    """Weights and degrees of the ample/pseudo-effective model pair."""

    phi_A: SampledWeight
    d_A: int
    phi_L: SampledWeight
    d_L: int

    def __post_init__(self):
        if int(self.d_A) != self.d_A or self.d_A < 1:
            raise InvalidInputError(f"d_A must be an integer >= 1, got {self.d_A}")
        if int(self.d_L) != self.d_L or self.d_L < 0:
            raise InvalidInputError(f"d_L must be an integer >= 0, got {self.d_L}")
        for w, d, name in ((self.phi_A, self.d_A, "phi_A"),
                           (self.phi_L, self.d_L, "phi_L")):
            if abs(w.slope_left) > 1e-9 or abs(w.slope_right - d) > 1e-9:
                raise InvalidInputError(
                    f"{name} slopes ({w.slope_left}, {w.slope_right}) do not "
                    f"match degree {d}")
        if not np.array_equal(self.phi_A.grid, self.phi_L.grid):
            raise InvalidInputError("phi_A and phi_L must share one grid")
        object.__setattr__(self, "d_A", int(self.d_A))
        object.__setattr__(self, "d_L", int(self.d_L))

    @property
    def grid(self) -> np.ndarray:
        return self.phi_A.grid


def mixed_degree(pair: ModelBundlePair, t: float) -> float:
    return t * pair.d_A + (1.0 - t) * pair.d_L


def mix_weights(pair: ModelBundlePair, t: float) -> SampledWeight:
    """The mixture t phi_A + (1-t) phi_L with its interpolated slope data."""
    t = float(t)
    if not (0.0 <= t <= 1.0):
        raise InvalidParameterError(f"t must lie in [0, 1], got {t}")
    vals = t * pair.phi_A.values + (1.0 - t) * pair.phi_L.values
    return SampledWeight(pair.grid, vals, 0.0, mixed_degree(pair, t))


@dataclass(frozen=True)
class FamilyCurve:
    """Envelope offsets psi_t <= 0 sampled along a t-grid."""

    pair: ModelBundlePair
    t_grid: np.ndarray
    psi: tuple  # tuple of SampledWeight, aligned with t_grid

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=float)
        if t.ndim != 1 or not np.all(np.diff(t) > 0):
            raise InvalidInputError("t_grid must be strictly increasing")
        if t[0] < 0.0 or t[-1] > 1.0:
            raise InvalidInputError("t_grid must lie in [0, 1]")
        if len(self.psi) != t.size:
            raise InvalidInputError("psi must align with t_grid")
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "psi", tuple(self.psi))

    def psi_matrix(self) -> np.ndarray:
        return np.stack([p.values for p in self.psi])


def default_t_grid(n: int = 257) -> np.ndarray:
    """Chebyshev-like t-grid on [0, 1] including both endpoints."""
    return 0.5 * (1.0 - np.cos(np.linspace(0.0, math.pi, n)))


def monotone_t_grid(n: int = 101) -> np.ndarray:
    """Uniform t-grid capped below 1 for the division by 1 - t."""
    return np.linspace(0.0, T_CAP, n)


def envelope_offset(pair: ModelBundlePair, t: float) -> SampledWeight:
    mix = mix_weights(pair, t)
    env = equilibrium_envelope(mix, SlopeInterval(0.0, mixed_degree(pair, t)))
    return mix.with_values(env.values - mix.values, 0.0, 0.0)


def family_curve(pair: ModelBundlePair, t_grid=None) -> FamilyCurve:
    """Envelope offsets psi_t for every t in the grid."""
    t_grid = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    psis = tuple(envelope_offset(pair, float(t)) for t in t_grid)
    return FamilyCurve(pair, t_grid, psis)


def check_monotone_family(fc: FamilyCurve, tol: float = 1e-9) -> VerificationReport:
    """psi_t / (1 - t) must be nondecreasing in t at every base sample."""
    if fc.t_grid[-1] >= 1.0:
        raise InvalidParameterError(
            "monotonicity check requires a t-grid strictly below 1")
    h = fc.psi_matrix() / (1.0 - fc.t_grid)[:, None]
    violation = float(np.maximum(0.0, -np.diff(h, axis=0)).max())
    return VerificationReport(
        check="family-monotonicity",
        max_violation=violation,
        tolerance=tol,
        grid={"t_points": int(fc.t_grid.size), "s_points": int(fc.pair.grid.size)},
        details={"t_max": float(fc.t_grid[-1])})


def check_right_continuity(fc: FamilyCurve,
                           deltas=(1 / 32, 1 / 64, 1 / 128, 1 / 256),
                           t_values=None,
                           tol: float = 1e-9) -> VerificationReport:
    """Residuals |psi_{t+d}/(1-t-d) - psi_t/(1-t)| must decay as d halves.

    Fresh envelopes are computed at each offset t + d; the report records
    the residual ladder and the fitted dyadic decay rate.
    """
    deltas = sorted(float(d) for d in deltas)[::-1]
    if t_values is None:
        interior = fc.t_grid[(fc.t_grid > 0.0) & (fc.t_grid + deltas[0] < 1.0)]
        t_values = interior[:: max(1, interior.size // 8)]
    ladders = {}
    worst_increase = 0.0
    for t in np.asarray(t_values, dtype=float):
        base = envelope_offset(fc.pair, t).values / (1.0 - t)
        resid = []
        for d in deltas:
            shifted = envelope_offset(fc.pair, t + d).values / (1.0 - t - d)
            resid.append(float(np.abs(shifted - base).max()))
        for r_coarse, r_fine in zip(resid, resid[1:]):
            worst_increase = max(worst_increase, r_fine - r_coarse)
        ladders[float(t)] = resid
    rates = [math.log2(r[0] / r[-1]) / (len(r) - 1)
             for r in ladders.values() if r[0] > 0 and r[-1] > 0]
    return VerificationReport(
        check="family-right-continuity",
        max_violation=worst_increase,
        tolerance=tol,
        grid={"deltas": list(deltas), "t_values": [float(t) for t in ladders]},
        details={"residuals": ladders,
                 "fitted_decay": float(np.mean(rates)) if rates else 0.0})


def check_upper_semicontinuity(fc: FamilyCurve, t0: float, s0: float,
                               radii=(0.2, 0.1, 0.05, 0.025),
                               tol: float = 1e-9) -> VerificationReport:
    """Box maxima of H(s, t) = psi_t/(1-t) shrink down to the center value."""
    h = fc.psi_matrix() / (1.0 - fc.t_grid)[:, None]
    s = fc.pair.grid
    center = float(h[np.argmin(np.abs(fc.t_grid - t0)),
                     np.argmin(np.abs(s - s0))])
    maxima = []
    for r in sorted(radii, reverse=True):
        box = h[np.abs(fc.t_grid - t0) <= r][:, np.abs(s - s0) <= r]
        maxima.append(float(box.max()))
    worst = max(max(0.0, b - a) for a, b in zip(maxima, maxima[1:])) \
        if len(maxima) > 1 else 0.0
    worst = max(worst, center - maxima[-1])
    return VerificationReport(
        check="family-upper-semicontinuity",
        max_violation=worst,
        tolerance=tol,
        grid={"radii": list(sorted(radii, reverse=True))},
        details={"center": center, "box_maxima": maxima,
                 "t0": float(t0), "s0": float(s0)})


def cayley_polytope(pair: ModelBundlePair) -> np.ndarray:
    """Gradient polygon of the fibered weight: tau-slope t in [0, 1], s-slope
    in [0, t d_A + (1-t) d_L]."""
    return np.array([[0.0, 0.0], [1.0, 0.0],
                     [1.0, float(pair.d_A)], [0.0, float(pair.d_L)]])


def fibered_weight(pair: ModelBundlePair, fc: FamilyCurve,
                   tau_grid) -> SampledWeight2D:
    """phi(tau, s) = max over the t-grid of t tau + (mixture envelope)(s).

    The t-grid must contain both endpoints so the tau -> +-inf asymptotics
    are represented.
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    t = fc.t_grid
    if abs(t[0]) > 1e-12 or abs(t[-1] - 1.0) > 1e-12:
        raise InvalidParameterError("t-grid must include the endpoints 0 and 1")
    env = np.stack([mix_weights(pair, float(ti)).values + p.values
                    for ti, p in zip(t, fc.psi)])
    vals = np.empty((tau_grid.size, pair.grid.size))
    for i, tau in enumerate(tau_grid):
        vals[i] = (t[:, None] * tau + env).max(axis=0)
    return SampledWeight2D(tau_grid, pair.grid, vals, cayley_polytope(pair))


def naive_fibered_weight(pair: ModelBundlePair, tau_grid) -> SampledWeight2D:
    """The log-sum weight log(e^{tau + phi_A(s)} + e^{phi_L(s)})."""
    tau_grid = np.asarray(tau_grid, dtype=float)
    vals = np.logaddexp(tau_grid[:, None] + pair.phi_A.values[None, :],
                        pair.phi_L.values[None, :])
    return SampledWeight2D(tau_grid, pair.grid, vals, cayley_polytope(pair))


def _oscillation_constants(pair: ModelBundlePair, box_size: float = 1.0,
                           t_samples: int = 101,
                           base_measure=DEFAULT_BASE_MEASURE):
    """Oscillation constant C1 and density-ratio constant C2 over s-boxes."""
    s = pair.grid
    k = oracle_normalization()
    t = np.linspace(0.0, 1.0, t_samples)
    gam = np.array([math.log(gamma(1.0 + ti) * gamma(2.0 - ti) / k) for ti in t])
    # reference family t phi_A + (1-t) phi_L - log(Gamma Gamma / K), all t
    ref = (t[:, None] * pair.phi_A.values[None, :]
           + (1.0 - t)[:, None] * pair.phi_L.values[None, :]
           - gam[:, None])
    starts = np.arange(s[0], s[-1], box_size / 2.0)
    c1 = 0.0
    for lo in starts:
        box = (s >= lo) & (s <= lo + box_size)
        if not np.any(box):
            continue
        piece = ref[:, box]
        c1 = max(c1, float(piece.max() - piece.min()))
    dens = base_measure.density(s)
    c2 = float(np.log(1.0 / dens.min()))
    return c1, c2


def minimal_singularity_gap(pair: ModelBundlePair, fw: SampledWeight2D,
                            box_size: float = 1.0) -> VerificationReport:
    """Envelope of the log-sum weight stays within C of the fibered weight.

    Builds phi_inf(tau, s) = log(e^{tau + phi_A} + e^{phi_L}) on the grids
    of ``fw``, takes its 2-d envelope, and verifies
    (phi_inf)_e <= phi + C with C = C1 + C2 + log 2 assembled from the
    oscillation and density-ratio constants.
    """
    naive = naive_fibered_weight(pair, fw.grid_tau)
    if not np.array_equal(naive.grid_s, fw.grid_s):
        raise InvalidInputError("fibered weight must live on the pair grid")
    env = equilibrium_envelope_2d(naive)
    gap = float((env.values - fw.values).max())
    c1, c2 = _oscillation_constants(pair, box_size=box_size)
    c = c1 + c2 + math.log(2.0)
    return VerificationReport(
        check="envelope-gap-bound",
        max_violation=gap - c,
        tolerance=0.0,
        grid={"tau_points": int(fw.grid_tau.size),
              "s_points": int(fw.grid_s.size),
              "box_size": box_size},
        details={"observed_gap": gap, "C": c, "C1": c1, "C2": c2,
                 "K": oracle_normalization()})
