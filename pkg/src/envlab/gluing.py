"""Regularized max and two-chart gluing on a Hirzebruch-style model.

The regularized max is the double mollification

    M_eps(x, y) = integral of max(x + eps h1, y + eps h2) theta(h1) theta(h2)

with theta a fixed smooth even probability bump on [-1, 1].  It squeezes
between max and max + eps, is convex and nondecreasing in each argument,
and agrees with the plain max as soon as |x - y| >= 2 eps, which is what
lets two weights defined on overlapping charts be spliced into one smooth
weight: wherever one chart's weight dominates by 2 eps the splice returns
it bit for bit, and the transition zone stays convex because M_eps is
convex and monotone in each slot.

The demo glues an ambient weight of the form (convex in s) + k tau, the
log-norm term of a section cutting out a degree -k divisor at tau -> -inf,
against the fibered envelope weight built by the family module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .envelope2d import grid_line_defects
from .errors import EnvlabError, GluingError, InvalidInputError, InvalidParameterError
from .family import ModelBundlePair, family_curve, fibered_weight
from .report import VerificationReport
from .weights import SampledWeight, SampledWeight2D

__all__ = [
    "RegularizedMaxKernel",
    "GlueRegion",
    "regularized_max",
    "glue_weights",
    "hirzebruch_demo",
]


@dataclass(frozen=True)
class RegularizedMaxKernel:
    """Smoothing scale for the regularized max."""

    epsilon: float
    nodes: int = 48

    def __post_init__(self):
        if not (self.epsilon > 0.0) or not math.isfinite(self.epsilon):
            raise InvalidParameterError(f"epsilon must be positive, got {self.epsilon}")
        if self.nodes < 4:
            raise InvalidParameterError("kernel needs at least 4 quadrature nodes")


@lru_cache(maxsize=8)
def _mollifier_table(nodes: int):
    """Gauss-Legendre samples of the bump exp(-1/(1-h^2)), normalized."""
    h, wq = np.polynomial.legendre.leggauss(nodes)
    w = wq * np.exp(-1.0 / (1.0 - h * h))
    w /= w.sum()
    return h, w


def regularized_max(k: RegularizedMaxKernel, x, y):
    """Smoothed maximum M_eps(x, y); accepts scalars or same-shape arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scalar = x.ndim == 0 and y.ndim == 0
    x, y = np.broadcast_arrays(x, y)
    h, w = _mollifier_table(k.nodes)
    eps = k.epsilon
    # translation equivariance reduces to a one-variable profile in x - y
    delta = (x - y).ravel()
    out = np.maximum(x, y).ravel()
    # the mollified sum equals the plain max once |x - y| >= 2 eps; the
    # direct branch keeps that clause bit-exact
    mix = np.flatnonzero(np.abs(delta) < 2.0 * eps)
    if mix.size:
        d = delta[mix]
        acc = np.zeros_like(d)
        for hi, wi in zip(h, w):
            acc += wi * (w[None, :] * np.maximum(d[:, None] + eps * hi,
                                                 eps * h[None, :])).sum(axis=1)
        out[mix] = y.ravel()[mix] + acc
    out = out.reshape(x.shape)
    return float(out) if scalar else out


@dataclass(frozen=True)
class GlueRegion:
    """Transition annulus in the log-radius coordinate tau."""

    tau_boundary_inner: float
    tau_boundary_outer: float

    def __post_init__(self):
        if not self.tau_boundary_inner < self.tau_boundary_outer:
            raise InvalidInputError(
                "glue region needs tau_boundary_inner < tau_boundary_outer, got "
                f"[{self.tau_boundary_inner}, {self.tau_boundary_outer}]")


def _merged_polytope(a, b):
    pts = np.vstack([a, b])
    try:
        from scipy.spatial import ConvexHull
        hull = ConvexHull(pts)
        return pts[hull.vertices]
    except Exception:
        return pts[np.unique(pts.round(12), axis=0, return_index=True)[1]]


def glue_weights(outer: SampledWeight2D, inner: SampledWeight2D,
                 region: GlueRegion, k: RegularizedMaxKernel) -> SampledWeight2D:
    """Splice two chart weights: outer kept verbatim for tau past the outer
    boundary, regularized max below it.

    Requires outer >= inner + 2 eps on the transition annulus so that the
    splice is seamless; the worst offending grid point is reported when
    the margin fails.
    """
    if not (np.array_equal(outer.grid_tau, inner.grid_tau)
            and np.array_equal(outer.grid_s, inner.grid_s)):
        raise InvalidInputError("outer and inner weights must share their grids")
    tau = outer.grid_tau
    annulus = (tau > region.tau_boundary_inner) & (tau < region.tau_boundary_outer)
    margin = outer.values[annulus] - inner.values[annulus] - 2.0 * k.epsilon
    if margin.size and margin.min() < -1e-12:
        i_flat = int(np.argmin(margin))
        i_tau = np.nonzero(annulus)[0][i_flat // outer.grid_s.size]
        i_s = i_flat % outer.grid_s.size
        worst = (float(tau[i_tau]), float(outer.grid_s[i_s]))
        raise GluingError(
            "outer weight fails to dominate inner + 2*epsilon on the annulus; "
            f"worst margin {margin.min():.6g} at (tau, s) = {worst}",
            worst_point=worst)
    keep = tau >= region.tau_boundary_outer
    values = np.empty_like(outer.values)
    values[keep] = outer.values[keep]
    values[~keep] = regularized_max(k, outer.values[~keep], inner.values[~keep])
    return SampledWeight2D(tau, outer.grid_s, values,
                           _merged_polytope(outer.slope_polytope,
                                            inner.slope_polytope))


def _bump(s, center=1.0, height=0.75, width=1.0):
    return height * np.exp(-((s - center) / width) ** 2 / 2.0)


def hirzebruch_demo(config, out_dir=None) -> VerificationReport:
    """End-to-end gluing run on the ruled-surface model.

    ``config`` keys: k (positive twist of the ambient log-norm term),
    d_A, d_L (divisor degrees), grid (points per axis), epsilon.
    Returns the verification report; when ``out_dir`` is given the glued,
    outer, and inner weights are exported as CSV and gnuplot data next to
    the report JSON.
    """
    stage = "config"
    try:
        k_twist = int(config["k"])
        d_A = int(config["d_A"])
        d_L = int(config["d_L"])
        n = int(config.get("grid", 128))
        eps = float(config.get("epsilon", 0.25))
        if k_twist < 1:
            raise InvalidParameterError(f"twist k must be >= 1, got {k_twist}")

        stage = "pair"
        s_grid = np.linspace(-20.0, 20.0, n)
        phi_A = SampledWeight.from_function(
            lambda s: d_A * np.log1p(np.exp(-np.abs(s))) + d_A * np.maximum(s, 0.0),
            0.0, float(d_A), s_grid)
        phi_L = SampledWeight.from_function(
            lambda s: d_L * np.log1p(np.exp(-np.abs(s))) + d_L * np.maximum(s, 0.0)
            + _bump(s),
            0.0, float(d_L), s_grid)
        pair = ModelBundlePair(phi_A, d_A, phi_L, d_L)

        stage = "family"
        tau_grid = np.linspace(-30.0, 10.0, n)
        inner = fibered_weight(pair, family_curve(pair), tau_grid)

        stage = "outer"
        ambient = d_A * np.log1p(np.exp(-np.abs(s_grid))) + d_A * np.maximum(s_grid, 0.0)
        outer_vals = k_twist * tau_grid[:, None] + ambient[None, :]
        outer = SampledWeight2D(tau_grid, s_grid, outer_vals,
                                np.array([[float(k_twist), 0.0],
                                          [float(k_twist), float(d_A)]]))

        stage = "normalize"
        region = GlueRegion(-2.0, 0.0)
        annulus = (tau_grid > region.tau_boundary_inner) \
            & (tau_grid < region.tau_boundary_outer)
        margin = (outer.values[annulus] - inner.values[annulus]).min()
        shift = max(0.0, 2.0 * eps - margin + 1e-9)
        outer = SampledWeight2D(tau_grid, s_grid, outer.values + shift,
                                outer.slope_polytope)

        stage = "glue"
        kernel = RegularizedMaxKernel(eps)
        glued = glue_weights(outer, inner, region, kernel)

        stage = "verify"
        defect = grid_line_defects(glued.values, tau_grid, s_grid)
        keep = tau_grid >= region.tau_boundary_outer
        outer_exact = bool(np.array_equal(glued.values[keep], outer.values[keep]))
        second = np.abs(np.diff(glued.values, n=2, axis=0)).max() \
            + np.abs(np.diff(glued.values, n=2, axis=1)).max()
        report = VerificationReport(
            check="hirzebruch-gluing",
            max_violation=defect if outer_exact else math.inf,
            tolerance=1e-9,
            grid={"tau_points": n, "s_points": n},
            details={"k": k_twist, "d_A": d_A, "d_L": d_L, "epsilon": eps,
                     "normalization_shift": shift,
                     "line_convexity_defect": defect,
                     "outer_region_exact": outer_exact,
                     "max_second_difference": float(second)})
    except EnvlabError as exc:
        raise GluingError(f"stage '{stage}' failed: {exc}",
                          worst_point=getattr(exc, "worst_point", None)) from exc

    if out_dir is not None:
        from .cli import export_report, export_weight2d_artifacts
        export_weight2d_artifacts({"glued": glued, "outer": outer,
                                   "inner": inner}, out_dir)
        export_report(report, out_dir, "hirzebruch-gluing")
    return report
