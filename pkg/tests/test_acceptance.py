"""Acceptance suite: one test per primary criterion, each printing a single
pass/fail line and enforcing the stated tolerance and runtime budget."""

import time

import numpy as np
import pytest

from envlab import (FiberMeasure, RegularizedMaxKernel, SlopeInterval,
                    STATED_NORMALIZATION, ToricSection, bergman_fiber_integral,
                    check_monotone_family, check_sandwich,
                    coefficient_inequality, comparison_constants,
                    default_t_grid, equilibrium_envelope, family_curve,
                    fiber_volume, fibered_weight, gamma, hirzebruch_demo,
                    hull_envelope, minimal_singularity_gap, monotone_t_grid,
                    oracle_normalization, regularized_max, unit_boxes)
from conftest import bumpy_model_weight, model_pair, piecewise_quadratic_weight


_capman = None


@pytest.fixture(autouse=True)
def _live_report(request):
    # Pass/fail lines must reach the terminal even under pytest's capture.
    global _capman
    _capman = request.config.pluginmanager.getplugin("capturemanager")
    yield


def _report(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    if _capman is not None:
        with _capman.global_and_fixture_disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)
    assert ok, f"{name}: {detail}"


def test_envelope_oracle_equivalence():
    rng = np.random.default_rng(1001)
    t0 = time.time()
    worst = 0.0
    for i in range(50):
        d = 1 + i % 3
        w = piecewise_quadratic_weight(rng, n=4096, d=d)
        iv = SlopeInterval(0.0, float(d))
        diff = np.abs(equilibrium_envelope(w, iv).values
                      - hull_envelope(w, iv).values).max()
        worst = max(worst, float(diff))
    elapsed = time.time() - t0
    _report("envelope-oracle-equivalence", worst <= 1e-8 and elapsed < 30.0,
            f"sup-norm {worst:.3e} (tol 1e-08), {elapsed:.1f}s (budget 30s)")


def test_family_monotonicity():
    worst = 0.0
    for seed in range(10):
        pair = model_pair(n=513, d_A=1 + seed % 3, d_L=seed % 2, seed=seed)
        fc = family_curve(pair, monotone_t_grid(101))
        worst = max(worst, check_monotone_family(fc).max_violation)
    _report("family-monotonicity", worst <= 1e-9,
            f"max violation {worst:.3e} (tol 1e-09) over 10 seeded pairs")


def test_fiber_volume_unit_mass():
    rng = np.random.default_rng(1003)
    worst = 0.0
    for _ in range(100):
        a, b = rng.uniform(0.1, 10.0, size=2)
        worst = max(worst, abs(fiber_volume(FiberMeasure(a, b)) - 1.0))
    _report("fiber-unit-mass", worst <= 1e-10,
            f"max |volume - 1| = {worst:.3e} (tol 1e-10), 100 cases")


def test_fiber_gamma_identity():
    rng = np.random.default_rng(1004)
    K = oracle_normalization()
    worst = 0.0
    for _ in range(20):
        a, b = rng.uniform(0.1, 10.0, size=2)
        m = FiberMeasure(a, b)
        for t in np.arange(9) / 8.0:
            lhs = np.exp(-bergman_fiber_integral(m, float(t))
                         + t * np.log(a) + (1.0 - t) * np.log(b))
            rhs = gamma(1.0 + t) * gamma(2.0 - t) / K
            worst = max(worst, abs(lhs - rhs) / rhs)
    agree = abs(K - STATED_NORMALIZATION) < 1e-9
    _report("fiber-gamma-identity", worst <= 1e-8,
            f"max rel error {worst:.3e} (tol 1e-08); K_oracle={K:g} vs "
            f"stated K={STATED_NORMALIZATION:g} -> "
            f"{'agree' if agree else 'DISAGREE'}")


def test_envelope_gap_bound():
    t0 = time.time()
    pair = model_pair(n=128, d_A=2, d_L=1)
    fw = fibered_weight(pair, family_curve(pair, default_t_grid(129)),
                        np.linspace(-30.0, 10.0, 128))
    rep = minimal_singularity_gap(pair, fw)
    elapsed = time.time() - t0
    _report("envelope-gap-bound", rep.passed and elapsed < 60.0,
            f"observed gap {rep.details['observed_gap']:.4f} <= "
            f"C {rep.details['C']:.4f}, {elapsed:.1f}s (budget 60s)")


def test_section_sandwich():
    w = bumpy_model_weight(np.random.default_rng(1006), n=2049, d=1)
    cc = comparison_constants(w, unit_boxes(w.grid[0], w.grid[-1]))
    worst = 0.0
    eps_values, abs_gaps = [], []
    for m in (8, 64, 256):
        rep = check_sandwich(w, 1, m, cc)
        worst = max(worst, rep.max_violation)
        eps_values.append(rep.details["epsilon_m"])
        abs_gaps.append(rep.details["abs_gap"])
    eps_ok = all(b <= a + 1e-12 for a, b in zip(eps_values, eps_values[1:]))
    gap_ok = abs_gaps[0] > abs_gaps[1] > abs_gaps[2]
    _report("section-sandwich", worst <= 1e-9 and eps_ok and gap_ok,
            f"chain violation {worst:.3e} (tol 1e-09); gap ladder "
            + " > ".join(f"{g:.4f}" for g in abs_gaps))


def test_coefficient_parseval():
    rng = np.random.default_rng(1007)
    pair = model_pair(n=257, d_A=1, d_L=2)
    worst = 0.0
    for _ in range(100):
        coeffs = {}
        while len(coeffs) < rng.integers(1, 7):
            lk = (int(rng.integers(0, 5)), int(rng.integers(0, 3)))
            coeffs[lk] = complex(rng.normal(), rng.normal())
        rep = coefficient_inequality(ToricSection(4, coeffs), pair)
        worst = max(worst, rep.max_violation)
    _report("coefficient-parseval", worst <= 1e-8,
            f"max violation {worst:.3e} (tol 1e-08), 100 random sections")


def test_regularized_max_contract():
    rng = np.random.default_rng(1008)
    worst = 0.0
    for _ in range(1000):
        x, y = rng.normal(0.0, 4.0, size=2)
        eps = rng.uniform(0.01, 2.0)
        c = rng.normal()
        k = RegularizedMaxKernel(eps)
        m = regularized_max(k, x, y)
        worst = max(worst,
                    max(x, y) - m,
                    m - max(x, y) - eps,
                    abs(m - regularized_max(k, y, x)),
                    abs(regularized_max(k, x + c, y + c) - m - c),
                    m - regularized_max(k, x + abs(c), y),
                    abs(m - max(x, y)) if abs(x - y) >= 2 * eps else 0.0)
    s = np.linspace(-3.0, 3.0, 101)
    convex_worst = 0.0
    for _ in range(100):
        f = rng.uniform(0.1, 1.0) * s * s + rng.normal() * s + rng.normal()
        g = rng.uniform(0.1, 1.0) * np.abs(s - rng.normal()) + rng.normal()
        m = regularized_max(RegularizedMaxKernel(rng.uniform(0.05, 1.0)), f, g)
        convex_worst = max(convex_worst, float(-np.diff(m, n=2).min()), 0.0)
    _report("regularized-max-contract",
            worst <= 1e-10 and convex_worst <= 1e-10,
            f"clause violation {worst:.3e}, convexity defect "
            f"{convex_worst:.3e} (tol 1e-10)")


def test_hirzebruch_demo():
    t0 = time.time()
    rep = hirzebruch_demo({"k": 3, "d_A": 1, "d_L": 0, "grid": 128,
                           "epsilon": 0.25})
    elapsed = time.time() - t0
    ok = (rep.passed and rep.details["outer_region_exact"]
          and rep.details["line_convexity_defect"] <= 1e-9
          and elapsed < 120.0)
    _report("hirzebruch-demo", ok,
            f"convexity defect {rep.details['line_convexity_defect']:.3e} "
            f"(tol 1e-09), outer region exact="
            f"{rep.details['outer_region_exact']}, {elapsed:.1f}s (budget 120s)")
