#!/usr/bin/env python3
"""Approximating the constrained envelope by holomorphic sections.

Two Bergman-style approximants to the envelope u_e of a weight w:

  psi_1  uses sup-normalized monomials and is a certified minorant,
  psi_2  uses L^2-normalized monomials and dominates psi_1 by a
         constant (c_1 + c_2 + log 2) / m that vanishes as m grows.

This script builds both at increasing degree m, verifies the sandwich
psi_1 <= psi_2 <= psi_1 + C/m and the shrinking distance to u_e, and
then checks the Parseval-type coefficient inequality for random
sections: the sum of per-monomial weighted masses never exceeds the
total weighted mass of the section.
"""

import numpy as np

from envlab import (
    SampledWeight,
    SlopeInterval,
    ToricSection,
    check_sandwich,
    coefficient_inequality,
    comparison_constants,
    equilibrium_envelope,
    psi1_approximant,
    psi2_approximant,
    unit_boxes,
)
from envlab.family import ModelBundlePair


def bumpy_weight(n: int = 2049, d: int = 1) -> SampledWeight:
    s = np.linspace(-20.0, 20.0, n)
    vals = d * np.logaddexp(0.0, s) - 0.9 * np.exp(-0.5 * (s + 1.0) ** 2)
    return SampledWeight(s, vals, 0.0, float(d))


def main() -> None:
    d = 1
    w = bumpy_weight(d=d)
    u_e = equilibrium_envelope(w, SlopeInterval(0.0, float(d)))
    cc = comparison_constants(w, unit_boxes(w.grid[0], w.grid[-1]))
    print(f"comparison constants: c1 = {cc.c1:.4f}, c2 = {cc.c2:.4f}, "
          f"total C = {cc.total:.4f}")

    print("\nsandwich and convergence as the degree m grows:")
    for m in (8, 32, 128):
        rep = check_sandwich(w, d, m, cc)
        psi2 = psi2_approximant(w, d, m)
        dist = float(np.max(np.abs(psi2.values - u_e.values)))
        print(f"  m = {m:4d}  {rep.status}  sandwich violation "
              f"{rep.max_violation:.3e}  max |psi_2 - u_e| = {dist:.4f}")

    print("\ncoefficient inequality for random sections (m = 4):")
    rng = np.random.default_rng(11)
    s_grid = np.linspace(-20.0, 20.0, 257)
    soft = np.logaddexp(0.0, s_grid)
    pair = ModelBundlePair(
        SampledWeight(s_grid, 2.0 * soft, 0.0, 2.0), 2,
        SampledWeight(s_grid, soft, 0.0, 1.0), 1,
    )
    worst = 0.0
    for i in range(5):
        coeffs = {}
        for _ in range(rng.integers(1, 6)):
            l = int(rng.integers(0, 5))
            k = int(rng.integers(0, 2 * l + 1))
            coeffs[(l, k)] = complex(rng.normal(), rng.normal())
        if not coeffs:
            coeffs[(0, 0)] = 1.0 + 0.0j
        rep = coefficient_inequality(ToricSection(4, coeffs), pair)
        worst = max(worst, rep.max_violation)
        print(f"  section {i}: {rep.status}  "
              f"relative violation {rep.max_violation:.3e}")
    print(f"worst relative violation: {worst:.3e}")


if __name__ == "__main__":
    main()
