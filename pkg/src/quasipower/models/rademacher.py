"""The degenerate example: ``Omega_n = +-1`` with probability 1/2 for every ``n``.

Its moment generating function ``cosh s`` has the quasi-power form with
``phi_n = n``, ``u = 0`` and ``v = log cosh s``.  The Hessian of ``u`` vanishes
and ``Omega_n / sqrt(n)`` stays at distance 1/2 from its limit, the point mass
at 0, for every ``n``.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..lattice import LatticeDistribution
from ..quasi_power import PowerSeries, QuasiPowerModel

ORDER = 4


def rademacher_law() -> LatticeDistribution:
    return LatticeDistribution(np.array([0.5, 0.5]), -1.0, 2.0)


def step_cdf_distance(jumps_a: dict, jumps_b: dict) -> Fraction:
    """Exact ``sup_x |F_a(x) - F_b(x)|`` for two finitely supported laws on the line.

    Laws are given as ``{position: mass}`` with rational masses.  Between jumps
    both CDFs are constant, so the supremum is a maximum over the values at the
    jump points and their left limits.
    """
    best = Fraction(0)
    fa = fb = Fraction(0)
    for x in sorted(set(jumps_a) | set(jumps_b)):
        best = max(best, abs(fa - fb))  # left limits at x
        fa += jumps_a.get(x, 0)
        fb += jumps_b.get(x, 0)
        best = max(best, abs(fa - fb))
    return best


def rademacher_demo(n: int) -> tuple[LatticeDistribution, float]:
    """Law of ``Omega_n / sqrt(n)`` and its exact sup distance to the point mass at 0."""
    if n < 1:
        raise ValueError("n must be positive")
    law = rademacher_law().affine(0.0, math.sqrt(n))
    atoms = {float(p[0]): Fraction(mass).limit_denominator(2**20) for p, mass in law.atoms()}
    return law, float(step_cdf_distance(atoms, {0.0: Fraction(1)}))


def rademacher_model() -> QuasiPowerModel:
    """``u = 0``, ``v(s) = log cosh s = s^2/2 - s^4/12 + ...``."""
    v = PowerSeries(1, ORDER, {(2,): 0.5, (4,): -1.0 / 12.0})
    return QuasiPowerModel(u=PowerSeries(1, ORDER), v=v, phi=float,
                           exact_law=lambda n: rademacher_law(), name="rademacher",
                           metadata={"kappa": "arbitrary"})
