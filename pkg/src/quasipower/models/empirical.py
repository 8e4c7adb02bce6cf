"""Quasi-power data estimated from exact laws at two indices.

For models whose ``u`` and ``v`` are only known asymptotically, the linear
growth ``mean ~ grad u(0) n + grad v(0)`` and ``cov ~ H_u(0) n + H_v(0)`` is
fitted by difference quotients of the exact moments at ``n1 < n2``.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..lattice import LatticeDistribution
from ..quasi_power import PowerSeries, QuasiPowerModel

ESTIMATION_NOTE = "grad u(0), H_u(0) estimated by difference quotients of exact moments"


def _second_order_series(grad: np.ndarray, hess: np.ndarray) -> PowerSeries:
    m = len(grad)
    coeffs = {}
    for j in range(m):
        e = [0] * m
        e[j] = 1
        coeffs[tuple(e)] = float(grad[j])
    for i in range(m):
        for j in range(i, m):
            e = [0] * m
            e[i] += 1
            e[j] += 1
            coeffs[tuple(e)] = float(hess[i, j]) / (2.0 if i == j else 1.0)
    return PowerSeries(m, 2, coeffs)


def empirical_model(law: Callable[[int], LatticeDistribution], n1: int, n2: int, name: str = "",
                    metadata: dict | None = None) -> QuasiPowerModel:
    """Order-2 model with ``phi_n = n`` fitted to the exact laws at ``n1`` and ``n2``."""
    if not 0 < n1 < n2:
        raise ValueError("need 0 < n1 < n2")
    a, b = law(n1), law(n2)
    grad_u = (b.mean() - a.mean()) / (n2 - n1)
    hess_u = (b.cov() - a.cov()) / (n2 - n1)
    grad_v = a.mean() - grad_u * n1
    hess_v = a.cov() - hess_u * n1
    meta = {"estimation": ESTIMATION_NOTE, "n1": n1, "n2": n2}
    meta.update(metadata or {})
    return QuasiPowerModel(u=_second_order_series(grad_u, hess_u), v=_second_order_series(grad_v, hess_v),
                           phi=float, exact_law=law, name=name, metadata=meta)
