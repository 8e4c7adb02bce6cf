"""Sums of independent identically distributed lattice vectors."""
from __future__ import annotations

import numpy as np
from scipy.signal import convolve

from ..errors import ResourceLimitError
from ..lattice import LatticeDistribution
from ..quasi_power import DEFAULT_ORDER, PowerSeries, QuasiPowerModel, mgf_series, series_log

# dense mass arrays larger than this many entries are refused
MAX_ATOMS = 20_000_000


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = convolve(a, b)
    # FFT round-off may leave tiny negative masses
    np.clip(out, 0.0, None, out=out)
    return out / out.sum()


def iid_sum_law(step_law: LatticeDistribution, n: int) -> LatticeDistribution:
    """Exact law of ``xi_1 + ... + xi_n`` by repeated squaring of the mass array."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    final_shape = [(s - 1) * n + 1 for s in step_law.shape]
    if np.prod(final_shape, dtype=float) > MAX_ATOMS:
        raise ResourceLimitError(f"the law of the {n}-fold sum needs {final_shape} grid points")
    result = None
    power = np.array(step_law.mass)
    k = n
    while k:
        if k & 1:
            result = power if result is None else _convolve(result, power)
        k >>= 1
        if k:
            power = _convolve(power, power)
    return LatticeDistribution(result, n * step_law.offset, step_law.step)


def iid_model(step_law: LatticeDistribution, order: int = DEFAULT_ORDER, name: str = "iid") -> QuasiPowerModel:
    """``M_n(s) = E exp(<xi, s>)^n`` exactly: ``u = log E exp(<xi, s>)``, ``v = 0``, ``phi_n = n``."""
    m = step_law.dimension
    u = series_log(mgf_series(step_law, order))
    return QuasiPowerModel(u=u, v=PowerSeries(m, order), phi=float,
                           exact_law=lambda n: iid_sum_law(step_law, n), name=name,
                           metadata={"kappa": "inf", "u": "log of the step moment generating function"})


def bernoulli_step(m: int = 1) -> LatticeDistribution:
    """``m`` independent fair coins on ``{0, 1}``."""
    mass = np.full((2,) * m, 0.5**m)
    return LatticeDistribution(mass, np.zeros(m), np.ones(m))


def correlated_step() -> LatticeDistribution:
    """Law of ``(B, B + B')`` for independent fair coins ``B, B'``."""
    return LatticeDistribution.from_mapping({(0, 0): 0.25, (0, 1): 0.25, (1, 1): 0.25, (1, 2): 0.25})


def binomial_model(m: int = 1) -> QuasiPowerModel:
    return iid_model(bernoulli_step(m), name=f"binomial{m}d")


def correlated_model() -> QuasiPowerModel:
    return iid_model(correlated_step(), name="correlated")


def parse_step_law(text: str) -> LatticeDistribution:
    """Read a step law from lines ``k_1 ... k_m  mass`` (integer indices, unit steps).

    Blank lines and lines starting with ``#`` are ignored.  Masses are normalised.
    """
    table = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        *idx, mass = line.replace(",", " ").split()
        if not idx:
            raise ValueError(f"step-law line needs indices and a mass: {raw!r}")
        key = tuple(int(i) for i in idx)
        table[key] = table.get(key, 0.0) + float(mass)
    if not table:
        raise ValueError("empty step law")
    if len({len(k) for k in table}) != 1:
        raise ValueError("all step-law rows must have the same dimension")
    return LatticeDistribution.from_mapping(table, normalize=True)
