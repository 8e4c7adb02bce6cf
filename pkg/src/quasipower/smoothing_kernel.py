"""Smoothing kernel with compactly supported characteristic function.

``P`` has density ``f_P(z) = 3/(8 pi) * (sin(z/4) / (z/4))**4`` and characteristic
function

    phi_P(t) = 1 - 6 t^2 + 6 |t|^3     for |t| <= 1/2
             = 2 (1 - |t|)^3           for 1/2 <= |t| <= 1
             = 0                        otherwise.

The product kernel ``Q = (P_1, ..., P_m) / T`` has characteristic function
``prod phi_P(t_j / T)``, which vanishes outside ``[-T, T]^m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError

PEAK = 3.0 / (8.0 * math.pi)
C2 = 12.0 / math.pi
# zeros of sin(z/4) are spaced 4 pi apart; integrate panel by panel between them
_PANEL = 4.0 * math.pi
_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)


def density_f_P(z):
    z = np.asarray(z, dtype=float)
    out = PEAK * np.sinc(z / (4.0 * math.pi)) ** 4
    return out[()] if out.ndim == 0 else out


def charfn_phi_P(t):
    a = np.abs(np.asarray(t, dtype=float))
    out = np.where(a <= 0.5, 1.0 - 6.0 * a**2 + 6.0 * a**3, np.where(a <= 1.0, 2.0 * (1.0 - a) ** 3, 0.0))
    return out[()] if out.ndim == 0 else out


def constant_C1(m: int) -> float:
    """Closed-form upper bound for the kernel quantile in dimension ``m``."""
    return (32.0 / (math.pi * (1.0 - 0.75 ** (1.0 / m)))) ** (1.0 / 3.0)


def cdf_P(z: float) -> float:
    """``P(P <= z)``, using the symmetry ``F(z) = 1/2 + int_0^z f_P``."""
    return 0.5 + math.copysign(_panel_integral(np.ones_like, 0.0, abs(z)), z)


def solve_lambda(m: int, tol: float = 1e-12) -> float:
    """Positive ``lam`` with ``P(P <= lam) = (3/4)^(1/m)``, by bisection."""
    if not 1 <= m <= 8:
        raise ValueError("m must lie in [1, 8]")
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    target = 0.75 ** (1.0 / m)
    lo, hi = 0.0, 1.0
    while cdf_P(hi) < target:
        lo, hi = hi, 2.0 * hi
        if hi > 1e6:
            raise NumericError("could not bracket the kernel quantile")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        resid = cdf_P(mid) - target
        if abs(resid) <= tol:
            return mid
        if resid < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * hi:
            break
    mid = 0.5 * (lo + hi)
    if abs(cdf_P(mid) - target) > tol:
        raise NumericError("bisection for the kernel quantile did not reach tolerance")
    return mid


@dataclass(frozen=True)
class KernelConstants:
    m: int
    T: float
    lam: float
    C1: float
    C2: float


def kernel_constants(m: int, T: float = 1.0, tol: float = 1e-12) -> KernelConstants:
    if T <= 0:
        raise ValueError("T must be positive")
    return KernelConstants(m=m, T=float(T), lam=solve_lambda(m, tol), C1=constant_C1(m), C2=C2)


def kernel_Q_charfn(t, T: float):
    """``prod_j phi_P(t_j / T)`` over the last axis of ``t``."""
    if T <= 0:
        raise ValueError("T must be positive")
    t = np.asarray(t, dtype=float)
    out = np.prod(charfn_phi_P(t / T), axis=-1)
    return out[()] if np.ndim(out) == 0 else out


def kernel_Q_density(z, T: float):
    z = np.asarray(z, dtype=float)
    out = np.prod(T * density_f_P(T * z), axis=-1)
    return out[()] if np.ndim(out) == 0 else out


# --- numeric checks -------------------------------------------------------

def _panel_integral(g, a: float, b: float) -> float:
    """``int_a^b g(w) f_P(w) dw`` with Gauss-Legendre panels cut at the zeros of f_P."""
    k_lo, k_hi = math.floor(a / _PANEL), math.ceil(b / _PANEL)
    edges = np.clip(np.arange(k_lo, k_hi + 1) * _PANEL, a, b)
    edges = np.unique(np.concatenate([[a], edges, [b]]))
    left, right = edges[:-1, None], edges[1:, None]
    half = 0.5 * (right - left)
    w = 0.5 * (left + right) + half * _GL_X
    vals = g(w) * density_f_P(w) * half * _GL_W
    return math.fsum(vals.ravel())


def tail_mass_estimate(Z: float) -> float:
    """Asymptotic mass of ``f_P`` beyond ``Z`` (uses the mean 3/8 of sin^4)."""
    return 12.0 / (math.pi * Z**3)


def fourier_transform_f_P(t: float, Z: float = 1e4) -> float:
    """Truncated ``int_{|z|<=Z} cos(tz) f_P(z) dz``; the neglected part is below ``64/(pi Z^3)``."""
    return 2.0 * _panel_integral(lambda w: np.cos(t * w), 0.0, Z)


def truncated_moment(power: int, Z: float) -> float:
    """``int_{|z|<=Z} |z|^power f_P(z) dz``."""
    return 2.0 * _panel_integral(lambda w: np.abs(w) ** power, 0.0, Z)


def second_moment_from_charfn(h: float = 1e-4) -> float:
    """``-phi_P''(0)`` from central second differences at steps ``h`` and ``h/2``.

    The ``|t|^3`` term biases a single difference by ``-12 h``; one Richardson
    step removes it.
    """
    def diff(k):
        return (charfn_phi_P(k) - 2.0 * charfn_phi_P(0.0) + charfn_phi_P(-k)) / k**2
    return -(2.0 * diff(h / 2) - diff(h))


def shifted_orthant_mass(m: int, T: float, theta: int, lam: float | None = None, Z: float = 1e4) -> float:
    """``int_{theta z <= 0} f_Q(z + theta lam / T * 1) dz`` via the product structure.

    Each factor is integrated directly over a half line (truncated at ``Z``
    plus the asymptotic tail), independently of :func:`cdf_P`.
    """
    if theta not in (1, -1):
        raise ValueError("theta must be +1 or -1")
    lam = solve_lambda(m) if lam is None else lam
    # substituting w = T z + theta lam maps {theta z <= 0} to {theta (w - theta lam) <= 0}
    if theta == 1:
        one = _panel_integral(np.ones_like, -Z, lam)
    else:
        one = _panel_integral(np.ones_like, -lam, Z)
    one += tail_mass_estimate(Z)
    return one**m


def shifted_abs_moment(T: float, theta: int, lam: float, Z: float = 1e5) -> float:
    """``int |z_j| f_Q(z + theta lam / T * 1) dz = E|P - theta lam| / T`` (truncated)."""
    if theta not in (1, -1):
        raise ValueError("theta must be +1 or -1")
    return _panel_integral(lambda w: np.abs(w - theta * lam), -Z, Z) / T
