"""Multivariate normal limit law for dimensions up to three.

Distribution functions are computed by conditioning on the first coordinate,

    F(x) = int_{-inf}^{x_1} density_1(y) * F_{rest | Y_1 = y}(x_rest) dy,

with composite Gauss-Legendre quadrature that is refined until two successive
resolutions agree to the requested tolerance.  The integration range is cut at
``mean +- 8.5`` standard deviations, beyond which the normal mass is below
``1e-17``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import DomainError, NumericError, UnsupportedDimensionError
from .lambda_operator import CharEvaluator

TRUNCATION_SDS = 8.5
MAX_CDF_DIMENSION = 3
_GL_ORDER = 10
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
_MAX_REFINEMENTS = 8


@dataclass(frozen=True, eq=False)
class GaussianSpec:
    mean: np.ndarray
    sigma: np.ndarray
    _eig_min: float = field(init=False, repr=False)

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        m = mean.shape[0]
        if mean.ndim != 1 or sigma.shape != (m, m):
            raise ValueError(f"mean of shape {mean.shape} does not match sigma of shape {sigma.shape}")
        if np.max(np.abs(sigma - sigma.T), initial=0.0) > 1e-12:
            raise ValueError("sigma must be symmetric")
        sigma = 0.5 * (sigma + sigma.T)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "_eig_min", float(np.linalg.eigvalsh(sigma)[0]))

    @classmethod
    def standard(cls, m: int) -> "GaussianSpec":
        return cls(np.zeros(m), np.eye(m))

    @property
    def dimension(self) -> int:
        return self.mean.shape[0]

    @property
    def smallest_eigenvalue(self) -> float:
        return self._eig_min

    @property
    def is_regular(self) -> bool:
        return self._eig_min > 1e-12 * max(1.0, float(np.max(np.abs(self.sigma))))

    def charfn(self) -> CharEvaluator:
        return CharEvaluator(self.dimension, lambda t: gaussian_charfn(self, t), name="gaussian")

    def cdf(self, x, tol: float = 1e-10):
        return gaussian_cdf(self, x, tol)


def gaussian_charfn(g: GaussianSpec, t):
    """``exp(i <mean, t> - t' Sigma t / 2)`` over the last axis of ``t``."""
    t = np.asarray(t, dtype=float)
    quad = np.einsum("...i,ij,...j->...", t, g.sigma, t)
    out = np.exp(1j * (t @ g.mean) - 0.5 * quad)
    return out[()] if np.ndim(out) == 0 else out


def derivative_bound_A(g: GaussianSpec, j: int) -> float:
    """Upper bound ``1/sqrt(2 pi Sigma_jj)`` for ``sup_y dF(y)/dy_j``.

    The partial derivative is the marginal density of ``Y_j`` times a
    conditional probability, so the marginal density peak bounds it; in
    dimension one the bound is attained.
    """
    var = float(g.sigma[j, j])
    if var <= 0:
        raise DomainError(f"Sigma[{j},{j}] must be positive")
    return 1.0 / math.sqrt(2.0 * math.pi * var)


def marginal(g: GaussianSpec, J) -> GaussianSpec:
    J = sorted(J)
    if not J:
        raise ValueError("J must be nonempty")
    return GaussianSpec(g.mean[J], g.sigma[np.ix_(J, J)])


def _check_cdf_args(g: GaussianSpec, tol: float) -> None:
    if g.dimension > MAX_CDF_DIMENSION:
        raise UnsupportedDimensionError(f"normal CDF is implemented for m <= {MAX_CDF_DIMENSION}")
    if not g.is_regular:
        raise DomainError("normal CDF requires a positive definite covariance matrix")
    if tol < 1e-12:
        raise ValueError("tol below 1e-12 is not attainable")


def _conditional(mean: np.ndarray, sigma: np.ndarray):
    """Slope ``b`` and covariance of ``Y_rest`` given ``Y_1`` (mean shift is ``b (y - mean_1)``)."""
    b = sigma[1:, 0] / sigma[0, 0]
    cond = sigma[1:, 1:] - np.outer(b, sigma[0, 1:])
    return b, 0.5 * (cond + cond.T)


def _max_panel_width(sigma: np.ndarray) -> float:
    sd = math.sqrt(sigma[0, 0])
    if sigma.shape[0] == 1:
        return 0.5 * sd
    b, cond = _conditional(np.zeros(sigma.shape[0]), sigma)
    cond_sd = math.sqrt(max(float(np.min(np.diag(cond))), 1e-300))
    steep = float(np.max(np.abs(b)))
    return 0.5 * min(sd, cond_sd / steep if steep > 0 else sd)


# --- pointwise ---------------------------------------------------------------

def _cdf_points(mean, sigma, x, tol):
    """CDF at points ``x`` of shape (N, m)."""
    m = mean.shape[0]
    if m == 1:
        return ndtr((x[:, 0] - mean[0]) / math.sqrt(sigma[0, 0]))
    sd = math.sqrt(sigma[0, 0])
    lo = mean[0] - TRUNCATION_SDS * sd
    hi = np.minimum(x[:, 0], mean[0] + TRUNCATION_SDS * sd)
    active = hi > lo
    out = np.zeros(x.shape[0])
    if not np.any(active):
        return out
    xa, ha = x[active], hi[active]
    b, cond = _conditional(mean, sigma)
    panels = max(2, math.ceil((2 * TRUNCATION_SDS * sd) / _max_panel_width(sigma) / 4))
    prev = None
    for _ in range(_MAX_REFINEMENTS):
        # panels of equal width over [lo, hi_i] for every point i
        edges = lo + (ha[:, None] - lo) * (np.arange(panels + 1) / panels)
        half = 0.5 * (edges[:, 1:] - edges[:, :-1])
        nodes = 0.5 * (edges[:, 1:] + edges[:, :-1])[..., None] + half[..., None] * _GL_X
        weights = half[..., None] * _GL_W
        y = nodes.reshape(len(xa), -1)
        w = weights.reshape(len(xa), -1)
        dens = np.exp(-0.5 * ((y - mean[0]) / sd) ** 2) / (math.sqrt(2 * math.pi) * sd)
        shifted = xa[:, None, 1:] - (mean[1:] + (y - mean[0])[..., None] * b)
        inner = _cdf_points(np.zeros(m - 1), cond, shifted.reshape(-1, m - 1), tol)
        val = np.sum(w * dens * inner.reshape(y.shape), axis=1)
        if prev is not None and np.max(np.abs(val - prev)) <= tol:
            out[active] = val
            return out
        prev, panels = val, 2 * panels
    raise NumericError("normal CDF quadrature did not converge")


def gaussian_cdf(g: GaussianSpec, x, tol: float = 1e-10):
    """``P(Y <= x)`` for ``m <= 3``; ``x`` of shape ``(m,)`` or ``(N, m)``."""
    _check_cdf_args(g, tol)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[-1] != g.dimension:
        raise ValueError("x has the wrong dimension")
    out = np.clip(_cdf_points(g.mean, g.sigma, pts, tol), 0.0, 1.0)
    return float(out[0]) if single else out


# --- tensor grids ------------------------------------------------------------

def _cdf_grid(mean, sigma, axes, tol):
    m = mean.shape[0]
    a0 = np.asarray(axes[0], dtype=float)
    sd = math.sqrt(sigma[0, 0])
    if m == 1:
        return ndtr((a0 - mean[0]) / sd)
    lo = mean[0] - TRUNCATION_SDS * sd
    hi = mean[0] + TRUNCATION_SDS * sd
    inner_shape = tuple(len(a) for a in axes[1:])
    b, cond = _conditional(mean, sigma)
    # breakpoints: truncation limits plus every grid value strictly inside them
    inside = np.unique(a0[(a0 > lo) & (a0 < hi)])
    breaks = np.concatenate([[lo], inside, [hi]])
    width = _max_panel_width(sigma)
    prev = None
    for _ in range(_MAX_REFINEMENTS):
        pieces = np.maximum(1, np.ceil(np.diff(breaks) / width).astype(int))
        seg = np.repeat(np.arange(len(breaks) - 1), pieces)
        frac = np.concatenate([np.arange(p) / p for p in pieces])
        left = breaks[seg] + frac * np.diff(breaks)[seg]
        right = left + np.diff(breaks)[seg] / pieces[seg]
        half = 0.5 * (right - left)
        y = (0.5 * (left + right))[:, None] + half[:, None] * _GL_X
        w = half[:, None] * _GL_W
        dens = np.exp(-0.5 * ((y - mean[0]) / sd) ** 2) / (math.sqrt(2 * math.pi) * sd)
        yv, wv = y.ravel(), (w * dens).ravel()
        if m == 2:
            s = math.sqrt(cond[0, 0])
            inner = ndtr((np.asarray(axes[1])[None, :] - mean[1] - b[0] * (yv - mean[0])[:, None]) / s)
        else:
            inner = np.stack([
                _cdf_grid(np.zeros(m - 1), cond,
                          [np.asarray(axes[k + 1]) - mean[k + 1] - b[k] * (yk - mean[0]) for k in range(m - 1)],
                          tol)
                for yk in yv])
        contrib = (wv.reshape(-1, *([1] * (m - 1))) * inner)
        per_piece = contrib.reshape(len(seg), _GL_ORDER, *inner_shape).sum(axis=1)
        per_segment = np.zeros((len(breaks) - 1,) + inner_shape)
        np.add.at(per_segment, seg, per_piece)
        cum = np.concatenate([np.zeros((1,) + inner_shape), np.cumsum(per_segment, axis=0)])
        idx = np.searchsorted(breaks, np.clip(a0, lo, hi))
        val = cum[idx]
        if prev is not None and np.max(np.abs(val - prev)) <= tol:
            return val
        prev, width = val, 0.5 * width
    raise NumericError("normal CDF grid quadrature did not converge")


def gaussian_cdf_grid(g: GaussianSpec, axes, tol: float = 1e-10) -> np.ndarray:
    """``P(Y <= (a_1, ..., a_m))`` for every point of the tensor grid ``axes``.

    Axis values may include ``+-inf``.  Returns an array of shape
    ``(len(axes[0]), ..., len(axes[m-1]))``.
    """
    _check_cdf_args(g, tol)
    if len(axes) != g.dimension:
        raise ValueError("need one axis per dimension")
    return np.clip(_cdf_grid(g.mean, g.sigma, list(axes), tol), 0.0, 1.0)
