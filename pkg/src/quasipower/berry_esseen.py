"""Both sides of the m-dimensional Berry-Esseen inequality.

For a lattice law ``X`` and a normal law ``Y`` the bound reads

    sup |F_X - F_Y| <= 2 / (2 pi)^m * int_{[-T,T]^m} |Lambda(phi_X) - Lambda(phi_Y)| / |prod t| dt
                     + 2 * sum_{J proper, nonempty} B_{m-|J|} * sup |F_{X_J} - F_{Y_J}|
                     + 2 * sum_j A_j * (C1 + C2) / T

where ``B`` are Fubini numbers, ``A_j`` bounds the partial derivatives of
``F_Y`` and ``C1``, ``C2`` come from the smoothing kernel.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, UnsupportedDimensionError
from .gaussian import GaussianSpec, derivative_bound_A, gaussian_cdf_grid, marginal
from .lambda_operator import CharEvaluator, lambda_apply, restrict
from .lattice import LatticeDistribution
from .partition_lattice import fubini_number
from .smoothing_kernel import C2, constant_C1

log = logging.getLogger(__name__)

MAX_DIMENSION = 3
HOLDS_SLACK = 1e-6


@dataclass(frozen=True)
class QuadConfig:
    """Tensor Gauss-Legendre rule on ``[-T, T]`` per axis.

    The interval is split into ``panels`` equal panels with ``nodes // panels``
    nodes each.  Every panel must carry an even number of nodes so that no node
    falls on a coordinate hyperplane.  ``nodes=None`` picks 64 for m <= 2 and
    32 for m = 3.
    """
    nodes: int | None = None
    panels: int = 2

    def nodes_for(self, m: int) -> int:
        return self.nodes if self.nodes is not None else (64 if m <= 2 else 32)

    def rule(self, m: int, T: float) -> tuple[np.ndarray, np.ndarray]:
        n = self.nodes_for(m)
        if self.panels < 1 or n % self.panels:
            raise ConfigurationError(f"{n} nodes cannot be split evenly over {self.panels} panels")
        per = n // self.panels
        if per % 2:
            raise ConfigurationError("each panel needs an even node count so nodes avoid t_l = 0")
        x, w = np.polynomial.legendre.leggauss(per)
        edges = np.linspace(-T, T, self.panels + 1)
        half = 0.5 * np.diff(edges)
        nodes = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half[:, None] * x
        return nodes.ravel(), (half[:, None] * w).ravel()


@dataclass
class BoundReport:
    T: float
    integral_term: float
    marginal_terms: dict[tuple[int, ...], float]
    kernel_term: float
    rhs_total: float
    lhs_sup_distance: float
    holds: bool
    fubini_weights: dict[tuple[int, ...], int] = field(default_factory=dict)

    @property
    def marginal_term_total(self) -> float:
        return 2.0 * math.fsum(self.fubini_weights[J] * v for J, v in self.marginal_terms.items())

    def as_dict(self) -> dict:
        return {
            "T": self.T,
            "integral_term": self.integral_term,
            "marginal_terms": {",".join(map(str, J)): v for J, v in self.marginal_terms.items()},
            "marginal_term_total": self.marginal_term_total,
            "kernel_term": self.kernel_term,
            "rhs_total": self.rhs_total,
            "lhs_sup_distance": self.lhs_sup_distance,
            "holds": self.holds,
        }


def _check_pair(x: LatticeDistribution, y: GaussianSpec) -> int:
    m = x.dimension
    if y.dimension != m:
        raise ValueError(f"dimension mismatch: lattice law has {m}, normal law has {y.dimension}")
    if m > MAX_DIMENSION:
        raise UnsupportedDimensionError(f"only m <= {MAX_DIMENSION} is supported")
    return m


def sup_cdf_distance(x: LatticeDistribution, y: GaussianSpec, tol: float = 1e-10) -> float:
    """``sup_z |F_X(z) - F_Y(z)|`` up to ``tol``.

    ``F_X`` is constant on each grid cell and ``F_Y`` is continuous and
    increasing in every coordinate, so on a cell the extremes are the values of
    ``F_Y`` at its lower and upper corners.  It therefore suffices to compare
    ``F_Y`` at every grid point (grid lines extended by ``+inf``) with both the
    closed value ``P(X <= g)`` and the open limit ``P(X < g)``.
    """
    m = _check_pair(x, y)
    closed = x.cdf_grid()
    closed_ext = np.pad(closed, [(0, 1)] * m, mode="edge")
    open_ext = np.pad(closed, [(1, 0)] * m, mode="constant")
    axes = [np.append(x.coords(ax), np.inf) for ax in range(m)]
    fy = gaussian_cdf_grid(y, axes, tol)
    return float(max(np.max(np.abs(closed_ext - fy)), np.max(np.abs(open_ext - fy))))


def _tensor_rule(m: int, T: float, quad: QuadConfig):
    x, w = quad.rule(m, T)
    grids = np.meshgrid(*([x] * m), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wgrid = np.meshgrid(*([w] * m), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrid], axis=-1), axis=-1)
    return pts, weights


def lambda_difference_integral(phi_x: CharEvaluator, phi_y: CharEvaluator, T: float,
                               quad: QuadConfig | None = None) -> float:
    """``int_{[-T,T]^m} |Lambda(phi_x)(t) - Lambda(phi_y)(t)| / |prod t| dt`` (no prefactor)."""
    if phi_x.dimension != phi_y.dimension:
        raise ValueError("evaluators must share a dimension")
    if T <= 0:
        raise ValueError("T must be positive")
    m = phi_x.dimension
    if m > MAX_DIMENSION:
        raise UnsupportedDimensionError(f"only m <= {MAX_DIMENSION} is supported")
    pts, weights = _tensor_rule(m, T, quad or QuadConfig())
    diff = lambda_apply(phi_x, pts) - lambda_apply(phi_y, pts)
    vals = weights * np.abs(diff) / np.abs(np.prod(pts, axis=-1))
    return math.fsum(vals)


def integral_term(phi_x: CharEvaluator, phi_y: CharEvaluator, T: float, quad: QuadConfig | None = None) -> float:
    """First term of the bound, including the ``2 / (2 pi)^m`` prefactor."""
    m = phi_x.dimension
    return 2.0 / (2.0 * math.pi) ** m * lambda_difference_integral(phi_x, phi_y, T, quad)


def _proper_subsets(m: int):
    for size in range(1, m):
        yield from itertools.combinations(range(m), size)


def kernel_term(y: GaussianSpec, T: float) -> float:
    m = y.dimension
    a_sum = math.fsum(derivative_bound_A(y, j) for j in range(m))
    return 2.0 * a_sum * (constant_C1(m) + C2) / T


def theorem2_rhs(x: LatticeDistribution, y: GaussianSpec, T: float, quad: QuadConfig | None = None,
                 tol: float = 1e-10) -> BoundReport:
    """Evaluate every term of the inequality, and its left side, for ``(x, y)``."""
    m = _check_pair(x, y)
    if T <= 0:
        raise ValueError("T must be positive")
    integral = integral_term(x.charfn(), y.charfn(), T, quad)
    marginal_sups, weights = {}, {}
    for J in _proper_subsets(m):
        marginal_sups[J] = sup_cdf_distance(x.marginal(J), marginal(y, J), tol)
        weights[J] = fubini_number(m - len(J))
    kern = kernel_term(y, T)
    report = BoundReport(T=float(T), integral_term=integral, marginal_terms=marginal_sups,
                         kernel_term=kern, rhs_total=0.0, lhs_sup_distance=sup_cdf_distance(x, y, tol),
                         holds=False, fubini_weights=weights)
    report.rhs_total = integral + report.marginal_term_total + kern
    report.holds = report.lhs_sup_distance <= report.rhs_total * (1.0 + HOLDS_SLACK)
    return report


def verify_bound(x: LatticeDistribution, y: GaussianSpec, T: float, quad: QuadConfig | None = None,
                 tol: float = 1e-10) -> BoundReport:
    report = theorem2_rhs(x, y, T, quad, tol)
    if not report.holds:
        # the inequality is a theorem: a violation means a numerical or coding fault
        log.error("bound violated: lhs=%r rhs=%r", report.lhs_sup_distance, report.rhs_total)
    return report


def corollary_bound(x: LatticeDistribution, y: GaussianSpec, T: float, quad: QuadConfig | None = None) -> float:
    """Bracketed quantity of the recursive corollary, without its unspecified constant.

    Sums the unnormalised Lambda-difference integrals of every nonempty
    marginal ``K`` and adds ``sum_j A_j / T``.  Only meaningful for scaling
    studies.
    """
    m = _check_pair(x, y)
    phi_x, phi_y = x.charfn(), y.charfn()
    total = []
    for size in range(1, m + 1):
        for K in itertools.combinations(range(m), size):
            hx = phi_x if size == m else restrict(phi_x, K)
            hy = phi_y if size == m else restrict(phi_y, K)
            total.append(lambda_difference_integral(hx, hy, T, quad))
    total.append(math.fsum(derivative_bound_A(y, j) for j in range(m)) / T)
    return math.fsum(total)
