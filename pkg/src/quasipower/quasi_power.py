"""Quasi-power models, moment polynomials and convergence-rate experiments.

A model describes a sequence of m-dimensional random vectors ``Omega_n`` whose
moment generating function behaves like ``exp(u(s) phi_n + v(s))``.  ``u`` and
``v`` are carried as truncated multivariate Taylor series; for models with an
exact law the standardized variable ``(Omega_n - grad u(0) phi_n) / sqrt(phi_n)``
is compared with the normal law with covariance ``H_u(0)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .berry_esseen import sup_cdf_distance
from .errors import DegenerateCovarianceError, UnsupportedDimensionError
from .gaussian import GaussianSpec
from .lambda_operator import CharEvaluator
from .lattice import LatticeDistribution

DEFAULT_ORDER = 4

Exponent = tuple[int, ...]


def _is_zero(c) -> bool:
    return not np.any(np.asarray(getattr(c, "coef", c)) != 0)


def exponents(m: int, order: int):
    """All exponent tuples of total degree at most ``order``, by degree then lexicographically."""
    for deg in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(m), deg):
            e = [0] * m
            for i in combo:
                e[i] += 1
            yield tuple(e)


class PowerSeries:
    """Truncated power series in ``m`` variables, stored sparsely.

    Coefficients may be floats or any ring element supporting ``+`` and ``*``
    (``numpy.polynomial.Polynomial`` is used for moment polynomials).
    """

    __slots__ = ("dimension", "order", "_coeffs")

    def __init__(self, dimension: int, order: int, coeffs: Mapping[Exponent, Any] | None = None):
        self.dimension = int(dimension)
        self.order = int(order)
        clean = {}
        for k, c in (coeffs or {}).items():
            k = tuple(int(i) for i in k)
            if len(k) != self.dimension or min(k, default=0) < 0:
                raise ValueError(f"bad exponent {k} for dimension {self.dimension}")
            if sum(k) <= self.order:
                clean[k] = c
        self._coeffs = clean

    @classmethod
    def constant(cls, dimension: int, order: int, value=1.0) -> "PowerSeries":
        return cls(dimension, order, {(0,) * dimension: value})

    @classmethod
    def variable(cls, dimension: int, order: int, j: int, value=1.0) -> "PowerSeries":
        e = [0] * dimension
        e[j] = 1
        return cls(dimension, order, {tuple(e): value})

    @property
    def coeffs(self) -> dict[Exponent, Any]:
        return dict(self._coeffs)

    def __getitem__(self, k) -> Any:
        return self._coeffs.get(tuple(k), 0.0)

    def constant_term(self):
        return self[(0,) * self.dimension]

    def _check(self, other: "PowerSeries") -> None:
        if (self.dimension, self.order) != (other.dimension, other.order):
            raise ValueError("series must share dimension and truncation order")

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.constant(self.dimension, self.order, other)
        self._check(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out[k] + c if k in out else c
        return PowerSeries(self.dimension, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PowerSeries) else -other)

    def scale(self, factor) -> "PowerSeries":
        return PowerSeries(self.dimension, self.order, {k: c * factor for k, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        keys = set(self._coeffs) | set(other._coeffs)
        return (self.dimension, self.order) == (other.dimension, other.order) and all(
            _is_zero(self[k] - other[k]) for k in keys)

    def without_constant(self) -> "PowerSeries":
        zero = (0,) * self.dimension
        return PowerSeries(self.dimension, self.order, {k: c for k, c in self._coeffs.items() if k != zero})

    def gradient(self) -> np.ndarray:
        m = self.dimension
        return np.array([float(self[tuple(int(i == j) for i in range(m))]) for j in range(m)])

    def hessian(self) -> np.ndarray:
        m = self.dimension
        out = np.empty((m, m))
        for i in range(m):
            for j in range(m):
                e = [0] * m
                e[i] += 1
                e[j] += 1
                out[i, j] = float(self[tuple(e)]) * (2.0 if i == j else 1.0)
        return out

    def __repr__(self) -> str:
        terms = ", ".join(f"{k}: {c!r}" for k, c in sorted(self._coeffs.items()))
        return f"PowerSeries(dim={self.dimension}, order={self.order}, {{{terms}}})"


def series_product(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at total degree ``order``."""
    a._check(b)
    out: dict[Exponent, Any] = {}
    for ka, ca in a._coeffs.items():
        da = sum(ka)
        for kb, cb in b._coeffs.items():
            if da + sum(kb) > a.order:
                continue
            k = tuple(i + j for i, j in zip(ka, kb))
            prod = ca * cb
            out[k] = out[k] + prod if k in out else prod
    return PowerSeries(a.dimension, a.order, out)


def series_exp(a: PowerSeries) -> PowerSeries:
    """``exp(a)`` as ``sum_{k <= order} a^k / k!``; ``a`` must have zero constant term."""
    if not _is_zero(a.constant_term()):
        raise ValueError("series_exp needs a series with zero constant term")
    one = PowerSeries.constant(a.dimension, a.order, 1.0)
    result, term = one, one
    for k in range(1, a.order + 1):
        term = series_product(term, a).scale(1.0 / k)
        result = result + term
    return result


def series_log(a: PowerSeries) -> PowerSeries:
    """``log(a)`` for a series with constant term 1, via ``log(1 + b) = sum (-1)^(k+1) b^k / k``."""
    c0 = a.constant_term()
    if not math.isclose(float(c0), 1.0, rel_tol=0, abs_tol=1e-14):
        raise ValueError("series_log needs constant term 1")
    b = a.without_constant()
    result = PowerSeries(a.dimension, a.order)
    power = PowerSeries.constant(a.dimension, a.order, 1.0)
    for k in range(1, a.order + 1):
        power = series_product(power, b)
        result = result + power.scale((-1.0) ** (k + 1) / k)
    return result


def mgf_series(law: LatticeDistribution, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Taylor series of ``E exp(<W, s>)``: coefficient ``E W^k / k!`` at ``s^k``."""
    m = law.dimension
    coeffs = {}
    for k in exponents(m, order):
        coeffs[k] = law.moment(k) / math.prod(math.factorial(i) for i in k)
    return PowerSeries(m, order, coeffs)


def _infinite(n):
    return math.inf


@dataclass
class QuasiPowerModel:
    """``Omega_n`` with moment generating function ``~ exp(u(s) phi_n + v(s))``.

    ``u`` and ``v`` are shifted at construction so that ``u(0) = v(0) = 0``.
    ``tau`` and ``kappa`` are descriptive metadata only.
    """
    u: PowerSeries
    v: PowerSeries
    phi: Callable[[int], float] = float
    kappa: Callable[[int], float] = _infinite
    tau: float = 1.0
    exact_law: Callable[[int], LatticeDistribution] | None = None
    name: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.u._check(self.v)
        self.u = self.u.without_constant()
        self.v = self.v.without_constant()

    @property
    def dimension(self) -> int:
        return self.u.dimension

    @property
    def limit_covariance(self) -> np.ndarray:
        return self.u.hessian()

    def standardized(self, n: int) -> tuple[LatticeDistribution, GaussianSpec]:
        """Exact law of ``(Omega_n - grad u(0) phi_n) / sqrt(phi_n)`` and its normal limit."""
        if self.exact_law is None:
            raise ValueError("model has no exact law")
        sigma = self.limit_covariance
        y = GaussianSpec(np.zeros(self.dimension), sigma)
        if not y.is_regular:
            raise DegenerateCovarianceError(
                "H_u(0) is singular: no uniform rate holds (see quasipower.models.rademacher_demo)")
        phi_n = self.phi(n)
        x = standardize(self.exact_law(n), self.u.gradient() * phi_n, math.sqrt(phi_n))
        return x, y


def moment_polynomial(model: QuasiPowerModel, k) -> Polynomial:
    """``[s^k] exp(u(s) X + v(s))`` as a polynomial in ``X``."""
    k = tuple(k)
    if len(k) != model.dimension or min(k) < 0:
        raise ValueError("bad exponent")
    if sum(k) > model.u.order:
        raise ValueError(f"|k| = {sum(k)} exceeds the truncation order {model.u.order}")
    keys = set(model.u.coeffs) | set(model.v.coeffs)
    lifted = PowerSeries(model.dimension, model.u.order,
                         {e: Polynomial([float(model.v[e]), float(model.u[e])]) for e in keys})
    coeff = series_exp(lifted)[k]
    return coeff if isinstance(coeff, Polynomial) else Polynomial([float(coeff)])


def mean_cov(model: QuasiPowerModel, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(grad u(0) phi_n + grad v(0), H_u(0) phi_n + H_v(0))``."""
    if model.u.order < 2:
        raise ValueError("mean and covariance need truncation order >= 2")
    phi_n = model.phi(n)
    return (model.u.gradient() * phi_n + model.v.gradient(),
            model.u.hessian() * phi_n + model.v.hessian())


def standardize(dist: LatticeDistribution, center, scale: float) -> LatticeDistribution:
    """Relabel every atom ``w`` as ``(w - center) / scale``."""
    return dist.affine(center, scale)


def lattice_charfn(dist: LatticeDistribution) -> CharEvaluator:
    """Exact characteristic function ``sum_w p(w) exp(i <t, w>)``."""
    return dist.charfn()


@dataclass
class RateExperiment:
    rows: list[tuple[int, float, float]]
    slope: float

    @property
    def distances(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows])

    def doubling_ratios(self) -> np.ndarray:
        d = self.distances
        return d[1:] / d[:-1]


def fit_log_slope(phi: Sequence[float], dist: Sequence[float]) -> float:
    """Least-squares slope of ``log dist`` against ``log phi``."""
    return float(np.polyfit(np.log(phi), np.log(dist), 1)[0])


def rate_experiment(model: QuasiPowerModel, n_list: Sequence[int], tol: float = 1e-10) -> RateExperiment:
    """Exact sup distance to the normal limit for each ``n`` and the fitted log-log slope."""
    if model.dimension > 3:
        raise UnsupportedDimensionError("rate experiments support m <= 3")
    rows = []
    for n in n_list:
        x, y = model.standardized(n)
        rows.append((int(n), float(model.phi(n)), sup_cdf_distance(x, y, tol)))
    slope = fit_log_slope([r[1] for r in rows], [r[2] for r in rows]) if len(rows) > 1 else math.nan
    return RateExperiment(rows, slope)
