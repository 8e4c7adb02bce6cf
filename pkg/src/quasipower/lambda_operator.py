"""Partition-lattice operator on characteristic functions.

For ``h`` defined on R^m with ``h(0) = 1`` the operator

    Lambda(h)(t) = sum over partitions alpha of {0..m-1} of
                   mu(alpha, top) * prod_{J in alpha} h(psi_J(t))

vanishes whenever some coordinate of ``t`` is zero, so ``Lambda(h)(t) / prod t``
stays bounded near the origin.  In dimension two it reduces to
``h(t1, t2) - h(t1, 0) h(0, t2)``.

Evaluators are vectorised: they take an array of shape ``(..., m)`` and return a
complex array of shape ``(...)``.
"""
from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .errors import DomainError
from .partition_lattice import enumerate_partitions, moebius_coefficient

QUOTIENT_THRESHOLD = 1e-6


def _probe_points(m: int, count: int = 24, scale: float = 3.0) -> np.ndarray:
    # Kronecker sequence: deterministic, well spread, never exactly zero
    k = np.arange(1, count + 1)[:, None]
    golden = np.array([np.sqrt(p) for p in (2, 3, 5, 7, 11, 13, 17, 19)][:m])
    return scale * (2.0 * np.mod(k * golden, 1.0) - 1.0)


class CharEvaluator:
    """A characteristic function of an ``m``-dimensional law.

    Parameters
    ----------
    dimension : int
    func : callable
        Vectorised map from real arrays of shape ``(..., m)`` to complex arrays.
    validate : bool
        Check ``h(0) = 1``, Hermitian symmetry and ``|h| <= 1`` on a fixed probe
        set.  Disable for functions that are not characteristic functions.
    """

    def __init__(self, dimension: int, func: Callable[[np.ndarray], np.ndarray], validate: bool = True,
                 name: str = ""):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = int(dimension)
        self._func = func
        self.name = name
        if validate:
            self._validate()

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if t.shape[-1:] != (self.dimension,):
            raise ValueError(f"expected trailing dimension {self.dimension}, got shape {t.shape}")
        return np.asarray(self._func(t), dtype=complex)

    def _validate(self) -> None:
        m = self.dimension
        at_zero = complex(self(np.zeros(m)))
        if abs(at_zero - 1.0) > 1e-12:
            raise DomainError(f"characteristic function must equal 1 at the origin, got {at_zero}")
        pts = _probe_points(m)
        plus, minus = self(pts), self(-pts)
        if np.max(np.abs(minus - np.conj(plus))) > 1e-9:
            raise DomainError("characteristic function is not Hermitian symmetric")
        if np.max(np.abs(plus)) > 1.0 + 1e-9:
            raise DomainError("characteristic function exceeds 1 in modulus")

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<CharEvaluator{label} dim={self.dimension}>"


def _check_subset(J: Iterable[int], K: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    J, K = tuple(sorted(J)), tuple(sorted(K))
    if not set(J) <= set(K):
        raise ValueError(f"{J} is not a subset of {K}")
    return J, K


def project_psi(J, K, s) -> np.ndarray:
    """Zero the coordinates of ``s`` (indexed by ``K``) that are not in ``J``."""
    J, K = _check_subset(J, K)
    s = np.asarray(s, dtype=float)
    if s.shape[-1] != len(K):
        raise ValueError("s must have one coordinate per element of K")
    keep = np.array([k in J for k in K], dtype=bool)
    return np.where(keep, s, 0.0)


def inject_chi(J, K, s_J) -> np.ndarray:
    """Place ``s_J`` (indexed by ``J``) at its positions in ``K``, zeros elsewhere."""
    J, K = _check_subset(J, K)
    s_J = np.asarray(s_J, dtype=float)
    if s_J.shape[-1] != len(J):
        raise ValueError("s_J must have one coordinate per element of J")
    out = np.zeros(s_J.shape[:-1] + (len(K),))
    pos = [K.index(j) for j in J]
    out[..., pos] = s_J
    return out


def _mask_to_bool(mask: int, m: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(m)], dtype=bool)


class _Neumaier:
    """Compensated accumulator for arrays of complex terms."""

    def __init__(self, shape):
        self.re, self.im = np.zeros(shape), np.zeros(shape)
        self.cre, self.cim = np.zeros(shape), np.zeros(shape)

    @staticmethod
    def _step(total, comp, x):
        new = total + x
        big = np.abs(total) >= np.abs(x)
        comp += np.where(big, (total - new) + x, (x - new) + total)
        return new

    def add(self, z: np.ndarray) -> None:
        self.re = self._step(self.re, self.cre, z.real)
        self.im = self._step(self.im, self.cim, z.imag)

    def result(self) -> np.ndarray:
        return (self.re + self.cre) + 1j * (self.im + self.cim)


def lambda_apply(h: CharEvaluator, t, memoize: bool = True) -> np.ndarray:
    """Evaluate ``Lambda(h)`` at ``t`` (shape ``(m,)`` or ``(..., m)``).

    With ``memoize`` the evaluator is called once per nonempty coordinate subset;
    without it, once per block of every partition.  Both give identical values.
    """
    m = h.dimension
    t = np.asarray(t, dtype=float)
    if t.shape[-1:] != (m,):
        raise ValueError(f"t must have trailing dimension {m}")
    table: dict[int, np.ndarray] = {}

    def value(mask: int) -> np.ndarray:
        if memoize and mask in table:
            return table[mask]
        v = h(np.where(_mask_to_bool(mask, m), t, 0.0))
        if memoize:
            table[mask] = v
        return v

    acc = _Neumaier(t.shape[:-1])
    for alpha in enumerate_partitions(m):
        term = complex(moebius_coefficient(alpha)) * np.ones(t.shape[:-1], dtype=complex)
        for mask in alpha.masks:
            term = term * value(mask)
        acc.add(term)
    out = acc.result()
    return out[()] if out.ndim == 0 else out


def lambda_quotient(h: CharEvaluator, t, threshold: float = QUOTIENT_THRESHOLD) -> np.ndarray:
    """``Lambda(h)(t) / prod(t)``; every ``|t_l|`` must be at least ``threshold``."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) < threshold):
        raise DomainError(f"all coordinates must satisfy |t_l| >= {threshold:g}")
    return lambda_apply(h, t) / np.prod(t, axis=-1)


def gamkrelidze_L(h: CharEvaluator, t) -> np.ndarray:
    """The linear comparison operator ``h(t1, t2) - h(t1, 0) - h(0, t2)``."""
    if h.dimension != 2:
        raise ValueError("the linear comparison operator is defined in dimension 2 only")
    t = np.asarray(t, dtype=float)
    zero = np.zeros_like(t[..., 0])
    first = np.stack([t[..., 0], zero], axis=-1)
    second = np.stack([zero, t[..., 1]], axis=-1)
    out = h(t) - h(first) - h(second)
    return out[()] if out.ndim == 0 else out


def restrict(h: CharEvaluator, K) -> CharEvaluator:
    """Characteristic function of the marginal on ``K``: ``h`` composed with the injection."""
    K = tuple(sorted(K))
    L = tuple(range(h.dimension))
    return CharEvaluator(len(K), lambda s: h(inject_chi(K, L, s)), validate=False,
                         name=f"{h.name}|{K}")
