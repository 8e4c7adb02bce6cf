"""Finitely supported laws on affine integer grids.

The atom with integer index ``k`` sits at ``offset + step * k``.  Masses are
stored densely as an ``m``-dimensional array indexed by ``k``; entries may be
zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .lambda_operator import CharEvaluator

MASS_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class LatticeDistribution:
    mass: np.ndarray
    offset: np.ndarray
    step: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=float)
        if mass.ndim == 0:
            raise ValueError("mass must have at least one axis")
        m = mass.ndim
        offset = np.broadcast_to(np.asarray(self.offset, dtype=float), (m,)).copy()
        step = np.broadcast_to(np.asarray(self.step, dtype=float), (m,)).copy()
        if np.any(step <= 0):
            raise ValueError("grid steps must be positive")
        if np.any(mass < 0):
            raise ValueError("masses must be nonnegative")
        total = mass.sum()
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValueError(f"total mass must be 1, got {total!r}")
        for arr in (mass, offset, step):
            arr.setflags(write=False)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "step", step)

    @classmethod
    def from_mapping(cls, masses: Mapping[tuple[int, ...], float], offset=0.0, step=1.0,
                     normalize: bool = False) -> "LatticeDistribution":
        """Build from ``{integer index tuple: mass}``; indices are shifted to start at 0.

        The shift is folded into ``offset`` so that atom positions are unchanged.
        """
        keys = [tuple(k) if np.ndim(k) else (k,) for k in masses]
        if not keys:
            raise ValueError("no atoms given")
        idx = np.array(keys, dtype=np.int64)
        lo = idx.min(axis=0)
        shape = tuple(idx.max(axis=0) - lo + 1)
        arr = np.zeros(shape)
        for k, v in zip(idx - lo, masses.values()):
            arr[tuple(k)] += float(v)
        if normalize:
            arr = arr / arr.sum()
        m = len(shape)
        offset = np.broadcast_to(np.asarray(offset, dtype=float), (m,))
        step = np.broadcast_to(np.asarray(step, dtype=float), (m,))
        return cls(arr, offset + step * lo, step)

    @classmethod
    def from_counts(cls, counts: Mapping[tuple[int, ...], int], offset=0.0, step=1.0) -> "LatticeDistribution":
        """Normalise exact integer counts to probabilities."""
        total = sum(counts.values())
        if total <= 0:
            raise ValueError("counts must have a positive total")
        return cls.from_mapping({k: v / total for k, v in counts.items()}, offset, step, normalize=True)

    @classmethod
    def point_mass(cls, at) -> "LatticeDistribution":
        at = np.atleast_1d(np.asarray(at, dtype=float))
        return cls(np.ones((1,) * len(at)), at, np.ones(len(at)))

    @property
    def dimension(self) -> int:
        return self.mass.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.mass.shape

    def coords(self, axis: int) -> np.ndarray:
        """Positions of the grid lines along ``axis``."""
        return self.offset[axis] + self.step[axis] * np.arange(self.mass.shape[axis])

    def atoms(self):
        """Yield ``(position, mass)`` for every atom with positive mass."""
        for k in zip(*np.nonzero(self.mass)):
            yield self.offset + self.step * np.array(k), float(self.mass[k])

    def marginal(self, J) -> "LatticeDistribution":
        J = sorted(J)
        if not J:
            raise ValueError("J must be nonempty")
        drop = tuple(i for i in range(self.dimension) if i not in J)
        return LatticeDistribution(self.mass.sum(axis=drop), self.offset[J], self.step[J])

    def affine(self, center, scale: float) -> "LatticeDistribution":
        """Law of ``(W - center) / scale`` for ``W`` with this law."""
        if scale <= 0:
            raise ValueError("scale must be positive")
        center = np.broadcast_to(np.asarray(center, dtype=float), (self.dimension,))
        return LatticeDistribution(self.mass, (self.offset - center) / scale, self.step / scale)

    def cdf_grid(self) -> np.ndarray:
        """``P(W <= grid point)`` at every grid point (right-continuous values)."""
        out = self.mass
        for ax in range(self.dimension):
            out = np.cumsum(out, axis=ax)
        return out

    def cdf(self, z) -> np.ndarray:
        """``P(W <= z)`` at arbitrary points ``z`` of shape ``(m,)`` or ``(N, m)``."""
        z = np.asarray(z, dtype=float)
        pts = np.atleast_2d(z)
        grid = self.cdf_grid()
        idx = []
        for ax in range(self.dimension):
            # number of grid lines <= z along this axis, minus one
            k = np.floor((pts[:, ax] - self.offset[ax]) / self.step[ax] + 1e-9).astype(np.int64)
            idx.append(np.clip(k, -1, self.mass.shape[ax] - 1))
        idx = np.stack(idx, axis=1)
        below = np.any(idx < 0, axis=1)
        vals = grid[tuple(np.maximum(idx, 0).T)]
        out = np.where(below, 0.0, vals)
        return float(out[0]) if z.ndim == 1 else out

    def _index_moment(self, exponents) -> float:
        weights = self.mass
        for ax, e in enumerate(exponents):
            if e:
                shape = [1] * self.dimension
                shape[ax] = -1
                weights = weights * (self.coords(ax) ** e).reshape(shape)
        return float(weights.sum())

    def moment(self, exponents) -> float:
        """Raw cross-moment ``E prod_l W_l^{k_l}``."""
        return self._index_moment(tuple(exponents))

    def mean(self) -> np.ndarray:
        m = self.dimension
        return np.array([self._index_moment(tuple(int(i == j) for i in range(m))) for j in range(m)])

    def cov(self) -> np.ndarray:
        # centred two-pass form; E[XY] - E[X]E[Y] cancels badly for large supports
        m = self.dimension
        mu = self.mean()
        centred = []
        for ax in range(m):
            shape = [1] * m
            shape[ax] = -1
            centred.append((self.coords(ax) - mu[ax]).reshape(shape))
        out = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                out[i, j] = out[j, i] = float((self.mass * centred[i] * centred[j]).sum())
        return out

    def charfn_values(self, t, chunk: int = 4096) -> np.ndarray:
        """Exact ``E exp(i <t, W>)`` at points ``t`` of shape ``(..., m)``.

        Contracts one axis at a time:
        ``sum_k mass[k] prod_l exp(i t_l (offset_l + step_l k_l))``.
        """
        t = np.asarray(t, dtype=float)
        lead = t.shape[:-1]
        pts = t.reshape(-1, self.dimension)
        out = np.empty(pts.shape[0], dtype=complex)
        ks = [np.arange(n) for n in self.mass.shape]
        flat = self.mass.reshape(self.mass.shape[0], -1)
        for start in range(0, pts.shape[0], chunk):
            block = pts[start:start + chunk]
            e = np.exp(1j * block[:, 0, None] * (self.offset[0] + self.step[0] * ks[0])[None, :])
            # acc has shape (points, remaining mass axes...)
            acc = (e @ flat).reshape((block.shape[0],) + self.mass.shape[1:])
            for ax in range(1, self.dimension):
                e = np.exp(1j * block[:, ax, None] * (self.offset[ax] + self.step[ax] * ks[ax])[None, :])
                acc = np.einsum("pk,pk...->p...", e, acc)
            out[start:start + block.shape[0]] = acc
        return out.reshape(lead)

    def charfn(self) -> CharEvaluator:
        """The exact characteristic function as an evaluator."""
        return CharEvaluator(self.dimension, self.charfn_values, name="lattice")
