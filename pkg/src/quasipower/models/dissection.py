"""Dissections of a labelled convex polygon, counted by the sizes of their cells.

With ``f(z, x) = sum a_n(r) x^r z^(n-1)`` the counts satisfy
``f = z + sum_i x_i sum_{k in S_i} f^(k-1)``.  Since every ``f^(k-1)`` with
``k >= 3`` has ``z``-valuation at least 2, the coefficient of ``z^j`` on the
right only involves coefficients of ``f`` below ``j``.  The series is therefore
built one coefficient at a time, which yields exactly what ``max_n - 1`` rounds
of fixed-point iteration would.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..lattice import LatticeDistribution
from .empirical import empirical_model

MAX_N = 22

Poly = dict  # count vector r -> exact integer coefficient


@dataclass(frozen=True)
class SizeClass:
    """``finite  union  {threshold, threshold + 1, ...}``; ``threshold=None`` means finite."""
    finite: frozenset[int] = frozenset()
    threshold: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "finite", frozenset(int(k) for k in self.finite))
        if any(k < 3 for k in self.finite) or (self.threshold is not None and self.threshold < 3):
            raise ValueError("polygon sizes must be at least 3")
        if not self.finite and self.threshold is None:
            raise ValueError("a size class must be nonempty")

    def __contains__(self, k: int) -> bool:
        return k in self.finite or (self.threshold is not None and k >= self.threshold)

    def members(self, upto: int) -> list[int]:
        return [k for k in range(3, upto + 1) if k in self]

    @classmethod
    def parse(cls, text: str) -> "SizeClass":
        """``"3"``, ``"3,5"``, ``"4+"`` (all sizes from 4) or combinations like ``"3,6+"``."""
        finite, threshold = set(), None
        for tok in text.split(","):
            tok = tok.strip()
            if tok.endswith("+"):
                if threshold is not None:
                    raise ValueError(f"two thresholds in size class {text!r}")
                threshold = int(tok[:-1])
            elif tok:
                finite.add(int(tok))
        if threshold is not None:
            finite = {k for k in finite if k < threshold}
        return cls(frozenset(finite), threshold)

    def __str__(self) -> str:
        parts = [str(k) for k in sorted(self.finite)]
        if self.threshold is not None:
            parts.append(f"{self.threshold}+")
        return ",".join(parts)


@dataclass(frozen=True)
class DissectionSpec:
    classes: tuple[SizeClass, ...]
    max_n: int = MAX_N

    def __post_init__(self):
        if not self.classes:
            raise ValueError("need at least one size class")
        if not 3 <= self.max_n <= MAX_N:
            raise ValueError(f"max_n must lie in [3, {MAX_N}]")
        thresholds = [c.threshold for c in self.classes if c.threshold is not None]
        if len(thresholds) > 1:
            raise ValueError("at most one size class can be infinite")
        horizon = max([self.max_n] + [max(c.finite, default=3) for c in self.classes] + thresholds)
        seen = set()
        for c in self.classes:
            mem = set(c.members(horizon))
            if mem & seen:
                raise ValueError(f"size classes overlap at {sorted(mem & seen)}")
            seen |= mem

    @property
    def dimension(self) -> int:
        return len(self.classes)

    @classmethod
    def parse(cls, text: str, max_n: int = MAX_N) -> "DissectionSpec":
        """Classes separated by ``;``, e.g. ``"3;4+"``.  ``"all"`` is ``"3+"``."""
        text = "3+" if text.strip() == "all" else text
        return cls(tuple(SizeClass.parse(p) for p in text.split(";") if p.strip()), max_n)

    def __str__(self) -> str:
        return ";".join(str(c) for c in self.classes)


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(i + j for i, j in zip(ka, kb))
            out[k] = out.get(k, 0) + ca * cb
    return out


def _add_into(acc: Poly, p: Poly, shift: tuple[int, ...] | None = None) -> None:
    for k, c in p.items():
        if shift is not None:
            k = tuple(i + j for i, j in zip(k, shift))
        acc[k] = acc.get(k, 0) + c


def dissection_series(spec: DissectionSpec) -> list[Poly]:
    """Coefficients ``[z^j] f`` for ``j = 0, ..., max_n - 1`` as exact polynomials in ``x``."""
    t, top = spec.dimension, spec.max_n - 1
    zero = (0,) * t
    f: list[Poly] = [{} for _ in range(top + 1)]
    f[1] = {zero: 1}
    # powers[p][j] = [z^j] f^p, filled column by column
    powers: list[list[Poly]] = [[{} for _ in range(top + 1)] for _ in range(top + 1)]
    powers[1][1] = f[1]
    unit = [tuple(int(i == c) for i in range(t)) for c in range(t)]
    class_of = {}
    for ci, c in enumerate(spec.classes):
        for k in c.members(top + 1):
            class_of[k] = ci
    for j in range(2, top + 1):
        for p in range(2, j + 1):
            col: Poly = {}
            for i in range(1, j - p + 2):
                if f[i] and powers[p - 1][j - i]:
                    _add_into(col, _mul(f[i], powers[p - 1][j - i]))
            powers[p][j] = col
        fj: Poly = {}
        for k, ci in class_of.items():
            if k - 1 <= j and powers[k - 1][j]:
                _add_into(fj, powers[k - 1][j], unit[ci])
        f[j] = {r: c for r, c in fj.items() if c}
        powers[1][j] = f[j]
    return f


@lru_cache(maxsize=32)
def _series_cached(spec: DissectionSpec) -> tuple:
    return tuple(dissection_series(spec))


def dissection_counts(spec: DissectionSpec, n: int) -> dict[tuple[int, ...], int]:
    """``a_n(r)``: dissections of the ``n``-gon with ``r_i`` cells whose size lies in ``S_i``."""
    if not 3 <= n <= spec.max_n:
        raise ValueError(f"n must lie in [3, {spec.max_n}]")
    return dict(sorted(_series_cached(spec)[n - 1].items()))


def dissection_law(spec: DissectionSpec, n: int) -> LatticeDistribution:
    counts = dissection_counts(spec, n)
    if not counts:
        raise ValueError(f"no admissible dissection of the {n}-gon")
    return LatticeDistribution.from_counts(counts)


def dissection_model(spec: DissectionSpec, n1: int | None = None, n2: int | None = None):
    """Quasi-power data estimated from the exact laws at ``n1`` and ``n2`` (defaults: ``max_n/2``, ``max_n``)."""
    n2 = spec.max_n if n2 is None else n2
    n1 = max(3, n2 // 2) if n1 is None else n1
    return empirical_model(lambda n: dissection_law(spec, int(n)), n1, n2, name="dissection",
                           metadata={"classes": str(spec)})
