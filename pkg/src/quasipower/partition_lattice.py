"""Set partitions of ``{0, ..., m-1}`` and the refinement lattice.

Indices are zero-based throughout the package.  A partition is stored in
canonical form: every block is a sorted tuple and blocks are ordered by their
smallest element, so two partitions are equal exactly when their block tuples
are equal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_GROUND_SIZE = 8
MAX_FUBINI_INDEX = 12


@dataclass(frozen=True)
class SetPartition:
    blocks: tuple[tuple[int, ...], ...]
    ground_size: int

    def __post_init__(self):
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("blocks must be nonempty")
            if list(block) != sorted(block):
                raise ValueError(f"block {block} is not sorted")
            if seen.intersection(block):
                raise ValueError("blocks must be pairwise disjoint")
            seen.update(block)
        if seen != set(range(self.ground_size)):
            raise ValueError(f"blocks do not cover range({self.ground_size})")
        if [b[0] for b in self.blocks] != sorted(b[0] for b in self.blocks):
            raise ValueError("blocks must be ordered by their minimum element")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], ground_size: int | None = None) -> "SetPartition":
        """Build a partition from blocks in any order, canonicalising them."""
        canon = sorted((tuple(sorted(set(b))) for b in blocks), key=lambda b: b[0] if b else -1)
        if ground_size is None:
            ground_size = sum(len(b) for b in canon)
        return cls(tuple(canon), ground_size)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "SetPartition":
        """Build the partition encoded by a restricted-growth string."""
        blocks: list[list[int]] = []
        for i, label in enumerate(rgs):
            if label == len(blocks):
                blocks.append([])
            elif label > len(blocks):
                raise ValueError(f"{rgs!r} is not a restricted-growth string")
            blocks[label].append(i)
        return cls(tuple(tuple(b) for b in blocks), len(rgs))

    @classmethod
    def top(cls, m: int) -> "SetPartition":
        return cls((tuple(range(m)),), m)

    @classmethod
    def bottom(cls, m: int) -> "SetPartition":
        return cls(tuple((i,) for i in range(m)), m)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def masks(self) -> tuple[int, ...]:
        """Blocks encoded as bitmasks over the ground set."""
        return tuple(sum(1 << i for i in block) for block in self.blocks)

    def rgs(self) -> tuple[int, ...]:
        labels = [0] * self.ground_size
        for label, block in enumerate(self.blocks):
            for i in block:
                labels[i] = label
        return tuple(labels)

    def __str__(self) -> str:
        # one-based, for human-readable reports
        return "".join("{" + ",".join(str(i + 1) for i in b) + "}" for b in self.blocks)


def _check_ground_size(m: int) -> None:
    if not isinstance(m, int) or not 1 <= m <= MAX_GROUND_SIZE:
        raise ValueError(f"ground size must be an integer in [1, {MAX_GROUND_SIZE}], got {m!r}")


def _rgs_iter(m: int):
    # lexicographic order of restricted-growth strings
    rgs = [0] * m
    maxima = [0] * m

    def rec(i: int):
        if i == m:
            yield tuple(rgs)
            return
        for label in range(maxima[i - 1] + 2):
            rgs[i] = label
            maxima[i] = max(maxima[i - 1], label)
            yield from rec(i + 1)

    yield from rec(1)


@lru_cache(maxsize=None)
def enumerate_partitions(m: int) -> tuple[SetPartition, ...]:
    """All partitions of ``{0, ..., m-1}`` in lexicographic restricted-growth order."""
    _check_ground_size(m)
    return tuple(SetPartition.from_rgs(r) for r in _rgs_iter(m))


def moebius_coefficient(alpha: SetPartition) -> int:
    """Möbius value ``mu(alpha, top) = (-1)^(k-1) (k-1)!`` with ``k = |alpha|``."""
    k = len(alpha)
    return (-1) ** (k - 1) * math.factorial(k - 1)


def _check_same_ground(a: SetPartition, b: SetPartition) -> None:
    if a.ground_size != b.ground_size:
        raise ValueError(f"ground sizes differ: {a.ground_size} != {b.ground_size}")


def meet(a: SetPartition, b: SetPartition) -> SetPartition:
    """Greatest common refinement: all nonempty blockwise intersections."""
    _check_same_ground(a, b)
    parts = []
    for ja in a.blocks:
        sa = set(ja)
        for jb in b.blocks:
            common = sa.intersection(jb)
            if common:
                parts.append(common)
    return SetPartition.from_blocks(parts, a.ground_size)


def is_refinement(a: SetPartition, b: SetPartition) -> bool:
    """True when every block of ``a`` lies inside some block of ``b``."""
    _check_same_ground(a, b)
    label = b.rgs()
    return all(len({label[i] for i in block}) == 1 for block in a.blocks)


def weisner_sum(gamma: SetPartition, beta: SetPartition) -> int:
    """Sum of ``mu(alpha, top)`` over partitions ``alpha`` with ``alpha ^ beta == gamma``.

    Requires ``gamma <= beta < top``; the result is identically zero.
    """
    _check_same_ground(gamma, beta)
    m = beta.ground_size
    if not is_refinement(gamma, beta):
        raise ValueError("gamma must refine beta")
    if len(beta) == 1:
        raise ValueError("beta must be strictly below the top partition")
    return sum(moebius_coefficient(a) for a in enumerate_partitions(m) if meet(a, beta) == gamma)


def _meet_rgs(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    labels: dict[tuple[int, int], int] = {}
    return tuple(labels.setdefault(pair, len(labels)) for pair in zip(a, b))


def weisner_sums(beta: SetPartition) -> dict[SetPartition, int]:
    """``weisner_sum(gamma, beta)`` for every ``gamma <= beta`` in one pass over the lattice."""
    if len(beta) == 1:
        raise ValueError("beta must be strictly below the top partition")
    m = beta.ground_size
    b = beta.rgs()
    acc: dict[tuple[int, ...], int] = {}
    for a in enumerate_partitions(m):
        key = _meet_rgs(a.rgs(), b)
        acc[key] = acc.get(key, 0) + moebius_coefficient(a)
    return {SetPartition.from_rgs(k): v for k, v in sorted(acc.items())}


@lru_cache(maxsize=None)
def stirling2(j: int, k: int) -> int:
    """Stirling partition number ``{j k}`` via ``S(j,k) = k S(j-1,k) + S(j-1,k-1)``."""
    if j == k:
        return 1
    if k == 0 or k > j:
        return 0
    return k * stirling2(j - 1, k) + stirling2(j - 1, k - 1)


def fubini_number(j: int) -> int:
    """Ordered Bell number ``sum_k {j k} k!``, with ``B_0 = 1``."""
    if not isinstance(j, int) or not 0 <= j <= MAX_FUBINI_INDEX:
        raise ValueError(f"j must be an integer in [0, {MAX_FUBINI_INDEX}], got {j!r}")
    if j == 0:
        return 1
    return sum(stirling2(j, k) * math.factorial(k) for k in range(1, j + 1))


def bell_number(m: int) -> int:
    """Bell numbers from ``B(n+1) = sum_k C(n,k) B(k)``."""
    bell = [1]
    for n in range(m):
        bell.append(sum(math.comb(n, k) * bell[k] for k in range(n + 1)))
    return bell[m]
