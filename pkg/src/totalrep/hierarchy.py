"""Finite-universe oracles for omega-Boolean operations, Hausdorff differences
and Sigma^0_2 uniformization / reduction.

Sets are Python ints used as bit-vectors. On a finite universe every set is
open, so these functions check the set algebra of the constructions and say
nothing about topology.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import IndexOutOfRange, ShapeMismatch, ValidationError


@dataclass(frozen=True)
class FiniteUniverse:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValidationError("universe size must be non-negative")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def set(self, elements: Iterable[int]) -> int:
        mask = 0
        for x in elements:
            if not 0 <= x < self.size:
                raise IndexOutOfRange(f"point {x} outside universe of size {self.size}")
            mask |= 1 << x
        return mask

    def elements(self, mask: int) -> tuple:
        return tuple(x for x in range(self.size) if mask >> x & 1)

    def complement(self, mask: int) -> int:
        return self.full & ~mask

    def check(self, mask: int) -> int:
        if mask < 0 or mask >> self.size:
            raise IndexOutOfRange(f"set {mask:#x} exceeds universe of size {self.size}")
        return mask


@dataclass(frozen=True)
class ProductUniverse(FiniteUniverse):
    """``[0, rows) x X`` with ``|X| = width``; point (n, x) is bit ``n*width + x``."""

    rows: int = 1
    width: int = 0

    @classmethod
    def of(cls, rows: int, width: int) -> ProductUniverse:
        return cls(rows * width, rows, width)

    @property
    def base(self) -> FiniteUniverse:
        return FiniteUniverse(self.width)

    def point(self, n: int, x: int) -> int:
        return n * self.width + x

    def section(self, mask: int, n: int) -> int:
        """``{x | (n, x) in mask}``."""
        return (mask >> (n * self.width)) & ((1 << self.width) - 1)

    def project(self, mask: int) -> int:
        out = 0
        for n in range(self.rows):
            out |= self.section(mask, n)
        return out

    def from_sections(self, sections: Sequence[int]) -> int:
        out = 0
        for n, sec in enumerate(sections):
            out |= sec << (n * self.width)
        return out


@dataclass(frozen=True)
class IndexedFamily:
    universe: FiniteUniverse
    sets: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(int(s) for s in self.sets))
        for s in self.sets:
            self.universe.check(s)

    def __len__(self):
        return len(self.sets)

    def __getitem__(self, i):
        return self.sets[i]


# ---------------------------------------------------------------------------


def omega_boolean(collection: Iterable[Iterable[int]], C: IndexedFamily) -> int:
    """Union over A in the collection of (meet of C_n, n in A) minus (union of C_n, n not in A)."""
    m = len(C)
    U = C.universe
    out = 0
    for A in collection:
        A = set(A)
        bad = [n for n in A if not 0 <= n < m]
        if bad:
            raise IndexOutOfRange(f"indices {sorted(bad)} outside [0,{m})")
        part = U.full
        for n in range(m):
            part &= C[n] if n in A else U.complement(C[n])
        out |= part
    return out


def parity(n: int) -> int:
    if n < 0:
        raise ValueError("ordinals here are natural numbers")
    return n % 2


def diff_op(A: IndexedFamily) -> int:
    """Hausdorff difference of a family of length alpha: the union of
    A_b minus the earlier sets over b < alpha with parity(b) != parity(alpha)."""
    alpha = len(A)
    out = 0
    earlier = 0
    for b, s in enumerate(A.sets):
        if parity(b) != parity(alpha):
            out |= s & ~earlier
        earlier |= s
    return out


def cantor_pair(m: int, n: int) -> int:
    return (m + n) * (m + n + 1) // 2 + n


def pair_order(pairs: int, rows: int) -> list:
    """All (m, n) with m < pairs, n < rows, ordered by their Cantor code."""
    return sorted(((m, n) for m in range(pairs) for n in range(rows)), key=lambda p: cantor_pair(*p))


def _presentation(B: IndexedFamily, C: IndexedFamily) -> ProductUniverse:
    if len(B) != len(C):
        raise ShapeMismatch(f"B has {len(B)} sets but C has {len(C)}")
    if B.universe != C.universe:
        raise ShapeMismatch("B and C live in different universes")
    if not isinstance(B.universe, ProductUniverse):
        raise ShapeMismatch("a Sigma^0_2 presentation needs a product universe [0,N) x X")
    return B.universe


def sigma02_set(B: IndexedFamily, C: IndexedFamily) -> int:
    """The set presented by pairs (B_m, C_m): the union of B_m minus C_m."""
    _presentation(B, C)
    out = 0
    for b, c in zip(B.sets, C.sets):
        out |= b & ~c
    return out


def uniformize_sigma02(B: IndexedFamily, C: IndexedFamily) -> int:
    """Uniformize the presented set A subset of [0,N) x X.

    E_{m,n} holds the points x in B_m(n) minus C_m(n) for which no pair with
    a smaller Cantor code already witnessed membership; D collects (n, x) for
    x in E_{m,n}.
    """
    U = _presentation(B, C)
    covered = 0
    rows = [0] * U.rows
    for m, n in pair_order(len(B), U.rows):
        sec = U.section(B[m] & ~C[m], n)
        rows[n] |= sec & ~covered
        covered |= sec
    return U.from_sections(rows)


def reduce_family(presentations: Sequence[tuple]) -> list:
    """Disjoint D_i inside A_i with the same union.

    Each entry is a pair ``(B, C)`` of equally long families over the same
    base universe X. The A_i are stacked as rows of [0, len) x X and the
    stacked set is uniformized.
    """
    if not presentations:
        return []
    X = presentations[0][0].universe
    for B, C in presentations:
        if len(B) != len(C):
            raise ShapeMismatch("each presentation needs as many B sets as C sets")
        if B.universe != X or C.universe != X:
            raise ShapeMismatch("all presentations must share one universe")
    U = ProductUniverse.of(len(presentations), X.size)
    depth = max(len(B) for B, _ in presentations)
    Bs, Cs = [], []
    for j in range(depth):
        Bs.append(U.from_sections([B[j] if j < len(B) else 0 for B, _ in presentations]))
        Cs.append(U.from_sections([C[j] if j < len(C) else 0 for _, C in presentations]))
    D = uniformize_sigma02(IndexedFamily(U, Bs), IndexedFamily(U, Cs))
    return [U.section(D, i) for i in range(len(presentations))]


def uniformize_masks(B: np.ndarray, C: np.ndarray, rows: int, width: int) -> np.ndarray:
    """Batched uniformization on int64 masks of shape ``(batch, pairs)``."""
    B = np.ascontiguousarray(B, dtype=np.int64)
    C = np.ascontiguousarray(C, dtype=np.int64)
    if B.shape != C.shape or B.ndim != 2:
        raise ShapeMismatch(f"B{B.shape} and C{C.shape} must be equal 2-d shapes")
    if rows * width > 62:
        raise ShapeMismatch("batched masks are limited to 62 points")
    order = pair_order(B.shape[1], rows)
    pm = np.array([m for m, _ in order], dtype=np.int64)
    pn = np.array([n for _, n in order], dtype=np.int64)
    return kernels.uniformize_batch(B, C, pm, pn, np.int64(width))
