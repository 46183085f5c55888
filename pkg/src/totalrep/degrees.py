"""h-degrees as interned canonical minimal forests.

A degree is a sorted tuple of tree ids; every id names a minimal tree and the
trees of one degree are pairwise <=_h-incomparable, so two forests are
h-equivalent exactly when they reduce to the same tuple. All caches belong to
the :class:`DegreeSpace` instance; nothing is shared between instances.
"""
from __future__ import annotations

from collections.abc import Iterable

from .errors import LabelCountMismatch, LabelOutOfRange
from .forest import LabeledForest, format_term, leq_h

Degree = tuple


class DegreeSpace:
    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self._key: list[tuple] = []  # id -> canonical tree term
        self._label: list[int] = []
        self._kids: list[Degree] = []
        self._size: list[int] = []
        self._mask: list[int] = []  # bitmask of labels occurring in the tree
        self._ids: dict[tuple, int] = {}
        self._forest: dict[int, LabeledForest] = {}
        self._tleq: dict[tuple, bool] = {}
        self._join: dict[tuple, Degree] = {}
        self._push: dict[tuple, Degree] = {}

    # -- interning ----------------------------------------------------------

    def _tree(self, label: int, kids: Degree) -> int:
        key = (label, tuple(self._key[t] for t in kids))
        tid = self._ids.get(key)
        if tid is None:
            tid = len(self._key)
            self._ids[key] = tid
            self._key.append(key)
            self._label.append(label)
            self._kids.append(kids)
            self._size.append(1 + sum(self._size[t] for t in kids))
            mask = 1 << label
            for t in kids:
                mask |= self._mask[t]
            self._mask.append(mask)
        return tid

    def _sorted(self, ids: Iterable[int]) -> Degree:
        return tuple(sorted(set(ids), key=self._key.__getitem__))

    def tree_leq(self, a: int, b: int) -> bool:
        if a == b:
            return True
        if self._mask[a] & ~self._mask[b]:
            return False
        hit = self._tleq.get((a, b))
        if hit is None:
            hit = leq_h(self._tree_forest(a), self._tree_forest(b))
            self._tleq[(a, b)] = hit
        return hit

    def _tree_forest(self, tid: int) -> LabeledForest:
        F = self._forest.get(tid)
        if F is None:
            F = LabeledForest.from_term((self._key[tid],), self.k)
            self._forest[tid] = F
        return F

    def reduce(self, ids: Iterable[int]) -> Degree:
        """Drop every tree that maps into another one (keeps one of a tie)."""
        kept: list[int] = []
        for t in self._sorted(ids):
            if any(self.tree_leq(t, s) for s in kept):
                continue
            kept = [s for s in kept if not self.tree_leq(s, t)]
            kept.append(t)
        return self._sorted(kept)

    # -- degree operations ----------------------------------------------------

    def singleton(self, label: int) -> Degree:
        if not 0 <= label < self.k:
            raise LabelOutOfRange(f"label {label} outside [0,{self.k})")
        return (self._tree(label, ()),)

    def join(self, x: Degree, y: Degree) -> Degree:
        key = (x, y) if x <= y else (y, x)
        out = self._join.get(key)
        if out is None:
            out = self.reduce(x + y)
            self._join[key] = out
        return out

    def push(self, label: int, x: Degree) -> Degree:
        if not 0 <= label < self.k:
            raise LabelOutOfRange(f"label {label} outside [0,{self.k})")
        key = (label, x)
        out = self._push.get(key)
        if out is None:
            spliced = []
            for t in x:
                if self._label[t] == label:
                    spliced.extend(self._kids[t])
                else:
                    spliced.append(t)
            out = (self._tree(label, self.reduce(spliced)),)
            self._push[key] = out
        return out

    def leq(self, x: Degree, y: Degree) -> bool:
        return all(any(self.tree_leq(a, b) for b in y) for a in x)

    def bottom_join(self) -> Degree:
        """``e``: the join of all singleton degrees."""
        return self.reduce(self.singleton(i)[0] for i in range(self.k))

    # -- conversion -----------------------------------------------------------

    def from_forest(self, F: LabeledForest) -> Degree:
        """Minimize F bottom-up by splicing and dropping dominated trees."""
        if F.k != self.k:
            raise LabelCountMismatch(f"forest has k={F.k}, space has k={self.k}")
        tid = [0] * F.n
        for x in reversed(F.bfs_order):
            kids = F.children[x]
            if not kids:
                tid[x] = self._tree(F.label[x], ())
            else:
                tid[x] = self.push(F.label[x], self.reduce(tid[c] for c in kids))[0]
        return self.reduce(tid[r] for r in F.roots)

    def term(self, x: Degree) -> tuple:
        return tuple(self._key[t] for t in x)

    def to_forest(self, x: Degree) -> LabeledForest:
        return LabeledForest.from_term(self.term(x), self.k)

    def size(self, x: Degree) -> int:
        return sum(self._size[t] for t in x)

    def caption(self, x: Degree) -> str:
        return format_term(self.term(x))

    def sort_key(self, x: Degree):
        return (self.size(x), len(x), self.term(x))


def minimize(F: LabeledForest) -> LabeledForest:
    """The minimal forest h-equivalent to F, in canonical node order."""
    space = DegreeSpace(F.k)
    return space.to_forest(space.from_forest(F))
