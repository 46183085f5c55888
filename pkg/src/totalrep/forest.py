"""Finite k-labeled forests and posets, the h-preorder and poset unfolding."""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (
    CycleDetected,
    EmptyForest,
    InvalidMorphism,
    LabelCountMismatch,
    LabelOutOfRange,
    MultipleParents,
    NotAPermutation,
    ValidationError,
)

# A tree term is ``(label, children)`` where ``children`` is a tuple of tree
# terms; a forest term is a tuple of tree terms.
TreeTerm = tuple
ForestTerm = tuple


def _check_k(k):
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValidationError(f"label count must be a positive integer, got {k!r}")


def _check_labels(labels, k):
    for node, lab in enumerate(labels):
        if not 0 <= lab < k:
            raise LabelOutOfRange(f"node {node} has label {lab}, outside [0,{k})")


@dataclass(frozen=True)
class LabeledForest:
    """A non-empty finite forest with labels in ``range(k)``.

    Nodes are ``0..n-1``; ``parent[i]`` is ``-1`` for roots. Children and
    roots are always listed in increasing node order, which fixes the tree
    selection order used by the Baire-space semantics.
    """

    k: int
    parent: tuple
    label: tuple

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, "parent", tuple(int(p) for p in self.parent))
        object.__setattr__(self, "label", tuple(int(x) for x in self.label))
        n = len(self.label)
        if n == 0:
            raise EmptyForest("forests must have at least one node")
        if len(self.parent) != n:
            raise ValidationError("parent and label sequences differ in length")
        for node, p in enumerate(self.parent):
            if not -1 <= p < n:
                raise ValidationError(f"node {node} has unknown parent {p}")
        _check_labels(self.label, self.k)
        # every parent chain must reach a root within n steps
        for start in range(n):
            node, steps = start, 0
            while node != -1:
                node = self.parent[node]
                steps += 1
                if steps > n:
                    raise CycleDetected(f"parent chain from node {start} does not terminate")

    # -- constructors -------------------------------------------------------

    @classmethod
    def singleton(cls, label: int, k: int) -> LabeledForest:
        return cls(k, (-1,), (label,))

    @classmethod
    def from_term(cls, term: ForestTerm, k: int) -> LabeledForest:
        """Build from a forest term, numbering nodes in preorder."""
        parent, label = [], []

        def visit(tree, p):
            node = len(label)
            parent.append(p)
            label.append(tree[0])
            for child in tree[1]:
                visit(child, node)

        for tree in term:
            visit(tree, -1)
        return cls(k, tuple(parent), tuple(label))

    # -- structure ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.label)

    def __len__(self):
        return len(self.label)

    @cached_property
    def children(self) -> tuple:
        kids = [[] for _ in range(self.n)]
        for node, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(node)
        return tuple(tuple(c) for c in kids)

    @cached_property
    def roots(self) -> tuple:
        return tuple(i for i, p in enumerate(self.parent) if p < 0)

    @cached_property
    def bfs_order(self) -> tuple:
        order = []
        queue = deque(self.roots)
        while queue:
            node = queue.popleft()
            order.append(node)
            queue.extend(self.children[node])
        return tuple(order)

    @cached_property
    def depth(self) -> tuple:
        """``depth[x]`` = rk of the lower cone of x (roots have depth 1)."""
        d = [0] * self.n
        for node in self.bfs_order:
            p = self.parent[node]
            d[node] = 1 if p < 0 else d[p] + 1
        return tuple(d)

    @property
    def rank(self) -> int:
        return max(self.depth)

    def level(self, i: int) -> tuple:
        """Nodes whose lower cone has rank ``i`` (level 1 = the roots)."""
        return tuple(x for x in range(self.n) if self.depth[x] == i)

    def is_tree(self) -> bool:
        return len(self.roots) == 1

    def upper_cone(self, node: int) -> tuple:
        out, stack = [], [node]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children[x])
        return tuple(sorted(out))

    def leq_nodes(self, x: int, y: int) -> bool:
        """x <= y in the forest order (x is an ancestor of y or equal)."""
        while y != -1:
            if y == x:
                return True
            y = self.parent[y]
        return False

    def path_between(self, x: int, y: int) -> tuple:
        """The chain ``x = z0 < z1 < ... < zm = y``; requires ``x <= y``."""
        chain = [y]
        while chain[-1] != x:
            p = self.parent[chain[-1]]
            if p < 0:
                raise ValueError(f"node {x} is not below node {y}")
            chain.append(p)
        return tuple(reversed(chain))

    @cached_property
    def arrays(self):
        """``(parent, label, post)`` int64 arrays for the kernels."""
        par = np.asarray(self.parent, dtype=np.int64)
        lab = np.asarray(self.label, dtype=np.int64)
        post = np.asarray(self.bfs_order[::-1], dtype=np.int64)
        return par, lab, post

    # -- terms --------------------------------------------------------------

    def subtree_term(self, node: int) -> TreeTerm:
        return (self.label[node], tuple(self.subtree_term(c) for c in self.children[node]))

    def to_term(self) -> ForestTerm:
        return tuple(self.subtree_term(r) for r in self.roots)

    def trees(self) -> tuple:
        return tuple(LabeledForest.from_term((self.subtree_term(r),), self.k) for r in self.roots)

    def labels_used(self) -> frozenset:
        return frozenset(self.label)

    def __str__(self):
        return format_term(self.to_term())


def validate_forest(raw: Mapping) -> LabeledForest:
    """Validate a loose description ``{"k", "labels", "parents"}``.

    ``parents`` maps each node (or is a sequence indexed by node) to ``None``,
    a single parent, or a collection of parents; more than one parent is
    rejected with :class:`MultipleParents`.
    """
    labels = list(raw["labels"])
    k = raw.get("k")
    if k is None:
        k = max(labels, default=-1) + 1
    n = len(labels)
    if n == 0:
        raise EmptyForest("forests must have at least one node")
    parents = raw.get("parents", {})
    if not isinstance(parents, Mapping):
        parents = dict(enumerate(parents))
    parent = [-1] * n
    for node, ps in parents.items():
        node = int(node)
        if not 0 <= node < n:
            raise ValidationError(f"parent entry for unknown node {node}")
        if ps is None:
            continue
        if isinstance(ps, Iterable) and not isinstance(ps, (str, bytes)):
            ps = sorted(set(ps))
            if len(ps) > 1:
                raise MultipleParents(f"node {node} has parents {ps}")
            if not ps:
                continue
            ps = ps[0]
        parent[node] = -1 if ps is None or ps < 0 else int(ps)
    return LabeledForest(int(k), tuple(parent), tuple(labels))


def _same_k(*forests):
    ks = {f.k for f in forests}
    if len(ks) != 1:
        raise LabelCountMismatch(f"forests have different label counts {sorted(ks)}")


def join(F: LabeledForest, G: LabeledForest) -> LabeledForest:
    """Disjoint union; G's nodes are renumbered after F's."""
    _same_k(F, G)
    off = F.n
    parent = F.parent + tuple(p + off if p >= 0 else -1 for p in G.parent)
    return LabeledForest(F.k, parent, F.label + G.label)


def join_all(forests: Sequence[LabeledForest]) -> LabeledForest:
    out = forests[0]
    for F in forests[1:]:
        out = join(out, F)
    return out


def push(i: int, F: LabeledForest) -> LabeledForest:
    """Add a new bottom node labeled ``i`` below all roots of F."""
    if not 0 <= i < F.k:
        raise LabelOutOfRange(f"label {i} outside [0,{F.k})")
    parent = (-1,) + tuple(p + 1 if p >= 0 else 0 for p in F.parent)
    return LabeledForest(F.k, parent, (i,) + F.label)


def _as_permutation(phi, k):
    if isinstance(phi, Mapping):
        phi = [phi.get(i, i) for i in range(k)]
    phi = tuple(int(x) for x in phi)
    if sorted(phi) != list(range(k)):
        raise NotAPermutation(f"{phi} is not a permutation of range({k})")
    return phi


def relabel(F: LabeledForest, phi) -> LabeledForest:
    """Compose the labeling with a permutation ``phi`` of ``range(k)``."""
    phi = _as_permutation(phi, F.k)
    return LabeledForest(F.k, F.parent, tuple(phi[x] for x in F.label))


# ---------------------------------------------------------------------------
# Morphisms and the h-preorder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    """A monotone, label-preserving node map ``source -> target``."""

    source: LabeledForest
    target: LabeledForest
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))

    def problems(self) -> list:
        src, tgt, m = self.source, self.target, self.map
        if src.k != tgt.k:
            return ["label counts differ"]
        if len(m) != src.n:
            return [f"map has {len(m)} entries for {src.n} source nodes"]
        out = []
        for x in range(src.n):
            if not 0 <= m[x] < tgt.n:
                out.append(f"node {x} maps outside the target")
                continue
            if src.label[x] != tgt.label[m[x]]:
                out.append(f"node {x} label {src.label[x]} != {tgt.label[m[x]]}")
            p = src.parent[x]
            if p >= 0 and 0 <= m[p] < tgt.n and not tgt.leq_nodes(m[p], m[x]):
                out.append(f"edge {p}<{x} not preserved")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def check(self) -> Morphism:
        bad = self.problems()
        if bad:
            raise InvalidMorphism("; ".join(bad))
        return self


def leq_tables(G: LabeledForest, F: LabeledForest):
    _same_k(G, F)
    gpar, glab, gpost = G.arrays
    fpar, flab, fpost = F.arrays
    return kernels.leq_tables(gpar, glab, gpost, fpar, flab, fpost)


def leq_h(G: LabeledForest, F: LabeledForest) -> bool:
    """G <=_h F: some monotone label-preserving map G -> F exists."""
    at, _ = leq_tables(G, F)
    return all(at[r].any() for r in G.roots)


def find_morphism(G: LabeledForest, F: LabeledForest) -> Morphism | None:
    """A witness for ``leq_h(G, F)``, or None.

    Each node goes to the first admissible target in node order, so the
    witness is deterministic.
    """
    at, _ = leq_tables(G, F)
    m = [-1] * G.n
    for r in G.roots:
        hits = np.flatnonzero(at[r])
        if hits.size == 0:
            return None
        m[r] = int(hits[0])
    for x in G.bfs_order:
        for c in G.children[x]:
            for t in F.upper_cone(m[x]):
                if at[c, t]:
                    m[c] = t
                    break
    return Morphism(G, F, tuple(m))


def equiv_h(G: LabeledForest, F: LabeledForest) -> bool:
    return leq_h(G, F) and leq_h(F, G)


# ---------------------------------------------------------------------------
# Canonical encoding
# ---------------------------------------------------------------------------


def sort_term(term: ForestTerm) -> ForestTerm:
    """Sort children and roots recursively; labels compare numerically."""
    return tuple(sorted((lab, sort_term(kids)) for lab, kids in term))


def format_term(term: ForestTerm) -> str:
    def tree(t):
        lab, kids = t
        if not kids:
            return f"({lab})"
        return f"({lab} " + " ".join(tree(c) for c in kids) + ")"

    return " | ".join(tree(t) for t in term)


def canonical_term(F: LabeledForest) -> ForestTerm:
    return sort_term(F.to_term())


def canonical_form(F: LabeledForest) -> bytes:
    """Encoding invariant under renumbering and sibling order."""
    return format_term(canonical_term(F)).encode("ascii")


def canonical_forest(F: LabeledForest) -> LabeledForest:
    """F renumbered in preorder of its canonical term."""
    return LabeledForest.from_term(canonical_term(F), F.k)


# ---------------------------------------------------------------------------
# Labeled posets and unfolding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledPoset:
    """A finite labeled poset stored by its covering pairs ``(a, b)``, a < b."""

    k: int
    label: tuple
    covers: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, "label", tuple(int(x) for x in self.label))
        if not self.label:
            raise ValidationError("posets must have at least one element")
        _check_labels(self.label, self.k)
        n = len(self.label)
        pairs = set()
        for a, b in self.covers:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n):
                raise ValidationError(f"order pair ({a},{b}) names an unknown element")
            if a == b:
                raise CycleDetected(f"element {a} is below itself")
            pairs.add((a, b))
        lt = _transitive_closure(n, pairs)
        if any(lt[i, i] for i in range(n)):
            raise CycleDetected("order relation has a cycle")
        # keep only covering pairs
        reduced = frozenset(
            (a, b) for a, b in zip(*np.nonzero(lt)) if not (lt[a] & lt[:, b]).any()
        )
        object.__setattr__(self, "covers", frozenset((int(a), int(b)) for a, b in reduced))

    @classmethod
    def from_relation(cls, k: int, labels: Sequence[int], pairs: Iterable) -> LabeledPoset:
        return cls(k, tuple(labels), frozenset(tuple(p) for p in pairs))

    @property
    def n(self) -> int:
        return len(self.label)

    @cached_property
    def lt(self) -> np.ndarray:
        return _transitive_closure(self.n, self.covers)

    @cached_property
    def leq(self) -> np.ndarray:
        out = self.lt.copy()
        np.fill_diagonal(out, True)
        out.setflags(write=False)
        return out

    @cached_property
    def succ(self) -> tuple:
        out = [[] for _ in range(self.n)]
        for a, b in sorted(self.covers):
            out[a].append(b)
        return tuple(tuple(s) for s in out)

    @cached_property
    def minimal(self) -> tuple:
        return tuple(x for x in range(self.n) if not self.lt[:, x].any())

    @cached_property
    def height(self) -> tuple:
        """``height[x]`` = rk of the lower cone of x."""
        h = [0] * self.n
        for x in _topological(self.n, self.covers):
            below = [h[a] for a, b in self.covers if b == x]
            h[x] = 1 + max(below, default=0)
        return tuple(h)

    @property
    def rank(self) -> int:
        return max(self.height)

    def level(self, i: int) -> tuple:
        return tuple(x for x in range(self.n) if self.height[x] == i)


def _transitive_closure(n, pairs):
    lt = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        lt[a, b] = True
    for m in range(n):
        lt |= lt[:, m : m + 1] & lt[m : m + 1, :]
    return lt


def _topological(n, covers):
    indeg = [0] * n
    for _, b in covers:
        indeg[b] += 1
    out, ready = [], [x for x in range(n) if indeg[x] == 0]
    succ = [[] for _ in range(n)]
    for a, b in sorted(covers):
        succ[a].append(b)
    while ready:
        x = ready.pop(0)
        out.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    return out


def unfold(P: LabeledPoset) -> tuple[LabeledForest, tuple]:
    """Bottom-up unfolding of P into a forest with a monotone onto map.

    Returns ``(F, f)`` where ``f[x]`` is the poset element copied by forest
    node ``x``. One tree per minimal element; above each copy of p there is
    one fresh child per immediate successor of p. Nodes are numbered
    breadth-first.
    """
    parent, elem = [], []
    queue = deque()
    for p in P.minimal:
        queue.append((p, -1))
    while queue:
        p, par = queue.popleft()
        node = len(elem)
        parent.append(par)
        elem.append(p)
        for q in P.succ[p]:
            queue.append((q, node))
    F = LabeledForest(P.k, tuple(parent), tuple(P.label[p] for p in elem))
    return F, tuple(elem)


def subforest(F: LabeledForest, nodes: Iterable[int]) -> LabeledForest:
    """The forest formed by the upper cones of ``nodes``."""
    return LabeledForest.from_term(tuple(F.subtree_term(x) for x in nodes), F.k)


def is_minimal(F: LabeledForest) -> bool:
    """Inductive minimality test on the tree structure.

    Singletons are minimal; a larger tree is minimal iff no child of the
    root repeats the root label and the forest above the root is minimal; a
    forest of several trees is minimal iff its trees are minimal and
    pairwise <=_h-incomparable.
    """
    roots = F.roots
    if len(roots) > 1:
        trees = F.trees()
        if not all(is_minimal(T) for T in trees):
            return False
        for i, S in enumerate(trees):
            for T in trees[i + 1 :]:
                if leq_h(S, T) or leq_h(T, S):
                    return False
        return True
    r = roots[0]
    kids = F.children[r]
    if not kids:
        return True
    if any(F.label[c] == F.label[r] for c in kids):
        return False
    return is_minimal(subforest(F, kids))
