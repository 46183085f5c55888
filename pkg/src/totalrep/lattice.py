"""Finite fragments of the degree structure of k-forests.

Principal ideals, the lattices of open-set representations of a finite family
(built from the unfolding of its inclusion order), order-isomorphism and
automorphy decisions, and reducibility of the induced equivalence relations.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations

import numpy as np

from .degrees import Degree, DegreeSpace
from .errors import LabelCountMismatch, LabelingNotBijective, TheoremViolation
from .forest import LabeledForest, LabeledPoset, leq_h, relabel, unfold

BOTTOM = "⊥"


@dataclass(frozen=True, eq=False)
class DegreeLattice:
    """An explicit finite join-semilattice of h-degrees.

    ``elements[i]`` is a canonical minimal forest, or ``None`` for an adjoined
    bottom (always index 0 when present). ``order[i, j]`` means element i is
    below element j and ``join[i, j]`` indexes their least upper bound.
    """

    k: int
    elements: tuple
    order: np.ndarray = field(repr=False)
    join: np.ndarray = field(repr=False)
    captions: tuple = ()

    def __len__(self):
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def has_adjoined_bottom(self) -> bool:
        return bool(self.elements) and self.elements[0] is None

    def index(self, caption: str) -> int:
        return self.captions.index(caption)

    @cached_property
    def strict(self) -> np.ndarray:
        lt = self.order.copy()
        np.fill_diagonal(lt, False)
        return lt

    @cached_property
    def covers(self) -> np.ndarray:
        """``covers[i, j]``: j covers i."""
        lt = self.strict.astype(np.int32)
        return self.strict & ~((lt @ lt) > 0)

    @property
    def minimal(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(~self.strict.any(axis=0)))

    @property
    def maximal(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(~self.strict.any(axis=1)))

    @property
    def join_irreducible(self) -> tuple:
        """Elements with exactly one lower cover once a bottom is adjoined."""
        lower = self.covers.sum(axis=0)
        out = []
        for i in range(self.size):
            if self.elements[i] is None:
                continue
            if lower[i] == 1 or (lower[i] == 0 and not self.has_adjoined_bottom):
                out.append(i)
        return tuple(out)

    def with_bottom(self) -> DegreeLattice:
        if self.has_adjoined_bottom:
            return self
        n = self.size
        order = np.ones((n + 1, n + 1), dtype=bool)
        order[1:, 0] = False
        order[1:, 1:] = self.order
        join = np.zeros((n + 1, n + 1), dtype=np.int64)
        join[1:, 1:] = self.join + 1
        join[0, :] = np.arange(n + 1)
        join[:, 0] = np.arange(n + 1)
        return DegreeLattice(self.k, (None,) + self.elements, order, join, (BOTTOM,) + self.captions)

    # -- law checks -------------------------------------------------------------

    def least_upper_bound(self, i: int, j: int) -> int | None:
        """lub from the order matrix alone (independent of the join table)."""
        ub = np.flatnonzero(self.order[i] & self.order[j])
        for u in ub:
            if self.order[u, ub].all():
                return int(u)
        return None

    def join_is_lub(self) -> bool:
        """The join table gives an upper bound below every other upper bound."""
        idx = np.arange(self.size)
        if not (self.order[idx[:, None], self.join] & self.order[idx[None, :], self.join]).all():
            return False
        for i in range(self.size):
            upper = self.order[i][None, :] & self.order
            if (upper & ~self.order[self.join[i]]).any():
                return False
        return True

    def has_all_joins(self) -> bool:
        """Every pair has a least upper bound (the join table is total)."""
        return self.join_is_lub()

    def is_lattice(self) -> bool:
        """Joins everywhere plus a least element; finite meets then exist."""
        return self.join_is_lub() and len(self.minimal) == 1

    def distributivity_violations(self) -> list:
        """Triples (x, y, z) with x <= y+z but no y' <= y, z' <= z, y'+z' = x.

        y' or z' may be an implicit bottom, so the check is the one for the
        semilattice with a bottom adjoined.
        """
        n = self.size
        le = self.order.astype(np.float32)
        bad = []
        for x in range(n):
            parts = (self.join == x).astype(np.float32)
            reach = (le.T @ parts @ le) > 0
            reach |= self.order[x][None, :] | self.order[x][:, None]
            below = self.order[x][self.join]
            for y, z in zip(*np.nonzero(below & ~reach)):
                bad.append((x, int(y), int(z)))
        return bad

    def is_distributive(self) -> bool:
        return not self.distributivity_violations()


@dataclass(frozen=True)
class LatticeIso:
    domain: DegreeLattice
    codomain: DegreeLattice
    map: tuple

    def is_valid(self) -> bool:
        m = np.asarray(self.map)
        if sorted(self.map) != list(range(self.codomain.size)):
            return False
        return bool((self.domain.order == self.codomain.order[np.ix_(m, m)]).all())


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _ideal_degrees(space: DegreeSpace, top: Degree) -> set:
    members = set()
    queue = []
    for i in range(space.k):
        e = space.singleton(i)
        if space.leq(e, top):
            members.add(e)
            queue.append(e)
    while queue:
        x = queue.pop()
        candidates = [space.push(i, x) for i in range(space.k)]
        candidates += [space.join(x, y) for y in list(members)]
        for c in candidates:
            if c not in members and space.leq(c, top):
                members.add(c)
                queue.append(c)
    return members


def _lattice(space: DegreeSpace, degrees) -> DegreeLattice:
    degs = sorted(degrees, key=space.sort_key)
    pos = {d: i for i, d in enumerate(degs)}
    n = len(degs)
    order = np.zeros((n, n), dtype=bool)
    join = np.zeros((n, n), dtype=np.int64)
    for i, x in enumerate(degs):
        for j, y in enumerate(degs):
            order[i, j] = space.leq(x, y)
            if j >= i:
                join[i, j] = join[j, i] = pos[space.join(x, y)]
    elements = tuple(space.to_forest(d) for d in degs)
    captions = tuple(space.caption(d) for d in degs)
    return DegreeLattice(space.k, elements, order, join, captions)


def principal_ideal(a: LabeledForest, space: DegreeSpace | None = None) -> DegreeLattice:
    """All h-degrees below ``a``, closed from the singletons under joins and pushes."""
    space = space or DegreeSpace(a.k)
    return _lattice(space, _ideal_degrees(space, space.from_forest(a)))


def _check_bijective(A: LabeledPoset):
    if A.k != A.n or sorted(A.label) != list(range(A.n)):
        raise LabelingNotBijective(f"labels {A.label} are not a bijection onto range({A.n})")


def family_forest(A: LabeledPoset) -> LabeledForest:
    """The unfolding of A carrying the labels of the copied elements."""
    _check_bijective(A)
    F, _ = unfold(A)
    return F


def lattice_Lstar(A: LabeledPoset, space: DegreeSpace | None = None) -> DegreeLattice:
    return principal_ideal(family_forest(A), space)


def lattice_L(A: LabeledPoset, space: DegreeSpace | None = None) -> DegreeLattice:
    """The segment from the join of all singletons up to the unfolded forest."""
    F = family_forest(A)
    space = space or DegreeSpace(F.k)
    e = space.bottom_join()
    return _lattice(space, [d for d in _ideal_degrees(space, space.from_forest(F)) if space.leq(e, d)])


# ---------------------------------------------------------------------------
# Order isomorphism
# ---------------------------------------------------------------------------


def _covers(leq):
    lt = leq.copy()
    np.fill_diagonal(lt, False)
    m = lt.astype(np.int32)
    return lt & ~((m @ m) > 0)


def _refine(leq1, leq2, init1, init2):
    """Joint colour refinement over the Hasse diagrams; None if histograms split."""
    graphs = []
    for leq, init in ((leq1, init1), (leq2, init2)):
        cov = _covers(leq)
        lt = leq & ~np.eye(len(leq), dtype=bool)
        base = [
            (init[x], int(lt[:, x].sum()), int(lt[x].sum()))
            for x in range(len(leq))
        ]
        down = [tuple(np.flatnonzero(cov[:, x])) for x in range(len(leq))]
        up = [tuple(np.flatnonzero(cov[x])) for x in range(len(leq))]
        graphs.append((base, down, up))
    table = {}
    cols = [[table.setdefault(b, len(table)) for b in g[0]] for g in graphs]
    if Counter(cols[0]) != Counter(cols[1]):
        return None
    while True:
        table = {}
        new = []
        for (_, down, up), col in zip(graphs, cols):
            sig = [
                (col[x], tuple(sorted(col[y] for y in down[x])), tuple(sorted(col[y] for y in up[x])))
                for x in range(len(col))
            ]
            new.append([table.setdefault(s, len(table)) for s in sig])
        if Counter(new[0]) != Counter(new[1]):
            return None
        if len(set(new[0])) == len(set(cols[0])):
            return new
        cols = new


def order_isomorphism(leq1, leq2, init1=None, init2=None) -> tuple | None:
    """An order isomorphism between two finite posets given as leq matrices.

    ``init1``/``init2`` optionally colour elements that must correspond.
    Backtracking over colour classes from joint refinement.
    """
    leq1 = np.asarray(leq1, dtype=bool)
    leq2 = np.asarray(leq2, dtype=bool)
    n = len(leq1)
    if n != len(leq2):
        return None
    init1 = [0] * n if init1 is None else list(init1)
    init2 = [0] * n if init2 is None else list(init2)
    cols = _refine(leq1, leq2, init1, init2)
    if cols is None:
        return None
    c1, c2 = cols
    classes = Counter(c1)
    order = sorted(range(n), key=lambda x: (classes[c1[x]], int(leq1[:, x].sum()), x))
    cands = {x: [y for y in range(n) if c2[y] == c1[x]] for x in range(n)}
    image = [-1] * n
    used = [False] * n
    done = []

    def consistent(x, y):
        for x2 in done:
            y2 = image[x2]
            if leq1[x, x2] != leq2[y, y2] or leq1[x2, x] != leq2[y2, y]:
                return False
        return True

    def extend(i):
        if i == n:
            return True
        x = order[i]
        for y in cands[x]:
            if used[y] or not consistent(x, y):
                continue
            image[x], used[y] = y, True
            done.append(x)
            if extend(i + 1):
                return True
            done.pop()
            image[x], used[y] = -1, False
        return False

    return tuple(image) if extend(0) else None


def lattice_iso(L1: DegreeLattice, L2: DegreeLattice) -> LatticeIso | None:
    m = order_isomorphism(L1.order, L2.order)
    return None if m is None else LatticeIso(L1, L2, m)


def poset_iso(A: LabeledPoset, B: LabeledPoset, respect_labels: bool = False) -> tuple | None:
    """Order isomorphism A -> B (labels ignored unless ``respect_labels``)."""
    if respect_labels:
        return order_isomorphism(A.leq, B.leq, A.label, B.label)
    return order_isomorphism(A.leq, B.leq)


# ---------------------------------------------------------------------------
# Theorem-level checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmainReport:
    posets_isomorphic: bool
    lattices_isomorphic: bool
    poset_witness: tuple | None
    lattice_witness: tuple | None
    size_a: int
    size_b: int
    lattice_size_a: int
    lattice_size_b: int

    @property
    def agree(self) -> bool:
        return self.posets_isomorphic == self.lattices_isomorphic

    def to_text(self) -> str:
        def fmt(w):
            return "none" if w is None else " ".join(map(str, w))

        lines = [
            f"poset_size_a: {self.size_a}",
            f"poset_size_b: {self.size_b}",
            f"lattice_size_a: {self.lattice_size_a}",
            f"lattice_size_b: {self.lattice_size_b}",
            f"posets_isomorphic: {'yes' if self.posets_isomorphic else 'no'}",
            f"lattices_isomorphic: {'yes' if self.lattices_isomorphic else 'no'}",
            f"poset_witness: {fmt(self.poset_witness)}",
            f"lattice_witness: {fmt(self.lattice_witness)}",
            f"agree: {'yes' if self.agree else 'no'}",
        ]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "poset_size_a": self.size_a,
            "poset_size_b": self.size_b,
            "lattice_size_a": self.lattice_size_a,
            "lattice_size_b": self.lattice_size_b,
            "posets_isomorphic": self.posets_isomorphic,
            "lattices_isomorphic": self.lattices_isomorphic,
            "poset_witness": None if self.poset_witness is None else list(self.poset_witness),
            "lattice_witness": None if self.lattice_witness is None else list(self.lattice_witness),
            "agree": self.agree,
        }


def smain_check(A: LabeledPoset, B: LabeledPoset, LA=None, LB=None) -> SmainReport:
    """Compare bare-poset isomorphism with isomorphism of the L* lattices.

    Precomputed lattices may be passed to avoid rebuilding them.
    """
    LA = LA if LA is not None else lattice_Lstar(A)
    LB = LB if LB is not None else lattice_Lstar(B)
    pw = poset_iso(A, B)
    lw = lattice_iso(LA, LB)
    report = SmainReport(
        pw is not None, lw is not None, pw, None if lw is None else lw.map, A.n, B.n, LA.size, LB.size
    )
    if not report.agree:
        raise TheoremViolation("poset and lattice isomorphism disagree:\n" + report.to_text())
    return report


def automorphic(x: LabeledForest, y: LabeledForest, space: DegreeSpace | None = None) -> tuple | None:
    """A label permutation taking the degree of x to the degree of y, or None."""
    if x.k != y.k:
        raise LabelCountMismatch(f"label counts {x.k} and {y.k} differ")
    space = space or DegreeSpace(x.k)
    target = space.from_forest(y)
    if space.size(target) != space.size(space.from_forest(x)):
        return None
    for phi in permutations(range(x.k)):
        if space.from_forest(relabel(x, phi)) == target:
            return phi
    return None


def er_reduce(mu: LabeledForest, nu: LabeledForest) -> tuple | None:
    """A permutation phi with mu <=_h relabel(nu, phi), or None.

    For forest-generated k-partitions this decides continuous reducibility
    of their kernels (equivalence relations with at most k classes).
    """
    if mu.k != nu.k:
        raise LabelCountMismatch(f"label counts {mu.k} and {nu.k} differ")
    for phi in permutations(range(mu.k)):
        if leq_h(mu, relabel(nu, phi)):
            return phi
    return None


# ---------------------------------------------------------------------------
# Ideals through their tree degrees
# ---------------------------------------------------------------------------
#
# A forest maps into another exactly when each of its trees maps into one of
# the other's trees, and a tree maps into a forest exactly when it maps into
# one of its trees. So the degrees below a are the antichains of the poset
# T(a) of minimal trees below a, ordered by inclusion of generated down-sets:
# the ideal with a bottom adjoined is the down-set lattice of T(a), and two
# such lattices are isomorphic iff the tree posets are.


def _antichains(order: np.ndarray, limit: int | None = None):
    """Yield every nonempty antichain of ``order`` as a tuple of indices."""
    comparable = order | order.T
    n = len(order)
    count = 0

    def rec(start, free, chosen):
        nonlocal count
        for j in range(start, n):
            if not free[j]:
                continue
            count += 1
            if limit is not None and count > limit:
                raise OverflowError(f"more than {limit} antichains")
            cur = chosen + (j,)
            yield cur
            yield from rec(j + 1, free & ~comparable[j], cur)

    yield from rec(0, np.ones(n, dtype=bool), ())


def _tree_order(space: DegreeSpace, trees) -> np.ndarray:
    return np.array([[space.tree_leq(a, b) for b in trees] for a in trees], dtype=bool).reshape(len(trees), len(trees))


@dataclass(frozen=True, eq=False)
class TreePoset:
    """Minimal trees below a degree, in ``space.sort_key`` order."""

    space: DegreeSpace
    trees: tuple
    order: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.trees)

    def captions(self) -> tuple:
        return tuple(self.space.caption((t,)) for t in self.trees)

    def ideal_size(self, limit: int | None = None) -> int:
        """Number of degrees in the principal ideal (nonempty antichains)."""
        return sum(1 for _ in _antichains(self.order, limit))

    def ideal(self, limit: int | None = None) -> DegreeLattice:
        """The principal ideal rebuilt from its tree degrees."""
        degrees = [self.space._sorted(self.trees[i] for i in a) for a in _antichains(self.order, limit)]
        return _lattice(self.space, degrees)


def tree_poset(a: LabeledForest, space: DegreeSpace | None = None, limit: int | None = None) -> TreePoset:
    """T(a), computed bottom-up over the nodes of a.

    The trees below the subtree at v are those below some child subtree plus
    ``push(label(v), d)`` for d empty or an antichain of the former.
    ``limit`` bounds each antichain enumeration.
    """
    space = space or DegreeSpace(a.k)
    if space.k != a.k:
        raise LabelCountMismatch(f"forest has k={a.k}, space has k={space.k}")
    below: dict[int, frozenset] = {}
    for v in reversed(a.bfs_order):
        sub = set()
        for c in a.children[v]:
            sub |= below[c]
        found = set(sub)
        found.add(space.push(a.label[v], ())[0])
        pool = sorted(sub)
        order = _tree_order(space, pool)
        for ac in _antichains(order, limit):
            found.add(space.push(a.label[v], space._sorted(pool[i] for i in ac))[0])
        below[v] = frozenset(found)
    trees = set()
    for r in a.roots:
        trees |= below[r]
    trees = tuple(sorted(trees, key=lambda t: space.sort_key((t,))))
    return TreePoset(space, trees, _tree_order(space, trees))


def ideal_isomorphism(x: LabeledForest, y: LabeledForest, space: DegreeSpace | None = None) -> tuple | None:
    """Decide whether the principal ideals of x and y are isomorphic lattices.

    Works on the tree posets, so it scales to ideals far too large to list.
    Returns a map between the tree posets (indices into ``trees``) or None.
    """
    if x.k != y.k:
        raise LabelCountMismatch(f"label counts {x.k} and {y.k} differ")
    space = space or DegreeSpace(x.k)
    return order_isomorphism(tree_poset(x, space).order, tree_poset(y, space).order)
