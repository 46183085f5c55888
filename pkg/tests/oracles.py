"""Brute-force reference implementations used only by the tests.

None of these import the algorithms they check; they work from plain
parent/label tuples, order matrices and integer bit masks.
"""
from itertools import permutations

import networkx as nx
import numpy as np
from numba import njit


def ancestors(parent, x):
    out = set()
    while parent[x] >= 0:
        x = parent[x]
        out.add(x)
    return out


def _below_or_equal(parent):
    n = len(parent)
    return [[s == t or s in ancestors(parent, t) for t in range(n)] for s in range(n)]


def morphisms(G, F, limit=None):
    """All label-preserving maps G -> F that are monotone on parent/child pairs.

    Monotone on covering pairs implies monotone everywhere by transitivity.
    """
    le = _below_or_equal(F.parent)
    cand = [[t for t in range(F.n) if F.label[t] == G.label[g]] for g in range(G.n)]
    # parents first so every node's parent is assigned before it
    order = sorted(range(G.n), key=lambda g: len(ancestors(G.parent, g)))
    image = [None] * G.n
    found = []

    def rec(i):
        if limit is not None and len(found) >= limit:
            return
        if i == len(order):
            found.append(tuple(image))
            return
        g = order[i]
        p = G.parent[g]
        for t in cand[g]:
            if p >= 0 and not le[image[p]][t]:
                continue
            image[g] = t
            rec(i + 1)
        image[g] = None

    rec(0)
    return found


def leq(G, F):
    return bool(morphisms(G, F, limit=1))


def equiv(G, F):
    return leq(G, F) and leq(F, G)


def has_shrinking_endomorphism(F):
    """Some monotone label-preserving self-map of F misses a node.

    Its image, as an induced suborder, is a smaller forest equivalent to F;
    conversely maps F -> G -> F compose to such an endomorphism whenever a
    smaller equivalent G exists.
    """
    le = _below_or_equal(F.parent)
    cand = [[t for t in range(F.n) if F.label[t] == F.label[g]] for g in range(F.n)]
    order = sorted(range(F.n), key=lambda g: len(ancestors(F.parent, g)))
    image = [None] * F.n

    def rec(i):
        if i == len(order):
            return len(set(image)) < F.n
        g = order[i]
        p = F.parent[g]
        for t in cand[g]:
            if p >= 0 and not le[image[p]][t]:
                continue
            image[g] = t
            if rec(i + 1):
                return True
        image[g] = None
        return False

    return rec(0)


def is_minimal(F):
    return not has_shrinking_endomorphism(F)


def is_minimal_literal(F, smaller):
    """Definition verbatim: no forest in ``smaller`` (all forests with fewer nodes) is equivalent."""
    return not any(equiv(G, F) for G in smaller if G.n < F.n)


# -- posets and lattices --------------------------------------------------------


def covers(order):
    order = np.asarray(order, dtype=bool)
    n = len(order)
    out = []
    for i in range(n):
        for j in range(n):
            if i != j and order[i, j]:
                if not any(order[i, m] and order[m, j] for m in range(n) if m not in (i, j)):
                    out.append((i, j))
    return out


def hasse_isomorphic(order1, order2):
    """networkx VF2 on the Hasse diagrams."""
    g1 = nx.DiGraph(covers(order1))
    g1.add_nodes_from(range(len(order1)))
    g2 = nx.DiGraph(covers(order2))
    g2.add_nodes_from(range(len(order2)))
    return nx.is_isomorphic(g1, g2)


def poset_isomorphic(leq1, leq2):
    leq1 = np.asarray(leq1, dtype=bool)
    leq2 = np.asarray(leq2, dtype=bool)
    if leq1.shape != leq2.shape:
        return False
    for perm in permutations(range(len(leq1))):
        p = np.array(perm)
        if (leq1 == leq2[np.ix_(p, p)]).all():
            return True
    return False


def lub(order, i, j):
    order = np.asarray(order, dtype=bool)
    ub = [u for u in range(len(order)) if order[i, u] and order[j, u]]
    least = [u for u in ub if all(order[u, v] for v in ub)]
    return least[0] if least else None


def distributive_triples_fail(order):
    """Triples x <= y v z with no y' <= y, z' <= z joining to x (bottom allowed implicitly)."""
    order = np.asarray(order, dtype=bool)
    n = len(order)
    J = [[lub(order, i, j) for j in range(n)] for i in range(n)]
    bad = []
    for y in range(n):
        for z in range(n):
            top = J[y][z]
            for x in range(n):
                if not order[x, top]:
                    continue
                if order[x, y] or order[x, z]:
                    continue
                if not any(
                    J[a][b] == x for a in range(n) if order[a, y] for b in range(n) if order[b, z]
                ):
                    bad.append((x, y, z))
    return bad


# -- sigma^0_2 uniformization -----------------------------------------------------


def cantor(m, n):
    return (m + n) * (m + n + 1) // 2 + n


def minimal_witness_uniformization(B, C, rows, width):
    """For each x pick the row n of the witness (m, n) with least Cantor code."""
    D = 0
    for x in range(width):
        best = None
        for m in range(len(B)):
            for n in range(rows):
                bit = 1 << (n * width + x)
                if B[m] & bit and not C[m] & bit:
                    code = cantor(m, n)
                    if best is None or code < best[0]:
                        best = (code, n)
        if best is not None:
            D |= 1 << (best[1] * width + x)
    return D


def uniformization_ok(A, D, rows, width):
    if D & ~A:
        return False
    rowmask = (1 << width) - 1
    proj_a = proj_d = 0
    seen = 0
    for n in range(rows):
        sa = (A >> (n * width)) & rowmask
        sd = (D >> (n * width)) & rowmask
        if sd & seen:
            return False
        seen |= sd
        proj_a |= sa
        proj_d |= sd
    return proj_a == proj_d


# -- batched postcondition check (independent of the uniformization kernel) ------


@njit(cache=True)
def uniformization_violations(B, C, D, rows, width):
    """Count instances where D fails subset, equal projection or functionality."""
    row = (np.int64(1) << width) - 1
    bad = 0
    for b in range(B.shape[0]):
        A = np.int64(0)
        for m in range(B.shape[1]):
            A |= B[b, m] & ~C[b, m]
        d = D[b]
        ok = (d & ~A) == 0
        pa = np.int64(0)
        pd = np.int64(0)
        for n in range(rows):
            sd = (d >> (n * width)) & row
            if sd & pd:
                ok = False
            pd |= sd
            pa |= (A >> (n * width)) & row
        if pa != pd:
            ok = False
        if not ok:
            bad += 1
    return bad
