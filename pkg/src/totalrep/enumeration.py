"""Exhaustive and random generation of small forests and posets."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .forest import LabeledForest, LabeledPoset


@lru_cache(maxsize=None)
def tree_terms(n: int, k: int) -> tuple:
    """Canonical terms of all k-labeled trees with n nodes, up to isomorphism."""
    if n < 1:
        return ()
    return tuple(sorted((lab, f) for lab in range(k) for f in forest_terms(n - 1, k)))


@lru_cache(maxsize=None)
def forest_terms(n: int, k: int) -> tuple:
    """Canonical terms of all k-labeled forests with n nodes (n=0 gives the empty term)."""
    out = []

    def rec(remaining, lo, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for size in range(1, remaining + 1):
            for t in tree_terms(size, k):
                if lo is not None and t < lo:
                    continue
                acc.append(t)
                rec(remaining - size, t, acc)
                acc.pop()

    rec(n, None, [])
    return tuple(sorted(out))


def all_forests(max_size: int, k: int, min_size: int = 1):
    for n in range(min_size, max_size + 1):
        for term in forest_terms(n, k):
            yield LabeledForest.from_term(term, k)


def random_forest(rng: np.random.Generator, n: int, k: int, root_prob: float = 0.25) -> LabeledForest:
    """Random recursive forest: node i attaches to a uniform earlier node or becomes a root."""
    parent = [-1]
    for i in range(1, n):
        parent.append(-1 if rng.random() < root_prob else int(rng.integers(0, i)))
    labels = rng.integers(0, k, size=n)
    return LabeledForest(k, tuple(parent), tuple(int(x) for x in labels))


def _poset_key(n, pairs):
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted((perm[a], perm[b]) for a, b in pairs))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def poset_relations(n: int) -> tuple:
    """Strict orders on ``range(n)`` up to isomorphism, as sorted pair tuples.

    Every finite poset has a linear extension, so it suffices to search
    relations contained in the natural order of indices.
    """
    slots = list(combinations(range(n), 2))
    seen = set()
    for bits in range(1 << len(slots)):
        pairs = {slots[i] for i in range(len(slots)) if bits >> i & 1}
        if any((a, c) not in pairs for a, b in pairs for b2, c in pairs if b == b2):
            continue
        seen.add(_poset_key(n, pairs))
    return tuple(sorted(seen, key=lambda p: (len(p), p)))


def all_posets(n: int) -> list:
    """All n-element posets up to isomorphism, labeled bijectively by index."""
    return [LabeledPoset.from_relation(n, range(n), rel) for rel in poset_relations(n)]


def random_word(rng: np.random.Generator, max_len: int = 12, max_symbol: int = 4) -> tuple:
    """A short word whose symbols are mostly small, with occasional large ones."""
    n = int(rng.integers(0, max_len + 1))
    word = rng.integers(0, max_symbol + 1, size=n)
    big = rng.random(n) < 0.1
    word[big] = rng.integers(max_symbol + 1, 50, size=int(big.sum()))
    return tuple(int(x) for x in word)
