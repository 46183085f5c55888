"""Hot numeric loops, each with a numba and a pure-numpy implementation.

Forests enter as flat arrays: ``par[i]`` is the parent of node ``i`` (-1 for a
root), ``lab[i]`` its label and ``post`` lists the nodes children-first.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# h-preorder tables
# ---------------------------------------------------------------------------
#
# at[g, t]: the subtree of G rooted at g maps into F with g sent to t.
# up[g, t]: the subtree rooted at g maps somewhere into the upper cone of t.
#
# at[g, t] = lab_G[g] == lab_F[t] and up[c, t] for every child c of g
# up[g, t] = at[g, t] or up[g, t'] for some child t' of t


def _leq_tables_py(gpar, glab, gpost, fpar, flab, fpost):
    ng = gpar.shape[0]
    nf = fpar.shape[0]
    at = np.empty((ng, nf), np.bool_)
    for g in range(ng):
        for t in range(nf):
            at[g, t] = glab[g] == flab[t]
    up = np.zeros((ng, nf), np.bool_)
    for gi in range(ng):
        g = gpost[gi]
        for ti in range(nf):
            t = fpost[ti]
            if at[g, t]:
                up[g, t] = True
            if up[g, t] and fpar[t] >= 0:
                up[g, fpar[t]] = True
        p = gpar[g]
        if p >= 0:
            for t in range(nf):
                if not up[g, t]:
                    at[p, t] = False
    return at, up


leq_tables_numba = njit(_leq_tables_py)


def upper_closure(par, post):
    """Boolean matrix ``le[s, t]`` = node s lies below or equals node t."""
    n = par.shape[0]
    le = np.eye(n, dtype=bool)
    cur = np.arange(n)
    while True:
        cur = np.where(cur >= 0, par[np.maximum(cur, 0)], -1)
        live = cur >= 0
        if not live.any():
            return le
        le[cur[live], np.nonzero(live)[0]] = True


def leq_tables_numpy(gpar, glab, gpost, fpar, flab, fpost):
    at = glab[:, None] == flab[None, :]
    up = np.zeros_like(at)
    le = upper_closure(fpar, fpost)
    for g in gpost:
        up[g] = (le & at[g][None, :]).any(axis=1)
        p = gpar[g]
        if p >= 0:
            at[p] &= up[g]
    return at, up


leq_tables = leq_tables_numba if USE_NUMBA else leq_tables_numpy


# ---------------------------------------------------------------------------
# Batched Sigma^0_2 uniformization over bitmask universes
# ---------------------------------------------------------------------------
#
# A presentation is M pairs (B_m, C_m) of subsets of [0, N) x X, each an int64
# mask with bit n*width + x for the point (n, x). Pairs (m, n) are visited in
# the order of the Cantor code; a point x joins row n of D at the first pair
# whose section B_m(n) \ C_m(n) contains it.


def _uniformize_batch_py(B, C, pair_m, pair_n, width):
    batch = B.shape[0]
    out = np.zeros(batch, np.int64)
    row = (np.int64(1) << width) - 1
    for b in range(batch):
        covered = np.int64(0)
        d = np.int64(0)
        for p in range(pair_m.shape[0]):
            m = pair_m[p]
            shift = pair_n[p] * width
            sec = ((B[b, m] & ~C[b, m]) >> shift) & row
            d |= (sec & ~covered) << shift
            covered |= sec
        out[b] = d
    return out


uniformize_batch_numba = njit(_uniformize_batch_py)


def uniformize_batch_numpy(B, C, pair_m, pair_n, width):
    row = (np.int64(1) << width) - 1
    covered = np.zeros(B.shape[0], np.int64)
    out = np.zeros(B.shape[0], np.int64)
    for m, n in zip(pair_m, pair_n):
        shift = np.int64(n * width)
        sec = ((B[:, m] & ~C[:, m]) >> shift) & row
        out |= (sec & ~covered) << shift
        covered |= sec
    return out


uniformize_batch = uniformize_batch_numba if USE_NUMBA else uniformize_batch_numpy
