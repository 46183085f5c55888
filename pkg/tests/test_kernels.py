import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given

from conftest import forest_pairs
from totalrep import kernels
from totalrep._accel import BACKEND, HAVE_NUMBA
from totalrep.hierarchy import pair_order


def _tables(fn, G, F):
    return fn(*G.arrays, *F.arrays)


class TestLeqTables:
    @given(forest_pairs(8))
    def test_paths_agree(self, pair):
        G, F = pair
        ref = _tables(kernels._leq_tables_py, G, F)
        for fn in (kernels.leq_tables_numpy, kernels.leq_tables_numba):
            got = _tables(fn, G, F)
            assert np.array_equal(got[0], ref[0]) and np.array_equal(got[1], ref[1])

    def test_upper_closure(self):
        par = np.array([-1, 0, 1, 0, -1])
        post = np.array([2, 1, 3, 0, 4])
        le = kernels.upper_closure(par, post)
        assert le[0, 2] and le[1, 2] and not le[2, 0] and not le[3, 2] and le[4, 4]


class TestUniformizeBatch:
    def test_paths_agree(self, rng):
        rows, width, M = 3, 4, 4
        order = pair_order(M, rows)
        pm = np.array([m for m, _ in order], dtype=np.int64)
        pn = np.array([n for _, n in order], dtype=np.int64)
        B = rng.integers(0, 1 << 12, size=(2000, M))
        C = rng.integers(0, 1 << 12, size=(2000, M))
        ref = kernels._uniformize_batch_py(B, C, pm, pn, np.int64(width))
        assert np.array_equal(kernels.uniformize_batch_numpy(B, C, pm, pn, np.int64(width)), ref)
        assert np.array_equal(kernels.uniformize_batch_numba(B, C, pm, pn, np.int64(width)), ref)


class TestBackendFlag:
    def test_default_backend(self):
        assert BACKEND == ("numba" if HAVE_NUMBA else "numpy")

    @pytest.mark.parametrize("value, want", [("1", "numpy"), ("0", "numba" if HAVE_NUMBA else "numpy")])
    def test_env_flag(self, value, want):
        env = dict(os.environ, TOTALREP_NO_NUMBA=value)
        out = subprocess.run(
            [sys.executable, "-c", "import totalrep; print(totalrep.BACKEND)"],
            env=env, capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == want
