import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpnet import kernels
from cpnet.generate import random_game, random_net
from cpnet.kernels import _numpy

numba_impl = pytest.importorskip("cpnet.kernels._numba")


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32), st.booleans())
def test_backends_agree_on_masks(n, seed, acyclic):
    net = random_net(n, (2, 3), acyclic=acyclic, seed=seed)
    arrays = net.packed.arrays()
    np.testing.assert_array_equal(numba_impl.dominated_mask(*arrays), _numpy.dominated_mask(*arrays))
    np.testing.assert_array_equal(numba_impl.top_mask(*arrays), _numpy.top_mask(*arrays))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32), st.booleans(), st.data())
def test_backends_agree_on_bfs(n, seed, improving, data):
    net = random_net(n, (2, 3), seed=seed)
    total = net.num_outcomes
    src = data.draw(st.integers(0, total - 1))
    target = data.draw(st.integers(-1, total - 1))
    arrays = net.packed.arrays()
    p1 = np.full(total, -1, dtype=np.int64)
    p2 = np.full(total, -1, dtype=np.int64)
    c1 = numba_impl.bfs(*arrays, src, target, improving, p1)
    c2 = _numpy.bfs(*arrays, src, target, improving, p2)
    assert c1 == c2
    if target < 0:
        np.testing.assert_array_equal(p1, p2)
    else:
        assert (p1[target] == -1) == (p2[target] == -1)
        assert p1[target] == p2[target]


def test_backends_agree_on_games():
    for seed in range(30):
        g = random_game(3, (2, 3), seed=seed)
        arrays = g.packed.arrays()
        np.testing.assert_array_equal(numba_impl.top_mask(*arrays), _numpy.top_mask(*arrays))


def test_active_backend_default():
    expected = "numpy" if os.environ.get("CPNET_DISABLE_NUMBA", "") not in ("", "0") else "numba"
    assert kernels.BACKEND == expected


def test_env_flag_selects_numpy():
    code = "import cpnet.kernels as k; print(k.BACKEND, k.bfs.__module__)"
    env = dict(os.environ, CPNET_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "cpnet.kernels._numpy"]
