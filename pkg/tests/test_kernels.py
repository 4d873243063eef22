import numpy as np
import pytest

from lamsn import _kernels

BACKENDS = [_kernels.heights_numpy, _kernels.heights_python]
if _kernels.BACKEND == "numba":
    BACKENDS.append(_kernels.heights_numba)


def arrays(edges):
    if not edges:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    a = np.array(edges, dtype=np.int64)
    return a[:, 0], a[:, 1]


@pytest.mark.parametrize("fn", BACKENDS)
def test_chain_and_diamond(fn):
    assert list(fn(3, *arrays([(0, 1), (1, 2)]))) == [2, 1, 0]
    assert list(fn(4, *arrays([(0, 1), (0, 2), (1, 3), (2, 1)]))) == [3, 1, 2, 0]


@pytest.mark.parametrize("fn", BACKENDS)
def test_cycles(fn):
    assert list(fn(1, *arrays([(0, 0)]))) == [-1]
    # 0 -> 1 <-> 2, 0 -> 3
    assert list(fn(4, *arrays([(0, 1), (1, 2), (2, 1), (0, 3)]))) == [-1, -1, -1, 0]


@pytest.mark.parametrize("fn", BACKENDS)
def test_empty(fn):
    assert list(fn(0, *arrays([]))) == []
    assert list(fn(2, *arrays([]))) == [0, 0]


def test_backends_agree_on_random_graphs():
    rng = np.random.default_rng(7)
    for trial in range(40):
        n = int(rng.integers(1, 60))
        m = int(rng.integers(0, 3 * n))
        src = rng.integers(0, n, m)
        dst = rng.integers(0, n, m)
        if trial % 2:
            src, dst = np.minimum(src, dst), np.maximum(src, dst)
            keep = src != dst
            src, dst = src[keep], dst[keep]
        ref = _kernels.heights_python(n, src, dst)
        for fn in BACKENDS:
            assert np.array_equal(fn(n, src, dst), ref)


def test_dispatcher_matches_backend():
    src, dst = arrays([(0, 1)])
    assert list(_kernels.heights(2, src, dst)) == [1, 0]
    assert _kernels.BACKEND in ("numba", "numpy")
