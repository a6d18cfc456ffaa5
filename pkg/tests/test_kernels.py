from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pairwise_gini
from visaudit import kernels

diptest = pytest.importorskip("diptest")


def test_backend_flag_reported():
    assert kernels.BACKEND in ("numba", "numpy")


def test_log_bin_index_matches_definition(backend, rng):
    for b in (1, 3, 10):
        v = np.exp(rng.normal(0, 5, 5000))
        k = backend.log_bin_index(v, b)
        lo = backend.bin_edge(k, b)
        hi = backend.bin_edge(k + 1, b)
        assert np.all(lo <= v) and np.all(v < hi)


def test_log_bin_index_exact_edges(backend):
    for b in (1, 2, 7, 10):
        k = np.arange(-40, 41)
        edges = 10.0 ** (k / b)
        assert np.array_equal(backend.log_bin_index(edges, b), k)
        below = np.nextafter(edges, 0)
        assert np.array_equal(backend.log_bin_index(below, b), k - 1)


def test_backends_agree_on_bins(rng):
    from conftest import BACKENDS

    if len(BACKENDS) < 2:
        pytest.skip("numba unavailable")
    v = np.concatenate([np.exp(rng.normal(0, 8, 20000)), 10.0 ** (np.arange(-200, 200) / 3)])
    for b in (1, 3, 10):
        a = BACKENDS["numpy"].log_bin_index(v, b)
        c = BACKENDS["numba"].log_bin_index(v, b)
        assert np.array_equal(a, c)


def test_segment_gini_matches_pairwise(backend, rng):
    sizes = rng.integers(1, 30, 200)
    counts = rng.integers(1, 100, sizes.sum())
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    g = backend.segment_gini(counts, starts)
    for s, n, got in zip(starts, sizes, g):
        assert got == pytest.approx(pairwise_gini(counts[s : s + n]), abs=1e-12)


def test_segment_gini_empty(backend):
    assert backend.segment_gini(np.zeros(0), np.zeros(0, dtype=np.int64)).shape == (0,)


@given(st.lists(st.integers(1, 1000), min_size=1, max_size=40))
def test_segment_gini_property_single(xs):
    from conftest import BACKENDS

    for mod in BACKENDS.values():
        g = mod.segment_gini(np.array(xs), np.zeros(1, dtype=np.int64))[0]
        assert g == pytest.approx(pairwise_gini(xs), abs=1e-12)


@pytest.mark.parametrize("n", [4, 5, 7, 10, 33, 100, 1000])
def test_dip_matches_reference_package(backend, n):
    # independent oracle: the diptest package (C++ implementation)
    rng = np.random.default_rng(n)
    for dist in ("uniform", "normal", "bimodal"):
        if dist == "uniform":
            x = rng.random(n)
        elif dist == "normal":
            x = rng.normal(size=n)
        else:
            x = np.concatenate([rng.normal(-2, 0.5, n // 2), rng.normal(2, 0.5, n - n // 2)])
        x = np.sort(x)
        assert backend.dip_sorted(x) == pytest.approx(diptest.dipstat(x), abs=1e-12)


def test_dip_bounds(backend, rng):
    for n in (4, 10, 100):
        x = np.sort(rng.random(n))
        d = backend.dip_sorted(x)
        assert 1.0 / (2 * n) - 1e-15 <= d <= 0.25


def test_dip_null_batch_reproducible(backend):
    seeds = [(7, r) for r in range(5)]
    a = backend.dip_null_batch(50, seeds)
    b = backend.dip_null_batch(50, list(reversed(seeds)))[::-1]
    assert np.array_equal(a, b)


def test_dip_backends_agree(rng):
    from conftest import BACKENDS

    if len(BACKENDS) < 2:
        pytest.skip("numba unavailable")
    x = np.sort(rng.normal(size=500))
    assert BACKENDS["numpy"].dip_sorted(x) == BACKENDS["numba"].dip_sorted(x)
    seeds = [(1, r) for r in range(20)]
    assert np.array_equal(BACKENDS["numpy"].dip_null_batch(100, seeds), BACKENDS["numba"].dip_null_batch(100, seeds))


def test_bin_edge_is_decade_grid():
    assert kernels.bin_edge(10, 10) == 10.0
    assert math.isclose(kernels.bin_edge(5, 10), 10**0.5)
