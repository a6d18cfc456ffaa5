from __future__ import annotations

import numpy as np
import pytest
from conftest import pairwise_gini
from hypothesis import given
from hypothesis import strategies as st

from visaudit.errors import DataError, EmptyInputError
from visaudit.metrics import disparity_histogram, gini, group_median, log_bins, pscore, pscores

counts_st = st.lists(st.integers(1, 1000), min_size=1, max_size=40)


def test_pscore_examples():
    assert pscore(100, 1000) == 0.1
    assert pscore(0, 50) == 0.0
    assert pscore(84, 1000) == pytest.approx(0.084)
    with pytest.raises(DataError):
        pscore(1, 0)
    np.testing.assert_array_equal(pscores([10, 0], [100, 5]), [0.1, 0.0])
    with pytest.raises(DataError):
        pscores([1], [0])


@given(st.integers(0, 10**9), st.integers(1, 10**9), st.integers(0, 1000))
def test_pscore_scale_equivariance(v, f, k):
    assert pscore(k * v, f) == pytest.approx(k * pscore(v, f), rel=1e-15)


def test_log_bins_examples():
    b = log_bins([1, 10, 100], 1)
    assert b.counts.tolist() == [1, 1, 1]
    np.testing.assert_allclose(b.edges, [1, 10, 100, 1000])
    same = log_bins([3.3] * 7)
    assert same.counts.tolist() == [7]
    with pytest.raises(EmptyInputError):
        log_bins([])
    with pytest.raises(DataError):
        log_bins([0.0, 1.0])


def test_log_bins_assignment_oracle(rng):
    v = rng.lognormal(-3, 2, 1000)
    b = log_bins(v, 10)
    assert b.counts.sum() == 1000
    assert b.edges[0] <= v.min() and v.max() < b.edges[-1]
    # direct assignment: each value falls in exactly one half-open interval
    direct = np.array([np.sum((v >= lo) & (v < hi)) for lo, hi in zip(b.edges[:-1], b.edges[1:])])
    np.testing.assert_array_equal(direct, b.counts)


@given(st.lists(st.floats(1e-12, 1e12), min_size=1, max_size=50), st.integers(1, 20))
def test_log_bins_partition(values, bpd):
    b = log_bins(values, bpd)
    v = np.asarray(values)
    assert b.counts.sum() == len(values)
    assert b.counts[0] > 0 and b.counts[-1] > 0
    assert b.edges[0] <= v.min() and v.max() < b.edges[-1]


def test_gini_examples():
    assert gini([5, 5, 5, 5]) == 0.0
    assert gini([1, 1, 1, 97]) == pytest.approx(0.72, abs=1e-12)
    assert gini([42]) == 0.0
    with pytest.raises(EmptyInputError):
        gini([])
    with pytest.raises(DataError):
        gini([1, 0])


def test_flooding_author_gini():
    counts = [900] + [10] * 10
    g = gini(counts)
    assert g == pytest.approx(pairwise_gini(counts), abs=1e-12)
    assert g >= 0.8


@given(counts_st)
def test_gini_matches_pairwise_oracle(xs):
    assert gini(xs) == pytest.approx(pairwise_gini(xs), abs=1e-12)


@given(counts_st, st.integers(1, 50))
def test_gini_scale_invariance(xs, k):
    assert gini([k * x for x in xs]) == pytest.approx(gini(xs), abs=1e-12)


@given(counts_st, st.integers(1, 5))
def test_gini_replication_invariance(xs, m):
    assert gini(xs * m) == pytest.approx(gini(xs), abs=1e-12)


@given(counts_st)
def test_gini_bounds(xs):
    g = gini(xs)
    assert 0.0 <= g < 1.0
    assert (g == pytest.approx(0.0, abs=1e-12)) == (len(set(xs)) == 1)


def test_group_median():
    assert group_median([0.1, 0.2, 0.3]) == pytest.approx(0.2)
    assert group_median([0.1, 0.2]) == pytest.approx(0.15)
    with pytest.raises(EmptyInputError):
        group_median([])


def test_group_median_sort_oracle(rng):
    v = rng.lognormal(0, 1, 10001)
    assert group_median(v) == np.sort(v)[5000]


def _fixture(rng, n=5000):
    p = rng.lognormal(-3, 1.5, n)
    p[rng.random(n) < 0.02] = 0.0
    author = rng.integers(0, 300, n)
    group = rng.integers(0, 3, n)
    return p, author, group


def test_disparity_histogram_structure(rng):
    p, author, group = _fixture(rng)
    out = disparity_histogram(p, author, group, 10, ["a", "b", "c"])
    assert [d.group for d in out] == ["a", "b", "c"]
    for code, d in enumerate(out):
        m = group == code
        assert d.n + d.n_zero == m.sum()
        assert d.n_zero == int((p[m] == 0).sum())
        assert d.median_pscore == np.median(p[m][p[m] > 0])
        assert d.bin_counts.sum() == d.n
        for i in np.flatnonzero(d.bin_counts):
            lo, hi = d.bin_edges[i], d.bin_edges[i + 1]
            sel = m & (p >= lo) & (p < hi)
            _, c = np.unique(author[sel], return_counts=True)
            assert d.bin_gini[i] == pytest.approx(pairwise_gini(c), abs=1e-12)
            assert d.dominant_author_share[i] == pytest.approx(c.max() / c.sum())
            assert d.bin_authors[i] == c.shape[0]
        rows = list(d.rows())
        assert set(rows[0]) >= {"category", "bin_lo", "bin_hi", "count", "gini", "dominant_author_share"}


def test_disparity_histogram_permutation_invariant(rng):
    p, author, group = _fixture(rng, 3000)
    perm = rng.permutation(p.shape[0])
    a = disparity_histogram(p, author, group, 10)
    b = disparity_histogram(p[perm], author[perm], group[perm], 10)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.bin_counts, y.bin_counts)
        np.testing.assert_array_equal(x.bin_gini, y.bin_gini)
        assert x.median_pscore == y.median_pscore


def test_single_author_and_even_split_bins():
    (d,) = disparity_histogram(np.array([0.11, 0.12, 0.13]), np.array([7, 7, 7]), np.zeros(3, int), 10)
    assert d.bin_gini[0] == 0.0 and d.dominant_author_share[0] == 1.0
    (d,) = disparity_histogram(np.array([0.11, 0.12]), np.array([1, 2]), np.zeros(2, int), 10)
    assert d.bin_gini[0] == 0.0 and d.dominant_author_share[0] == 0.5


def test_flooding_fixture_bin():
    # one author posts 90% of a bin, ten others 1% each
    p = np.full(1000, 0.05)
    author = np.concatenate([np.zeros(900, int), np.repeat(np.arange(1, 11), 10)])
    (d,) = disparity_histogram(p, author, np.zeros(1000, int), 10)
    assert d.bin_gini[0] >= 0.8
    assert d.dominant_author_share[0] == pytest.approx(0.9)


def test_group_with_only_zeros_omitted():
    out = disparity_histogram(np.array([0.0, 0.0, 0.5]), np.array([1, 2, 3]), np.array([0, 0, 1]), 10, ["z", "x"])
    assert [d.group for d in out] == ["x"]


@given(st.lists(st.floats(1e-6, 1e3), min_size=1, max_size=40), st.floats(1.01, 100))
def test_median_transfer(values, c):
    v = np.asarray(values)
    assert group_median(v * c) == pytest.approx(c * group_median(v), rel=1e-12)


def test_misaligned_inputs():
    with pytest.raises(DataError):
        disparity_histogram(np.ones(3), np.ones(2), np.ones(3))
