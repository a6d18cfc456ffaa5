from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from visaudit.errors import DataError, EmptyInputError
from visaudit.stats import (
    P_FLOOR,
    dip_statistic,
    dip_test,
    dominates,
    format_pvalue,
    mann_whitney,
    pearson,
    pearson_pvalue,
    u_null_counts,
)


def brute_force_p(a, b, alternative):
    """Enumerate every split of the pooled sample into groups of |a| and |b|."""
    pooled = list(a) + list(b)
    n1 = len(a)
    u_obs = sum(x > y for x in a for y in b)
    ge = le = total = 0
    for idx in itertools.combinations(range(len(pooled)), n1):
        s = set(idx)
        xa = [pooled[i] for i in idx]
        xb = [pooled[i] for i in range(len(pooled)) if i not in s]
        u = sum(x > y for x in xa for y in xb)
        ge += u >= u_obs
        le += u <= u_obs
        total += 1
    if alternative == "greater":
        return ge / total
    if alternative == "less":
        return le / total
    return min(1.0, 2 * min(ge, le) / total)


def distinct_pair(max_n):
    return st.integers(1, max_n).flatmap(
        lambda n1: st.integers(1, max_n).flatmap(
            lambda n2: st.lists(st.integers(-10**6, 10**6), min_size=n1 + n2, max_size=n1 + n2, unique=True).map(
                lambda v: (v[:n1], v[n1:])
            )
        )
    )


def test_spec_example():
    r = mann_whitney([4, 5, 6], [1, 2, 3], "greater")
    assert r.u_statistic == 9 and r.method == "exact"
    assert r.p_value == pytest.approx(0.05, abs=1e-15)
    ok, res = dominates([4, 5, 6], [1, 2, 3], alpha=0.1)
    assert ok and res.p_value == pytest.approx(0.05)


def test_identical_samples():
    r = mann_whitney([1, 2, 3, 4], [1, 2, 3, 4])
    assert r.u_statistic == 8
    assert r.p_value == 1.0


def test_null_counts_total():
    for n1, n2 in [(1, 1), (3, 4), (6, 6), (8, 8)]:
        c = u_null_counts(n1, n2)
        assert sum(c) == comb(n1 + n2, n1)
        assert c == c[::-1]


@pytest.mark.parametrize("alternative", ["greater", "less", "two_sided"])
@given(pair=distinct_pair(6))
def test_exact_matches_enumeration(pair, alternative):
    a, b = pair
    r = mann_whitney(a, b, alternative)
    assert r.method == "exact"
    assert r.p_value == pytest.approx(max(P_FLOOR, brute_force_p(a, b, alternative)), abs=1e-12)


@given(st.lists(st.integers(0, 20), min_size=1, max_size=30), st.lists(st.integers(0, 20), min_size=1, max_size=30))
def test_antisymmetry_and_bounds(a, b):
    ab = mann_whitney(a, b)
    ba = mann_whitney(b, a)
    assert ab.u_statistic + ba.u_statistic == pytest.approx(len(a) * len(b))
    assert 0 <= ab.u_statistic <= len(a) * len(b)
    assert 0 < ab.p_value <= 1
    # U counts pairs a > b with ties as one half
    direct = sum((x > y) + 0.5 * (x == y) for x in a for y in b)
    assert ab.u_statistic == pytest.approx(direct)


@given(
    st.lists(st.floats(-100, 100), min_size=1, max_size=20),
    st.lists(st.floats(-100, 100), min_size=1, max_size=20),
    st.floats(0.001, 50),
)
def test_shift_monotonicity(a, b, c):
    before = mann_whitney(b, a).u_statistic
    after = mann_whitney([x + c for x in b], a).u_statistic
    assert after >= before


@pytest.mark.parametrize("alternative", ["greater", "less", "two_sided"])
def test_normal_path_matches_scipy(rng, alternative):
    a = rng.integers(0, 30, 400)  # heavy ties
    b = rng.integers(2, 32, 350)
    r = mann_whitney(a, b, alternative)
    ref = sps.mannwhitneyu(a, b, alternative=alternative.replace("_", "-"), method="asymptotic", use_continuity=True)
    assert r.method == "normal"
    assert r.u_statistic == ref.statistic
    assert r.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_shift_fixture_direction(rng):
    base = rng.lognormal(-3, 1, 10_000)
    shifted = rng.lognormal(-3, 1, 10_000) * 8
    assert mann_whitney(shifted, base, "greater").p_value < 1e-10
    assert mann_whitney(base, shifted, "greater").p_value > 0.5


def test_p_floor_and_formatting():
    r = mann_whitney(np.arange(1000) + 5000, np.arange(1000), "greater")
    assert r.p_value == P_FLOOR > 0
    assert format_pvalue(r.p_value) == "< 2.2e-16"
    assert format_pvalue(0.0123) == "0.0123"


def test_mwu_errors():
    with pytest.raises(EmptyInputError):
        mann_whitney([], [1])
    with pytest.raises(ValueError):
        mann_whitney([1], [2], "bigger")


def test_dip_uniform_not_rejected():
    x = np.random.default_rng(11).random(1000)
    r = dip_test(x, 500, rng_seed=1)
    assert r.p_value > 0.1
    assert 0 <= r.dip_statistic <= 0.25


def test_dip_bimodal_rejected():
    rng = np.random.default_rng(5)
    x = np.concatenate([np.full(500, -1.0), np.full(500, 1.0)]) + rng.normal(0, 1e-3, 1000)
    r = dip_test(x, 500)
    assert r.dip_statistic > 0.2
    assert r.p_value < 0.01
    assert r.p_value == pytest.approx(1 / 501)


def test_dip_reproducible():
    x = np.random.default_rng(2).normal(size=200)
    assert dip_test(x, 100, 7) == dip_test(x, 100, 7)


@given(
    st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=60, unique=True),
    st.floats(0.01, 100),
    st.floats(-100, 100),
)
def test_dip_affine_invariance(xs, scale, shift):
    # invariance holds for affine maps and reflection, not arbitrary monotone maps
    x = np.asarray(xs)
    d = dip_statistic(x)
    assert dip_statistic(scale * x + shift) == pytest.approx(d, abs=1e-9)
    assert dip_statistic(-x) == pytest.approx(d, abs=1e-9)


def test_dip_too_small():
    with pytest.raises(DataError):
        dip_statistic([1, 2, 3])


def test_pearson_examples(rng):
    x = rng.normal(size=50)
    assert pearson(x, 2 * x + 1) == pytest.approx(1.0)
    assert pearson(x, -x) == pytest.approx(-1.0)
    with pytest.raises(DataError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(DataError):
        pearson([1], [2])
    with pytest.raises(DataError):
        pearson([1, 2], [1, 2, 3])


def test_pearson_independent_large(rng):
    assert abs(pearson(rng.normal(size=100_000), rng.normal(size=100_000))) < 0.05


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 100), st.floats(-50, 50))
def test_pearson_affine_invariance(seed, a, c):
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=30), rng.normal(size=30)
    assert pearson(a * x + c, y) == pytest.approx(pearson(x, y), abs=1e-9)


def test_pearson_pvalue_matches_scipy(rng):
    x = rng.normal(size=40)
    y = x * 0.3 + rng.normal(size=40)
    ref = sps.pearsonr(x, y)
    r = pearson(x, y)
    assert r == pytest.approx(ref.statistic, abs=1e-12)
    assert pearson_pvalue(r, 40) == pytest.approx(ref.pvalue, rel=1e-8)
