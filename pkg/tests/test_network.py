from __future__ import annotations

import numpy as np
import pytest

from visaudit.ideology import EdgeList
from visaudit.network import (
    AccountVisibility,
    StratumCorrelation,
    account_visibility,
    neighbor_visibility,
    null_consistent,
    stratified_correlation,
)


def vis(**avgs):
    return {k: AccountVisibility(k, v, 10, "side_a", k.startswith("i")) for k, v in avgs.items()}


def test_account_visibility_min_posts():
    ids = ["a", "b"]
    author = np.array([0] * 6 + [1] * 5)
    p = np.arange(11, dtype=float)
    out = account_visibility(ids, author, p, {"a": "side_b"}, ["b"], min_posts=6)
    assert out["a"].avg_pscore == pytest.approx(2.5) and out["a"].stance == "side_b"
    assert out["b"].avg_pscore is None and out["b"].n_posts == 5 and out["b"].is_influencer


def test_neighbor_mean_distinct_in_neighbours():
    v = vis(a=1.0, b=3.0, c=5.0, d=None)
    e = EdgeList(["b", "b", "c", "d", "a"], ["a", "a", "a", "a", "a"])
    (pair,) = neighbor_visibility(e, v)
    assert pair.account_id == "a"
    assert pair.neighbor_mean_pscore == pytest.approx(4.0)  # b once, c once, d undefined, self-loop ignored
    assert pair.n_neighbors == 2
    (w,) = neighbor_visibility(e, v, weighted=True)
    assert w.neighbor_mean_pscore == pytest.approx((3 + 3 + 5) / 3)
    out = {p.account_id: p for p in neighbor_visibility(e, v, direction="out")}
    assert set(out) == {"b", "c"} and out["b"].neighbor_mean_pscore == 1.0
    with pytest.raises(ValueError):
        neighbor_visibility(e, v, direction="both")


def test_account_without_neighbours_absent():
    assert neighbor_visibility(EdgeList(["x"], ["y"]), vis(a=1.0)) == []


def test_stratified_correlation_coupled(rng):
    own = rng.lognormal(0, 1, 500)
    v = {f"a{i}": AccountVisibility(f"a{i}", float(own[i]), 10, "side_a", False) for i in range(500)}
    e = EdgeList()
    for i in range(500):
        # neighbour with the same visibility, so the mean tracks the account
        j = f"n{i}"
        v[j] = AccountVisibility(j, float(own[i] * rng.uniform(0.9, 1.1)), 10, "side_b", False)
        e.append(j, f"a{i}")
    strata = {(s.stance, s.is_influencer): s for s in stratified_correlation(neighbor_visibility(e, v))}
    s = strata[("side_a", False)]
    assert s.n == 500 and s.r > 0.9 and s.coupled
    assert not null_consistent(s)


def test_independent_pairs_null(rng):
    n = 100_000
    own = rng.lognormal(0, 1, n)
    nb = rng.lognormal(0, 1, n)
    v = {}
    e = EdgeList()
    for i in range(n):
        v[f"a{i}"] = AccountVisibility(f"a{i}", float(own[i]), 10, "side_a", False)
        v[f"n{i}"] = AccountVisibility(f"n{i}", float(nb[i]), 10, "unknown", False)
        e.append(f"n{i}", f"a{i}")
    strata = stratified_correlation(neighbor_visibility(e, v))
    (s,) = [x for x in strata if x.stance == "side_a"]
    assert abs(s.r) < 0.05 and not s.coupled and null_consistent(s)


def test_degenerate_strata():
    v = vis(a=1.0, b=2.0, c=2.0)
    e = EdgeList(["b"], ["a"])
    (s,) = stratified_correlation(neighbor_visibility(e, v))
    assert not s.defined and s.reason == "fewer than 2 pairs"
    # zero variance
    e2 = EdgeList(["b", "c"], ["a", "b"])
    v2 = vis(a=1.0, b=1.0, c=2.0)
    (s2,) = stratified_correlation(neighbor_visibility(e2, v2))
    assert not s2.defined and "zero-variance" in s2.reason
    assert null_consistent(s2)


def test_null_consistent_rules():
    big = dict(stance="side_a", is_influencer=False, defined=True, reason=None, coupled=False)
    assert null_consistent(StratumCorrelation(n=100_000, r=0.03, p_value=1e-20, **big))
    assert not null_consistent(StratumCorrelation(n=100_000, r=0.06, p_value=1e-60, **big))
    assert null_consistent(StratumCorrelation(n=200, r=0.1, p_value=0.16, **big))
    assert not null_consistent(StratumCorrelation(n=200, r=0.3, p_value=1e-5, **big))
