from __future__ import annotations

import json

import numpy as np
import pytest

from visaudit import pipeline
from visaudit.errors import DataError
from visaudit.ingest import filter_valid
from visaudit.simulate import (
    URL_KINDS,
    FeaturedAccount,
    SimConfig,
    SuppressionSpec,
    config_from_mapping,
    generate,
    spec_from_mapping,
    verify_recovery,
)

SMALL = dict(n_users=400, n_posts=4000)


def small_cfg(**kw):
    return SimConfig(n_influencers=20, **kw)


def test_deterministic():
    a = generate(SuppressionSpec(seed=9), config=small_cfg(), **SMALL)
    b = generate(SuppressionSpec(seed=9), config=small_cfg(), **SMALL)
    assert list(a.posts()) == list(b.posts())
    assert a.ground_truth == b.ground_truth
    c = generate(SuppressionSpec(seed=10), config=small_cfg(), **SMALL)
    assert not np.array_equal(a.views, c.views)


def test_all_records_pass_filter():
    ds = generate(SuppressionSpec(url_penalty=0.2, seed=1), config=small_cfg(), **SMALL)
    posts = list(ds.posts())
    kept, rep = filter_valid(posts)
    assert rep.kept == len(posts) == rep.n_input
    assert len(posts) == ds.ground_truth["n_posts"] + ds.ground_truth["n_interactions"]


def test_counts_and_ids():
    ds = generate(SuppressionSpec(seed=2), config=small_cfg(), **SMALL)
    assert ds.n_posts == 4000
    assert len(ds.accounts) == 420
    assert all(a.follower_count >= 1 for a in ds.accounts)
    assert set(ds.url_kind.tolist()) <= set(range(-1, len(URL_KINDS)))
    gt = ds.ground_truth
    assert gt["accounts"]["u000000"]["side"] == "side_a"
    assert gt["accounts"]["u000001"]["side"] == "side_b"


def test_infeasible_and_invalid_specs():
    with pytest.raises(DataError, match="infeasible"):
        generate(SuppressionSpec(), config=small_cfg(engagement_rates=(0.2, 0.1, 0.1, 0.05)), **SMALL)
    with pytest.raises(DataError):
        generate(SuppressionSpec(url_penalty=-1), **SMALL)
    with pytest.raises(DataError):
        generate(SuppressionSpec(community_coupling=2), **SMALL)
    with pytest.raises(DataError):
        generate(SuppressionSpec(), n_users=1, n_posts=10)
    with pytest.raises(DataError):
        generate(SuppressionSpec(), config=small_cfg(featured={"x": FeaturedAccount(0)}), **SMALL)


def test_url_penalty_lowers_url_views():
    ds = generate(SuppressionSpec(url_penalty=0.125, seed=4), config=small_cfg(), n_users=2000, n_posts=20000)
    f = np.array([a.follower_count for a in ds.accounts])[ds.post_author]
    p = ds.views / f
    ratio = np.median(p[ds.url_kind < 0]) / np.median(p[ds.url_kind >= 0])
    assert 6.5 <= ratio <= 9.5


def test_featured_and_throttle():
    cfg = small_cfg(featured={"hot": FeaturedAccount(10**6, 200), "cold": FeaturedAccount(10**6, 200)})
    ds = generate(SuppressionSpec(account_throttle={"cold": 0.1}, seed=3), config=cfg, **SMALL)
    ids = ds.account_ids()
    hot, cold = ids.index("hot"), ids.index("cold")
    assert (ds.post_author == hot).sum() == 200
    ratio = np.median(ds.views[ds.post_author == hot]) / np.median(ds.views[ds.post_author == cold])
    assert 6 < ratio < 15
    assert ds.ground_truth["accounts"]["cold"]["throttle"] == 0.1


def test_mapping_helpers():
    s = spec_from_mapping({"url_penalty": 0.5, "account_throttle": {"a": 2}, "seed": 4})
    assert s.url_penalty == 0.5 and s.account_throttle == {"a": 2.0} and s.seed == 4
    c = config_from_mapping({"n_influencers": 10, "url_mix": [0.25, 0.25, 0.25, 0.25], "featured": {"x": {"followers": 5}}})
    assert c.n_influencers == 10 and c.url_mix == (0.25,) * 4 and c.featured["x"].followers == 5
    with pytest.raises(DataError):
        config_from_mapping({"nonsense": 1})


def _audit_dir(tmp_path, spec, n_users, n_posts, cfg):
    ds = generate(spec, n_users, n_posts, cfg)
    ds.write(tmp_path)
    data = pipeline.load_dataset(pipeline.DatasetPaths.from_dir(tmp_path))
    acfg = pipeline.AuditConfig(n_influencers=cfg.n_influencers, bootstrap_reps=200)
    ideo = pipeline.ideology_audit(data, acfg)
    return ds, {"ideology": ideo, "network": pipeline.network_audit(data, acfg, ideo)}


@pytest.mark.slow
def test_coupling_detected(tmp_path):
    spec = SuppressionSpec(community_coupling=1.0, seed=6)
    ds, audit = _audit_dir(tmp_path, spec, 3000, 60000, SimConfig(n_influencers=40))
    assert audit["network"].any_coupled
    checks = {c.name: c for c in verify_recovery(ds, audit)}
    assert checks["network_coupling"].passed
    assert checks["ideology_side_accuracy"].passed


def test_write_layout(tmp_path):
    ds = generate(SuppressionSpec(seed=1), config=small_cfg(), **SMALL)
    paths = ds.write(tmp_path, "csv")
    assert {p.name for p in paths.values()} == {
        "posts.csv", "accounts.csv", "labels.csv", "anchors.csv", "themes.csv", "ground_truth.json",
    }
    gt = json.loads(paths["ground_truth"].read_text())
    assert gt["spec"]["seed"] == 1
    assert len(ds.anchors()) > 0
