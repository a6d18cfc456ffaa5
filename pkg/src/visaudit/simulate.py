"""Synthetic platform datasets with planted visibility suppression.

Every post's expected views are followers x base_exposure x url_penalty (if it
links out) x account throttle x community factor; realized views are negative
binomial around that expectation and interactions are binomial thinnings of
the views, so all posts satisfy the consistency filter. Two planted
communities retweet mostly within themselves, which gives correspondence
analysis a known answer.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterator, Mapping
from dataclasses import asdict, dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .errors import DataError
from .ideology import EdgeList
from .ingest import AccountRecord, PostRecord, write_accounts, write_posts
from .labeling import BIASES, FACTUALITIES, DomainLabel, write_label_table

SIDES = ("side_a", "side_b")
URL_KINDS = ("news_outlets", "other", "other_social", "twitter")
SOCIAL_HOSTS = ("youtube.com", "facebook.com", "instagram.com", "tiktok.com", "t.me", "threads.net")
EPOCH = datetime(2023, 1, 1, tzinfo=timezone.utc)

# common words; small on purpose so they carry little idf weight
FILLER = (
    "today news people time support world country report latest update watch read think know "
    "week month year day government policy leaders power state public event market talk video "
    "thread look need want good great big new first last long right left small high low media "
    "story point issue reason group side team plan deal change plus live open show call move "
    "help keep start turn run hold bring tell ask feel seem leave put mean become play stand "
    "hear allow meet include continue set learn lead understand follow stop create speak spend "
    "grow offer remember love consider appear buy wait serve send expect build stay fall cut "
    "reach kill remain suggest raise pass sell require decide pull city region area nation "
    "history matter level order office door health person art war party result end member law "
    "car case community name president minute idea body information back parent face others"
).split()

CLAIM_SYLLABLES = ("zar", "kov", "lem", "tris", "quon", "vel", "dax", "mur", "fen", "pol", "rix", "sab", "tor", "gul")


@dataclass
class SuppressionSpec:
    url_penalty: float = 1.0
    account_throttle: dict[str, float] = field(default_factory=dict)
    community_coupling: float = 0.0
    base_exposure: float = 0.25
    seed: int = 0

    def validate(self) -> None:
        if not self.url_penalty > 0:
            raise DataError("url_penalty must be positive")
        if not self.base_exposure > 0:
            raise DataError("base_exposure must be positive")
        if any(not m > 0 for m in self.account_throttle.values()):
            raise DataError("account throttles must be positive")
        if not 0.0 <= self.community_coupling <= 1.0:
            raise DataError("community_coupling must lie in [0, 1]")


@dataclass
class FeaturedAccount:
    followers: int
    n_posts: int = 300
    side: str = "side_a"
    influencer: bool = True


@dataclass
class SimConfig:
    """Generation knobs that are not part of the suppression ground truth."""

    n_influencers: int = 100
    url_share: float = 0.5
    url_mix: tuple[float, float, float, float] = (0.35, 0.4, 0.15, 0.1)
    dispersion: float = 5.0
    follower_mu: float = 6.0
    follower_sigma: float = 2.0
    influencer_follower_shift: float = 4.0
    cross_noise: float = 0.05
    influencer_interactions: float = 6.0
    min_influencer_interactions: int = 2
    user_interactions: float = 2.0
    replies_per_user: float = 0.5
    quote_share: float = 0.2
    clusters_per_side: int = 20
    within_cluster: float = 0.8
    community_sigma: float = 1.0
    activity_sigma: float = 1.0
    engagement_rates: tuple[float, float, float, float] = (0.02, 0.002, 0.004, 0.001)
    engagement_sigma: float = 0.5
    n_news_domains: int = 40
    n_other_domains: int = 200
    n_themes: int = 5
    claims_per_theme: int = 4
    claim_rate: float = 0.3
    days: int = 90
    featured: dict[str, FeaturedAccount] = field(default_factory=dict)


@dataclass
class SimulatedDataset:
    spec: SuppressionSpec
    config: SimConfig
    accounts: list[AccountRecord]
    # original posts, columnar
    post_author: np.ndarray
    views: np.ndarray
    likes: np.ndarray
    replies: np.ndarray
    retweets: np.ndarray
    quotes: np.ndarray
    url_kind: np.ndarray  # -1 for no URL, else index into URL_KINDS
    url_domain: list[str | None]
    claim: np.ndarray  # -1 for none
    texts: list[str]
    times: np.ndarray  # seconds after EPOCH
    # interaction posts (retweets, replies, quotes)
    edges: EdgeList
    reply_edges: EdgeList
    interaction_posts: list[PostRecord]
    labels: list[DomainLabel]
    ground_truth: dict

    @property
    def n_posts(self) -> int:
        return int(self.post_author.shape[0])

    def account_ids(self) -> list[str]:
        return [a.account_id for a in self.accounts]

    def post_url(self, i: int) -> list[str]:
        k = self.url_kind[i]
        if k < 0:
            return []
        dom = self.url_domain[i]
        if URL_KINDS[k] == "twitter":
            return [f"https://{dom}/someone/status/{1000000 + i}"]
        return [f"https://www.{dom}/article/{i}"]

    def original_posts(self) -> Iterator[PostRecord]:
        ids = self.account_ids()
        for i in range(self.n_posts):
            yield PostRecord(
                post_id=f"p{i:08d}",
                author_id=ids[self.post_author[i]],
                kind="original",
                created_at=EPOCH + timedelta(seconds=int(self.times[i])),
                text=self.texts[i],
                view_count=int(self.views[i]),
                like_count=int(self.likes[i]),
                reply_count=int(self.replies[i]),
                retweet_count=int(self.retweets[i]),
                quote_count=int(self.quotes[i]),
                urls=self.post_url(i),
            )

    def posts(self) -> Iterator[PostRecord]:
        yield from self.original_posts()
        yield from self.interaction_posts

    def themes(self) -> dict[str, str]:
        names = self.ground_truth["themes"]
        cpt = self.config.claims_per_theme
        return {f"p{i:08d}": names[int(c) // cpt] for i, c in enumerate(self.claim) if c >= 0}

    def anchors(self) -> dict[str, str]:
        return {a.account_id: a.anchor_stance for a in self.accounts if a.anchor_stance}

    def write(self, out_dir: str | Path, fmt: str = "jsonl") -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        ext = "jsonl" if fmt == "jsonl" else "csv"
        paths = {
            "posts": out / f"posts.{ext}",
            "accounts": out / f"accounts.{ext}",
            "labels": out / "labels.csv",
            "anchors": out / "anchors.csv",
            "themes": out / "themes.csv",
            "ground_truth": out / "ground_truth.json",
        }
        with open(paths["posts"], "w", encoding="utf-8", newline="") as fh:
            write_posts(fh, self.posts(), fmt)
        with open(paths["accounts"], "w", encoding="utf-8", newline="") as fh:
            write_accounts(fh, self.accounts, fmt)
        with open(paths["labels"], "w", encoding="utf-8", newline="") as fh:
            write_label_table(fh, self.labels)
        with open(paths["anchors"], "w", encoding="utf-8", newline="") as fh:
            fh.write("account_id,stance\n")
            for a, s in sorted(self.anchors().items()):
                fh.write(f"{a},{s}\n")
        with open(paths["themes"], "w", encoding="utf-8", newline="") as fh:
            fh.write("post_id,theme\n")
            for pid, theme in self.themes().items():
                fh.write(f"{pid},{theme}\n")
        with open(paths["ground_truth"], "w", encoding="utf-8") as fh:
            json.dump(self.ground_truth, fh, indent=1, sort_keys=True)
            fh.write("\n")
        return paths


def _claim_words(rng: np.random.Generator, n_claims: int, words_per_claim: int = 4) -> list[list[str]]:
    seen: set[str] = set()
    claims = []
    for _ in range(n_claims):
        words = []
        while len(words) < words_per_claim:
            w = "".join(rng.choice(CLAIM_SYLLABLES, size=3))
            if w not in seen:
                seen.add(w)
                words.append(w)
        claims.append(words)
    return claims


def _thin(rng, n, rates):
    """Sequential binomial thinning: the counts sum to at most ``n``."""
    remaining = n.copy()
    left = np.ones_like(rates[0])
    out = []
    for p in rates:
        q = np.clip(p / left, 0.0, 1.0)
        c = rng.binomial(remaining, q)
        out.append(c)
        remaining = remaining - c
        left = left - p
    return out


def generate(
    spec: SuppressionSpec,
    n_users: int,
    n_posts: int,
    config: SimConfig | None = None,
) -> SimulatedDataset:
    """Generate accounts, original posts, interactions and ground truth.

    ``n_users`` regular users plus ``config.n_influencers`` influencers and any
    featured accounts; ``n_posts`` original posts plus each featured account's
    own posts. Identical arguments give identical datasets.
    """
    cfg = config or SimConfig()
    spec.validate()
    if n_users < 2:
        raise DataError("need at least one user per community")
    if n_posts < 1:
        raise DataError("n_posts must be positive")
    rates = np.asarray(cfg.engagement_rates, dtype=np.float64)
    # per-post engagement multiplier is capped so thinning rates stay below 1
    cap = float(np.exp(4 * cfg.engagement_sigma))
    if rates.sum() * cap >= 1.0:
        raise DataError("infeasible spec: engagement rates can exceed the views they thin")
    for name, fa in cfg.featured.items():
        if fa.side not in SIDES or fa.followers < 1 or fa.n_posts < 0:
            raise DataError(f"bad featured account {name!r}")

    ss = np.random.SeedSequence(spec.seed)
    rng_acc, rng_post, rng_edge, rng_text = (np.random.default_rng(s) for s in ss.spawn(4))

    # -- accounts -----------------------------------------------------------
    n_inf = cfg.n_influencers
    user_ids = [f"u{i:06d}" for i in range(n_users)]
    inf_ids = [f"inf{j:04d}" for j in range(n_inf)]
    feat_ids = list(cfg.featured)
    ids = user_ids + inf_ids + feat_ids
    n_acc = len(ids)
    is_inf = np.zeros(n_acc, dtype=bool)
    is_inf[n_users : n_users + n_inf] = True
    for j, name in enumerate(feat_ids):
        is_inf[n_users + n_inf + j] = cfg.featured[name].influencer

    side = np.empty(n_acc, dtype=np.int64)
    side[:n_users] = np.arange(n_users) % 2
    side[n_users : n_users + n_inf] = np.arange(n_inf) % 2
    for j, name in enumerate(feat_ids):
        side[n_users + n_inf + j] = SIDES.index(cfg.featured[name].side)

    log_f = rng_acc.normal(cfg.follower_mu, cfg.follower_sigma, n_acc)
    log_f[n_users : n_users + n_inf] += cfg.influencer_follower_shift
    followers = np.maximum(1, np.rint(np.exp(np.minimum(log_f, 19.0)))).astype(np.int64)
    for j, name in enumerate(feat_ids):
        followers[n_users + n_inf + j] = cfg.featured[name].followers

    n_cl = max(1, cfg.clusters_per_side)
    cluster = side * n_cl + rng_acc.integers(0, n_cl, n_acc)
    z_cluster = rng_acc.standard_normal(2 * n_cl)
    community_factor = np.exp(spec.community_coupling * cfg.community_sigma * z_cluster[cluster])
    throttle = np.ones(n_acc)
    index = {a: i for i, a in enumerate(ids)}
    for a, m in spec.account_throttle.items():
        if a in index:
            throttle[index[a]] = m
    activity = np.exp(rng_acc.normal(0.0, cfg.activity_sigma, n_acc))
    activity[is_inf] *= 3.0
    activity[n_users + n_inf :] = 0.0  # featured accounts post exactly their quota

    accounts = [
        AccountRecord(
            account_id=a,
            follower_count=int(followers[i]),
            handle=a,
            anchor_stance=SIDES[side[i]] if is_inf[i] else None,
        )
        for i, a in enumerate(ids)
    ]

    # -- original posts -----------------------------------------------------
    w = activity / activity.sum()
    author = rng_post.choice(n_acc, size=n_posts, p=w)
    extra = [np.full(cfg.featured[name].n_posts, n_users + n_inf + j) for j, name in enumerate(feat_ids)]
    if extra:
        author = np.concatenate([author] + extra)
    n_orig = author.shape[0]

    has_url = rng_post.random(n_orig) < cfg.url_share
    url_kind = np.where(has_url, rng_post.choice(4, size=n_orig, p=np.asarray(cfg.url_mix) / sum(cfg.url_mix)), -1)
    news_domains = [f"outlet{i:03d}.com" for i in range(cfg.n_news_domains)]
    other_domains = [f"site{i:04d}.org" for i in range(cfg.n_other_domains)]
    dom_pick = rng_post.integers(0, 1 << 30, n_orig)
    url_domain: list[str | None] = []
    for k, d in zip(url_kind.tolist(), dom_pick.tolist()):
        if k < 0:
            url_domain.append(None)
        elif k == 0:
            url_domain.append(news_domains[d % len(news_domains)])
        elif k == 1:
            url_domain.append(other_domains[d % len(other_domains)])
        elif k == 2:
            url_domain.append(SOCIAL_HOSTS[d % len(SOCIAL_HOSTS)])
        else:
            url_domain.append("twitter.com")

    mu = (
        followers[author]
        * spec.base_exposure
        * np.where(has_url, spec.url_penalty, 1.0)
        * throttle[author]
        * community_factor[author]
    )
    r = cfg.dispersion
    views = rng_post.negative_binomial(r, r / (r + mu)).astype(np.int64)
    eng = np.exp(np.clip(rng_post.normal(0.0, cfg.engagement_sigma, n_orig), -4 * cfg.engagement_sigma, 4 * cfg.engagement_sigma))
    likes, replies, retweets, quotes = _thin(rng_post, views, [rt * eng for rt in rates])
    times = rng_post.integers(0, cfg.days * 86400, n_orig)

    # -- text ---------------------------------------------------------------
    n_claims = cfg.n_themes * cfg.claims_per_theme
    claim_words = _claim_words(rng_text, n_claims)
    claim_numbers = rng_text.integers(100, 1000, n_claims)
    claim = np.where(rng_text.random(n_orig) < cfg.claim_rate, rng_text.integers(0, n_claims, n_orig), -1)
    n_fill = rng_text.integers(6, 12, n_orig)
    filler = np.asarray(FILLER)
    v = filler.shape[0]
    # distinct words per post: an arithmetic progression mod v with a step coprime to v
    steps = np.array([s for s in range(1, v) if math.gcd(s, v) == 1])
    start = rng_text.integers(0, v, n_orig)
    step = steps[rng_text.integers(0, steps.shape[0], n_orig)]
    word_idx = (start[:, None] + step[:, None] * np.arange(11)[None, :]) % v
    texts = []
    for i in range(n_orig):
        words = filler[word_idx[i, : n_fill[i]]].tolist()
        c = claim[i]
        if c >= 0:
            words[1:1] = claim_words[c] + [str(claim_numbers[c])]
        texts.append(" ".join(words))

    # -- interactions -------------------------------------------------------
    edges = EdgeList(kind="retweet")
    reply_edges = EdgeList(kind="reply")
    inf_idx = [np.flatnonzero(is_inf & (side == s)) for s in (0, 1)]
    inf_pop = [np.exp(rng_edge.normal(0, 1, len(ix))) for ix in inf_idx]
    inf_pop = [p / p.sum() for p in inf_pop]
    user_by_cluster = [np.flatnonzero((cluster == c) & ~is_inf) for c in range(2 * n_cl)]
    user_by_side = [np.flatnonzero((side == s) & ~is_inf) for s in (0, 1)]
    n_inter = cfg.min_influencer_interactions + rng_edge.poisson(cfg.influencer_interactions, n_users)
    n_uu = rng_edge.poisson(cfg.user_interactions, n_users)
    n_rep = rng_edge.poisson(cfg.replies_per_user, n_users)

    def pick_influencer(s):
        if len(inf_idx[s]) == 0:
            s = 1 - s
        return int(inf_idx[s][rng_edge.choice(len(inf_idx[s]), p=inf_pop[s])])

    def pick_user(i):
        pool = user_by_cluster[cluster[i]] if rng_edge.random() < cfg.within_cluster else user_by_side[side[i]]
        if len(pool) < 2:
            pool = user_by_side[side[i]]
        j = int(pool[rng_edge.integers(0, len(pool))])
        return None if j == i else j

    inter_posts: list[PostRecord] = []
    rt_count = 0
    for i in range(n_users):
        s = int(side[i])
        targets = []
        if n_inf:
            for _ in range(n_inter[i]):
                t_side = 1 - s if rng_edge.random() < cfg.cross_noise else s
                targets.append(pick_influencer(t_side))
        for _ in range(n_uu[i]):
            j = pick_user(i)
            if j is not None:
                targets.append(j)
        for j in targets:
            edges.append(ids[i], ids[j])
            t = int(rng_edge.integers(0, cfg.days * 86400))
            inter_posts.append(
                PostRecord(
                    post_id=f"r{rt_count:08d}",
                    author_id=ids[i],
                    kind="retweet",
                    created_at=EPOCH + timedelta(seconds=t),
                    text=f"RT @{ids[j]}",
                    view_count=0,
                    retweeted_author=ids[j],
                )
            )
            rt_count += 1
        for _ in range(n_rep[i]):
            j = pick_influencer(s) if n_inf and rng_edge.random() < 0.7 else pick_user(i)
            if j is None:
                continue
            quote = rng_edge.random() < cfg.quote_share
            mu_r = max(followers[i] * spec.base_exposure * 0.2 * throttle[i], 1e-9)
            v = int(rng_edge.negative_binomial(r, r / (r + mu_r)))
            lk = int(rng_edge.binomial(v, rates[0]))
            t = int(rng_edge.integers(0, cfg.days * 86400))
            if not quote:
                reply_edges.append(ids[i], ids[j])
            inter_posts.append(
                PostRecord(
                    post_id=f"r{rt_count:08d}",
                    author_id=ids[i],
                    kind="quote" if quote else "reply",
                    created_at=EPOCH + timedelta(seconds=t),
                    text=" ".join(filler[rng_edge.choice(filler.shape[0], size=6, replace=False)]),
                    view_count=v,
                    like_count=lk,
                    urls=[f"https://twitter.com/{ids[j]}/status/{2000000 + rt_count}"] if quote else [],
                    in_reply_to_author=None if quote else ids[j],
                )
            )
            rt_count += 1

    # -- labels and ground truth --------------------------------------------
    lab_rng = np.random.default_rng(ss.spawn(1)[0])
    labels = [
        DomainLabel(d, BIASES[int(lab_rng.integers(0, len(BIASES)))], FACTUALITIES[int(lab_rng.integers(0, len(FACTUALITIES)))])
        for d in news_domains
    ]
    themes = [f"theme_{t}" for t in range(cfg.n_themes)]
    ground_truth = {
        "spec": asdict(spec),
        "n_users": n_users,
        "n_posts": int(n_orig),
        "n_interactions": len(inter_posts),
        "expected_url_ratio": 1.0 / spec.url_penalty,
        "themes": themes,
        "claims": {
            f"claim_{c}": {"theme": themes[c // cfg.claims_per_theme], "words": claim_words[c], "number": int(claim_numbers[c])}
            for c in range(n_claims)
        },
        "featured": {k: asdict(v) for k, v in cfg.featured.items()},
        "accounts": {
            a: {
                "side": SIDES[side[i]],
                "cluster": int(cluster[i]),
                "influencer": bool(is_inf[i]),
                "followers": int(followers[i]),
                "throttle": float(throttle[i]),
                "community_factor": float(community_factor[i]),
            }
            for i, a in enumerate(ids)
        },
    }
    return SimulatedDataset(
        spec=spec,
        config=cfg,
        accounts=accounts,
        post_author=author,
        views=views,
        likes=likes,
        replies=replies,
        retweets=retweets,
        quotes=quotes,
        url_kind=url_kind,
        url_domain=url_domain,
        claim=claim,
        texts=texts,
        times=times,
        edges=edges,
        reply_edges=reply_edges,
        interaction_posts=inter_posts,
        labels=labels,
        ground_truth=ground_truth,
    )


def spec_from_mapping(d: Mapping) -> SuppressionSpec:
    return SuppressionSpec(
        url_penalty=float(d.get("url_penalty", 1.0)),
        account_throttle={str(k): float(v) for k, v in dict(d.get("account_throttle", {})).items()},
        community_coupling=float(d.get("community_coupling", 0.0)),
        base_exposure=float(d.get("base_exposure", 0.25)),
        seed=int(d.get("seed", 0)),
    )


def config_from_mapping(d: Mapping) -> SimConfig:
    cfg = SimConfig()
    for key, value in d.items():
        if key == "featured":
            cfg.featured = {str(k): FeaturedAccount(**v) for k, v in dict(value).items()}
        elif hasattr(cfg, key):
            cur = getattr(cfg, key)
            setattr(cfg, key, tuple(value) if isinstance(cur, tuple) else type(cur)(value))
        else:
            raise DataError(f"unknown simulator setting {key!r}")
    return cfg


# -- recovery scorecard ------------------------------------------------------

URL_RATIO_BAND = (6.5 / 8.0, 9.5 / 8.0)  # relative band around the planted ratio
SEPARATION_FACTOR = 1.5
STRONG_P = 1e-10


@dataclass
class RecoveryCheck:
    name: str
    expected: object
    observed: object
    passed: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _truth(generated) -> dict:
    return generated.ground_truth if isinstance(generated, SimulatedDataset) else dict(generated)


def verify_recovery(generated, audit: Mapping[str, object], alpha: float = 0.01) -> list[RecoveryCheck]:
    """Compare audit findings with the planted ground truth.

    ``generated`` is a :class:`SimulatedDataset` or its ``ground_truth``
    mapping; ``audit`` maps analysis names to pipeline results. Checks are
    emitted only for analyses that are present.
    """
    gt = _truth(generated)
    spec = gt["spec"]
    acc = gt["accounts"]
    checks: list[RecoveryCheck] = []

    content = audit.get("content")
    if content is not None:
        pen = spec["url_penalty"]
        uc = content.url_contrast
        if pen != 1.0 and uc is not None:
            e = 1.0 / pen
            lo, hi = e * URL_RATIO_BAND[0], e * URL_RATIO_BAND[1]
            checks.append(RecoveryCheck("url_median_ratio", [lo, hi], uc["ratio"], lo <= uc["ratio"] <= hi))
            p = uc["mwu"]["p_value"]
            want = "greater" if e > 1 else "less"
            ok = p < STRONG_P if want == "greater" else p > 1 - STRONG_P
            checks.append(RecoveryCheck("url_mwu_direction", f"no_url {want} url, p < {STRONG_P}", p, ok))
        elif pen == 1.0:
            flagged = [f"{r['group_a']}>{r['group_b']}" for r in content.pairwise if r["dominant"]]
            checks.append(RecoveryCheck("no_category_dominance", [], flagged, not flagged))

    users = audit.get("users")
    if users is not None:
        for cs in users.case_studies:
            a, b = cs["account"], cs["peer"]
            if a not in acc or b not in acc:
                continue
            ga, gb = acc[a], acc[b]
            expected = (gb["throttle"] * gb["community_factor"]) / (ga["throttle"] * ga["community_factor"])
            sep = cs["separation"]
            if expected != 1.0:
                ok = expected / SEPARATION_FACTOR <= sep <= expected * SEPARATION_FACTOR
                checks.append(RecoveryCheck(f"case_separation:{a}/{b}", expected, sep, ok))
                key = "pscore_mwu_peer_greater" if expected > 1 else "pscore_mwu_account_greater"
                p = cs[key]["p_value"]
                checks.append(RecoveryCheck(f"case_mwu:{a}/{b}", f"p < {STRONG_P}", p, p < STRONG_P))
            p = cs["rt_per_view_mwu_two_sided"]["p_value"]
            checks.append(RecoveryCheck(f"case_rt_per_view:{a}/{b}", "p > 0.05", p, p > 0.05))

    ideo = audit.get("ideology")
    if ideo is not None:
        r = ideo.result
        truth = [acc[u]["side"] for u in r.user_ids if u in acc]
        pred = ["side_a" if v < 0 else "side_b" for u, v in zip(r.user_ids, r.user_values.tolist()) if u in acc]
        accuracy = float(np.mean([x == y for x, y in zip(truth, pred)])) if truth else 0.0
        checks.append(RecoveryCheck("ideology_side_accuracy", ">= 0.99", accuracy, accuracy >= 0.99))
        if r.user_dip is not None:
            checks.append(RecoveryCheck("ideology_dip", f"p < {alpha}", r.user_dip.p_value, r.user_dip.p_value < alpha))

    net = audit.get("network")
    if net is not None:
        if spec["community_coupling"] == 0.0:
            checks.append(RecoveryCheck("network_null", "all strata null-consistent", net.null_consistent, net.null_consistent))
        else:
            checks.append(RecoveryCheck("network_coupling", "some stratum coupled", net.any_coupled, net.any_coupled))
    return checks
