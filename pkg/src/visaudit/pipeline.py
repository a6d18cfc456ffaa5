"""End-to-end audits over a dataset directory.

``load_dataset`` streams posts once: interaction edges are taken from every
parsed record, and the original posts surviving the consistency filter are
kept as columns (ints in ``array`` buffers, never as record objects).
"""

from __future__ import annotations

import csv
import logging
from array import array
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from . import claimtrack, ideology, network
from .errors import DataError, UsageError
from .ideology import EdgeList
from .ingest import FilterReport, format_for_path, iter_valid, parse_accounts, parse_posts
from .labeling import BIASES, CATEGORIES, FACTUALITIES, Categorizer, DomainSets, LabelTable, load_label_table
from .metrics import BinnedDisparity, disparity_histogram
from .stats import dip_test, mann_whitney

log = logging.getLogger(__name__)

ANALYSES = ("content", "users", "ideology", "network", "claims")
TIER_NAMES = ("<10k", "10k-100k", "100k-1M", ">=1M")


@dataclass
class AuditConfig:
    bins_per_decade: int = 10
    alpha: float = 0.01
    min_posts: int = network.DEFAULT_MIN_POSTS
    n_influencers: int = 100
    influencers: list[str] = field(default_factory=list)
    min_user_interactions: int = ideology.DEFAULT_MIN_USER_INTERACTIONS
    interaction_kind: str = "retweet"
    svd_seed: int = 0
    bootstrap_reps: int = 2000
    dip_seed: int = 0
    direction: str = "in"
    weighted: bool = False
    flag_r: float = 0.2
    r_bound: float = 0.05
    per_criterion: int = 1000
    keywords: int = 3
    tier_edges: tuple[float, float, float] = (1e4, 1e5, 1e6)
    case_studies: list[tuple[str, str]] = field(default_factory=list)
    social_domains: list[str] | None = None
    self_domains: list[str] | None = None

    def validate(self) -> None:
        if self.bins_per_decade < 1:
            raise UsageError("bins_per_decade must be positive")
        if not 0 < self.alpha < 1:
            raise UsageError("alpha must lie in (0, 1)")
        if self.interaction_kind not in ("retweet", "reply"):
            raise UsageError("interaction_kind must be retweet or reply")
        if self.direction not in ("in", "out"):
            raise UsageError("direction must be in or out")
        if self.min_posts < 1 or self.n_influencers < 1 or self.per_criterion < 1 or self.keywords < 1:
            raise UsageError("counts in the audit config must be positive")

    @classmethod
    def from_mapping(cls, d: Mapping) -> AuditConfig:
        cfg = cls()
        for key, value in d.items():
            if not hasattr(cfg, key):
                raise UsageError(f"unknown audit setting {key!r}")
            if key == "case_studies":
                value = [tuple(pair) for pair in value]
                if any(len(pair) != 2 for pair in value):
                    raise UsageError("case_studies entries must be [account, peer] pairs")
            elif key == "tier_edges":
                value = tuple(float(v) for v in value)
                if len(value) != 3:
                    raise UsageError("tier_edges needs three follower thresholds")
            elif key in ("influencers", "social_domains", "self_domains"):
                value = [str(v) for v in value]
            else:
                value = type(getattr(cfg, key))(value)
            setattr(cfg, key, value)
        cfg.validate()
        return cfg

    def domain_sets(self) -> DomainSets:
        d = {}
        if self.social_domains is not None:
            d["social_domains"] = self.social_domains
        if self.self_domains is not None:
            d["self_domains"] = self.self_domains
        return DomainSets.from_config(d)


# -- loading ----------------------------------------------------------------


@dataclass
class DatasetPaths:
    posts: Path
    accounts: Path
    labels: Path | None = None
    anchors: Path | None = None
    themes: Path | None = None
    ground_truth: Path | None = None

    @classmethod
    def from_dir(cls, root: str | Path) -> DatasetPaths:
        root = Path(root)
        if not root.is_dir():
            raise DataError(f"dataset directory {root} does not exist")

        def pick(stem, required):
            for ext in ("jsonl", "csv"):
                p = root / f"{stem}.{ext}"
                if p.exists():
                    return p
            if required:
                raise DataError(f"{root} has no {stem}.jsonl or {stem}.csv")
            return None

        def opt(name):
            p = root / name
            return p if p.exists() else None

        return cls(
            posts=pick("posts", True),
            accounts=pick("accounts", True),
            labels=opt("labels.csv"),
            anchors=opt("anchors.csv"),
            themes=opt("themes.csv"),
            ground_truth=opt("ground_truth.json"),
        )

    def inputs(self) -> dict[str, Path]:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class Dataset:
    account_ids: list[str]
    followers: np.ndarray  # int64, aligned with account_ids
    anchors: dict[str, str]
    post_ids: list[str]
    author: np.ndarray  # index into account_ids
    views: np.ndarray
    likes: np.ndarray
    replies: np.ndarray
    retweets: np.ndarray
    quotes: np.ndarray
    category: np.ndarray  # index into CATEGORIES
    bias: np.ndarray  # index into BIASES, -1 if unlabeled
    factuality: np.ndarray  # index into FACTUALITIES, -1 if unlabeled
    texts: list[str] | None
    retweet_edges: EdgeList
    reply_edges: EdgeList
    filter_report: FilterReport
    skipped_records: int = 0
    skipped_accounts: int = 0
    dropped_no_account: int = 0
    non_original: int = 0

    @property
    def n_posts(self) -> int:
        return int(self.author.shape[0])

    def pscores(self) -> np.ndarray:
        return self.views / self.followers[self.author]

    def edges(self, kind: str) -> EdgeList:
        return self.retweet_edges if kind == "retweet" else self.reply_edges

    def ingest_summary(self) -> dict:
        return {
            "filter": self.filter_report.as_dict(),
            "skipped_records": self.skipped_records,
            "skipped_accounts": self.skipped_accounts,
            "non_original": self.non_original,
            "dropped_no_account": self.dropped_no_account,
            "original_posts": self.n_posts,
            "accounts": len(self.account_ids),
            "retweet_edges": len(self.retweet_edges),
            "reply_edges": len(self.reply_edges),
        }


def read_anchors(path: str | Path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            a = (row.get("account_id") or "").strip()
            s = (row.get("stance") or "").strip()
            if not a:
                continue
            if s not in ("side_a", "side_b"):
                raise DataError(f"anchor {a!r} has invalid stance {s!r}")
            out[a] = s
    return out


def load_dataset(
    paths: DatasetPaths,
    keep_text: bool = False,
    domains: DomainSets | None = None,
) -> Dataset:
    """Parse, filter, categorize and columnarize a dataset in one streaming pass."""
    acc_fmt = format_for_path(paths.accounts)
    with open(paths.accounts, "rb") as fh:
        stream = parse_accounts(fh, acc_fmt)
        accounts = list(stream)
        skipped_accounts = stream.skipped
    index: dict[str, int] = {}
    followers = []
    anchors: dict[str, str] = {}
    for a in accounts:
        if a.account_id in index:
            followers[index[a.account_id]] = a.follower_count
        else:
            index[a.account_id] = len(followers)
            followers.append(a.follower_count)
        if a.anchor_stance:
            anchors[a.account_id] = a.anchor_stance
    if paths.anchors is not None:
        anchors.update(read_anchors(paths.anchors))
    account_ids = list(index)

    table = LabelTable()
    if paths.labels is not None:
        with open(paths.labels, "rb") as fh:
            table = load_label_table(fh)
    categorize = Categorizer(table, domains)
    cat_code = {c: i for i, c in enumerate(CATEGORIES)}
    bias_code = {b: i for i, b in enumerate(BIASES)}
    fact_code = {f: i for i, f in enumerate(FACTUALITIES)}

    cols = {k: array("q") for k in ("author", "views", "likes", "replies", "retweets", "quotes")}
    codes = {k: array("b") for k in ("category", "bias", "factuality")}
    post_ids: list[str] = []
    texts: list[str] | None = [] if keep_text else None
    rt_edges = EdgeList(kind="retweet")
    rp_edges = EdgeList(kind="reply")
    report = FilterReport()
    non_original = 0
    no_account = 0

    def edge_tap(records):
        # interaction edges come from every parsed record, before filtering
        for p in records:
            if p.kind == "retweet" and p.retweeted_author:
                rt_edges.append(p.author_id, p.retweeted_author)
            elif p.kind == "reply" and p.in_reply_to_author:
                rp_edges.append(p.author_id, p.in_reply_to_author)
            yield p

    fmt = format_for_path(paths.posts)
    with open(paths.posts, "rb") as fh:
        stream = parse_posts(fh, fmt)
        for p in iter_valid(edge_tap(stream), report):
            if p.kind != "original":
                non_original += 1
                continue
            ai = index.get(p.author_id)
            if ai is None or followers[ai] <= 0:
                no_account += 1
                continue
            cat, lab = categorize(p.urls)
            cols["author"].append(ai)
            cols["views"].append(p.view_count)
            cols["likes"].append(p.like_count)
            cols["replies"].append(p.reply_count)
            cols["retweets"].append(p.retweet_count)
            cols["quotes"].append(p.quote_count)
            codes["category"].append(cat_code[cat])
            codes["bias"].append(bias_code[lab.bias] if lab else -1)
            codes["factuality"].append(fact_code[lab.factuality] if lab else -1)
            post_ids.append(p.post_id)
            if texts is not None:
                texts.append(p.text)
        skipped = stream.skipped

    def arr(buf, dtype):
        return np.frombuffer(buf, dtype=dtype).copy() if len(buf) else np.zeros(0, dtype=dtype)

    if no_account:
        log.warning("%d original posts dropped: author missing from accounts or without followers", no_account)
    return Dataset(
        account_ids=account_ids,
        followers=np.asarray(followers, dtype=np.int64),
        anchors=anchors,
        post_ids=post_ids,
        author=arr(cols["author"], np.int64),
        views=arr(cols["views"], np.int64),
        likes=arr(cols["likes"], np.int64),
        replies=arr(cols["replies"], np.int64),
        retweets=arr(cols["retweets"], np.int64),
        quotes=arr(cols["quotes"], np.int64),
        category=arr(codes["category"], np.int8),
        bias=arr(codes["bias"], np.int8),
        factuality=arr(codes["factuality"], np.int8),
        texts=texts,
        retweet_edges=rt_edges,
        reply_edges=rp_edges,
        filter_report=report,
        skipped_records=skipped,
        skipped_accounts=skipped_accounts,
        dropped_no_account=no_account,
        non_original=non_original,
    )


# -- content (RQ1) ----------------------------------------------------------


def _pairwise(groups: Mapping[str, np.ndarray], alpha: float) -> list[dict]:
    """One-sided MWU in both directions for every pair of groups."""
    rows = []
    for ga, gb in combinations(list(groups), 2):
        for a, b in ((ga, gb), (gb, ga)):
            res = mann_whitney(groups[a], groups[b], "greater")
            rows.append(
                {
                    "group_a": a,
                    "group_b": b,
                    "u": res.u_statistic,
                    "p": res.p_value,
                    "alternative": res.alternative,
                    "method": res.method,
                    "n1": res.n1,
                    "n2": res.n2,
                    "dominant": res.p_value < alpha,
                }
            )
    return rows


def _positive_groups(p: np.ndarray, codes: np.ndarray, names: Sequence[str]) -> dict[str, np.ndarray]:
    out = {}
    for i, name in enumerate(names):
        v = p[(codes == i) & (p > 0)]
        if v.size:
            out[name] = v
    return out


@dataclass
class ContentAudit:
    histograms: list[BinnedDisparity]
    pairwise: list[dict]
    url_contrast: dict | None
    bias_histograms: list[BinnedDisparity]
    factuality_histograms: list[BinnedDisparity]
    ingest: dict

    def summary(self) -> dict:
        return {
            "categories": [h.summary() for h in self.histograms],
            "pairwise_mwu": self.pairwise,
            "dominance_convention": "group_a dominates group_b when the one-sided (greater) MWU p < alpha",
            "url_contrast": self.url_contrast,
            "bias": [h.summary() for h in self.bias_histograms],
            "factuality": [h.summary() for h in self.factuality_histograms],
            "ingest": self.ingest,
        }


def content_audit(ds: Dataset, cfg: AuditConfig) -> ContentAudit:
    if ds.n_posts == 0:
        raise DataError("no original posts survived ingestion")
    p = ds.pscores()
    bpd = cfg.bins_per_decade
    hist = disparity_histogram(p, ds.author, ds.category, bpd, CATEGORIES)
    pairs = _pairwise(_positive_groups(p, ds.category, CATEGORIES), cfg.alpha)

    no_url = p[(ds.category == CATEGORIES.index("no_domain")) & (p > 0)]
    url = p[(ds.category != CATEGORIES.index("no_domain")) & (p > 0)]
    contrast = None
    if no_url.size and url.size:
        res = mann_whitney(no_url, url, "greater")
        med_n, med_u = float(np.median(no_url)), float(np.median(url))
        contrast = {
            "median_no_url": med_n,
            "median_url": med_u,
            "n_no_url": int(no_url.size),
            "n_url": int(url.size),
            "ratio": med_n / med_u,
            "mwu": res.as_dict(),
        }

    news = ds.bias >= 0
    bias_h = disparity_histogram(p[news], ds.author[news], ds.bias[news], bpd, BIASES) if news.any() else []
    fact_h = disparity_histogram(p[news], ds.author[news], ds.factuality[news], bpd, FACTUALITIES) if news.any() else []
    return ContentAudit(hist, pairs, contrast, bias_h, fact_h, ds.ingest_summary())


# -- ideology (latent stance) -----------------------------------------------


def select_influencers(ds: Dataset, cfg: AuditConfig) -> list[str]:
    if cfg.influencers:
        return sorted(set(cfg.influencers))
    ranked = ideology.rank_by_indegree(ds.edges(cfg.interaction_kind))
    return sorted(a for a, _ in ranked[: cfg.n_influencers])


@dataclass
class IdeologyAudit:
    result: ideology.IdeologyResult
    matrix_shape: tuple[int, int]
    n_influencers_selected: int

    def summary(self) -> dict:
        r = self.result
        return {
            "matrix_shape": list(self.matrix_shape),
            "influencers_selected": self.n_influencers_selected,
            "singular_values": r.singular_values.tolist(),
            "orientation": r.sign_orientation,
            "orientation_conflict": r.orientation_conflict,
            "scale": r.scale,
            "svd_residual": r.residual,
            "svd_iterations": r.iterations,
            "user_dip": r.user_dip.as_dict() if r.user_dip else None,
            "influencer_dip": r.influencer_dip.as_dict() if r.influencer_dip else None,
            "n_users": len(r.user_ids),
            "n_side_a": int(np.sum(r.user_values < 0)),
            "n_side_b": int(np.sum(r.user_values > 0)),
        }


def ideology_audit(ds: Dataset, cfg: AuditConfig) -> IdeologyAudit:
    infl = select_influencers(ds, cfg)
    M = ideology.build_matrix(ds.edges(cfg.interaction_kind), infl, cfg.min_user_interactions)
    res = ideology.correspondence_analysis(M, k=1, seed=cfg.svd_seed)
    if ds.anchors:
        try:
            res = ideology.orient(res, ds.anchors)
        except DataError as exc:
            log.warning("orientation skipped: %s", exc)
    if res.user_values.size >= 4:
        res.user_dip = dip_test(res.user_values, cfg.bootstrap_reps, cfg.dip_seed)
    fin = res.influencer_values[np.isfinite(res.influencer_values)]
    if fin.size >= 4:
        res.influencer_dip = dip_test(fin, cfg.bootstrap_reps, cfg.dip_seed)
    return IdeologyAudit(res, M.shape, len(infl))


def stance_map(ideo: IdeologyAudit | None) -> tuple[dict[str, str], set[str]]:
    """Stance per scored account, plus the influencer set."""
    if ideo is None:
        return {}, set()
    r = ideo.result
    stance = {u: ideology.stance_of(v) for u, v in zip(r.user_ids, r.user_values.tolist())}
    for a, v in zip(r.influencer_ids, r.influencer_values.tolist()):
        stance[a] = ideology.stance_of(v) if np.isfinite(v) else "unknown"
    return stance, set(r.influencer_ids)


# -- users (RQ2) ------------------------------------------------------------


def tier_of(followers: int, edges: Sequence[float]) -> str:
    for name, edge in zip(TIER_NAMES, edges):
        if followers < edge:
            return name
    return TIER_NAMES[-1]


@dataclass
class UsersAudit:
    influencers: list[dict]
    tier_tests: list[dict]
    case_studies: list[dict]

    def summary(self) -> dict:
        return {"tier_tests": self.tier_tests, "case_studies": self.case_studies}


def _case_study(ds: Dataset, p: np.ndarray, a: str, b: str) -> dict:
    idx = {x: i for i, x in enumerate(ds.account_ids)}
    for name in (a, b):
        if name not in idx:
            raise DataError(f"case-study account {name!r} not in accounts")
    sel = {}
    for name in (a, b):
        m = (ds.author == idx[name]) & (ds.views > 0)
        if m.sum() < 1:
            raise DataError(f"case-study account {name!r} has no posts with views")
        sel[name] = m
    pa, pb = p[sel[a]], p[sel[b]]
    ra = ds.retweets[sel[a]] / ds.views[sel[a]]
    rb = ds.retweets[sel[b]] / ds.views[sel[b]]
    return {
        "account": a,
        "peer": b,
        "n_account": int(pa.size),
        "n_peer": int(pb.size),
        "median_pscore_account": float(np.median(pa)),
        "median_pscore_peer": float(np.median(pb)),
        "separation": float(np.median(pb) / np.median(pa)),
        "pscore_mwu_peer_greater": mann_whitney(pb, pa, "greater").as_dict(),
        "pscore_mwu_account_greater": mann_whitney(pa, pb, "greater").as_dict(),
        "median_rt_per_view_account": float(np.median(ra)),
        "median_rt_per_view_peer": float(np.median(rb)),
        "rt_per_view_mwu_two_sided": mann_whitney(ra, rb, "two_sided").as_dict(),
        "rt_per_view_mwu_peer_greater": mann_whitney(rb, ra, "greater").as_dict(),
        "rt_per_view_mwu_account_greater": mann_whitney(ra, rb, "greater").as_dict(),
        "points": {
            a: {"pscore": pa.tolist(), "rt_per_view": ra.tolist()},
            b: {"pscore": pb.tolist(), "rt_per_view": rb.tolist()},
        },
    }


def users_audit(ds: Dataset, cfg: AuditConfig, ideo: IdeologyAudit | None = None) -> UsersAudit:
    p = ds.pscores()
    stance, infl = stance_map(ideo)
    if not infl:
        infl = set(select_influencers(ds, cfg))
    idx = {x: i for i, x in enumerate(ds.account_ids)}
    order = np.argsort(ds.author, kind="stable")
    bounds = np.searchsorted(ds.author[order], np.arange(len(ds.account_ids) + 1))
    rows = []
    for a in sorted(infl):
        i = idx.get(a)
        if i is None:
            continue
        v = p[order[bounds[i] : bounds[i + 1]]]
        if v.size < cfg.min_posts:
            continue
        q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75])
        rows.append(
            {
                "account_id": a,
                "stance": stance.get(a, ds.anchors.get(a, "unknown")),
                "followers": int(ds.followers[i]),
                "tier": tier_of(int(ds.followers[i]), cfg.tier_edges),
                "n_posts": int(v.size),
                "q1_pscore": float(q1),
                "median_pscore": float(med),
                "q3_pscore": float(q3),
            }
        )
    tests = []
    for tier in TIER_NAMES:
        meds = {s: [r["median_pscore"] for r in rows if r["tier"] == tier and r["stance"] == s] for s in ("side_a", "side_b")}
        entry = {"tier": tier, "n_side_a": len(meds["side_a"]), "n_side_b": len(meds["side_b"])}
        if meds["side_a"] and meds["side_b"]:
            entry["mwu_two_sided"] = mann_whitney(meds["side_a"], meds["side_b"], "two_sided").as_dict()
        tests.append(entry)
    cases = [_case_study(ds, p, a, b) for a, b in cfg.case_studies]
    return UsersAudit(rows, tests, cases)


# -- network (RQ3) ----------------------------------------------------------


@dataclass
class NetworkAudit:
    pairs: list[network.NeighborPair]
    strata: list[network.StratumCorrelation]
    null_consistent: bool
    any_coupled: bool

    def summary(self) -> dict:
        return {
            "n_pairs": len(self.pairs),
            "strata": [s.as_dict() for s in self.strata],
            "null_consistent": self.null_consistent,
            "any_coupled": self.any_coupled,
        }


def network_audit(ds: Dataset, cfg: AuditConfig, ideo: IdeologyAudit | None = None) -> NetworkAudit:
    stance, infl = stance_map(ideo)
    vis = network.account_visibility(ds.account_ids, ds.author, ds.pscores(), stance, infl, cfg.min_posts)
    pairs = network.neighbor_visibility(ds.edges(cfg.interaction_kind), vis, cfg.direction, cfg.weighted)
    strata = network.stratified_correlation(pairs, cfg.alpha, cfg.flag_r)
    ok = all(network.null_consistent(s, cfg.r_bound, cfg.alpha) for s in strata)
    return NetworkAudit(pairs, strata, ok, any(s.coupled for s in strata))


# -- claims -----------------------------------------------------------------


@dataclass
class ClaimsAudit:
    seeds: list[claimtrack.ClaimSeed]
    n_candidates: int
    themes: list[dict]
    matched: dict[str, list[str]]
    histograms: list[BinnedDisparity]

    def summary(self) -> dict:
        return {
            "matching": "all-keyword conjunction",
            "n_candidates": self.n_candidates,
            "n_seeds": len(self.seeds),
            "n_matched": sum(t["n_matched"] for t in self.themes),
            "themes": self.themes,
        }


@dataclass(frozen=True)
class _PostView:
    post_id: str
    text: str
    like_count: int
    reply_count: int
    retweet_count: int
    quote_count: int
    view_count: int


def claims_audit(ds: Dataset, cfg: AuditConfig, theme_labels: Mapping[str, str]) -> ClaimsAudit:
    if ds.texts is None:
        raise UsageError("claims audit needs a dataset loaded with keep_text=True")
    posts = [
        _PostView(pid, t, int(lk), int(rp), int(rt), int(qt), int(v))
        for pid, t, lk, rp, rt, qt, v in zip(
            ds.post_ids, ds.texts, ds.likes, ds.replies, ds.retweets, ds.quotes, ds.views
        )
    ]
    stats = claimtrack.DocumentFrequency.from_texts(ds.texts)
    candidates = claimtrack.seed_sample(posts, cfg.per_criterion)
    seeds = claimtrack.build_seeds(candidates, stats, theme_labels, cfg.keywords)
    matched = claimtrack.match_claims(posts, seeds)
    p = ds.pscores()
    row = {pid: i for i, pid in enumerate(ds.post_ids)}
    themes = []
    idx, grp = [], []
    names = sorted(set(s.theme for s in seeds))
    for g, theme in enumerate(names):
        rows_t = [row[i] for i in matched.get(theme, [])]
        idx.extend(rows_t)
        grp.extend([g] * len(rows_t))
        ids = matched.get(theme, [])
        v = p[rows_t] if rows_t else np.zeros(0)
        v = v[v > 0]
        themes.append(
            {
                "theme": theme,
                "n_seeds": sum(1 for s in seeds if s.theme == theme),
                "n_matched": len(ids),
                "median_pscore": float(np.median(v)) if v.size else None,
                "histogram": f"claims_histograms.csv#{theme}",
            }
        )
    hist = []
    if idx:
        i = np.asarray(idx)
        hist = disparity_histogram(p[i], ds.author[i], np.asarray(grp), cfg.bins_per_decade, names)
    return ClaimsAudit(seeds, len(candidates), themes, matched, hist)

