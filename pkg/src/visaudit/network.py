"""Does visibility travel along interaction edges?

For every account we pair its own mean p-score with the mean p-score of the
distinct accounts that interacted with it, then correlate the pairs within
stance x role strata.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import norm

from .errors import DataError
from .ideology import EdgeList
from .stats import P_FLOOR, pearson, pearson_pvalue

DEFAULT_MIN_POSTS = 6
STANCE_LABELS = ("side_a", "side_b", "unknown")


@dataclass(frozen=True)
class AccountVisibility:
    account_id: str
    avg_pscore: float | None
    n_posts: int
    stance: str = "unknown"
    is_influencer: bool = False


def account_visibility(
    account_ids: Iterable[str],
    post_author: np.ndarray,
    post_pscore: np.ndarray,
    stance: Mapping[str, str] | None = None,
    influencers: Iterable[str] = (),
    min_posts: int = DEFAULT_MIN_POSTS,
) -> dict[str, AccountVisibility]:
    """Mean p-score per account over its original posts.

    ``post_author`` holds indices into ``account_ids``. Accounts with fewer
    than ``min_posts`` posts get ``avg_pscore=None``.
    """
    ids = list(account_ids)
    stance = stance or {}
    infl = set(influencers)
    post_author = np.asarray(post_author, dtype=np.int64)
    p = np.asarray(post_pscore, dtype=np.float64)
    n = np.bincount(post_author, minlength=len(ids))
    tot = np.bincount(post_author, weights=p, minlength=len(ids))
    out = {}
    for i, a in enumerate(ids):
        cnt = int(n[i])
        avg = float(tot[i] / cnt) if cnt >= min_posts and cnt > 0 else None
        out[a] = AccountVisibility(a, avg, cnt, stance.get(a, "unknown"), a in infl)
    return out


@dataclass(frozen=True)
class NeighborPair:
    account_id: str
    own_pscore: float
    neighbor_mean_pscore: float
    n_neighbors: int
    stance: str
    is_influencer: bool


def neighbor_visibility(
    edges: EdgeList,
    vis: Mapping[str, AccountVisibility],
    direction: str = "in",
    weighted: bool = False,
) -> list[NeighborPair]:
    """Own vs neighbour-mean p-score for each account with qualifying neighbours.

    ``direction="in"``: neighbours of ``a`` are the sources of edges into ``a``
    (its audience). ``"out"`` uses edge targets instead. Only accounts and
    neighbours with a defined ``avg_pscore`` count. Duplicate edges count the
    neighbour once unless ``weighted``.
    """
    if direction not in ("in", "out"):
        raise ValueError("direction must be 'in' or 'out'")
    src, dst = (edges.src, edges.dst) if direction == "in" else (edges.dst, edges.src)
    nbrs: dict[str, dict[str, int]] = defaultdict(dict)
    for s, d in zip(src, dst):
        if s == d:
            continue
        vd = vis.get(d)
        vs = vis.get(s)
        if vd is None or vs is None or vd.avg_pscore is None or vs.avg_pscore is None:
            continue
        bucket = nbrs[d]
        bucket[s] = bucket.get(s, 0) + 1
    out = []
    for a in sorted(nbrs):
        bucket = nbrs[a]
        names = sorted(bucket)
        vals = np.array([vis[s].avg_pscore for s in names])
        if weighted:
            w = np.array([bucket[s] for s in names], dtype=np.float64)
            mean = float(np.dot(w, vals) / w.sum())
        else:
            mean = float(vals.mean())
        v = vis[a]
        out.append(NeighborPair(a, float(v.avg_pscore), mean, len(names), v.stance, v.is_influencer))
    return out


@dataclass(frozen=True)
class StratumCorrelation:
    stance: str
    is_influencer: bool
    n: int
    r: float | None
    p_value: float | None
    defined: bool
    reason: str | None
    coupled: bool

    def as_dict(self) -> dict:
        return asdict(self)


def stratified_correlation(
    pairs: Iterable[NeighborPair],
    alpha: float = 0.01,
    flag_r: float = 0.2,
) -> list[StratumCorrelation]:
    """Pearson r of own vs neighbour-mean p-score per (stance, is_influencer).

    A stratum is flagged ``coupled`` when r >= ``flag_r`` and its two-sided
    p-value is below ``alpha``.
    """
    groups: dict[tuple[str, bool], list[NeighborPair]] = defaultdict(list)
    for p in pairs:
        groups[(p.stance, p.is_influencer)].append(p)
    out = []
    for stance in STANCE_LABELS:
        for infl in (False, True):
            members = groups.get((stance, infl), [])
            n = len(members)
            if n == 0:
                continue
            x = np.array([m.own_pscore for m in members])
            y = np.array([m.neighbor_mean_pscore for m in members])
            if n < 2:
                out.append(StratumCorrelation(stance, infl, n, None, None, False, "fewer than 2 pairs", False))
                continue
            try:
                r = pearson(x, y)
            except DataError as exc:
                out.append(StratumCorrelation(stance, infl, n, None, None, False, str(exc), False))
                continue
            p = max(pearson_pvalue(r, n), P_FLOOR)
            out.append(StratumCorrelation(stance, infl, n, r, p, True, None, r >= flag_r and p < alpha))
    return out


def null_consistent(s: StratumCorrelation, r_bound: float = 0.05, alpha: float = 0.01) -> bool:
    """Whether a stratum is consistent with no neighbour coupling.

    Strata large enough to resolve ``r_bound`` at level ``alpha`` must show
    |r| < r_bound; smaller strata must not reach significance.
    """
    if not s.defined:
        return True
    resolvable = s.n >= (norm.isf(alpha / 2) / r_bound) ** 2
    if resolvable:
        return abs(s.r) < r_bound
    return s.p_value >= alpha
