"""Latent ideology from a user x influencer interaction matrix.

Correspondence analysis: P = A / sum(A), row/column masses r and c, and
S = D_r^{-1/2} (P - r c^T) D_c^{-1/2}. The user score is the entry of the
leading left singular vector of S; an influencer's score is the median score
of the users who interacted with it. The centred matrix S is never formed.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .errors import DataError, OrientationError
from .lanczos import truncated_svd
from .stats import DipResult

log = logging.getLogger(__name__)

DEFAULT_MIN_USER_INTERACTIONS = 2


@dataclass
class EdgeList:
    """Directed interactions ``src -> dst`` (one entry per interaction)."""

    src: list[str] = field(default_factory=list)
    dst: list[str] = field(default_factory=list)
    kind: str = "retweet"

    def __len__(self) -> int:
        return len(self.src)

    def append(self, src: str, dst: str) -> None:
        self.src.append(src)
        self.dst.append(dst)

    def reversed(self) -> EdgeList:
        return EdgeList(list(self.dst), list(self.src), self.kind)


def rank_by_indegree(edges: EdgeList, min_indegree: int = 0) -> list[tuple[str, int]]:
    """Accounts by number of distinct users interacting with them, descending.

    Ties are broken by account id.
    """
    deg = Counter(dst for _, dst in set(zip(edges.src, edges.dst)))
    ranked = [(a, d) for a, d in deg.items() if d >= min_indegree]
    ranked.sort(key=lambda t: (-t[1], t[0]))
    return ranked


@dataclass
class InteractionMatrix:
    A: sp.csr_matrix
    row_ids: list[str]
    col_ids: list[str]
    kind: str = "retweet"

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


def build_matrix(
    edges: EdgeList,
    influencers: Iterable[str],
    min_user_interactions: int = DEFAULT_MIN_USER_INTERACTIONS,
) -> InteractionMatrix:
    """Count user -> influencer interactions and trim to a fixed point.

    Rows with fewer than ``min_user_interactions`` interactions and empty
    columns are dropped repeatedly until nothing changes. Self-interactions
    are ignored.
    """
    infl = set(influencers)
    if not infl:
        raise DataError("influencer set is empty")
    pairs = [(s, d) for s, d in zip(edges.src, edges.dst) if d in infl and s != d]
    if not pairs:
        raise DataError("no interactions toward the influencer set")
    row_ids = sorted({s for s, _ in pairs})
    col_ids = sorted({d for _, d in pairs})
    ri = {a: i for i, a in enumerate(row_ids)}
    ci = {a: j for j, a in enumerate(col_ids)}
    rows = np.fromiter((ri[s] for s, _ in pairs), dtype=np.int64, count=len(pairs))
    cols = np.fromiter((ci[d] for _, d in pairs), dtype=np.int64, count=len(pairs))
    A = sp.csr_matrix((np.ones(len(pairs)), (rows, cols)), shape=(len(row_ids), len(col_ids)))
    A.sum_duplicates()
    row_keep = np.arange(len(row_ids))
    col_keep = np.arange(len(col_ids))
    while True:
        rs = np.asarray(A.sum(axis=1)).ravel()
        rmask = rs >= max(min_user_interactions, 1)
        A = A[rmask]
        row_keep = row_keep[rmask]
        cs = np.asarray(A.sum(axis=0)).ravel()
        cmask = cs > 0
        A = A[:, cmask]
        col_keep = col_keep[cmask]
        if rmask.all() and cmask.all():
            break
    if A.shape[0] == 0 or A.shape[1] == 0:
        raise DataError("interaction matrix is empty after trimming")
    return InteractionMatrix(
        A.tocsr(),
        [row_ids[i] for i in row_keep],
        [col_ids[j] for j in col_keep],
        edges.kind,
    )


@dataclass
class IdeologyResult:
    user_ids: list[str]
    user_values: np.ndarray
    influencer_ids: list[str]
    influencer_values: np.ndarray
    singular_values: np.ndarray
    sign_orientation: str = "raw"
    scale: float = 1.0
    residual: float = 0.0
    iterations: int = 0
    orientation_conflict: bool = False
    user_dip: DipResult | None = None
    influencer_dip: DipResult | None = None

    @property
    def user_scores(self) -> dict[str, float]:
        return dict(zip(self.user_ids, self.user_values.tolist()))

    @property
    def influencer_scores(self) -> dict[str, float]:
        return dict(zip(self.influencer_ids, self.influencer_values.tolist()))

    def negated(self) -> IdeologyResult:
        return replace(self, user_values=-self.user_values, influencer_values=-self.influencer_values)


def influencer_medians(A: sp.spmatrix, user_values: np.ndarray) -> np.ndarray:
    """Median user score over the nonzero rows of each column of ``A``."""
    csc = sp.csc_matrix(A)
    out = np.full(csc.shape[1], np.nan)
    for j in range(csc.shape[1]):
        lo, hi = csc.indptr[j], csc.indptr[j + 1]
        idx = csc.indices[lo:hi][csc.data[lo:hi] > 0]
        if idx.size:
            out[j] = np.median(user_values[idx])
    return out


def ca_operator(A: sp.spmatrix):
    """(matvec, rmatvec, r, c) for the standardized residual matrix of ``A``."""
    A = sp.csr_matrix(A, dtype=np.float64)
    P = A / A.sum()
    r = np.asarray(P.sum(axis=1)).ravel()
    c = np.asarray(P.sum(axis=0)).ravel()
    if np.any(r <= 0) or np.any(c <= 0):
        raise DataError("correspondence analysis needs no empty rows or columns")
    dr = 1.0 / np.sqrt(r)
    dc = 1.0 / np.sqrt(c)
    PT = P.T.tocsr()

    def matvec(x):
        y = dc * x
        return dr * (P @ y - r * (c @ y))

    def rmatvec(y):
        z = dr * y
        return dc * (PT @ z - c * (r @ z))

    return matvec, rmatvec, r, c


def dense_ca_matrix(A) -> np.ndarray:
    """Materialized S, for small problems and tests."""
    A = np.asarray(A.toarray() if sp.issparse(A) else A, dtype=np.float64)
    P = A / A.sum()
    r = P.sum(axis=1)
    c = P.sum(axis=0)
    return (P - np.outer(r, c)) / np.sqrt(np.outer(r, c))


def correspondence_analysis(
    M: InteractionMatrix,
    k: int = 1,
    seed: int = 0,
    tol: float = 1e-10,
    maxiter: int = 300,
) -> IdeologyResult:
    if M.A.shape[0] < 2 or M.A.shape[1] < 2:
        raise DataError("correspondence analysis needs at least 2 users and 2 influencers")
    k = min(k, min(M.A.shape) - 1) or 1
    matvec, rmatvec, _, _ = ca_operator(M.A)
    svd = truncated_svd(matvec, rmatvec, M.A.shape, k=k, tol=tol, maxiter=maxiter, seed=seed)
    u1 = svd.u[:, 0]
    scale = float(np.max(np.abs(u1)))
    if scale == 0:
        raise DataError("leading singular vector is identically zero")
    users = u1 / scale
    return IdeologyResult(
        user_ids=list(M.row_ids),
        user_values=users,
        influencer_ids=list(M.col_ids),
        influencer_values=influencer_medians(M.A, users),
        singular_values=svd.s.copy(),
        sign_orientation="raw",
        scale=scale,
        residual=float(svd.residual),
        iterations=svd.iterations,
    )


def orient(result: IdeologyResult, anchors: Mapping[str, str]) -> IdeologyResult:
    """Fix the global sign so ``side_a`` anchors land on the negative side.

    Each side with anchors present votes through its median score: side_a
    votes to flip if its median is positive, side_b if its median is
    negative. Disagreeing votes are settled by flipping iff the side_a median
    exceeds the side_b median; the conflict is logged and recorded.
    """
    scores = result.influencer_scores
    a = [scores[k] for k, s in anchors.items() if s == "side_a" and k in scores and np.isfinite(scores[k])]
    b = [scores[k] for k, s in anchors.items() if s == "side_b" and k in scores and np.isfinite(scores[k])]
    if not a and not b:
        raise OrientationError("no anchor accounts among the influencer scores")
    med_a = float(np.median(a)) if a else None
    med_b = float(np.median(b)) if b else None
    votes = []
    if med_a is not None:
        votes.append(med_a > 0)
    if med_b is not None:
        votes.append(med_b < 0)
    conflict = len(votes) == 2 and votes[0] != votes[1]
    if conflict:
        flip = med_a > med_b
        log.warning("anchor medians disagree (side_a %.3f, side_b %.3f); flip=%s", med_a, med_b, flip)
    else:
        flip = votes[0]
    out = result.negated() if flip else replace(result)
    out.sign_orientation = "anchored"
    out.orientation_conflict = conflict
    return out


def stance_of(score: float) -> str:
    if score < 0:
        return "side_a"
    if score > 0:
        return "side_b"
    return "unknown"
