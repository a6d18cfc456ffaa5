"""P-scores, log-binned histograms and per-bin author disparity."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DataError, EmptyInputError

DEFAULT_BINS_PER_DECADE = 10


def pscore(views: int, followers: int) -> float:
    """Views per follower of a single post."""
    if followers <= 0:
        raise DataError("p-score undefined for an account with no followers")
    if views < 0:
        raise DataError("negative view count")
    return views / followers


def pscores(views, followers) -> np.ndarray:
    views = np.asarray(views, dtype=np.float64)
    followers = np.asarray(followers, dtype=np.float64)
    if np.any(followers <= 0):
        raise DataError("p-score undefined for accounts with no followers")
    return views / followers


@dataclass
class LogBins:
    edges: np.ndarray
    counts: np.ndarray
    first_index: int
    bins_per_decade: int

    @property
    def n_bins(self) -> int:
        return self.counts.shape[0]


def log_bins(values, bins_per_decade: int = DEFAULT_BINS_PER_DECADE) -> LogBins:
    """Histogram on the decade grid ``10**(k/bins_per_decade)``.

    Bins are half-open ``[lo, hi)``; the range runs from the bin holding the
    minimum to the bin holding the maximum, so the top edge always lies above
    the largest value.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise EmptyInputError("cannot bin an empty distribution")
    if bins_per_decade < 1:
        raise DataError("bins_per_decade must be positive")
    if np.any(~(v > 0)) or not np.all(np.isfinite(v)):
        raise DataError("log binning needs finite positive values")
    k = kernels.log_bin_index(v, bins_per_decade)
    k_lo = int(k.min())
    k_hi = int(k.max())
    counts = np.bincount(k - k_lo, minlength=k_hi - k_lo + 1)
    edges = kernels.bin_edge(np.arange(k_lo, k_hi + 2), bins_per_decade)
    return LogBins(edges, counts, k_lo, bins_per_decade)


def gini(contributions) -> float:
    """Gini index sum_ij |x_i - x_j| / (2 n sum x), no small-sample correction."""
    x = np.asarray(contributions, dtype=np.float64)
    if x.size == 0:
        raise EmptyInputError("Gini index of an empty multiset is undefined")
    if np.any(x <= 0):
        raise DataError("contributions must be positive")
    return float(kernels.segment_gini(x, np.zeros(1, dtype=np.int64))[0])


def group_median(values) -> float:
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise EmptyInputError("median of an empty group")
    return float(np.median(v))


@dataclass
class BinnedDisparity:
    group: str
    bin_edges: np.ndarray
    bin_counts: np.ndarray
    bin_gini: np.ndarray  # nan for empty bins
    dominant_author_share: np.ndarray  # nan for empty bins
    bin_authors: np.ndarray
    median_pscore: float
    n: int
    n_zero: int

    def rows(self):
        """One dict per bin, for CSV output."""
        for i in range(self.bin_counts.shape[0]):
            c = int(self.bin_counts[i])
            yield {
                "category": self.group,
                "bin_lo": float(self.bin_edges[i]),
                "bin_hi": float(self.bin_edges[i + 1]),
                "count": c,
                "gini": None if c == 0 else float(self.bin_gini[i]),
                "dominant_author_share": None if c == 0 else float(self.dominant_author_share[i]),
                "n_authors": int(self.bin_authors[i]),
            }

    def summary(self) -> dict:
        return {
            "group": self.group,
            "n": self.n,
            "n_zero": self.n_zero,
            "median_pscore": self.median_pscore,
            "max_gini": float(np.nanmax(self.bin_gini)) if self.n else None,
        }


def _binned_disparity(group: str, p: np.ndarray, author: np.ndarray, bins_per_decade: int) -> BinnedDisparity:
    zero = p <= 0
    n_zero = int(zero.sum())
    p = p[~zero]
    author = author[~zero]
    bins = log_bins(p, bins_per_decade)
    k = kernels.log_bin_index(p, bins_per_decade) - bins.first_index
    nb = bins.n_bins
    # per (bin, author) post counts, grouped by bin
    order = np.lexsort((author, k))
    ks = k[order]
    au = author[order]
    brk = np.ones(ks.shape[0], dtype=bool)
    brk[1:] = (ks[1:] != ks[:-1]) | (au[1:] != au[:-1])
    run_start = np.flatnonzero(brk)
    run_counts = np.diff(np.append(run_start, ks.shape[0]))
    run_bin = ks[run_start]
    seg_brk = np.ones(run_bin.shape[0], dtype=bool)
    seg_brk[1:] = run_bin[1:] != run_bin[:-1]
    seg_start = np.flatnonzero(seg_brk)
    seg_bin = run_bin[seg_start]
    g = kernels.segment_gini(run_counts, seg_start)
    top = np.maximum.reduceat(run_counts, seg_start)
    n_auth = np.diff(np.append(seg_start, run_counts.shape[0]))

    bin_gini = np.full(nb, np.nan)
    share = np.full(nb, np.nan)
    authors = np.zeros(nb, dtype=np.int64)
    bin_gini[seg_bin] = g
    share[seg_bin] = top / bins.counts[seg_bin]
    authors[seg_bin] = n_auth
    return BinnedDisparity(
        group=group,
        bin_edges=bins.edges,
        bin_counts=bins.counts,
        bin_gini=bin_gini,
        dominant_author_share=share,
        bin_authors=authors,
        median_pscore=float(np.median(p)),
        n=int(p.shape[0]),
        n_zero=n_zero,
    )


def disparity_histogram(
    pscore_values,
    author,
    group,
    bins_per_decade: int = DEFAULT_BINS_PER_DECADE,
    group_names: Sequence[str] | None = None,
) -> list[BinnedDisparity]:
    """Per-group log histogram with per-bin author Gini and group median.

    ``author`` and ``group`` are integer codes aligned with ``pscore_values``;
    ``group_names[g]`` names code ``g``. Groups with no positive p-score are
    omitted. Zero p-scores are counted in ``n_zero`` but not binned.
    """
    p = np.asarray(pscore_values, dtype=np.float64)
    author = np.asarray(author)
    group = np.asarray(group)
    if not (p.shape == author.shape == group.shape):
        raise DataError("pscore, author and group arrays must align")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise DataError("p-scores must be finite and non-negative")
    codes = np.unique(group)
    out = []
    for code in codes:
        m = group == code
        if not np.any(p[m] > 0):
            continue
        name = group_names[int(code)] if group_names is not None else str(code)
        out.append(_binned_disparity(name, p[m], author[m], bins_per_decade))
    if group_names is not None:
        rank = {name: i for i, name in enumerate(group_names)}
        out.sort(key=lambda d: rank[d.group])
    return out
