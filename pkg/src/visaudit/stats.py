"""Nonparametric tests: Mann-Whitney U, Hartigan's dip test, Pearson r.

p-values are never returned as exactly zero: they are floored at the smallest
positive normal double. :func:`format_pvalue` renders anything under 2.2e-16
as ``"< 2.2e-16"``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy import stats as sps

from . import kernels
from .errors import DataError, EmptyInputError

ALTERNATIVES = ("greater", "less", "two_sided")
P_FLOOR = float(np.finfo(np.float64).tiny)
EXACT_MAX_N = 16
DEFAULT_BOOTSTRAP_REPS = 2000


def _floor_p(p: float) -> float:
    return float(min(1.0, max(P_FLOOR, p)))


def format_pvalue(p: float) -> str:
    if p < 2.2e-16:
        return "< 2.2e-16"
    return f"{p:.4g}"


@dataclass(frozen=True)
class MwuResult:
    u_statistic: float
    p_value: float
    alternative: str
    n1: int
    n2: int
    method: str

    def as_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=None)
def u_null_counts(n1: int, n2: int) -> tuple[int, ...]:
    """Number of orderings giving U = 0..n1*n2 for tie-free samples.

    Recurrence on the largest observation: if it belongs to the first sample
    it exceeds all ``n2`` of the second, adding ``n2`` to U.
    """
    if n1 == 0 or n2 == 0:
        return (1,)
    a = u_null_counts(n1 - 1, n2)
    b = u_null_counts(n1, n2 - 1)
    out = [0] * (n1 * n2 + 1)
    for u, c in enumerate(a):
        out[u + n2] += c
    for u, c in enumerate(b):
        out[u] += c
    return tuple(out)


def _exact_p(u: float, n1: int, n2: int, alternative: str) -> float:
    counts = u_null_counts(n1, n2)
    total = sum(counts)
    ui = int(round(u))
    upper = sum(counts[ui:]) / total
    lower = sum(counts[: ui + 1]) / total
    if alternative == "greater":
        return upper
    if alternative == "less":
        return lower
    return min(1.0, 2.0 * min(upper, lower))


def mann_whitney(a, b, alternative: str = "two_sided") -> MwuResult:
    """Mann-Whitney U test; ``u_statistic`` counts pairs with a_i > b_j (ties 1/2).

    ``alternative="greater"`` tests whether ``a`` tends to exceed ``b``.
    Exact enumeration for tie-free samples with n1 + n2 <= 16, otherwise
    the normal approximation with tie-corrected variance and continuity
    correction.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}")
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    n1, n2 = x.shape[0], y.shape[0]
    if n1 == 0 or n2 == 0:
        raise EmptyInputError("Mann-Whitney U needs two non-empty samples")
    ranks = sps.rankdata(np.concatenate([x, y]))
    u = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    n = n1 + n2
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_free = bool(np.all(tie_counts == 1))
    if tie_free and n <= EXACT_MAX_N:
        return MwuResult(u, _floor_p(_exact_p(u, n1, n2, alternative)), alternative, n1, n2, "exact")

    t = tie_counts.astype(np.float64)
    tie_term = float(np.sum(t**3 - t)) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    mean = n1 * n2 / 2.0
    if var <= 0:
        return MwuResult(u, 1.0, alternative, n1, n2, "normal")
    sd = np.sqrt(var)
    if alternative == "greater":
        p = sps.norm.sf((u - mean - 0.5) / sd)
    elif alternative == "less":
        p = sps.norm.cdf((u - mean + 0.5) / sd)
    else:
        z = (abs(u - mean) - 0.5) / sd
        p = 2.0 * sps.norm.sf(z)
    return MwuResult(u, _floor_p(float(p)), alternative, n1, n2, "normal")


def dominates(a, b, alpha: float = 0.01) -> tuple[bool, MwuResult]:
    """``a`` dominates ``b``: one-sided ``greater`` test on ``a`` at level alpha."""
    res = mann_whitney(a, b, "greater")
    return res.p_value < alpha, res


@dataclass(frozen=True)
class DipResult:
    dip_statistic: float
    p_value: float
    n: int
    bootstrap_reps: int

    def as_dict(self) -> dict:
        return asdict(self)


def dip_statistic(x) -> float:
    v = np.sort(np.asarray(x, dtype=np.float64).ravel())
    if v.shape[0] < 4:
        raise DataError("dip test needs at least 4 observations")
    return float(kernels.dip_sorted(v))


def dip_test(x, bootstrap_reps: int = DEFAULT_BOOTSTRAP_REPS, rng_seed: int = 0) -> DipResult:
    """Hartigan dip test with a bootstrap p-value against uniform samples.

    Replicate ``r`` draws from ``default_rng([rng_seed, r])`` so results do not
    depend on how replicates are scheduled. p = (1 + #{null dip >= dip}) / (1 + reps).
    """
    if bootstrap_reps < 1:
        raise ValueError("bootstrap_reps must be positive")
    d = dip_statistic(x)
    n = int(np.asarray(x).size)
    seeds = [(int(rng_seed), r) for r in range(bootstrap_reps)]
    null = kernels.dip_null_batch(n, seeds)
    p = (1.0 + float(np.sum(null >= d))) / (1.0 + bootstrap_reps)
    return DipResult(d, _floor_p(p), n, bootstrap_reps)


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DataError("paired samples must have equal length")
    if x.shape[0] < 2:
        raise DataError("correlation needs at least 2 pairs")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = np.sqrt(np.dot(xc, xc))
    sy = np.sqrt(np.dot(yc, yc))
    if sx == 0 or sy == 0:
        raise DataError("correlation undefined for a zero-variance sample")
    r = float(np.dot(xc, yc) / (sx * sy))
    return max(-1.0, min(1.0, r))


def pearson_pvalue(r: float, n: int) -> float:
    """Two-sided p-value of r under the t distribution with n - 2 dof."""
    if n < 3:
        return 1.0
    if abs(r) >= 1.0:
        return P_FLOOR
    t = r * np.sqrt((n - 2) / (1.0 - r * r))
    return _floor_p(float(2.0 * sps.t.sf(abs(t), n - 2)))
