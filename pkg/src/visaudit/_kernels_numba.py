"""numba-compiled loop versions of the kernels in ``_kernels_numpy``."""

from __future__ import annotations

import numpy as np
from numba import njit

from . import _kernels_numpy as _ref

bin_edge = _ref.bin_edge


@njit(cache=True, nogil=True)
def _log_bin_index(v, b, edges, k0):
    out = np.empty(v.shape[0], dtype=np.int64)
    for i in range(v.shape[0]):
        k = np.int64(np.floor(np.log10(v[i]) * b))
        if v[i] < edges[k - k0]:
            k -= 1
        if v[i] >= edges[k + 1 - k0]:
            k += 1
        out[i] = k
    return out


def log_bin_index(values, bins_per_decade):
    v = np.ascontiguousarray(values, dtype=np.float64)
    b = float(bins_per_decade)
    if v.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    # edges come from the numpy path so both backends share them bit for bit
    k0 = int(np.floor(np.log10(v.min()) * b)) - 2
    k1 = int(np.floor(np.log10(v.max()) * b)) + 3
    edges = bin_edge(np.arange(k0, k1 + 1), b)
    return _log_bin_index(v, b, edges, k0)


@njit(cache=True, nogil=True)
def _segment_gini(x, starts):
    nseg = starts.shape[0]
    out = np.empty(nseg)
    for s in range(nseg):
        lo = starts[s]
        hi = starts[s + 1] if s + 1 < nseg else x.shape[0]
        seg = np.sort(x[lo:hi])
        n = hi - lo
        tot = 0.0
        weighted = 0.0
        for i in range(n):
            tot += seg[i]
            weighted += (i + 1) * seg[i]
        g = 2.0 * weighted / (n * tot) - (n + 1.0) / n
        out[s] = g if g > 0.0 else 0.0
    return out


def segment_gini(counts, starts):
    x = np.ascontiguousarray(counts, dtype=np.float64)
    st = np.ascontiguousarray(starts, dtype=np.int64)
    if st.shape[0] == 0:
        return np.zeros(0)
    return _segment_gini(x, st)


dip_sorted = njit(cache=True, nogil=True)(_ref.dip_sorted)


def dip_null_batch(n, seeds):
    out = np.empty(len(seeds))
    for r, seed in enumerate(seeds):
        u = np.sort(np.random.default_rng(seed).random(n))
        out[r] = dip_sorted(u)
    return out
