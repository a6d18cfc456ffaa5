"""Pure numpy/Python implementations of the hot kernels.

These are the reference path. ``_kernels_numba`` compiles loop versions of the
same functions; ``visaudit.kernels`` picks one at import time.
"""

from __future__ import annotations

import numpy as np


def bin_edge(k, bins_per_decade):
    return 10.0 ** (np.asarray(k, dtype=np.float64) / bins_per_decade)


def log_bin_index(values, bins_per_decade):
    """Absolute log-grid bin index: ``v`` falls in ``[10**(k/b), 10**((k+1)/b))``."""
    v = np.asarray(values, dtype=np.float64)
    b = float(bins_per_decade)
    k = np.floor(np.log10(v) * b).astype(np.int64)
    # log10 rounding can land one bin off at exact edges
    k -= v < 10.0 ** (k / b)
    k += v >= 10.0 ** ((k + 1) / b)
    return k


def segment_gini(counts, starts):
    """Gini index of each contiguous segment ``counts[starts[s]:starts[s+1]]``.

    Uses the sorted-rank identity G = 2*sum(i*x_(i)) / (n*sum(x)) - (n+1)/n,
    which equals the mean-absolute-difference form without correction.
    """
    x = np.asarray(counts, dtype=np.float64)
    starts = np.asarray(starts, dtype=np.int64)
    nseg = starts.shape[0]
    if nseg == 0:
        return np.zeros(0)
    ends = np.append(starts[1:], x.shape[0])
    sizes = ends - starts
    seg = np.repeat(np.arange(nseg), sizes)
    order = np.lexsort((x, seg))
    xs = x[order]
    rank = np.arange(x.shape[0]) - np.repeat(starts, sizes) + 1
    tot = np.add.reduceat(xs, starts)
    weighted = np.add.reduceat(rank * xs, starts)
    n = sizes.astype(np.float64)
    g = 2.0 * weighted / (n * tot) - (n + 1.0) / n
    return np.maximum(g, 0.0)


def dip_sorted(x):
    """Hartigan dip statistic of a sorted 1-D sample.

    Port of the GCM/LCM cycling algorithm (AS 217 with Maechler's fixes),
    using 1-based indexing internally. The minimum returned value is 1/(2n).
    """
    n = x.shape[0]
    xx = np.empty(n + 1)
    xx[1:] = x
    xx[0] = 0.0
    dip = 1.0
    if n < 2 or xx[n] == xx[1]:
        return dip / (2 * n)
    mn = np.zeros(n + 1, dtype=np.int64)
    mj = np.zeros(n + 1, dtype=np.int64)
    gcm = np.zeros(n + 1, dtype=np.int64)
    lcm = np.zeros(n + 1, dtype=np.int64)

    mn[1] = 1
    for j in range(2, n + 1):
        mn[j] = j - 1
        while True:
            mnj = mn[j]
            mnmnj = mn[mnj]
            if mnj == 1 or (xx[j] - xx[mnj]) * (mnj - mnmnj) < (xx[mnj] - xx[mnmnj]) * (j - mnj):
                break
            mn[j] = mnmnj

    mj[n] = n
    for k in range(n - 1, 0, -1):
        mj[k] = k + 1
        while True:
            mjk = mj[k]
            mjmjk = mj[mjk]
            if mjk == n or (xx[k] - xx[mjk]) * (mjk - mjmjk) < (xx[mjk] - xx[mjmjk]) * (k - mjk):
                break
            mj[k] = mjmjk

    low = 1
    high = n
    while True:
        gcm[1] = high
        i = 1
        while gcm[i] > low:
            gcm[i + 1] = mn[gcm[i]]
            i += 1
        ig = i
        l_gcm = i
        ix = ig - 1

        lcm[1] = low
        i = 1
        while lcm[i] < high:
            lcm[i + 1] = mj[lcm[i]]
            i += 1
        ih = i
        l_lcm = i
        iv = 2

        d = 0.0
        if l_gcm != 2 or l_lcm != 2:
            while True:
                gcmix = gcm[ix]
                lcmiv = lcm[iv]
                if gcmix > lcmiv:
                    gcmi1 = gcm[ix + 1]
                    dx = (lcmiv - gcmi1 + 1) - (xx[lcmiv] - xx[gcmi1]) * (gcmix - gcmi1) / (xx[gcmix] - xx[gcmi1])
                    iv += 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv - 1
                else:
                    lcmiv1 = lcm[iv - 1]
                    dx = (xx[gcmix] - xx[lcmiv1]) * (lcmiv - lcmiv1) / (xx[lcmiv] - xx[lcmiv1]) - (gcmix - lcmiv1 - 1)
                    ix -= 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv
                if ix < 1:
                    ix = 1
                if iv > l_lcm:
                    iv = l_lcm
                if gcm[ix] == lcm[iv]:
                    break
        else:
            d = 1.0

        if d < dip:
            break

        dip_l = 0.0
        for j in range(ig, l_gcm):
            max_t = 1.0
            jb = gcm[j + 1]
            je = gcm[j]
            if je - jb > 1 and xx[je] != xx[jb]:
                c = (je - jb) / (xx[je] - xx[jb])
                for jj in range(jb, je + 1):
                    t = (jj - jb + 1) - (xx[jj] - xx[jb]) * c
                    if max_t < t:
                        max_t = t
            if dip_l < max_t:
                dip_l = max_t

        dip_u = 0.0
        for j in range(ih, l_lcm):
            max_t = 1.0
            jb = lcm[j]
            je = lcm[j + 1]
            if je - jb > 1 and xx[je] != xx[jb]:
                c = (je - jb) / (xx[je] - xx[jb])
                for jj in range(jb, je + 1):
                    t = (xx[jj] - xx[jb]) * c - (jj - jb - 1)
                    if max_t < t:
                        max_t = t
            if dip_u < max_t:
                dip_u = max_t

        dipnew = dip_u if dip_u > dip_l else dip_l
        if dip < dipnew:
            dip = dipnew

        if low == gcm[ig] and high == lcm[ih]:
            break
        low = gcm[ig]
        high = lcm[ih]

    return dip / (2 * n)


def dip_null_batch(n, seeds):
    """Dip statistics of uniform samples of size ``n``, one per seed."""
    out = np.empty(len(seeds))
    for r, seed in enumerate(seeds):
        u = np.sort(np.random.default_rng(seed).random(n))
        out[r] = dip_sorted(u)
    return out
