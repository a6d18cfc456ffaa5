"""Backend selection for the hot numeric kernels.

Set ``VISAUDIT_NO_NUMBA=1`` to force the pure numpy path. When numba cannot
be imported the numpy path is used silently.
"""

from __future__ import annotations

import os

_disabled = os.environ.get("VISAUDIT_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

if _disabled:
    from ._kernels_numpy import bin_edge, dip_null_batch, dip_sorted, log_bin_index, segment_gini

    BACKEND = "numpy"
else:
    try:
        from ._kernels_numba import bin_edge, dip_null_batch, dip_sorted, log_bin_index, segment_gini

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        from ._kernels_numpy import bin_edge, dip_null_batch, dip_sorted, log_bin_index, segment_gini

        BACKEND = "numpy"

__all__ = ["BACKEND", "bin_edge", "dip_null_batch", "dip_sorted", "log_bin_index", "segment_gini"]
