from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from visaudit import _kernels_numpy

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

try:
    from visaudit import _kernels_numba

    BACKENDS = {"numpy": _kernels_numpy, "numba": _kernels_numba}
except ImportError:  # pragma: no cover
    BACKENDS = {"numpy": _kernels_numpy}


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    """Each kernel module in turn, independent of VISAUDIT_NO_NUMBA."""
    return BACKENDS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pairwise_gini(x) -> float:
    """O(n^2) oracle: sum_ij |x_i - x_j| / (2 n sum x)."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.abs(x[:, None] - x[None, :]).sum() / (2 * x.size * x.sum()))


# -- acceptance summary -----------------------------------------------------

ACCEPTANCE: dict[int, dict] = {}
_CRITERION_OF: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): test belongs to acceptance criterion n")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, title = m.args
            ACCEPTANCE.setdefault(n, {"title": title, "outcomes": []})
            _CRITERION_OF[item.nodeid] = n


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    n = _CRITERION_OF.get(report.nodeid)
    if n is not None:
        ACCEPTANCE[n]["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[n]
        outs = entry["outcomes"]
        if not outs:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {entry['title']}")
