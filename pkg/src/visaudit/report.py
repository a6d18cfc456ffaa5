"""Report bundles: JSON summaries, CSV tables, SVG figures and a manifest.

Output is byte-reproducible for identical inputs and configuration: keys are
sorted, floats are written with ``repr``, paths in the manifest are relative
and nothing time-dependent is recorded.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import platform
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any

import numpy as np
import scipy

from . import __version__, kernels, svg
from .config import canonical_json, config_hash
from .errors import UsageError
from .metrics import BinnedDisparity
from .pipeline import TIER_NAMES

log = logging.getLogger(__name__)

REPORT_ANALYSES = ("ingest", "content", "users", "ideology", "network", "claims", "recovery")
HIST_COLUMNS = ("category", "bin_lo", "bin_hi", "count", "gini", "dominant_author_share", "n_authors")


def clean(obj: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if is_dataclass(obj) and not isinstance(obj, type):
        obj = asdict(obj)
    if isinstance(obj, Mapping):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, Path):
        return obj.name
    return obj


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return repr(v) if math.isfinite(v) else ""
    return str(v)


class Bundle:
    def __init__(self, root: Path):
        self.root = root
        self.files: list[str] = []
        self.warnings: list[str] = []

    def path(self, rel: str) -> Path:
        p = self.root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def json(self, rel: str, obj: Any) -> None:
        with open(self.path(rel), "w", encoding="utf-8", newline="\n") as fh:
            json.dump(clean(obj), fh, sort_keys=True, indent=1, allow_nan=False)
            fh.write("\n")
        self.files.append(rel)

    def csv(self, rel: str, header: Sequence[str], rows: Iterable[Mapping | Sequence]) -> None:
        with open(self.path(rel), "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                vals = [r.get(h) for h in header] if isinstance(r, Mapping) else r
                w.writerow([_cell(v) for v in vals])
        self.files.append(rel)

    def figure(self, rel: str, render) -> None:
        """Write an SVG; failures become warnings, never errors."""
        try:
            text = render()
        except Exception as exc:  # plots are views; the tables stay valid
            msg = f"{rel}: {type(exc).__name__}: {exc}"
            log.warning("figure skipped: %s", msg)
            self.warnings.append(msg)
            return
        with open(self.path(rel), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        self.files.append(rel)


def _hist_rows(hists: Sequence[BinnedDisparity]):
    for h in hists:
        yield from h.rows()


def _hist_series(hists):
    return [(h.group, h.bin_edges.tolist(), h.bin_counts.tolist()) for h in hists]


def _gini_panels(hists):
    return [
        (h.group, h.bin_edges.tolist(), h.bin_counts.tolist(), [None if c == 0 else float(g) for c, g in zip(h.bin_counts, h.bin_gini)])
        for h in hists
    ]


def _density_rows(panels):
    for p in panels:
        xe, ye, cnt = p["x_edges"], p["y_edges"], p["counts"]
        for a in range(len(xe) - 1):
            for b in range(len(ye) - 1):
                if cnt[a][b]:
                    yield [p["label"], xe[a], xe[a + 1], ye[b], ye[b + 1], cnt[a][b]]


DENSITY_COLUMNS = ("panel", "log10_x_lo", "log10_x_hi", "log10_y_lo", "log10_y_hi", "count")


def _content(b: Bundle, audit, figures: bool) -> None:
    b.json("content.json", audit.summary())
    b.csv("histograms.csv", HIST_COLUMNS, _hist_rows(audit.histograms))
    b.csv("pairwise_mwu.csv", ("group_a", "group_b", "u", "p", "alternative", "method", "n1", "n2", "dominant"), audit.pairwise)
    b.csv("bias_histograms.csv", HIST_COLUMNS, _hist_rows(audit.bias_histograms))
    b.csv("factuality_histograms.csv", HIST_COLUMNS, _hist_rows(audit.factuality_histograms))
    if not figures:
        return
    if audit.histograms:
        b.figure("figures/category_pscore.svg", lambda: svg.step_histograms("p-score by content category", _hist_series(audit.histograms)))
        b.figure("figures/category_gini.svg", lambda: svg.gini_panels("Per-bin author Gini by category", _gini_panels(audit.histograms)))
    if audit.bias_histograms:
        b.figure("figures/bias_pscore.svg", lambda: svg.step_histograms("p-score by political bias", _hist_series(audit.bias_histograms)))
        b.figure("figures/bias_gini.svg", lambda: svg.gini_panels("Per-bin author Gini by political bias", _gini_panels(audit.bias_histograms)))
    if audit.factuality_histograms:
        b.figure("figures/factuality_pscore.svg", lambda: svg.step_histograms("p-score by factuality", _hist_series(audit.factuality_histograms)))


def _ideology(b: Bundle, audit) -> None:
    r = audit.result
    summary = audit.summary()
    counts, edges = np.histogram(np.clip(r.user_values, -1, 1), bins=20, range=(-1.0, 1.0))
    summary["user_score_histogram"] = {"edges": edges.tolist(), "counts": counts.tolist()}
    b.json("ideology.json", summary)
    b.csv("user_scores.csv", ("account_id", "score"), zip(r.user_ids, r.user_values.tolist()))
    b.csv("influencer_scores.csv", ("account_id", "score"), zip(r.influencer_ids, r.influencer_values.tolist()))


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)


def _users(b: Bundle, audit, figures: bool) -> None:
    b.json("users.json", audit.summary())
    cols = ("account_id", "stance", "followers", "tier", "n_posts", "q1_pscore", "median_pscore", "q3_pscore")
    b.csv("influencers.csv", cols, audit.influencers)
    if figures and audit.influencers:
        b.figure("figures/influencer_tiers.svg", lambda: svg.tier_boxes("Per-influencer p-score by follower tier", audit.influencers, TIER_NAMES))
    for cs in audit.case_studies:
        stem = f"case_study_{_safe(cs['account'])}_{_safe(cs['peer'])}"
        rows = [
            [who, p, rt]
            for who in (cs["account"], cs["peer"])
            for p, rt in zip(cs["points"][who]["pscore"], cs["points"][who]["rt_per_view"])
        ]
        b.csv(f"{stem}.csv", ("account_id", "pscore", "rt_per_view"), rows)
        panels = []
        for who in (cs["account"], cs["peer"]):
            xe, ye, cnt = svg.grid_counts(cs["points"][who]["pscore"], cs["points"][who]["rt_per_view"], bins=20)
            panels.append({"label": who, "x_edges": xe, "y_edges": ye, "counts": cnt})
        b.csv(f"figures/{stem}_density.csv", DENSITY_COLUMNS, _density_rows(panels))
        if figures:
            b.figure(f"figures/{stem}.svg", lambda: svg.density_panels("p-score vs retweets per view", panels, "p-score", "retweets / views"))


def _network(b: Bundle, audit, figures: bool) -> None:
    b.json("network.json", audit.summary())
    cols = ("account_id", "own_pscore", "neighbor_mean_pscore", "n_neighbors", "stance", "is_influencer")
    b.csv("network_pairs.csv", cols, (asdict(p) for p in audit.pairs))
    panels = []
    for s in audit.strata:
        members = [p for p in audit.pairs if p.stance == s.stance and p.is_influencer == s.is_influencer]
        if len(members) < 2:
            continue
        label = f"{s.stance} {'influencers' if s.is_influencer else 'users'}"
        xe, ye, cnt = svg.grid_counts([m.own_pscore for m in members], [m.neighbor_mean_pscore for m in members], bins=25)
        panels.append({"label": label, "x_edges": xe, "y_edges": ye, "counts": cnt})
    b.csv("figures/neighbor_density.csv", DENSITY_COLUMNS, _density_rows(panels))
    if figures and panels:
        b.figure("figures/neighbor_density.svg", lambda: svg.density_panels("Own vs neighbour p-score", panels, "own p-score", "neighbour mean p-score"))


def _claims(b: Bundle, audit, figures: bool) -> None:
    summary = audit.summary()
    summary["seeds"] = [{"post_id": s.post_id, "theme": s.theme, "keywords": s.keywords} for s in audit.seeds]
    b.json("claims.json", summary)
    b.csv("claims_histograms.csv", HIST_COLUMNS, _hist_rows(audit.histograms))
    b.csv("claim_matches.csv", ("post_id", "theme"), ((pid, t) for t in sorted(audit.matched) for pid in audit.matched[t]))
    if figures and audit.histograms:
        b.figure("figures/claims_pscore.svg", lambda: svg.step_histograms("p-score by claim theme", _hist_series(audit.histograms)))


def library_versions() -> dict[str, str | None]:
    try:
        import numba

        nb = numba.__version__
    except ImportError:  # pragma: no cover
        nb = None
    return {
        "visaudit": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": nb,
    }


def emit_report(
    out_dir: str | Path,
    analyses: Mapping[str, Any],
    config: Mapping[str, Any],
    inputs: Mapping[str, str | Path] | None = None,
    figures: bool = True,
) -> dict:
    """Write every present analysis into ``out_dir`` and return the manifest."""
    present = {k: v for k, v in analyses.items() if v is not None}
    unknown = sorted(set(present) - set(REPORT_ANALYSES))
    if unknown:
        raise UsageError(f"unknown analyses: {', '.join(unknown)}")
    if not present:
        raise UsageError("nothing to report: no analysis results given")
    b = Bundle(Path(out_dir))
    b.root.mkdir(parents=True, exist_ok=True)
    if "ingest" in present:
        b.json("ingest.json", present["ingest"])
    if "content" in present:
        _content(b, present["content"], figures)
    if "ideology" in present:
        _ideology(b, present["ideology"])
    if "users" in present:
        _users(b, present["users"], figures)
    if "network" in present:
        _network(b, present["network"], figures)
    if "claims" in present:
        _claims(b, present["claims"], figures)
    if "recovery" in present:
        rec = present["recovery"]
        b.json("recovery.json", {"checks": rec, "all_passed": all(c["passed"] for c in clean(rec))})

    manifest = {
        "tool": "visaudit",
        "versions": library_versions(),
        "backend": kernels.BACKEND,
        "analyses": sorted(present),
        "config": clean(config),
        "config_hash": config_hash(clean(config)),
        "inputs": {k: {"name": Path(p).name, "sha256": sha256_file(p)} for k, p in sorted((inputs or {}).items())},
        "files": {rel: sha256_file(b.root / rel) for rel in sorted(b.files)},
        "warnings": b.warnings,
    }
    manifest["manifest_hash"] = hashlib.sha256(canonical_json(manifest).encode("utf-8")).hexdigest()
    with open(b.root / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return manifest
