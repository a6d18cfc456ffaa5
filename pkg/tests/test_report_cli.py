from __future__ import annotations

import csv
import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from visaudit.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from visaudit.config import load_config
from visaudit.errors import UsageError
from visaudit.report import emit_report

CONFIG = """
[simulate]
n_influencers = 20

[simulate.featured.loud]
followers = 1000000
n_posts = 150

[simulate.featured.quiet]
followers = 1000000
n_posts = 150

[audit]
n_influencers = 20
bootstrap_reps = 100
per_criterion = 50
case_studies = [["quiet", "loud"]]
"""


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    cfg = root / "run.toml"
    cfg.write_text(CONFIG)
    data = root / "data"
    rc = main([
        "simulate", "--config", str(cfg), "--seed", "5", "--out", str(data),
        "--n-users", "600", "--n-posts", "6000", "--url-penalty", "0.2", "--throttle", "quiet=0.1",
    ])
    assert rc == EXIT_OK
    return root, cfg, data


def run_report(cfg, data, out, *extra):
    return main(["report", "--config", str(cfg), "--data", str(data), "--out", str(out), *extra])


def test_report_bundle(workspace):
    root, cfg, data = workspace
    out = root / "full"
    assert run_report(cfg, data, out) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["analyses"] == ["claims", "content", "ideology", "ingest", "network", "recovery", "users"]
    for rel, digest in manifest["files"].items():
        assert (out / rel).exists()
    assert set(manifest["inputs"]) >= {"posts", "accounts", "labels"}
    assert all("/" not in v["name"] for v in manifest["inputs"].values())
    for name in ("histograms.csv", "pairwise_mwu.csv", "user_scores.csv", "network_pairs.csv", "claim_matches.csv"):
        assert (out / name).exists(), name
    assert (out / "figures" / "category_pscore.svg").exists()
    rec = json.loads((out / "recovery.json").read_text())
    names = {c["name"] for c in rec["checks"]}
    assert "url_median_ratio" in names and "case_separation:quiet/loud" in names


def test_svg_tooltips_match_csv(workspace):
    root, cfg, data = workspace
    out = root / "full"
    if not (out / "manifest.json").exists():
        run_report(cfg, data, out)
    svg_text = (out / "figures" / "category_gini.svg").read_text()
    tips = re.findall(r"<title>([^<]*): count=(\d+) gini=([^<]+)</title>", svg_text)
    assert tips
    with open(out / "histograms.csv", newline="") as fh:
        rows = {(r["category"], r["count"], r["gini"]) for r in csv.DictReader(fh)}
    for label, count, g in tips:
        assert (label, count, g) in rows


def test_metrics_only_bundle(workspace):
    root, cfg, data = workspace
    out = root / "nosvg"
    assert main(["audit", "content", "--config", str(cfg), "--data", str(data), "--out", str(out), "--no-svg"]) == EXIT_OK
    assert not (out / "figures").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert "content" in manifest["analyses"] and not any(f.endswith(".svg") for f in manifest["files"])


def test_reproducible(workspace):
    root, cfg, data = workspace
    a, b = root / "rep_a", root / "rep_b"
    assert run_report(cfg, data, a, "--no-svg") == EXIT_OK
    assert run_report(cfg, data, b, "--no-svg") == EXIT_OK
    ma = json.loads((a / "manifest.json").read_text())
    mb = json.loads((b / "manifest.json").read_text())
    assert ma["manifest_hash"] == mb["manifest_hash"]
    for rel in ma["files"]:
        assert (a / rel).read_bytes() == (b / rel).read_bytes()


def test_ingest_command(workspace):
    root, cfg, data = workspace
    out = root / "ingested"
    assert main(["ingest", "--data", str(data), "--out", str(out), "--format", "csv"]) == EXIT_OK
    summary = json.loads((out / "ingest.json").read_text())
    assert summary["filter"]["kept"] == summary["filter"]["n_input"]
    assert (out / "posts.csv").exists()


def test_empty_analyses_is_usage_error(tmp_path):
    with pytest.raises(UsageError):
        emit_report(tmp_path, {}, {})
    with pytest.raises(UsageError):
        emit_report(tmp_path, {"bogus": 1}, {})


def test_exit_codes(tmp_path, capsys):
    assert main(["audit", "nonsense"]) == EXIT_USAGE
    assert main(["report", "--data", str(tmp_path / "missing")]) == EXIT_DATA
    assert main(["report"]) == EXIT_USAGE
    assert main(["simulate", "--throttle", "novalue", "--out", str(tmp_path)]) == EXIT_USAGE
    bad = tmp_path / "bad.toml"
    bad.write_text("[mystery]\nx = 1\n")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_claims_without_themes(workspace, tmp_path):
    _, cfg, data = workspace
    rc = main(["audit", "claims", "--config", str(cfg), "--posts", str(data / "posts.jsonl"),
               "--accounts", str(data / "accounts.jsonl"), "--out", str(tmp_path)])
    assert rc == EXIT_USAGE


def test_load_config(tmp_path):
    assert load_config(None) == {"simulate": {}, "audit": {}, "report": {}}
    p = tmp_path / "c.toml"
    p.write_text("[report]\nsvg = false\n")
    assert load_config(p)["report"] == {"svg": False}
    with pytest.raises(UsageError):
        load_config(tmp_path / "nope.toml")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "visaudit", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("visaudit ")


@pytest.mark.parametrize("body", ["[simulate]\nbogus = 1\n", "[simulate.featured.x]\nfolowers = 5\n", "[audit]\nbogus = 1\n"])
def test_bad_config_keys_are_usage_errors(tmp_path, body):
    cfg = tmp_path / "c.toml"
    cfg.write_text(body)
    cmd = "simulate" if "simulate" in body else "report"
    args = [cmd, "--config", str(cfg), "--out", str(tmp_path / "o")]
    if cmd == "report":
        args += ["--data", str(tmp_path)]
    assert main(args) == EXIT_USAGE
