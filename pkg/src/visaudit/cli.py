"""Command-line interface.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, pipeline
from .claimtrack import load_theme_labels
from .config import load_config
from .errors import DataError, UsageError
from .ingest import FORMATS, FilterReport, format_for_path, iter_valid, parse_posts, write_posts
from .report import emit_report
from .simulate import FeaturedAccount, config_from_mapping, generate, spec_from_mapping, verify_recovery

log = logging.getLogger("visaudit")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
AUDITS = ("content", "users", "network", "ideology", "claims")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _globals() -> argparse.ArgumentParser:
    g = _Parser(add_help=False)
    g.add_argument("--config", type=Path, help="TOML configuration file")
    g.add_argument("--seed", type=int, help="random seed (simulation, SVD start vector, dip bootstrap)")
    g.add_argument("--out", type=Path, default=Path("visaudit_out"), help="output directory")
    g.add_argument("--format", choices=FORMATS, default="jsonl", help="record format for written datasets")
    g.add_argument("-v", "--verbose", action="store_true")
    return g


def _dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", type=Path, help="dataset directory (posts, accounts, labels.csv, anchors.csv, themes.csv)")
    p.add_argument("--posts", type=Path)
    p.add_argument("--accounts", type=Path)
    p.add_argument("--labels", type=Path)
    p.add_argument("--anchors", type=Path)
    p.add_argument("--themes", type=Path)


def build_parser() -> argparse.ArgumentParser:
    common = _globals()
    ap = _Parser(prog="visaudit", description="Audit post view counts for visibility alteration.")
    ap.add_argument("--version", action="version", version=f"visaudit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("simulate", parents=[common], help="generate a synthetic dataset with planted suppression")
    sp.add_argument("--n-users", type=int, default=10000)
    sp.add_argument("--n-posts", type=int, default=100000)
    sp.add_argument("--url-penalty", type=float)
    sp.add_argument("--base-exposure", type=float)
    sp.add_argument("--coupling", type=float, help="community_coupling in [0, 1]")
    sp.add_argument("--throttle", action="append", default=[], metavar="ACCOUNT=MULT")
    sp.add_argument("--featured", action="append", default=[], metavar="NAME=FOLLOWERS[:POSTS[:SIDE]]")

    ip = sub.add_parser("ingest", parents=[common], help="parse and filter posts, write the surviving records")
    _dataset_args(ip)

    aud = sub.add_parser("audit", parents=[common], help="run one analysis and write its report bundle")
    aud.add_argument("analysis", choices=AUDITS)
    _dataset_args(aud)
    aud.add_argument("--no-svg", action="store_true")

    rp = sub.add_parser("report", parents=[common], help="run every applicable analysis and write a full bundle")
    _dataset_args(rp)
    rp.add_argument("--no-svg", action="store_true")
    return ap


# -- helpers ----------------------------------------------------------------


def _kv(items, what):
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"{what} must look like NAME=VALUE, got {item!r}")
        out[key] = val
    return out


def _paths(args) -> pipeline.DatasetPaths:
    if args.data is not None:
        paths = pipeline.DatasetPaths.from_dir(args.data)
    elif args.posts is not None and args.accounts is not None:
        paths = pipeline.DatasetPaths(args.posts, args.accounts)
    else:
        raise UsageError("give --data DIR or both --posts and --accounts")
    for name in ("posts", "accounts", "labels", "anchors", "themes"):
        override = getattr(args, name, None)
        if override is not None:
            setattr(paths, name, override)
    for name, p in paths.inputs().items():
        if not Path(p).exists():
            raise DataError(f"{name} file {p} does not exist")
    return paths


def _audit_config(args, cfg) -> pipeline.AuditConfig:
    section = dict(cfg["audit"])
    if args.seed is not None:
        section["svd_seed"] = args.seed
        section["dip_seed"] = args.seed
    return pipeline.AuditConfig.from_mapping(section)


def _effective(acfg: pipeline.AuditConfig, cfg) -> dict:
    return {"audit": {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(acfg).items()}, "report": dict(cfg["report"])}


# -- commands ---------------------------------------------------------------


def cmd_simulate(args, cfg) -> int:
    section = dict(cfg["simulate"])
    spec_keys = ("url_penalty", "account_throttle", "community_coupling", "base_exposure", "seed")
    spec_d = {k: section.pop(k) for k in spec_keys if k in section}
    if args.url_penalty is not None:
        spec_d["url_penalty"] = args.url_penalty
    if args.base_exposure is not None:
        spec_d["base_exposure"] = args.base_exposure
    if args.coupling is not None:
        spec_d["community_coupling"] = args.coupling
    if args.seed is not None:
        spec_d["seed"] = args.seed
    throttles = dict(spec_d.get("account_throttle", {}))
    for k, v in _kv(args.throttle, "--throttle").items():
        try:
            throttles[k] = float(v)
        except ValueError as exc:
            raise UsageError(f"bad throttle multiplier {v!r}") from exc
    spec_d["account_throttle"] = throttles
    n_users = int(section.pop("n_users", args.n_users))
    n_posts = int(section.pop("n_posts", args.n_posts))
    try:
        sim_cfg = config_from_mapping(section)
    except (DataError, TypeError, ValueError) as exc:
        raise UsageError(f"[simulate] config: {exc}") from exc
    for name, val in _kv(args.featured, "--featured").items():
        parts = val.split(":")
        try:
            sim_cfg.featured[name] = FeaturedAccount(
                followers=int(parts[0]),
                n_posts=int(parts[1]) if len(parts) > 1 else 300,
                side=parts[2] if len(parts) > 2 else "side_a",
            )
        except ValueError as exc:
            raise UsageError(f"bad --featured value {val!r}") from exc
    ds = generate(spec_from_mapping(spec_d), n_users, n_posts, sim_cfg)
    paths = ds.write(args.out, args.format)
    print(json.dumps({k: str(v) for k, v in paths.items()}, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_ingest(args, cfg) -> int:
    paths = _paths(args)
    args.out.mkdir(parents=True, exist_ok=True)
    report = FilterReport()
    target = args.out / f"posts.{args.format}"
    with open(paths.posts, "rb") as src, open(target, "w", encoding="utf-8", newline="") as dst:
        stream = parse_posts(src, format_for_path(paths.posts))
        write_posts(dst, iter_valid(stream, report), args.format)
        summary = {"filter": report.as_dict(), "skipped_records": stream.skipped, "errors": stream.errors}
    with open(args.out / "ingest.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(json.dumps(summary["filter"], sort_keys=True))
    return EXIT_OK


def _run(args, cfg, wanted: tuple[str, ...]) -> dict:
    acfg = _audit_config(args, cfg)
    paths = _paths(args)
    need_text = "claims" in wanted and paths.themes is not None
    ds = pipeline.load_dataset(paths, keep_text=need_text, domains=acfg.domain_sets())
    results: dict = {"ingest": ds.ingest_summary()}
    if "content" in wanted:
        results["content"] = pipeline.content_audit(ds, acfg)
    ideo = None
    if any(a in wanted for a in ("ideology", "users", "network")):
        try:
            ideo = pipeline.ideology_audit(ds, acfg)
        except DataError as exc:
            if "ideology" in wanted and len(wanted) == 1:
                raise
            log.warning("ideology skipped: %s", exc)
    if "ideology" in wanted:
        results["ideology"] = ideo
    if "users" in wanted:
        results["users"] = pipeline.users_audit(ds, acfg, ideo)
    if "network" in wanted:
        results["network"] = pipeline.network_audit(ds, acfg, ideo)
    if "claims" in wanted:
        if paths.themes is None:
            if len(wanted) == 1:
                raise UsageError("claims audit needs a theme label file (--themes or themes.csv)")
            log.warning("claims skipped: no theme label file")
        else:
            with open(paths.themes, "rb") as fh:
                results["claims"] = pipeline.claims_audit(ds, acfg, load_theme_labels(fh))
    if paths.ground_truth is not None:
        with open(paths.ground_truth, encoding="utf-8") as fh:
            truth = json.load(fh)
        results["recovery"] = [c.as_dict() for c in verify_recovery(truth, results, acfg.alpha)]
    figures = not args.no_svg and bool(cfg["report"].get("svg", True))
    manifest = emit_report(args.out, results, _effective(acfg, cfg), paths.inputs(), figures=figures)
    return manifest


def cmd_audit(args, cfg) -> int:
    m = _run(args, cfg, (args.analysis,))
    print(json.dumps({"out": str(args.out), "manifest_hash": m["manifest_hash"], "files": len(m["files"])}, sort_keys=True))
    return EXIT_OK


def cmd_report(args, cfg) -> int:
    m = _run(args, cfg, AUDITS)
    print(json.dumps({"out": str(args.out), "manifest_hash": m["manifest_hash"], "files": len(m["files"])}, sort_keys=True))
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "ingest": cmd_ingest, "audit": cmd_audit, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"visaudit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"visaudit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, UnicodeDecodeError) as exc:
        print(f"visaudit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to exit code 3
        log.debug("internal error", exc_info=True)
        print(f"visaudit: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
