"""Parsing and consistency filtering of post and account dumps.

Posts and accounts arrive as JSONL (one object per line) or CSV with a header.
Malformed rows are counted and skipped; they never abort a parse.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Any, Callable

from .errors import UsageError

KINDS = ("original", "reply", "quote", "retweet")
COUNTERS = ("like_count", "reply_count", "retweet_count", "quote_count")
POST_FIELDS = (
    "post_id",
    "author_id",
    "created_at",
    "text",
    "kind",
    "view_count",
    "like_count",
    "reply_count",
    "retweet_count",
    "quote_count",
    "urls",
    "in_reply_to_author",
    "retweeted_author",
)
ACCOUNT_FIELDS = ("account_id", "follower_count", "handle", "anchor_stance")
STANCES = ("side_a", "side_b")
FORMATS = ("jsonl", "csv")


class MalformedRecord(ValueError):
    pass


@dataclass(slots=True)
class PostRecord:
    post_id: str
    author_id: str
    kind: str = "original"
    created_at: datetime | None = None
    text: str = ""
    view_count: int | None = None
    like_count: int = 0
    reply_count: int = 0
    retweet_count: int = 0
    quote_count: int = 0
    urls: list[str] = field(default_factory=list)
    in_reply_to_author: str | None = None
    retweeted_author: str | None = None

    @property
    def interactions(self) -> int:
        return self.like_count + self.reply_count + self.retweet_count + self.quote_count

    def to_dict(self) -> dict[str, Any]:
        return {
            "post_id": self.post_id,
            "author_id": self.author_id,
            "created_at": format_timestamp(self.created_at),
            "text": self.text,
            "kind": self.kind,
            "view_count": self.view_count,
            "like_count": self.like_count,
            "reply_count": self.reply_count,
            "retweet_count": self.retweet_count,
            "quote_count": self.quote_count,
            "urls": list(self.urls),
            "in_reply_to_author": self.in_reply_to_author,
            "retweeted_author": self.retweeted_author,
        }


@dataclass(slots=True)
class AccountRecord:
    account_id: str
    follower_count: int
    handle: str | None = None
    anchor_stance: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "account_id": self.account_id,
            "follower_count": self.follower_count,
            "handle": self.handle,
            "anchor_stance": self.anchor_stance,
        }


# -- field coercion ---------------------------------------------------------


def _blank(value: Any) -> bool:
    return value is None or (isinstance(value, str) and value.strip() == "")


def _as_count(value: Any, name: str, optional: bool = False) -> int | None:
    if _blank(value):
        if optional:
            return None
        return 0
    if isinstance(value, bool):
        raise MalformedRecord(f"{name}: boolean is not a count")
    if isinstance(value, int):
        n = value
    elif isinstance(value, float):
        if not math.isfinite(value) or value != int(value):
            raise MalformedRecord(f"{name}: {value!r} is not an integer")
        n = int(value)
    elif isinstance(value, str):
        text = value.strip()
        try:
            n = int(text)
        except ValueError:
            try:
                f = float(text)
            except ValueError:
                raise MalformedRecord(f"{name}: {value!r} is not an integer") from None
            if not math.isfinite(f) or f != int(f):
                raise MalformedRecord(f"{name}: {value!r} is not an integer") from None
            n = int(f)
    else:
        raise MalformedRecord(f"{name}: unsupported type {type(value).__name__}")
    if n < 0:
        raise MalformedRecord(f"{name}: negative count {n}")
    return n


def _as_id(value: Any, name: str, optional: bool = False) -> str | None:
    if _blank(value):
        if optional:
            return None
        raise MalformedRecord(f"missing {name}")
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise MalformedRecord(f"{name}: unsupported type {type(value).__name__}")
    return str(value).strip()


def parse_timestamp(value: Any) -> datetime | None:
    """RFC 3339 to an aware UTC datetime; ``None`` when absent or unparseable."""
    if _blank(value) or not isinstance(value, str):
        return None
    text = value.strip()
    if text[-1:] in ("Z", "z"):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        return None
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime | None) -> str | None:
    if ts is None:
        return None
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _as_urls(value: Any, from_csv: bool) -> list[str]:
    if _blank(value):
        return []
    if isinstance(value, str):
        parts = value.split("|") if from_csv else [value]
        return [p.strip() for p in parts if p.strip()]
    if isinstance(value, list):
        urls = []
        for item in value:
            if not isinstance(item, str):
                raise MalformedRecord("urls: non-string entry")
            if item.strip():
                urls.append(item.strip())
        return urls
    raise MalformedRecord("urls: expected list or string")


def post_from_mapping(row: Mapping[str, Any], from_csv: bool = False) -> PostRecord:
    kind = row.get("kind")
    kind = "original" if _blank(kind) else str(kind).strip().lower()
    if kind not in KINDS:
        raise MalformedRecord(f"unknown kind {kind!r}")
    text = row.get("text")
    return PostRecord(
        post_id=_as_id(row.get("post_id"), "post_id"),
        author_id=_as_id(row.get("author_id"), "author_id"),
        kind=kind,
        created_at=parse_timestamp(row.get("created_at")),
        text="" if text is None else str(text),
        view_count=_as_count(row.get("view_count"), "view_count", optional=True),
        like_count=_as_count(row.get("like_count"), "like_count"),
        reply_count=_as_count(row.get("reply_count"), "reply_count"),
        retweet_count=_as_count(row.get("retweet_count"), "retweet_count"),
        quote_count=_as_count(row.get("quote_count"), "quote_count"),
        urls=_as_urls(row.get("urls"), from_csv),
        in_reply_to_author=_as_id(row.get("in_reply_to_author"), "in_reply_to_author", optional=True),
        retweeted_author=_as_id(row.get("retweeted_author"), "retweeted_author", optional=True),
    )


def account_from_mapping(row: Mapping[str, Any], from_csv: bool = False) -> AccountRecord:
    followers = _as_count(row.get("follower_count"), "follower_count", optional=True)
    if followers is None:
        raise MalformedRecord("missing follower_count")
    stance = row.get("anchor_stance")
    stance = None if _blank(stance) else str(stance).strip().lower()
    if stance is not None and stance not in STANCES:
        raise MalformedRecord(f"unknown anchor_stance {stance!r}")
    handle = row.get("handle")
    return AccountRecord(
        account_id=_as_id(row.get("account_id"), "account_id"),
        follower_count=followers,
        handle=None if _blank(handle) else str(handle),
        anchor_stance=stance,
    )


# -- streaming readers ------------------------------------------------------


class RecordStream:
    """Iterator over parsed records that counts and skips malformed rows."""

    def __init__(self, rows: Iterable[Any], build: Callable[[Any], Any]):
        self._rows = rows
        self._build = build
        self.skipped = 0
        self.parsed = 0
        self.errors: list[str] = []

    def __iter__(self) -> Iterator[Any]:
        for lineno, row in self._rows:
            try:
                rec = self._build(row)
            except (MalformedRecord, ValueError, TypeError, AttributeError) as exc:
                self.skipped += 1
                if len(self.errors) < 20:
                    self.errors.append(f"line {lineno}: {exc}")
                continue
            self.parsed += 1
            yield rec


def _text_stream(stream: IO) -> IO[str]:
    if isinstance(stream, io.TextIOBase):
        return stream
    return io.TextIOWrapper(stream, encoding="utf-8", newline="")


def _jsonl_rows(stream: IO) -> Iterator[tuple[int, Any]]:
    for lineno, line in enumerate(_text_stream(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            obj = exc
        yield lineno, obj


def _csv_rows(stream: IO) -> Iterator[tuple[int, Any]]:
    reader = csv.DictReader(_text_stream(stream))
    for lineno, row in enumerate(reader, start=2):
        if None in row:
            # more cells than header columns
            yield lineno, MalformedRecord("too many fields")
        else:
            yield lineno, row


def _builder(from_mapping, from_csv):
    def build(row):
        if isinstance(row, Exception):
            raise MalformedRecord(str(row))
        if not isinstance(row, Mapping):
            raise MalformedRecord("record is not an object")
        return from_mapping(row, from_csv)

    return build


def check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return fmt


def parse_posts(stream: IO, fmt: str = "jsonl") -> RecordStream:
    check_format(fmt)
    rows = _jsonl_rows(stream) if fmt == "jsonl" else _csv_rows(stream)
    return RecordStream(rows, _builder(post_from_mapping, fmt == "csv"))


def parse_accounts(stream: IO, fmt: str = "jsonl") -> RecordStream:
    check_format(fmt)
    rows = _jsonl_rows(stream) if fmt == "jsonl" else _csv_rows(stream)
    return RecordStream(rows, _builder(account_from_mapping, fmt == "csv"))


def format_for_path(path: str | Path, default: str = "jsonl") -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    return default


# -- writers ----------------------------------------------------------------


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, list):
        return "|".join(value)
    return str(value)


def write_posts(stream: IO[str], posts: Iterable[PostRecord], fmt: str = "jsonl") -> int:
    check_format(fmt)
    n = 0
    if fmt == "jsonl":
        for p in posts:
            stream.write(json.dumps(p.to_dict(), ensure_ascii=False))
            stream.write("\n")
            n += 1
    else:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(POST_FIELDS)
        for p in posts:
            d = p.to_dict()
            writer.writerow([_csv_cell(d[k]) for k in POST_FIELDS])
            n += 1
    return n


def write_accounts(stream: IO[str], accounts: Iterable[AccountRecord], fmt: str = "jsonl") -> int:
    check_format(fmt)
    n = 0
    if fmt == "jsonl":
        for a in accounts:
            stream.write(json.dumps(a.to_dict(), ensure_ascii=False))
            stream.write("\n")
            n += 1
    else:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(ACCOUNT_FIELDS)
        for a in accounts:
            d = a.to_dict()
            writer.writerow([_csv_cell(d[k]) for k in ACCOUNT_FIELDS])
            n += 1
    return n


# -- consistency filter -----------------------------------------------------


@dataclass
class FilterReport:
    n_input: int = 0
    kept: int = 0
    missing_views: int = 0
    interactions_exceed_views: int = 0

    def __add__(self, other: FilterReport) -> FilterReport:
        return FilterReport(
            self.n_input + other.n_input,
            self.kept + other.kept,
            self.missing_views + other.missing_views,
            self.interactions_exceed_views + other.interactions_exceed_views,
        )

    @property
    def removed(self) -> int:
        return self.missing_views + self.interactions_exceed_views

    def as_dict(self) -> dict[str, int]:
        return {
            "n_input": self.n_input,
            "kept": self.kept,
            "missing_views": self.missing_views,
            "interactions_exceed_views": self.interactions_exceed_views,
        }


def rejection_reason(post: PostRecord) -> str | None:
    if post.view_count is None:
        return "missing_views"
    if post.interactions > post.view_count:
        return "interactions_exceed_views"
    return None


def iter_valid(posts: Iterable[PostRecord], report: FilterReport) -> Iterator[PostRecord]:
    """Streaming form of :func:`filter_valid`; updates ``report`` in place."""
    for post in posts:
        report.n_input += 1
        reason = rejection_reason(post)
        if reason is None:
            report.kept += 1
            yield post
        elif reason == "missing_views":
            report.missing_views += 1
        else:
            report.interactions_exceed_views += 1


def filter_valid(posts: Iterable[PostRecord]) -> tuple[list[PostRecord], FilterReport]:
    report = FilterReport()
    kept = list(iter_valid(posts, report))
    return kept, report
