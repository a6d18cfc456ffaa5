"""Content categories and news-domain bias/factuality labels for posts."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import IO
from urllib.parse import urlsplit

from .errors import DataError

BIASES = ("extreme_left", "left", "left_center", "least_biased", "right_center", "right", "extreme_right")
FACTUALITIES = ("very_low", "low", "mixed", "mostly_factual", "high", "very_high")
CATEGORIES = ("news_outlets", "no_domain", "other", "other_social", "twitter")

DEFAULT_SELF_DOMAINS = frozenset({"twitter.com", "x.com"})
DEFAULT_SOCIAL_DOMAINS = frozenset(
    {"youtube.com", "facebook.com", "instagram.com", "tiktok.com", "t.me", "threads.net"}
)


@lru_cache(maxsize=1)
def _public_suffixes() -> frozenset[str]:
    text = resources.files("visaudit.data").joinpath("public_suffixes.txt").read_text("utf-8")
    return frozenset(
        line.strip().lower() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


def url_host(url: str) -> str | None:
    """Lowercase host of ``url``; scheme-less ``cnn.com/x`` is accepted."""
    try:
        parts = urlsplit(url)
        if not parts.netloc and not parts.scheme:
            parts = urlsplit("//" + url)
        host = parts.hostname
    except ValueError:
        return None
    if not host:
        return None
    host = host.rstrip(".")
    if "." not in host:
        return None
    return host


@lru_cache(maxsize=65536)
def registrable_domain(host: str) -> str:
    """Public suffix plus one label, e.g. ``edition.cnn.com`` -> ``cnn.com``."""
    host = host.lower().rstrip(".")
    labels = host.split(".")
    if len(labels) <= 2 or labels[-1].isdigit():
        return host
    suffixes = _public_suffixes()
    # longest listed suffix wins; unlisted TLDs are one-label suffixes
    n_suffix = 1
    for i in range(1, len(labels) - 1):
        if ".".join(labels[i:]) in suffixes:
            n_suffix = len(labels) - i
            break
    return ".".join(labels[-(n_suffix + 1):])


def _candidates(host: str) -> list[str]:
    """Host and its parent domains down to the registrable domain."""
    reg = registrable_domain(host)
    out = [host]
    while out[-1] != reg and "." in out[-1]:
        out.append(out[-1].split(".", 1)[1])
    if out[-1] != reg:
        out.append(reg)
    return out


def _in_set(host: str, domains: frozenset[str]) -> bool:
    return any(c in domains for c in _candidates(host))


@dataclass(frozen=True, slots=True)
class DomainLabel:
    domain: str
    bias: str
    factuality: str


@dataclass
class LabelTable:
    labels: dict[str, DomainLabel] = field(default_factory=dict)
    duplicates: int = 0
    rejected: int = 0

    def __len__(self) -> int:
        return len(self.labels)

    def lookup(self, domain_or_host: str) -> DomainLabel | None:
        host = domain_or_host.lower().rstrip(".")
        if host.startswith("www."):
            host = host[4:]
        for c in _candidates(host):
            lab = self.labels.get(c)
            if lab is not None:
                return lab
        return None

    def lookup_url(self, url: str) -> DomainLabel | None:
        host = url_host(url)
        return None if host is None else self.lookup(host)

    def add(self, domain: str, bias: str, factuality: str) -> None:
        key = _normalise_domain(domain)
        if key in self.labels:
            self.duplicates += 1
        self.labels[key] = DomainLabel(key, bias, factuality)


def _normalise_domain(domain: str) -> str:
    d = domain.strip().lower().rstrip(".")
    if "/" in d or ":" in d:
        d = url_host(d) or d
    if d.startswith("www."):
        d = d[4:]
    return d


def load_label_table(stream: IO) -> LabelTable:
    """Read a ``domain,bias,factuality`` CSV. Later duplicates replace earlier rows."""
    text = stream if isinstance(stream, io.TextIOBase) else io.TextIOWrapper(stream, encoding="utf-8")
    reader = csv.DictReader(text)
    missing = {"domain", "bias", "factuality"} - set(reader.fieldnames or ())
    if missing:
        raise DataError(f"label table missing columns: {', '.join(sorted(missing))}")
    table = LabelTable()
    for row in reader:
        domain = (row.get("domain") or "").strip()
        bias = (row.get("bias") or "").strip().lower()
        fact = (row.get("factuality") or "").strip().lower()
        if not domain or bias not in BIASES or fact not in FACTUALITIES:
            table.rejected += 1
            continue
        table.add(domain, bias, fact)
    return table


@dataclass(frozen=True)
class DomainSets:
    self_domains: frozenset[str] = DEFAULT_SELF_DOMAINS
    social_domains: frozenset[str] = DEFAULT_SOCIAL_DOMAINS

    @classmethod
    def from_config(cls, cfg: dict | None) -> DomainSets:
        cfg = cfg or {}
        return cls(
            frozenset(d.lower() for d in cfg.get("self_domains", DEFAULT_SELF_DOMAINS)),
            frozenset(d.lower() for d in cfg.get("social_domains", DEFAULT_SOCIAL_DOMAINS)),
        )


def categorize_urls(
    urls: Sequence[str],
    table: LabelTable,
    social_domains: Iterable[str] = DEFAULT_SOCIAL_DOMAINS,
    self_domains: Iterable[str] = DEFAULT_SELF_DOMAINS,
) -> str:
    if not urls:
        return "no_domain"
    social = social_domains if isinstance(social_domains, frozenset) else frozenset(social_domains)
    selfd = self_domains if isinstance(self_domains, frozenset) else frozenset(self_domains)
    hosts = [h for h in (url_host(u) for u in urls) if h is not None]
    if any(table.lookup(h) is not None for h in hosts):
        return "news_outlets"
    if any(_in_set(h, selfd) for h in hosts):
        return "twitter"
    if any(_in_set(h, social) for h in hosts):
        return "other_social"
    return "other"


def categorize(post, table: LabelTable, social_domains=DEFAULT_SOCIAL_DOMAINS, self_domains=DEFAULT_SELF_DOMAINS) -> str:
    """Exactly one of :data:`CATEGORIES` for ``post``.

    Precedence: no URLs, then any labelled news domain, then self-platform
    links, then other social platforms, else ``other``.
    """
    return categorize_urls(post.urls, table, social_domains, self_domains)


def label_bias_factuality(post, table: LabelTable) -> tuple[str, str] | None:
    """(bias, factuality) of the first URL whose domain is in ``table``."""
    for url in post.urls:
        lab = table.lookup_url(url)
        if lab is not None:
            return lab.bias, lab.factuality
    return None


def write_label_table(stream: IO[str], labels: Iterable[DomainLabel]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["domain", "bias", "factuality"])
    for lab in labels:
        writer.writerow([lab.domain, lab.bias, lab.factuality])


class Categorizer:
    """Cached categorize/label for bulk ingestion; results match the functions above."""

    def __init__(self, table: LabelTable, domains: DomainSets | None = None):
        self.table = table
        self.domains = domains or DomainSets()
        self._hosts: dict[str, tuple[DomainLabel | None, int]] = {}

    def _host_info(self, url: str) -> tuple[DomainLabel | None, int]:
        host = url_host(url)
        if host is None:
            return None, 0
        info = self._hosts.get(host)
        if info is not None:
            return info
        lab = self.table.lookup(host)
        if lab is not None:
            rank = 3
        elif _in_set(host, self.domains.self_domains):
            rank = 2
        elif _in_set(host, self.domains.social_domains):
            rank = 1
        else:
            rank = 0
        info = (lab, rank)
        self._hosts[host] = info
        return info

    def __call__(self, urls: Sequence[str]) -> tuple[str, DomainLabel | None]:
        if not urls:
            return "no_domain", None
        best = 0
        first = None
        for u in urls:
            lab, rank = self._host_info(u)
            if first is None and lab is not None:
                first = lab
            if rank > best:
                best = rank
        return _RANK_CATEGORY[best], first


_RANK_CATEGORY = {3: "news_outlets", 2: "twitter", 1: "other_social", 0: "other"}
