"""Claim seeding, keyword extraction and keyword-conjunction matching.

A deterministic stand-in for learned claim detection: seeds are the most
engaged posts, a pluggable scorer decides check-worthiness, keywords are the
top TF-IDF tokens of each seed, and a post matches a seed when its token set
contains every seed keyword.
"""

from __future__ import annotations

import csv
import io
import math
import re
import unicodedata
from collections import Counter, defaultdict
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import IO

SEED_CRITERIA = ("retweet_count", "reply_count", "like_count", "quote_count", "view_count")
CHECKWORTHY_THRESHOLD = 0.5
MIN_KEYWORD_LEN = 3

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_WORD_RE = re.compile(r"\w+", re.UNICODE)
_CAP_BIGRAM_RE = re.compile(r"\b[A-Z][\w'-]*\s+[A-Z][\w'-]*")


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    text = resources.files("visaudit.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


def tokenize(text: str) -> list[str]:
    """NFC-normalised, lowercased word tokens with URLs, mentions and stopwords removed."""
    text = unicodedata.normalize("NFC", text or "")
    text = _MENTION_RE.sub(" ", _URL_RE.sub(" ", text)).lower()
    stop = stopwords()
    return [
        t for t in _WORD_RE.findall(text) if len(t) >= MIN_KEYWORD_LEN and t not in stop and not t.startswith("_")
    ]


def heuristic_checkworthiness(text: str) -> float:
    """1.0 when the text has a digit or a capitalised bigram, else 0.0."""
    clean = _MENTION_RE.sub(" ", _URL_RE.sub(" ", text or ""))
    if any(ch.isdigit() for ch in clean):
        return 1.0
    return 1.0 if _CAP_BIGRAM_RE.search(clean) else 0.0


Scorer = Callable[[str], float]


def seed_sample(posts: Sequence, per_criterion: int) -> list:
    """Union of the top ``per_criterion`` posts by each engagement counter.

    Ties are broken by post id; the union keeps first-seen order across
    criteria and drops duplicate post ids.
    """
    seen: set[str] = set()
    out = []
    for crit in SEED_CRITERIA:
        ranked = sorted(posts, key=lambda p: (-(getattr(p, crit) or 0), p.post_id))
        for p in ranked[:per_criterion]:
            if p.post_id not in seen:
                seen.add(p.post_id)
                out.append(p)
    return out


@dataclass
class DocumentFrequency:
    n_docs: int = 0
    df: Counter = field(default_factory=Counter)

    @classmethod
    def from_texts(cls, texts: Iterable[str]) -> DocumentFrequency:
        stats = cls()
        for t in texts:
            stats.add(t)
        return stats

    def add(self, text: str) -> None:
        self.n_docs += 1
        self.df.update(set(tokenize(text)))

    def idf(self, token: str) -> float:
        """Smoothed idf: ln((1 + N) / (1 + df)) + 1."""
        return math.log((1 + self.n_docs) / (1 + self.df.get(token, 0))) + 1.0


def extract_keywords(text: str, corpus_stats: DocumentFrequency, k: int = 3) -> list[str]:
    """Top-``k`` tokens of ``text`` by raw term count x idf; ties by token."""
    counts = Counter(tokenize(text))
    if not counts:
        return []
    scored = sorted(counts, key=lambda t: (-counts[t] * corpus_stats.idf(t), t))
    return scored[:k]


@dataclass
class ClaimSeed:
    post_id: str
    claim_text: str
    keywords: list[str]
    theme: str | None = None


def build_seeds(
    candidates: Sequence,
    corpus_stats: DocumentFrequency,
    themes: Mapping[str, str],
    k: int = 3,
    scorer: Scorer = heuristic_checkworthiness,
    threshold: float = CHECKWORTHY_THRESHOLD,
) -> list[ClaimSeed]:
    """Check-worthy, theme-labelled candidates with non-empty keyword sets."""
    seeds = []
    for p in candidates:
        theme = themes.get(p.post_id)
        if theme is None or scorer(p.text) < threshold:
            continue
        kws = extract_keywords(p.text, corpus_stats, k)
        if kws:
            seeds.append(ClaimSeed(p.post_id, p.text, kws, theme))
    return seeds


class SeedIndex:
    """Inverted index keyword -> seeds, for conjunctive matching."""

    def __init__(self, seeds: Sequence[ClaimSeed]):
        self.seeds = list(seeds)
        self._by_kw: dict[str, list[int]] = defaultdict(list)
        for i, s in enumerate(self.seeds):
            self._by_kw[s.keywords[0]].append(i)

    def matches(self, tokens: set[str]) -> list[int]:
        out = []
        for t in tokens:
            for i in self._by_kw.get(t, ()):
                if all(kw in tokens for kw in self.seeds[i].keywords):
                    out.append(i)
        return sorted(out)


def match_claims(posts: Iterable, seeds: Sequence[ClaimSeed]) -> dict[str, list[str]]:
    """Theme -> ids of posts whose tokens contain all keywords of some seed of that theme."""
    index = SeedIndex([s for s in seeds if s.keywords])
    out: dict[str, list[str]] = defaultdict(list)
    for p in posts:
        hit = index.matches(set(tokenize(p.text)))
        for theme in sorted({index.seeds[i].theme for i in hit}):
            out[theme].append(p.post_id)
    return dict(out)


def load_theme_labels(stream: IO) -> dict[str, str]:
    text = stream if isinstance(stream, io.TextIOBase) else io.TextIOWrapper(stream, encoding="utf-8")
    reader = csv.DictReader(text)
    out = {}
    for row in reader:
        pid = (row.get("post_id") or "").strip()
        theme = (row.get("theme") or "").strip()
        if pid and theme:
            out[pid] = theme
    return out
