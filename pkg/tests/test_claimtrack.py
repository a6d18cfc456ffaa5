from __future__ import annotations

import io

import pytest

from visaudit.claimtrack import (
    ClaimSeed,
    DocumentFrequency,
    build_seeds,
    extract_keywords,
    heuristic_checkworthiness,
    load_theme_labels,
    match_claims,
    seed_sample,
    tokenize,
)
from visaudit.ingest import PostRecord


def P(pid, text="", **counts):
    return PostRecord(pid, "a", text=text, view_count=counts.pop("view_count", 0), **counts)


def test_tokenize():
    toks = tokenize("The Vaccine causes https://x.com/a @someone café ok!")
    assert "vaccine" in toks and "causes" in toks
    assert "the" not in toks and "ok" not in toks
    assert not any("x.com" in t or "someone" in t for t in toks)
    assert "café" in toks  # NFC normalised


def test_checkworthiness():
    assert heuristic_checkworthiness("Over 500 people died") == 1.0
    assert heuristic_checkworthiness("the White House said so") == 1.0
    assert heuristic_checkworthiness("nice day today") == 0.0
    assert heuristic_checkworthiness("see https://x.com/123") == 0.0


def test_seed_sample_union():
    posts = [
        P("p1", like_count=10, retweet_count=0),
        P("p2", like_count=5, retweet_count=9),
        P("p3", like_count=1, retweet_count=1, view_count=100),
        P("p4"),
    ]
    ids = [p.post_id for p in seed_sample(posts, 1)]
    assert ids == ["p2", "p1", "p3"]  # retweets, replies (tie -> p1), likes, quotes, views
    assert {p.post_id for p in seed_sample(posts, 10)} == {"p1", "p2", "p3", "p4"}


def test_idf_and_keywords():
    corpus = DocumentFrequency.from_texts(["alpha beta", "alpha gamma", "alpha delta"])
    assert corpus.n_docs == 3
    assert corpus.idf("alpha") < corpus.idf("beta") < corpus.idf("unseen")
    assert extract_keywords("alpha beta beta gamma", corpus, k=2) == ["beta", "gamma"]
    assert extract_keywords("the and", corpus) == []


def test_build_and_match():
    cands = [
        P("s1", "Mayor Smith stole 500 ballots in Springfield"),
        P("s2", "lovely weather here"),
        P("s3", "Unlabelled Claim 42 here"),
    ]
    corpus = DocumentFrequency.from_texts([p.text for p in cands] + ["ballots everywhere", "springfield news"])
    seeds = build_seeds(cands, corpus, {"s1": "elections", "s2": "weather"}, k=3)
    assert [s.post_id for s in seeds] == ["s1"]  # s2 not check-worthy, s3 unlabelled
    kws = seeds[0].keywords
    assert len(kws) == 3
    posts = [
        P("m1", " ".join(kws) + " and more"),
        P("m2", kws[0] + " only"),
        P("m3", " ".join(reversed(kws)).upper()),
    ]
    assert match_claims(posts, seeds) == {"elections": ["m1", "m3"]}


def test_match_multiple_themes():
    seeds = [ClaimSeed("a", "", ["xylo", "phone"], "t1"), ClaimSeed("b", "", ["phone"], "t2")]
    out = match_claims([P("q", "xylo phone"), P("r", "phone")], seeds)
    assert out == {"t1": ["q"], "t2": ["q", "r"]}


def test_custom_scorer():
    cands = [P("s1", "plain words only")]
    corpus = DocumentFrequency.from_texts(["plain words only"])
    seeds = build_seeds(cands, corpus, {"s1": "t"}, scorer=lambda t: 0.9)
    assert len(seeds) == 1


def test_load_theme_labels():
    data = b"post_id,theme\np1,war\n,skip\np2,\np3, vaccines \n"
    assert load_theme_labels(io.BytesIO(data)) == {"p1": "war", "p3": "vaccines"}
    assert load_theme_labels(io.StringIO("post_id,theme\nx,y\n")) == {"x": "y"}


@pytest.mark.parametrize("k", [1, 2, 5])
def test_keywords_at_most_k(k):
    corpus = DocumentFrequency.from_texts(["one two three four five six seven"])
    assert len(extract_keywords("alpha bravo charlie delta echo foxtrot", corpus, k)) == k
