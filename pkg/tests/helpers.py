"""Shared factories and fixture corpora for the test suite.

The planted corpus built here is the backbone of the filter and dataset
tests: 100 descriptions that are genuine self-reports plus 25 false
positives per heuristic filter, each crafted so that exactly one filter
rejects it and every false positive scores 0.0.
"""
from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone
from functools import lru_cache
from pathlib import Path

from identminer import resources
from identminer.ingest import ProfileMeta, Tweet, UserRecord
from identminer.textprep import TagLexicon, pos_tag, tokenize

EPOCH = datetime(2024, 6, 1, 12, 0, 0, tzinfo=timezone.utc)


def ts(hours: float = 0.0) -> datetime:
    return EPOCH + timedelta(hours=hours)


def iso(hours: float = 0.0) -> str:
    return ts(hours).isoformat().replace("+00:00", "Z")


@lru_cache(maxsize=1)
def tag_lexicon() -> TagLexicon:
    return resources.load_tag_lexicon()


def tag(text: str):
    """Tokenize and tag with the packaged lexicon."""
    return pos_tag(tokenize(text), tag_lexicon())


# ---------------------------------------------------------------------------
# object factories

def make_tweet(text: str = "just another update", hours: float = -1.0,
               source_app: str = "Twitter for iPhone", **flags) -> Tweet:
    defaults = dict(has_image=False, has_url=False, mentions_user=False,
                    geotagged=False)
    defaults.update(flags)
    return Tweet(text=text, source_app=source_app, created_at=ts(hours),
                 **defaults)


def make_profile(statuses_count: int = 0, account_created_hours: float | None = None,
                 followers_count: int = 0, **flags) -> ProfileMeta:
    defaults = dict(has_profile_url=False, has_custom_image=False,
                    geo_enabled=False)
    defaults.update(flags)
    created = None if account_created_hours is None else ts(account_created_hours)
    return ProfileMeta(statuses_count=statuses_count,
                       account_created_at=created,
                       followers_count=followers_count, **defaults)


def make_user(user_id: str, description: str = "", name: str = "",
              hours: float = 0.0, tweets: tuple = (),
              profile: ProfileMeta | None = None) -> UserRecord:
    return UserRecord(user_id=user_id, name=name, description=description,
                      tweets=sorted(tweets, key=lambda t: t.created_at,
                                    reverse=True),
                      profile=profile if profile is not None else make_profile(),
                      snapshot_time=ts(hours))


# ---------------------------------------------------------------------------
# JSONL payload factories (mirror the objects above for CLI fixtures)

def tweet_payload(text: str = "just another update", hours: float = -1.0,
                  source_app: str = "Twitter for iPhone", **flags) -> dict:
    payload = {"text": text, "created_at": iso(hours), "source_app": source_app}
    payload.update(flags)
    return payload


def user_payload(user_id: str, description: str = "", name: str = "",
                 hours: float = 0.0, tweets: tuple = (),
                 profile: dict | None = None) -> dict:
    return {
        "user_id": user_id,
        "name": name,
        "description": description,
        "snapshot_time": iso(hours),
        "tweets": list(tweets),
        "profile": profile if profile is not None else {},
    }


def write_jsonl(path, rows) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            if isinstance(row, str):
                handle.write(row + "\n")
            else:
                handle.write(json.dumps(row) + "\n")
    return path


# ---------------------------------------------------------------------------
# the planted corpus

# query keyword per class, in the canonical class order W, B, HL, A
PLANT_QUERIES = (("white", "W"), ("black", "B"), ("hispanic", "HL"),
                 ("asian", "A"))
# head nouns; all are NN entries of the packaged tag lexicon and none is a
# person keyword, so the true profiles never form person bigrams
PLANT_HEADS = ("farmer", "nurse", "teacher", "writer", "artist")

_SECOND_COLORS = ("red", "blue", "green", "purple", "orange")
_COLOR_TAILS = ("outfit ideas", "wardrobe goals", "decor fan",
                "design lover", "theme account")
_PLURAL_TAILS = ("watcher", "fan page", "blog account", "energy lover",
                 "music fan")
_BLOCK_PAIRS = (("black", "sheep"), ("white", "christmas"),
                ("asian", "fusion"), ("latin", "jazz"),
                ("hispanic", "heritage"))
_BLOCK_TAILS = ("of the family", "vibes only", "is my thing", "fan club",
                "all day")
_QUOTE_TAILS = ("is my motto", "she said once", "was the answer",
                "on repeat daily", "as they say")


def planted_rows() -> list[tuple[str, str, str]]:
    """(user_id, description, group) rows; group names the single filter a
    false positive trips, or "true"."""
    rows = []
    for i in range(100):
        query, _ = PLANT_QUERIES[i // 25]
        head = PLANT_HEADS[i % len(PLANT_HEADS)]
        article = "an" if query == "asian" else "a"
        rows.append((f"t{i:03d}", f"i am {article} {query} {head}", "true"))
    for i in range(25):
        # a second basic color elsewhere in the text, no trigger
        desc = f"black and {_SECOND_COLORS[i % 5]} {_COLOR_TAILS[i // 5]}"
        rows.append((f"fc{i:02d}", desc, "color"))
    for i in range(25):
        # the token after the keyword is a plural noun
        rows.append((f"fp{i:02d}", f"white people {_PLURAL_TAILS[i % 5]}",
                     "plural"))
    for i in range(25):
        # keyword + next token form a blocklisted bigram
        query, second = _BLOCK_PAIRS[i % 5]
        rows.append((f"fb{i:02d}", f"{query} {second} {_BLOCK_TAILS[i // 5]}",
                     "bigram_blocklist"))
    for i in range(25):
        # the keyword sits inside a quoted span
        query = "black" if i % 2 == 0 else "white"
        rows.append((f"fq{i:02d}", f'"i am {query}" {_QUOTE_TAILS[i // 5]}',
                     "quote"))
    return rows


def planted_users() -> tuple[list[UserRecord], set[str], dict[str, set[str]]]:
    """Records plus the true-positive ids and the ids per tripped filter."""
    records, true_ids, fp_ids = [], set(), {}
    for user_id, description, group in planted_rows():
        records.append(make_user(user_id, description=description))
        if group == "true":
            true_ids.add(user_id)
        else:
            fp_ids.setdefault(group, set()).add(user_id)
    return records, true_ids, fp_ids


def planted_payloads() -> list[dict]:
    return [user_payload(user_id, description=description)
            for user_id, description, _ in planted_rows()]


# ---------------------------------------------------------------------------
# label fixtures for evaluation tests

def skewed_labels():
    """1000 gold labels with class shares 80.8 / 9.5 / 6.1 / 3.6 percent."""
    from identminer.filters import ClassLabel
    counts = {ClassLabel.WHITE: 808, ClassLabel.BLACK: 95,
              ClassLabel.HISPANIC_LATINX: 61, ClassLabel.ASIAN: 36}
    labels = []
    for label, count in counts.items():
        labels.extend([label] * count)
    return labels
