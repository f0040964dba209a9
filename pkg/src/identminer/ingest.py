"""Stream archived user exports (JSON lines) into canonical UserRecord values.

One line is one user snapshot. Malformed lines become ParseFailure values instead
of exceptions so a bad record never aborts the stream; stream-level I/O errors
still propagate. Missing optional fields default to false/0/"" and are tallied
in an optional per-field missingness counter.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import IO, Iterable, Iterator, Union


@dataclass(frozen=True)
class Tweet:
    text: str
    source_app: str
    created_at: datetime
    has_image: bool = False
    has_url: bool = False
    mentions_user: bool = False
    geotagged: bool = False


@dataclass(frozen=True)
class ProfileMeta:
    has_profile_url: bool = False
    has_custom_image: bool = False
    geo_enabled: bool = False
    statuses_count: int = 0
    account_created_at: datetime | None = None
    # not part of the minimal export schema, but some archives carry it and the
    # name model wants it; absent -> 0
    followers_count: int = 0


@dataclass
class UserRecord:
    user_id: str
    name: str
    description: str
    tweets: list[Tweet]
    profile: ProfileMeta
    snapshot_time: datetime


@dataclass(frozen=True)
class ParseFailure:
    line_no: int
    reason: str


_OPTIONAL_TWEET_FLAGS = ("has_image", "has_url", "mentions_user", "geotagged")


def parse_timestamp(raw: str) -> datetime:
    """RFC-3339 string to an aware UTC datetime. Raises ValueError."""
    if not isinstance(raw, str):
        raise ValueError("timestamp must be a string")
    # Python 3.10 fromisoformat does not accept a trailing Z
    text = raw.strip().replace("Z", "+00:00").replace("z", "+00:00")
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def _parse_tweet(obj: dict, missingness: Counter) -> Tweet:
    if not isinstance(obj, dict):
        raise ValueError("tweet is not an object")
    text = obj.get("text")
    if not isinstance(text, str):
        raise ValueError("tweet text missing or not a string")
    if "created_at" not in obj:
        raise ValueError("tweet created_at missing")
    created = parse_timestamp(obj["created_at"])
    source = obj.get("source_app")
    if source is None:
        missingness["tweet.source_app"] += 1
        source = ""
    flags = {}
    for key in _OPTIONAL_TWEET_FLAGS:
        if key not in obj:
            missingness[f"tweet.{key}"] += 1
            flags[key] = False
        else:
            flags[key] = bool(obj[key])
    return Tweet(text=text, source_app=str(source), created_at=created, **flags)


def _parse_profile(obj, snapshot: datetime, missingness: Counter) -> ProfileMeta:
    if obj is None:
        missingness["profile"] += 1
        obj = {}
    if not isinstance(obj, dict):
        raise ValueError("profile is not an object")
    bools = {}
    for key in ("has_profile_url", "has_custom_image", "geo_enabled"):
        if key not in obj:
            missingness[f"profile.{key}"] += 1
            bools[key] = False
        else:
            bools[key] = bool(obj[key])
    if "statuses_count" not in obj:
        missingness["profile.statuses_count"] += 1
        statuses = 0
    else:
        statuses = int(obj["statuses_count"])
        if statuses < 0:
            raise ValueError("statuses_count is negative")
    if "account_created_at" not in obj or obj["account_created_at"] is None:
        missingness["profile.account_created_at"] += 1
        created = None
    else:
        created = parse_timestamp(obj["account_created_at"])
        if created > snapshot:
            raise ValueError("account_created_at is after snapshot_time")
    if "followers_count" not in obj:
        missingness["profile.followers_count"] += 1
        followers = 0
    else:
        followers = int(obj["followers_count"])
        if followers < 0:
            raise ValueError("followers_count is negative")
    return ProfileMeta(statuses_count=statuses, account_created_at=created,
                       followers_count=followers, **bools)


def parse_user_line(line: str, line_no: int,
                    missingness: Counter | None = None) -> Union[UserRecord, ParseFailure]:
    counter = missingness if missingness is not None else Counter()
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        return ParseFailure(line_no, f"bad JSON: {exc.msg}")
    if not isinstance(obj, dict):
        return ParseFailure(line_no, "record is not an object")
    try:
        user_id = obj.get("user_id")
        if not isinstance(user_id, str) or not user_id:
            raise ValueError("user_id missing or empty")
        if "snapshot_time" not in obj:
            raise ValueError("snapshot_time missing")
        snapshot = parse_timestamp(obj["snapshot_time"])
        name = obj.get("name")
        if name is None:
            counter["name"] += 1
            name = ""
        description = obj.get("description")
        if description is None:
            counter["description"] += 1
            description = ""
        raw_tweets = obj.get("tweets")
        if raw_tweets is None:
            counter["tweets"] += 1
            raw_tweets = []
        if not isinstance(raw_tweets, list):
            raise ValueError("tweets is not a list")
        tweets = [_parse_tweet(t, counter) for t in raw_tweets]
        tweets.sort(key=lambda t: t.created_at, reverse=True)
        profile = _parse_profile(obj.get("profile"), snapshot, counter)
        return UserRecord(user_id=user_id, name=str(name), description=str(description),
                          tweets=tweets, profile=profile, snapshot_time=snapshot)
    except (ValueError, TypeError) as exc:
        return ParseFailure(line_no, str(exc))


def load_users(stream: IO, missingness: Counter | None = None
               ) -> Iterator[Union[UserRecord, ParseFailure]]:
    """Yield one UserRecord or ParseFailure per input line, in input order.

    Accepts byte or text streams. Line numbers are 1-based. Blank lines count
    as failures so failures + records always add up to the line count.
    """
    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                yield ParseFailure(line_no, "invalid UTF-8")
                continue
        else:
            line = raw
        line = line.rstrip("\r\n")
        if not line.strip():
            yield ParseFailure(line_no, "blank line")
            continue
        yield parse_user_line(line, line_no, missingness)


def dedupe_latest(records: Iterable[UserRecord]) -> dict[str, UserRecord]:
    """Keep each user's record with the largest snapshot_time; on a tie the
    later stream position wins. Merge is associative and commutative up to the
    tie rule, so partial maps from parallel shards can be folded in any order."""
    latest: dict[str, UserRecord] = {}
    for record in records:
        current = latest.get(record.user_id)
        if current is None or record.snapshot_time >= current.snapshot_time:
            latest[record.user_id] = record
    return latest
