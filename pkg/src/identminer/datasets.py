"""Builders for the three weakly-labeled datasets (QB, HF, CB), merging with
externally labeled sets, and seeded splitting / class balancing.

QB: users whose description has a query keyword immediately followed by a
person keyword. HF: users with at least one query match that survives all
enabled filters and whose max passing score reaches the threshold. CB: the
top-k users per class by score from the deduplicated QB union HF pool, with k
defaulting to the smallest class count.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence, TypeVar

from .filters import (CLASS_ORDER, PERSON_KEYWORDS, ClassLabel, FilterConfig,
                      QueryMatch, apply_filter_chain, assign_class,
                      find_query_matches, person_bigram_match)
from .scorer import ScoreParams, score_description
from .textprep import SelfReportLexicon, TagLexicon, TaggedToken, pos_tag, tokenize
from .util import ceil_fraction, pmap_ordered

T = TypeVar("T")

SOURCES = ("QB", "HF", "CB", "crowd", "survey")
AUTO_SOURCES = frozenset({"QB", "HF", "CB"})
# an externally annotated label beats an automatically derived one on collision
_SOURCE_PRIORITY = {"QB": 0, "HF": 0, "CB": 0, "crowd": 1, "survey": 1}


@dataclass(frozen=True)
class LabeledUser:
    user_id: str
    label: ClassLabel
    score: float | None
    source: str

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.source in AUTO_SOURCES and self.score is None:
            raise ValueError(f"{self.source} users must carry a score")


@dataclass
class DatasetSplit:
    train: list[LabeledUser]
    dev: list[LabeledUser]
    test: list[LabeledUser]
    seed: int


@dataclass
class UserMatchReport:
    """Per-user query analysis shared by the dataset builders."""
    user_id: str
    label: ClassLabel
    tagged: list[TaggedToken]
    raw_text: str
    matches: list[QueryMatch]
    scores: list[float]  # aligned with matches


def analyze_record(record, tag_lexicon: TagLexicon, lexicon: SelfReportLexicon,
                   params: ScoreParams, query_map=None,
                   contractions=None) -> UserMatchReport | None:
    """Tag, match, classify, and score one user; None unless the description
    matches exactly one class."""
    tagged = pos_tag(tokenize(record.description, contractions=contractions),
                     tag_lexicon)
    matches = find_query_matches(tagged, query_map)
    label = assign_class(matches)
    if not isinstance(label, ClassLabel):
        return None
    scores = [score_description(tagged, match, lexicon, params).value
              for match in matches]
    return UserMatchReport(record.user_id, label, tagged, record.description,
                           matches, scores)


def match_reports(corpus: Iterable, tag_lexicon: TagLexicon,
                  lexicon: SelfReportLexicon, params: ScoreParams,
                  query_map=None, contractions=None,
                  workers: int = 1) -> list[UserMatchReport]:
    """Analyze every corpus user; keep only those matching exactly one class."""
    results = pmap_ordered(
        lambda record: analyze_record(record, tag_lexicon, lexicon, params,
                                      query_map, contractions),
        corpus, workers)
    return [report for report in results if report is not None]


def build_qb(corpus: Iterable, tag_lexicon: TagLexicon,
             lexicon: SelfReportLexicon, params: ScoreParams,
             person_keywords: frozenset[str] = PERSON_KEYWORDS,
             query_map=None, contractions=None, workers: int = 1) -> list[LabeledUser]:
    out = []
    for report in match_reports(corpus, tag_lexicon, lexicon, params,
                                query_map, contractions, workers):
        if any(person_bigram_match(report.tagged, match, person_keywords)
               for match in report.matches):
            out.append(LabeledUser(report.user_id, report.label,
                                   max(report.scores), "QB"))
    return out


def build_hf(corpus: Iterable, tag_lexicon: TagLexicon,
             lexicon: SelfReportLexicon, params: ScoreParams,
             filter_config: FilterConfig, colors: frozenset[str],
             blocklist: frozenset[tuple[str, str]],
             query_map=None, contractions=None, workers: int = 1) -> list[LabeledUser]:
    """Users with a fully-filtered passing match scoring at or above the
    threshold. The threshold applies to the max over passing matches only."""
    out = []
    for report in match_reports(corpus, tag_lexicon, lexicon, params,
                                query_map, contractions, workers):
        passing_scores = [
            score for match, score in zip(report.matches, report.scores)
            if apply_filter_chain(report.tagged, report.raw_text, match,
                                  filter_config, colors, blocklist).passed]
        if passing_scores and max(passing_scores) >= params.threshold:
            out.append(LabeledUser(report.user_id, report.label,
                                   max(passing_scores), "HF"))
    return out


def merge_candidates(qb: Sequence[LabeledUser],
                     hf: Sequence[LabeledUser]) -> list[LabeledUser]:
    """Deduplicate QB union HF by user_id, keeping the higher score; on a tie
    the earlier entry (QB first) stays."""
    best: dict[str, LabeledUser] = {}
    for user in list(qb) + list(hf):
        current = best.get(user.user_id)
        if current is None or (user.score or 0.0) > (current.score or 0.0):
            best[user.user_id] = user
    return list(best.values())


def build_cb(candidates: Sequence[LabeledUser], k: int | None = None) -> list[LabeledUser]:
    """Top-k per class by score (ties by user_id ascending), re-tagged CB.

    k defaults to the smallest class count among classes present; an explicit
    k larger than some class count is an error. Output is grouped in fixed
    class order, so all four class counts are exactly k.
    """
    by_class: dict[ClassLabel, list[LabeledUser]] = {label: [] for label in CLASS_ORDER}
    for user in candidates:
        if user.score is None:
            raise ValueError(f"candidate {user.user_id} has no score")
        by_class[user.label].append(user)
    counts = {label: len(users) for label, users in by_class.items()}
    if k is None:
        # absent classes must fail the check below, not drag k to zero
        present = [count for count in counts.values() if count > 0]
        k = min(present) if present else 0
    short = [label.value for label in CLASS_ORDER if counts[label] < k]
    if short:
        raise ValueError(f"classes {short} have fewer than k={k} candidates")
    out = []
    for label in CLASS_ORDER:
        ranked = sorted(by_class[label], key=lambda u: (-u.score, u.user_id))
        out.extend(replace(user, source="CB") for user in ranked[:k])
    return out


def split_train_dev(users: Sequence[LabeledUser], train_fraction: float = 0.6,
                    seed: int = 0, stratified: bool = False) -> DatasetSplit:
    """Seeded shuffle, then the first ceil(train_fraction * n) go to train.

    stratified applies the same rule per class and concatenates in fixed
    class order.
    """
    rng = random.Random(seed)
    if not stratified:
        pool = list(users)
        rng.shuffle(pool)
        cut = ceil_fraction(train_fraction, len(pool))
        return DatasetSplit(pool[:cut], pool[cut:], [], seed)
    train: list[LabeledUser] = []
    dev: list[LabeledUser] = []
    for label in CLASS_ORDER:
        pool = [user for user in users if user.label == label]
        rng.shuffle(pool)
        cut = ceil_fraction(train_fraction, len(pool))
        train.extend(pool[:cut])
        dev.extend(pool[cut:])
    return DatasetSplit(train, dev, [], seed)


def _default_label(item) -> ClassLabel:
    return item.label


def balance_subsample(items: Sequence[T], seed: int,
                      label_of: Callable[[T], ClassLabel] = _default_label) -> list[T]:
    """m = min class count among classes present; return m seeded-random
    items per class, concatenated in fixed class order."""
    groups: dict[ClassLabel, list[T]] = {}
    for item in items:
        groups.setdefault(label_of(item), []).append(item)
    if not groups:
        return []
    m = min(len(members) for members in groups.values())
    rng = random.Random(seed)
    out: list[T] = []
    for label in CLASS_ORDER:
        if label in groups:
            out.extend(rng.sample(groups[label], m))
    return out


def merge(a: Sequence[LabeledUser], b: Sequence[LabeledUser]) -> list[LabeledUser]:
    """Concatenate, resolving user_id collisions by source priority: crowd and
    survey entries beat QB/HF/CB; equal priority keeps the first seen."""
    kept: dict[str, LabeledUser] = {}
    for user in list(a) + list(b):
        current = kept.get(user.user_id)
        if current is None:
            kept[user.user_id] = user
        elif _SOURCE_PRIORITY[user.source] > _SOURCE_PRIORITY[current.source]:
            kept[user.user_id] = user
    return list(kept.values())


def write_dataset_tsv(users: Sequence[LabeledUser], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for user in users:
            score = "" if user.score is None else repr(user.score)
            handle.write(f"{user.user_id}\t{user.label.value}\t{score}\t{user.source}\n")


def read_dataset_tsv(path) -> list[LabeledUser]:
    users = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{line_no}: expected 4 tab-separated fields")
            user_id, code, score_text, source = parts
            score = float(score_text) if score_text else None
            users.append(LabeledUser(user_id, ClassLabel.from_code(code),
                                     score, source))
    return users


def split_manifest(split: DatasetSplit, train_fraction: float = 0.6) -> dict:
    return {
        "seed": split.seed,
        "train_fraction": train_fraction,
        "train": [user.user_id for user in split.train],
        "dev": [user.user_id for user in split.dev],
        "test": [user.user_id for user in split.test],
    }
