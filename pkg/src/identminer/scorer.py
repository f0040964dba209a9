"""Distance-weighted self-report co-occurrence score and its grid tuning.

For a query occurrence q, every self-report word w in the window contributes
(1/D(w,q)) * (O_s(w)/O(w)); the tfidf weighting multiplies each term by
log(total_selfreport / O_s(w)). D counts word-kind tokens only, adjacent = 1.
Terms accumulate in token order, left to right, so two implementations of the
same sum agree bitwise in 64-bit arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TypeVar

from .filters import QueryMatch
from .textprep import SelfReportLexicon, TaggedToken

T = TypeVar("T")

WEIGHTINGS = ("simple", "tfidf")


@dataclass(frozen=True)
class ScoreParams:
    window: int = 5
    threshold: float = 0.35
    weighting: str = "simple"

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must be in [0, 1]")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}")


@dataclass
class SelfReportScore:
    value: float
    query: QueryMatch
    contributing: list[tuple[str, int, float]] = field(default_factory=list)


def score_description(tagged: Sequence[TaggedToken], match: QueryMatch,
                      lexicon: SelfReportLexicon,
                      params: ScoreParams) -> SelfReportScore:
    """Score one query occurrence against the description's window.

    The window is two-sided and measured in word tokens; the query token
    itself never contributes; duplicate occurrences of a self-report word
    each contribute their own term.
    """
    if len(lexicon) == 0:
        raise ValueError("self-report lexicon is empty")
    word_positions = [i for i, tt in enumerate(tagged) if tt.token.kind == "word"]
    try:
        query_pos = word_positions.index(match.token_index)
    except ValueError:
        # query token is not word-kind; nothing is word-distance-comparable
        return SelfReportScore(0.0, match, [])
    value = 0.0
    contributing: list[tuple[str, int, float]] = []
    for pos, token_index in enumerate(word_positions):
        distance = abs(pos - query_pos)
        if distance == 0 or distance > params.window:
            continue
        word = tagged[token_index].token.text
        if word not in lexicon:
            continue
        os_count = lexicon.os_counts[word]
        o_count = lexicon.o_counts[word]
        term = (1.0 / distance) * (os_count / o_count)
        if params.weighting == "tfidf":
            term = term * math.log(lexicon.total_selfreport / os_count)
        value += term
        contributing.append((word, distance, term))
    return SelfReportScore(value, match, contributing)


def _precision_recall(scores: Sequence[float], labels: Sequence[bool],
                      threshold: float) -> tuple[float | None, float]:
    tp = fp = fn = 0
    for score, label in zip(scores, labels):
        predicted = score >= threshold
        if predicted and label:
            tp += 1
        elif predicted and not label:
            fp += 1
        elif not predicted and label:
            fn += 1
    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else 0.0
    return precision, recall


def default_grid() -> list[ScoreParams]:
    thresholds = [round(0.05 * i, 2) for i in range(1, 20)]
    return [ScoreParams(window, threshold, weighting)
            for weighting in WEIGHTINGS
            for window in range(1, 11)
            for threshold in thresholds]


def tune_params(tuning_set: Sequence[tuple[Sequence[TaggedToken], QueryMatch, bool]],
                lexicon: SelfReportLexicon,
                grid: Sequence[ScoreParams] | None = None) -> ScoreParams:
    """Pick the grid point with the best precision of [score >= threshold].

    Ties break toward higher recall, then smaller window, then lower
    threshold, then simple weighting. Raises if no grid point predicts any
    positive (precision undefined everywhere) or if the tuning set lacks a
    positive or a negative example.
    """
    if grid is None:
        grid = default_grid()
    labels = [bool(label) for _, _, label in tuning_set]
    if not any(labels) or all(labels):
        raise ValueError("tuning set needs at least one positive and one negative")

    # scores do not depend on the threshold, so compute once per (window, weighting)
    score_cache: dict[tuple[int, str], list[float]] = {}
    best_key = None
    best_params = None
    for params in grid:
        cache_key = (params.window, params.weighting)
        if cache_key not in score_cache:
            score_cache[cache_key] = [
                score_description(tagged, match, lexicon, params).value
                for tagged, match, _ in tuning_set]
        precision, recall = _precision_recall(
            score_cache[cache_key], labels, params.threshold)
        if precision is None:
            continue
        key = (-precision, -recall, params.window, params.threshold,
               WEIGHTINGS.index(params.weighting))
        if best_key is None or key < best_key:
            best_key = key
            best_params = params
    if best_params is None:
        raise ValueError("no grid point yields a positive prediction")
    return best_params


def threshold_users(users_with_scores: Iterable[tuple[T, Sequence[float]]],
                    params: ScoreParams) -> list[tuple[T, Sequence[float]]]:
    """Keep entries whose maximum score reaches the threshold (inclusive).
    Entries with no scores are dropped."""
    kept = []
    for user, scores in users_with_scores:
        if scores and max(scores) >= params.threshold:
            kept.append((user, scores))
    return kept


def read_tuning_tsv(path) -> list[tuple[str, str, str]]:
    """Rows of user_id<TAB>label(yes|no|unsure)<TAB>annotator_id."""
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_no}: expected 3 tab-separated fields")
            user_id, label, annotator = parts
            if label not in ("yes", "no", "unsure"):
                raise ValueError(f"{path}:{line_no}: bad label {label!r}")
            rows.append((user_id, label, annotator))
    return rows
