"""Feature extraction: bag-of-words vocab and sparse count vectors over a
user's recent tweets, metadata features for the name model, and import of
externally computed per-user embeddings."""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from ..ingest import UserRecord
from ..textprep import tokenize

_COUNTED_KINDS = ("word", "contraction")


def _tweet_words(user: UserRecord, max_tweets: int,
                 contractions=None) -> Iterable[str]:
    for tweet in user.tweets[:max_tweets]:
        for token in tokenize(tweet.text, contractions=contractions):
            if token.kind in _COUNTED_KINDS:
                yield token.text


def build_vocab(dev_users: Sequence[UserRecord], min_count: int = 2,
                stopwords: frozenset[str] = frozenset(),
                max_tweets: int = 200, contractions=None) -> dict[str, int]:
    """Non-stopwords occurring at least min_count times across the dev users'
    tweets, indexed in lexicographic order."""
    counts: Counter[str] = Counter()
    for user in dev_users:
        counts.update(_tweet_words(user, max_tweets, contractions))
    kept = sorted(word for word, count in counts.items()
                  if count >= min_count and word not in stopwords)
    return {word: i for i, word in enumerate(kept)}


def featurize_user(user: UserRecord, vocab: dict[str, int],
                   max_tweets: int = 200, contractions=None) -> sparse.csr_matrix:
    """1 x |vocab| token-count vector over the user's newest max_tweets tweets."""
    counts: Counter[int] = Counter()
    for word in _tweet_words(user, max_tweets, contractions):
        col = vocab.get(word)
        if col is not None:
            counts[col] += 1
    cols = sorted(counts)
    data = [float(counts[col]) for col in cols]
    return sparse.csr_matrix((data, (np.zeros(len(cols), dtype=np.int64), cols)),
                             shape=(1, len(vocab)))


def featurize_users(users: Sequence[UserRecord], vocab: dict[str, int],
                    max_tweets: int = 200, contractions=None) -> sparse.csr_matrix:
    if not users:
        return sparse.csr_matrix((0, len(vocab)))
    return sparse.vstack([featurize_user(user, vocab, max_tweets, contractions)
                          for user in users], format="csr")


def name_meta_features(user: UserRecord) -> np.ndarray:
    """Fixed 5-feature profile vector for the name model: log1p followers,
    log1p statuses, and the three profile flags."""
    profile = user.profile
    return np.array([
        math.log1p(profile.followers_count),
        math.log1p(profile.statuses_count),
        float(profile.has_profile_url),
        float(profile.has_custom_image),
        float(profile.geo_enabled),
    ], dtype=np.float64)


def read_embeddings(path, expected_dim: int = 768) -> dict[str, np.ndarray]:
    """user_id<TAB>floats rows; every row must have expected_dim values."""
    out: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            user_id, values = parts[0], parts[1:]
            if len(values) == 1:
                values = values[0].split()
            if len(values) != expected_dim:
                raise ValueError(
                    f"{path}:{line_no}: expected {expected_dim} floats, "
                    f"got {len(values)}")
            out[user_id] = np.array([float(v) for v in values], dtype=np.float64)
    return out
