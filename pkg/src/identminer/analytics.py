"""Group-level lexical and behavioral statistics, nonparametric tests, rank
correlation over top-k lists, inter-annotator agreement, majority voting, and
sparse log-odds distinctive keywords.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .filters import ClassLabel
from .ingest import UserRecord
from .textprep import Token, tokenize
from .util import mean

_MISSING = (None, "", "missing")


class _Discard:
    def __repr__(self) -> str:
        return "DISCARD"


DISCARD = _Discard()


@dataclass
class GroupLexicalStats:
    group: ClassLabel
    lexical_diversity: float
    contractions_per_tweet: float
    type_token_ratio: float
    hashtags_per_tweet: float


@dataclass
class BehavioralProfile:
    group: ClassLabel
    pct_android: float
    pct_iphone: float
    pct_desktop: float
    pct_profile_url: float
    pct_custom_image: float
    pct_geo_enabled: float
    pct_geotagged: float
    avg_statuses: float
    avg_tweets_per_month: float
    # micro-averaged: pooled over every tweet in the group
    pct_tweets_mention: float
    pct_tweets_image: float
    pct_tweets_url: float


def _texts(tokens: Sequence) -> list[str]:
    return [tok.text if isinstance(tok, Token) else str(tok) for tok in tokens]


def type_token_ratio(tokens: Sequence) -> float:
    """Distinct tokens over total tokens; empty input is 0 by convention."""
    texts = _texts(tokens)
    if not texts:
        return 0.0
    return len(set(texts)) / len(texts)


def lexical_diversity(tokens: Sequence[Token], stopwords: frozenset[str]) -> float:
    """Tokens that are not URLs, mentions, or stopwords, over total tokens."""
    if not tokens:
        return 0.0
    content = [tok for tok in tokens
               if tok.kind not in ("url", "mention") and tok.text not in stopwords]
    return len(content) / len(tokens)


def user_lexical_means(user: UserRecord, stopwords: frozenset[str],
                       max_tweets: int = 200, contractions=None) -> dict | None:
    """Per-user means over tweets of TTR, LD, contractions/tweet, and
    hashtags/tweet; None for users with no tweets."""
    tweets = user.tweets[:max_tweets]
    if not tweets:
        return None
    ttr, ld, cpt, hpt = [], [], [], []
    for tweet in tweets:
        tokens = tokenize(tweet.text, contractions=contractions)
        ttr.append(type_token_ratio(tokens))
        ld.append(lexical_diversity(tokens, stopwords))
        cpt.append(sum(1 for tok in tokens if tok.kind == "contraction"))
        hpt.append(sum(1 for tok in tokens if tok.kind == "hashtag"))
    return {"ttr": mean(ttr), "ld": mean(ld), "cpt": mean(cpt), "hpt": mean(hpt)}


def group_lexical_stats(users_by_group: dict[ClassLabel, Sequence[UserRecord]],
                        stopwords: frozenset[str], max_tweets: int = 200,
                        contractions=None) -> dict[ClassLabel, GroupLexicalStats]:
    """Macro-average the per-user means within each group; users without
    tweets are skipped."""
    out = {}
    for group, users in users_by_group.items():
        per_user = [user_lexical_means(user, stopwords, max_tweets, contractions)
                    for user in users]
        per_user = [stats for stats in per_user if stats is not None]
        out[group] = GroupLexicalStats(
            group=group,
            lexical_diversity=mean([stats["ld"] for stats in per_user]),
            contractions_per_tweet=mean([stats["cpt"] for stats in per_user]),
            type_token_ratio=mean([stats["ttr"] for stats in per_user]),
            hashtags_per_tweet=mean([stats["hpt"] for stats in per_user]),
        )
    return out


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def mann_whitney_u(sample_a: Sequence[float],
                   sample_b: Sequence[float]) -> tuple[float, float]:
    """U statistic for the first sample (midrank ties) and the two-sided p
    from the tie-corrected normal approximation with continuity correction.
    Raises on an empty sample or when every value is identical."""
    n_a, n_b = len(sample_a), len(sample_b)
    if n_a == 0 or n_b == 0:
        raise ValueError("samples must be non-empty")
    combined = list(sample_a) + list(sample_b)
    ranks = _midranks(combined)
    rank_sum_a = sum(ranks[:n_a])
    u_a = rank_sum_a - n_a * (n_a + 1) / 2.0

    n = n_a + n_b
    tie_term = sum(t ** 3 - t for t in Counter(combined).values())
    if tie_term == n ** 3 - n:
        raise ValueError("all values identical; variance is zero")
    mu = n_a * n_b / 2.0
    sigma2 = (n_a * n_b / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
    sigma = math.sqrt(sigma2)
    if u_a > mu:
        z = (u_a - mu - 0.5) / sigma
    elif u_a < mu:
        z = (u_a - mu + 0.5) / sigma
    else:
        z = 0.0
    p = min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))
    return u_a, p


def kendall_tau_top_k(list_a: Sequence, list_b: Sequence, k: int) -> float:
    """Tie-corrected tau-b over the union of both top-k lists; items absent
    from one list rank tied at k+1 there."""
    if k < 1:
        raise ValueError("k must be >= 1")
    top_a, top_b = list(list_a)[:k], list(list_b)[:k]
    if len(set(top_a)) != len(top_a) or len(set(top_b)) != len(top_b):
        raise ValueError("top-k lists must not contain duplicates")
    rank_a = {item: i + 1 for i, item in enumerate(top_a)}
    rank_b = {item: i + 1 for i, item in enumerate(top_b)}
    universe = list(dict.fromkeys(top_a + top_b))
    ra = [rank_a.get(item, k + 1) for item in universe]
    rb = [rank_b.get(item, k + 1) for item in universe]

    concordant = discordant = ties_a = ties_b = 0
    m = len(universe)
    for i in range(m):
        for j in range(i + 1, m):
            da = ra[i] - ra[j]
            db = rb[i] - rb[j]
            if da == 0 and db == 0:
                ties_a += 1
                ties_b += 1
            elif da == 0:
                ties_a += 1
            elif db == 0:
                ties_b += 1
            elif (da > 0) == (db > 0):
                concordant += 1
            else:
                discordant += 1
    n0 = m * (m - 1) / 2.0
    denom = math.sqrt((n0 - ties_a) * (n0 - ties_b))
    if denom == 0:
        raise ValueError("tau undefined: all pairs tied in one ranking")
    return (concordant - discordant) / denom


def krippendorff_alpha_nominal(annotations: Sequence[Sequence]) -> float:
    """Nominal-metric alpha = 1 - D_o/D_e from the coincidence matrix over
    non-missing labels (None/""/"missing" are missing). Items with fewer than
    two labels are skipped."""
    if not annotations:
        raise ValueError("no items")
    if any(len(row) < 2 for row in annotations):
        raise ValueError("need at least two annotators per item row")
    coincidence: Counter[tuple] = Counter()
    for row in annotations:
        labels = [label for label in row if label not in _MISSING]
        m = len(labels)
        if m < 2:
            continue
        for i, label_i in enumerate(labels):
            for j, label_j in enumerate(labels):
                if i != j:
                    coincidence[(label_i, label_j)] += 1.0 / (m - 1)
    if not coincidence:
        raise ValueError("no item has two or more non-missing labels")
    categories = sorted({c for pair in coincidence for c in pair})
    totals = {c: sum(coincidence[(c, k)] for k in categories) for c in categories}
    n = sum(totals.values())
    observed = sum(coincidence[(c, k)] for c in categories for k in categories
                   if c != k)
    expected = sum(totals[c] * totals[k] for c in categories for k in categories
                   if c != k) / (n - 1)
    if expected == 0:
        # a single category in use; agreement is perfect by definition
        return 1.0
    return 1.0 - observed / expected


def majority_vote(labels: Sequence):
    """Strict majority among the non-missing labels; a majority of "unsure"
    or the absence of a strict majority discards the item."""
    valid = [label for label in labels if label not in _MISSING]
    for label in valid:
        if label not in ("yes", "no", "unsure"):
            raise ValueError(f"unexpected label {label!r}")
    if not valid:
        return DISCARD
    counts = Counter(valid)
    winner, top = counts.most_common(1)[0]
    if top * 2 <= len(valid):
        return DISCARD
    if winner == "unsure":
        return DISCARD
    return winner


_MONTH_DAYS = 30.4375  # 365.25 / 12


def _device(source_app: str) -> set[str]:
    lowered = source_app.lower()
    devices = set()
    if "android" in lowered:
        devices.add("android")
    if "iphone" in lowered or "ios" in lowered:
        devices.add("iphone")
    if "web" in lowered or "desktop" in lowered:
        devices.add("desktop")
    return devices


def behavioral_profile(users_by_group: dict[ClassLabel, Sequence[UserRecord]],
                       max_tweets: int = 200) -> dict[ClassLabel, BehavioralProfile]:
    """Table of per-group behavioral features. Percent rows are macro (share
    of users) except the per-tweet rows, which pool every tweet in the group.
    Tweets/month divides statuses_count by months since account creation
    (floored at one month); users without a creation time are skipped there."""
    out = {}
    for group, users in users_by_group.items():
        n_users = len(users)
        flags = Counter()
        tweets_per_month = []
        statuses = []
        pooled = Counter()
        pooled_total = 0
        for user in users:
            tweets = user.tweets[:max_tweets]
            devices = set()
            for tweet in tweets:
                devices |= _device(tweet.source_app)
            for device in devices:
                flags[device] += 1
            if any(t.geotagged for t in tweets):
                flags["geotagged"] += 1
            if user.profile.has_profile_url:
                flags["profile_url"] += 1
            if user.profile.has_custom_image:
                flags["custom_image"] += 1
            if user.profile.geo_enabled:
                flags["geo_enabled"] += 1
            statuses.append(float(user.profile.statuses_count))
            created = user.profile.account_created_at
            if created is not None:
                days = (user.snapshot_time - created).total_seconds() / 86400.0
                months = max(1.0, days / _MONTH_DAYS)
                tweets_per_month.append(user.profile.statuses_count / months)
            pooled_total += len(tweets)
            pooled["mention"] += sum(1 for t in tweets if t.mentions_user)
            pooled["image"] += sum(1 for t in tweets if t.has_image)
            pooled["url"] += sum(1 for t in tweets if t.has_url)

        def share(key: str) -> float:
            return flags[key] * 100.0 / n_users if n_users else 0.0

        def pooled_share(key: str) -> float:
            return pooled[key] * 100.0 / pooled_total if pooled_total else 0.0

        out[group] = BehavioralProfile(
            group=group,
            pct_android=share("android"),
            pct_iphone=share("iphone"),
            pct_desktop=share("desktop"),
            pct_profile_url=share("profile_url"),
            pct_custom_image=share("custom_image"),
            pct_geo_enabled=share("geo_enabled"),
            pct_geotagged=share("geotagged"),
            avg_statuses=mean(statuses),
            avg_tweets_per_month=mean(tweets_per_month),
            pct_tweets_mention=pooled_share("mention"),
            pct_tweets_image=pooled_share("image"),
            pct_tweets_url=pooled_share("url"),
        )
    return out


def _soft_threshold(values: np.ndarray, amount: float) -> np.ndarray:
    return np.sign(values) * np.maximum(np.abs(values) - amount, 0.0)


def sage_deviations(group_counts: dict[str, float],
                    background_counts: dict[str, float],
                    lam: float = 1.0, max_iter: int = 5000,
                    tol: float = 1e-10) -> dict[str, float]:
    """Additive log-odds deviations eta of the group's word distribution from
    the background log-frequencies, with L1 shrinkage lam (proximal gradient).
    lam = 0 is the closed-form log-odds ratio. Zero group counts get a 0.01
    pseudo-count; every group word must exist in the background with a
    positive count."""
    vocab = sorted(background_counts)
    for word, count in background_counts.items():
        if count <= 0:
            raise ValueError(f"background count for {word!r} must be positive")
    for word, count in group_counts.items():
        if count > 0 and word not in background_counts:
            raise ValueError(f"group word {word!r} missing from background")
    counts = np.array([group_counts.get(word, 0.0) for word in vocab], dtype=np.float64)
    counts[counts == 0.0] = 0.01
    total = counts.sum()
    bg = np.array([background_counts[word] for word in vocab], dtype=np.float64)
    log_bg = np.log(bg / bg.sum())
    if lam == 0:
        eta = np.log(counts / total) - log_bg
    else:
        eta = np.zeros(len(vocab))
        step = 1.0 / total
        for _ in range(max_iter):
            shifted = log_bg + eta
            shifted -= shifted.max()
            probs = np.exp(shifted)
            probs /= probs.sum()
            grad = counts - total * probs
            updated = _soft_threshold(eta + step * grad, lam * step)
            if np.max(np.abs(updated - eta)) < tol:
                eta = updated
                break
            eta = updated
    return dict(zip(vocab, eta))


def distinctive_keywords(group_counts: dict[str, float],
                         background_counts: dict[str, float],
                         lam: float = 1.0, top_n: int = 20) -> list[str]:
    """Words ranked by positive deviation; words the group does not overuse
    never appear, so identical distributions give an empty list."""
    deviations = sage_deviations(group_counts, background_counts, lam)
    ranked = sorted(((-eta, word) for word, eta in deviations.items() if eta > 0))
    return [word for _, word in ranked[:top_n]]


def group_token_counts(users: Iterable[UserRecord], max_tweets: int = 200,
                       contractions=None) -> Counter:
    """Token counts over a group's tweets (word and contraction kinds), the
    input for distinctive_keywords."""
    counts: Counter[str] = Counter()
    for user in users:
        for tweet in user.tweets[:max_tweets]:
            counts.update(tok.text for tok in tokenize(tweet.text, contractions=contractions)
                          if tok.kind in ("word", "contraction"))
    return counts


def is_emoticon(text: str, emoticons: frozenset[str] | None = None) -> bool:
    if emoticons is None:
        from . import resources
        emoticons = resources.load_emoticons()
    return text in emoticons
