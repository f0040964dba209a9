"""Racial-keyword query matching, class assignment, the four false-positive
filters (color co-occurrence, plural successor, bigram blocklist, quoted
span), and the person-keyword bigram matcher behind the QB dataset.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .textprep import PLURAL_TAGS, TaggedToken


class ClassLabel(Enum):
    WHITE = "W"
    BLACK = "B"
    HISPANIC_LATINX = "HL"
    ASIAN = "A"

    @classmethod
    def from_code(cls, code: str) -> "ClassLabel":
        for label in cls:
            if label.value == code:
                return label
        raise ValueError(f"unknown class code {code!r}")


# fixed order used for tie-breaks, vectors, and confusion matrices
CLASS_ORDER: tuple[ClassLabel, ...] = (
    ClassLabel.WHITE, ClassLabel.BLACK, ClassLabel.HISPANIC_LATINX, ClassLabel.ASIAN,
)

DEFAULT_QUERY_MAP: dict[str, ClassLabel] = {
    "black": ClassLabel.BLACK,
    "african-american": ClassLabel.BLACK,
    "white": ClassLabel.WHITE,
    "caucasian": ClassLabel.WHITE,
    "asian": ClassLabel.ASIAN,
    "hispanic": ClassLabel.HISPANIC_LATINX,
    "latin": ClassLabel.HISPANIC_LATINX,
    "latina": ClassLabel.HISPANIC_LATINX,
    "latino": ClassLabel.HISPANIC_LATINX,
    "latinx": ClassLabel.HISPANIC_LATINX,
}

PERSON_KEYWORDS = frozenset(
    {"man", "woman", "person", "individual", "guy", "gal", "boy", "girl"})

FILTER_NAMES = ("color", "plural", "bigram_blocklist", "quote")


class _Sentinel:
    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name


AMBIGUOUS = _Sentinel("AMBIGUOUS")
NO_MATCH = _Sentinel("NO_MATCH")


@dataclass(frozen=True)
class QueryMatch:
    keyword: str
    label: ClassLabel
    token_index: int
    char_span: tuple[int, int]


@dataclass(frozen=True)
class FilterOutcome:
    passed: bool
    rejecting_filter: str | None = None

    def __post_init__(self):
        if self.passed == (self.rejecting_filter is not None):
            raise ValueError("rejecting_filter must be set iff passed is false")


PASSED = FilterOutcome(True, None)


@dataclass(frozen=True)
class FilterConfig:
    color: bool = True
    plural: bool = True
    bigram: bool = True
    quote: bool = True

    @classmethod
    def none(cls) -> "FilterConfig":
        return cls(False, False, False, False)

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "FilterConfig":
        valid = {"color", "plural", "bigram", "quote"}
        chosen = set()
        for name in names:
            name = name.strip()
            if not name:
                continue
            if name == "bigram_blocklist":
                name = "bigram"
            if name not in valid:
                raise ValueError(f"unknown filter {name!r}")
            chosen.add(name)
        return cls(**{name: name in chosen for name in valid})

    @classmethod
    def from_dict(cls, obj: dict) -> "FilterConfig":
        return cls(color=bool(obj.get("color", True)),
                   plural=bool(obj.get("plural", True)),
                   bigram=bool(obj.get("bigram", True)),
                   quote=bool(obj.get("quote", True)))


def find_query_matches(tagged: Sequence[TaggedToken],
                       query_map: dict[str, ClassLabel] | None = None,
                       match_two_token: bool = False) -> list[QueryMatch]:
    """Whole-token keyword matches, one QueryMatch per occurrence.

    match_two_token additionally matches the split spelling "african american"
    as the african-american keyword (extension, off by default).
    """
    if query_map is None:
        query_map = DEFAULT_QUERY_MAP
    matches = []
    for i, tt in enumerate(tagged):
        label = query_map.get(tt.token.text)
        if label is not None:
            matches.append(QueryMatch(tt.token.text, label, i, tt.token.char_span))
            continue
        if (match_two_token and "african-american" in query_map
                and tt.token.text == "african" and i + 1 < len(tagged)
                and tagged[i + 1].token.text == "american"):
            span = (tt.token.char_span[0], tagged[i + 1].token.char_span[1])
            matches.append(QueryMatch("african-american",
                                      query_map["african-american"], i, span))
    return matches


def assign_class(matches: Sequence[QueryMatch]):
    """The single shared label, or NO_MATCH / AMBIGUOUS sentinels."""
    labels = {match.label for match in matches}
    if not labels:
        return NO_MATCH
    if len(labels) > 1:
        return AMBIGUOUS
    return next(iter(labels))


def color_filter(tagged: Sequence[TaggedToken], match: QueryMatch,
                 colors: frozenset[str]) -> FilterOutcome:
    """Reject when a color word other than the query occurrence itself appears
    anywhere in the description."""
    for i, tt in enumerate(tagged):
        if i == match.token_index:
            continue
        if tt.token.kind == "word" and tt.token.text in colors:
            return FilterOutcome(False, "color")
    return PASSED


def plural_filter(tagged: Sequence[TaggedToken], match: QueryMatch) -> FilterOutcome:
    """Reject when the token right after the query is a plural noun."""
    nxt = match.token_index + 1
    if nxt < len(tagged) and tagged[nxt].pos in PLURAL_TAGS:
        return FilterOutcome(False, "plural")
    return PASSED


def blocklist_bigram_filter(tagged: Sequence[TaggedToken], match: QueryMatch,
                            blocklist: frozenset[tuple[str, str]]) -> FilterOutcome:
    """Reject when (query, next token) or (previous token, query) is a
    blocklisted bigram. Both sides are checked."""
    i = match.token_index
    if i + 1 < len(tagged) and (match.keyword, tagged[i + 1].token.text) in blocklist:
        return FilterOutcome(False, "bigram_blocklist")
    if i > 0 and (tagged[i - 1].token.text, match.keyword) in blocklist:
        return FilterOutcome(False, "bigram_blocklist")
    return PASSED


_QUOTE_FAMILIES = (('"', '"'), ("“", "”"))


def _quoted_spans(raw_text: str) -> list[tuple[int, int]]:
    """Balanced quote spans, pairing each opener with the next closer of the
    same family, left to right. Straight quotes pair consecutively; an
    unbalanced trailing quote never forms a span."""
    spans = []
    for opener, closer in _QUOTE_FAMILIES:
        if opener == closer:
            positions = [i for i, ch in enumerate(raw_text) if ch == opener]
            for a, b in zip(positions[0::2], positions[1::2]):
                spans.append((a, b))
        else:
            closers = [i for i, ch in enumerate(raw_text) if ch == closer]
            used = set()
            for a in (i for i, ch in enumerate(raw_text) if ch == opener):
                nxt = next((b for b in closers if b > a and b not in used), None)
                if nxt is not None:
                    used.add(nxt)
                    spans.append((a, nxt))
    return spans


def quote_filter(raw_text: str, match: QueryMatch) -> FilterOutcome:
    """Reject when the query occurrence lies inside a balanced quote pair."""
    start, end = match.char_span
    for a, b in _quoted_spans(raw_text):
        if a < start and end - 1 < b:
            return FilterOutcome(False, "quote")
    return PASSED


def person_bigram_match(tagged: Sequence[TaggedToken], match: QueryMatch,
                        person_keywords: frozenset[str] = PERSON_KEYWORDS) -> bool:
    """True iff the token right after the query is a person keyword."""
    nxt = match.token_index + 1
    return nxt < len(tagged) and tagged[nxt].token.text in person_keywords


def apply_filter_chain(tagged: Sequence[TaggedToken], raw_text: str,
                       match: QueryMatch, config: FilterConfig,
                       colors: frozenset[str],
                       blocklist: frozenset[tuple[str, str]]) -> FilterOutcome:
    """Enabled filters run in the order color, plural, bigram, quote; the
    first rejection wins."""
    if config.color:
        outcome = color_filter(tagged, match, colors)
        if not outcome.passed:
            return outcome
    if config.plural:
        outcome = plural_filter(tagged, match)
        if not outcome.passed:
            return outcome
    if config.bigram:
        outcome = blocklist_bigram_filter(tagged, match, blocklist)
        if not outcome.passed:
            return outcome
    if config.quote:
        outcome = quote_filter(raw_text, match)
        if not outcome.passed:
            return outcome
    return PASSED
