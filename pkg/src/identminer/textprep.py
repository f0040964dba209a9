"""Tweet-style tokenization, lexicon PoS tagging, and induction of the
self-report word set S from first-person "i'm / i am ..." statements.

The tokenizer is regex-based: URLs, @mentions, #hashtags, emoji (including
zero-width-joiner sequences), apostrophe contractions from a shipped list, and
punctuation runs each become single tokens; everything else splits on
whitespace and is lowercased.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

PENN_TAGS = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
    "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
    "VBZ", "WDT", "WP", "WP$", "WRB",
})

SENTINEL_TAGS = {
    "hashtag": "HT",
    "mention": "USR",
    "url": "URL",
    "emoji": "EMJ",
    "punct": "PCT",
}

NOUN_TAGS = ("NN", "NNS", "NNPS")
PLURAL_TAGS = ("NNS", "NNPS")

# Unicode emoji blocks: flags, pictographs, emoticons, transport, supplemental,
# extended-A, and the misc-symbols/dingbats stretch.
_EMOJI_RANGES = (
    "\U0001F1E6-\U0001F1FF"
    "\U0001F300-\U0001F5FF"
    "\U0001F600-\U0001F64F"
    "\U0001F680-\U0001F6FF"
    "\U0001F900-\U0001F9FF"
    "\U0001FA70-\U0001FAFF"
    "☀-➿"
)
_EMOJI_SEQ = (
    f"[{_EMOJI_RANGES}]️?"
    f"(?:‍[{_EMOJI_RANGES}]️?)*"
)

_TOKEN_RE = re.compile(
    r"(?P<url>https?://\S+|www\.\S+)"
    r"|(?P<mention>@\w+)"
    r"|(?P<hashtag>#\w+)"
    rf"|(?P<emoji>{_EMOJI_SEQ})"
    r"|(?P<word>\w+(?:[\-'’]\w+)*)"
    rf"|(?P<punct>[^\w\s{_EMOJI_RANGES}]+)"
)


@dataclass(frozen=True)
class Token:
    text: str
    kind: str  # word | hashtag | mention | url | emoji | punct | contraction
    char_span: tuple[int, int]


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    pos: str


@dataclass
class TagLexicon:
    """Context-free tagger: word -> majority Penn tag, default for OOV."""
    tags: dict[str, str]
    default_tag: str = "NN"

    def tag(self, word: str) -> str:
        return self.tags.get(word, self.default_tag)

    @classmethod
    def from_tsv(cls, path, default_tag: str = "NN") -> "TagLexicon":
        tags: dict[str, str] = {}
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{line_no}: expected word<TAB>tag")
                word, tag = parts[0].lower(), parts[1]
                if tag not in PENN_TAGS:
                    raise ValueError(f"{path}:{line_no}: {tag!r} is not a Penn tag")
                tags[word] = tag
        return cls(tags=tags, default_tag=default_tag)


def _default_contractions() -> frozenset[str]:
    from . import resources
    return resources.load_contractions()


def tokenize(text: str, contractions: frozenset[str] | None = None) -> list[Token]:
    """Split text into typed tokens with character spans.

    Joining the source slices of consecutive tokens with the original
    inter-token whitespace reconstructs the input exactly.
    """
    if contractions is None:
        contractions = _default_contractions()
    tokens: list[Token] = []
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        raw = match.group()
        lowered = raw.lower()
        if kind == "word" and ("'" in lowered or "’" in lowered):
            normalized = lowered.replace("’", "'")
            if normalized in contractions:
                tokens.append(Token(normalized, "contraction", match.span()))
                continue
        tokens.append(Token(lowered, kind, match.span()))
    return tokens


def pos_tag(tokens: Iterable[Token], lexicon: TagLexicon) -> list[TaggedToken]:
    """Word and contraction tokens get the lexicon majority tag (default for
    OOV); other kinds get fixed sentinel tags."""
    tagged = []
    for token in tokens:
        sentinel = SENTINEL_TAGS.get(token.kind)
        pos = sentinel if sentinel is not None else lexicon.tag(token.text)
        tagged.append(TaggedToken(token, pos))
    return tagged


def _match_trigger(tagged: list[TaggedToken], i: int, allow_im: bool) -> int:
    """Return the index just past a first-person trigger starting at i, or -1."""
    text = tagged[i].token.text
    if text == "i'm":
        return i + 1
    if text == "i" and i + 1 < len(tagged) and tagged[i + 1].token.text == "am":
        return i + 2
    if allow_im and text == "im":
        return i + 1
    return -1


def extract_selfreport_candidates(tagged: list[TaggedToken],
                                  allow_im: bool = False) -> list[tuple[str, str]]:
    """Apply the anchored pattern: trigger "i'm"/"i am", then optionally one
    adverb and one determiner, then adjectives with an optional noun head.
    Emits every adjective plus the head; at least one of them must be present.

    The "im" spelling is an extension, off by default.
    """
    out: list[tuple[str, str]] = []
    n = len(tagged)
    i = 0
    while i < n:
        j = _match_trigger(tagged, i, allow_im)
        if j < 0:
            i += 1
            continue
        k = j
        if k < n and tagged[k].pos == "RB":
            k += 1
        if k < n and tagged[k].pos == "DT":
            k += 1
        collected: list[tuple[str, str]] = []
        while k < n and tagged[k].pos == "JJ":
            collected.append((tagged[k].token.text, "JJ"))
            k += 1
        if k < n and tagged[k].pos in NOUN_TAGS:
            collected.append((tagged[k].token.text, tagged[k].pos))
            k += 1
        if collected:
            out.extend(collected)
            i = k
        else:
            i = j
    return out


@dataclass
class SelfReportLexicon:
    """Per-word description counts backing the co-occurrence score.

    os_counts[w] = number of descriptions where w was extracted as a
    self-report word; o_counts[w] = number of descriptions containing w as a
    token at all. S is the set of words with os_counts > 0.
    """
    os_counts: dict[str, int]
    o_counts: dict[str, int]
    total_selfreport: int = field(init=False)

    def __post_init__(self):
        for word, os_count in self.os_counts.items():
            o_count = self.o_counts.get(word, 0)
            if not 0 < os_count <= o_count:
                raise ValueError(
                    f"bad counts for {word!r}: O_s={os_count}, O={o_count}")
        self.total_selfreport = sum(self.os_counts.values())

    @property
    def words(self) -> frozenset[str]:
        return frozenset(self.os_counts)

    def __contains__(self, word: str) -> bool:
        return word in self.os_counts

    def __len__(self) -> int:
        return len(self.os_counts)

    def to_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for word in sorted(self.os_counts):
                handle.write(f"{word}\t{self.os_counts[word]}\t{self.o_counts[word]}\n")

    @classmethod
    def from_tsv(cls, path) -> "SelfReportLexicon":
        os_counts: dict[str, int] = {}
        o_counts: dict[str, int] = {}
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise ValueError(f"{path}:{line_no}: expected word<TAB>O_s<TAB>O")
                os_counts[parts[0]] = int(parts[1])
                o_counts[parts[0]] = int(parts[2])
        return cls(os_counts=os_counts, o_counts=o_counts)


def description_selfreport_words(description: str, tag_lexicon: TagLexicon,
                                 allow_im: bool = False,
                                 contractions: frozenset[str] | None = None
                                 ) -> tuple[set[str], set[str]]:
    """(kept self-report words, all token texts) for one description.

    Kept words must be singular (no NNS/NNPS) and their extracted tag must
    equal the lexicon majority tag, so out-of-vocabulary words never enter S.
    """
    tokens = tokenize(description, contractions=contractions)
    tagged = pos_tag(tokens, tag_lexicon)
    kept = set()
    for word, pos in extract_selfreport_candidates(tagged, allow_im=allow_im):
        if pos in PLURAL_TAGS:
            continue
        if tag_lexicon.tags.get(word) != pos:
            continue
        kept.add(word)
    return kept, {token.text for token in tokens}


def build_selfreport_lexicon(corpus: Iterable, tag_lexicon: TagLexicon,
                             allow_im: bool = False,
                             contractions: frozenset[str] | None = None
                             ) -> SelfReportLexicon:
    """Count O_s and O per description over the corpus (UserRecord iterable).

    Counting is per-description: a description mentioning a word twice still
    contributes one to each counter. Per-shard counters merge by addition.
    """
    os_counter: Counter[str] = Counter()
    o_counter: Counter[str] = Counter()
    for record in corpus:
        kept, token_texts = description_selfreport_words(
            record.description, tag_lexicon, allow_im=allow_im,
            contractions=contractions)
        os_counter.update(kept)
        o_counter.update(token_texts)
    os_counts = dict(os_counter)
    o_counts = {word: o_counter[word] for word in os_counts}
    return SelfReportLexicon(os_counts=os_counts, o_counts=o_counts)
