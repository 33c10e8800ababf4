"""Text cleaning and segmentation.

Offsets everywhere downstream are indices into ``Document.clean_text``
(Python ``str`` indices, i.e. Unicode scalar values).
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from chararc import resources

DEFAULT_MAX_BYTES = 64 * 1024 * 1024

_URL_RE = re.compile(r"\b[A-Za-z][A-Za-z0-9+.-]*://\S+|\bwww\.\S+", re.IGNORECASE)
_PAGE_LINE_RE = re.compile(r"^[-–—.\s]*\d+[-–—.\s]*$")
_BLANK_RUN_RE = re.compile(r"\n(?:[^\S\n]*\n)+")
_STRIP_CATEGORIES = {"Cc", "Cf", "Co", "Cs"}

WORD_PATTERN = r"[^\W\d_]+(?:['’\-][^\W\d_]+)*"
_ALPHA_RE = re.compile(WORD_PATTERN + r"\Z")
_TERMINAL = {".", "!", "?"}
_CLOSERS = {'"', "'", "”", "’", ")", "]"}
_OPENERS = {'"', "'", "“", "‘", "(", "["}


class OversizedInputError(ValueError):
    pass


@dataclass(frozen=True)
class CleaningConfig:
    max_bytes: int = DEFAULT_MAX_BYTES
    remove_page_numbers: bool = True
    remove_urls: bool = True
    strip_unreadable: bool = True
    collapse_blank_lines: bool = True


@dataclass(frozen=True, slots=True)
class TokenSpan:
    start: int
    end: int
    surface: str
    sentence_index: int

    @property
    def lowercase(self) -> str:
        return self.surface.lower()

    @property
    def is_capitalized(self) -> bool:
        return self.surface[:1].isupper()

    @property
    def is_alpha(self) -> bool:
        return _ALPHA_RE.match(self.surface) is not None

    @property
    def is_word(self) -> bool:
        """Alphabetic, or an abbreviation such as "Mrs." or "e.g."."""
        if self.is_alpha:
            return True
        return self.surface.endswith(".") and _ALPHA_RE.match(self.surface.replace(".", "")) is not None


@dataclass(frozen=True)
class SentenceSpan:
    start: int
    end: int
    index: int
    # half-open range into Document.tokens
    token_start: int
    token_end: int


@dataclass
class Document:
    doc_id: str
    raw_text: str
    clean_text: str
    sentences: list[SentenceSpan] = field(default_factory=list)
    tokens: list[TokenSpan] = field(default_factory=list)

    def sentence_tokens(self, index: int) -> list[TokenSpan]:
        sent = self.sentences[index]
        return self.tokens[sent.token_start:sent.token_end]

    def sentence_text(self, index: int) -> str:
        sent = self.sentences[index]
        return self.clean_text[sent.start:sent.end]


def _strip_unreadable(text: str) -> str:
    table = {ord("\t"): " "}
    for ch in set(text):
        if ch not in "\n\t" and (ch == "\ufffd" or unicodedata.category(ch) in _STRIP_CATEGORIES):
            table[ord(ch)] = None
    return text.translate(table)


def clean(raw_text: str, rules: CleaningConfig | None = None) -> str:
    """Remove page-number lines, URLs and unreadable characters.

    Line endings are normalised to ``\\n`` and runs of blank lines collapse to
    a single line break.  Raises :class:`OversizedInputError` when the UTF-8
    encoding of ``raw_text`` exceeds ``rules.max_bytes``.
    """
    rules = rules or CleaningConfig()
    size = len(raw_text.encode("utf-8", errors="surrogatepass"))
    if size > rules.max_bytes:
        raise OversizedInputError(
            f"input is {size} bytes, limit is {rules.max_bytes}")

    text = raw_text.replace("\r\n", "\n").replace("\r", "\n")
    if rules.strip_unreadable:
        text = _strip_unreadable(text)
    if rules.remove_urls:
        text = _URL_RE.sub("", text)
    if rules.remove_page_numbers:
        lines = text.split("\n")
        text = "\n".join(ln for ln in lines if not _PAGE_LINE_RE.match(ln))
    if rules.collapse_blank_lines:
        text = _BLANK_RUN_RE.sub("\n", text)
    return text


def _token_regex(abbreviations) -> re.Pattern:
    abbrevs = sorted(abbreviations, key=len, reverse=True)
    alts = []
    if abbrevs:
        alts.append(r"(?<![^\W\d_])(?:" + "|".join(re.escape(a) for a in abbrevs) + ")")
    alts.append(WORD_PATTERN)
    alts.append(r"\d+(?:[.,:]\d+)*")
    alts.append(r"[^\s]")
    return re.compile("|".join(alts))


_TOKEN_RE_CACHE: dict[frozenset, re.Pattern] = {}


def _tokenizer(abbreviations) -> re.Pattern:
    key = frozenset(abbreviations)
    if key not in _TOKEN_RE_CACHE:
        _TOKEN_RE_CACHE[key] = _token_regex(key)
    return _TOKEN_RE_CACHE[key]


def tokenize(text: str, abbreviations=None) -> list[tuple[int, int]]:
    """Return (start, end) offsets of every token in ``text``."""
    if abbreviations is None:
        abbreviations = resources.abbreviations()
    return [m.span() for m in _tokenizer(abbreviations).finditer(text)]


def _ends_sentence(text, spans, i) -> int | None:
    """If a sentence ends at token ``i`` return the index of its last token."""
    start, end = spans[i]
    if text[start:end] not in _TERMINAL:
        return None
    j = i
    while j + 1 < len(spans) and spans[j + 1][0] == spans[j][1] \
            and text[spans[j + 1][0]:spans[j + 1][1]] in _CLOSERS | _TERMINAL:
        j += 1
    if j + 1 >= len(spans):
        return j
    nxt = j + 1
    if spans[nxt][0] == spans[j][1]:
        return None  # no whitespace after the terminal
    while nxt < len(spans) and text[spans[nxt][0]:spans[nxt][1]] in _OPENERS:
        nxt += 1
    if nxt < len(spans) and text[spans[nxt][0]].isupper():
        return j
    return None


def segment(clean_text: str, doc_id: str = "doc", raw_text: str | None = None,
            abbreviations=None) -> Document:
    spans = tokenize(clean_text, abbreviations)
    doc = Document(doc_id=doc_id,
                   raw_text=clean_text if raw_text is None else raw_text,
                   clean_text=clean_text)
    if not spans:
        return doc

    bounds = []
    first = 0
    i = 0
    while i < len(spans):
        if clean_text[spans[i][0]] not in _TERMINAL:
            i += 1
            continue
        last = _ends_sentence(clean_text, spans, i)
        if last is not None:
            bounds.append((first, last + 1))
            first = last + 1
            i = last + 1
        else:
            i += 1
    if first < len(spans):
        bounds.append((first, len(spans)))

    tokens = []
    sentences = []
    for s_idx, (t0, t1) in enumerate(bounds):
        for start, end in spans[t0:t1]:
            tokens.append(TokenSpan(start, end, clean_text[start:end], s_idx))
        sentences.append(SentenceSpan(spans[t0][0], spans[t1 - 1][1], s_idx, t0, t1))
    doc.tokens = tokens
    doc.sentences = sentences
    return doc


def load(path, doc_id: str | None = None, rules: CleaningConfig | None = None,
         abbreviations=None) -> Document:
    from pathlib import Path

    path = Path(path)
    raw = path.read_text(encoding="utf-8")
    text = clean(raw, rules)
    return segment(text, doc_id=doc_id or path.stem, raw_text=raw,
                   abbreviations=abbreviations)


def corpus_stats(doc: Document) -> dict:
    return {
        "word_count": sum(1 for t in doc.tokens if t.is_word),
        "sentence_count": len(doc.sentences),
    }
