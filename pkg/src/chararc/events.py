"""Realis event triggers and the external annotation interchange format."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from chararc import resources
from chararc.corpus import Document

EMOTION_LABELS = (
    "admiration", "amusement", "anger", "annoyance", "approval", "caring",
    "confusion", "curiosity", "desire", "disappointment", "disapproval",
    "disgust", "embarrassment", "excitement", "fear", "gratitude", "grief",
    "joy", "love", "nervousness", "optimism", "pride", "realization",
    "relief", "remorse", "sadness", "surprise", "neutral",
)

DEFAULT_MODALS = frozenset({
    "would", "could", "may", "might", "must", "shall", "will",
    "should", "can", "cannot", "'d", "'ll",
})
DEFAULT_EXCLUDED_LEMMAS = frozenset({"be", "seem", "appear", "have", "do"})
CONDITIONALS = frozenset({"if", "unless", "whether"})
NEGATIONS = frozenset({"not", "never", "no", "nor"})
CLAUSE_CONJUNCTIONS = frozenset({
    "and", "but", "or", "so", "because", "while", "when", "although", "though",
    "then", "that", "which", "who", "whom", "after", "before", "until", "since",
})
CLAUSE_PUNCT = frozenset({",", ";", ":", '"', "“", "”", "(", ")", "—", "–"})
DETERMINERS = frozenset({
    "the", "a", "an", "this", "that", "these", "those", "my", "your", "our",
    "their", "its", "his", "her", "some", "every", "each", "any", "no",
    "another", "such", "what", "which",
})
PREPOSITIONS = frozenset({
    "with", "of", "in", "on", "at", "for", "from", "into", "onto", "about",
    "under", "over", "through", "without", "against", "among", "between",
    "toward", "towards", "upon", "within",
})
SUBJECT_PRONOUNS = frozenset({"i", "you", "we", "they"})
BE_AUX = frozenset({"was", "were", "is", "are", "am", "been", "being", "be",
                    "wasn't", "weren't", "isn't", "aren't"})
HAVE_AUX = frozenset({"had", "has", "have", "having", "hadn't", "hasn't", "haven't"})
DO_AUX = frozenset({"did", "does", "do", "didn't", "doesn't", "don't"})
GROUP_ADVERBS = frozenset({
    "just", "already", "still", "also", "then", "soon", "almost", "nearly",
    "once", "even", "only", "quite", "rather", "all", "both", "finally",
})
CLAUSE_SCAN_CAP = 6


class AnnotationError(ValueError):
    """Raised with one message per offending line or record."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@dataclass(frozen=True)
class VerbLexicon:
    forms: dict
    excluded_lemmas: frozenset = DEFAULT_EXCLUDED_LEMMAS

    @classmethod
    def load(cls, path=None, excluded_lemmas=DEFAULT_EXCLUDED_LEMMAS):
        return cls(resources.verb_forms(path), frozenset(excluded_lemmas))

    def analyses(self, form: str):
        return self.forms.get(form.lower(), ())

    def lemma(self, form: str) -> str | None:
        a = self.analyses(form)
        return a[0][0] if a else None


@dataclass(frozen=True)
class EventTrigger:
    event_id: int
    token_index: int
    lemma: str
    sentence_index: int
    realis: bool = True
    source: str = "heuristic"
    surface: str = ""


@dataclass(frozen=True)
class Span:
    start: int
    end: int


@dataclass(frozen=True)
class AnnotationRecord:
    doc_id: str
    sentence_index: int
    trigger: Span
    actor: Span | None = None
    experiencer: Span | None = None
    sentiment: float | None = None
    emotions: tuple | None = None
    line: int = field(default=0, compare=False)


def _is_negator(word: str) -> bool:
    return word in NEGATIONS or word.endswith("n't")


def _verb_group(words, i, lo):
    """Scan left from ``i`` over auxiliaries, negators and light adverbs.

    Returns (auxiliaries, negated, index of first token before the group).
    """
    aux, negated = [], False
    j = i - 1
    while j >= lo:
        w = words[j]
        if w in BE_AUX or w in HAVE_AUX or w in DO_AUX or w in DEFAULT_MODALS:
            aux.append(w)
            negated = negated or w.endswith("n't")
        elif _is_negator(w):
            negated = True
        elif w in GROUP_ADVERBS or (w.endswith("ly") and len(w) > 3):
            pass
        else:
            break
        j -= 1
    return aux, negated, j


def _clause_blocks(words, i, lo, modals) -> bool:
    """True if a modal or conditional governs the clause ending at ``i``."""
    j = i - 1
    steps = 0
    while j >= lo and steps < CLAUSE_SCAN_CAP:
        w = words[j]
        if w in modals or w in CONDITIONALS:
            return True
        if w in CLAUSE_PUNCT or w in CLAUSE_CONJUNCTIONS:
            return False
        j -= 1
        steps += 1
    return False


def tag_events(doc: Document, lexicon: VerbLexicon | None = None,
               modals=DEFAULT_MODALS) -> list[EventTrigger]:
    """Tag verbal triggers that read as events which actually took place.

    Rejects triggers governed by a modal or a conditional in the same clause,
    negated verb groups, infinitives, and forms whose context marks them as
    nouns or adjectives (after a determiner or preposition).
    """
    lexicon = lexicon or VerbLexicon.load()
    words = [t.lowercase for t in doc.tokens]
    found = []
    for sent in doc.sentences:
        lo = sent.token_start
        for i in range(sent.token_start, sent.token_end):
            tok = doc.tokens[i]
            analyses = [a for a in lexicon.analyses(words[i])
                        if a[0] not in lexicon.excluded_lemmas]
            if not analyses:
                continue
            if tok.is_capitalized and i != lo:
                continue  # mid-sentence capital: a name, not a verb
            tags = set().union(*(a[1] for a in analyses))
            prev = words[i - 1] if i > lo else None
            if prev in DETERMINERS or prev in PREPOSITIONS or prev == "to":
                continue
            aux, negated, before = _verb_group(words, i, lo)
            if negated or any(a in modals for a in aux):
                continue
            if _clause_blocks(words, i, lo, modals):
                continue
            has_be = any(a in BE_AUX for a in aux)
            has_have = any(a in HAVE_AUX for a in aux)
            subject = words[before] if before >= lo else None
            readings = (
                "VBD" in tags or "VBZ" in tags,
                "VBN" in tags and (has_be or has_have),
                "VBG" in tags and has_be,
                bool(tags & {"VB", "VBP"}) and (
                    any(a in DO_AUX for a in aux) or (not aux and subject in SUBJECT_PRONOUNS)),
            )
            if not any(readings):
                continue
            found.append((i, analyses[0][0]))
    return [
        EventTrigger(k, i, lemma, doc.tokens[i].sentence_index, True, "heuristic",
                     doc.tokens[i].surface)
        for k, (i, lemma) in enumerate(found)
    ]


def event_density(doc: Document, triggers) -> float:
    """Events per word; 0.0 with a warning for a word-less document."""
    words = sum(1 for t in doc.tokens if t.is_word)
    if words == 0:
        warnings.warn("event density undefined for a document without words",
                      RuntimeWarning, stacklevel=2)
        return 0.0
    return len(triggers) / words


# -- interchange -------------------------------------------------------------

_FIELDS = {"doc_id", "sentence_index", "trigger", "actor", "experiencer",
           "sentiment", "emotions"}
_REQUIRED = {"doc_id", "sentence_index", "trigger"}


def _span(value, name):
    if not isinstance(value, dict) or set(value) != {"start", "end"}:
        raise ValueError(f"{name} must be an object with exactly 'start' and 'end'")
    start, end = value["start"], value["end"]
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (start, end)):
        raise ValueError(f"{name} offsets must be integers")
    if start < 0 or end <= start:
        raise ValueError(f"{name} must satisfy 0 <= start < end, got {start}..{end}")
    return Span(start, end)


def _unit_open(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) \
            or not math.isfinite(value) or not 0 < value < 1:
        raise ValueError(f"{name} must be a number strictly between 0 and 1, got {value!r}")
    return float(value)


def parse_record(obj, line: int = 0) -> AnnotationRecord:
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    unknown = set(obj) - _FIELDS
    if unknown:
        raise ValueError(f"unknown field(s): {', '.join(sorted(unknown))}")
    missing = _REQUIRED - set(obj)
    if missing:
        raise ValueError(f"missing field(s): {', '.join(sorted(missing))}")
    if not isinstance(obj["doc_id"], str):
        raise ValueError("doc_id must be a string")
    sidx = obj["sentence_index"]
    if not isinstance(sidx, int) or isinstance(sidx, bool) or sidx < 0:
        raise ValueError("sentence_index must be a non-negative integer")
    emotions = None
    if obj.get("emotions") is not None:
        if not isinstance(obj["emotions"], list):
            raise ValueError("emotions must be an array")
        items = []
        for k, e in enumerate(obj["emotions"]):
            if not isinstance(e, dict) or set(e) != {"label", "confidence"}:
                raise ValueError(f"emotions[{k}] must have exactly 'label' and 'confidence'")
            if e["label"] not in EMOTION_LABELS:
                raise ValueError(
                    f"emotions[{k}]: unknown label {e['label']!r}; valid labels: "
                    + ", ".join(EMOTION_LABELS))
            items.append((e["label"], _unit_open(e["confidence"], f"emotions[{k}].confidence")))
        emotions = tuple(items)
    return AnnotationRecord(
        doc_id=obj["doc_id"],
        sentence_index=sidx,
        trigger=_span(obj["trigger"], "trigger"),
        actor=_span(obj["actor"], "actor") if obj.get("actor") is not None else None,
        experiencer=(_span(obj["experiencer"], "experiencer")
                     if obj.get("experiencer") is not None else None),
        sentiment=(_unit_open(obj["sentiment"], "sentiment")
                   if obj.get("sentiment") is not None else None),
        emotions=emotions,
        line=line,
    )


def ingest_annotations(path) -> list[AnnotationRecord]:
    """Read and validate a JSON-lines annotation file.

    Collects every problem before raising :class:`AnnotationError`.
    """
    records, errors = [], []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            errors.append(f"line {lineno}: malformed JSON: {exc.msg}")
            continue
        try:
            records.append(parse_record(obj, lineno))
        except ValueError as exc:
            errors.append(f"line {lineno}: {exc}")
    if errors:
        raise AnnotationError(errors)
    return records


def _describe(rec: AnnotationRecord) -> str:
    return (f"line {rec.line}: record doc_id={rec.doc_id!r} "
            f"trigger={rec.trigger.start}..{rec.trigger.end}")


def check_bounds(records, doc: Document) -> None:
    """Raise :class:`AnnotationError` for spans outside the document."""
    errors = []
    n = len(doc.clean_text)
    for rec in records:
        if rec.doc_id != doc.doc_id:
            errors.append(f"{_describe(rec)}: doc_id does not match document {doc.doc_id!r}")
            continue
        if rec.sentence_index >= len(doc.sentences):
            errors.append(f"{_describe(rec)}: sentence_index {rec.sentence_index} out of "
                          f"range ({len(doc.sentences)} sentences)")
            continue
        sent = doc.sentences[rec.sentence_index]
        for name in ("trigger", "actor", "experiencer"):
            span = getattr(rec, name)
            if span is None:
                continue
            if span.end > n:
                errors.append(f"{_describe(rec)}: {name} span ends at {span.end}, "
                              f"beyond text length {n}")
            elif not (sent.start <= span.start and span.end <= sent.end):
                errors.append(f"{_describe(rec)}: {name} span lies outside sentence "
                              f"{rec.sentence_index}")
    if errors:
        raise AnnotationError(errors)


def token_at(doc: Document, span: Span, lo: int = 0, hi: int | None = None) -> int | None:
    """Index of the first token overlapping ``span``."""
    hi = len(doc.tokens) if hi is None else hi
    for i in range(lo, hi):
        t = doc.tokens[i]
        if t.end > span.start and t.start < span.end:
            return i
        if t.start >= span.end:
            break
    return None


def merge_annotations(doc: Document, triggers, records, lexicon: VerbLexicon | None = None):
    """Merge external trigger records into heuristic triggers by span.

    Returns ``(triggers, external)`` where ``external`` maps the trigger token
    index to its record. External records replace heuristic triggers on the
    same token. Event ids are renumbered in token order.
    """
    lexicon = lexicon or VerbLexicon.load()
    check_bounds(records, doc)
    by_token = {t.token_index: t for t in triggers}
    external = {}
    for rec in records:
        sent = doc.sentences[rec.sentence_index]
        idx = token_at(doc, rec.trigger, sent.token_start, sent.token_end)
        if idx is None:
            raise AnnotationError([f"{_describe(rec)}: trigger span covers no token"])
        tok = doc.tokens[idx]
        by_token[idx] = EventTrigger(0, idx, lexicon.lemma(tok.surface) or tok.lowercase,
                                     tok.sentence_index, True, "external", tok.surface)
        external[idx] = rec
    merged = [
        EventTrigger(k, t.token_index, t.lemma, t.sentence_index, t.realis, t.source, t.surface)
        for k, t in enumerate(sorted(by_token.values(), key=lambda t: t.token_index))
    ]
    return merged, external
