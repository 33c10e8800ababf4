"""Sentiment, emotion and the per-event circumstance measure.

circumstance = alpha * sentiment + sum(weight[label] * confidence[label])
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType

from chararc import resources
from chararc.corpus import WORD_PATTERN, tokenize
from chararc.events import EMOTION_LABELS

EPSILON = 0.001

DEFAULT_WEIGHTS = MappingProxyType({
    **dict.fromkeys(["joy", "love", "gratitude", "excitement"], 2.0),
    **dict.fromkeys(["admiration", "amusement", "approval", "caring", "curiosity",
                     "desire", "optimism", "pride", "relief"], 1.0),
    **dict.fromkeys(["realization", "surprise", "neutral"], 0.0),
    **dict.fromkeys(["annoyance", "confusion", "disappointment", "disapproval",
                     "embarrassment", "nervousness", "remorse"], -1.0),
    **dict.fromkeys(["anger", "disgust", "fear", "grief", "sadness"], -2.0),
})


class ScoringError(ValueError):
    pass


def _clamp(x: float) -> float:
    return min(max(x, EPSILON), 1.0 - EPSILON)


@dataclass(frozen=True)
class SentimentLexicon:
    valences: dict

    def __post_init__(self):
        for word, v in self.valences.items():
            if not -1.0 <= v <= 1.0:
                raise ScoringError(f"valence for {word!r} is {v}, outside [-1, 1]")

    @classmethod
    def load(cls, path=None):
        return cls(resources.read_tsv_lexicon(
            path or resources.data_path("sentiment.tsv"), float))


def _labels(value: str):
    labels = tuple(x.strip() for x in value.split(",") if x.strip())
    bad = [x for x in labels if x not in EMOTION_LABELS]
    if bad:
        raise ValueError(f"unknown emotion label(s) {bad}; valid labels: {', '.join(EMOTION_LABELS)}")
    return labels


@dataclass(frozen=True)
class EmotionLexicon:
    labels: dict

    def __post_init__(self):
        for word, labels in self.labels.items():
            bad = [x for x in labels if x not in EMOTION_LABELS]
            if bad:
                raise ScoringError(f"unknown emotion label(s) {bad} for {word!r}")

    @classmethod
    def load(cls, path=None):
        return cls(resources.read_tsv_lexicon(
            path or resources.data_path("emotions.tsv"), _labels))


@dataclass(frozen=True)
class CircumstanceParams:
    alpha: float = 0.5
    weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ScoringError(f"alpha must lie in (0, 1), got {self.alpha}")
        for label, beta in self.weights.items():
            if not -2.0 <= beta <= 2.0:
                raise ScoringError(f"weight for {label!r} is {beta}, outside [-2, 2]")
        if self.weights.get("neutral", 0.0) != 0.0:
            raise ScoringError("weight for 'neutral' must be 0")


_WORD_RE = re.compile(WORD_PATTERN + r"\Z")


def _words(sentence):
    """Lowercased words of a sentence given as text or as a word sequence."""
    if not isinstance(sentence, str):
        return [w.lower() for w in sentence]
    return [sentence[a:b].lower() for a, b in tokenize(sentence) if _WORD_RE.match(sentence[a:b])]


def _lookup(word: str, table: dict, verbs: dict):
    if word in table:
        return table[word]
    for suffix in ("'s", "’s"):
        if word.endswith(suffix) and word[: -len(suffix)] in table:
            return table[word[: -len(suffix)]]
    for lemma, _ in verbs.get(word, ()):
        if lemma in table:
            return table[lemma]
    return None


def score_sentiment(sentence, lexicon: SentimentLexicon, verbs=None) -> float:
    """Mean valence of matched words rescaled to (0, 1); 0.5 with no matches.

    ``sentence`` is the sentence text or its already-tokenised words.
    """
    verbs = resources.verb_forms() if verbs is None else verbs
    hits = [v for v in (_lookup(w, lexicon.valences, verbs) for w in _words(sentence))
            if v is not None]
    if not hits:
        return 0.5
    return _clamp((sum(hits) / len(hits) + 1.0) / 2.0)


def score_emotions(sentence, lexicon: EmotionLexicon, verbs=None) -> list[tuple[str, float]]:
    """Share of emotion-bearing words carrying each label, clamped to (0, 1).

    Labels come back in vocabulary order.
    """
    verbs = resources.verb_forms() if verbs is None else verbs
    counts: dict[str, int] = {}
    matched = 0
    for w in _words(sentence):
        labels = _lookup(w, lexicon.labels, verbs)
        if not labels:
            continue
        matched += 1
        for label in set(labels):
            counts[label] = counts.get(label, 0) + 1
    if not matched:
        return []
    return [(label, _clamp(counts[label] / matched))
            for label in EMOTION_LABELS if label in counts]


def circumstance(s: float, emotions, params: CircumstanceParams) -> float:
    total = params.alpha * s
    for label, confidence in emotions:
        try:
            beta = params.weights[label]
        except KeyError:
            raise ScoringError(f"no weight configured for emotion label {label!r}") from None
        total += beta * confidence
    return total
