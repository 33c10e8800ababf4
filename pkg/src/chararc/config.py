"""Pipeline configuration, loaded from JSON.

Every constant the method leaves open (sentiment weight, emotion weights,
window defaults, shift dead-band, minimum mentions) lives here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from chararc import resources
from chararc.characters import DEFAULT_PRONOUNS
from chararc.corpus import DEFAULT_MAX_BYTES, CleaningConfig
from chararc.events import DEFAULT_EXCLUDED_LEMMAS, DEFAULT_MODALS, EMOTION_LABELS
from chararc.scoring import DEFAULT_WEIGHTS, CircumstanceParams, ScoringError
from chararc.smoothing import FILTER_ALIASES, KINDS, WindowError, WindowSpec

LEXICON_KEYS = ("verbs", "sentiment", "emotions", "names", "honorifics", "abbreviations")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    cleaning: CleaningConfig = field(default_factory=CleaningConfig)
    lexicons: dict = field(default_factory=dict)  # key -> Path, absent means bundled
    extra_abbreviations: tuple = ()
    alpha: float = 0.5
    emotion_weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    window: WindowSpec = field(default_factory=WindowSpec)
    min_mentions: int = 5
    pronoun_window: int = 2
    pronouns: frozenset = DEFAULT_PRONOUNS
    modals: frozenset = DEFAULT_MODALS
    excluded_lemmas: frozenset = DEFAULT_EXCLUDED_LEMMAS
    dead_band_fraction: float = 0.02
    extrema_prominence_fraction: float = 0.25
    output_dir: Path = Path("out")

    @property
    def params(self) -> CircumstanceParams:
        return CircumstanceParams(self.alpha, dict(self.emotion_weights))

    def lexicon_path(self, key: str):
        return self.lexicons.get(key)

    def abbreviations(self) -> frozenset:
        return resources.abbreviations(self.lexicon_path("abbreviations")) | set(self.extra_abbreviations)

    def with_window(self, kind=None, n=None, p=None) -> "PipelineConfig":
        if kind is None and n is None and p is None:
            return self
        kind = FILTER_ALIASES.get(kind, kind) if kind else self.window.kind
        try:
            spec = WindowSpec(kind, n if n is not None else self.window.n,
                              p if p is not None else self.window.p)
        except WindowError as exc:
            raise ConfigError(str(exc)) from None
        return replace(self, window=spec)

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_dict(data, base_dir=path.parent)

    @classmethod
    def from_dict(cls, data: dict, base_dir=Path(".")) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        kw = {}

        if "cleaning" in data:
            c = data["cleaning"]
            ckeys = {f.name for f in fields(CleaningConfig)}
            if not isinstance(c, dict) or set(c) - ckeys:
                raise ConfigError(f"cleaning accepts keys {sorted(ckeys)}")
            kw["cleaning"] = CleaningConfig(**{**{"max_bytes": DEFAULT_MAX_BYTES}, **c})
            if kw["cleaning"].max_bytes <= 0:
                raise ConfigError("cleaning.max_bytes must be positive")

        if "lexicons" in data:
            lex = data["lexicons"]
            if not isinstance(lex, dict) or set(lex) - set(LEXICON_KEYS):
                raise ConfigError(f"lexicons accepts keys {list(LEXICON_KEYS)}")
            paths = {}
            for key, value in lex.items():
                if value is None:
                    continue
                p = Path(value)
                if not p.is_absolute():
                    p = Path(base_dir) / p
                if not p.is_file():
                    raise ConfigError(f"lexicons.{key}: file not found: {p}")
                paths[key] = p
            kw["lexicons"] = paths

        if "extra_abbreviations" in data:
            kw["extra_abbreviations"] = tuple(data["extra_abbreviations"])

        if "alpha" in data:
            kw["alpha"] = data["alpha"]
        if "emotion_weights" in data:
            weights = dict(DEFAULT_WEIGHTS)
            for label, beta in data["emotion_weights"].items():
                if label not in EMOTION_LABELS:
                    raise ConfigError(f"emotion_weights: unknown label {label!r}")
                weights[label] = float(beta)
            kw["emotion_weights"] = weights
        try:
            CircumstanceParams(kw.get("alpha", 0.5), kw.get("emotion_weights", dict(DEFAULT_WEIGHTS)))
        except ScoringError as exc:
            raise ConfigError(str(exc)) from None

        if "window" in data:
            w = data["window"]
            if not isinstance(w, dict) or set(w) - {"kind", "n", "p"}:
                raise ConfigError("window accepts keys kind, n, p")
            kind = FILTER_ALIASES.get(w.get("kind"), w.get("kind", "savitzky_golay"))
            if kind not in KINDS:
                raise ConfigError(f"window.kind must be one of {KINDS}")
            try:
                kw["window"] = WindowSpec(kind, w.get("n"), w.get("p", 3))
            except WindowError as exc:
                raise ConfigError(str(exc)) from None

        for key in ("min_mentions", "pronoun_window"):
            if key in data:
                if not isinstance(data[key], int) or data[key] < 0:
                    raise ConfigError(f"{key} must be a non-negative integer")
                kw[key] = data[key]
        for key in ("pronouns", "modals", "excluded_lemmas"):
            if key in data:
                kw[key] = frozenset(str(x).lower() for x in data[key])
        for key in ("dead_band_fraction", "extrema_prominence_fraction"):
            if key in data:
                v = data[key]
                if not isinstance(v, (int, float)) or not 0 <= v <= 1:
                    raise ConfigError(f"{key} must be a number in [0, 1]")
                kw[key] = float(v)
        if "output_dir" in data:
            kw["output_dir"] = Path(data["output_dir"])  # relative to the working directory
        return cls(**kw)

    def to_dict(self) -> dict:
        return {
            "cleaning": {f.name: getattr(self.cleaning, f.name) for f in fields(CleaningConfig)},
            "lexicons": {k: str(v) for k, v in sorted(self.lexicons.items())},
            "extra_abbreviations": list(self.extra_abbreviations),
            "alpha": self.alpha,
            "emotion_weights": dict(self.emotion_weights),
            "window": {"kind": self.window.kind, "n": self.window.n, "p": self.window.p},
            "min_mentions": self.min_mentions,
            "pronoun_window": self.pronoun_window,
            "pronouns": sorted(self.pronouns),
            "modals": sorted(self.modals),
            "excluded_lemmas": sorted(self.excluded_lemmas),
            "dead_band_fraction": self.dead_band_fraction,
            "extrema_prominence_fraction": self.extrema_prominence_fraction,
            "output_dir": str(self.output_dir),
        }
