"""Loaders for the bundled word lists and lexicons."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    return Path(str(resources.files("chararc") / "data" / name))


def _rows(path):
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        yield lineno, line.rstrip("\n").split("\t")


@lru_cache(maxsize=None)
def abbreviations(path=None) -> frozenset:
    path = path or data_path("abbreviations.txt")
    return frozenset(cols[0].strip() for _, cols in _rows(path))


@lru_cache(maxsize=None)
def honorifics(path=None) -> dict:
    """Map honorific surface form -> gender ('m', 'f' or None)."""
    path = path or data_path("honorifics.tsv")
    out = {}
    for _, cols in _rows(path):
        gender = cols[1].strip() if len(cols) > 1 else "-"
        out[cols[0].strip()] = gender if gender in ("m", "f") else None
    return out


@lru_cache(maxsize=None)
def name_genders(path=None) -> dict:
    path = path or data_path("names.tsv")
    return {cols[0].strip().lower(): cols[1].strip() for _, cols in _rows(path)}


@lru_cache(maxsize=None)
def verb_forms(path=None) -> dict:
    """Map lowercase form -> tuple of (lemma, frozenset of tags).

    Analyses carrying a past tag come first, so ``saw`` reads as *see*
    before *saw*.
    """
    path = path or data_path("verbs.tsv")
    out: dict[str, list] = {}
    for _, cols in _rows(path):
        form, lemma, tags = cols[0], cols[1], frozenset(cols[2].split(","))
        out.setdefault(form, []).append((lemma, tags))
    return {
        form: tuple(sorted(analyses, key=lambda a: (not (a[1] & {"VBD", "VBN"}), a[0])))
        for form, analyses in out.items()
    }


class LexiconError(ValueError):
    pass


def read_tsv_lexicon(path, parse_value):
    out = {}
    for lineno, cols in _rows(path):
        if len(cols) < 2:
            raise LexiconError(f"{path}:{lineno}: expected two tab-separated columns")
        try:
            out[cols[0].strip().lower()] = parse_value(cols[1].strip())
        except ValueError as exc:
            raise LexiconError(f"{path}:{lineno}: {exc}") from None
    return out
