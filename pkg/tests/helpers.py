"""Small text-in, structure-out wrappers used across the test modules."""
from collections import Counter
from pathlib import Path

from chararc import resources
from chararc.characters import cluster_names, detect_mentions, resolve_pronouns
from chararc.corpus import clean, segment
from chararc.events import tag_events
from chararc.participants import assign_roles, dedupe_sentence_events

SAMPLES = Path(__file__).resolve().parents[1] / "src" / "chararc" / "data" / "samples"
DATA = Path(__file__).resolve().parent / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


def doc_of(text):
    return segment(clean(text))


def characters_of(text, window=2):
    doc = doc_of(text)
    mentions = detect_mentions(doc, resources.honorifics())
    clusters = cluster_names(mentions, resources.honorifics(), resources.name_genders())
    return doc, resolve_pronouns(doc, mentions, clusters, window), clusters


def roles_of(text, dedupe=True):
    """[(trigger surface, actor name, experiencer name)] for a short text."""
    doc, mentions, clusters = characters_of(text)
    names = {c.cluster_id: c.canonical_name for c in clusters}
    records = assign_roles(doc, tag_events(doc), mentions)
    if dedupe:
        records = dedupe_sentence_events(records)
    return [(r.trigger.surface, names.get(r.actor_cluster), names.get(r.experiencer_cluster))
            for r in records]


def realis_counts():
    """Tag the one-sentence-per-line realis sample and compare with its gold.

    Returns (true positives, spurious, missed) as lists of (line, word).
    """
    lines = (SAMPLES / "realis_sample.txt").read_text(encoding="utf-8").splitlines()
    gold = {}
    for row in (SAMPLES / "realis_gold.tsv").read_text(encoding="utf-8").splitlines():
        if not row or row.startswith("#"):
            continue
        num, _, words = row.partition("\t")
        gold[int(num)] = Counter(w.strip().lower() for w in words.split(",") if w.strip())
    hits, spurious, missed = [], [], []
    for num, line in enumerate(lines, 1):
        found = Counter(t.surface.lower() for t in tag_events(doc_of(line)))
        want = gold.get(num, Counter())
        hits += [(num, w) for w in (found & want).elements()]
        spurious += [(num, w) for w in (found - want).elements()]
        missed += [(num, w) for w in (want - found).elements()]
    return hits, spurious, missed


# acceptance results, shared between tests/test_acceptance.py and conftest.py
ACCEPTANCE = {}
