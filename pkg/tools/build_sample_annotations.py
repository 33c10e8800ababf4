"""Write the hand-judged annotation file for the bundled sample narrative.

Each entry names a sentence by a unique substring, the trigger word, the
actor and experiencer surfaces (``word#2`` picks the second occurrence in the
sentence), and the judged sentiment and emotions. This script only turns those
judgments into character offsets.
"""
import json
import re
import sys
from pathlib import Path

from chararc.corpus import load

ROOT = Path(__file__).resolve().parents[1]
SAMPLES = ROOT / "src" / "chararc" / "data" / "samples"

ENTRIES = [
    ("Edith scolded Tobias", "scolded", "Edith", "Tobias", 0.2, [("disapproval", 0.9), ("anger", 0.5)]),
    ("Tobias refused her advice", "refused", "Tobias", None, 0.35, [("disapproval", 0.6)]),
    ("He loved Wren", "loved", "He", "Wren", 0.95, [("love", 0.95)]),
    ("Silas threatened him quietly", "threatened", "Silas", "him", 0.1, [("fear", 0.7), ("anger", 0.6)]),
    ("Mrs. Marlow carried the letter", "carried", "Mrs. Marlow", None, 0.2, [("disapproval", 0.5)]),
    ("Wren wept bitterly", "wept", "Wren", None, 0.05, [("grief", 0.9), ("sadness", 0.9)]),
    ("She felt alone and ashamed", "felt", "She", None, 0.1, [("sadness", 0.8), ("embarrassment", 0.6)]),
    ("Edith Marlow thanked him for his help", "thanked", "Edith Marlow", "him", 0.8, [("gratitude", 0.9)]),
    ("Tobias held her hands", "held", "Tobias", "her", 0.7, [("caring", 0.9), ("love", 0.6)]),
    ("Wren cried quietly", "cried", "Wren", None, 0.15, [("sadness", 0.9)]),
    ("Tobias argued with her", "argued", "Tobias", "her", 0.2, [("anger", 0.6), ("annoyance", 0.6)]),
    ("Silas visited her that evening", "comforted", "Silas", "her", 0.75, [("caring", 0.7)]),
    ("He hated the stubborn old man", "hated", "He", None, 0.05, [("anger", 0.9)]),
    ("She found Dr. Hale on the stairs", "found", "She", "Dr. Hale", 0.3, [("fear", 0.8)]),
    ("Wren bandaged his head gently", "bandaged", "Wren", "his", 0.7, [("caring", 0.95)]),
    ("Tobias embraced her in front", "embraced", "Tobias", "her", 0.97, [("love", 0.9), ("joy", 0.9)]),
    ("He thanked her with tears", "thanked", "He", "her", 0.95, [("gratitude", 0.95), ("joy", 0.7)]),
    ("Wren nursed him for a week", "nursed", "Wren", "him", 0.75, [("caring", 0.95)]),
    ("Edith Marlow wept with relief", "embraced", "Edith Marlow", None, 0.85, [("relief", 0.9), ("remorse", 0.6)]),
    ("Silas cursed the town", "cursed", "Silas", None, 0.05, [("anger", 0.95)]),
    ("Tobias held the merchant", "held", "Tobias", None, 0.6, [("pride", 0.5)]),
    ("The judge condemned him", "condemned", None, "him", 0.1, [("disapproval", 0.9)]),
    ("Dr. Hale asked her to keep the light", "asked", "Dr. Hale", "her", 0.8, [("optimism", 0.7), ("caring", 0.6)]),
    ("Tobias married Wren", "married", "Tobias", "Wren", 0.98, [("joy", 0.95), ("love", 0.95)]),
]


def _find(text: str, surface: str, base: int) -> dict:
    word, _, nth = surface.partition("#")
    hits = [m for m in re.finditer(rf"(?<!\w){re.escape(word)}(?!\w)", text)]
    k = int(nth) - 1 if nth else 0
    if len(hits) <= k:
        raise SystemExit(f"{surface!r} not found in {text!r}")
    m = hits[k]
    return {"start": base + m.start(), "end": base + m.end()}


def build(doc) -> list[dict]:
    records = []
    for needle, trigger, actor, experiencer, sentiment, emotions in ENTRIES:
        matches = [s for s in doc.sentences if needle in doc.sentence_text(s.index)]
        if len(matches) != 1:
            raise SystemExit(f"{needle!r} matches {len(matches)} sentences")
        sent = matches[0]
        text = doc.sentence_text(sent.index)
        rec = {"doc_id": doc.doc_id, "sentence_index": sent.index,
               "trigger": _find(text, trigger, sent.start)}
        if actor:
            rec["actor"] = _find(text, actor, sent.start)
        if experiencer:
            rec["experiencer"] = _find(text, experiencer, sent.start)
        rec["sentiment"] = sentiment
        rec["emotions"] = [{"label": lab, "confidence": c} for lab, c in emotions]
        records.append(rec)
    records.sort(key=lambda r: (r["sentence_index"], r["trigger"]["start"]))
    return records


def main(argv=None):
    doc = load(SAMPLES / "greywater.txt")
    out = SAMPLES / "greywater.annotations.jsonl"
    lines = [json.dumps(r, sort_keys=True) for r in build(doc)]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} records to {out}")


if __name__ == "__main__":
    sys.exit(main())
