"""Regenerate src/chararc/data/verbs.tsv from the lemma lists in this folder.

Usage: python tools/build_verb_lexicon.py
"""
from pathlib import Path
import re

HERE = Path(__file__).parent
OUT = HERE.parent / "src" / "chararc" / "data" / "verbs.tsv"

VOWELS = set("aeiou")
# stress-final polysyllables that double their last consonant
DOUBLING = {
    "abhor", "admit", "begin", "commit", "compel", "control", "equip",
    "forbid", "forget", "kidnap", "occur", "patrol", "permit", "prefer",
    "propel", "quit", "rebel", "refer", "regret", "submit", "upset",
}
SPECIAL_3SG = {"be": "is", "have": "has", "do": "does", "go": "goes"}


def _doubles(lemma):
    if lemma in DOUBLING:
        return True
    if len(lemma) < 3 or lemma[-1] in VOWELS or lemma[-1] in "wxy":
        return False
    if lemma[-2] not in VOWELS or lemma[-3] in VOWELS:
        return False
    # monosyllables only
    return len(re.findall(r"[aeiou]+", lemma)) == 1


def third_singular(lemma):
    if lemma in SPECIAL_3SG:
        return SPECIAL_3SG[lemma]
    if re.search(r"(s|x|z|ch|sh)$", lemma) or lemma in {"echo", "veto"}:
        return lemma + "es"
    if lemma.endswith("y") and lemma[-2] not in VOWELS:
        return lemma[:-1] + "ies"
    return lemma + "s"


def gerund(lemma):
    if lemma.endswith("ie"):
        return lemma[:-2] + "ying"
    if lemma.endswith("c"):
        return lemma + "king"
    if lemma.endswith("e") and not re.search(r"(ee|ye|oe)$", lemma) and lemma != "be":
        return lemma[:-1] + "ing"
    if _doubles(lemma):
        return lemma + lemma[-1] + "ing"
    return lemma + "ing"


def past(lemma):
    if lemma.endswith("e"):
        return lemma + "d"
    if lemma.endswith("c"):
        return lemma + "ked"
    if lemma.endswith("y") and lemma[-2] not in VOWELS:
        return lemma[:-1] + "ied"
    if _doubles(lemma):
        return lemma + lemma[-1] + "ed"
    return lemma + "ed"


def main():
    rows = {}

    def add(form, lemma, tag):
        rows.setdefault((form, lemma), set()).add(tag)

    irregular = {}
    for line in (HERE / "irregular_verbs.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        lemma, vbd, vbn = line.split()
        irregular[lemma] = (vbd.split("/"), vbn.split("/"))

    regular = (HERE / "regular_verbs.txt").read_text().split()
    for lemma in sorted(set(regular) | set(irregular)):
        add(lemma, lemma, "VB")
        add(third_singular(lemma), lemma, "VBZ")
        add(gerund(lemma), lemma, "VBG")
        if lemma in irregular:
            vbds, vbns = irregular[lemma]
        else:
            vbds = vbns = [past(lemma)]
        for form in vbds:
            add(form, lemma, "VBD")
        for form in vbns:
            add(form, lemma, "VBN")
    # be is fully suppletive
    for form in ("am", "are", "were"):
        add(form, "be", "VBP" if form != "were" else "VBD")

    order = ["VB", "VBP", "VBZ", "VBD", "VBN", "VBG"]
    with OUT.open("w", encoding="utf-8") as fh:
        fh.write("# form\tlemma\ttags (generated by tools/build_verb_lexicon.py)\n")
        for (form, lemma), tags in sorted(rows.items()):
            fh.write(f"{form}\t{lemma}\t{','.join(t for t in order if t in tags)}\n")
    print(f"wrote {len(rows)} entries to {OUT}")


if __name__ == "__main__":
    main()
