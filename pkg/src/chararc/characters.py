"""Character mentions, alias clustering and pronoun resolution.

A rule-based stand-in for a full NER + coreference stack: proper names are
runs of capitalised tokens, name variants merge by token-subset and
shared-surname rules, and pronouns bind to the most recent gender-compatible
name within a few sentences.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from chararc import resources
from chararc.corpus import Document

DEFAULT_PRONOUNS = frozenset({"he", "she", "him", "her", "his", "hers"})
PRONOUN_GENDERS = {
    "he": "m", "him": "m", "his": "m", "himself": "m",
    "she": "f", "her": "f", "hers": "f", "herself": "f",
}
NOT_NAMES = frozenset("""
I Monday Tuesday Wednesday Thursday Friday Saturday Sunday January February March
April May June July August September October November December""".split())
_OPENERS = {'"', "'", "“", "‘", "(", "["}
# words that may follow an object "her" ("kissed her gently", "gave her the key")
_AFTER_OBJECT = frozenset("""
a an the to and but or nor as at in on with by for from into onto over under up down
back away out off again then that this there here once too so if when while before
after until now not never yet all both again""".split())


@dataclass(frozen=True)
class Mention:
    token_range: tuple[int, int]
    kind: str  # "proper_name" or "pronoun"
    sentence_index: int
    text: str
    cluster_id: int | None = None
    possessive: bool = False

    @property
    def start(self) -> int:
        return self.token_range[0]


@dataclass
class CharacterCluster:
    cluster_id: int
    canonical_name: str
    aliases: list[str]
    mention_count: int
    mention_indices: list[int]
    gender: str | None = None
    first_offset: int | None = None
    last_offset: int | None = None
    pronoun_count: int = 0


def _possessive_strip(surface: str) -> str:
    for suffix in ("'s", "’s"):
        if surface.endswith(suffix) and len(surface) > len(suffix):
            return surface[: -len(suffix)]
    if surface.endswith(("s'", "s’")):
        return surface[:-1]
    return surface


def _initial_positions(doc: Document) -> set[int]:
    """Token indices that are capitalised for positional reasons."""
    initial = set()
    for sent in doc.sentences:
        first = True
        for i in range(sent.token_start, sent.token_end):
            tok = doc.tokens[i]
            if tok.surface in _OPENERS:
                first = True
                continue
            if first:
                initial.add(i)
            first = tok.surface in (":",)
    return initial


def _is_possessive_her(doc, i, verbs) -> bool:
    if i + 1 >= len(doc.tokens):
        return False
    nxt = doc.tokens[i + 1]
    if nxt.sentence_index != doc.tokens[i].sentence_index:
        return False
    low = nxt.surface.lower()
    if not nxt.is_alpha or nxt.is_capitalized or low in _AFTER_OBJECT:
        return False
    return not low.endswith("ly") and low not in verbs


def detect_mentions(doc: Document, honorifics=None, pronouns=DEFAULT_PRONOUNS) -> list[Mention]:
    if honorifics is None:
        honorifics = resources.honorifics()
    verbs = resources.verb_forms()
    initial = _initial_positions(doc)
    seen_mid = {
        t.surface for i, t in enumerate(doc.tokens)
        if i not in initial and t.is_capitalized
    }
    seen_lower = {t.surface for t in doc.tokens if t.surface[:1].islower()}
    first_names = resources.name_genders()

    def name_like(i):
        tok = doc.tokens[i]
        if tok.surface in honorifics:
            return True
        if not tok.is_capitalized or not tok.is_alpha or tok.surface in NOT_NAMES:
            return False
        if tok.lowercase in pronouns or tok.lowercase in PRONOUN_GENDERS:
            return False
        if i in initial:
            bare = _possessive_strip(tok.surface)
            if bare in seen_mid or tok.surface in seen_mid:
                return True
            # a known first name never written in lowercase elsewhere
            return bare.lower() in first_names and bare.lower() not in seen_lower
        return True

    mentions = []
    for sent in doc.sentences:
        i = sent.token_start
        while i < sent.token_end:
            tok = doc.tokens[i]
            if name_like(i):
                j = i
                while j + 1 < sent.token_end and name_like(j + 1) \
                        and not doc.tokens[j].surface.endswith(("'s", "’s")):
                    j += 1
                surfaces = [doc.tokens[k].surface for k in range(i, j + 1)]
                surfaces[-1] = _possessive_strip(surfaces[-1])
                if any(s not in honorifics for s in surfaces):
                    mentions.append(Mention((i, j + 1), "proper_name",
                                            sent.index, " ".join(surfaces)))
                i = j + 1
                continue
            if tok.lowercase in pronouns:
                poss = tok.lowercase == "his" or (
                    tok.lowercase == "her" and _is_possessive_her(doc, i, verbs))
                mentions.append(Mention((i, i + 1), "pronoun", sent.index,
                                        tok.surface, possessive=poss))
            i += 1
    return mentions


@dataclass
class _Variant:
    text: str
    tokens: tuple[str, ...]
    core: tuple[str, ...]
    gender: str | None
    count: int = 0
    first: int = 0
    indices: list[int] = field(default_factory=list)


def _variant_gender(tokens, core, honorifics, names):
    for tok in tokens:
        if tok in honorifics and honorifics[tok]:
            return honorifics[tok]
    if len(core) >= 1 and (len(core) >= 2 or not any(t in honorifics for t in tokens)):
        return names.get(core[0].lower())
    return None


def _compatible(a: _Variant, b: _Variant) -> bool:
    if a.gender and b.gender and a.gender != b.gender:
        return False
    sa, sb = set(a.core), set(b.core)
    if sa <= sb or sb <= sa:
        return True
    if a.core[-1] == b.core[-1]:
        if len(a.core) == 1 or len(b.core) == 1:
            return True
        return a.core[0] == b.core[0]
    return False


def _gender_ok(v: _Variant, group) -> bool:
    return v.gender is None or all(o.gender in (None, v.gender) for o in group)


def _canonical_key(v: _Variant):
    return (-len(v.core), -len(v.tokens), -v.count, v.first, v.text)


def cluster_names(mentions: list[Mention], honorifics=None, names=None) -> list[CharacterCluster]:
    """Group proper-name variants into characters.

    Variants are visited longest first, so each cluster is seeded by its
    canonical name. A variant joins a cluster when it is compatible with one
    of the (equally long or longer) names already in it and its gender does
    not conflict with the cluster's. When
    a short name fits several clusters it goes to the one with more mentions,
    ties broken by earlier first mention.
    """
    if honorifics is None:
        honorifics = resources.honorifics()
    if names is None:
        names = resources.name_genders()

    variants: dict[str, _Variant] = {}
    order = sorted(range(len(mentions)), key=lambda k: (mentions[k].token_range, mentions[k].text))
    for k in order:
        m = mentions[k]
        if m.kind != "proper_name":
            continue
        v = variants.get(m.text)
        if v is None:
            tokens = tuple(m.text.split(" "))
            core = tuple(t for t in tokens if t not in honorifics)
            if not core:
                continue
            v = variants[m.text] = _Variant(
                m.text, tokens, core, _variant_gender(tokens, core, honorifics, names),
                first=m.start)
        v.count += 1
        v.indices.append(k)

    groups: list[list[_Variant]] = []
    for v in sorted(variants.values(), key=_canonical_key):
        fits = [g for g in groups if _gender_ok(v, g) and any(_compatible(v, m) for m in g)]
        if not fits:
            groups.append([v])
            continue
        best = min(fits, key=lambda g: (-sum(x.count for x in g), min(x.first for x in g)))
        best.append(v)

    groups.sort(key=lambda g: min(x.first for x in g))
    clusters = []
    for cid, g in enumerate(groups):
        canonical = min(g, key=_canonical_key)
        indices = sorted(i for v in g for i in v.indices)
        gender = next((v.gender for v in sorted(g, key=_canonical_key) if v.gender), None)
        clusters.append(CharacterCluster(
            cluster_id=cid,
            canonical_name=canonical.text,
            aliases=sorted(v.text for v in g),
            mention_count=len(indices),
            mention_indices=indices,
            gender=gender,
        ))
    return clusters


def alias_index(clusters: list[CharacterCluster]) -> dict[str, int]:
    return {alias: c.cluster_id for c in clusters for alias in c.aliases}


OBJECT_PRONOUNS = frozenset({"him", "her"})
CLAUSE_BREAKS = frozenset(""", ; : " “ ” ( ) and but or nor that who whom which when while
because before after until since as if though although""".split())


def _same_clause(doc: Document, a: Mention, b: Mention) -> bool:
    if a.sentence_index != b.sentence_index:
        return False
    between = doc.tokens[a.token_range[1]:b.token_range[0]]
    return not any(t.lowercase in CLAUSE_BREAKS for t in between)


def resolve_pronouns(doc: Document, mentions: list[Mention], clusters: list[CharacterCluster],
                     window: int = 2, pronoun_genders=PRONOUN_GENDERS) -> list[Mention]:
    """Return mentions in text order with ``cluster_id`` filled where possible.

    Each pronoun binds to the nearest preceding resolved mention (a name or
    an earlier resolved pronoun) at most ``window`` sentences back whose
    cluster gender matches; failing that, to the nearest one of unknown
    gender. Object pronouns skip mentions in their own clause ("Silas
    threatened him" is not Silas). Unresolved pronouns keep
    ``cluster_id=None``.
    """
    by_alias = alias_index(clusters)
    genders = {c.cluster_id: c.gender for c in clusters}
    out = []
    recent: list[Mention] = []
    for m in sorted(mentions, key=lambda m: m.token_range):
        if m.kind == "proper_name":
            m = dataclasses.replace(m, cluster_id=by_alias.get(m.text))
            if m.cluster_id is not None:
                recent.append(m)
            out.append(m)
            continue
        want = pronoun_genders.get(m.text.lower())
        is_object = m.text.lower() in OBJECT_PRONOUNS and not m.possessive
        cid = fallback = None
        for cand in reversed(recent):
            if m.sentence_index - cand.sentence_index > window:
                break
            if is_object and _same_clause(doc, cand, m):
                continue
            g = genders.get(cand.cluster_id)
            if want is None or g == want:
                cid = cand.cluster_id
                break
            if g is None and fallback is None:
                fallback = cand.cluster_id
        if cid is None:
            cid = fallback
        m = dataclasses.replace(m, cluster_id=cid)
        out.append(m)
        if cid is not None:
            recent.append(m)
        if len(recent) > 64:
            del recent[:32]
    _fill_report_fields(doc, out, clusters)
    return out


def _fill_report_fields(doc, mentions, clusters):
    by_id = {c.cluster_id: c for c in clusters}
    for c in clusters:
        c.first_offset = c.last_offset = None
        c.pronoun_count = 0
    for m in mentions:
        c = by_id.get(m.cluster_id)
        if c is None:
            continue
        if m.kind == "pronoun":
            c.pronoun_count += 1
        start = doc.tokens[m.token_range[0]].start
        end = doc.tokens[m.token_range[1] - 1].end
        if c.first_offset is None or start < c.first_offset:
            c.first_offset = start
        if c.last_offset is None or end > c.last_offset:
            c.last_offset = end


def characters_report(clusters: list[CharacterCluster], mentions: list[Mention],
                      min_mentions: int) -> dict:
    unresolved = sum(1 for m in mentions if m.kind == "pronoun" and m.cluster_id is None)
    return {
        "min_mentions": min_mentions,
        "unresolved_pronouns": unresolved,
        "clusters": [
            {
                "cluster_id": c.cluster_id,
                "canonical_name": c.canonical_name,
                "aliases": c.aliases,
                "gender": c.gender,
                "mention_count": c.mention_count,
                "pronoun_count": c.pronoun_count,
                "first_offset": c.first_offset,
                "last_offset": c.last_offset,
                "eligible": c.mention_count >= min_mentions,
            }
            for c in clusters
        ],
    }
