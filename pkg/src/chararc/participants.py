"""Actor/experiencer assignment by linear proximity with passive detection."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from chararc.characters import Mention
from chararc.corpus import Document
from chararc.events import GROUP_ADVERBS, EventTrigger, Span

PASSIVE_AUX = frozenset({"was", "were", "been", "is", "are", "being", "be"})


@dataclass(frozen=True)
class EventRecord:
    event_id: int
    trigger: EventTrigger
    actor_cluster: int | None
    experiencer_cluster: int | None
    sentiment: float | None = None
    emotions: tuple = field(default_factory=tuple)
    roles_from: str = "heuristic"

    @property
    def sentence_index(self) -> int:
        return self.trigger.sentence_index

    @property
    def token_index(self) -> int:
        return self.trigger.token_index

    @property
    def pair(self) -> tuple[int, int]:
        return (self.actor_cluster, self.experiencer_cluster)


def _is_passive(doc: Document, trig: EventTrigger, lo: int) -> bool:
    j = trig.token_index - 1
    while j >= lo:
        w = doc.tokens[j].lowercase
        if w in PASSIVE_AUX:
            return True
        if w in GROUP_ADVERBS or w == "not" or (w.endswith("ly") and len(w) > 3):
            j -= 1
            continue
        return False
    return False


COORDINATORS = frozenset({"and", "or", "but", "then"})


def _coordinated(doc: Document, pos: int, lo: int) -> bool:
    """True if the trigger at ``pos`` directly follows a coordinator
    ("smiled at him and took the sail"), so it shares the earlier subject."""
    j = pos - 1
    while j >= lo and doc.tokens[j].lowercase in GROUP_ADVERBS:
        j -= 1
    return j >= lo and doc.tokens[j].lowercase in COORDINATORS


def _candidates(mentions):
    """Mentions usable as participants: resolved and not possessive."""
    return [m for m in mentions if m.cluster_id is not None and not m.possessive]


def _nearest_before(cands, pos):
    best = None
    for m in cands:
        if m.token_range[1] <= pos:
            dist = pos - m.token_range[1]
            key = (dist, m.kind != "proper_name", m.start)
            if best is None or key < best[0]:
                best = (key, m)
    return best[1] if best else None


def _nearest_after(cands, pos):
    best = None
    for m in cands:
        if m.start > pos:
            dist = m.start - pos
            key = (dist, m.kind != "proper_name", m.start)
            if best is None or key < best[0]:
                best = (key, m)
    return best[1] if best else None


def cluster_for_span(doc: Document, mentions: list[Mention], span: Span,
                     alias_to_cluster: dict | None = None) -> int | None:
    """Cluster of a resolved mention overlapping ``span``, else by alias text."""
    for m in mentions:
        if m.cluster_id is None:
            continue
        start = doc.tokens[m.token_range[0]].start
        end = doc.tokens[m.token_range[1] - 1].end
        if start < span.end and span.start < end:
            return m.cluster_id
    if alias_to_cluster:
        return alias_to_cluster.get(doc.clean_text[span.start:span.end].strip())
    return None


def assign_roles(doc: Document, triggers: list[EventTrigger], mentions: list[Mention],
                 external: dict | None = None, alias_to_cluster: dict | None = None
                 ) -> list[EventRecord]:
    """Attach actor and experiencer clusters to each trigger.

    The actor is the nearest character mention before the trigger in the same
    sentence; if another trigger intervenes first, or the trigger directly
    follows "and"/"or"/"but"/"then", the verbs are read as coordinated and
    the actor is inherited. The experiencer is the nearest
    mention after the trigger. Passive triggers swap roles, taking the actor
    from a following "by" phrase. A lone participant becomes a self-relation;
    triggers with no participant are dropped.

    ``external`` maps trigger token index to an :class:`AnnotationRecord`
    whose actor/experiencer spans override the heuristic.
    """
    external = external or {}
    by_sentence: dict[int, list[Mention]] = {}
    for m in _candidates(mentions):
        by_sentence.setdefault(m.sentence_index, []).append(m)
    trig_by_sentence: dict[int, list[EventTrigger]] = {}
    for t in triggers:
        trig_by_sentence.setdefault(t.sentence_index, []).append(t)

    records = []
    for s_idx in sorted(trig_by_sentence):
        sent = doc.sentences[s_idx]
        cands = by_sentence.get(s_idx, [])
        actors: dict[int, int | None] = {}
        sent_triggers = sorted(trig_by_sentence[s_idx], key=lambda t: t.token_index)
        for k, trig in enumerate(sent_triggers):
            pos = trig.token_index
            before = _nearest_before(cands, pos)
            prev_trig = sent_triggers[k - 1] if k else None
            if prev_trig is not None and (
                    before is None or before.token_range[1] <= prev_trig.token_index
                    or _coordinated(doc, pos, sent.token_start)):
                actor = actors.get(prev_trig.token_index)
            else:
                actor = before.cluster_id if before else None
            after = _nearest_after(cands, pos)
            experiencer = after.cluster_id if after else None
            actors[pos] = actor

            if _is_passive(doc, trig, sent.token_start):
                by_actor = None
                if after is not None and after.start > pos + 1 \
                        and doc.tokens[after.start - 1].lowercase == "by":
                    by_actor = after.cluster_id
                actor, experiencer = by_actor, (before.cluster_id if before else None)

            source = "heuristic"
            rec = external.get(pos)
            if rec is not None:
                if rec.actor is not None:
                    actor = cluster_for_span(doc, mentions, rec.actor, alias_to_cluster)
                    source = "external"
                if rec.experiencer is not None:
                    experiencer = cluster_for_span(doc, mentions, rec.experiencer, alias_to_cluster)
                    source = "external"

            if actor is None and experiencer is None:
                continue
            if actor is None:
                actor = experiencer
            elif experiencer is None:
                experiencer = actor
            records.append(EventRecord(trig.event_id, trig, actor, experiencer, roles_from=source))
    return records


def dedupe_sentence_events(records: list[EventRecord]) -> list[EventRecord]:
    """Keep only the first event per (sentence, actor, experiencer)."""
    seen = set()
    out = []
    for r in sorted(records, key=lambda r: r.token_index):
        key = (r.sentence_index, r.actor_cluster, r.experiencer_cluster)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def with_scores(record: EventRecord, sentiment: float, emotions) -> EventRecord:
    return dataclasses.replace(record, sentiment=sentiment, emotions=tuple(emotions))
