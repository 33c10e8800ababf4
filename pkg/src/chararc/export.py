"""Delimited and JSON artifacts, plus readers for the ones that feed later stages."""
from __future__ import annotations

import csv
import io
import json
import os
import re
import tempfile
from pathlib import Path

from chararc.arcs import ACTOR, EXPERIENCER, CharacterArc, Extremum, RelationArc
from chararc.events import EventTrigger
from chararc.participants import EventRecord

EVENT_COLUMNS = [
    "event_id", "sentence_index", "token_index", "trigger", "lemma", "source",
    "roles_from", "actor_id", "actor", "experiencer_id", "experiencer",
    "sentiment", "emotions", "raw_t",
]
ARC_COLUMNS = ["character", "role", "ordinal", "event_id", "sentence_index", "raw_t", "smoothed_t"]
RELATION_COLUMNS = ["actor", "experiencer", "ordinal", "event_id", "sentence_index", "raw_t", "smoothed_t"]
EXTREMA_COLUMNS = ["character", "role", "event_id", "kind", "prominence"]


class ExportError(ValueError):
    pass


def fmt(x: float) -> str:
    """Fixed-precision float text; negative zero prints as zero."""
    s = f"{x:.10f}"
    return "0.0000000000" if s == "-0.0000000000" else s


def slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_") or "character"


def arc_filename(cluster_id: int, name: str) -> str:
    return f"{cluster_id:03d}_{slug(name)}"


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emotions_text(emotions) -> str:
    return ";".join(f"{label}:{conf!r}" for label, conf in emotions)


def parse_emotions(text: str):
    if not text:
        return ()
    out = []
    for item in text.split(";"):
        label, _, conf = item.partition(":")
        out.append((label, float(conf)))
    return tuple(out)


def events_csv(records: list[EventRecord], names: dict, raw_t: dict) -> str:
    rows = []
    for r in records:
        t = r.trigger
        rows.append([
            r.event_id, t.sentence_index, t.token_index, t.surface, t.lemma, t.source,
            r.roles_from, r.actor_cluster, names[r.actor_cluster],
            r.experiencer_cluster, names[r.experiencer_cluster],
            repr(r.sentiment), emotions_text(r.emotions), repr(raw_t[r.event_id]),
        ])
    return _csv_text(EVENT_COLUMNS, rows)


def read_events_csv(path) -> tuple[list[EventRecord], dict]:
    """Rebuild scored event records and the cluster-name table from a saved table."""
    records, names = [], {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EVENT_COLUMNS:
            raise ExportError(f"{path}: not an event table (expected columns {EVENT_COLUMNS})")
        for lineno, row in enumerate(reader, 2):
            try:
                trig = EventTrigger(int(row["event_id"]), int(row["token_index"]), row["lemma"],
                                    int(row["sentence_index"]), True, row["source"], row["trigger"])
                actor, exp = int(row["actor_id"]), int(row["experiencer_id"])
                names[actor] = row["actor"]
                names[exp] = row["experiencer"]
                records.append(EventRecord(trig.event_id, trig, actor, exp,
                                           float(row["sentiment"]),
                                           parse_emotions(row["emotions"]),
                                           row["roles_from"]))
            except ValueError as exc:
                raise ExportError(f"{path}:{lineno}: {exc}") from None
    return records, names


def character_arc_rows(arc: CharacterArc, name: str):
    for role in (ACTOR, EXPERIENCER):
        for k, p in enumerate(arc.series(role)):
            yield [name, role, k, p.event_id, p.sentence_index, fmt(p.raw_t), fmt(p.smoothed_t)]


def character_arc_csv(arc: CharacterArc, name: str) -> str:
    return _csv_text(ARC_COLUMNS, character_arc_rows(arc, name))


def relation_arcs_csv(arcs: dict, names: dict) -> str:
    rows = []
    for key, arc in arcs.items():
        for k, p in enumerate(arc.points):
            rows.append([names[key.actor_cluster], names[key.experiencer_cluster], k,
                         p.event_id, p.sentence_index, fmt(p.raw_t), fmt(p.smoothed_t)])
    return _csv_text(RELATION_COLUMNS, rows)


def relation_arc_csv(arc: RelationArc, names: dict) -> str:
    return relation_arcs_csv({arc.key: arc}, names)


def extrema_csv(entries) -> str:
    """``entries`` yields (character name, role, Extremum)."""
    rows = [[name, role, e.event_id, e.kind, fmt(e.prominence)] for name, role, e in entries]
    return _csv_text(EXTREMA_COLUMNS, rows)


def read_arc_csv(path):
    """Read a character or relation arc CSV.

    Returns ``(kind, rows)`` where kind is "character" or "relation" and rows
    are dicts with numeric fields converted.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header == ARC_COLUMNS:
            kind = "character"
        elif header == RELATION_COLUMNS:
            kind = "relation"
        else:
            raise ExportError(f"{path}: not an arc CSV")
        rows = []
        for row in reader:
            for col in ("ordinal", "event_id", "sentence_index"):
                row[col] = int(row[col])
            for col in ("raw_t", "smoothed_t"):
                row[col] = float(row[col])
            rows.append(row)
    return kind, rows


def extremum_from_row(row) -> Extremum:
    return Extremum(-1, int(row["event_id"]), row["kind"], float(row["prominence"]))
