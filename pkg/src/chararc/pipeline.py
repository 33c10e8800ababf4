"""End-to-end orchestration: text -> characters -> events -> roles -> scores -> arcs."""
from __future__ import annotations

import logging
import re
import warnings
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from chararc import corpus, resources
from chararc.arcs import ACTOR, EXPERIENCER, build_character_arc, build_relation_arcs, find_extrema, raw_circumstance
from chararc.characters import (
    alias_index, characters_report, cluster_names, detect_mentions, resolve_pronouns,
)
from chararc.config import PipelineConfig
from chararc.events import (
    AnnotationError, VerbLexicon, event_density, ingest_annotations, merge_annotations, tag_events,
)
from chararc.export import (
    arc_filename, character_arc_csv, events_csv, extrema_csv, fmt, json_text,
    relation_arc_csv, relation_arcs_csv, write_text_atomic,
)
from chararc.participants import assign_roles, dedupe_sentence_events, with_scores
from chararc.plotting import render_arc_svg, render_relation_svg
from chararc.scoring import EmotionLexicon, SentimentLexicon, score_emotions, score_sentiment

log = logging.getLogger(__name__)


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {type(cause).__name__}: {cause}")


@contextmanager
def stage(name: str):
    try:
        yield
    except (StageError, AnnotationError):
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


@dataclass
class Analysis:
    doc: corpus.Document
    mentions: list
    clusters: list
    triggers: list
    records: list
    names: dict
    stats: dict
    external_count: int = 0


@dataclass
class ArcResult:
    relation_arcs: dict
    character_arcs: dict  # cluster_id -> CharacterArc
    extrema: list  # (name, role, Extremum)
    passed_through: int = 0


@dataclass
class ArtifactBundle:
    out_dir: Path
    files: dict = field(default_factory=dict)  # relative path -> text
    stats: dict = field(default_factory=dict)


def read_document(path, config: PipelineConfig) -> corpus.Document:
    path = Path(path)
    with stage("corpus"):
        return corpus.load(path, rules=config.cleaning, abbreviations=config.abbreviations())


def find_characters(doc, config: PipelineConfig):
    with stage("characters"):
        honorifics = resources.honorifics(config.lexicon_path("honorifics"))
        names = resources.name_genders(config.lexicon_path("names"))
        mentions = detect_mentions(doc, honorifics, config.pronouns)
        clusters = cluster_names(mentions, honorifics, names)
        mentions = resolve_pronouns(doc, mentions, clusters, config.pronoun_window)
    return mentions, clusters


def analyze(input_path, config: PipelineConfig, annotations_path=None) -> Analysis:
    doc = read_document(input_path, config)
    mentions, clusters = find_characters(doc, config)

    with stage("events"):
        lexicon = VerbLexicon.load(config.lexicon_path("verbs"), config.excluded_lemmas)
        triggers = tag_events(doc, lexicon, config.modals)
    external = {}
    n_external = 0
    if annotations_path is not None:
        records_in = ingest_annotations(annotations_path)
        n_external = len(records_in)
        triggers, external = merge_annotations(doc, triggers, records_in, lexicon)

    eligible = {c.cluster_id for c in clusters if c.mention_count >= config.min_mentions}
    names = {c.cluster_id: c.canonical_name for c in clusters}
    with stage("participants"):
        usable = [m for m in mentions if m.cluster_id in eligible]
        aliases = {a: cid for a, cid in alias_index(clusters).items() if cid in eligible}
        records = assign_roles(doc, triggers, usable, external, aliases)
        records = dedupe_sentence_events(records)

    with stage("scoring"):
        sent_lex = SentimentLexicon.load(config.lexicon_path("sentiment"))
        emo_lex = EmotionLexicon.load(config.lexicon_path("emotions"))
        verbs = lexicon.forms
        cache = {}
        scored = []
        for r in records:
            if r.sentence_index not in cache:
                words = [t.lowercase for t in doc.sentence_tokens(r.sentence_index) if t.is_alpha]
                cache[r.sentence_index] = (score_sentiment(words, sent_lex, verbs),
                                           score_emotions(words, emo_lex, verbs))
            s, emotions = cache[r.sentence_index]
            ext = external.get(r.token_index)
            if ext is not None:
                if ext.sentiment is not None:
                    s = ext.sentiment
                if ext.emotions is not None:
                    emotions = list(ext.emotions)
            scored.append(with_scores(r, s, emotions))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        density = event_density(doc, triggers)
    st = corpus.corpus_stats(doc)
    unresolved = sum(1 for m in mentions if m.kind == "pronoun" and m.cluster_id is None)
    stats = {
        "doc_id": doc.doc_id,
        "word_count": st["word_count"],
        "sentence_count": st["sentence_count"],
        "trigger_count": len(triggers),
        "event_count": len(scored),
        "event_density": round(density, 10),
        "cluster_count": len(clusters),
        "eligible_cluster_count": len(eligible),
        "unresolved_pronouns": unresolved,
        "external_annotations": n_external,
    }
    return Analysis(doc, mentions, clusters, triggers, scored, names, stats, n_external)


def _rounded(values):
    return [float(fmt(v)) for v in values]


def compute_arcs(records, names: dict, config: PipelineConfig, characters=None) -> ArcResult:
    """Relation arcs for every pair and character arcs for ``characters``
    (default: every character taking part in an event)."""
    params = config.params
    with stage("arcs"):
        relation = build_relation_arcs(records, params, config.window)
        if characters is None:
            characters = sorted({r.actor_cluster for r in records} | {r.experiencer_cluster for r in records})
        char_arcs = {}
        extrema = []
        passed = sum(1 for a in relation.values() if a.passed_through)
        for cid in characters:
            arc = build_character_arc(cid, records, params, config.window)
            char_arcs[cid] = arc
            passed += sum(1 for v in arc.passed_through.values() if v)
            for role in (ACTOR, EXPERIENCER):
                pts = arc.series(role)
                values = _rounded(p.smoothed_t for p in pts)
                if len(values) < 3:
                    continue
                spread = max(values) - min(values)
                threshold = config.extrema_prominence_fraction * spread
                if spread == 0:
                    continue
                for e in find_extrema(values, threshold, [p.event_id for p in pts]):
                    extrema.append((names[cid], role, e, cid))
    return ArcResult(relation, char_arcs, extrema, passed)


def arc_files(result: ArcResult, names: dict, render: bool = True) -> dict:
    files = {}
    files["relation_arcs.csv"] = relation_arcs_csv(result.relation_arcs, names)
    files["extrema.csv"] = extrema_csv((n, role, e) for n, role, e, _ in result.extrema)
    for cid, arc in result.character_arcs.items():
        name = names[cid]
        stem = arc_filename(cid, name)
        files[f"arcs/{stem}.csv"] = character_arc_csv(arc, name)
        if render:
            files[f"plots/{stem}.svg"] = character_svg(arc, name, [
                (role, e) for _, role, e, c in result.extrema if c == cid])
    return files


def character_svg(arc, name: str, extrema) -> str:
    series = {}
    ordinal_of = {}
    for role in (ACTOR, EXPERIENCER):
        pts = arc.series(role)
        series[role] = list(zip(range(len(pts)), _rounded(p.smoothed_t for p in pts)))
        ordinal_of[role] = {p.event_id: k for k, p in enumerate(pts)}
    markers = [(role, ordinal_of[role][e.event_id], e.kind, float(fmt(e.prominence)))
               for role, e in extrema]
    with stage("render"):
        return render_arc_svg(name, series, markers)


def relation_files(arc, names: dict) -> dict:
    a, b = names[arc.key.actor_cluster], names[arc.key.experiencer_cluster]
    stem = f"relation_{arc.key.actor_cluster:03d}_{arc.key.experiencer_cluster:03d}"
    pts = list(zip(range(len(arc.points)), _rounded(p.smoothed_t for p in arc.points)))
    with stage("render"):
        svg = render_relation_svg(f"{a} → {b}", pts)
    return {f"arcs/{stem}.csv": relation_arc_csv(arc, names), f"plots/{stem}.svg": svg}


def analysis_files(analysis: Analysis, config: PipelineConfig) -> dict:
    params = config.params
    raw_t = {r.event_id: raw_circumstance(r, params) for r in analysis.records}
    return {
        "characters.json": json_text(
            characters_report(analysis.clusters, analysis.mentions, config.min_mentions)),
        "events.csv": events_csv(analysis.records, analysis.names, raw_t),
    }


def write_files(out_dir, files: dict) -> None:
    """Write every file atomically; on failure remove what this call wrote."""
    out_dir = Path(out_dir)
    written = []
    try:
        for rel in sorted(files):
            path = out_dir / rel
            write_text_atomic(path, files[rel])
            written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise


_GENERATED = re.compile(r"^(?:\d{3}_[a-z0-9_]+|relation_\d{3}_\d{3})\.(?:csv|svg)$")


def prune_stale(out_dir, files: dict) -> list:
    """Remove arc and plot files left by an earlier run that this run did not produce."""
    removed = []
    for sub in ("arcs", "plots"):
        folder = Path(out_dir) / sub
        if not folder.is_dir():
            continue
        for path in sorted(folder.iterdir()):
            rel = f"{sub}/{path.name}"
            if rel not in files and _GENERATED.match(path.name):
                path.unlink()
                removed.append(rel)
    return removed


def run_pipeline(input_path, config: PipelineConfig, annotations_path=None,
                 out_dir=None) -> ArtifactBundle:
    out_dir = Path(out_dir) if out_dir is not None else config.output_dir
    analysis = analyze(input_path, config, annotations_path)
    result = compute_arcs(analysis.records, analysis.names, config)
    files = analysis_files(analysis, config)
    files.update(arc_files(result, analysis.names))
    stats = dict(analysis.stats)
    stats.update({
        "relation_arc_count": len(result.relation_arcs),
        "character_arc_count": len(result.character_arcs),
        "extrema_count": len(result.extrema),
        "short_series_passed_through": result.passed_through,
        "window": {"kind": config.window.kind, "n": config.window.n, "p": config.window.p},
        "alpha": config.alpha,
    })
    files["stats.json"] = json_text(stats)
    with stage("export"):
        write_files(out_dir, files)
        for rel in prune_stale(out_dir, files):
            log.info("removed stale %s", rel)
    log.info("wrote %d files to %s", len(files), out_dir)
    return ArtifactBundle(out_dir, files, stats)
