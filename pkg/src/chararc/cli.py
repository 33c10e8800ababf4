"""Command-line entry point.

Exit codes: 0 success, 2 configuration/validation/usage error, 3 stage failure.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from chararc import __version__
from chararc.arcs import ACTOR, EXPERIENCER, RelationKey
from chararc.characters import characters_report
from chararc.config import ConfigError, PipelineConfig
from chararc.corpus import OversizedInputError
from chararc.evalkit import (
    DegenerateAgreementError, EvalError, default_dead_band, fleiss_kappa, format_confusion,
    label_shifts, read_key, read_responses, read_shift_labels, response_accuracy,
    shift_confusion, write_confusion_csv,
)
from chararc.events import AnnotationError, check_bounds, ingest_annotations
from chararc.export import (
    ExportError, extremum_from_row, json_text, read_arc_csv, read_events_csv, write_text_atomic,
)
from chararc.pipeline import (
    StageError, analysis_files, analyze, arc_files, compute_arcs, find_characters,
    read_document, relation_files, run_pipeline, stage, write_files,
)
from chararc.plotting import PlotError, render_arc_svg, render_relation_svg

log = logging.getLogger("chararc")

EXIT_OK, EXIT_INVALID, EXIT_STAGE = 0, 2, 3


class UsageError(ValueError):
    pass


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    cfg = cfg.with_window(getattr(args, "filter", None), getattr(args, "window", None),
                          getattr(args, "poly", None))
    return cfg


def _out(args, cfg) -> Path:
    return Path(args.out) if args.out else cfg.output_dir


def _input(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {p}")
    return p


def cmd_pipeline(args) -> int:
    cfg = _config(args)
    bundle = run_pipeline(_input(args.input), cfg, args.annotations, _out(args, cfg))
    s = bundle.stats
    print(f"{s['word_count']} words, {s['sentence_count']} sentences, "
          f"{s['cluster_count']} characters ({s['eligible_cluster_count']} eligible), "
          f"{s['event_count']} events")
    print(f"wrote {len(bundle.files)} files to {bundle.out_dir}")
    return EXIT_OK


def cmd_characters(args) -> int:
    cfg = _config(args)
    doc = read_document(_input(args.input), cfg)
    mentions, clusters = find_characters(doc, cfg)
    report = characters_report(clusters, mentions, cfg.min_mentions)
    out = _out(args, cfg)
    with stage("export"):
        write_text_atomic(out / "characters.json", json_text(report))
    for c in report["clusters"]:
        mark = "*" if c["eligible"] else " "
        print(f"{mark} {c['cluster_id']:3d}  {c['canonical_name']:<24} mentions={c['mention_count']}")
    return EXIT_OK


def cmd_events(args) -> int:
    cfg = _config(args)
    analysis = analyze(_input(args.input), cfg, args.annotations)
    files = analysis_files(analysis, cfg)
    with stage("export"):
        write_files(_out(args, cfg), {"events.csv": files["events.csv"]})
    print(f"{analysis.stats['trigger_count']} triggers, {analysis.stats['event_count']} events")
    return EXIT_OK


def _match_character(query: str, names: dict) -> int:
    q = query.strip().lower()
    exact = [cid for cid, n in names.items() if n.lower() == q]
    if len(exact) == 1:
        return exact[0]
    partial = sorted(cid for cid, n in names.items() if q in n.lower().split())
    if len(partial) == 1:
        return partial[0]
    if not partial:
        raise UsageError(f"no character matches {query!r}; known: {sorted(names.values())}")
    raise UsageError(f"{query!r} is ambiguous: {sorted(names[c] for c in partial)}")


def cmd_arcs(args) -> int:
    cfg = _config(args)
    records, names = read_events_csv(args.events)
    out = _out(args, cfg)
    if args.pair:
        parts = args.pair.split(",")
        if len(parts) != 2:
            raise UsageError("--pair takes two names separated by a comma: ACTOR,EXPERIENCER")
        key = RelationKey(_match_character(parts[0], names), _match_character(parts[1], names))
        result = compute_arcs(records, names, cfg, characters=[])
        if key not in result.relation_arcs:
            raise UsageError(f"no events with actor {names[key.actor_cluster]!r} and "
                             f"experiencer {names[key.experiencer_cluster]!r}")
        files = relation_files(result.relation_arcs[key], names)
    elif args.character:
        cid = _match_character(args.character, names)
        result = compute_arcs(records, names, cfg, characters=[cid])
        files = arc_files(result, names)
        del files["relation_arcs.csv"]
    else:
        files = arc_files(compute_arcs(records, names, cfg), names)
    with stage("export"):
        write_files(out, files)
    for rel in sorted(files):
        print(out / rel)
    return EXIT_OK


def _read_extrema(path, character: str):
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if row["character"] == character:
                out.append((row["role"], extremum_from_row(row)))
    return out


def cmd_plot(args) -> int:
    kind, rows = read_arc_csv(args.arc_csv)
    if not rows:
        raise UsageError(f"{args.arc_csv}: arc table has no rows")
    out = Path(args.output) if args.output else Path(args.arc_csv).with_suffix(".svg")
    with stage("render"):
        if kind == "character":
            name = rows[0]["character"]
            series = {ACTOR: [], EXPERIENCER: []}
            ordinal = {}
            for r in rows:
                series[r["role"]].append((r["ordinal"], r["smoothed_t"]))
                ordinal[(r["role"], r["event_id"])] = r["ordinal"]
            markers = []
            if args.extrema:
                for role, e in _read_extrema(args.extrema, name):
                    markers.append((role, ordinal[(role, e.event_id)], e.kind, e.prominence))
            svg = render_arc_svg(name, series, markers)
        else:
            title = f"{rows[0]['actor']} → {rows[0]['experiencer']}"
            svg = render_relation_svg(title, [(r["ordinal"], r["smoothed_t"]) for r in rows])
        write_text_atomic(out, svg)
    print(out)
    return EXIT_OK


def cmd_eval_kappa(args) -> int:
    responses = read_responses(args.responses)
    if args.key:
        responses = responses.binary(read_key(args.key))
    try:
        kappa = fleiss_kappa(responses)
    except DegenerateAgreementError as exc:
        print(f"kappa: undefined ({exc})")
        return EXIT_OK
    print(f"kappa: {kappa:.3f}")
    return EXIT_OK


def cmd_eval_accuracy(args) -> int:
    acc = response_accuracy(read_responses(args.responses), read_key(args.key))
    print(f"accuracy: {acc:.3f}")
    return EXIT_OK


def cmd_eval_shifts(args) -> int:
    kind, rows = read_arc_csv(args.arc_csv)
    if kind == "character":
        rows = [r for r in rows if r["role"] == args.role]
    values = [r["smoothed_t"] for r in rows]
    ids = [r["event_id"] for r in rows]
    if args.dead_band is not None:
        band = args.dead_band
    else:
        cfg = PipelineConfig.load(args.config) if args.config else PipelineConfig()
        band = default_dead_band(values, cfg.dead_band_fraction)
    system = label_shifts(values, band, ids)
    table = shift_confusion(system, read_shift_labels(args.gold))
    print(format_confusion(table))
    if args.out:
        write_confusion_csv(table, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    records = ingest_annotations(args.annotations_file)
    if args.text:
        cfg = _config(args)
        check_bounds(records, read_document(_input(args.text), cfg))
    print(f"ok: {len(records)} records")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chararc", description="Character arcs from narrative text.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, annotations=False, window=False):
        p.add_argument("--config", metavar="PATH", help="JSON configuration file")
        p.add_argument("--out", metavar="DIR", help="output directory (default from config)")
        if annotations:
            p.add_argument("--annotations", metavar="PATH", help="external annotation JSONL")
        if window:
            p.add_argument("--window", type=int, metavar="n", help="window length (odd)")
            p.add_argument("--poly", type=int, metavar="p", help="Savitzky-Golay polynomial order")
            p.add_argument("--filter", choices=["savgol", "mean", "triangular"],
                           help="window function")

    p = sub.add_parser("pipeline", help="full run from text to arcs and plots")
    p.add_argument("input")
    common(p, annotations=True, window=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("characters", help="detect and cluster character names")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_characters)

    p = sub.add_parser("events", help="write the scored event table")
    p.add_argument("input")
    common(p, annotations=True)
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("arcs", help="arcs and plots from a saved event table")
    p.add_argument("events", help="events.csv from the events or pipeline command")
    common(p, window=True)
    p.add_argument("--character", metavar="NAME", help="only this character's arc")
    p.add_argument("--pair", metavar="A,B", help="only the relation arc of actor A on experiencer B")
    p.set_defaults(func=cmd_arcs)

    p = sub.add_parser("plot", help="SVG from an arc CSV")
    p.add_argument("arc_csv")
    p.add_argument("-o", "--output", metavar="PATH", help="SVG path (default: next to the CSV)")
    p.add_argument("--extrema", metavar="PATH", help="extrema.csv to mark on a character arc")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("eval", help="evaluation metrics")
    ev = p.add_subparsers(dest="metric", required=True)
    k = ev.add_parser("kappa", help="Fleiss' kappa of rater responses")
    k.add_argument("responses", help="CSV with item_id, rater_id, answer")
    k.add_argument("--key", help="answer key CSV; kappa is then computed on correctness")
    k.set_defaults(func=cmd_eval_kappa)
    a = ev.add_parser("accuracy", help="share of responses matching the key")
    a.add_argument("responses")
    a.add_argument("key", help="CSV with item_id, answer")
    a.set_defaults(func=cmd_eval_accuracy)
    s = ev.add_parser("shifts", help="shift confusion against gold labels")
    s.add_argument("arc_csv")
    s.add_argument("gold", help="CSV with event_id, label")
    s.add_argument("--role", choices=[ACTOR, EXPERIENCER], default=ACTOR)
    s.add_argument("--dead-band", type=float, help="absolute dead band (default from config)")
    s.add_argument("--config", metavar="PATH")
    s.add_argument("--out", metavar="PATH", help="write the confusion table as CSV")
    s.set_defaults(func=cmd_eval_shifts)

    p = sub.add_parser("validate-annotations", help="lint an annotation JSONL file")
    p.add_argument("annotations_file")
    p.add_argument("--text", metavar="PATH", help="also check offsets against this text")
    p.add_argument("--config", metavar="PATH")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except AnnotationError as exc:
        for line in exc.errors:
            print(line, file=sys.stderr)
        return EXIT_INVALID
    except (ConfigError, UsageError, EvalError, ExportError, PlotError, OversizedInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID if isinstance(exc.cause, OversizedInputError) else EXIT_STAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
