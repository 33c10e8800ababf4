"""Evaluation metrics: task accuracy, Fleiss' kappa, shift confusion tables."""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

POSITIVE, NEUTRAL, NEGATIVE = "positive", "neutral", "negative"
SHIFT_LABELS = (POSITIVE, NEUTRAL, NEGATIVE)


class EvalError(ValueError):
    pass


class DegenerateAgreementError(EvalError):
    """Kappa is undefined: every rating falls in a single category."""


@dataclass(frozen=True)
class ShiftLabel:
    event_id: int
    label: str

    def __post_init__(self):
        if self.label not in SHIFT_LABELS:
            raise EvalError(f"shift label must be one of {SHIFT_LABELS}, got {self.label!r}")


@dataclass
class RaterResponses:
    """Items x raters matrix of categorical answers."""

    items: list
    raters: list
    answers: list[list]  # answers[item][rater]
    categories: list

    def __post_init__(self):
        width = len(self.raters)
        for row in self.answers:
            if len(row) != width:
                raise EvalError("ragged response matrix: every item needs one answer per rater")
        vocab = set(self.categories)
        for row in self.answers:
            for a in row:
                if a not in vocab:
                    raise EvalError(f"answer {a!r} not in category vocabulary")

    def counts(self) -> np.ndarray:
        """Items x categories table of how many raters chose each category."""
        index = {c: k for k, c in enumerate(self.categories)}
        table = np.zeros((len(self.items), len(self.categories)), dtype=int)
        for i, row in enumerate(self.answers):
            for a in row:
                table[i, index[a]] += 1
        return table

    def binary(self, key: dict) -> "RaterResponses":
        """Recode answers as 1 for a match with the answer key, else 0."""
        missing = [it for it in self.items if it not in key]
        if missing:
            raise EvalError(f"answer key lacks item(s): {missing[:5]}")
        rows = [[int(a == key[it]) for a in row] for it, row in zip(self.items, self.answers)]
        return RaterResponses(self.items, self.raters, rows, [0, 1])


def read_responses(path) -> RaterResponses:
    """Load a CSV with columns item_id, rater_id, answer."""
    cells: dict[tuple[str, str], str] = {}
    items, raters = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        need = {"item_id", "rater_id", "answer"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise EvalError(f"{path}: expected columns item_id, rater_id, answer")
        for lineno, row in enumerate(reader, 2):
            item, rater = row["item_id"], row["rater_id"]
            if (item, rater) in cells:
                raise EvalError(f"{path}:{lineno}: duplicate answer for item {item!r} rater {rater!r}")
            cells[(item, rater)] = row["answer"]
            if item not in items:
                items.append(item)
            if rater not in raters:
                raters.append(rater)
    answers = []
    for item in items:
        row = []
        for rater in raters:
            if (item, rater) not in cells:
                raise EvalError(f"ragged response matrix: rater {rater!r} did not answer item {item!r}")
            row.append(cells[(item, rater)])
        answers.append(row)
    categories = sorted({a for row in answers for a in row})
    return RaterResponses(items, raters, answers, categories)


def read_key(path) -> dict:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"item_id", "answer"} <= set(reader.fieldnames):
            raise EvalError(f"{path}: expected columns item_id, answer")
        return {row["item_id"]: row["answer"] for row in reader}


def accuracy(predicted, gold) -> float:
    predicted, gold = list(predicted), list(gold)
    if len(predicted) != len(gold):
        raise EvalError(f"length mismatch: {len(predicted)} predictions vs {len(gold)} gold")
    if not gold:
        raise EvalError("accuracy of an empty list is undefined")
    return sum(p == g for p, g in zip(predicted, gold)) / len(gold)


def response_accuracy(responses: RaterResponses, key: dict) -> float:
    predicted, gold = [], []
    for item, row in zip(responses.items, responses.answers):
        if item not in key:
            raise EvalError(f"answer key lacks item {item!r}")
        predicted.extend(row)
        gold.extend([key[item]] * len(row))
    return accuracy(predicted, gold)


def fleiss_kappa(responses) -> float:
    """Fleiss' kappa for a RaterResponses or an items x categories count table.

    Raises :class:`DegenerateAgreementError` when chance agreement is 1 (all
    ratings in one category), where kappa has no defined value.
    """
    counts = responses.counts() if isinstance(responses, RaterResponses) else np.asarray(responses)
    if counts.ndim != 2 or counts.shape[0] < 1:
        raise EvalError("need at least one item")
    per_item = counts.sum(axis=1)
    if np.any(per_item != per_item[0]):
        raise EvalError("ragged response matrix: items have different numbers of ratings")
    n = int(per_item[0])
    if n < 2:
        raise EvalError("need at least two raters per item")
    n_items = counts.shape[0]
    p_item = (np.sum(counts * counts, axis=1) - n) / (n * (n - 1))
    p_bar = float(p_item.mean())
    p_cat = counts.sum(axis=0) / (n_items * n)
    p_e = float(np.sum(p_cat * p_cat))
    if np.isclose(p_e, 1.0, rtol=0, atol=1e-15):
        raise DegenerateAgreementError(
            "all ratings fall in one category; chance agreement is 1 and kappa is undefined")
    if p_bar == 1.0:
        return 1.0
    return (p_bar - p_e) / (1.0 - p_e)


def label_shifts(series, dead_band: float, event_ids=None) -> list[ShiftLabel]:
    """Label each step of ``series`` by the sign of its change.

    The label for step ``i`` is attached to the later point's event id.
    """
    values = [float(v) for v in series]
    if len(values) < 2:
        raise EvalError("need at least two values to label shifts")
    ids = list(event_ids) if event_ids is not None else list(range(len(values)))
    out = []
    for i in range(1, len(values)):
        delta = values[i] - values[i - 1]
        label = POSITIVE if delta > dead_band else NEGATIVE if delta < -dead_band else NEUTRAL
        out.append(ShiftLabel(ids[i], label))
    return out


def default_dead_band(series, fraction: float = 0.02) -> float:
    values = np.asarray(series, dtype=float)
    if values.size == 0:
        return 0.0
    return fraction * float(values.max() - values.min())


def shift_confusion(system, gold) -> dict:
    """Row-normalised table: rows are system labels, columns gold labels.

    Returns ``{system_label: {gold_label: share}}``; rows without any system
    label of that class are all zero.
    """
    sys_by_id = {s.event_id: s.label for s in system}
    gold_by_id = {g.event_id: g.label for g in gold}
    if len(sys_by_id) != len(system) or len(gold_by_id) != len(gold):
        raise EvalError("duplicate event ids in shift labels")
    if set(sys_by_id) != set(gold_by_id):
        only_sys = sorted(set(sys_by_id) - set(gold_by_id))[:5]
        only_gold = sorted(set(gold_by_id) - set(sys_by_id))[:5]
        raise EvalError(f"shift labels are not aligned by event id "
                        f"(system only: {only_sys}, gold only: {only_gold})")
    tally = Counter((sys_by_id[e], gold_by_id[e]) for e in sys_by_id)
    table = {}
    for s in SHIFT_LABELS:
        row_total = sum(tally[(s, g)] for g in SHIFT_LABELS)
        table[s] = {g: (tally[(s, g)] / row_total if row_total else 0.0) for g in SHIFT_LABELS}
    return table


def read_shift_labels(path) -> list[ShiftLabel]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"event_id", "label"} <= set(reader.fieldnames):
            raise EvalError(f"{path}: expected columns event_id, label")
        return [ShiftLabel(int(row["event_id"]), row["label"].strip()) for row in reader]


def format_confusion(table: dict) -> str:
    lines = ["system \\ gold  " + "  ".join(f"{g:>8}" for g in SHIFT_LABELS)]
    for s in SHIFT_LABELS:
        lines.append(f"{s:<14}" + "  ".join(f"{table[s][g]:8.2f}" for g in SHIFT_LABELS))
    return "\n".join(lines)


def write_confusion_csv(table: dict, path) -> None:
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["system_label", *SHIFT_LABELS])
        for s in SHIFT_LABELS:
            w.writerow([s, *(f"{table[s][g]:.6f}" for g in SHIFT_LABELS)])
