"""Relation arcs per directed character pair and per-character arcs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from chararc.participants import EventRecord
from chararc.scoring import CircumstanceParams, circumstance
from chararc.smoothing import WindowSpec, apply_window

ACTOR = "actor"
EXPERIENCER = "experiencer"


class RelationKey(NamedTuple):
    actor_cluster: int
    experiencer_cluster: int


@dataclass(frozen=True)
class ArcPoint:
    event_id: int
    position: int  # ordinal of the event in the whole narrative
    sentence_index: int
    raw_t: float
    smoothed_t: float


@dataclass
class RelationArc:
    key: RelationKey
    points: list[ArcPoint]
    window: int | None = None
    passed_through: bool = False

    @property
    def raw(self) -> np.ndarray:
        return np.array([p.raw_t for p in self.points])

    @property
    def smoothed(self) -> np.ndarray:
        return np.array([p.smoothed_t for p in self.points])


@dataclass
class CharacterArc:
    cluster_id: int
    actor_series: list[ArcPoint] = field(default_factory=list)
    experiencer_series: list[ArcPoint] = field(default_factory=list)
    windows: dict = field(default_factory=dict)
    passed_through: dict = field(default_factory=dict)

    def series(self, role: str) -> list[ArcPoint]:
        return self.actor_series if role == ACTOR else self.experiencer_series


@dataclass(frozen=True)
class Extremum:
    index: int
    event_id: int | None
    kind: str  # "peak" or "valley"
    prominence: float


def raw_circumstance(record: EventRecord, params: CircumstanceParams) -> float:
    return circumstance(record.sentiment, record.emotions, params)


def _smooth_points(records, params, spec, positions):
    raw = [raw_circumstance(r, params) for r in records]
    if not raw:
        return [], None, False
    resolved = spec.resolve(len(raw))
    smoothed, passed = apply_window(raw, resolved)
    points = [
        ArcPoint(r.event_id, positions[r.event_id], r.sentence_index, t, float(s))
        for r, t, s in zip(records, raw, smoothed)
    ]
    return points, resolved.n, passed


def _positions(records):
    return {r.event_id: k for k, r in enumerate(sorted(records, key=lambda r: r.event_id))}


def build_relation_arcs(records: list[EventRecord], params: CircumstanceParams,
                        spec: WindowSpec) -> dict[RelationKey, RelationArc]:
    positions = _positions(records)
    groups: dict[RelationKey, list[EventRecord]] = {}
    for r in sorted(records, key=lambda r: r.event_id):
        groups.setdefault(RelationKey(r.actor_cluster, r.experiencer_cluster), []).append(r)
    arcs = {}
    for key in sorted(groups):
        points, n, passed = _smooth_points(groups[key], params, spec, positions)
        arcs[key] = RelationArc(key, points, n, passed)
    return arcs


def build_character_arc(cluster_id: int, records: list[EventRecord], params: CircumstanceParams,
                        spec: WindowSpec | None = None) -> CharacterArc:
    """Merge a character's events per role, then smooth the merged series.

    Each event belongs to exactly one directed pair, so gathering the
    character's events in a role is the same as summing its sparse relation
    arcs over that role. With ``spec.n`` unset the window is sized from the
    merged series length.
    """
    spec = spec or WindowSpec()
    positions = _positions(records)
    ordered = sorted(records, key=lambda r: r.event_id)
    arc = CharacterArc(cluster_id)
    for role, attr in ((ACTOR, "actor_cluster"), (EXPERIENCER, "experiencer_cluster")):
        mine = [r for r in ordered if getattr(r, attr) == cluster_id]
        points, n, passed = _smooth_points(mine, params, spec, positions)
        if role == ACTOR:
            arc.actor_series = points
        else:
            arc.experiencer_series = points
        arc.windows[role] = n
        arc.passed_through[role] = passed
    return arc


def _local_maxima(x: np.ndarray) -> list[int]:
    """Indices of interior local maxima; flat tops report their midpoint."""
    peaks = []
    i = 1
    last = x.size - 1
    while i < last:
        if x[i - 1] < x[i]:
            ahead = i + 1
            while ahead < last and x[ahead] == x[i]:
                ahead += 1
            if x[ahead] < x[i]:
                peaks.append((i + ahead - 1) // 2)
                i = ahead
        i += 1
    return peaks


def _nearest_higher(x: np.ndarray, step: int) -> np.ndarray:
    """For each index, the nearest index in direction ``step`` holding a
    strictly higher value, or -1 / x.size when there is none."""
    n = x.size
    out = np.full(n, -1 if step < 0 else n, dtype=int)
    stack: list[int] = []
    order = range(n) if step < 0 else range(n - 1, -1, -1)
    for i in order:
        while stack and x[stack[-1]] <= x[i]:
            stack.pop()
        if stack:
            out[i] = stack[-1]
        stack.append(i)
    return out


def _prominences(x: np.ndarray, peaks: list[int]) -> list[float]:
    left = _nearest_higher(x, -1)
    right = _nearest_higher(x, +1)
    out = []
    for p in peaks:
        left_min = x[left[p] + 1:p + 1].min()
        right_min = x[p:right[p]].min()
        out.append(float(x[p] - max(left_min, right_min)))
    return out


def find_extrema(series, min_prominence: float, event_ids=None) -> list[Extremum]:
    """Peaks and valleys whose prominence reaches ``min_prominence``.

    Prominence is the height of the extremum above the higher of the two
    lowest points reached before the series climbs past it on either side.
    """
    x = np.asarray(series, dtype=float)
    out = []
    if x.size < 3:
        return out
    for kind, signal in (("peak", x), ("valley", -x)):
        peaks = _local_maxima(signal)
        for i, prom in zip(peaks, _prominences(signal, peaks)):
            if prom >= min_prominence:
                eid = event_ids[i] if event_ids is not None else None
                out.append(Extremum(i, eid, kind, prom))
    out.sort(key=lambda e: (e.index, e.kind))
    return out
