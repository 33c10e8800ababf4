"""Static SVG figures of arcs.

Actor series are drawn in blue and experiencer series in red. Output is
byte-stable for a given matplotlib version: the SVG id salt is fixed and no
date is embedded.
"""
from __future__ import annotations

import io
import re
import string
import xml.etree.ElementTree as ET

import matplotlib

matplotlib.use("Agg")
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.lines import Line2D  # noqa: E402

from chararc.arcs import ACTOR, EXPERIENCER  # noqa: E402

ROLE_COLORS = {ACTOR: "tab:blue", EXPERIENCER: "tab:red"}
RELATION_COLOR = "black"
_RC = {"svg.hashsalt": "chararc", "svg.fonttype": "none", "axes.unicode_minus": False}


class PlotError(ValueError):
    pass


def marker_letters(count: int) -> list[str]:
    letters = []
    for k in range(count):
        label = ""
        k += 1
        while k:
            k, rem = divmod(k - 1, 26)
            label = string.ascii_uppercase[rem] + label
        letters.append(label)
    return letters


def _svg(fig: Figure) -> str:
    buf = io.StringIO()
    with matplotlib.rc_context(_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    return buf.getvalue()


MAX_MARKERS = 26


def render_arc_svg(title: str, series: dict, markers=(), figsize=(7.0, 3.6),
                   max_markers: int = MAX_MARKERS) -> str:
    """Draw one line per role.

    ``series`` maps role to a list of (ordinal, value). ``markers`` holds
    (role, ordinal, kind, prominence) tuples; only the ``max_markers`` most
    prominent are drawn, lettered A, B, ... in ordinal order.
    """
    if not any(series.get(role) for role in (ACTOR, EXPERIENCER)):
        raise PlotError(f"nothing to plot for {title!r}: both series are empty")
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=figsize)
        ax = fig.add_subplot()
        handles = []
        for role in (ACTOR, EXPERIENCER):
            pts = series.get(role) or []
            color = ROLE_COLORS[role]
            if pts:
                xs, ys = zip(*pts)
                (line,) = ax.plot(xs, ys, color=color, linewidth=1.6, label=role)
                line.set_gid(f"{role}-line")
                handles.append(line)
            else:
                handles.append(Line2D([], [], color=color, linestyle="--",
                                      label=f"{role} (no events)"))
        lookup = {role: dict(series.get(role) or []) for role in (ACTOR, EXPERIENCER)}
        kept = sorted(markers, key=lambda m: (-m[3], m[1], m[0] != ACTOR))[:max_markers]
        ordered = sorted(kept, key=lambda m: (m[1], m[0] != ACTOR))
        for letter, (role, ordinal, kind, _) in zip(marker_letters(len(ordered)), ordered):
            y = lookup[role][ordinal]
            ax.plot([ordinal], [y], marker="o", markersize=4, color=ROLE_COLORS[role],
                    gid=f"marker-{letter}")
            ax.annotate(letter, (ordinal, y), textcoords="offset points",
                        xytext=(0, 6 if kind == "peak" else -12), ha="center",
                        fontsize=8, fontweight="bold")
        ax.set_title(title)
        ax.set_xlabel("event ordinal")
        ax.set_ylabel("circumstance (smoothed)")
        ax.grid(True, linewidth=0.4, alpha=0.5)
        ax.legend(handles=handles, loc="upper right", fontsize=8, frameon=False)
        fig.tight_layout()
    return _svg(fig)


def render_relation_svg(title: str, points, figsize=(7.0, 3.2)) -> str:
    """``points`` is a list of (ordinal, value)."""
    if not points:
        raise PlotError(f"nothing to plot for {title!r}")
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=figsize)
        ax = fig.add_subplot()
        xs, ys = zip(*points)
        (line,) = ax.plot(xs, ys, color=RELATION_COLOR, linewidth=1.4)
        line.set_gid("relation-line")
        ax.set_title(title)
        ax.set_xlabel("event ordinal")
        ax.set_ylabel("circumstance (smoothed)")
        ax.grid(True, linewidth=0.4, alpha=0.5)
        fig.tight_layout()
    return _svg(fig)


_NUM_RE = re.compile(r"-?\d+\.\d+(?:[eE][-+]?\d+)?")
_SVG_NS = "{http://www.w3.org/2000/svg}"


def _round_numbers(text: str, digits: int) -> str:
    def sub(m):
        v = round(float(m.group()), digits)
        return f"{v:.{digits}f}".rstrip("0").rstrip(".") if v != 0 else "0"
    return _NUM_RE.sub(sub, text)


def normalize_svg(svg: str, digits: int = 3) -> str:
    """Canonical text form for comparing SVGs: numbers rounded to ``digits``,
    attributes sorted, metadata and whitespace-only text dropped."""
    root = ET.fromstring(svg.encode("utf-8"))
    for parent in root.iter():
        for child in list(parent):
            if child.tag == f"{_SVG_NS}metadata":
                parent.remove(child)

    def walk(el, depth, out):
        attrs = " ".join(f'{k}="{_round_numbers(v, digits)}"' for k, v in sorted(el.attrib.items()))
        text = (el.text or "").strip()
        text = " ".join(_round_numbers(text, digits).split())
        out.append("  " * depth + f"<{el.tag} {attrs}>{text}".rstrip())
        for child in el:
            walk(child, depth + 1, out)

    lines: list[str] = []
    walk(root, 0, lines)
    return "\n".join(lines) + "\n"


def svg_polylines(svg: str) -> dict:
    """Vertices of every gid-tagged line path, keyed by gid."""
    root = ET.fromstring(svg.encode("utf-8"))
    out = {}
    for g in root.iter(f"{_SVG_NS}g"):
        gid = g.get("id", "")
        if not gid.endswith("-line"):
            continue
        path = g.find(f"{_SVG_NS}path")
        if path is None:
            continue
        nums = [float(v) for v in re.findall(r"-?\d+(?:\.\d+)?", path.get("d", ""))]
        out[gid] = list(zip(nums[0::2], nums[1::2]))
    return out
