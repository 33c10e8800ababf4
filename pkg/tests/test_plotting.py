import pytest

from chararc.plotting import (
    MAX_MARKERS, PlotError, marker_letters, normalize_svg, render_arc_svg, render_relation_svg,
    svg_polylines,
)


def test_two_point_series_give_two_vertex_lines():
    svg = render_arc_svg("Wren", {"actor": [(0, 0.1), (1, 0.4)], "experiencer": [(0, 0.3), (1, -0.2)]})
    lines = svg_polylines(svg)
    assert sorted(lines) == ["actor-line", "experiencer-line"]
    assert all(len(v) == 2 for v in lines.values())
    assert "#1f77b4" in svg and "#d62728" in svg  # blue actor, red experiencer


def test_empty_experiencer_noted_in_legend():
    svg = render_arc_svg("Wren", {"actor": [(0, 0.1), (1, 0.4), (2, 0.2)], "experiencer": []})
    assert list(svg_polylines(svg)) == ["actor-line"]
    assert "experiencer (no events)" in svg


def test_both_empty_is_an_error():
    with pytest.raises(PlotError):
        render_arc_svg("Nobody", {"actor": [], "experiencer": []})
    with pytest.raises(PlotError):
        render_relation_svg("A → B", [])


def test_axes_labelled_and_title_kept():
    svg = render_arc_svg("Silas Crane", {"actor": [(0, 1.0), (1, 2.0)]})
    for text in ("Silas Crane", "event ordinal", "circumstance (smoothed)"):
        assert text in svg


def test_marker_letters():
    assert marker_letters(3) == ["A", "B", "C"]
    assert marker_letters(28)[25:] == ["Z", "AA", "AB"]


def test_markers_capped_to_most_prominent():
    series = {"actor": [(k, float(k % 2)) for k in range(60)]}
    markers = [("actor", k, "peak" if k % 2 else "valley", k / 100) for k in range(1, 59)]
    svg = render_arc_svg("Busy", series, markers)
    assert svg.count('id="marker-') == MAX_MARKERS
    # the kept markers are the highest ordinals (largest prominence), lettered in order
    assert 'id="marker-A"' in svg and 'id="marker-Z"' in svg and 'id="marker-AA"' not in svg


def test_rendering_is_byte_stable():
    args = ("Wren", {"actor": [(0, 0.1), (1, 0.4), (2, 0.0)]}, [("actor", 1, "peak", 0.3)])
    assert render_arc_svg(*args) == render_arc_svg(*args)
    assert render_relation_svg("A → B", [(0, 1.0), (1, 2.0)]) == \
        render_relation_svg("A → B", [(0, 1.0), (1, 2.0)])


def test_no_timestamp_in_svg():
    svg = render_relation_svg("A → B", [(0, 1.0), (1, 2.0)])
    assert "<dc:date>" not in svg


def test_normalize_rounds_and_sorts():
    a = '<svg xmlns="http://www.w3.org/2000/svg" width="10" height="5"><path d="M 0.12341 1.0"/></svg>'
    b = '<svg xmlns="http://www.w3.org/2000/svg" height="5" width="10"><path d="M 0.12338 1"/></svg>'
    assert normalize_svg(a) == normalize_svg(b)
    assert "0.123" in normalize_svg(a)
