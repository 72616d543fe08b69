"""SVG emission: structure, determinism, and input validation."""

import numpy as np
import pytest

from convexlab.svg import (SvgError, render_polygons_svg, render_scatter_svg,
                           render_series_svg)


def test_series_svg_structure(tmp_path):
    xs = np.linspace(0.0, 1.0, 50)
    p = render_series_svg(tmp_path / "s.svg", "two curves",
                          [("a", xs, np.sin(xs)), ("b", xs, np.cos(xs))])
    text = p.read_text(encoding="utf-8")
    assert text.startswith("<svg ") and text.endswith("</svg>\n")
    assert text.count("<polyline") == 2
    assert "two curves" in text and "stroke-dasharray" in text

    again = render_series_svg(tmp_path / "s2.svg", "two curves",
                              [("a", xs, np.sin(xs)), ("b", xs, np.cos(xs))])
    assert again.read_bytes() == p.read_bytes()


def test_scatter_svg(tmp_path):
    p = render_scatter_svg(tmp_path / "c.svg", "diffs", [0, 1, 2],
                           [1e-12, 0.0, 1e-3])
    text = p.read_text(encoding="utf-8")
    assert text.count("<circle") == 3
    assert "1e-" in text  # log-scale axis labels


def test_polygons_svg(tmp_path):
    square = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    p = render_polygons_svg(tmp_path / "p.svg", "overlay",
                            [("K", square), ("L", 0.5 * square)])
    text = p.read_text(encoding="utf-8")
    assert text.count("<polygon") == 2


def test_empty_inputs_yield_axes_only(tmp_path):
    for p in (render_series_svg(tmp_path / "a.svg", "empty", []),
              render_scatter_svg(tmp_path / "b.svg", "empty", [], []),
              render_polygons_svg(tmp_path / "c.svg", "empty", [])):
        text = p.read_text(encoding="utf-8")
        assert text.startswith("<svg ") and text.endswith("</svg>\n")
        assert text.count("<line") == 2


def test_non_finite_data_is_rejected(tmp_path):
    with pytest.raises(SvgError, match="non-finite"):
        render_series_svg(tmp_path / "x.svg", "bad",
                          [("a", [0.0, 1.0], [0.0, np.nan])])
    with pytest.raises(SvgError, match="non-finite"):
        render_scatter_svg(tmp_path / "y.svg", "bad", [0.0], [np.inf])
    with pytest.raises(SvgError, match="non-finite"):
        render_polygons_svg(tmp_path / "z.svg", "bad",
                            [("a", np.array([[0.0, np.nan], [1.0, 0.0], [0.0, 1.0]]))])


def test_degenerate_scale_span(tmp_path):
    # constant data must not divide by zero
    p = render_series_svg(tmp_path / "d.svg", "flat",
                          [("a", [0.0, 1.0], [2.0, 2.0])])
    assert "<polyline" in p.read_text(encoding="utf-8")
