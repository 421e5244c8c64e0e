import csv
import io
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

import collapseheat
from collapseheat.bounds import BUILTIN_SCENARIOS, DEFAULT_RC_GRID, build_exclusion_curve, csl_lambda_crit, rc_grid
from collapseheat.diagram import (
    GRW_MARKER,
    DiagramSpec,
    OverlayBound,
    OverlayKind,
    OverlayParseError,
    curves_csv,
    load_markers,
    load_overlays,
    render_diagram,
)

DATA = Path(collapseheat.__file__).parent / "data"
SVG_NS = "{http://www.w3.org/2000/svg}"


def _curves(n=40):
    grid = rc_grid(1e-9, 1e-3, n)
    return tuple(build_exclusion_curve(s, rc_values=grid) for s in BUILTIN_SCENARIOS)


def test_bundled_overlays_and_markers():
    overlays = load_overlays(DATA / "overlays")
    assert {o.kind for o in overlays} == {OverlayKind.EXCLUDED_ABOVE, OverlayKind.EXCLUDED_BELOW}
    assert all(o.samples for o in overlays)
    markers = load_markers(DATA / "markers.json")
    assert markers[0].label == "GRW" and markers[0].rc_m == 1e-7 and markers[0].lambda_per_s == 1e-16


def test_render_is_valid_svg_and_deterministic():
    spec = DiagramSpec(_curves(), overlays=tuple(load_overlays(DATA / "overlays")), markers=(GRW_MARKER,))
    svg1, csv1 = render_diagram(spec)
    svg2, csv2 = render_diagram(DiagramSpec(_curves(), overlays=tuple(load_overlays(DATA / "overlays"))))
    assert svg1 == svg2 and csv1 == csv2
    root = ET.fromstring(svg1.encode())
    assert root.tag == SVG_NS + "svg"
    assert len(root.findall(f".//{SVG_NS}polyline")) == len(BUILTIN_SCENARIOS)
    dashed = [p for p in root.findall(f".//{SVG_NS}polyline") if p.get("stroke-dasharray")]
    assert len(dashed) == len(BUILTIN_SCENARIOS) - 1  # only the observed curve is solid
    assert len(root.findall(f".//{SVG_NS}circle")) == 1


def test_grw_sits_between_observed_and_earth_curves():
    spec = DiagramSpec(_curves())
    root = ET.fromstring(render_diagram(spec)[0].encode())
    cy = float(root.find(f".//{SVG_NS}circle").get("cy"))
    # SVG y grows downward: GRW is below the observed curve and above the Earth curve at r_c = 1e-7
    from collapseheat.diagram import _Axes

    ax = _Axes(spec.rc_range, spec.lambda_range)
    psr = ax.py(csl_lambda_crit(1e-7, BUILTIN_SCENARIOS[0]))
    earth = ax.py(csl_lambda_crit(1e-7, BUILTIN_SCENARIOS[3]))
    assert psr < cy < earth


def test_csv_closure_and_layout():
    curves = _curves(25)
    rows = list(csv.reader(io.StringIO(curves_csv(curves))))
    assert rows[0] == ["scenario", "rc_m", "lambda_crit_per_s"]
    assert len(rows) == 1 + 25 * len(curves)
    by_label = {s.label: s for s in BUILTIN_SCENARIOS}
    for label, rc, lam in rows[1:]:
        assert float(lam) == pytest.approx(csl_lambda_crit(float(rc), by_label[label]), rel=1e-10)


def test_default_grid():
    assert DEFAULT_RC_GRID == (1e-9, 1e-3, 200)


def test_spec_rejections():
    with pytest.raises(ValueError):
        DiagramSpec(())
    dp = build_exclusion_curve(BUILTIN_SCENARIOS[0], model="dp", rc_values=[1e-9])
    with pytest.raises(ValueError, match="CSL"):
        DiagramSpec((dp,))
    with pytest.raises(ValueError):
        DiagramSpec(_curves(5), rc_range=(1e-3, 1e-9))


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_overlay_unsorted_reports_line(tmp_path):
    _write(tmp_path / "a.csv", "rc_m,lambda_per_s\n1e-8,1e-10\n1e-6,1e-9\n1e-7,1e-9\n")
    with pytest.raises(OverlayParseError) as info:
        load_overlays(tmp_path)
    (path, line, msg), = info.value.problems
    assert line == 4 and "out of order" in msg


def test_overlay_missing_header(tmp_path):
    _write(tmp_path / "a.csv", "1e-8,1e-10\n")
    with pytest.raises(OverlayParseError, match="header"):
        load_overlays(tmp_path)


def test_overlay_non_numeric_and_region(tmp_path):
    _write(tmp_path / "a.csv", "rc_m,lambda_per_s\n1e-8,abc\n")
    with pytest.raises(OverlayParseError, match=r"a\.csv:2"):
        load_overlays(tmp_path / "a.csv")
    # polygons may be unsorted
    _write(tmp_path / "a.csv", "rc_m,lambda_per_s\n1e-8,1e-10\n1e-6,1e-9\n1e-7,1e-12\n")
    _write(tmp_path / "a.json", '{"label": "box", "kind": "excluded_region", "source": "test"}')
    (ov,) = load_overlays(tmp_path)
    assert ov.kind is OverlayKind.EXCLUDED_REGION and ov.label == "box"


def test_overlay_paths(tmp_path):
    assert load_overlays(tmp_path) == []
    with pytest.raises(FileNotFoundError):
        load_overlays(tmp_path / "missing")
    with pytest.raises(ValueError):
        OverlayBound("x", "excluded_above", ((1e-7, 1e-9), (1e-8, 1e-9)))


def test_bad_marker(tmp_path):
    _write(tmp_path / "m.json", '[{"label": "x"}]')
    with pytest.raises(ValueError):
        load_markers(tmp_path / "m.json")
