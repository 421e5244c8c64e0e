"""CSL parameter diagram: exclusion curves, third-party overlay bounds, markers.

Output is a log-log SVG plus a CSV of every sampled curve point. Both are
built from the same :class:`~collapseheat.bounds.ExclusionCurve` samples and
are byte-for-byte reproducible for identical input.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

from .bounds import ScenarioKind
from .models import Model

__all__ = [
    "OverlayKind",
    "OverlayBound",
    "OverlayParseError",
    "Marker",
    "GRW_MARKER",
    "DiagramSpec",
    "load_overlays",
    "load_markers",
    "curves_csv",
    "render_svg",
    "render_diagram",
]


class OverlayKind(str, enum.Enum):
    EXCLUDED_ABOVE = "excluded_above"
    EXCLUDED_BELOW = "excluded_below"
    EXCLUDED_REGION = "excluded_region"


class OverlayParseError(ValueError):
    """Malformed overlay data; ``problems`` lists ``(path, line, message)``."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = [f"{p}:{ln}: {msg}" for p, ln, msg in self.problems]
        super().__init__("invalid overlay data:\n  " + "\n  ".join(lines))


@dataclass(frozen=True)
class OverlayBound:
    label: str
    kind: OverlayKind
    samples: tuple
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", OverlayKind(self.kind))
        rc = [s[0] for s in self.samples]
        if not self.samples or any(v <= 0 for s in self.samples for v in s):
            raise ValueError(f"overlay {self.label!r} needs positive samples")
        if self.kind is not OverlayKind.EXCLUDED_REGION and any(b < a for a, b in zip(rc, rc[1:])):
            raise ValueError(f"overlay {self.label!r} samples must be sorted by r_c")


@dataclass(frozen=True)
class Marker:
    label: str
    rc_m: float
    lambda_per_s: float
    rc_max_m: float | None = None
    lambda_max_per_s: float | None = None


GRW_MARKER = Marker("GRW", 1e-7, 1e-16)


@dataclass(frozen=True)
class DiagramSpec:
    curves: tuple
    rc_range: tuple = (1e-9, 1e-3)
    lambda_range: tuple = (1e-30, 1e0)
    overlays: tuple = ()
    markers: tuple = (GRW_MARKER,)

    def __post_init__(self):
        for lo, hi in (self.rc_range, self.lambda_range):
            if not 0 < lo < hi:
                raise ValueError("diagram ranges must be positive with min < max")
        if not self.curves:
            raise ValueError("diagram needs at least one exclusion curve")
        if any(c.model is not Model.CSL for c in self.curves):
            raise ValueError("only CSL exclusion curves live in the (r_c, lambda) plane")


def _read_overlay_csv(path: Path):
    problems = []
    samples = []
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["rc_m", "lambda_per_s"]:
        raise OverlayParseError([(path, 1, "missing header 'rc_m,lambda_per_s'")])
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            problems.append((path, lineno, f"expected 2 columns, got {len(row)}"))
            continue
        try:
            rc, lam = float(row[0]), float(row[1])
        except ValueError:
            problems.append((path, lineno, f"non-numeric value in {row!r}"))
            continue
        if not (rc > 0 and lam > 0 and math.isfinite(rc) and math.isfinite(lam)):
            problems.append((path, lineno, "values must be positive and finite"))
            continue
        samples.append((rc, lam, lineno))
    return samples, problems


def load_overlays(path) -> list[OverlayBound]:
    """Load every ``*.csv`` overlay in a directory (or a single CSV file).

    Each CSV has header ``rc_m,lambda_per_s``; an optional sidecar
    ``<name>.json`` gives ``{"label", "kind", "source"}``. Samples must be sorted
    by r_c except for ``excluded_region`` polygons.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.csv"))
    elif path.is_file():
        files = [path]
    else:
        raise FileNotFoundError(f"overlay path {str(path)!r} does not exist")
    out = []
    problems = []
    for f in files:
        meta = {"label": f.stem, "kind": "excluded_above", "source": ""}
        side = f.with_suffix(".json")
        if side.exists():
            with open(side, encoding="utf-8") as fh:
                meta.update(json.load(fh))
        try:
            kind = OverlayKind(meta["kind"])
        except ValueError:
            problems.append((side, 1, f"unknown overlay kind {meta['kind']!r}"))
            continue
        samples, bad = _read_overlay_csv(f)
        problems.extend(bad)
        if kind is not OverlayKind.EXCLUDED_REGION:
            for (a, _, _), (b, _, line) in zip(samples, samples[1:]):
                if b < a:
                    problems.append((f, line, f"r_c {b!r} out of order (previous {a!r})"))
                    break
        if not samples and not bad:
            problems.append((f, 2, "no data rows"))
        if not problems:
            out.append(OverlayBound(str(meta["label"]), kind, tuple((rc, lam) for rc, lam, _ in samples),
                                    str(meta.get("source", ""))))
    if problems:
        raise OverlayParseError(problems)
    return out


def load_markers(path) -> list[Marker]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        return [Marker(str(m["label"]), float(m["rc_m"]), float(m["lambda_per_s"]),
                       m.get("rc_max_m"), m.get("lambda_max_per_s")) for m in raw]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad marker entry: {exc}") from None


def curves_csv(curves) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "rc_m", "lambda_crit_per_s"])
    for curve in curves:
        for rc, lam in curve.samples:
            writer.writerow([curve.scenario.label, f"{rc:.12e}", f"{lam:.12e}"])
    return buf.getvalue()


# --- SVG -------------------------------------------------------------------

WIDTH, HEIGHT = 900, 560
LEFT, RIGHT, TOP, BOTTOM = 90, 340, 30, 70
CURVE_COLOR = "#1a7f37"
OVERLAY_COLORS = ("#c0392b", "#2e6fd8", "#8e44ad", "#d68910", "#7f8c8d")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


@dataclass
class _Axes:
    rc_range: tuple
    lambda_range: tuple
    x0: float = LEFT
    x1: float = WIDTH - RIGHT
    y0: float = HEIGHT - BOTTOM
    y1: float = TOP
    lx: tuple = field(init=False)
    ly: tuple = field(init=False)

    def __post_init__(self):
        self.lx = tuple(math.log10(v) for v in self.rc_range)
        self.ly = tuple(math.log10(v) for v in self.lambda_range)

    def px(self, rc):
        return self.x0 + (math.log10(rc) - self.lx[0]) / (self.lx[1] - self.lx[0]) * (self.x1 - self.x0)

    def py(self, lam):
        return self.y0 + (math.log10(lam) - self.ly[0]) / (self.ly[1] - self.ly[0]) * (self.y1 - self.y0)

    def point(self, rc, lam):
        return f"{_fmt(self.px(rc))},{_fmt(self.py(lam))}"


def _decade_label(k: int) -> str:
    return f'10<tspan dy="-6" font-size="9">{k}</tspan>'


def _axes_svg(ax: _Axes) -> list[str]:
    out = [f'<rect x="{_fmt(ax.x0)}" y="{_fmt(ax.y1)}" width="{_fmt(ax.x1 - ax.x0)}" '
           f'height="{_fmt(ax.y0 - ax.y1)}" fill="none" stroke="#000" stroke-width="1"/>']
    for k in range(math.ceil(ax.lx[0] - 1e-9), math.floor(ax.lx[1] + 1e-9) + 1):
        x = _fmt(ax.px(10.0**k))
        out.append(f'<line x1="{x}" y1="{_fmt(ax.y0)}" x2="{x}" y2="{_fmt(ax.y0 + 6)}" stroke="#000"/>')
        out.append(f'<text x="{x}" y="{_fmt(ax.y0 + 22)}" text-anchor="middle" font-size="12">'
                   f'{_decade_label(k)}</text>')
    ky = range(math.ceil(ax.ly[0] - 1e-9), math.floor(ax.ly[1] + 1e-9) + 1)
    step = max(1, len(ky) // 10)
    for k in ky:
        y = _fmt(ax.py(10.0**k))
        length = 6 if k % step == 0 else 3
        out.append(f'<line x1="{_fmt(ax.x0 - length)}" y1="{y}" x2="{_fmt(ax.x0)}" y2="{y}" stroke="#000"/>')
        if k % step == 0:
            out.append(f'<text x="{_fmt(ax.x0 - 10)}" y="{_fmt(float(y) + 4)}" text-anchor="end" font-size="12">'
                       f'{_decade_label(k)}</text>')
    cx = _fmt((ax.x0 + ax.x1) / 2)
    cy = _fmt((ax.y0 + ax.y1) / 2)
    out.append(f'<text x="{cx}" y="{_fmt(HEIGHT - 20)}" text-anchor="middle" font-size="14">r_c [m]</text>')
    out.append(f'<text x="24" y="{cy}" text-anchor="middle" font-size="14" '
               f'transform="rotate(-90 24 {cy})">λ [s⁻¹]</text>')
    return out


def _region_points(ax: _Axes, samples, kind: OverlayKind) -> str:
    pts = [ax.point(rc, lam) for rc, lam in samples]
    if kind is OverlayKind.EXCLUDED_ABOVE:
        top = _fmt(ax.y1 - 1)
        pts += [f"{_fmt(ax.px(samples[-1][0]))},{top}", f"{_fmt(ax.px(samples[0][0]))},{top}"]
    elif kind is OverlayKind.EXCLUDED_BELOW:
        bottom = _fmt(ax.y0 + 1)
        pts += [f"{_fmt(ax.px(samples[-1][0]))},{bottom}", f"{_fmt(ax.px(samples[0][0]))},{bottom}"]
    return " ".join(pts)


def render_svg(spec: DiagramSpec) -> str:
    ax = _Axes(spec.rc_range, spec.lambda_range)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        "<defs>",
        f'<clipPath id="plot"><rect x="{_fmt(ax.x0)}" y="{_fmt(ax.y1)}" width="{_fmt(ax.x1 - ax.x0)}" '
        f'height="{_fmt(ax.y0 - ax.y1)}"/></clipPath>',
        '<pattern id="hatch" patternUnits="userSpaceOnUse" width="8" height="8" patternTransform="rotate(45)">'
        f'<line x1="0" y1="0" x2="0" y2="8" stroke="{CURVE_COLOR}" stroke-width="1.5" stroke-opacity="0.45"/>'
        "</pattern>",
        "</defs>",
        '<rect width="100%" height="100%" fill="#fff"/>',
        '<g clip-path="url(#plot)">',
    ]
    for i, ov in enumerate(spec.overlays):
        color = OVERLAY_COLORS[i % len(OVERLAY_COLORS)]
        lines.append(f'<polygon class="overlay" points="{_region_points(ax, ov.samples, ov.kind)}" fill="{color}" '
                     f'fill-opacity="0.25" stroke="{color}" stroke-width="1">'
                     f'<title>{escape(ov.label)}: {escape(ov.source)}</title></polygon>')
    for curve in spec.curves:
        observed = curve.scenario.kind is ScenarioKind.OBSERVED
        region = _region_points(ax, curve.samples, OverlayKind.EXCLUDED_ABOVE)
        fill = f'fill="{CURVE_COLOR}" fill-opacity="0.18"' if observed else 'fill="url(#hatch)"'
        lines.append(f'<polygon class="excluded" points="{region}" {fill} stroke="none"/>')
        dash = "" if observed else ' stroke-dasharray="6,4"'
        pts = " ".join(ax.point(rc, lam) for rc, lam in curve.samples)
        lines.append(f'<polyline class="curve" points="{pts}" fill="none" stroke="{CURVE_COLOR}" '
                     f'stroke-width="2"{dash}><title>{escape(curve.scenario.label)} '
                     f'({curve.scenario.temperature:g} K)</title></polyline>')
    for mk in spec.markers:
        if mk.lambda_max_per_s is not None or mk.rc_max_m is not None:
            rc2 = mk.rc_max_m if mk.rc_max_m is not None else mk.rc_m
            lam2 = mk.lambda_max_per_s if mk.lambda_max_per_s is not None else mk.lambda_per_s
            lines.append(f'<line class="marker-range" x1="{_fmt(ax.px(mk.rc_m))}" y1="{_fmt(ax.py(mk.lambda_per_s))}" '
                         f'x2="{_fmt(ax.px(rc2))}" y2="{_fmt(ax.py(lam2))}" stroke="#000" stroke-width="3"/>')
        x, y = ax.px(mk.rc_m), ax.py(mk.lambda_per_s)
        lines.append(f'<circle class="marker" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="#000"/>')
        lines.append(f'<text x="{_fmt(x + 7)}" y="{_fmt(y - 6)}" font-size="12">{escape(mk.label)}</text>')
    lines.append("</g>")
    lines.extend(_axes_svg(ax))

    # legend
    lx = WIDTH - RIGHT + 16
    ly = TOP + 10
    lines.append(f'<text x="{lx}" y="{ly}" font-size="12" font-weight="bold">Neutron star bounds</text>')
    for curve in spec.curves:
        ly += 20
        dash = "" if curve.scenario.kind is ScenarioKind.OBSERVED else ' stroke-dasharray="6,4"'
        lines.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" stroke="{CURVE_COLOR}" '
                     f'stroke-width="2"{dash}/>')
        lines.append(f'<text x="{lx + 30}" y="{ly}" font-size="11">{escape(curve.scenario.label)} '
                     f'({curve.scenario.temperature:g} K)</text>')
    if spec.overlays:
        ly += 28
        lines.append(f'<text x="{lx}" y="{ly}" font-size="12" font-weight="bold">Other bounds</text>')
        for i, ov in enumerate(spec.overlays):
            ly += 20
            color = OVERLAY_COLORS[i % len(OVERLAY_COLORS)]
            lines.append(f'<rect x="{lx}" y="{ly - 10}" width="24" height="10" fill="{color}" fill-opacity="0.35"/>')
            lines.append(f'<text x="{lx + 30}" y="{ly}" font-size="11">{escape(ov.label)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_diagram(spec: DiagramSpec) -> tuple[str, str]:
    """Return ``(svg_text, csv_text)`` for a diagram specification."""
    return render_svg(spec), curves_csv(spec.curves)
