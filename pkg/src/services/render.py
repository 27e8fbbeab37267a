"""SVG boxplot and coefficient-curve rendering.

Documents are assembled from plain string lines so identical input produces
byte-identical output. Every panel group records its vertical axis transform
as ``data-y-intercept`` / ``data-y-slope`` (pixel = intercept + slope * value).
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.core.exceptions import EmptySpec, InconsistentPanel, InvalidParameters
from src.core.settings import Settings, get_settings
from src.services.core_stats import Sample
from src.services.detect import INLIER, DetectionReport
from src.services.fences import COEFFICIENT_KINDS, coefficient_for

logger = structlog.get_logger(__name__)

COLORS = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
]
FONT = 'font-family="Arial"'
GLYPH_RADIUS = 3.0
CROSS_HALF = 4.0


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
        .replace("'", "&#39;")
    )


def _num(value: float) -> str:
    return f"{value:.3f}"


def _format_tick(value: float) -> str:
    if abs(value) >= 100:
        return f"{value:.0f}"
    if abs(value) >= 10:
        return f"{value:.1f}"
    return f"{value:.2f}"


@dataclass(frozen=True, eq=False)
class PlotPanel:
    title: str
    sample: Sample
    report: DetectionReport


@dataclass(frozen=True, eq=False)
class PlotSpec:
    """Panels drawn side by side on a shared vertical axis."""

    panels: Sequence[PlotPanel]
    panel_width: float = 240.0
    panel_height: float = 480.0
    margin: float = 40.0
    padding_fraction: float = 0.05
    jitter_width: float = 0.15
    jitter_seed: int = 20240218
    y_range: Optional[Tuple[float, float]] = None
    y_label: str = ""
    title: str = ""

    @classmethod
    def from_settings(
        cls, panels: Sequence[PlotPanel], settings: Optional[Settings] = None, **overrides: object
    ) -> "PlotSpec":
        settings = settings or get_settings()
        params: Dict[str, object] = {
            "panel_width": float(settings.plot_width),
            "panel_height": float(settings.plot_height),
            "margin": float(settings.plot_margin),
            "padding_fraction": settings.plot_padding_fraction,
            "jitter_width": settings.jitter_width,
            "jitter_seed": settings.jitter_seed,
        }
        params.update(overrides)
        return cls(panels=list(panels), **params)  # type: ignore[arg-type]


@dataclass(frozen=True)
class AxisTransform:
    """Affine map from data values to vertical pixel positions."""

    intercept: float
    slope: float
    low: float
    high: float

    def to_px(self, value: float) -> float:
        return self.intercept + self.slope * value

    def to_value(self, px: float) -> float:
        return (px - self.intercept) / self.slope


def _axis_range(spec: PlotSpec) -> Tuple[float, float]:
    if spec.y_range is not None:
        low, high = spec.y_range
        if not low < high:
            raise InvalidParameters("Axis range must be increasing", {"y_range": list(spec.y_range)})
        return low, high
    low = min(p.sample.minimum for p in spec.panels)
    high = max(p.sample.maximum for p in spec.panels)
    span = high - low
    if span <= 0.0:
        span = max(abs(low), 1.0)
    pad = span * spec.padding_fraction
    return low - pad, high + pad


def axis_transform(spec: PlotSpec) -> AxisTransform:
    """Shared value-to-pixel transform for every panel in ``spec``."""
    low, high = _axis_range(spec)
    top = spec.margin
    bottom = spec.margin + spec.panel_height
    slope = (top - bottom) / (high - low)
    return AxisTransform(intercept=bottom - slope * low, slope=slope, low=low, high=high)


def _check_panel(index: int, panel: PlotPanel) -> None:
    report, sample = panel.report, panel.sample
    if report.n != sample.n or not np.array_equal(report.values, sample.original):
        raise InconsistentPanel(
            f"Panel {index} ({panel.title!r}) report does not describe its sample",
            {"panel": index, "report_n": report.n, "sample_n": sample.n},
        )


def _jitter_offsets(panel: PlotPanel, panel_index: int, spec: PlotSpec) -> Dict[int, float]:
    """Horizontal offsets for flagged points that share a value with another flagged point."""
    report = panel.report
    flagged = np.flatnonzero(report.codes != INLIER)
    if flagged.size == 0:
        return {}
    values = report.values[flagged]
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    tied = flagged[counts[inverse] > 1]
    if tied.size == 0:
        return {}
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([spec.jitter_seed, panel_index])))
    half = spec.jitter_width * spec.panel_width / 2.0
    offsets = rng.uniform(-half, half, size=tied.size)
    return {int(i): float(dx) for i, dx in zip(tied, offsets)}


def _panel_lines(
    panel: PlotPanel, panel_index: int, spec: PlotSpec, axis: AxisTransform
) -> List[str]:
    sample, report = panel.sample, panel.report
    left = spec.margin + panel_index * spec.panel_width
    cx = left + spec.panel_width / 2.0
    half_box = spec.panel_width * 0.2
    cap = half_box / 2.0
    y = axis.to_px

    lines = [
        f'<g class="panel" data-title="{_escape(panel.title)}" data-method="{_escape(report.fence.method.label)}" '
        f'data-n-flagged="{report.n_flagged}" data-y-intercept="{axis.intercept!r}" data-y-slope="{axis.slope!r}">',
        f'<text x="{_num(cx)}" y="{_num(spec.margin - 12)}" text-anchor="middle" font-size="14" {FONT}>'
        f"{_escape(panel.title)}</text>",
    ]

    # Fences
    for side, value in (("lower", report.fence.lower), ("upper", report.fence.upper)):
        if axis.low <= value <= axis.high:
            lines.append(
                f'<line class="fence" data-side="{side}" data-value="{value!r}" x1="{_num(left + 8)}" '
                f'y1="{_num(y(value))}" x2="{_num(left + spec.panel_width - 8)}" y2="{_num(y(value))}" '
                'stroke="#999999" stroke-width="1" stroke-dasharray="4 3"/>'
            )

    # Whiskers
    for side, value, edge in (
        ("low", report.whisker_low, sample.q1),
        ("high", report.whisker_high, sample.q3),
    ):
        lines.append(
            f'<line class="whisker" data-side="{side}" data-value="{value!r}" x1="{_num(cx)}" '
            f'y1="{_num(y(edge))}" x2="{_num(cx)}" y2="{_num(y(value))}" stroke="#000000" '
            'stroke-width="1" stroke-dasharray="5 3"/>'
        )
        lines.append(
            f'<line class="whisker-cap" data-side="{side}" x1="{_num(cx - cap)}" y1="{_num(y(value))}" '
            f'x2="{_num(cx + cap)}" y2="{_num(y(value))}" stroke="#000000" stroke-width="1"/>'
        )

    # Box and median
    lines.append(
        f'<rect class="box" data-q1="{sample.q1!r}" data-q3="{sample.q3!r}" x="{_num(cx - half_box)}" '
        f'y="{_num(y(sample.q3))}" width="{_num(2 * half_box)}" height="{_num(y(sample.q1) - y(sample.q3))}" '
        'fill="#ffffff" stroke="#000000" stroke-width="1"/>'
    )
    lines.append(
        f'<line class="median" data-value="{sample.median!r}" x1="{_num(cx - half_box)}" '
        f'y1="{_num(y(sample.median))}" x2="{_num(cx + half_box)}" y2="{_num(y(sample.median))}" '
        'stroke="#000000" stroke-width="2"/>'
    )

    # Glyphs: dot for flagged, cross for contamination, both when both
    offsets = _jitter_offsets(panel, panel_index, spec)
    contamination = report.contamination
    for index in range(report.n):
        flagged = report.codes[index] != INLIER
        contaminated = contamination is not None and bool(contamination[index])
        if not flagged and not contaminated:
            continue
        value = float(report.values[index])
        gx, gy = cx + offsets.get(index, 0.0), y(value)
        kind = "double" if flagged and contaminated else ("flagged" if flagged else "contaminated")
        lines.append(f'<g class="glyph {kind}" data-index="{index}" data-value="{value!r}">')
        if flagged:
            far = "far-out" if report.codes[index] > 1 else "outside"
            lines.append(
                f'<circle class="outlier {far}" cx="{_num(gx)}" cy="{_num(gy)}" r="{GLYPH_RADIUS}" '
                f'fill="{COLORS[1] if far == "far-out" else "#000000"}"/>'
            )
        if contaminated:
            d = CROSS_HALF
            lines.append(
                f'<path class="contamination" d="M{_num(gx - d)},{_num(gy - d)} L{_num(gx + d)},{_num(gy + d)} '
                f'M{_num(gx - d)},{_num(gy + d)} L{_num(gx + d)},{_num(gy - d)}" stroke="{COLORS[0]}" stroke-width="1.5"/>'
            )
        lines.append("</g>")

    lines.append("</g>")
    return lines


def _y_ticks(axis: AxisTransform, x: float, count: int = 6) -> List[str]:
    lines = []
    for value in np.linspace(axis.low, axis.high, count):
        py = axis.to_px(float(value))
        lines.append(
            f'<line class="tick" x1="{_num(x - 5)}" y1="{_num(py)}" x2="{_num(x)}" y2="{_num(py)}" stroke="#000000"/>'
        )
        lines.append(
            f'<text x="{_num(x - 8)}" y="{_num(py + 4)}" text-anchor="end" font-size="11" {FONT}>'
            f"{_format_tick(float(value))}</text>"
        )
    return lines


def render_boxplots(spec: PlotSpec) -> str:
    """Render side-by-side boxplot panels as a standalone SVG document.

    Raises:
        EmptySpec: no panels.
        InconsistentPanel: a report was computed from a different sample.
    """
    if not spec.panels:
        raise EmptySpec()
    for index, panel in enumerate(spec.panels):
        _check_panel(index, panel)

    axis = axis_transform(spec)
    width = 2 * spec.margin + spec.panel_width * len(spec.panels)
    height = 2 * spec.margin + spec.panel_height
    bottom = spec.margin + spec.panel_height

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
    ]
    if spec.title:
        lines.append(
            f'<text x="{_num(width / 2)}" y="16" text-anchor="middle" font-size="16" {FONT}>{_escape(spec.title)}</text>'
        )
    lines.append(
        f'<line class="axis" x1="{_num(spec.margin)}" y1="{_num(spec.margin)}" x2="{_num(spec.margin)}" '
        f'y2="{_num(bottom)}" stroke="#000000" stroke-width="1"/>'
    )
    lines.extend(_y_ticks(axis, spec.margin))
    if spec.y_label:
        mid = spec.margin + spec.panel_height / 2
        lines.append(
            f'<text x="10" y="{_num(mid)}" text-anchor="middle" font-size="12" {FONT} '
            f'transform="rotate(-90 10 {_num(mid)})">{_escape(spec.y_label)}</text>'
        )
    for index, panel in enumerate(spec.panels):
        lines.extend(_panel_lines(panel, index, spec, axis))
    lines.append("</svg>")

    logger.debug("boxplots_rendered", panels=len(spec.panels))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CurveSpec:
    width: float = 720.0
    height: float = 440.0
    margin_left: float = 60.0
    margin_right: float = 170.0
    margin_top: float = 40.0
    margin_bottom: float = 60.0
    kinds: Sequence[str] = field(default_factory=lambda: [k for k in COEFFICIENT_KINDS if k != "tukey"])
    reference_k: float = 1.5


def _segments(points: List[Tuple[int, Optional[float]]]) -> List[List[Tuple[int, float]]]:
    """Split a series at gaps where a coefficient is undefined."""
    segments: List[List[Tuple[int, float]]] = [[]]
    for n, value in points:
        if value is None:
            if segments[-1]:
                segments.append([])
        else:
            segments[-1].append((n, value))
    return [s for s in segments if s]


def render_coefficient_curves(
    ns: Sequence[int], kinds: Optional[Sequence[str]] = None, spec: Optional[CurveSpec] = None
) -> str:
    """Line chart of fence coefficients against n (log axis) with a Tukey reference line."""
    spec = spec or CurveSpec()
    kinds = list(kinds) if kinds is not None else list(spec.kinds)
    ns = sorted({int(n) for n in ns})
    if not ns or not kinds:
        raise EmptySpec("Coefficient chart needs at least one n and one kind")
    if ns[0] < 2:
        raise InvalidParameters("Coefficient chart needs n >= 2", {"n_min": ns[0]})

    series = {kind: [(n, coefficient_for(kind, n)) for n in ns] for kind in kinds}
    defined = [v for pts in series.values() for _, v in pts if v is not None] + [spec.reference_k]
    y_max = max(defined) * 1.1
    y_min = min(0.0, min(defined))

    plot_left = spec.margin_left
    plot_right = spec.width - spec.margin_right
    plot_top = spec.margin_top
    plot_bottom = spec.height - spec.margin_bottom
    log_lo, log_hi = math.log10(ns[0]), math.log10(ns[-1])
    log_span = log_hi - log_lo or 1.0

    def x_to_px(n: float) -> float:
        return plot_left + (math.log10(n) - log_lo) / log_span * (plot_right - plot_left)

    def y_to_px(k: float) -> float:
        return plot_bottom - (k - y_min) / (y_max - y_min) * (plot_bottom - plot_top)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(spec.width)}" height="{_num(spec.height)}" '
        f'viewBox="0 0 {_num(spec.width)} {_num(spec.height)}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<line class="axis" x1="{_num(plot_left)}" y1="{_num(plot_bottom)}" x2="{_num(plot_right)}" '
        f'y2="{_num(plot_bottom)}" stroke="#000000" stroke-width="1"/>',
        f'<line class="axis" x1="{_num(plot_left)}" y1="{_num(plot_top)}" x2="{_num(plot_left)}" '
        f'y2="{_num(plot_bottom)}" stroke="#000000" stroke-width="1"/>',
    ]

    for decade in range(math.ceil(log_lo), math.floor(log_hi) + 1):
        px = x_to_px(10.0**decade)
        lines.append(
            f'<text x="{_num(px)}" y="{_num(plot_bottom + 20)}" text-anchor="middle" font-size="11" {FONT}>'
            f"{10 ** decade}</text>"
        )
    for value in np.linspace(y_min, y_max, 6):
        py = y_to_px(float(value))
        lines.append(
            f'<text x="{_num(plot_left - 8)}" y="{_num(py + 4)}" text-anchor="end" font-size="11" {FONT}>'
            f"{_format_tick(float(value))}</text>"
        )

    ref_y = y_to_px(spec.reference_k)
    lines.append(
        f'<line class="reference" data-k="{spec.reference_k!r}" x1="{_num(plot_left)}" y1="{_num(ref_y)}" '
        f'x2="{_num(plot_right)}" y2="{_num(ref_y)}" stroke="#666666" stroke-dasharray="6 4"/>'
    )

    legend_x = plot_right + 20
    for idx, kind in enumerate(kinds):
        color = COLORS[idx % len(COLORS)]
        for segment in _segments(series[kind]):
            points = " ".join(f"{_num(x_to_px(n))},{_num(y_to_px(k))}" for n, k in segment)
            lines.append(
                f'<polyline class="curve" data-kind="{_escape(kind)}" fill="none" stroke="{color}" '
                f'stroke-width="2" points="{points}"/>'
            )
        ly = plot_top + 16 + idx * 22
        lines.append(
            f'<line x1="{_num(legend_x)}" y1="{_num(ly)}" x2="{_num(legend_x + 24)}" y2="{_num(ly)}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        lines.append(
            f'<text x="{_num(legend_x + 30)}" y="{_num(ly + 4)}" font-size="12" {FONT}>{_escape(kind)}</text>'
        )

    lines.append(
        f'<text x="{_num((plot_left + plot_right) / 2)}" y="{_num(spec.height - 15)}" text-anchor="middle" '
        f'font-size="13" {FONT}>n</text>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
