"""Plot artifacts as structured data, plus a minimal SVG renderer.

Artifacts are JSON-friendly documents (series of curves, points with error
bars, and residual strips); the web UI and the CLI render them.  The SVG
output here is deliberately small: log-log polylines with axes and tick
labels, and a linear residual strip when a residuals series is present.
"""

from __future__ import annotations

import math
import uuid
from dataclasses import dataclass, field

import numpy as np

from .dataio import Dataset
from .errors import SaskitError


class PlotInvariantError(SaskitError):
    pass


@dataclass
class PlotSeries:
    label: str
    kind: str                      # "curve" | "points" | "residuals"
    x: list[float]
    y: list[float]
    yerr: list[float] | None = None

    def __post_init__(self):
        if self.kind not in ("curve", "points", "residuals"):
            raise PlotInvariantError(f"bad series kind {self.kind!r}")
        if len(self.x) != len(self.y):
            raise PlotInvariantError("x and y lengths differ")
        if any(b < a for a, b in zip(self.x, self.x[1:])):
            raise PlotInvariantError("x values must be ascending")
        if self.yerr is not None and len(self.yerr) != len(self.x):
            raise PlotInvariantError("yerr length differs")

    def to_dict(self) -> dict:
        doc = {"label": self.label, "kind": self.kind, "x": self.x, "y": self.y}
        if self.yerr is not None:
            doc["yerr"] = self.yerr
        return doc


@dataclass
class PlotArtifact:
    title: str
    series: list[PlotSeries]
    plot_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    x_label: str = "q (1/Å)"
    y_label: str = "I(q) (1/cm)"
    x_log: bool = True
    y_log: bool = True

    def __post_init__(self):
        if not self.series:
            raise PlotInvariantError("plot needs at least one series")

    def to_dict(self) -> dict:
        return {
            "plot_id": self.plot_id,
            "title": self.title,
            "x_label": self.x_label,
            "y_label": self.y_label,
            "x_log": self.x_log,
            "y_log": self.y_log,
            "series": [s.to_dict() for s in self.series],
        }


def dataset_series(dataset: Dataset, label: str) -> PlotSeries:
    kind = "points" if dataset.d_intensity is not None else "curve"
    return PlotSeries(
        label=label, kind=kind,
        x=[float(v) for v in dataset.q],
        y=[float(v) for v in dataset.intensity],
        yerr=None if dataset.d_intensity is None
        else [float(v) for v in dataset.d_intensity],
    )


def dataset_plot(dataset: Dataset, title: str) -> PlotArtifact:
    return PlotArtifact(title=title, series=[dataset_series(dataset, title)])


def fit_plot(dataset: Dataset, model_intensity: np.ndarray,
             residuals: np.ndarray, title: str) -> PlotArtifact:
    """Fitted curve over the data plus the normalized-residuals strip."""
    q = [float(v) for v in dataset.q]
    return PlotArtifact(title=title, series=[
        dataset_series(dataset, "data"),
        PlotSeries(label="fit", kind="curve", x=q,
                   y=[float(v) for v in model_intensity]),
        PlotSeries(label="normalized residuals", kind="residuals", x=q,
                   y=[float(v) for v in residuals]),
    ])


# --- SVG rendering ---

_W, _H = 640, 480
_MARGIN = 54
_RESIDUAL_STRIP = 110


def _log_positions(values, lo, hi):
    span = math.log10(hi) - math.log10(lo)
    return [(math.log10(v) - math.log10(lo)) / span if v > 0 else 0.0
            for v in values]


def _lin_positions(values, lo, hi):
    span = (hi - lo) or 1.0
    return [(v - lo) / span for v in values]


def render_svg(artifact: PlotArtifact) -> str:
    """Minimal standalone SVG for an artifact; presentation only."""
    main = [s for s in artifact.series if s.kind != "residuals"]
    strips = [s for s in artifact.series if s.kind == "residuals"]
    xs = [v for s in main for v in s.x if v > 0]
    ys = [v for s in main for v in s.y if v > 0]
    x_lo, x_hi = (min(xs), max(xs)) if xs else (1e-3, 1.0)
    y_lo, y_hi = (min(ys), max(ys)) if ys else (1e-3, 1.0)
    if x_lo == x_hi:
        x_hi = x_lo * 10
    if y_lo == y_hi:
        y_hi = y_lo * 10

    plot_h = _H - 2 * _MARGIN - (_RESIDUAL_STRIP if strips else 0)
    plot_w = _W - 2 * _MARGIN

    def px(fraction):
        return _MARGIN + fraction * plot_w

    def py(fraction):
        return _MARGIN + plot_h - fraction * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.0f}" y="20" text-anchor="middle" '
        f'font-size="14">{_escape(artifact.title)}</text>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
        f'<text x="{_W / 2:.0f}" y="{_MARGIN + plot_h + 34}" text-anchor="middle" '
        f'font-size="12">{_escape(artifact.x_label)}</text>',
        f'<text x="16" y="{_MARGIN + plot_h / 2:.0f}" font-size="12" '
        f'transform="rotate(-90 16 {_MARGIN + plot_h / 2:.0f})" '
        f'text-anchor="middle">{_escape(artifact.y_label)}</text>',
    ]
    for bound, anchor, x_pos in ((x_lo, "start", _MARGIN), (x_hi, "end", _MARGIN + plot_w)):
        parts.append(f'<text x="{x_pos}" y="{_MARGIN + plot_h + 16}" font-size="10" '
                     f'text-anchor="{anchor}">{bound:.3g}</text>')
    for bound, y_pos in ((y_lo, _MARGIN + plot_h), (y_hi, _MARGIN + 10)):
        parts.append(f'<text x="{_MARGIN - 4}" y="{y_pos}" font-size="10" '
                     f'text-anchor="end">{bound:.3g}</text>')

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    for i, series in enumerate(main):
        color = palette[i % len(palette)]
        keep = [(x, y) for x, y in zip(series.x, series.y) if x > 0 and y > 0]
        if not keep:
            continue
        fx = _log_positions([p[0] for p in keep], x_lo, x_hi)
        fy = _log_positions([p[1] for p in keep], y_lo, y_hi)
        if series.kind == "curve":
            points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(fx, fy))
            parts.append(f'<polyline fill="none" stroke="{color}" '
                         f'stroke-width="1.5" points="{points}"/>')
        else:
            if series.yerr is not None:
                for (x, y), err in zip(keep, series.yerr):
                    top, bottom = y + err, max(y - err, y_lo * 1e-3)
                    fx1 = _log_positions([x], x_lo, x_hi)[0]
                    fy1 = _log_positions([max(bottom, 1e-300)], y_lo, y_hi)[0]
                    fy2 = _log_positions([top], y_lo, y_hi)[0]
                    parts.append(f'<line x1="{px(fx1):.2f}" y1="{py(fy1):.2f}" '
                                 f'x2="{px(fx1):.2f}" y2="{py(fy2):.2f}" '
                                 f'stroke="{color}" stroke-width="0.7"/>')
            for a, b in zip(fx, fy):
                parts.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="2" '
                             f'fill="{color}"/>')
        parts.append(f'<text x="{_MARGIN + 8}" y="{_MARGIN + 16 + 14 * i}" '
                     f'font-size="11" fill="{color}">{_escape(series.label)}</text>')

    if strips:
        strip = strips[0]
        top = _MARGIN + plot_h + 44
        height = _RESIDUAL_STRIP - 50
        r_hi = max(max(abs(v) for v in strip.y), 1e-12)
        parts.append(f'<rect x="{_MARGIN}" y="{top}" width="{plot_w}" '
                     f'height="{height}" fill="none" stroke="black"/>')
        mid = top + height / 2
        parts.append(f'<line x1="{_MARGIN}" y1="{mid:.1f}" x2="{_MARGIN + plot_w}" '
                     f'y2="{mid:.1f}" stroke="#888" stroke-dasharray="4 3"/>')
        fx = (_log_positions(strip.x, x_lo, x_hi) if artifact.x_log
              else _lin_positions(strip.x, x_lo, x_hi))
        for a, v in zip(fx, strip.y):
            cy = mid - (v / r_hi) * (height / 2 - 2)
            parts.append(f'<circle cx="{px(a):.2f}" cy="{cy:.2f}" r="1.6" '
                         'fill="#d62728"/>')
        parts.append(f'<text x="{_MARGIN}" y="{top - 6}" font-size="11">'
                     f'{_escape(strip.label)} (linear, +/-{r_hi:.3g})</text>')

    parts.append("</svg>")
    return "\n".join(parts)


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))
