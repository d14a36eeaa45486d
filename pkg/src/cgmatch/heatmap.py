"""Minimal hand-rolled SVG heatmap for phase diagrams.

Renders success rate over a 2-D grid of sweep records.  The CSV remains
the normative output; this is a convenience view with no plotting
dependency and deterministic bytes.
"""

from __future__ import annotations

import math

from .errors import ConfigurationError
from .experiments import ExperimentRecord
from .ioutil import atomic_write_text

AXIS_FIELDS = (
    "n", "d", "rho", "p11", "np11", "np11_over_logn", "feat_over_logn",
)

_CELL = 44
_MARGIN_LEFT = 86
_MARGIN_BOTTOM = 64
_MARGIN_TOP = 34
_MARGIN_RIGHT = 96

# Five-stop dark-to-bright colormap, linearly interpolated.
_STOPS = (
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
)


def axis_value(record: ExperimentRecord, field: str) -> float:
    from .thresholds import feature_information

    p = record.params
    if field == "n":
        return float(p.n)
    if field == "d":
        return float(p.d)
    if field == "rho":
        return p.rho
    if field == "p11":
        return p.p.p11
    if field == "np11":
        return p.n * p.p.p11
    if field == "np11_over_logn":
        return p.n * p.p.p11 / math.log(p.n) if p.n > 1 else 0.0
    if field == "feat_over_logn":
        return feature_information(p.d, p.rho) / math.log(p.n) if p.n > 1 else 0.0
    raise ConfigurationError(f"unknown heatmap axis {field!r}; choose from {AXIS_FIELDS}")


def _color(value: float) -> str:
    value = min(1.0, max(0.0, value))
    pos = value * (len(_STOPS) - 1)
    low = min(int(pos), len(_STOPS) - 2)
    frac = pos - low
    r, g, b = (
        round(_STOPS[low][c] + frac * (_STOPS[low + 1][c] - _STOPS[low][c])) for c in range(3)
    )
    return f"#{r:02x}{g:02x}{b:02x}"


def _fmt(value: float) -> str:
    return format(value, ".6g")


def emit_heatmap(
    records: list[ExperimentRecord],
    path: str,
    x_field: str = "np11_over_logn",
    y_field: str = "feat_over_logn",
) -> None:
    """Write an SVG of success_rate over (x_field, y_field).

    Records sharing an (x, y) coordinate are averaged.  Axis values are
    sorted ascending; x grows rightward, y grows upward.
    """
    if not records:
        raise ConfigurationError("cannot render a heatmap from zero records")
    points: dict[tuple[float, float], list[float]] = {}
    for record in records:
        key = (axis_value(record, x_field), axis_value(record, y_field))
        points.setdefault(key, []).append(record.success_rate)
    xs = sorted({key[0] for key in points})
    ys = sorted({key[1] for key in points})

    width = _MARGIN_LEFT + _CELL * len(xs) + _MARGIN_RIGHT
    height = _MARGIN_TOP + _CELL * len(ys) + _MARGIN_BOTTOM
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="monospace" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{_MARGIN_LEFT}" y="18" font-size="13">success rate: '
        f"{x_field} vs {y_field}</text>",
    ]
    for (x, y), rates in sorted(points.items()):
        rate = sum(rates) / len(rates)
        col = xs.index(x)
        row = ys.index(y)
        px = _MARGIN_LEFT + col * _CELL
        py = _MARGIN_TOP + (len(ys) - 1 - row) * _CELL
        parts.append(
            f'<rect x="{px}" y="{py}" width="{_CELL}" height="{_CELL}" '
            f'fill="{_color(rate)}"><title>{x_field}={_fmt(x)} {y_field}={_fmt(y)} '
            f"rate={_fmt(rate)}</title></rect>"
        )
        luminance = 0.0 if rate > 0.55 else 1.0
        text_fill = "#000000" if luminance == 0.0 else "#ffffff"
        parts.append(
            f'<text x="{px + _CELL / 2:g}" y="{py + _CELL / 2 + 4:g}" '
            f'text-anchor="middle" fill="{text_fill}">{rate:.2f}</text>'
        )
    for col, x in enumerate(xs):
        px = _MARGIN_LEFT + col * _CELL + _CELL / 2
        py = _MARGIN_TOP + _CELL * len(ys) + 16
        parts.append(f'<text x="{px:g}" y="{py}" text-anchor="middle">{_fmt(x)}</text>')
    for row, y in enumerate(ys):
        px = _MARGIN_LEFT - 8
        py = _MARGIN_TOP + (len(ys) - 1 - row) * _CELL + _CELL / 2 + 4
        parts.append(f'<text x="{px}" y="{py:g}" text-anchor="end">{_fmt(y)}</text>')
    parts.append(
        f'<text x="{_MARGIN_LEFT + _CELL * len(xs) / 2:g}" '
        f'y="{height - 24}" text-anchor="middle">{x_field}</text>'
    )
    parts.append(
        f'<text x="20" y="{_MARGIN_TOP + _CELL * len(ys) / 2:g}" text-anchor="middle" '
        f'transform="rotate(-90 20 {_MARGIN_TOP + _CELL * len(ys) / 2:g})">{y_field}</text>'
    )
    legend_x = _MARGIN_LEFT + _CELL * len(xs) + 18
    for i in range(11):
        value = i / 10
        ly = _MARGIN_TOP + (10 - i) * (_CELL * len(ys) / 11)
        parts.append(
            f'<rect x="{legend_x}" y="{ly:g}" width="14" '
            f'height="{_CELL * len(ys) / 11:g}" fill="{_color(value)}"/>'
        )
        if i in (0, 5, 10):
            parts.append(
                f'<text x="{legend_x + 20}" y="{ly + _CELL * len(ys) / 22 + 4:g}">{value:.1f}</text>'
            )
    parts.append("</svg>")
    atomic_write_text(path, "\n".join(parts) + "\n")
