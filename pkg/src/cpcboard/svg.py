"""Deterministic SVG rendering: CPC panel on top, leaderboard table below.

Byte-for-byte reproducible for fixed inputs: attributes are emitted in
sorted order, every coordinate is formatted with six decimal places, and
the geometry comes straight from compute_layout so golden files pin the
layout engine too.  <line> elements are used for axes only and <path>
elements for polylines only, which keeps parsed element counts meaningful.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .analytics import leaderboard
from .engine import RunSnapshot
from .layout import (
    AxisDescriptor,
    ExpansionState,
    NumericDomain,
    compute_layout,
    normalize,
)

PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#9c755f",
)

AXIS_LABELS = {
    "pipeline_id": "Pipeline ID",
    "group_disparity": "Group Disparity",
    "prediction_time": "Prediction Time",
    "roc_auc_train": "ROC AUC (train)",
    "roc_auc_holdout": "ROC AUC (holdout)",
}


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _tag(name: str, attrs: dict, text: str | None = None) -> str:
    body = " ".join(f'{k}="{attrs[k]}"' for k in sorted(attrs))
    if text is None:
        return f"<{name} {body}/>"
    return f"<{name} {body}>{escape(text)}</{name}>"


def _axis_label(axis: AxisDescriptor) -> str:
    if axis.parent is not None:
        return axis.axis_id.rsplit("/", 1)[1]
    return AXIS_LABELS.get(axis.axis_id, axis.axis_id)


def export_svg(
    snapshot: RunSnapshot,
    expansion: ExpansionState,
    width: int = 1200,
    height: int = 600,
) -> str:
    """Render a run as a standalone SVG document (UTF-8 text)."""
    layout = compute_layout(snapshot, expansion)
    rows = leaderboard(snapshot)

    margin_x = 60.0
    cpc_top = 40.0
    cpc_bottom = cpc_top + (height - cpc_top - 30.0) * 0.55
    plot_w = width - 2 * margin_x

    def px(x: float) -> float:
        return margin_x + x * plot_w

    def py(y: float) -> float:
        return cpc_bottom - y * (cpc_bottom - cpc_top)

    out: list[str] = []
    out.append(
        f'<svg height="{height}" viewBox="0 0 {width} {height}" width="{width}" '
        f'xmlns="http://www.w3.org/2000/svg">'
    )
    out.append(
        _tag("rect", {"fill": "#ffffff", "height": height, "width": width, "x": 0, "y": 0})
    )

    out.append('<g font-family="monospace">')
    for axis in layout.axes:
        x = px(axis.x)
        out.append(
            _tag(
                "line",
                {
                    "stroke": "#555555",
                    "stroke-width": "1",
                    "x1": _fmt(x),
                    "x2": _fmt(x),
                    "y1": _fmt(cpc_top),
                    "y2": _fmt(cpc_bottom),
                },
            )
        )
        out.append(
            _tag(
                "text",
                {
                    "fill": "#222222",
                    "font-size": "9",
                    "text-anchor": "middle",
                    "x": _fmt(x),
                    "y": _fmt(cpc_top - 6.0),
                },
                _axis_label(axis),
            )
        )
        for category, y in layout.ticks.get(axis.axis_id, ()):
            out.append(
                _tag(
                    "text",
                    {
                        "fill": "#666666",
                        "font-size": "7",
                        "x": _fmt(x + 3.0),
                        "y": _fmt(py(y) + 2.0),
                    },
                    category,
                )
            )
        if isinstance(axis.domain, NumericDomain) and axis.domain.lo != axis.domain.hi:
            for v, anchor_y in ((axis.domain.lo, 0.0), (axis.domain.hi, 1.0)):
                out.append(
                    _tag(
                        "text",
                        {
                            "fill": "#666666",
                            "font-size": "7",
                            "x": _fmt(x + 3.0),
                            "y": _fmt(py(anchor_y) + 2.0),
                        },
                        f"{v:.4g}",
                    )
                )
    out.append("</g>")

    # constraint markers on the matching metric axes (thin background bars)
    for constraint in snapshot.space.constraints:
        for axis in layout.axes:
            if axis.axis_id != constraint.metric:
                continue
            dom = axis.domain
            if not isinstance(dom, NumericDomain) or not (
                dom.lo <= constraint.threshold <= dom.hi
            ):
                continue
            y = py(normalize(constraint.threshold, axis))
            out.append(
                _tag(
                    "rect",
                    {
                        "fill": "#d62728",
                        "fill-opacity": "0.6",
                        "height": "2",
                        "width": "14",
                        "x": _fmt(px(axis.x) - 7.0),
                        "y": _fmt(y - 1.0),
                    },
                )
            )

    out.append('<g fill="none">')
    for poly in layout.polylines:
        d = " ".join(
            ("M" if i == 0 else "L") + f"{_fmt(px(x))},{_fmt(py(y))}"
            for i, (x, y) in enumerate(poly.vertices)
        )
        out.append(
            _tag(
                "path",
                {
                    "d": d,
                    "stroke": PALETTE[poly.color_index % len(PALETTE)],
                    "stroke-opacity": "0.85",
                    "stroke-width": "1.5",
                },
            )
        )
    out.append("</g>")

    legend_y = cpc_bottom + 18.0
    out.append('<g font-family="monospace" font-size="9">')
    lx = margin_x
    for name, index in layout.legend.items():
        out.append(
            _tag(
                "rect",
                {
                    "fill": PALETTE[index % len(PALETTE)],
                    "height": "8",
                    "width": "8",
                    "x": _fmt(lx),
                    "y": _fmt(legend_y - 7.0),
                },
            )
        )
        out.append(
            _tag("text", {"fill": "#222222", "x": _fmt(lx + 11.0), "y": _fmt(legend_y)}, name)
        )
        lx += 11.0 + 6.5 * len(name) + 16.0
    out.append("</g>")

    table_top = legend_y + 20.0
    row_h = 11.0
    max_rows = max(int((height - 8.0 - table_top) / row_h), 0)
    slot_names = [slot.name for slot in snapshot.space.slots]
    header = (
        f'{"rank":>4}  {"roc_auc_holdout":>15}  {"group_disparity":>15}  '
        f'{"prediction_time":>15}  {"id":>5}  ' + " | ".join(slot_names)
    )
    out.append('<g font-family="monospace" font-size="9">')
    out.append(
        _tag(
            "text",
            {"fill": "#222222", "x": _fmt(margin_x), "y": _fmt(table_top)},
            header,
        )
    )
    for row in rows[:max_rows]:
        line = (
            f"{row.rank:>4}  {row.roc_auc_holdout:>15.6f}  {row.group_disparity:>15.6f}  "
            f"{row.prediction_time:>15.6f}  {row.id:>5}  "
            + " | ".join(row.structure[s] for s in slot_names)
        )
        out.append(
            _tag(
                "text",
                {
                    "fill": PALETTE[row.color_index % len(PALETTE)],
                    "x": _fmt(margin_x),
                    "y": _fmt(table_top + row.rank * row_h),
                },
                line,
            )
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
