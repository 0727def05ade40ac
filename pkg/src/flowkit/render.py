"""Emit maps as Graphviz DOT text and reports as static HTML with SVG charts.

All output is byte-deterministic for identical inputs: collections are
sorted, floats are formatted with fixed precision, and charts are drawn
into a fixed 800x400 viewport. The visual vocabulary (dashed means fluid,
ellipses for people, double ellipses for pairs, boxes for documents) is
documented in ``docs/notation.md``.
"""

from __future__ import annotations

import html

from .builder import WidthClass, flow_width
from .conformance import ComplianceResult, ViolationRecord
from .model import (
    FlowDirection,
    FlowMap,
    InformationState,
    InvalidMap,
    local_time_label,
    validate_map,
)
from .report import ChartKind, ChartModel
from .strategy import Medium

_PEN_WIDTH = {WidthClass.THIN: 1, WidthClass.MEDIUM: 2, WidthClass.THICK: 3}

SVG_WIDTH = 800
SVG_HEIGHT = 400
_MARGIN_LEFT = 60
_MARGIN_BOTTOM = 60
_MARGIN_TOP = 30
_PLOT_W = SVG_WIDTH - _MARGIN_LEFT - 20
_PLOT_H = SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def to_graph_description(flow_map: FlowMap, catalog: tuple[Medium, ...] = ()) -> str:
    """DOT text for a validated map.

    One cluster per site; person stores as ellipses, pair stores as double
    ellipses, documents as boxes. Fluid flows are dashed, solid flows
    solid; pen width encodes the width class; cross-site edges carry the
    medium name (the raw id when the catalog does not know it).
    """
    issues = validate_map(flow_map)
    if issues:
        raise InvalidMap(issues)

    names = {m.id: m.name for m in catalog}
    ranks = {m.id: m.richness_rank for m in catalog}

    lines: list[str] = []
    lines.append("digraph flowmap {")
    lines.append('  graph [rankdir=LR, fontname="Helvetica"];')
    lines.append('  node [fontname="Helvetica"];')
    lines.append('  edge [fontname="Helvetica"];')

    persons_by_id = {p.id: p for p in flow_map.persons}
    for site in sorted(flow_map.sites, key=lambda s: s.id):
        lines.append(f"  subgraph cluster_{_safe_cluster(site.id)} {{")
        lines.append(f"    label={_quote(site.name + ' (' + local_time_label(site) + ')')};")
        for person in sorted(flow_map.persons, key=lambda p: p.id):
            if person.site_id != site.id:
                continue
            lines.append(f"    {_quote(person.id)} [shape=ellipse, label={_quote(person.name)}];")
        for pair in sorted(flow_map.pairs, key=lambda p: p.id):
            member = persons_by_id.get(pair.member_ids[0])
            if member is None or member.site_id != site.id:
                continue
            member_names = " & ".join(
                persons_by_id[m].name if m in persons_by_id else m for m in pair.member_ids
            )
            label = f"{pair.id}: {member_names}"
            if pair.current_work_item is not None:
                label += f"\\n[US{pair.current_work_item.story_id}]"
            lines.append(
                f"    {_quote(pair.id)} [shape=ellipse, peripheries=2, label={_quote(label)}];"
            )
        for doc in sorted(flow_map.documents, key=lambda d: d.id):
            if doc.responsible_site_id != site.id:
                continue
            lines.append(f"    {_quote(doc.id)} [shape=box, label={_quote(doc.name)}];")
        lines.append("  }")

    for flow in sorted(flow_map.flows, key=lambda f: (f.from_id, f.to_id, f.label or "")):
        attrs: list[str] = []
        if flow.direction is FlowDirection.BOTH_WAYS:
            attrs.append("dir=none")
        style = "dashed" if flow.state is InformationState.FLUID else "solid"
        attrs.append(f"style={style}")
        rank = ranks.get(flow.medium_id, 1) if flow.medium_id else 1
        attrs.append(f"penwidth={_PEN_WIDTH[flow_width(flow.strength, rank)]}")
        cross_site = flow_map.store_site(flow.from_id) != flow_map.store_site(flow.to_id)
        if cross_site and flow.medium_id:
            attrs.append(f"label={_quote(names.get(flow.medium_id, flow.medium_id))}")
        elif flow.label:
            attrs.append(f"tooltip={_quote(flow.label)}")
        lines.append(f"  {_quote(flow.from_id)} -> {_quote(flow.to_id)} [{', '.join(attrs)}];")

    lines.append("}")
    return "\n".join(lines) + "\n"


def _safe_cluster(site_id: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in site_id)


# --- SVG charts ------------------------------------------------------------


def _svg_open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" '
        f'width="{SVG_WIDTH}" height="{SVG_HEIGHT}" role="img">',
        f'<title>{html.escape(title)}</title>',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH // 2}" y="20" text-anchor="middle" font-size="14" '
        f'font-family="Helvetica">{html.escape(title)}</text>',
    ]


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _bar_chart_svg(chart: ChartModel) -> str:
    points = chart.series[0].points if chart.series else ()
    parts = _svg_open(chart.title)
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP + _PLOT_H}" '
        f'x2="{_MARGIN_LEFT + _PLOT_W}" y2="{_MARGIN_TOP + _PLOT_H}" stroke="black"/>'
    )
    top = max((p[1] for p in points), default=0)
    scale = _PLOT_H / top if top else 0.0
    count = len(points)
    slot = _PLOT_W / count if count else _PLOT_W
    bar_w = min(60.0, slot * 0.6)
    for i, (label, value) in enumerate(points):
        x = _MARGIN_LEFT + slot * i + (slot - bar_w) / 2
        height = value * scale
        y = _MARGIN_TOP + _PLOT_H - height
        parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
            f'height="{_fmt(height)}" fill="#4477aa"/>'
        )
        value_text = str(value) if isinstance(value, int) else _fmt(value)
        parts.append(
            f'<text x="{_fmt(x + bar_w / 2)}" y="{_fmt(y - 4)}" text-anchor="middle" '
            f'font-size="11" font-family="Helvetica">{html.escape(value_text)}</text>'
        )
        parts.append(
            f'<text x="{_fmt(x + bar_w / 2)}" y="{_MARGIN_TOP + _PLOT_H + 14}" '
            f'text-anchor="end" font-size="10" font-family="Helvetica" '
            f'transform="rotate(-30 {_fmt(x + bar_w / 2)} {_MARGIN_TOP + _PLOT_H + 14})">'
            f"{html.escape(str(label))}</text>"
        )
    parts.append(
        f'<text x="{_MARGIN_LEFT + _PLOT_W // 2}" y="{SVG_HEIGHT - 6}" text-anchor="middle" '
        f'font-size="11" font-family="Helvetica">{html.escape(chart.x_label)}</text>'
    )
    parts.append(
        f'<text x="14" y="{_MARGIN_TOP + _PLOT_H // 2}" text-anchor="middle" font-size="11" '
        f'font-family="Helvetica" transform="rotate(-90 14 {_MARGIN_TOP + _PLOT_H // 2})">'
        f"{html.escape(chart.y_label)}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts)


_STACK_COLORS = {"ok": "#44aa77", "temporal": "#eecc44", "qualitative": "#cc4444"}


def _stacked_chart_svg(chart: ChartModel) -> str:
    parts = _svg_open(chart.title)
    days = [p[0] for p in chart.series[0].points] if chart.series else []
    count = len(days)
    slot = _PLOT_W / count if count else _PLOT_W
    bar_w = min(80.0, slot * 0.6)
    values = {s.label: dict(s.points) for s in chart.series}
    for i, day in enumerate(days):
        x = _MARGIN_LEFT + slot * i + (slot - bar_w) / 2
        y = _MARGIN_TOP + _PLOT_H
        for label in ("ok", "temporal", "qualitative"):
            pct = values.get(label, {}).get(day, 0)
            height = _PLOT_H * pct / 100.0
            y -= height
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
                f'height="{_fmt(height)}" fill="{_STACK_COLORS[label]}"/>'
            )
        parts.append(
            f'<text x="{_fmt(x + bar_w / 2)}" y="{_MARGIN_TOP + _PLOT_H + 14}" '
            f'text-anchor="middle" font-size="10" font-family="Helvetica">'
            f"{html.escape(str(day))}</text>"
        )
    meta = chart.meta_map()
    legend = (
        f"overall: {meta.get('overall_ok', '?')}% ok / "
        f"{meta.get('overall_temporal', '?')}% temporal / "
        f"{meta.get('overall_qualitative', '?')}% qualitative"
    )
    parts.append(
        f'<text x="{_MARGIN_LEFT + _PLOT_W // 2}" y="{SVG_HEIGHT - 6}" text-anchor="middle" '
        f'font-size="12" font-family="Helvetica">{html.escape(legend)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts)


_SPAN_COLORS = {"Local": "#44aa77", "CrossSite": "#4477aa"}


def _gantt_chart_svg(chart: ChartModel) -> str:
    parts = _svg_open(chart.title)
    rows = chart.series
    count = len(rows)
    row_h = _PLOT_H / count if count else _PLOT_H
    minute_w = _PLOT_W / (24 * 60)
    for index, row in enumerate(rows):
        y_mid = _MARGIN_TOP + row_h * index + row_h / 2
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{_fmt(y_mid + 4)}" text-anchor="end" '
            f'font-size="10" font-family="Helvetica">{html.escape(row.label)}</text>'
        )
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{_fmt(y_mid)}" x2="{_MARGIN_LEFT + _PLOT_W}" '
            f'y2="{_fmt(y_mid)}" stroke="#dddddd"/>'
        )
        for start_minute, end_minute, mark, span, _kind in row.points:
            x = _MARGIN_LEFT + start_minute * minute_w
            color = _SPAN_COLORS.get(span, "#888888")
            if mark == "range" and end_minute is not None:
                width = max((end_minute - start_minute) * minute_w, 2.0)
                parts.append(
                    f'<rect x="{_fmt(x)}" y="{_fmt(y_mid - row_h * 0.3)}" '
                    f'width="{_fmt(width)}" height="{_fmt(row_h * 0.6)}" fill="{color}"/>'
                )
            elif mark == "point":
                parts.append(
                    f'<circle cx="{_fmt(x)}" cy="{_fmt(y_mid)}" r="2.5" fill="none" '
                    f'stroke="{color}" stroke-dasharray="2,1"/>'
                )
            else:
                parts.append(
                    f'<line x1="{_fmt(x)}" y1="{_fmt(y_mid - row_h * 0.3)}" x2="{_fmt(x)}" '
                    f'y2="{_fmt(y_mid + row_h * 0.3)}" stroke="{color}" stroke-width="2"/>'
                )
    parts.append(
        f'<text x="{_MARGIN_LEFT + _PLOT_W // 2}" y="{SVG_HEIGHT - 6}" text-anchor="middle" '
        f'font-size="11" font-family="Helvetica">{html.escape(chart.x_label)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts)


def chart_svg(chart: ChartModel) -> str:
    if chart.kind in (ChartKind.BAR_FREQUENCY, ChartKind.BAR_DURATION):
        return _bar_chart_svg(chart)
    if chart.kind is ChartKind.STACKED_COMPLIANCE:
        return _stacked_chart_svg(chart)
    return _gantt_chart_svg(chart)


# --- HTML report -----------------------------------------------


def yellow_pages_rows(flow_map: FlowMap) -> list[dict[str, str]]:
    """One awareness row per person, in id order."""
    sites = {s.id: s for s in flow_map.sites}
    work_items = {}
    for pair in flow_map.pairs:
        for member in pair.member_ids:
            if pair.current_work_item is not None:
                work_items[member] = f"US{pair.current_work_item.story_id}"
    rows = []
    for person in sorted(flow_map.persons, key=lambda p: p.id):
        yp = person.yellow_pages
        site = sites.get(person.site_id)
        item = yp.current_work_item
        rows.append(
            {
                "name": person.name,
                "picture": yp.picture_ref or "",
                "site": site.name if site else person.site_id,
                "local_time": local_time_label(site) if site else "",
                "roles": ", ".join(sorted(person.roles)),
                "contact": ", ".join(f"{k}: {v}" for k, v in sorted(yp.contact)),
                "skills": ", ".join(yp.skills),
                "work_item": f"US{item.story_id}" if item else work_items.get(person.id, ""),
                "status": yp.status or "",
            }
        )
    return rows


_YP_COLUMNS = (
    ("name", "Name"),
    ("picture", "Picture"),
    ("site", "Site"),
    ("local_time", "Local time"),
    ("roles", "Roles"),
    ("contact", "Contact"),
    ("skills", "Skills"),
    ("work_item", "Work item"),
    ("status", "Status"),
)

_CSS = """
body { font-family: Helvetica, Arial, sans-serif; margin: 2rem; color: #222; }
h1, h2 { color: #113355; }
table { border-collapse: collapse; margin: 1rem 0; }
th, td { border: 1px solid #ccc; padding: 0.3rem 0.6rem; font-size: 0.9rem; text-align: left; }
th { background: #eef2f7; }
pre.map { background: #f7f7f7; border: 1px solid #ddd; padding: 0.8rem; overflow-x: auto; font-size: 0.8rem; }
.legend { font-size: 1.05rem; margin: 0.5rem 0; }
.chart { margin: 1rem 0; }
""".strip()


def render_report(
    charts: list[ChartModel],
    compliance_results: list[ComplianceResult],
    map_text: str,
    yellow_pages: list[dict[str, str]],
    violations: list[ViolationRecord] = (),
    title: str = "Communication report",
    templates=(),
) -> str:
    """Self-contained HTML: map, yellow pages, charts, compliance, violations."""
    out: list[str] = []
    out.append("<!DOCTYPE html>")
    out.append('<html lang="en">')
    out.append("<head>")
    out.append('<meta charset="utf-8"/>')
    out.append(f"<title>{html.escape(title)}</title>")
    out.append(f"<style>{_CSS}</style>")
    out.append("</head>")
    out.append("<body>")
    out.append(f"<h1>{html.escape(title)}</h1>")

    out.append("<h2>Compliance</h2>")
    if compliance_results:
        legend = " / ".join(
            f"{r.activity_id}: {r.compliance_pct}%" for r in compliance_results
        )
        out.append(f'<p class="legend" id="compliance-legend">{html.escape(legend)}</p>')
        out.append("<table id=\"compliance\">")
        out.append(
            "<tr><th>Activity</th><th>OK</th><th>Temporal</th><th>Qualitative</th>"
            "<th>Compliance</th></tr>"
        )
        for result in compliance_results:
            out.append(
                "<tr>"
                f"<td>{html.escape(result.activity_id)}</td>"
                f"<td>{result.ok}</td><td>{result.temporal}</td><td>{result.qualitative}</td>"
                f"<td>{result.compliance_pct}% ({result.temporal_pct}% T, "
                f"{result.qualitative_pct}% Q)"
                f"{' [vacuous]' if result.vacuous else ''}</td>"
                "</tr>"
            )
        out.append("</table>")
    else:
        out.append("<p>No compliance results.</p>")

    if templates:
        out.append("<h2>Conformance templates</h2>")
        out.append('<table id="templates">')
        out.append("<tr><th>Activity</th><th>Goal</th><th>Definition</th><th>Rules</th></tr>")
        for template in templates:
            rules = "; ".join(
                f"{r.id} ({r.category.value}): {r.description}" for r in template.rules
            )
            out.append(
                "<tr>"
                f"<td>{html.escape(template.activity_id)}</td>"
                f"<td>{html.escape(template.goal)}</td>"
                f"<td>{html.escape(template.definition)}</td>"
                f"<td>{html.escape(rules)}</td>"
                "</tr>"
            )
        out.append("</table>")

    out.append("<h2>Charts</h2>")
    if charts:
        for chart in charts:
            out.append(f'<div class="chart">{chart_svg(chart)}</div>')
    else:
        out.append("<p>No charts.</p>")

    out.append("<h2>Yellow pages</h2>")
    if yellow_pages:
        out.append('<table id="yellow-pages">')
        out.append("<tr>" + "".join(f"<th>{label}</th>" for _key, label in _YP_COLUMNS) + "</tr>")
        for row in yellow_pages:
            out.append(
                "<tr>"
                + "".join(f"<td>{html.escape(row.get(key, ''))}</td>" for key, _label in _YP_COLUMNS)
                + "</tr>"
            )
        out.append("</table>")
    else:
        out.append("<p>No team members.</p>")

    out.append("<h2>Violations</h2>")
    if violations:
        out.append('<table id="violations">')
        out.append(
            "<tr><th>When</th><th>Rule</th><th>Category</th><th>Subject</th><th>Detail</th></tr>"
        )
        for violation in violations:
            out.append(
                "<tr>"
                f"<td>{html.escape(violation.occurred_at.isoformat())}</td>"
                f"<td>{html.escape(violation.rule_id)}</td>"
                f"<td>{html.escape(violation.category.value)}</td>"
                f"<td>{html.escape(violation.subject)}</td>"
                f"<td>{html.escape(violation.detail)}</td>"
                "</tr>"
            )
        out.append("</table>")
    else:
        out.append("<p>No violations.</p>")

    out.append("<h2>Flow map</h2>")
    if map_text:
        out.append(f'<pre class="map">{html.escape(map_text)}</pre>')
    else:
        out.append("<p>No map.</p>")

    out.append("</body>")
    out.append("</html>")
    return "\n".join(out) + "\n"
