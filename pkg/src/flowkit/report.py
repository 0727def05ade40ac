"""Aggregate the timeline and compliance results into chart models.

Chart models are renderer-independent data so the numbers can be tested
without pixel assertions; SVG emission lives in :mod:`flowkit.render`.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta
from enum import Enum

from .conformance import ComplianceResult, compliance
from .events import CommEvent, EventKind
from .strategy import Medium


class ChartKind(Enum):
    BAR_FREQUENCY = "BarFrequency"
    BAR_DURATION = "BarDuration"
    TIMELINE_GANTT = "TimelineGantt"
    STACKED_COMPLIANCE = "StackedCompliance"


@dataclass(frozen=True)
class Series:
    label: str
    points: tuple[tuple, ...]


@dataclass(frozen=True)
class ChartModel:
    kind: ChartKind
    title: str
    x_label: str
    y_label: str
    series: tuple[Series, ...]
    meta: tuple[tuple[str, str], ...] = ()

    def meta_map(self) -> dict[str, str]:
        return dict(self.meta)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "title": self.title,
            "x_label": self.x_label,
            "y_label": self.y_label,
            "series": [{"label": s.label, "points": [list(p) for p in s.points]} for s in self.series],
            "meta": dict(self.meta),
        }


def _group_label(event: CommEvent, medium_names: dict[str, str]) -> str:
    if event.medium_id is not None:
        return medium_names.get(event.medium_id, event.medium_id)
    return event.kind.value


def media_usage_frequency(
    timeline: list[CommEvent], catalog: tuple[Medium, ...] = ()
) -> ChartModel:
    """Event count per medium (when known) or event kind.

    Every event kind and every catalog medium gets a bar, zero-filled, so
    an absent kind is visibly absent. Bar total equals event count.
    """
    medium_names = {m.id: m.name for m in catalog}
    counts: dict[str, int] = {kind.value: 0 for kind in EventKind}
    for name in medium_names.values():
        counts.setdefault(name, 0)
    for event in timeline:
        label = _group_label(event, medium_names)
        counts[label] = counts.get(label, 0) + 1
    points = tuple((label, counts[label]) for label in sorted(counts))
    return ChartModel(
        kind=ChartKind.BAR_FREQUENCY,
        title="Frequency of media usage",
        x_label="medium / event kind",
        y_label="events",
        series=(Series(label="events", points=points),),
    )


def media_usage_duration(
    timeline: list[CommEvent],
    dev_count: int,
    day_count: int,
    catalog: tuple[Medium, ...] = (),
) -> ChartModel:
    """Minutes of communication per developer per day, per medium.

    Events without an end time carry no duration and are excluded, so a
    chat-only timeline yields an empty chart.
    """
    if dev_count <= 0 or day_count <= 0:
        raise ValueError("dev_count and day_count must be positive")
    medium_names = {m.id: m.name for m in catalog}
    minutes: dict[str, float] = {}
    for event in timeline:
        duration = event.duration_minutes()
        if duration is None:
            continue
        label = _group_label(event, medium_names)
        minutes[label] = minutes.get(label, 0.0) + duration
    scale = dev_count * day_count
    points = tuple((label, round(minutes[label] / scale, 2)) for label in sorted(minutes))
    return ChartModel(
        kind=ChartKind.BAR_DURATION,
        title="Durations of communication per developer per day",
        x_label="medium / event kind",
        y_label="minutes per developer per day",
        series=(Series(label="minutes", points=points),),
    )


_POINT_KINDS = {EventKind.STATUS_CHANGE, EventKind.COMMIT}


def communication_timeline(timeline: list[CommEvent]) -> ChartModel:
    """Gantt-style model: one series per day, one element per event.

    Element tuples are (start_minute, end_minute_or_None, mark, span, kind)
    where mark is "range" for events with duration, "point" for status
    changes and commits, and "instant" for the rest; span styles local
    events apart from cross-site ones. Days without events keep an empty
    row.
    """
    if timeline:
        dates = [e.start.date() for e in timeline]
        first, last = min(dates), max(dates)
        days = [first + timedelta(days=n) for n in range((last - first).days + 1)]
    else:
        days = []
    series = []
    for day in days:
        elements = []
        for event in timeline:
            if event.start.date() != day:
                continue
            start_minute = event.start.hour * 60 + event.start.minute
            if event.end is not None:
                mark = "range"
                end_minute = event.end.hour * 60 + event.end.minute
            else:
                mark = "point" if event.kind in _POINT_KINDS else "instant"
                end_minute = None
            elements.append(
                (start_minute, end_minute, mark, event.site_span.value, event.kind.value)
            )
        elements.sort(key=lambda e: (e[0], e[4]))
        series.append(Series(label=day.isoformat(), points=tuple(elements)))
    return ChartModel(
        kind=ChartKind.TIMELINE_GANTT,
        title="Communication overview",
        x_label="minute of day",
        y_label="day",
        series=tuple(series),
    )


def compliance_chart(result: ComplianceResult) -> ChartModel:
    """Per-day stacked OK/temporal/qualitative shares, each summing to 100."""
    ok_points = []
    temporal_points = []
    qualitative_points = []
    for day in result.per_day:
        pct = compliance(day.ok, day.temporal, day.qualitative)
        key = day.day.isoformat()
        ok_points.append((key, pct[0]))
        temporal_points.append((key, pct[1]))
        qualitative_points.append((key, pct[2]))
    return ChartModel(
        kind=ChartKind.STACKED_COMPLIANCE,
        title=f"Conformance of activity “{result.activity_id}”",
        x_label="day",
        y_label="% of opportunities",
        series=(
            Series(label="ok", points=tuple(ok_points)),
            Series(label="temporal", points=tuple(temporal_points)),
            Series(label="qualitative", points=tuple(qualitative_points)),
        ),
        meta=(
            ("overall_ok", str(result.compliance_pct)),
            ("overall_temporal", str(result.temporal_pct)),
            ("overall_qualitative", str(result.qualitative_pct)),
        ),
    )
