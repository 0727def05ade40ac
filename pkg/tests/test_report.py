from datetime import datetime, timedelta, timezone

import pytest

from flowkit.conformance import AnalysisConfig, analyze_status_update
from flowkit.events import CommEvent, EventKind, NotePayload, SiteSpan
from flowkit.report import (
    ChartKind,
    communication_timeline,
    compliance_chart,
    media_usage_duration,
    media_usage_frequency,
)

UTC = timezone.utc


def simple_event(kind, minute, duration=None, span=SiteSpan.LOCAL, medium=None):
    start = datetime(2010, 8, 23, 9, 0, tzinfo=UTC) + timedelta(minutes=minute)
    end = start + timedelta(minutes=duration) if duration is not None else None
    return CommEvent(kind=kind, start=start, end=end, site_span=span, medium_id=medium,
                     payload=NotePayload(note="x"))


def chart_points(chart):
    return dict(chart.series[0].points)


class TestFrequencyChart:
    def test_three_calls_two_chats(self):
        timeline = [simple_event(EventKind.CALL, m, duration=5) for m in (0, 10, 20)]
        timeline += [simple_event(EventKind.CHAT, m) for m in (5, 15)]
        points = chart_points(media_usage_frequency(timeline))
        assert points["Call"] == 3
        assert points["Chat"] == 2
        assert points["Commit"] == 0

    def test_empty_timeline_keeps_zero_bars(self):
        chart = media_usage_frequency([])
        points = chart_points(chart)
        assert set(points) == {k.value for k in EventKind}
        assert all(v == 0 for v in points.values())

    def test_total_equals_event_count(self, timeline, strategy):
        chart = media_usage_frequency(timeline, strategy.catalog)
        assert sum(v for _label, v in chart.series[0].points) == len(timeline)

    def test_fixture_tally(self, timeline, strategy):
        points = chart_points(media_usage_frequency(timeline, strategy.catalog))
        assert points["Call"] == 9
        assert points["Chat"] == 6
        assert points["StatusChange"] == 149
        assert points["Commit"] == 21
        assert points["HQ video conference"] == 11
        assert points["CustomerContact"] == 12
        assert points["Skype call"] == 3


class TestDurationChart:
    def test_single_hour_call_over_four_devs_five_days(self):
        timeline = [simple_event(EventKind.CALL, 0, duration=60)]
        points = chart_points(media_usage_duration(timeline, 4, 5))
        assert points == {"Call": 3.0}

    def test_chat_only_timeline_yields_empty_chart(self):
        timeline = [simple_event(EventKind.CHAT, m) for m in (0, 5)]
        chart = media_usage_duration(timeline, 4, 5)
        assert chart.series[0].points == ()

    def test_invalid_denominators_rejected(self):
        with pytest.raises(ValueError):
            media_usage_duration([], 0, 5)

    def test_reordering_is_invariant(self, timeline, strategy):
        forward = media_usage_duration(timeline, 8, 5, strategy.catalog)
        backward = media_usage_duration(list(reversed(timeline)), 8, 5, strategy.catalog)
        assert forward == backward

    def test_fixture_tally(self, timeline, strategy):
        points = chart_points(media_usage_duration(timeline, 8, 5, strategy.catalog))
        assert points["Call"] == 4.5  # 180 call minutes / (8 devs * 5 days)
        assert points["HQ video conference"] == 9.75  # 390 meeting minutes / 40
        assert points["CustomerContact"] == 4.5  # 12 local contacts, 15 min each
        assert points["Skype call"] == 1.12  # 3 cross-site contacts, 45 min total


class TestTimelineChart:
    def test_local_and_cross_site_styled_apart(self):
        timeline = [
            simple_event(EventKind.MEETING, 0, duration=30, span=SiteSpan.LOCAL),
            simple_event(EventKind.CALL, 60, duration=10, span=SiteSpan.CROSS_SITE),
        ]
        chart = communication_timeline(timeline)
        assert chart.kind is ChartKind.TIMELINE_GANTT
        elements = chart.series[0].points
        assert {e[3] for e in elements} == {"Local", "CrossSite"}

    def test_empty_days_keep_empty_rows(self):
        timeline = [
            simple_event(EventKind.CHAT, 0),
            CommEvent(
                kind=EventKind.CHAT,
                start=datetime(2010, 8, 25, 9, 0, tzinfo=UTC),
                payload=NotePayload(note="later"),
            ),
        ]
        chart = communication_timeline(timeline)
        assert [s.label for s in chart.series] == ["2010-08-23", "2010-08-24", "2010-08-25"]
        assert chart.series[1].points == ()

    def test_mark_styles_by_kind(self):
        timeline = [
            simple_event(EventKind.STATUS_CHANGE, 0),
            simple_event(EventKind.CHAT, 5),
            simple_event(EventKind.CALL, 10, duration=20),
        ]
        marks = {e[4]: e[2] for e in communication_timeline(timeline).series[0].points}
        assert marks == {"StatusChange": "point", "Chat": "instant", "Call": "range"}

    def test_element_count_equals_event_count(self, timeline):
        chart = communication_timeline(timeline)
        assert sum(len(s.points) for s in chart.series) == len(timeline)


class TestComplianceChart:
    def test_all_ok_day_stacks_to_100_0_0(self, team):
        from test_conformance import status_event

        config = AnalysisConfig(
            workday_start=datetime(2010, 8, 23, 9).time(),
            workday_end=datetime(2010, 8, 23, 11).time(),
            workstations=("ws1",),
        )
        timeline = [
            status_event(1, "09:05", "ws1", "US1: Anna & Ben"),
            status_event(1, "10:05", "ws1", "US1: Anna & Ben"),
        ]
        result, _ = analyze_status_update(timeline, team, config)
        chart = compliance_chart(result)
        day = chart.series[0].points[0][0]
        assert dict(chart.series[0].points)[day] == 100
        assert dict(chart.series[1].points)[day] == 0

    def test_stacks_sum_to_100_every_day(self, timeline, team, config):
        result, _ = analyze_status_update(timeline, team, config)
        chart = compliance_chart(result)
        days = [p[0] for p in chart.series[0].points]
        for day in days:
            total = sum(dict(s.points)[day] for s in chart.series)
            assert total == 100

    def test_fixture_day3_is_perfect_and_legend_shows_week(self, timeline, team, config):
        result, _ = analyze_status_update(timeline, team, config)
        chart = compliance_chart(result)
        assert dict(chart.series[0].points)["2010-08-25"] == 100
        meta = chart.meta_map()
        assert (meta["overall_ok"], meta["overall_temporal"], meta["overall_qualitative"]) == (
            "79",
            "8",
            "13",
        )
