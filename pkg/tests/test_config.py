import datetime as dt

import pytest

from flowkit.config import ConfigError, load_analysis_config, load_strategy, load_team
from flowkit.conformance import Lookback
from flowkit.strategy import Cadence, EventKindTrigger, Scheduled, Scope


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadTeam:
    def test_bundled_team(self, team):
        assert len(team.sites) == 2
        assert len(team.persons) == 11
        assert len(team.pairs) == 4
        assert {d.id for d in team.documents} == {"trac", "svn"}
        assert team.common_language == "German"
        anna = team.person("anna")
        assert anna.yellow_pages.contact == (("skype-call", "anna.luh"),)

    def test_missing_site_key_is_config_error(self, tmp_path):
        path = write(tmp_path, "t.team", '[[persons]]\nid = "a"\n')
        with pytest.raises(ConfigError, match="missing required key"):
            load_team(path)

    def test_pair_needs_exactly_two_members(self, tmp_path):
        path = write(
            tmp_path,
            "t.team",
            '[[pairs]]\nid = "ws1"\nmembers = ["a"]\n',
        )
        with pytest.raises(ConfigError, match="exactly two members"):
            load_team(path)

    def test_unreadable_file_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_team(tmp_path / "missing.team")

    def test_bad_toml_is_config_error(self, tmp_path):
        path = write(tmp_path, "t.team", "[[sites]\nid=")
        with pytest.raises(ConfigError):
            load_team(path)


class TestLoadStrategy:
    def test_bundled_strategy(self, strategy):
        assert len(strategy.catalog) == 6
        assert len(strategy.activities) == 8
        assert len(strategy.assignments) == 8
        standup = strategy.activity("stand-up")
        assert isinstance(standup.trigger, Scheduled)
        assert standup.trigger.cadence is Cadence.EVERY_MORNING
        assert standup.trigger.time_of_day == dt.time(9, 0)
        assert standup.trigger.days == frozenset({1, 2, 3, 4, 5})
        assert standup.participants.scope is Scope.WHOLE_TEAM
        collab = strategy.activity("informal-collaboration")
        assert collab.trigger.event_kind is EventKindTrigger.AD_HOC

    def test_activity_needs_exactly_one_trigger(self, tmp_path):
        path = write(
            tmp_path,
            "s.strategy",
            '[[activities]]\nid = "a"\nparticipants = "pair"\n',
        )
        with pytest.raises(ConfigError, match="exactly one of"):
            load_strategy(path)

    def test_unknown_scope_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "s.strategy",
            '[[activities]]\nid = "a"\nparticipants = "everyone"\n'
            "[activities.event]\nkind = \"AdHoc\"\n",
        )
        with pytest.raises(ConfigError, match="unknown participant scope"):
            load_strategy(path)

    def test_custom_scope_from_id_list(self, tmp_path):
        path = write(
            tmp_path,
            "s.strategy",
            '[[activities]]\nid = "a"\nparticipants = ["anna", "ws3"]\n'
            "[activities.event]\nkind = \"AdHoc\"\n",
        )
        strategy = load_strategy(path)
        scope = strategy.activities[0].participants
        assert scope.scope is Scope.CUSTOM
        assert scope.ids == frozenset({"anna", "ws3"})

    def test_unknown_event_kind_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "s.strategy",
            '[[activities]]\nid = "a"\nparticipants = "pair"\n'
            "[activities.event]\nkind = \"FullMoon\"\n",
        )
        with pytest.raises(ConfigError, match="unknown event kind"):
            load_strategy(path)


class TestLoadAnalysisConfig:
    def test_bundled_config(self, config):
        assert config.workday_start == dt.time(9, 0)
        assert config.workday_end == dt.time(17, 0)
        assert config.slot_minutes == 60
        assert config.acceptance_lookback is Lookback.ANY_TIME_BEFORE
        assert config.project_days[0] == dt.date(2010, 8, 23)
        assert config.workstations == ("ws1", "ws2", "ws3", "ws4")

    def test_times_and_dates_accept_strings(self, tmp_path):
        path = write(
            tmp_path,
            "c.toml",
            'workday_start = "08:30"\nproject_days = ["2010-08-23"]\n',
        )
        loaded = load_analysis_config(path)
        assert loaded.workday_start == dt.time(8, 30)
        assert loaded.project_days == (dt.date(2010, 8, 23),)

    def test_bad_time_rejected(self, tmp_path):
        path = write(tmp_path, "c.toml", 'workday_start = "quarter past"\n')
        with pytest.raises(ConfigError, match="bad time"):
            load_analysis_config(path)

    def test_nonpositive_slot_rejected(self, tmp_path):
        path = write(tmp_path, "c.toml", "slot_minutes = 0\n")
        with pytest.raises(ConfigError):
            load_analysis_config(path)
