import pytest

from flowkit.builder import build_target_map
from flowkit.config import load_analysis_config, load_strategy, load_team
from flowkit.events import events_from_jsonl, merge_timeline
from flowkit.fixtures import (
    xpweek_config_path,
    xpweek_log_paths,
    xpweek_strategy_path,
    xpweek_team_path,
)
from flowkit.ingest import parse_call_log, parse_status_log, parse_vcs_log


@pytest.fixture(scope="session")
def team():
    return load_team(xpweek_team_path())


@pytest.fixture(scope="session")
def strategy():
    return load_strategy(xpweek_strategy_path())


@pytest.fixture(scope="session")
def config():
    return load_analysis_config(xpweek_config_path())


@pytest.fixture(scope="session")
def raw_logs():
    paths = xpweek_log_paths()
    return {name: path.read_text(encoding="utf-8") for name, path in paths.items()}


@pytest.fixture(scope="session")
def parsed_streams(team, raw_logs):
    status_events, status_errors = parse_status_log(raw_logs["status"].splitlines(), team=team)
    vcs_events, vcs_errors = parse_vcs_log(raw_logs["vcs"].splitlines(), team=team)
    call_events, call_errors = parse_call_log(raw_logs["calls"].splitlines(), team=team)
    observed = events_from_jsonl(raw_logs["observed"])
    return {
        "status": (status_events, status_errors),
        "vcs": (vcs_events, vcs_errors),
        "calls": (call_events, call_errors),
        "observed": (observed, []),
    }


@pytest.fixture(scope="session")
def timeline(parsed_streams):
    return merge_timeline([
        parsed_streams["status"][0],
        parsed_streams["vcs"][0],
        parsed_streams["calls"][0],
        parsed_streams["observed"][0],
    ])


@pytest.fixture(scope="session")
def target_map(team, strategy):
    return build_target_map(team, strategy)
