"""Accessors for the bundled example project (a one-week distributed XP run).

The files live in ``flowkit/data`` as package data: the team and strategy
declarations, the analysis config, and one week of raw logs. They double
as the canonical format examples and as the test fixtures.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    """Filesystem path of a bundled data file."""
    root = resources.files("flowkit") / "data"
    target = root.joinpath(*parts)
    return Path(str(target))


def xpweek_team_path() -> Path:
    return data_path("xpweek.team")


def xpweek_strategy_path() -> Path:
    return data_path("xpweek.strategy")


def xpweek_config_path() -> Path:
    return data_path("xpweek.toml")


def xpweek_log_paths() -> dict[str, Path]:
    return {
        "status": data_path("logs", "status.log"),
        "vcs": data_path("logs", "commits.log"),
        "calls": data_path("logs", "calls.csv"),
        "observed": data_path("logs", "observed.jsonl"),
    }
