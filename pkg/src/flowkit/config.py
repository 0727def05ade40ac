"""Load team, strategy, and analysis settings from TOML project files.

One project keeps three human-edited files: a ``.team`` file (sites,
people, pairs, documents), a ``.strategy`` file (media catalog,
activities, assignments), and an optional analysis config. The bundled
``xpweek`` files under ``flowkit/data`` are the canonical examples;
``docs/formats.md`` documents every key.
"""

from __future__ import annotations

import datetime as dt
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .builder import DocumentSpec, TeamSpec
from .conformance import AnalysisConfig, Lookback
from .model import Person, PairStore, Site, SolidityCriteria, YellowPages
from .strategy import (
    Cadence,
    CommunicationActivity,
    CommunicationStrategy,
    EventDriven,
    EventKindTrigger,
    Medium,
    MediumAssignment,
    MonetaryCost,
    Participants,
    Scheduled,
    Scope,
    SetupCost,
)


class ConfigError(ValueError):
    """A project file is unreadable or structurally wrong."""


def _load_toml(path: str | Path) -> dict:
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"{where}: missing required key {key!r}")
    return table[key]


def _as_time(value, where: str) -> dt.time:
    if isinstance(value, dt.time):
        return value
    if isinstance(value, str):
        try:
            return dt.time.fromisoformat(value)
        except ValueError as exc:
            raise ConfigError(f"{where}: bad time {value!r}") from exc
    raise ConfigError(f"{where}: expected a time, got {type(value).__name__}")


def _as_date(value, where: str) -> dt.date:
    if isinstance(value, dt.datetime):
        return value.date()
    if isinstance(value, dt.date):
        return value
    if isinstance(value, str):
        try:
            return dt.date.fromisoformat(value)
        except ValueError as exc:
            raise ConfigError(f"{where}: bad date {value!r}") from exc
    raise ConfigError(f"{where}: expected a date, got {type(value).__name__}")


def _criteria(table: dict | None) -> SolidityCriteria:
    if not table:
        return SolidityCriteria(True, True, True)
    return SolidityCriteria(
        long_term_accessible=bool(table.get("long_term_accessible", True)),
        repeatably_accessible=bool(table.get("repeatably_accessible", True)),
        third_party_comprehensible=bool(table.get("third_party_comprehensible", True)),
    )


def load_team(path: str | Path) -> TeamSpec:
    data = _load_toml(path)
    where = str(path)

    sites = tuple(
        Site(
            id=_require(entry, "id", f"{where} [[sites]]"),
            name=entry.get("name", entry.get("id", "")),
            timezone_offset_minutes=int(entry.get("timezone_offset_minutes", 0)),
        )
        for entry in data.get("sites", [])
    )
    persons = []
    for entry in data.get("persons", []):
        pid = _require(entry, "id", f"{where} [[persons]]")
        persons.append(
            Person(
                id=pid,
                name=entry.get("name", pid),
                site_id=_require(entry, "site", f"{where} person {pid!r}"),
                roles=frozenset(entry.get("roles", [])),
                yellow_pages=YellowPages(
                    picture_ref=entry.get("picture"),
                    contact=tuple(sorted(entry.get("contact", {}).items())),
                    skills=tuple(entry.get("skills", [])),
                ),
            )
        )
    pairs = []
    for entry in data.get("pairs", []):
        pid = _require(entry, "id", f"{where} [[pairs]]")
        members = _require(entry, "members", f"{where} pair {pid!r}")
        if len(members) != 2:
            raise ConfigError(f"{where} pair {pid!r}: exactly two members expected")
        pairs.append(PairStore(id=pid, member_ids=(members[0], members[1])))
    documents = []
    for entry in data.get("documents", []):
        did = _require(entry, "id", f"{where} [[documents]]")
        documents.append(
            DocumentSpec(
                id=did,
                name=entry.get("name", did),
                responsible_site_id=_require(entry, "site", f"{where} document {did!r}"),
                criteria=_criteria(entry.get("criteria")),
                written_by=frozenset(entry.get("written_by", [])),
                read_by=frozenset(entry.get("read_by", [])),
            )
        )
    return TeamSpec(
        sites=sites,
        persons=tuple(persons),
        pairs=tuple(pairs),
        documents=tuple(documents),
        common_language=data.get("common_language", ""),
    )


_SCOPES = {
    "whole-team": Scope.WHOLE_TEAM,
    "pair": Scope.PAIR,
    "pair-plus-customer": Scope.PAIR_PLUS_CUSTOMER,
}


def _participants(value, where: str) -> Participants:
    if isinstance(value, str):
        scope = _SCOPES.get(value)
        if scope is None:
            raise ConfigError(f"{where}: unknown participant scope {value!r}")
        return Participants(scope=scope)
    if isinstance(value, list):
        return Participants(scope=Scope.CUSTOM, ids=frozenset(value))
    raise ConfigError(f"{where}: participants must be a scope name or a list of ids")


def _trigger(entry: dict, where: str):
    schedule = entry.get("schedule")
    event = entry.get("event")
    if (schedule is None) == (event is None):
        raise ConfigError(f"{where}: exactly one of [schedule] or [event] required")
    if schedule is not None:
        try:
            cadence = Cadence(schedule.get("cadence", "Custom"))
        except ValueError as exc:
            raise ConfigError(f"{where}: unknown cadence {schedule.get('cadence')!r}") from exc
        return Scheduled(
            cadence=cadence,
            time_of_day=_as_time(_require(schedule, "time", f"{where} schedule"), where),
            days=frozenset(int(d) for d in schedule.get("days", [])),
        )
    try:
        kind = EventKindTrigger(_require(event, "kind", f"{where} event"))
    except ValueError as exc:
        raise ConfigError(f"{where}: unknown event kind {event.get('kind')!r}") from exc
    return EventDriven(event_kind=kind)


def load_strategy(path: str | Path) -> CommunicationStrategy:
    data = _load_toml(path)
    where = str(path)

    media = []
    for entry in data.get("media", []):
        mid = _require(entry, "id", f"{where} [[media]]")
        try:
            setup = SetupCost(entry.get("setup_cost", "Low"))
            monetary = MonetaryCost(entry.get("monetary_cost", "Free"))
        except ValueError as exc:
            raise ConfigError(f"{where} medium {mid!r}: {exc}") from exc
        media.append(
            Medium(
                id=mid,
                name=entry.get("name", mid),
                richness_rank=int(_require(entry, "richness_rank", f"{where} medium {mid!r}")),
                requires_colocation=bool(entry.get("requires_colocation", False)),
                available_at=frozenset(entry.get("available_at", [])),
                extra_channels=frozenset(entry.get("channels", [])),
                setup_cost=setup,
                monetary_cost=monetary,
            )
        )

    activities = []
    for entry in data.get("activities", []):
        aid = _require(entry, "id", f"{where} [[activities]]")
        activities.append(
            CommunicationActivity(
                id=aid,
                name=entry.get("name", aid),
                goal=entry.get("goal", ""),
                trigger=_trigger(entry, f"{where} activity {aid!r}"),
                participants=_participants(
                    _require(entry, "participants", f"{where} activity {aid!r}"),
                    f"{where} activity {aid!r}",
                ),
                required_channels=frozenset(entry.get("required_channels", [])),
            )
        )

    assignments = []
    for entry in data.get("assignments", []):
        aid = _require(entry, "activity", f"{where} [[assignments]]")
        assignments.append(
            MediumAssignment(
                activity_id=aid,
                medium_id=_require(entry, "medium", f"{where} assignment {aid!r}"),
                added_channels=frozenset(entry.get("added_channels", [])),
            )
        )

    return CommunicationStrategy(
        activities=tuple(activities),
        assignments=tuple(assignments),
        catalog=tuple(media),
    )


def load_analysis_config(path: str | Path) -> AnalysisConfig:
    data = _load_toml(path)
    where = str(path)
    try:
        lookback = Lookback(data.get("acceptance_lookback", "AnyTimeBefore"))
    except ValueError as exc:
        raise ConfigError(f"{where}: unknown acceptance_lookback") from exc
    try:
        return AnalysisConfig(
            workday_start=_as_time(data.get("workday_start", "09:00"), where),
            workday_end=_as_time(data.get("workday_end", "17:00"), where),
            slot_minutes=int(data.get("slot_minutes", 60)),
            staleness_limit_minutes=int(data.get("staleness_limit_minutes", 60)),
            acceptance_lookback=lookback,
            schedule_tolerance_days=int(data.get("schedule_tolerance_days", 1)),
            project_days=tuple(_as_date(d, where) for d in data.get("project_days", [])),
            workstations=tuple(data.get("workstations", [])),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
