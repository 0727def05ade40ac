"""Adapters turning raw tool logs into normalized events.

Three raw formats are supported (documented with byte-exact samples in
``docs/formats.md``):

* status log — one line per status change:
  ``<ISO timestamp> <workstation> "<status message>"``
* version-control log — one tab-separated record per commit:
  ``<ISO timestamp>\\t<author>\\t<message>`` where conforming messages
  follow ``US<digits>|<name>,<name>|[done] <text>`` (the ``[done]`` marker
  is optional and flags story completion)
* call/chat export — CSV ``start,end,handles`` with handles separated by
  ``;``; a record with an end time is a call, without one a chat

No line is dropped silently: every non-blank input line becomes either an
event or a reported error. Unknown call handles keep their event and are
reported as warnings with the participant left unresolved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .builder import TeamSpec
from .events import (
    CallPayload,
    CommEvent,
    CommitPayload,
    EventKind,
    ParsedStatus,
    StatusPayload,
    derive_site_span,
)
from .model import parse_timestamp


@dataclass(frozen=True)
class ParseIssue:
    """A reported parsing problem. ``severity`` "error" means the line
    produced no event; "warning" means the event was kept but degraded."""

    source: str
    line_no: int
    message: str
    severity: str = "error"


STATUS_LINE_RE = re.compile(r'^\s*(\S+)\s+(\S+)\s+"(.*)"\s*$')
STATUS_GRAMMAR_RE = re.compile(r"^\s*[Uu][Ss](\d+)\s*:\s*([^&]+?)\s*&\s*([^&]+?)\s*$")
COMMIT_TEMPLATE_RE = re.compile(r"^[Uu][Ss](\d+)\|([^,|]+),([^,|]+)\|(\[done\])?\s*(.*)$")


def parse_status_message(raw: str) -> ParsedStatus | None:
    """Apply the status grammar ``US<digits>: <name> & <name>``."""
    match = STATUS_GRAMMAR_RE.match(raw)
    if not match:
        return None
    return ParsedStatus(
        story_id=int(match.group(1)),
        pair_names=(match.group(2), match.group(3)),
    )


def _person_sites(team: TeamSpec | None) -> dict[str, str]:
    if team is None:
        return {}
    return {p.id: p.site_id for p in team.persons}


def _ids_by_name(team: TeamSpec | None) -> dict[str, str]:
    if team is None:
        return {}
    index: dict[str, str] = {}
    for person in team.persons:
        index[person.name.casefold()] = person.id
        index[person.id.casefold()] = person.id
    return index


def parse_status_log(
    raw_lines, source: str = "status.log", team: TeamSpec | None = None
) -> tuple[list[CommEvent], list[ParseIssue]]:
    """Status-change events, one per non-blank line.

    Lines that do not even look like a status record are errors; records
    whose message merely fails the status grammar keep their event with
    ``parsed`` absent, so incomplete statuses stay visible to analysis.
    """
    events: list[CommEvent] = []
    issues: list[ParseIssue] = []
    names = _ids_by_name(team)
    sites = _person_sites(team)
    for line_no, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        match = STATUS_LINE_RE.match(line)
        if not match:
            issues.append(ParseIssue(source, line_no, f"malformed status line: {line.strip()!r}"))
            continue
        stamp, workstation, message = match.groups()
        try:
            start = parse_timestamp(stamp)
        except ValueError:
            issues.append(ParseIssue(source, line_no, f"bad timestamp {stamp!r}"))
            continue
        parsed = parse_status_message(message)
        participants: tuple[str, ...] = ()
        if parsed is not None and team is not None:
            resolved = [names.get(n.casefold()) for n in parsed.pair_names]
            participants = tuple(sorted(r for r in resolved if r is not None))
        events.append(
            CommEvent(
                kind=EventKind.STATUS_CHANGE,
                start=start,
                participants=participants,
                site_span=derive_site_span(participants, sites),
                story_id=parsed.story_id if parsed else None,
                payload=StatusPayload(workstation=workstation, raw=message, parsed=parsed),
            )
        )
    return events, issues


def parse_vcs_log(
    raw_lines, source: str = "commits.log", team: TeamSpec | None = None
) -> tuple[list[CommEvent], list[ParseIssue]]:
    """Commit events from a tab-separated version-control export.

    A record whose message does not follow the commit template still yields
    an event (nothing parsed, not completed); only structurally broken
    records are errors.
    """
    events: list[CommEvent] = []
    issues: list[ParseIssue] = []
    names = _ids_by_name(team)
    sites = _person_sites(team)
    for line_no, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3:
            issues.append(
                ParseIssue(source, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
            )
            continue
        stamp, author, message = parts
        try:
            start = parse_timestamp(stamp)
        except ValueError:
            issues.append(ParseIssue(source, line_no, f"bad timestamp {stamp!r}"))
            continue
        match = COMMIT_TEMPLATE_RE.match(message)
        story_id = None
        pair_names = None
        completed = False
        participants: tuple[str, ...] = ()
        if match:
            story_id = int(match.group(1))
            pair_names = (match.group(2).strip(), match.group(3).strip())
            completed = match.group(4) is not None
            if team is not None:
                resolved = [names.get(n.casefold()) for n in pair_names]
                participants = tuple(sorted(r for r in resolved if r is not None))
        events.append(
            CommEvent(
                kind=EventKind.COMMIT,
                start=start,
                participants=participants,
                site_span=derive_site_span(participants, sites),
                story_id=story_id,
                payload=CommitPayload(
                    author=author,
                    message=message,
                    story_id=story_id,
                    pair_names=pair_names,
                    completed_flag=completed,
                ),
            )
        )
    return events, issues


def _handle_index(team: TeamSpec | None) -> dict[str, str]:
    """Map every yellow-pages contact address to its person id."""
    if team is None:
        return {}
    index: dict[str, str] = {}
    for person in team.persons:
        for _channel, address in person.yellow_pages.contact:
            index[address.casefold()] = person.id
    return index


def parse_call_log(
    raw_lines,
    source: str = "calls.csv",
    team: TeamSpec | None = None,
    call_medium_id: str | None = None,
    chat_medium_id: str | None = None,
    chat_burst_minutes: int | None = None,
) -> tuple[list[CommEvent], list[ParseIssue]]:
    """Call and chat events from the CSV export.

    ``chat_burst_minutes``, when set, collapses consecutive chat records
    between the same handles into one event if the gap stays within the
    window. Off by default so that the line-accounting invariant
    (lines == events + errors) holds.
    """
    events: list[CommEvent] = []
    issues: list[ParseIssue] = []
    handles_index = _handle_index(team)
    sites = _person_sites(team)
    for line_no, line in enumerate(raw_lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.rstrip("\n").split(",")]
        if len(parts) != 3:
            issues.append(
                ParseIssue(source, line_no, f"expected 3 comma-separated fields, got {len(parts)}")
            )
            continue
        start_raw, end_raw, handle_field = parts
        try:
            start = parse_timestamp(start_raw)
            end = parse_timestamp(end_raw) if end_raw else None
        except ValueError as exc:
            issues.append(ParseIssue(source, line_no, f"bad timestamp: {exc}"))
            continue
        handles = tuple(h.strip() for h in handle_field.split(";") if h.strip())
        resolved: list[str] = []
        unresolved: list[str] = []
        for handle in handles:
            person_id = handles_index.get(handle.casefold())
            if person_id is None:
                unresolved.append(handle)
            else:
                resolved.append(person_id)
        if unresolved and team is not None:
            issues.append(
                ParseIssue(
                    source,
                    line_no,
                    f"unknown handles {unresolved!r}; participants left unresolved",
                    severity="warning",
                )
            )
        participants = tuple(sorted(resolved))
        kind = EventKind.CALL if end is not None else EventKind.CHAT
        events.append(
            CommEvent(
                kind=kind,
                start=start,
                end=end,
                participants=participants,
                site_span=derive_site_span(participants, sites),
                medium_id=call_medium_id if kind is EventKind.CALL else chat_medium_id,
                payload=CallPayload(handles=handles, unresolved=tuple(unresolved)),
            )
        )
    if chat_burst_minutes:
        events = collapse_chat_bursts(events, chat_burst_minutes)
    return events, issues


def collapse_chat_bursts(events: list[CommEvent], window_minutes: int) -> list[CommEvent]:
    """Merge chat bursts: consecutive chats between identical handles chain
    into one event as long as each gap stays within the window."""
    merged: list[CommEvent] = []
    burst_last_start = None
    for event in events:
        if (
            merged
            and event.kind is EventKind.CHAT
            and merged[-1].kind is EventKind.CHAT
            and burst_last_start is not None
            and isinstance(event.payload, CallPayload)
            and isinstance(merged[-1].payload, CallPayload)
            and set(event.payload.handles) == set(merged[-1].payload.handles)
            and (event.start - burst_last_start).total_seconds() <= window_minutes * 60
        ):
            burst_last_start = event.start
            continue
        merged.append(event)
        burst_last_start = event.start if event.kind is EventKind.CHAT else None
    return merged
