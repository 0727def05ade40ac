"""Normalized communication events and the JSONL wire format.

One event is one observed communication fact: a call, a chat, a status
change at a workstation, a commit, a meeting, or a customer contact.
Whatever the raw source, adapters in :mod:`flowkit.ingest` normalize into
this shape so the analyzers never care where data came from.

Wire format: one JSON object per line, ISO-8601 UTC timestamps, field
names matching the dataclasses below. Manual observations (for example
customer contacts noted by an observer) are written straight in this
format; there is no adapter for them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from enum import Enum

from .model import parse_timestamp


class EventKind(Enum):
    CALL = "Call"
    CHAT = "Chat"
    STATUS_CHANGE = "StatusChange"
    COMMIT = "Commit"
    MEETING = "Meeting"
    CUSTOMER_CONTACT = "CustomerContact"
    MANUAL_OBSERVATION = "ManualObservation"


class SiteSpan(Enum):
    LOCAL = "Local"
    CROSS_SITE = "CrossSite"


_ENDLESS_KINDS = {EventKind.CHAT, EventKind.STATUS_CHANGE, EventKind.COMMIT}
_END_REQUIRED_KINDS = {EventKind.CALL, EventKind.MEETING}


@dataclass(frozen=True)
class ParsedStatus:
    story_id: int
    pair_names: tuple[str, str]


@dataclass(frozen=True)
class StatusPayload:
    workstation: str
    raw: str
    parsed: ParsedStatus | None = None


@dataclass(frozen=True)
class CommitPayload:
    author: str
    message: str
    story_id: int | None = None
    pair_names: tuple[str, str] | None = None
    completed_flag: bool = False


@dataclass(frozen=True)
class CallPayload:
    handles: tuple[str, ...] = ()
    unresolved: tuple[str, ...] = ()


@dataclass(frozen=True)
class MeetingPayload:
    name: str
    activity_id: str | None = None


@dataclass(frozen=True)
class NotePayload:
    note: str = ""


Payload = StatusPayload | CommitPayload | CallPayload | MeetingPayload | NotePayload | None


@dataclass(frozen=True)
class CommEvent:
    kind: EventKind
    start: datetime
    end: datetime | None = None
    participants: tuple[str, ...] = ()
    site_span: SiteSpan = SiteSpan.LOCAL
    medium_id: str | None = None
    story_id: int | None = None
    payload: Payload = None

    def __post_init__(self):
        if self.end is not None and self.end < self.start:
            raise ValueError(f"event ends before it starts: {self.start} > {self.end}")
        if self.kind in _END_REQUIRED_KINDS and self.end is None:
            raise ValueError(f"{self.kind.value} events need an end time")
        if self.kind in _ENDLESS_KINDS and self.end is not None:
            raise ValueError(f"{self.kind.value} events carry no end time")

    def duration_minutes(self) -> float | None:
        if self.end is None:
            return None
        return (self.end - self.start).total_seconds() / 60.0

    def date(self):
        return self.start.date()


def derive_site_span(participant_ids, person_sites: dict[str, str]) -> SiteSpan:
    """Cross-site when the resolved participants span more than one site."""
    sites = {person_sites[p] for p in participant_ids if p in person_sites}
    return SiteSpan.CROSS_SITE if len(sites) > 1 else SiteSpan.LOCAL


def _ts(value: datetime | None) -> str | None:
    return None if value is None else value.isoformat()


def _payload_dict(payload: Payload) -> dict | None:
    if payload is None:
        return None
    if isinstance(payload, StatusPayload):
        data: dict = {"workstation": payload.workstation, "raw": payload.raw}
        if payload.parsed is not None:
            data["parsed"] = {
                "story_id": payload.parsed.story_id,
                "pair_names": list(payload.parsed.pair_names),
            }
        return data
    if isinstance(payload, CommitPayload):
        return {
            "author": payload.author,
            "message": payload.message,
            "story_id": payload.story_id,
            "pair_names": list(payload.pair_names) if payload.pair_names else None,
            "completed_flag": payload.completed_flag,
        }
    if isinstance(payload, CallPayload):
        return {"handles": list(payload.handles), "unresolved": list(payload.unresolved)}
    if isinstance(payload, MeetingPayload):
        return {"name": payload.name, "activity_id": payload.activity_id}
    return {"note": payload.note}


def _payload_from(kind: EventKind, data: dict | None) -> Payload:
    if data is None:
        return None
    if kind is EventKind.STATUS_CHANGE:
        parsed = None
        if data.get("parsed") is not None:
            parsed = ParsedStatus(
                story_id=int(data["parsed"]["story_id"]),
                pair_names=(data["parsed"]["pair_names"][0], data["parsed"]["pair_names"][1]),
            )
        return StatusPayload(workstation=data["workstation"], raw=data["raw"], parsed=parsed)
    if kind is EventKind.COMMIT:
        names = data.get("pair_names")
        return CommitPayload(
            author=data.get("author", ""),
            message=data.get("message", ""),
            story_id=data.get("story_id"),
            pair_names=(names[0], names[1]) if names else None,
            completed_flag=bool(data.get("completed_flag", False)),
        )
    if kind in (EventKind.CALL, EventKind.CHAT):
        return CallPayload(
            handles=tuple(data.get("handles", [])),
            unresolved=tuple(data.get("unresolved", [])),
        )
    if kind is EventKind.MEETING:
        return MeetingPayload(name=data.get("name", ""), activity_id=data.get("activity_id"))
    return NotePayload(note=data.get("note", ""))


def event_to_dict(event: CommEvent) -> dict:
    return {
        "kind": event.kind.value,
        "start": _ts(event.start),
        "end": _ts(event.end),
        "participants": list(event.participants),
        "site_span": event.site_span.value,
        "medium_id": event.medium_id,
        "story_id": event.story_id,
        "payload": _payload_dict(event.payload),
    }


def event_from_dict(data: dict) -> CommEvent:
    kind = EventKind(data["kind"])
    return CommEvent(
        kind=kind,
        start=parse_timestamp(data["start"]),
        end=parse_timestamp(data["end"]) if data.get("end") else None,
        participants=tuple(data.get("participants", [])),
        site_span=SiteSpan(data.get("site_span", "Local")),
        medium_id=data.get("medium_id"),
        story_id=data.get("story_id"),
        payload=_payload_from(kind, data.get("payload")),
    )


def events_to_jsonl(events) -> str:
    return "".join(json.dumps(event_to_dict(e), sort_keys=True) + "\n" for e in events)


def events_from_jsonl(text: str) -> list[CommEvent]:
    events = []
    for line in text.splitlines():
        if line.strip():
            events.append(event_from_dict(json.loads(line)))
    return events


def merge_timeline(streams: list[list[CommEvent]]) -> list[CommEvent]:
    """All streams in one list, ordered by start time.

    Ties keep stream order first, then input order within a stream. Nothing
    is deduplicated; the output length is the sum of the input lengths.
    """
    decorated = []
    for stream_index, stream in enumerate(streams):
        for item_index, event in enumerate(stream):
            decorated.append((event.start, stream_index, item_index, event))
    decorated.sort(key=lambda entry: (entry[0], entry[1], entry[2]))
    return [entry[3] for entry in decorated]
