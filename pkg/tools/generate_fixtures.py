#!/usr/bin/env python3
"""Regenerate the bundled raw-log fixtures for the XP-week example.

The status log is driven by per-day slot grids (one letter per hourly
slot): O = fresh valid update, Q = fresh but incomplete update, T = no
update (goes stale), P = fresh update that names a developer already
named on another workstation. The grids are chosen so the week totals
come out at 126 OK / 13 temporal / 21 qualitative opportunities with a
perfect day 3.

Run from the repository root:

    PYTHONPATH=src python3 tools/generate_fixtures.py
"""

from __future__ import annotations

import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from flowkit.events import (  # noqa: E402
    CommEvent,
    EventKind,
    MeetingPayload,
    NotePayload,
    SiteSpan,
    events_to_jsonl,
)

DATA = Path(__file__).resolve().parent.parent / "src" / "flowkit" / "data" / "logs"

DAYS = ["2010-08-23", "2010-08-24", "2010-08-25", "2010-08-26", "2010-08-27"]
WORKSTATIONS = ["ws1", "ws2", "ws3", "ws4"]
PAIR_NAMES = {
    "ws1": ("Anna", "Ben"),
    "ws2": ("Clara", "David"),
    "ws3": ("Emma", "Felix"),
    "ws4": ("Greta", "Henrik"),
}
PAIR_IDS = {
    "ws1": ("anna", "ben"),
    "ws2": ("clara", "david"),
    "ws3": ("emma", "felix"),
    "ws4": ("greta", "henrik"),
}

# story shown in the status message, per workstation and day
STORY = {
    "ws1": [1, 4, 7, 9, 13],
    "ws2": [2, 5, 8, 11, 14],
    "ws3": [3, 6, 6, 12, 12],
    "ws4": [15, 15, 15, 15, 16],
}

# slot grids: 8 slots per day (09-17h), letters as described above
GRID = {
    0: {"ws1": "OOQOOTOO", "ws2": "OQOOTOOQ", "ws3": "QOOTOOOQ", "ws4": "OOTOQOOO"},
    1: {"ws1": "OOOOTOOO", "ws2": "OOQOOOOO", "ws3": "OQOOOOTO", "ws4": "OOOQOOQO"},
    2: {"ws1": "OOOOOOOO", "ws2": "OOOOOOOO", "ws3": "OOOOOOOO", "ws4": "OOOOOOOO"},
    3: {"ws1": "OOOOPOOO", "ws2": "OOQOPOOO", "ws3": "OOOTOOQO", "ws4": "OQOOOOOO"},
    4: {"ws1": "OQOTOQOQ", "ws2": "QOOOTOQO", "ws3": "OOQTOOOQ", "ws4": "OQOOTOOO"},
}

JUNK = [
    "pair switch pending",
    "US7: Anna",
    "Anna and Ben on build",
    "back after lunch",
    "US: Emma & Felix",
    "fixing CI",
]


def write_status_log() -> None:
    lines: list[str] = []
    junk_index = 0
    for day_index, day in enumerate(DAYS):
        for slot in range(8):
            stamp = f"{day}T{9 + slot:02d}:05:00"
            for ws in WORKSTATIONS:
                mark = GRID[day_index][ws][slot]
                if mark == "T":
                    continue
                if mark == "Q":
                    message = JUNK[junk_index % len(JUNK)]
                    junk_index += 1
                elif mark == "P":
                    partner = PAIR_NAMES[ws][1] if ws == "ws1" else PAIR_NAMES[ws][0]
                    message = f"US{STORY[ws][day_index]}: Anna & {partner}"
                else:
                    first, second = PAIR_NAMES[ws]
                    message = f"US{STORY[ws][day_index]}: {first} & {second}"
                lines.append(f'{stamp} {ws} "{message}"')
        if day_index == 2:
            lines.append(f'{day}T12:3 ws1 "US9: Anna & Ben"')  # malformed timestamp
    lines.append("workstation offline -- no quotes here")  # malformed line
    (DATA / "status.log").write_text("\n".join(lines) + "\n", encoding="utf-8")


COMMITS = [
    ("2010-08-23T09:20:00", "karl", "initial project skeleton"),
    ("2010-08-23T15:00:00", "anna", "US1|Anna,Ben|wip: parser started"),
    ("2010-08-23T16:10:00", "clara", "US2|Clara,David|wip: schema draft"),
    ("2010-08-24T11:30:00", "anna", "US1|Anna,Ben|[done] acceptance passed"),
    ("2010-08-24T14:00:00", "david", "US2|Clara,David|[done] reviewed with customer"),
    ("2010-08-24T16:20:00", "emma", "US3|Emma,Felix|[done] demo ok"),
    ("2010-08-25T10:45:00", "ben", "US4|Anna,Ben|[done] accepted"),
    ("2010-08-25T11:50:00", "clara", "US5|Clara,David|[done] accepted"),
    ("2010-08-25T14:30:00", "felix", "US6|Emma,Felix|[done] accepted"),
    ("2010-08-25T15:10:00", "david", "US8|Clara,David|wip: migration script"),
    ("2010-08-25T16:40:00", "anna", "US7|Anna,Ben|[done] accepted"),
    ("2010-08-26T09:50:00", "clara", "US8|Clara,David|[done] accepted"),
    ("2010-08-26T11:10:00", "ben", "US9|Anna,Ben|[done] accepted"),
    ("2010-08-26T13:35:00", "anna", "US10|Anna,Ben|[done] accepted"),
    ("2010-08-26T15:05:00", "david", "US11|Clara,David|[done] accepted"),
    ("2010-08-26T16:45:00", "emma", "US12|Emma,Felix|[done] accepted"),
    ("2010-08-26T16:55:00", "ben", "US13|Anna,Ben|wip: export started"),
    ("2010-08-27T09:40:00", "anna", "US13|Anna,Ben|[done] accepted"),
    ("2010-08-27T10:55:00", "clara", "US14|Clara,David|[done] accepted"),
    ("2010-08-27T11:20:00", "greta", "US15|Greta,Henrik|[done] accepted"),
    ("2010-08-27T12:10:00", "henrik", "US16|Greta,Henrik|[done] final feature"),
]


def write_commits_log() -> None:
    lines = [f"{stamp}\t{author}\t{message}" for stamp, author, message in COMMITS]
    lines.insert(10, "2010-08-25T12:00:00\tbroken-record")  # malformed: two fields
    (DATA / "commits.log").write_text("\n".join(lines) + "\n", encoding="utf-8")


CALLS = [
    ("2010-08-23T11:00:00", "2010-08-23T11:20:00", "anna.luh;emma.tuc"),
    ("2010-08-23T13:05:00", "", "ben.luh;felix.tuc"),
    ("2010-08-23T14:15:00", "2010-08-23T14:35:00", "clara.luh;greta.tuc"),
    ("2010-08-24T10:10:00", "2010-08-24T10:25:00", "anna.luh;emma.tuc"),
    ("2010-08-24T11:40:00", "", "david.luh;henrik.tuc"),
    ("2010-08-24T15:20:00", "", "anna.luh;emma.tuc"),
    ("2010-08-25T11:00:00", "2010-08-25T11:30:00", "ben.luh;felix.tuc"),
    ("2010-08-25T13:00:00", "2010-08-25T13:20:00", "karl.luh;lena.tuc"),
    ("2010-08-25T14:50:00", "", "clara.luh;greta.tuc"),
    ("2010-08-26T10:40:00", "2010-08-26T11:00:00", "anna.luh;emma.tuc"),
    ("2010-08-26T12:30:00", "", "greta.tuc;clara.luh"),
    ("2010-08-26T15:30:00", "2010-08-26T15:50:00", "david.luh;henrik.tuc"),
    ("2010-08-27T10:20:00", "2010-08-27T10:40:00", "emma.tuc;anna.luh"),
    ("2010-08-27T11:10:00", "", "felix.tuc;ben.luh"),
    ("2010-08-27T13:40:00", "2010-08-27T13:55:00", "unknown.handle;anna.luh"),
]


def write_calls_csv() -> None:
    lines = [",".join(record) for record in CALLS]
    lines.insert(9, "2010-08-26T12:00:00,not-a-time,anna.luh")  # malformed end stamp
    (DATA / "calls.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


TEAM_IDS = ["anna", "ben", "clara", "david", "emma", "felix", "greta", "henrik",
            "karl", "lena", "otto"]

MEETINGS = (
    [("stand-up", "Stand-up", d, "09:00:00", "09:15:00") for d in DAYS[:4]]
    + [("wrap-up", "Wrap-up", d, "16:30:00", "17:00:00") for d in DAYS]
    + [("planning-game", "Planning game", d, "10:00:00", "11:30:00") for d in (DAYS[0], DAYS[2])]
)

# (day, start clock, story id or None, participant ids, note)
CONTACTS = [
    (DAYS[1], "10:30:00", 1, ["otto", "anna", "ben"], "acceptance test US1"),
    (DAYS[1], "13:15:00", 2, ["otto", "clara", "david"], "acceptance test US2"),
    (DAYS[1], "15:40:00", 3, ["otto", "emma", "felix"], "acceptance test US3"),
    (DAYS[2], "10:00:00", 4, ["otto", "anna", "ben"], "acceptance test US4"),
    (DAYS[2], "11:10:00", 5, ["otto", "clara", "david"], "acceptance test US5"),
    (DAYS[2], "13:50:00", 6, ["otto", "emma", "felix"], "acceptance test US6"),
    (DAYS[2], "16:05:00", 7, ["otto", "anna", "ben"], "acceptance test US7"),
    (DAYS[3], "09:10:00", 8, ["otto", "clara", "david"], "acceptance test US8"),
    (DAYS[3], "10:30:00", 9, ["otto", "anna", "ben"], "acceptance test US9"),
    (DAYS[3], "13:00:00", 10, ["otto", "anna", "ben"], "acceptance test US10"),
    (DAYS[3], "14:30:00", 11, ["otto", "clara", "david"], "acceptance test US11"),
    (DAYS[3], "16:10:00", None, ["otto", "emma", "felix"], "customer walkthrough with pair"),
    (DAYS[4], "09:05:00", 13, ["otto", "anna", "ben"], "acceptance test US13"),
    (DAYS[4], "10:15:00", 14, ["otto", "clara", "david"], "acceptance test US14"),
    (DAYS[4], "14:00:00", 15, ["otto", "karl"], "late review of US15 with coordinator"),
]

TUC_IDS = {"emma", "felix", "greta", "henrik", "lena"}


def _utc(day: str, clock: str) -> datetime:
    return datetime.fromisoformat(f"{day}T{clock}").replace(tzinfo=timezone.utc)


def write_observed_jsonl() -> None:
    events: list[CommEvent] = []
    for activity_id, name, day, start, end in MEETINGS:
        events.append(
            CommEvent(
                kind=EventKind.MEETING,
                start=_utc(day, start),
                end=_utc(day, end),
                participants=tuple(sorted(TEAM_IDS)),
                site_span=SiteSpan.CROSS_SITE,
                medium_id="hq-video",
                payload=MeetingPayload(name=name, activity_id=activity_id),
            )
        )
    for day, clock, story, participants, note in CONTACTS:
        start = _utc(day, clock)
        cross = bool(set(participants) & TUC_IDS)
        events.append(
            CommEvent(
                kind=EventKind.CUSTOMER_CONTACT,
                start=start,
                end=start + timedelta(minutes=15),
                participants=tuple(sorted(participants)),
                site_span=SiteSpan.CROSS_SITE if cross else SiteSpan.LOCAL,
                medium_id="skype-call" if cross else None,
                story_id=story,
                payload=NotePayload(note=note),
            )
        )
    events.sort(key=lambda e: e.start)
    (DATA / "observed.jsonl").write_text(events_to_jsonl(events), encoding="utf-8")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    write_status_log()
    write_commits_log()
    write_calls_csv()
    write_observed_jsonl()
    for name in ("status.log", "commits.log", "calls.csv", "observed.jsonl"):
        path = DATA / name
        print(f"wrote {path} ({len(path.read_text().splitlines())} lines)")


if __name__ == "__main__":
    main()
