"""Conformance analysis: check a timeline against the declared strategy.

Three analyzers cover the monitored activities:

* status updates — every workstation should carry a fresh, complete status
  during work hours. Opportunities are (workstation x hourly slot) cells;
  a slot is temporal when the latest status is older than the staleness
  limit at slot end or when one developer is named in two concurrent pair
  statuses, qualitative when the latest status fails the grammar, OK
  otherwise. Temporal findings take precedence over qualitative ones.
* story acceptance — every commit marked completed needs a customer
  contact about that story (or involving the committing pair) beforehand;
  contact only afterwards is temporal, no contact at all is qualitative.
* scheduled activities — the schedule expands into expected occurrences;
  a meeting on the previous or next day is temporal, none within the
  tolerance window is qualitative.

Every analyzer partitions its opportunities into OK/temporal/qualitative,
so the three percentages always reconcile to exactly 100.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date, datetime, time, timedelta, timezone
from enum import Enum
from fractions import Fraction

from .events import CommEvent, EventKind, StatusPayload
from .model import FlowMap, MapKind, Person, WorkItemRef
from .strategy import CommunicationStrategy, Scheduled


class Category(Enum):
    TEMPORAL = "Temporal"
    QUALITATIVE = "Qualitative"


class Lookback(Enum):
    SAME_DAY = "SameDay"
    ANY_TIME_BEFORE = "AnyTimeBefore"


@dataclass(frozen=True)
class ViolationRule:
    id: str
    category: Category
    description: str


@dataclass(frozen=True)
class ConformanceTemplate:
    activity_id: str
    goal: str
    definition: str
    collected_data: tuple[EventKind, ...]
    rules: tuple[ViolationRule, ...]


@dataclass(frozen=True)
class ViolationRecord:
    """One detected violation. ``evidence`` holds indices into the merged
    timeline; absence violations have no evidence and point at the expected
    slot through ``occurred_at`` and ``subject`` instead."""

    rule_id: str
    category: Category
    occurred_at: datetime
    subject: str
    evidence: tuple[int, ...] = ()
    detail: str = ""


@dataclass(frozen=True)
class DayCount:
    day: date
    ok: int = 0
    temporal: int = 0
    qualitative: int = 0

    @property
    def total(self) -> int:
        return self.ok + self.temporal + self.qualitative


@dataclass(frozen=True)
class ComplianceResult:
    activity_id: str
    per_day: tuple[DayCount, ...]
    ok: int
    temporal: int
    qualitative: int
    compliance_pct: int
    temporal_pct: int
    qualitative_pct: int
    vacuous: bool = False

    @classmethod
    def from_day_counts(cls, activity_id: str, day_counts: list[DayCount]) -> "ComplianceResult":
        ok = sum(d.ok for d in day_counts)
        temporal = sum(d.temporal for d in day_counts)
        qualitative = sum(d.qualitative for d in day_counts)
        pct = compliance(ok, temporal, qualitative)
        return cls(
            activity_id=activity_id,
            per_day=tuple(sorted(day_counts, key=lambda d: d.day)),
            ok=ok,
            temporal=temporal,
            qualitative=qualitative,
            compliance_pct=pct[0],
            temporal_pct=pct[1],
            qualitative_pct=pct[2],
            vacuous=(ok + temporal + qualitative) == 0,
        )


class NoWorkHoursConfigured(ValueError):
    """The work-hours window is empty; status slots cannot be formed."""


@dataclass(frozen=True)
class AnalysisConfig:
    """Tunables for the analyzers.

    ``project_days`` fixes the analysis days (day 1 first); when empty the
    days are derived as the closed date range spanned by the timeline.
    ``workstations`` fixes the status-update denominator; when empty the
    workstations seen in the status log are used.
    """

    workday_start: time = time(9, 0)
    workday_end: time = time(17, 0)
    slot_minutes: int = 60
    staleness_limit_minutes: int = 60
    acceptance_lookback: Lookback = Lookback.ANY_TIME_BEFORE
    schedule_tolerance_days: int = 1
    project_days: tuple[date, ...] = ()
    workstations: tuple[str, ...] = ()

    def __post_init__(self):
        if self.slot_minutes <= 0:
            raise ValueError("slot_minutes must be positive")
        if self.staleness_limit_minutes <= 0:
            raise ValueError("staleness_limit_minutes must be positive")
        if self.schedule_tolerance_days < 0:
            raise ValueError("schedule_tolerance_days must be >= 0")


def compliance(ok: int, temporal: int, qualitative: int) -> tuple[int, int, int]:
    """Integer percentages (OK, temporal, qualitative) summing to 100.

    Each share is rounded half-up; any off-by-one against 100 is settled by
    the largest-remainder rule (bump the best near-miss, or take back the
    least deserved round-up). All-zero counts report a vacuous (100, 0, 0).
    """
    counts = (ok, temporal, qualitative)
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    total = sum(counts)
    if total == 0:
        return (100, 0, 0)
    shares = [Fraction(100 * c, total) for c in counts]
    rounded = [int(s + Fraction(1, 2)) for s in shares]  # half-up
    remainders = [s - int(s) for s in shares]
    diff = 100 - sum(rounded)
    while diff > 0:
        candidates = [i for i in range(3) if remainders[i] < Fraction(1, 2)]
        pick = max(candidates, key=lambda i: (remainders[i], -i))
        rounded[pick] += 1
        remainders[pick] = Fraction(-1)
        diff -= 1
    while diff < 0:
        candidates = [i for i in range(3) if remainders[i] >= Fraction(1, 2) and rounded[i] > 0]
        pick = min(candidates, key=lambda i: (remainders[i], -i))
        rounded[pick] -= 1
        remainders[pick] = Fraction(2)
        diff += 1
    return (rounded[0], rounded[1], rounded[2])


# --- shared helpers ------------------------------------------------------


def _as_utc(day: date, clock: time) -> datetime:
    return datetime.combine(day, clock, tzinfo=timezone.utc)


def project_days(config: AnalysisConfig, timeline: list[CommEvent]) -> list[date]:
    if config.project_days:
        return list(config.project_days)
    if not timeline:
        return []
    dates = [e.start.date() for e in timeline]
    first, last = min(dates), max(dates)
    return [first + timedelta(days=n) for n in range((last - first).days + 1)]


def slot_ends(config: AnalysisConfig) -> list[time]:
    if config.workday_start >= config.workday_end:
        raise NoWorkHoursConfigured(
            f"work hours {config.workday_start}..{config.workday_end} are empty"
        )
    ends: list[time] = []
    cursor = datetime.combine(date(2000, 1, 3), config.workday_start)
    end_of_day = datetime.combine(date(2000, 1, 3), config.workday_end)
    step = timedelta(minutes=config.slot_minutes)
    while cursor + step <= end_of_day:
        cursor += step
        ends.append(cursor.time())
    return ends


# --- status updates -------------------------------------------------------


def analyze_status_update(
    timeline: list[CommEvent],
    team,
    config: AnalysisConfig,
) -> tuple[ComplianceResult, list[ViolationRecord]]:
    """Slot-by-slot status freshness and completeness per workstation."""
    ends = slot_ends(config)
    statuses: dict[str, list[tuple[datetime, int, StatusPayload]]] = {}
    for index, event in enumerate(timeline):
        if event.kind is EventKind.STATUS_CHANGE and isinstance(event.payload, StatusPayload):
            statuses.setdefault(event.payload.workstation, []).append(
                (event.start, index, event.payload)
            )
    for entries in statuses.values():
        entries.sort(key=lambda entry: (entry[0], entry[1]))

    workstations = list(config.workstations) or sorted(statuses)
    days = project_days(config, timeline)
    staleness = timedelta(minutes=config.staleness_limit_minutes)

    violations: list[ViolationRecord] = []
    day_counts: list[DayCount] = []
    for day in days:
        ok = temporal = qualitative = 0
        for clock in ends:
            slot_end = _as_utc(day, clock)
            latest: dict[str, tuple[datetime, int, StatusPayload] | None] = {}
            for ws in workstations:
                current = None
                for entry in statuses.get(ws, []):
                    if entry[0] <= slot_end:
                        current = entry
                    else:
                        break
                latest[ws] = current
            claims: dict[str, list[str]] = {}
            for ws in workstations:
                entry = latest[ws]
                if entry and entry[2].parsed:
                    for name in entry[2].parsed.pair_names:
                        claims.setdefault(name.casefold(), []).append(ws)
            for ws in workstations:
                entry = latest[ws]
                if entry is None or slot_end - entry[0] > staleness:
                    temporal += 1
                    violations.append(
                        ViolationRecord(
                            rule_id="status-stale",
                            category=Category.TEMPORAL,
                            occurred_at=slot_end,
                            subject=ws,
                            evidence=(entry[1],) if entry else (),
                            detail="no status inside the staleness limit",
                        )
                    )
                    continue
                conflicted = False
                if entry[2].parsed:
                    for name in entry[2].parsed.pair_names:
                        claimants = claims.get(name.casefold(), [])
                        if len(set(claimants)) > 1:
                            other = next(w for w in claimants if w != ws)
                            other_entry = latest[other]
                            temporal += 1
                            violations.append(
                                ViolationRecord(
                                    rule_id="status-double-pairing",
                                    category=Category.TEMPORAL,
                                    occurred_at=slot_end,
                                    subject=ws,
                                    evidence=tuple(
                                        sorted(
                                            {entry[1]}
                                            | ({other_entry[1]} if other_entry else set())
                                        )
                                    ),
                                    detail=f"{name} also appears on {other}",
                                )
                            )
                            conflicted = True
                            break
                if conflicted:
                    continue
                if entry[2].parsed is None:
                    qualitative += 1
                    violations.append(
                        ViolationRecord(
                            rule_id="status-incomplete",
                            category=Category.QUALITATIVE,
                            occurred_at=slot_end,
                            subject=ws,
                            evidence=(entry[1],),
                            detail=f"status {entry[2].raw!r} lacks story id or pair names",
                        )
                    )
                    continue
                ok += 1
        day_counts.append(DayCount(day=day, ok=ok, temporal=temporal, qualitative=qualitative))

    return ComplianceResult.from_day_counts("status-update", day_counts), violations


# --- story acceptance -------------------------------------------------


def analyze_acceptance(
    timeline: list[CommEvent],
    config: AnalysisConfig,
) -> tuple[ComplianceResult, list[ViolationRecord]]:
    """Completed commits vs customer contacts.

    A contact is relevant to a commit when it names the same story or
    shares a participant with the committing pair.
    """
    commits = [
        (i, e)
        for i, e in enumerate(timeline)
        if e.kind is EventKind.COMMIT
        and getattr(e.payload, "completed_flag", False)
    ]
    contacts = [(i, e) for i, e in enumerate(timeline) if e.kind is EventKind.CUSTOMER_CONTACT]

    buckets: dict[date, list[int]] = {}
    violations: list[ViolationRecord] = []
    for commit_index, commit in commits:
        relevant = []
        for contact_index, contact in contacts:
            story_match = contact.story_id is not None and contact.story_id == commit.story_id
            pair_match = bool(set(contact.participants) & set(commit.participants))
            if story_match or pair_match:
                relevant.append((contact_index, contact))
        subject = f"US{commit.story_id}" if commit.story_id is not None else "commit"
        counts = buckets.setdefault(commit.date(), [0, 0, 0])
        if not relevant:
            counts[2] += 1
            violations.append(
                ViolationRecord(
                    rule_id="acceptance-missing",
                    category=Category.QUALITATIVE,
                    occurred_at=commit.start,
                    subject=subject,
                    evidence=(commit_index,),
                    detail="no customer contact for this story at all",
                )
            )
            continue
        if config.acceptance_lookback is Lookback.SAME_DAY:
            before = [c for c in relevant if c[1].start.date() == commit.date() and c[1].start <= commit.start]
        else:
            before = [c for c in relevant if c[1].start <= commit.start]
        if before:
            counts[0] += 1
            continue
        counts[1] += 1
        earliest_after = min(relevant, key=lambda c: (c[1].start, c[0]))
        violations.append(
            ViolationRecord(
                rule_id="acceptance-late",
                category=Category.TEMPORAL,
                occurred_at=commit.start,
                subject=subject,
                evidence=(commit_index, earliest_after[0]),
                detail="customer contact happened only after the commit",
            )
        )

    day_counts = [
        DayCount(day=d, ok=c[0], temporal=c[1], qualitative=c[2])
        for d, c in sorted(buckets.items())
    ]
    return ComplianceResult.from_day_counts("story-acceptance", day_counts), violations


# --- scheduled activities ----------------------------------------------


def analyze_scheduled(
    timeline: list[CommEvent],
    strategy: CommunicationStrategy,
    config: AnalysisConfig,
) -> tuple[ComplianceResult, list[ViolationRecord]]:
    """Expected schedule occurrences vs observed meetings.

    Each expectation grabs the nearest unmatched meeting of its activity,
    preferring the same day, then the previous, then the next one.
    A one-day miss is temporal; nothing within tolerance is qualitative.
    """
    days = project_days(config, timeline)
    first_day = days[0] if days else None

    def date_for(day_number: int) -> date | None:
        if 1 <= day_number <= len(days):
            return days[day_number - 1]
        if first_day is not None:
            return first_day + timedelta(days=day_number - 1)
        return None

    expected: list[tuple[date, time, object]] = []
    for activity in sorted(strategy.activities, key=lambda a: a.id):
        trigger = activity.trigger
        if not isinstance(trigger, Scheduled):
            continue
        for day_number in sorted(trigger.days):
            expected_date = date_for(day_number)
            if expected_date is not None:
                expected.append((expected_date, trigger.time_of_day, activity))
    expected.sort(key=lambda item: (item[0], item[1], item[2].id))

    meetings: dict[str, list[tuple[int, CommEvent]]] = {}
    for index, event in enumerate(timeline):
        if event.kind is not EventKind.MEETING:
            continue
        payload = event.payload
        for activity in strategy.activities:
            if getattr(payload, "activity_id", None) == activity.id or (
                getattr(payload, "activity_id", None) is None
                and getattr(payload, "name", "").casefold() == activity.name.casefold()
            ):
                meetings.setdefault(activity.id, []).append((index, event))
                break

    matched: set[int] = set()
    buckets: dict[date, list[int]] = {}
    violations: list[ViolationRecord] = []
    tolerance = config.schedule_tolerance_days
    for expected_date, expected_clock, activity in expected:
        counts = buckets.setdefault(expected_date, [0, 0, 0])
        subject = f"{activity.id}:{expected_date.isoformat()}"
        candidates = []
        for index, event in meetings.get(activity.id, []):
            if index in matched:
                continue
            delta = (event.date() - expected_date).days
            if abs(delta) <= tolerance:
                candidates.append((index, event, delta))
        if not candidates:
            counts[2] += 1
            violations.append(
                ViolationRecord(
                    rule_id="schedule-missed",
                    category=Category.QUALITATIVE,
                    occurred_at=_as_utc(expected_date, expected_clock),
                    subject=subject,
                    detail=f"{activity.name} was not held within ±{tolerance} day(s)",
                )
            )
            continue
        index, event, delta = min(
            candidates,
            key=lambda c: (abs(c[2]), 0 if c[2] == 0 else (1 if c[2] < 0 else 2), c[1].start, c[0]),
        )
        matched.add(index)
        if delta == 0:
            counts[0] += 1
        else:
            counts[1] += 1
            when = "early (previous day)" if delta < 0 else "late (next day)"
            violations.append(
                ViolationRecord(
                    rule_id="schedule-off-by-day",
                    category=Category.TEMPORAL,
                    occurred_at=event.start,
                    subject=subject,
                    evidence=(index,),
                    detail=f"{activity.name} held too {when}",
                )
            )

    day_counts = [
        DayCount(day=d, ok=c[0], temporal=c[1], qualitative=c[2])
        for d, c in sorted(buckets.items())
    ]
    return ComplianceResult.from_day_counts("scheduled-activities", day_counts), violations


# --- current map update ----------------------------------------------------


def update_current_map(
    target_map: FlowMap, timeline: list[CommEvent], as_of: datetime
) -> FlowMap:
    """Replay status changes up to ``as_of`` onto the target map.

    The latest parsed status per workstation wins. Compositions are applied
    newest first; a status whose members are already claimed by a newer one
    is skipped, as are statuses naming unknown or cross-site people. Pair
    ids double as workstation names, which is how statuses find their pair
    store. Everything else is copied unchanged.
    """
    latest: dict[str, tuple[datetime, int, StatusPayload]] = {}
    for index, event in enumerate(timeline):
        if event.kind is not EventKind.STATUS_CHANGE or event.start > as_of:
            continue
        payload = event.payload
        if not isinstance(payload, StatusPayload) or payload.parsed is None:
            continue
        known = latest.get(payload.workstation)
        if known is None or (event.start, index) >= (known[0], known[1]):
            latest[payload.workstation] = (event.start, index, payload)

    persons_by_key: dict[str, Person] = {}
    for person in target_map.persons:
        persons_by_key[person.id.casefold()] = person
        persons_by_key[person.name.casefold()] = person
    pair_ids = {p.id for p in target_map.pairs}

    claimed: set[str] = set()
    compositions: dict[str, tuple[tuple[str, str], WorkItemRef, str]] = {}
    ordered = sorted(latest.items(), key=lambda item: (item[1][0], item[1][1]), reverse=True)
    for workstation, (_stamp, _index, payload) in ordered:
        parsed = payload.parsed
        if workstation not in pair_ids or parsed is None:
            continue
        first = persons_by_key.get(parsed.pair_names[0].casefold())
        second = persons_by_key.get(parsed.pair_names[1].casefold())
        if first is None or second is None:
            continue
        if first.id == second.id or first.site_id != second.site_id:
            continue
        if {first.id, second.id} & claimed:
            continue
        claimed |= {first.id, second.id}
        item = WorkItemRef(story_id=parsed.story_id, title=f"US{parsed.story_id}")
        compositions[workstation] = ((first.id, second.id), item, payload.raw)

    status_by_person: dict[str, tuple[str, WorkItemRef]] = {}
    for member_ids, item, raw in compositions.values():
        for member in member_ids:
            status_by_person[member] = (raw, item)

    new_pairs = tuple(
        replace(pair, member_ids=compositions[pair.id][0], current_work_item=compositions[pair.id][1])
        if pair.id in compositions
        else pair
        for pair in target_map.pairs
    )
    new_persons = tuple(
        replace(
            person,
            yellow_pages=replace(
                person.yellow_pages,
                status=status_by_person[person.id][0],
                current_work_item=status_by_person[person.id][1],
            ),
        )
        if person.id in status_by_person
        else person
        for person in target_map.persons
    )
    return replace(
        target_map,
        kind=MapKind.CURRENT,
        as_of=as_of,
        pairs=new_pairs,
        persons=new_persons,
    )


# --- bundled conformance templates ---------------------------------------


STATUS_UPDATE_TEMPLATE = ConformanceTemplate(
    activity_id="status-update",
    goal="Keep everyone aware of who is pairing on which story right now.",
    definition=(
        "Each pair workstation broadcasts a status of the form "
        "'US<id>: <name> & <name>' and refreshes it whenever pairing or "
        "story assignment changes, at least once per staleness window "
        "during work hours."
    ),
    collected_data=(EventKind.STATUS_CHANGE,),
    rules=(
        ViolationRule("status-stale", Category.TEMPORAL,
                      "status older than the staleness limit at slot end"),
        ViolationRule("status-double-pairing", Category.TEMPORAL,
                      "one developer named in two concurrent pair statuses"),
        ViolationRule("status-incomplete", Category.QUALITATIVE,
                      "status lacks the story id or the pair names"),
    ),
)

ACCEPTANCE_TEMPLATE = ConformanceTemplate(
    activity_id="story-acceptance",
    goal="Have the customer validate every story before it is called done.",
    definition=(
        "A commit marked completed must be preceded by a customer contact "
        "about that story or with the committing pair."
    ),
    collected_data=(EventKind.COMMIT, EventKind.CUSTOMER_CONTACT),
    rules=(
        ViolationRule("acceptance-late", Category.TEMPORAL,
                      "customer contact happened only after the completing commit"),
        ViolationRule("acceptance-missing", Category.QUALITATIVE,
                      "no customer contact for the completed story at all"),
    ),
)

SCHEDULE_TEMPLATE = ConformanceTemplate(
    activity_id="scheduled-activities",
    goal="Hold the recurring whole-team meetings as scheduled.",
    definition=(
        "Every scheduled occurrence of a recurring activity happens on its "
        "planned day; a day early or late is off-schedule."
    ),
    collected_data=(EventKind.MEETING,),
    rules=(
        ViolationRule("schedule-off-by-day", Category.TEMPORAL,
                      "activity held on the previous or next day"),
        ViolationRule("schedule-missed", Category.QUALITATIVE,
                      "activity not held at all within tolerance"),
    ),
)


# --- serialization helpers --------------------------------------------


def violation_to_dict(violation: ViolationRecord) -> dict:
    return {
        "rule_id": violation.rule_id,
        "category": violation.category.value,
        "occurred_at": violation.occurred_at.isoformat(),
        "subject": violation.subject,
        "evidence": list(violation.evidence),
        "detail": violation.detail,
    }


def result_to_dict(result: ComplianceResult) -> dict:
    return {
        "activity_id": result.activity_id,
        "per_day": [
            {
                "day": d.day.isoformat(),
                "ok": d.ok,
                "temporal": d.temporal,
                "qualitative": d.qualitative,
            }
            for d in result.per_day
        ],
        "ok": result.ok,
        "temporal": result.temporal,
        "qualitative": result.qualitative,
        "compliance_pct": result.compliance_pct,
        "temporal_pct": result.temporal_pct,
        "qualitative_pct": result.qualitative_pct,
        "vacuous": result.vacuous,
    }
