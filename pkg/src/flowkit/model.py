"""Core domain model: sites, people, documents, information state, flows, maps.

Everything here is immutable value data. A map is never mutated in place;
derived maps (for example the current map built from observed events) are
constructed as new objects. ``validate_map`` returns issues as data instead
of raising, so callers can decide what is fatal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum

MIN_TZ_OFFSET_MINUTES = -840
MAX_TZ_OFFSET_MINUTES = 840


class InformationState(Enum):
    SOLID = "Solid"
    FLUID = "Fluid"


class FlowDirection(Enum):
    ONE_WAY = "OneWay"
    BOTH_WAYS = "BothWays"


class FlowStrength(Enum):
    WEAK = "Weak"
    REGULAR = "Regular"
    STRONG = "Strong"


class MapKind(Enum):
    OVERALL_TARGET = "OverallTarget"
    ACTIVITY_SPECIFIC = "ActivitySpecific"
    CURRENT = "Current"


@dataclass(frozen=True)
class Issue:
    """One violated invariant, reported as data.

    ``severity`` is "error" for broken invariants and "warning" for
    advisory findings (cost hints and similar).
    """

    code: str
    subject: str
    message: str
    severity: str = "error"


@dataclass(frozen=True)
class SolidityCriteria:
    long_term_accessible: bool
    repeatably_accessible: bool
    third_party_comprehensible: bool


def classify_state(criteria: SolidityCriteria) -> InformationState:
    """Solid only when all three criteria hold, fluid otherwise."""
    if (
        criteria.long_term_accessible
        and criteria.repeatably_accessible
        and criteria.third_party_comprehensible
    ):
        return InformationState.SOLID
    return InformationState.FLUID


@dataclass(frozen=True)
class Site:
    id: str
    name: str
    timezone_offset_minutes: int = 0


@dataclass(frozen=True)
class WorkItemRef:
    story_id: int
    title: str = ""


@dataclass(frozen=True)
class YellowPages:
    """Per-person awareness card shown next to the map.

    Contact keys are medium ids from the media catalog (for example
    ``skype-call``) mapping to the person's address on that medium.
    Local time is not stored: it derives from the person's site offset,
    see :func:`local_time_label`.
    """

    picture_ref: str | None = None
    contact: tuple[tuple[str, str], ...] = ()
    status: str | None = None
    skills: tuple[str, ...] = ()
    current_work_item: WorkItemRef | None = None

    def contact_map(self) -> dict[str, str]:
        return dict(self.contact)


def local_time_label(site: Site) -> str:
    """UTC-offset label for a site, e.g. ``UTC+02:00``."""
    minutes = site.timezone_offset_minutes
    sign = "+" if minutes >= 0 else "-"
    hours, rem = divmod(abs(minutes), 60)
    return f"UTC{sign}{hours:02d}:{rem:02d}"


@dataclass(frozen=True)
class Person:
    id: str
    name: str
    site_id: str
    roles: frozenset[str] = frozenset()
    yellow_pages: YellowPages = field(default_factory=YellowPages)


@dataclass(frozen=True)
class PairStore:
    """Two co-located pair programmers sharing one workstation.

    The id doubles as the workstation name used in status logs, which is
    how observed status changes are routed back onto the map.
    """

    id: str
    member_ids: tuple[str, str]
    current_work_item: WorkItemRef | None = None


@dataclass(frozen=True)
class Document:
    id: str
    name: str
    responsible_site_id: str
    criteria: SolidityCriteria = SolidityCriteria(True, True, True)


@dataclass(frozen=True)
class Flow:
    from_id: str
    to_id: str
    state: InformationState
    direction: FlowDirection = FlowDirection.BOTH_WAYS
    strength: FlowStrength = FlowStrength.REGULAR
    medium_id: str | None = None
    label: str | None = None


@dataclass(frozen=True)
class FlowMap:
    kind: MapKind
    sites: tuple[Site, ...] = ()
    persons: tuple[Person, ...] = ()
    pairs: tuple[PairStore, ...] = ()
    documents: tuple[Document, ...] = ()
    flows: tuple[Flow, ...] = ()
    as_of: datetime | None = None

    def store_site(self, store_id: str) -> str | None:
        """Site of a store: person/pair location or document responsibility."""
        for person in self.persons:
            if person.id == store_id:
                return person.site_id
        for pair in self.pairs:
            if pair.id == store_id:
                for person in self.persons:
                    if person.id == pair.member_ids[0]:
                        return person.site_id
                return None
        for doc in self.documents:
            if doc.id == store_id:
                return doc.responsible_site_id
        return None

    def store_ids(self) -> set[str]:
        return (
            {p.id for p in self.persons}
            | {p.id for p in self.pairs}
            | {d.id for d in self.documents}
        )


def validate_map(flow_map: FlowMap) -> list[Issue]:
    """Check every structural invariant; an empty result means the map is sound.

    Issues are data, not failures: callers that require soundness (the
    builder, the renderer) raise on a non-empty result themselves.
    """
    issues: list[Issue] = []
    site_ids = {s.id for s in flow_map.sites}

    seen: set[str] = set()
    for site in flow_map.sites:
        if site.id in seen:
            issues.append(Issue("duplicate-id", site.id, "site id declared twice"))
        seen.add(site.id)
        if not MIN_TZ_OFFSET_MINUTES <= site.timezone_offset_minutes <= MAX_TZ_OFFSET_MINUTES:
            issues.append(
                Issue(
                    "bad-timezone",
                    site.id,
                    f"timezone offset {site.timezone_offset_minutes} outside "
                    f"[{MIN_TZ_OFFSET_MINUTES}, {MAX_TZ_OFFSET_MINUTES}]",
                )
            )

    store_seen: set[str] = set()
    persons_by_id: dict[str, Person] = {}
    for person in flow_map.persons:
        if person.id in store_seen:
            issues.append(Issue("duplicate-id", person.id, "store id declared twice"))
        store_seen.add(person.id)
        persons_by_id[person.id] = person
        if person.site_id not in site_ids:
            issues.append(
                Issue("dangling-site", person.id, f"person references unknown site {person.site_id!r}")
            )

    membership: dict[str, str] = {}
    for pair in flow_map.pairs:
        if pair.id in store_seen:
            issues.append(Issue("duplicate-id", pair.id, "store id declared twice"))
        store_seen.add(pair.id)
        a, b = pair.member_ids
        if a == b:
            issues.append(Issue("duplicate-member", pair.id, "pair lists the same person twice"))
        member_sites = []
        for member in pair.member_ids:
            if member not in persons_by_id:
                issues.append(
                    Issue("dangling-person", pair.id, f"pair references unknown person {member!r}")
                )
                continue
            member_sites.append(persons_by_id[member].site_id)
            if member in membership and membership[member] != pair.id:
                issues.append(
                    Issue(
                        "double-pairing",
                        member,
                        f"person appears in pairs {membership[member]!r} and {pair.id!r}",
                    )
                )
            membership[member] = pair.id
        if len(member_sites) == 2 and member_sites[0] != member_sites[1]:
            issues.append(Issue("cross-site-pair", pair.id, "pair members sit at different sites"))
        if pair.current_work_item is not None and pair.current_work_item.story_id <= 0:
            issues.append(Issue("bad-story-id", pair.id, "work item story id must be positive"))

    for doc in flow_map.documents:
        if doc.id in store_seen:
            issues.append(Issue("duplicate-id", doc.id, "store id declared twice"))
        store_seen.add(doc.id)
        if doc.responsible_site_id not in site_ids:
            issues.append(
                Issue(
                    "dangling-site",
                    doc.id,
                    f"document references unknown site {doc.responsible_site_id!r}",
                )
            )

    store_ids = flow_map.store_ids()
    for index, flow in enumerate(flow_map.flows):
        subject = f"{flow.from_id}->{flow.to_id}"
        if flow.from_id not in store_ids or flow.to_id not in store_ids:
            issues.append(
                Issue("dangling-flow-endpoint", subject, f"flow {index} references a missing store")
            )
            continue
        site_a = flow_map.store_site(flow.from_id)
        site_b = flow_map.store_site(flow.to_id)
        if site_a is not None and site_b is not None and site_a != site_b:
            if flow.medium_id is None:
                issues.append(
                    Issue("missing-medium", subject, "cross-site flow carries no medium")
                )

    return issues


class InvalidMap(ValueError):
    """Raised when an operation requires a map that passes validation."""

    def __init__(self, issues: list[Issue]):
        self.issues = issues
        summary = "; ".join(f"{i.code}({i.subject})" for i in issues[:5])
        super().__init__(f"map fails validation: {summary}")


# --- JSON serialization -------------------------------------------------
#
# The wire schema is documented in docs/flowmap.schema.json. Field names
# match the dataclass fields, except Flow endpoints which serialize as
# "from"/"to".


def _ts(value: datetime | None) -> str | None:
    if value is None:
        return None
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc).isoformat()


def parse_timestamp(raw: str) -> datetime:
    """Parse ISO-8601; naive stamps are taken as UTC."""
    value = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


def _work_item_dict(item: WorkItemRef | None) -> dict | None:
    if item is None:
        return None
    return {"story_id": item.story_id, "title": item.title}


def _work_item_from(data: dict | None) -> WorkItemRef | None:
    if data is None:
        return None
    return WorkItemRef(story_id=int(data["story_id"]), title=data.get("title", ""))


def map_to_dict(flow_map: FlowMap) -> dict:
    return {
        "kind": flow_map.kind.value,
        "as_of": _ts(flow_map.as_of),
        "sites": [
            {"id": s.id, "name": s.name, "timezone_offset_minutes": s.timezone_offset_minutes}
            for s in flow_map.sites
        ],
        "persons": [
            {
                "id": p.id,
                "name": p.name,
                "site_id": p.site_id,
                "roles": sorted(p.roles),
                "yellow_pages": {
                    "picture_ref": p.yellow_pages.picture_ref,
                    "contact": dict(p.yellow_pages.contact),
                    "status": p.yellow_pages.status,
                    "skills": list(p.yellow_pages.skills),
                    "current_work_item": _work_item_dict(p.yellow_pages.current_work_item),
                },
            }
            for p in flow_map.persons
        ],
        "pairs": [
            {
                "id": pair.id,
                "member_ids": list(pair.member_ids),
                "current_work_item": _work_item_dict(pair.current_work_item),
            }
            for pair in flow_map.pairs
        ],
        "documents": [
            {
                "id": d.id,
                "name": d.name,
                "responsible_site_id": d.responsible_site_id,
                "criteria": {
                    "long_term_accessible": d.criteria.long_term_accessible,
                    "repeatably_accessible": d.criteria.repeatably_accessible,
                    "third_party_comprehensible": d.criteria.third_party_comprehensible,
                },
            }
            for d in flow_map.documents
        ],
        "flows": [
            {
                "from": f.from_id,
                "to": f.to_id,
                "state": f.state.value,
                "direction": f.direction.value,
                "strength": f.strength.value,
                "medium_id": f.medium_id,
                "label": f.label,
            }
            for f in flow_map.flows
        ],
    }


def map_from_dict(data: dict) -> FlowMap:
    return FlowMap(
        kind=MapKind(data["kind"]),
        as_of=parse_timestamp(data["as_of"]) if data.get("as_of") else None,
        sites=tuple(
            Site(s["id"], s["name"], int(s.get("timezone_offset_minutes", 0)))
            for s in data.get("sites", [])
        ),
        persons=tuple(
            Person(
                id=p["id"],
                name=p["name"],
                site_id=p["site_id"],
                roles=frozenset(p.get("roles", [])),
                yellow_pages=YellowPages(
                    picture_ref=p.get("yellow_pages", {}).get("picture_ref"),
                    contact=tuple(sorted(p.get("yellow_pages", {}).get("contact", {}).items())),
                    status=p.get("yellow_pages", {}).get("status"),
                    skills=tuple(p.get("yellow_pages", {}).get("skills", [])),
                    current_work_item=_work_item_from(
                        p.get("yellow_pages", {}).get("current_work_item")
                    ),
                ),
            )
            for p in data.get("persons", [])
        ),
        pairs=tuple(
            PairStore(
                id=pair["id"],
                member_ids=(pair["member_ids"][0], pair["member_ids"][1]),
                current_work_item=_work_item_from(pair.get("current_work_item")),
            )
            for pair in data.get("pairs", [])
        ),
        documents=tuple(
            Document(
                id=d["id"],
                name=d["name"],
                responsible_site_id=d["responsible_site_id"],
                criteria=SolidityCriteria(
                    bool(d["criteria"]["long_term_accessible"]),
                    bool(d["criteria"]["repeatably_accessible"]),
                    bool(d["criteria"]["third_party_comprehensible"]),
                ),
            )
            for d in data.get("documents", [])
        ),
        flows=tuple(
            Flow(
                from_id=f["from"],
                to_id=f["to"],
                state=InformationState(f["state"]),
                direction=FlowDirection(f["direction"]),
                strength=FlowStrength(f["strength"]),
                medium_id=f.get("medium_id"),
                label=f.get("label"),
            )
            for f in data.get("flows", [])
        ),
    )


def map_to_json(flow_map: FlowMap) -> str:
    return json.dumps(map_to_dict(flow_map), indent=2, sort_keys=False) + "\n"


def map_from_json(text: str) -> FlowMap:
    return map_from_dict(json.loads(text))


def with_kind(flow_map: FlowMap, kind: MapKind, as_of: datetime | None = None) -> FlowMap:
    return replace(flow_map, kind=kind, as_of=as_of if as_of is not None else flow_map.as_of)
