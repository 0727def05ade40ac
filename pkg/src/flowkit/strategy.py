"""Communication strategy: activities, media catalog, medium-choice policy.

A strategy pairs each declared communication activity with exactly one
medium assignment. The choice policy is richness-greedy: pick the richest
catalog medium that is available at every involved site, does not demand
colocation across sites, and can carry the activity's required channels,
either natively or by adding a channel the catalog knows about.

Cost fields on media (setup effort, paid vs free) are advisory only; they
surface as validation warnings and never affect the choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import time
from enum import Enum

from .model import Issue


class SetupCost(Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class MonetaryCost(Enum):
    FREE = "Free"
    PAID = "Paid"


class Cadence(Enum):
    EVERY_MORNING = "EveryMorning"
    EVERY_EVENING = "EveryEvening"
    START_OF_ITERATION = "StartOfIteration"
    CUSTOM = "Custom"


class EventKindTrigger(Enum):
    STORY_COMPLETED = "StoryCompleted"
    ITERATION_COMPLETED = "IterationCompleted"
    STATUS_CHANGE = "StatusChange"
    AD_HOC = "AdHoc"


class Scope(Enum):
    WHOLE_TEAM = "WholeTeam"
    PAIR = "Pair"
    PAIR_PLUS_CUSTOMER = "PairPlusCustomer"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class Medium:
    """One communication medium in the richness catalog.

    ``available_at`` lists the site ids where the medium can be used; the
    empty set means the medium is unrestricted (usable at any site).
    ``extra_channels`` are the channel tags the medium carries natively.
    """

    id: str
    name: str
    richness_rank: int  # 1 = richest; unique within a catalog
    requires_colocation: bool = False
    available_at: frozenset[str] = frozenset()
    extra_channels: frozenset[str] = frozenset()
    setup_cost: SetupCost = SetupCost.LOW
    monetary_cost: MonetaryCost = MonetaryCost.FREE

    def covers_sites(self, sites: frozenset[str] | set[str]) -> bool:
        return not self.available_at or set(sites) <= set(self.available_at)


@dataclass(frozen=True)
class Scheduled:
    cadence: Cadence
    time_of_day: time
    days: frozenset[int] = frozenset()  # 1-based project day numbers


@dataclass(frozen=True)
class EventDriven:
    event_kind: EventKindTrigger


Trigger = Scheduled | EventDriven


@dataclass(frozen=True)
class Participants:
    scope: Scope
    ids: frozenset[str] = frozenset()  # only for Scope.CUSTOM


@dataclass(frozen=True)
class CommunicationActivity:
    id: str
    name: str
    goal: str
    trigger: Trigger
    participants: Participants
    required_channels: frozenset[str] = frozenset()

    def is_ad_hoc(self) -> bool:
        return isinstance(self.trigger, EventDriven) and self.trigger.event_kind is EventKindTrigger.AD_HOC


@dataclass(frozen=True)
class MediumAssignment:
    activity_id: str
    medium_id: str
    added_channels: frozenset[str] = frozenset()


@dataclass(frozen=True)
class CommunicationStrategy:
    activities: tuple[CommunicationActivity, ...] = ()
    assignments: tuple[MediumAssignment, ...] = ()
    catalog: tuple[Medium, ...] = ()

    def medium(self, medium_id: str) -> Medium | None:
        for m in self.catalog:
            if m.id == medium_id:
                return m
        return None

    def activity(self, activity_id: str) -> CommunicationActivity | None:
        for a in self.activities:
            if a.id == activity_id:
                return a
        return None

    def assignment_for(self, activity_id: str) -> MediumAssignment | None:
        for assignment in self.assignments:
            if assignment.activity_id == activity_id:
                return assignment
        return None

    def medium_names(self) -> dict[str, str]:
        return {m.id: m.name for m in self.catalog}


class DuplicateRank(ValueError):
    """Two catalog media share a richness rank; the total order is broken."""


class NoFeasibleMedium(LookupError):
    """No catalog medium satisfies availability, colocation, and channels."""


def channel_universe(catalog: tuple[Medium, ...] | list[Medium]) -> frozenset[str]:
    """Every channel tag any catalog medium supports."""
    tags: set[str] = set()
    for medium in catalog:
        tags |= medium.extra_channels
    return frozenset(tags)


def rank_media(catalog: tuple[Medium, ...] | list[Medium]) -> list[Medium]:
    """Catalog sorted richest-first; rejects duplicate ranks."""
    ranks: dict[int, str] = {}
    for medium in catalog:
        if medium.richness_rank in ranks:
            raise DuplicateRank(
                f"media {ranks[medium.richness_rank]!r} and {medium.id!r} "
                f"both claim rank {medium.richness_rank}"
            )
        ranks[medium.richness_rank] = medium.id
    return sorted(catalog, key=lambda m: m.richness_rank)


def medium_is_feasible(
    medium: Medium,
    required_channels: frozenset[str],
    catalog: tuple[Medium, ...] | list[Medium],
    sites_involved: frozenset[str] | set[str],
) -> bool:
    if not medium.covers_sites(sites_involved):
        return False
    if medium.requires_colocation and len(set(sites_involved)) > 1:
        return False
    missing = required_channels - medium.extra_channels
    return missing <= channel_universe(catalog)


def choose_medium(
    activity: CommunicationActivity,
    catalog: tuple[Medium, ...] | list[Medium],
    sites_involved: frozenset[str] | set[str],
) -> MediumAssignment:
    """Richest feasible medium, with the non-native required channels added.

    Raises NoFeasibleMedium when nothing in the catalog works; DuplicateRank
    propagates from ranking.
    """
    if not sites_involved:
        raise ValueError("sites_involved must not be empty")
    for medium in rank_media(catalog):
        if medium_is_feasible(medium, activity.required_channels, catalog, sites_involved):
            return MediumAssignment(
                activity_id=activity.id,
                medium_id=medium.id,
                added_channels=frozenset(activity.required_channels - medium.extra_channels),
            )
    raise NoFeasibleMedium(
        f"no medium satisfies activity {activity.id!r} across sites {sorted(sites_involved)}"
    )


_FREQUENT_CADENCES = (Cadence.EVERY_MORNING, Cadence.EVERY_EVENING)


def validate_strategy(strategy: CommunicationStrategy) -> list[Issue]:
    """Structural checks plus advisory cost warnings."""
    issues: list[Issue] = []

    ranks: dict[int, str] = {}
    medium_ids: set[str] = set()
    for medium in strategy.catalog:
        if medium.id in medium_ids:
            issues.append(Issue("duplicate-id", medium.id, "medium id declared twice"))
        medium_ids.add(medium.id)
        if medium.richness_rank in ranks:
            issues.append(
                Issue(
                    "duplicate-rank",
                    medium.id,
                    f"shares richness rank {medium.richness_rank} with {ranks[medium.richness_rank]!r}",
                )
            )
        ranks[medium.richness_rank] = medium.id
        if medium.richness_rank < 1:
            issues.append(Issue("bad-rank", medium.id, "richness rank must be positive"))

    universe = channel_universe(strategy.catalog)

    activity_ids: set[str] = set()
    for activity in strategy.activities:
        if activity.id in activity_ids:
            issues.append(Issue("duplicate-id", activity.id, "activity id declared twice"))
        activity_ids.add(activity.id)
        if isinstance(activity.trigger, Scheduled) and not activity.trigger.days:
            issues.append(
                Issue("empty-schedule", activity.id, "scheduled activity names no project days")
            )
        unknown = activity.required_channels - universe
        if unknown:
            issues.append(
                Issue(
                    "unknown-channel",
                    activity.id,
                    f"required channels not in catalog: {sorted(unknown)}",
                )
            )

    assigned: set[str] = set()
    for assignment in strategy.assignments:
        if assignment.activity_id in assigned:
            issues.append(
                Issue("duplicate-assignment", assignment.activity_id, "activity assigned twice")
            )
        assigned.add(assignment.activity_id)
        activity = strategy.activity(assignment.activity_id)
        if activity is None:
            issues.append(
                Issue("dangling-activity", assignment.activity_id, "assignment names unknown activity")
            )
        medium = strategy.medium(assignment.medium_id)
        if medium is None:
            issues.append(
                Issue("dangling-medium", assignment.activity_id,
                      f"assignment names unknown medium {assignment.medium_id!r}")
            )
            continue
        bad_added = assignment.added_channels - universe
        if bad_added:
            issues.append(
                Issue(
                    "channel-mismatch",
                    assignment.activity_id,
                    f"added channels not in catalog: {sorted(bad_added)}",
                )
            )
        if activity is not None:
            uncovered = activity.required_channels - medium.extra_channels - assignment.added_channels
            if uncovered:
                issues.append(
                    Issue(
                        "channel-mismatch",
                        assignment.activity_id,
                        f"required channels not covered by medium or additions: {sorted(uncovered)}",
                    )
                )
            frequent = (
                isinstance(activity.trigger, Scheduled)
                and activity.trigger.cadence in _FREQUENT_CADENCES
            )
            if frequent and medium.monetary_cost is MonetaryCost.PAID:
                issues.append(
                    Issue(
                        "costly-medium",
                        assignment.activity_id,
                        f"daily activity assigned paid medium {medium.id!r}",
                        severity="warning",
                    )
                )
            if frequent and medium.setup_cost is SetupCost.HIGH:
                issues.append(
                    Issue(
                        "costly-medium",
                        assignment.activity_id,
                        f"daily activity assigned high-setup medium {medium.id!r}",
                        severity="warning",
                    )
                )

    for activity in strategy.activities:
        if activity.id not in assigned:
            issues.append(
                Issue("unassigned-activity", activity.id, "activity has no medium assignment")
            )

    return issues


def default_catalog() -> tuple[Medium, ...]:
    """A generic richness continuum, richest first, usable out of the box."""
    return (
        Medium(
            id="face-to-face",
            name="Face to face",
            richness_rank=1,
            requires_colocation=True,
            extra_channels=frozenset({"audio", "video", "text", "shared-desktop", "shared-mindmap"}),
        ),
        Medium(
            id="hq-video",
            name="HQ video conference",
            richness_rank=2,
            extra_channels=frozenset({"audio", "video"}),
            setup_cost=SetupCost.MEDIUM,
        ),
        Medium(
            id="call",
            name="Telephone call",
            richness_rank=3,
            extra_channels=frozenset({"audio"}),
        ),
        Medium(
            id="personal-document",
            name="Personal document (e-mail)",
            richness_rank=4,
            extra_channels=frozenset({"text"}),
        ),
        Medium(
            id="impersonal-document",
            name="Impersonal document (specification)",
            richness_rank=5,
            extra_channels=frozenset({"text"}),
        ),
    )
