"""Compile a team plus its communication strategy into FLOW maps.

The target map is assembled in six steps: site regions, one fluid store per
person, solid stores for declared documents, fluid flows between parties
that communicate on a regular basis, solid read flows from documents, and
yellow pages for everyone.

"Regular basis" is operationalized as: two parties communicate regularly
when some activity that is scheduled, or event-driven for anything other
than ad-hoc events, includes both of them in its participant scope. Edges
induced only by ad-hoc activities are weak. Paired people communicate
through their pair store; everyone else through their own store. Colocated
party-to-party communication is always strong.

When several activities induce the same edge, the edge is annotated (label
and medium) from the most specific one: fewest participants, then richest
assigned medium, then lowest activity id.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from itertools import combinations

from .model import (
    Document,
    Flow,
    FlowDirection,
    FlowMap,
    FlowStrength,
    InformationState,
    Issue,
    MapKind,
    PairStore,
    Person,
    Site,
    SolidityCriteria,
    classify_state,
    validate_map,
)
from .strategy import (
    CommunicationActivity,
    CommunicationStrategy,
    MediumAssignment,
    Scope,
    validate_strategy,
)


class WidthClass(Enum):
    THIN = "Thin"
    MEDIUM = "Medium"
    THICK = "Thick"


def flow_width(strength: FlowStrength, medium_richness_rank: int) -> WidthClass:
    """Line-width class from flow strength and medium richness.

    Strong flows are always thick; regular and weak flows are promoted one
    class when carried by a rich medium (rank 1 or 2).
    """
    if strength is FlowStrength.STRONG:
        return WidthClass.THICK
    rich = medium_richness_rank <= 2
    if strength is FlowStrength.REGULAR:
        return WidthClass.THICK if rich else WidthClass.MEDIUM
    return WidthClass.MEDIUM if rich else WidthClass.THIN


@dataclass(frozen=True)
class DocumentSpec:
    """A project document store plus who maintains and reads it.

    ``written_by`` and ``read_by`` hold role tags; any party whose roles
    intersect them becomes a regular writer or reader in the target map.
    """

    id: str
    name: str
    responsible_site_id: str
    criteria: SolidityCriteria = SolidityCriteria(True, True, True)
    written_by: frozenset[str] = frozenset()
    read_by: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TeamSpec:
    sites: tuple[Site, ...] = ()
    persons: tuple[Person, ...] = ()
    pairs: tuple[PairStore, ...] = ()
    documents: tuple[DocumentSpec, ...] = ()
    common_language: str = ""

    def person(self, person_id: str) -> Person | None:
        for p in self.persons:
            if p.id == person_id:
                return p
        return None


class InvalidInput(ValueError):
    """Team or strategy failed validation before building."""

    def __init__(self, issues: list[Issue]):
        self.issues = issues
        summary = "; ".join(f"{i.code}({i.subject})" for i in issues[:5])
        super().__init__(f"cannot build map: {summary}")


@dataclass(frozen=True)
class _Party:
    """A communicating unit on the map: a pair store or an unpaired person."""

    store_id: str
    site_id: str
    roles: frozenset[str]
    member_ids: tuple[str, ...]


def _skeleton_map(team: TeamSpec) -> FlowMap:
    return FlowMap(
        kind=MapKind.OVERALL_TARGET,
        sites=tuple(sorted(team.sites, key=lambda s: s.id)),
        persons=tuple(sorted(team.persons, key=lambda p: p.id)),
        pairs=tuple(sorted(team.pairs, key=lambda p: p.id)),
        documents=tuple(
            sorted(
                (
                    Document(d.id, d.name, d.responsible_site_id, d.criteria)
                    for d in team.documents
                ),
                key=lambda d: d.id,
            )
        ),
    )


def team_parties(team: TeamSpec) -> list[_Party]:
    """Pair stores plus unpaired persons, ordered by store id."""
    persons = {p.id: p for p in team.persons}
    paired: set[str] = set()
    parties: list[_Party] = []
    for pair in team.pairs:
        members = [persons[m] for m in pair.member_ids if m in persons]
        roles: set[str] = set()
        for member in members:
            roles |= member.roles
        site = members[0].site_id if members else ""
        parties.append(_Party(pair.id, site, frozenset(roles), tuple(pair.member_ids)))
        paired |= set(pair.member_ids)
    for person in team.persons:
        if person.id not in paired:
            parties.append(_Party(person.id, person.site_id, person.roles, (person.id,)))
    return sorted(parties, key=lambda p: p.store_id)


def scope_parties(activity: CommunicationActivity, team: TeamSpec) -> list[_Party]:
    parties = team_parties(team)
    scope = activity.participants.scope
    if scope is Scope.WHOLE_TEAM:
        return parties
    if scope is Scope.PAIR:
        return [p for p in parties if len(p.member_ids) == 2]
    if scope is Scope.PAIR_PLUS_CUSTOMER:
        return [p for p in parties if len(p.member_ids) == 2 or "customer" in p.roles]
    wanted = activity.participants.ids
    chosen: list[_Party] = []
    for party in parties:
        if party.store_id in wanted or set(party.member_ids) & wanted:
            chosen.append(party)
    return chosen


def validate_team(team: TeamSpec, strategy: CommunicationStrategy | None = None) -> list[Issue]:
    """Referential checks on the team, plus cross-checks against a strategy."""
    issues = validate_map(_skeleton_map(team))

    doc_ids = {d.id for d in team.documents}
    all_roles: set[str] = set()
    for person in team.persons:
        all_roles |= person.roles
    for doc in team.documents:
        for role in sorted((doc.written_by | doc.read_by) - all_roles):
            issues.append(
                Issue("unknown-role", doc.id, f"no team member has role {role!r}", severity="warning")
            )

    if strategy is not None:
        medium_ids = {m.id for m in strategy.catalog}
        for person in team.persons:
            for channel, _address in person.yellow_pages.contact:
                if channel not in medium_ids:
                    issues.append(
                        Issue(
                            "unknown-contact-channel",
                            person.id,
                            f"contact key {channel!r} is not a catalog medium",
                        )
                    )
        store_ids = {p.id for p in team.persons} | {p.id for p in team.pairs} | doc_ids
        for activity in strategy.activities:
            if activity.participants.scope is Scope.CUSTOM:
                for missing in sorted(activity.participants.ids - store_ids):
                    issues.append(
                        Issue(
                            "dangling-participant",
                            activity.id,
                            f"custom scope names unknown id {missing!r}",
                        )
                    )
    return issues


def _assignment_rank(strategy: CommunicationStrategy, activity_id: str) -> int:
    assignment = strategy.assignment_for(activity_id)
    if assignment is None:
        return 10**6
    medium = strategy.medium(assignment.medium_id)
    return medium.richness_rank if medium else 10**6


def _edge_label(activity: CommunicationActivity, assignment: MediumAssignment | None) -> str:
    label = activity.name
    if assignment is not None and assignment.added_channels:
        label += " (+" + ", ".join(sorted(assignment.added_channels)) + ")"
    return label


def _document_medium_id(
    strategy: CommunicationStrategy, site_a: str, site_b: str
) -> str | None:
    """Least rich catalog medium usable between two sites (documents travel
    as repository artifacts, not live conversation)."""
    candidates = [
        m
        for m in strategy.catalog
        if not m.requires_colocation and m.covers_sites({site_a, site_b})
    ]
    if not candidates:
        return None
    return max(candidates, key=lambda m: m.richness_rank).id


def _document_flows(
    team: TeamSpec,
    strategy: CommunicationStrategy,
    parties: list[_Party],
    issues: list[Issue],
) -> list[Flow]:
    flows: list[Flow] = []
    for doc in sorted(team.documents, key=lambda d: d.id):
        writers = [p for p in parties if p.roles & doc.written_by]
        readers = [p for p in parties if p.roles & doc.read_by]
        read_state = classify_state(doc.criteria)
        for writer in writers:
            medium = None
            if writer.site_id != doc.responsible_site_id:
                medium = _document_medium_id(strategy, writer.site_id, doc.responsible_site_id)
                if medium is None:
                    issues.append(
                        Issue(
                            "no-document-medium",
                            doc.id,
                            f"no catalog medium connects {writer.site_id!r} and "
                            f"{doc.responsible_site_id!r}",
                        )
                    )
            flows.append(
                Flow(
                    from_id=writer.store_id,
                    to_id=doc.id,
                    state=InformationState.FLUID,
                    direction=FlowDirection.ONE_WAY,
                    strength=FlowStrength.REGULAR,
                    medium_id=medium,
                    label=f"write {doc.name}",
                )
            )
        for reader in readers:
            medium = None
            if reader.site_id != doc.responsible_site_id:
                medium = _document_medium_id(strategy, reader.site_id, doc.responsible_site_id)
                if medium is None:
                    issues.append(
                        Issue(
                            "no-document-medium",
                            doc.id,
                            f"no catalog medium connects {reader.site_id!r} and "
                            f"{doc.responsible_site_id!r}",
                        )
                    )
            flows.append(
                Flow(
                    from_id=doc.id,
                    to_id=reader.store_id,
                    state=read_state,
                    direction=FlowDirection.ONE_WAY,
                    strength=FlowStrength.REGULAR,
                    medium_id=medium,
                    label=f"read {doc.name}",
                )
            )
    return flows


def build_target_map(team: TeamSpec, strategy: CommunicationStrategy) -> FlowMap:
    """Overall target map from a validated team and strategy."""
    issues = [i for i in validate_team(team, strategy) if i.severity == "error"]
    issues += [i for i in validate_strategy(strategy) if i.severity == "error"]
    if issues:
        raise InvalidInput(issues)

    parties = team_parties(team)
    by_store = {p.store_id: p for p in parties}

    # Step 4: aggregate party-to-party edges over all activity scopes.
    inducers: dict[tuple[str, str], list[CommunicationActivity]] = {}
    for activity in strategy.activities:
        in_scope = scope_parties(activity, team)
        for a, b in combinations(sorted(p.store_id for p in in_scope), 2):
            inducers.setdefault((a, b), []).append(activity)

    flows: list[Flow] = []
    build_issues: list[Issue] = []
    for (a, b), activities in sorted(inducers.items()):
        party_a, party_b = by_store[a], by_store[b]
        same_site = party_a.site_id == party_b.site_id
        regular = any(not act.is_ad_hoc() for act in activities)
        if same_site:
            strength = FlowStrength.STRONG
        elif regular:
            strength = FlowStrength.REGULAR
        else:
            strength = FlowStrength.WEAK
        annotator = min(
            activities,
            key=lambda act: (
                len(scope_parties(act, team)),
                _assignment_rank(strategy, act.id),
                act.id,
            ),
        )
        assignment = strategy.assignment_for(annotator.id)
        medium_id = assignment.medium_id if (assignment and not same_site) else None
        flows.append(
            Flow(
                from_id=a,
                to_id=b,
                state=InformationState.FLUID,
                direction=FlowDirection.BOTH_WAYS,
                strength=strength,
                medium_id=medium_id,
                label=_edge_label(annotator, assignment),
            )
        )

    # Step 5 plus the solidifying write flows from step 4.
    flows += _document_flows(team, strategy, parties, build_issues)
    if build_issues:
        raise InvalidInput(build_issues)

    flow_map = replace(
        _skeleton_map(team),
        flows=tuple(sorted(flows, key=lambda f: (f.from_id, f.to_id, f.label or ""))),
    )
    remaining = validate_map(flow_map)
    if remaining:
        raise InvalidInput(remaining)
    return flow_map


def build_activity_map(
    activity: CommunicationActivity,
    assignment: MediumAssignment,
    team: TeamSpec,
) -> FlowMap:
    """Map restricted to one activity's participants and its medium.

    When a participant carries the ``moderator`` role, flows form a hub
    around the moderator's party; otherwise every party talks to every
    other. A required/added ``shared-mindmap`` channel materializes as a
    solid store written by the moderator (or by everyone without one) and
    read by all other parties.
    """
    team_errors = [i for i in validate_team(team) if i.severity == "error"]
    if team_errors:
        raise InvalidInput(team_errors)

    parties = scope_parties(activity, team)
    persons_by_id = {p.id: p for p in team.persons}
    included_person_ids: set[str] = set()
    for party in parties:
        included_person_ids |= set(party.member_ids)
    persons = tuple(
        sorted((persons_by_id[i] for i in included_person_ids if i in persons_by_id),
               key=lambda p: p.id)
    )
    pair_ids = {p.store_id for p in parties if len(p.member_ids) == 2}
    pairs = tuple(sorted((p for p in team.pairs if p.id in pair_ids), key=lambda p: p.id))

    moderator: _Party | None = None
    for party in parties:
        if "moderator" in party.roles:
            moderator = party
            break

    def strength_for(a: _Party, b: _Party) -> FlowStrength:
        if a.site_id == b.site_id:
            return FlowStrength.STRONG
        return FlowStrength.WEAK if activity.is_ad_hoc() else FlowStrength.REGULAR

    label = _edge_label(activity, assignment)
    flows: list[Flow] = []
    if moderator is not None:
        edges = [(moderator, p) for p in parties if p.store_id != moderator.store_id]
    else:
        edges = list(combinations(parties, 2))
    for a, b in edges:
        lo, hi = sorted((a, b), key=lambda p: p.store_id)
        flows.append(
            Flow(
                from_id=lo.store_id,
                to_id=hi.store_id,
                state=InformationState.FLUID,
                direction=FlowDirection.BOTH_WAYS,
                strength=strength_for(lo, hi),
                medium_id=None if lo.site_id == hi.site_id else assignment.medium_id,
                label=label,
            )
        )

    documents: list[Document] = []
    channels = activity.required_channels | assignment.added_channels
    if "shared-mindmap" in channels:
        site_id = moderator.site_id if moderator else (parties[0].site_id if parties else "")
        doc = Document(
            id=f"{activity.id}-mindmap",
            name="Shared mind map",
            responsible_site_id=site_id,
            criteria=SolidityCriteria(True, True, True),
        )
        documents.append(doc)
        writers = [moderator] if moderator else parties
        for writer in writers:
            flows.append(
                Flow(
                    from_id=writer.store_id,
                    to_id=doc.id,
                    state=InformationState.FLUID,
                    direction=FlowDirection.ONE_WAY,
                    strength=FlowStrength.REGULAR,
                    medium_id=None if writer.site_id == site_id else assignment.medium_id,
                    label=f"write {doc.name}",
                )
            )
        writer_ids = {w.store_id for w in writers}
        for reader in parties:
            if reader.store_id in writer_ids:
                continue
            flows.append(
                Flow(
                    from_id=doc.id,
                    to_id=reader.store_id,
                    state=InformationState.SOLID,
                    direction=FlowDirection.ONE_WAY,
                    strength=FlowStrength.REGULAR,
                    medium_id=None if reader.site_id == site_id else assignment.medium_id,
                    label=f"read {doc.name}",
                )
            )

    included_sites = {p.site_id for p in parties} | {d.responsible_site_id for d in documents}
    sites = tuple(sorted((s for s in team.sites if s.id in included_sites), key=lambda s: s.id))

    flow_map = FlowMap(
        kind=MapKind.ACTIVITY_SPECIFIC,
        sites=sites,
        persons=persons,
        pairs=pairs,
        documents=tuple(documents),
        flows=tuple(sorted(flows, key=lambda f: (f.from_id, f.to_id, f.label or ""))),
    )
    remaining = validate_map(flow_map)
    if remaining:
        raise InvalidInput(remaining)
    return flow_map
