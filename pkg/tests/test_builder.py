import random
from dataclasses import replace
from datetime import time

import pytest

from flowkit.builder import (
    DocumentSpec,
    InvalidInput,
    TeamSpec,
    WidthClass,
    build_activity_map,
    build_target_map,
    flow_width,
    validate_team,
)
from flowkit.model import (
    FlowStrength,
    InformationState,
    MapKind,
    PairStore,
    Person,
    Site,
    validate_map,
)
from flowkit.strategy import (
    Cadence,
    CommunicationActivity,
    CommunicationStrategy,
    EventDriven,
    EventKindTrigger,
    Medium,
    MediumAssignment,
    Participants,
    Scheduled,
    Scope,
)

from oracles import census_oracle


class TestFlowWidth:
    @pytest.mark.parametrize("rank", [1, 2, 3, 6])
    def test_strong_is_always_thick(self, rank):
        assert flow_width(FlowStrength.STRONG, rank) is WidthClass.THICK

    def test_weak_over_poor_medium_is_thin(self):
        assert flow_width(FlowStrength.WEAK, 5) is WidthClass.THIN

    def test_regular_over_rich_medium_is_thick(self):
        assert flow_width(FlowStrength.REGULAR, 1) is WidthClass.THICK

    def test_regular_over_poor_medium_is_medium(self):
        assert flow_width(FlowStrength.REGULAR, 3) is WidthClass.MEDIUM

    def test_weak_over_rich_medium_is_medium(self):
        assert flow_width(FlowStrength.WEAK, 2) is WidthClass.MEDIUM


class TestTargetMap:
    def test_fixture_census(self, target_map):
        assert len(target_map.sites) == 2
        assert len(target_map.persons) == 11
        assert len(target_map.pairs) == 4
        assert len(target_map.documents) == 2
        assert target_map.kind is MapKind.OVERALL_TARGET

    def test_fixture_map_validates(self, target_map):
        assert validate_map(target_map) == []

    def test_local_pair_flows_are_strong(self, target_map):
        local = [
            f for f in target_map.flows
            if {f.from_id, f.to_id} in ({"ws1", "ws2"}, {"ws3", "ws4"})
        ]
        assert len(local) == 2
        assert all(f.strength is FlowStrength.STRONG for f in local)
        assert all(f.medium_id is None for f in local)

    def test_cross_site_pair_flows_ride_the_pair_activity_medium(self, target_map):
        cross = [
            f for f in target_map.flows
            if f.from_id in {"ws1", "ws2"} and f.to_id in {"ws3", "ws4"}
        ]
        assert len(cross) == 4
        assert all(f.medium_id == "skype-call" for f in cross)
        assert all(f.state is InformationState.FLUID for f in cross)

    def test_code_flows_through_version_control(self, target_map):
        writes = [f for f in target_map.flows if f.to_id == "svn"]
        reads = [f for f in target_map.flows if f.from_id == "svn"]
        assert {f.from_id for f in writes} == {"ws1", "ws2", "ws3", "ws4"}
        assert all(f.state is InformationState.FLUID for f in writes)
        assert all(f.state is InformationState.SOLID for f in reads)
        cross_reads = [f for f in reads if f.to_id in {"ws3", "ws4", "lena"}]
        assert all(f.medium_id == "impersonal-document" for f in cross_reads)

    def test_every_person_has_yellow_pages_contact(self, target_map):
        assert all(p.yellow_pages.contact for p in target_map.persons)

    def test_rebuild_is_structurally_equal(self, team, strategy):
        assert build_target_map(team, strategy) == build_target_map(team, strategy)

    def test_single_person_project(self):
        team = TeamSpec(
            sites=(Site("solo", "Solo"),),
            persons=(Person("ada", "Ada", "solo", frozenset({"developer"})),),
        )
        strategy = CommunicationStrategy()
        built = build_target_map(team, strategy)
        assert len(built.sites) == 1
        assert len(built.persons) == 1
        assert built.pairs == ()
        assert built.flows == ()

    def test_invalid_team_is_rejected(self, strategy):
        team = TeamSpec(
            sites=(Site("a", "A"),),
            persons=(Person("p", "P", "nowhere"),),
        )
        with pytest.raises(InvalidInput):
            build_target_map(team, strategy)


SCOPES = [Scope.WHOLE_TEAM, Scope.PAIR, Scope.PAIR_PLUS_CUSTOMER]


def random_team_and_strategy(rng: random.Random):
    site_ids = ["s1", "s2"][: rng.randint(1, 2)]
    sites = tuple(Site(s, s.upper()) for s in site_ids)
    persons = []
    pairs = []
    serial = 0
    for site in site_ids:
        for _ in range(rng.randint(0, 2)):
            a, b = f"p{serial}", f"p{serial + 1}"
            serial += 2
            persons += [
                Person(a, a.upper(), site, frozenset({"developer"})),
                Person(b, b.upper(), site, frozenset({"developer"})),
            ]
            pairs.append(PairStore(f"ws{len(pairs) + 1}", (a, b)))
        for _ in range(rng.randint(0, 2)):
            pid = f"p{serial}"
            serial += 1
            role = rng.choice(["coordinator", "customer"])
            persons.append(Person(pid, pid.upper(), site, frozenset({role})))
    documents = tuple(
        DocumentSpec(
            id=f"doc{i}",
            name=f"Doc {i}",
            responsible_site_id=rng.choice(site_ids),
            written_by=frozenset(rng.sample(["developer", "coordinator", "customer"], 1)),
            read_by=frozenset(rng.sample(["developer", "coordinator", "customer"],
                                         rng.randint(0, 2))),
        )
        for i in range(rng.randint(0, 2))
    )
    catalog = (
        Medium(id="rich", name="Rich", richness_rank=1,
               extra_channels=frozenset({"audio", "video"})),
        Medium(id="poor", name="Poor", richness_rank=2, extra_channels=frozenset({"text"})),
    )
    activities = []
    assignments = []
    for index in range(rng.randint(0, 3)):
        aid = f"act{index}"
        if rng.random() < 0.5:
            trigger = Scheduled(Cadence.EVERY_MORNING, time(9, 0), frozenset({1}))
        else:
            trigger = EventDriven(rng.choice(list(EventKindTrigger)))
        activities.append(
            CommunicationActivity(
                id=aid,
                name=aid.upper(),
                goal="g",
                trigger=trigger,
                participants=Participants(scope=rng.choice(SCOPES)),
            )
        )
        assignments.append(MediumAssignment(activity_id=aid, medium_id=rng.choice(["rich", "poor"])))
    team = TeamSpec(sites=sites, persons=tuple(persons), pairs=tuple(pairs), documents=documents)
    strategy = CommunicationStrategy(
        activities=tuple(activities), assignments=tuple(assignments), catalog=catalog
    )
    return team, strategy


class TestCensusAgainstOracle:
    def test_random_small_teams_match_enumeration(self):
        rng = random.Random(1234)
        for _ in range(150):
            team, strategy = random_team_and_strategy(rng)
            expected = census_oracle(team, strategy)
            built = build_target_map(team, strategy)
            assert len(built.sites) == expected["sites"]
            assert len(built.persons) == expected["persons"]
            assert len(built.pairs) == expected["pairs"]
            assert len(built.documents) == expected["documents"]
            assert len(built.flows) == expected["flows"]
            built_edges = {
                (f.from_id, f.to_id)
                for f in built.flows
                if not f.from_id.startswith("doc") and not f.to_id.startswith("doc")
            }
            assert built_edges == expected["activity_edges"]
            assert validate_map(built) == []

    def test_ad_hoc_only_edges_are_weak_cross_site(self):
        team = TeamSpec(
            sites=(Site("a", "A"), Site("b", "B")),
            persons=(
                Person("p1", "P1", "a", frozenset({"developer"})),
                Person("p2", "P2", "b", frozenset({"developer"})),
            ),
        )
        catalog = (Medium(id="rich", name="Rich", richness_rank=1,
                          extra_channels=frozenset({"audio"})),)
        strategy = CommunicationStrategy(
            activities=(
                CommunicationActivity(
                    id="chatter",
                    name="Chatter",
                    goal="",
                    trigger=EventDriven(EventKindTrigger.AD_HOC),
                    participants=Participants(scope=Scope.WHOLE_TEAM),
                ),
            ),
            assignments=(MediumAssignment(activity_id="chatter", medium_id="rich"),),
            catalog=catalog,
        )
        built = build_target_map(team, strategy)
        assert len(built.flows) == 1
        assert built.flows[0].strength is FlowStrength.WEAK
        assert built.flows[0].medium_id == "rich"

    def test_scheduled_activity_makes_cross_site_edges_regular(self):
        team = TeamSpec(
            sites=(Site("a", "A"), Site("b", "B")),
            persons=(
                Person("p1", "P1", "a", frozenset({"developer"})),
                Person("p2", "P2", "b", frozenset({"developer"})),
            ),
        )
        catalog = (Medium(id="rich", name="Rich", richness_rank=1,
                          extra_channels=frozenset({"audio"})),)
        strategy = CommunicationStrategy(
            activities=(
                CommunicationActivity(
                    id="sync",
                    name="Sync",
                    goal="",
                    trigger=Scheduled(Cadence.EVERY_MORNING, time(9, 0), frozenset({1})),
                    participants=Participants(scope=Scope.WHOLE_TEAM),
                ),
                CommunicationActivity(
                    id="chatter",
                    name="Chatter",
                    goal="",
                    trigger=EventDriven(EventKindTrigger.AD_HOC),
                    participants=Participants(scope=Scope.WHOLE_TEAM),
                ),
            ),
            assignments=(
                MediumAssignment(activity_id="sync", medium_id="rich"),
                MediumAssignment(activity_id="chatter", medium_id="rich"),
            ),
            catalog=catalog,
        )
        built = build_target_map(team, strategy)
        assert built.flows[0].strength is FlowStrength.REGULAR


class TestActivityMaps:
    def test_planning_game_has_moderator_hub_and_mindmap(self, team, strategy):
        planning = strategy.activity("planning-game")
        assignment = strategy.assignment_for("planning-game")
        built = build_activity_map(planning, assignment, team)
        assert built.kind is MapKind.ACTIVITY_SPECIFIC
        assert [d.name for d in built.documents] == ["Shared mind map"]
        mindmap = built.documents[0]
        hub_flows = [f for f in built.flows if "karl" in (f.from_id, f.to_id)]
        # moderator talks to 4 pairs + customer + remote coordinator, writes the map
        assert len(hub_flows) == 7
        writes = [f for f in built.flows if f.to_id == mindmap.id]
        assert [f.from_id for f in writes] == ["karl"]
        reads = {f.to_id for f in built.flows if f.from_id == mindmap.id}
        assert reads == {"ws1", "ws2", "ws3", "ws4", "otto", "lena"}
        cross = [
            f for f in built.flows
            if built.store_site(f.from_id) != built.store_site(f.to_id)
        ]
        assert cross and all(f.medium_id == "hq-video" for f in cross)

    def test_two_pair_collaboration_map(self, strategy):
        team = TeamSpec(
            sites=(Site("a", "A"), Site("b", "B")),
            persons=(
                Person("p1", "P1", "a", frozenset({"developer"})),
                Person("p2", "P2", "a", frozenset({"developer"})),
                Person("p3", "P3", "b", frozenset({"developer"})),
                Person("p4", "P4", "b", frozenset({"developer"})),
            ),
            pairs=(PairStore("wa", ("p1", "p2")), PairStore("wb", ("p3", "p4"))),
        )
        collab = strategy.activity("informal-collaboration")
        assignment = strategy.assignment_for("informal-collaboration")
        built = build_activity_map(collab, assignment, team)
        assert len(built.pairs) == 2
        assert len(built.flows) == 1
        flow = built.flows[0]
        assert (flow.from_id, flow.to_id) == ("wa", "wb")
        assert flow.medium_id == "skype-call"
        assert flow.state is InformationState.FLUID
        assert "shared-desktop" in (flow.label or "")

    def test_single_participant_map_has_no_flows(self, strategy):
        team = TeamSpec(
            sites=(Site("a", "A"),),
            persons=(Person("solo", "Solo", "a", frozenset({"developer"})),),
        )
        activity = CommunicationActivity(
            id="notes",
            name="Notes",
            goal="write things down",
            trigger=EventDriven(EventKindTrigger.AD_HOC),
            participants=Participants(scope=Scope.CUSTOM, ids=frozenset({"solo"})),
        )
        assignment = MediumAssignment(activity_id="notes", medium_id="skype-chat")
        built = build_activity_map(activity, assignment, team)
        assert len(built.persons) == 1
        assert built.flows == ()


class TestValidateTeam:
    def test_bundled_team_is_clean(self, team, strategy):
        assert [i for i in validate_team(team, strategy) if i.severity == "error"] == []

    def test_unknown_contact_channel(self, team, strategy):
        patched_persons = tuple(
            replace(p, yellow_pages=replace(p.yellow_pages, contact=(("fax", "123"),)))
            if p.id == "anna"
            else p
            for p in team.persons
        )
        broken = replace(team, persons=patched_persons)
        codes = [i.code for i in validate_team(broken, strategy)]
        assert "unknown-contact-channel" in codes

    def test_unknown_document_role_is_warning(self, team, strategy):
        patched = replace(
            team,
            documents=team.documents
            + (DocumentSpec(id="wiki", name="Wiki", responsible_site_id="luh",
                            written_by=frozenset({"librarian"})),),
        )
        issues = validate_team(patched, strategy)
        assert any(i.code == "unknown-role" and i.severity == "warning" for i in issues)
