import random
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from flowkit.strategy import (
    CommunicationActivity,
    DuplicateRank,
    EventDriven,
    EventKindTrigger,
    Medium,
    MediumAssignment,
    NoFeasibleMedium,
    Participants,
    Scope,
    choose_medium,
    default_catalog,
    rank_media,
    validate_strategy,
)

from oracles import brute_force_choose


def activity(required=(), scope=Scope.WHOLE_TEAM):
    return CommunicationActivity(
        id="collab",
        name="Collaboration",
        goal="work together",
        trigger=EventDriven(EventKindTrigger.AD_HOC),
        participants=Participants(scope=scope),
        required_channels=frozenset(required),
    )


class TestRankMedia:
    def test_default_catalog_order(self):
        ordered = [m.id for m in rank_media(default_catalog())]
        assert ordered == [
            "face-to-face",
            "hq-video",
            "call",
            "personal-document",
            "impersonal-document",
        ]

    def test_singleton(self):
        only = Medium(id="m", name="M", richness_rank=3)
        assert rank_media([only]) == [only]

    def test_duplicate_rank_rejected(self):
        catalog = [Medium(id="a", name="A", richness_rank=1),
                   Medium(id="b", name="B", richness_rank=1)]
        with pytest.raises(DuplicateRank):
            rank_media(catalog)

    @given(st.permutations(list(range(1, 8))))
    def test_shuffled_input_same_output(self, ranks):
        media = [Medium(id=f"m{r}", name=f"M{r}", richness_rank=r) for r in ranks]
        ordered = rank_media(media)
        assert [m.richness_rank for m in ordered] == sorted(ranks)
        assert sorted(m.id for m in ordered) == sorted(m.id for m in media)


class TestChooseMedium:
    def test_planning_game_gets_video_plus_mindmap(self, strategy):
        planning = strategy.activity("planning-game")
        chosen = choose_medium(planning, strategy.catalog, {"luh", "tuc"})
        assert chosen.medium_id == "hq-video"
        assert chosen.added_channels == frozenset({"shared-mindmap"})

    def test_single_site_gets_face_to_face(self, strategy):
        chosen = choose_medium(strategy.activity("stand-up"), strategy.catalog, {"luh"})
        assert chosen.medium_id == "face-to-face"

    def test_story_acceptance_without_video_rooms_falls_back_to_call(self, strategy):
        story = strategy.activity("story-acceptance")
        catalog = tuple(
            replace(m, available_at=frozenset({"luh"})) if m.id == "hq-video" else m
            for m in strategy.catalog
        )
        chosen = choose_medium(story, catalog, {"luh", "tuc"})
        assert chosen.medium_id == "skype-call"
        assert chosen.added_channels == frozenset({"shared-desktop"})

    def test_unknown_channel_everywhere_is_infeasible(self, strategy):
        needy = activity(required=("telepathy",))
        with pytest.raises(NoFeasibleMedium):
            choose_medium(needy, strategy.catalog, {"luh"})

    def test_empty_sites_rejected(self, strategy):
        with pytest.raises(ValueError):
            choose_medium(activity(), strategy.catalog, set())


CHANNELS = ["audio", "video", "text", "shared-desktop", "shared-mindmap", "status-broadcast"]
SITES = ["s1", "s2", "s3"]


def random_catalog(rng: random.Random) -> list[Medium]:
    count = rng.randint(1, 6)
    ranks = rng.sample(range(1, 20), count)
    media = []
    for index in range(count):
        availability = frozenset(rng.sample(SITES, rng.randint(0, len(SITES))))
        media.append(
            Medium(
                id=f"m{index}",
                name=f"M{index}",
                richness_rank=ranks[index],
                requires_colocation=rng.random() < 0.25,
                available_at=availability,
                extra_channels=frozenset(rng.sample(CHANNELS, rng.randint(0, 4))),
            )
        )
    return media


def random_case(rng: random.Random):
    catalog = random_catalog(rng)
    required = frozenset(rng.sample(CHANNELS, rng.randint(0, 2)))
    sites = set(rng.sample(SITES, rng.randint(1, len(SITES))))
    return replace(activity(), required_channels=required), catalog, sites


class TestChooseMediumAgainstOracle:
    def test_matches_brute_force_on_random_catalogs(self):
        rng = random.Random(20100823)
        for _ in range(200):
            act, catalog, sites = random_case(rng)
            expected = brute_force_choose(act, catalog, sites)
            if expected is None:
                with pytest.raises(NoFeasibleMedium):
                    choose_medium(act, catalog, sites)
            else:
                chosen = choose_medium(act, catalog, sites)
                assert (chosen.medium_id, chosen.added_channels) == expected

    def test_removing_a_non_chosen_medium_keeps_the_choice(self):
        # Removing a medium can only disturb the choice when it was the
        # catalog's sole supplier of a channel the activity needs: added
        # channels must stay within the catalog's tag vocabulary.
        rng = random.Random(42)
        checked = 0
        while checked < 100:
            act, catalog, sites = random_case(rng)
            if brute_force_choose(act, catalog, sites) is None or len(catalog) < 2:
                continue
            chosen = choose_medium(act, catalog, sites)
            loser = None
            for medium in catalog:
                if medium.id == chosen.medium_id:
                    continue
                rest = [m for m in catalog if m.id != medium.id]
                vocabulary = set()
                for m in rest:
                    vocabulary |= set(m.extra_channels)
                if set(act.required_channels) <= vocabulary | set(
                    next(m for m in rest if m.id == chosen.medium_id).extra_channels
                ):
                    loser = medium
                    break
            if loser is None:
                continue
            reduced = [m for m in catalog if m.id != loser.id]
            assert choose_medium(act, reduced, sites) == chosen
            checked += 1

    def test_removing_the_chosen_medium_yields_next_richest_or_error(self):
        rng = random.Random(7)
        checked = 0
        while checked < 100:
            act, catalog, sites = random_case(rng)
            if brute_force_choose(act, catalog, sites) is None:
                continue
            chosen = choose_medium(act, catalog, sites)
            reduced = [m for m in catalog if m.id != chosen.medium_id]
            expected = brute_force_choose(act, reduced, sites)
            if expected is None:
                with pytest.raises(NoFeasibleMedium):
                    choose_medium(act, reduced, sites)
            else:
                next_choice = choose_medium(act, reduced, sites)
                assert (next_choice.medium_id, next_choice.added_channels) == expected
            checked += 1


class TestValidateStrategy:
    def test_bundled_strategy_is_clean(self, strategy):
        assert [i for i in validate_strategy(strategy) if i.severity == "error"] == []

    def test_unassigned_activity(self, strategy):
        stripped = replace(strategy, assignments=strategy.assignments[1:])
        codes = [i.code for i in validate_strategy(stripped)]
        assert "unassigned-activity" in codes

    def test_dangling_medium(self, strategy):
        broken = replace(
            strategy,
            assignments=strategy.assignments[:-1]
            + (MediumAssignment(activity_id="status-update", medium_id="carrier-pigeon"),),
        )
        codes = [i.code for i in validate_strategy(broken)]
        assert "dangling-medium" in codes

    def test_duplicate_rank_reported(self, strategy):
        clashing = replace(
            strategy,
            catalog=strategy.catalog
            + (Medium(id="extra", name="Extra", richness_rank=1),),
        )
        codes = [i.code for i in validate_strategy(clashing)]
        assert "duplicate-rank" in codes

    def test_uncovered_required_channel(self, strategy):
        broken = replace(
            strategy,
            assignments=tuple(
                replace(a, added_channels=frozenset()) if a.activity_id == "planning-game" else a
                for a in strategy.assignments
            ),
        )
        codes = [i.code for i in validate_strategy(broken)]
        assert "channel-mismatch" in codes

    def test_paid_daily_medium_is_a_warning_not_an_error(self, strategy):
        from flowkit.strategy import MonetaryCost

        pricey = replace(
            strategy,
            catalog=tuple(
                replace(m, monetary_cost=MonetaryCost.PAID) if m.id == "hq-video" else m
                for m in strategy.catalog
            ),
        )
        issues = validate_strategy(pricey)
        warnings = [i for i in issues if i.severity == "warning"]
        errors = [i for i in issues if i.severity == "error"]
        assert any(i.code == "costly-medium" for i in warnings)
        assert errors == []
