"""User profiles, the preference weight, and persistence."""

from __future__ import annotations

import threading

import pytest

from shotgraph.profile import (
    EVENT_CLICK,
    EVENT_DWELL,
    InteractionEvent,
    ProfileStore,
    ShotStats,
    UserProfile,
    profile_from_document,
    profile_to_document,
    record_event,
    user_weight,
)


class TestInteractionEvent:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            InteractionEvent("u", "s1", "hover")

    def test_dwell_requires_duration(self):
        with pytest.raises(ValueError, match="dwell_seconds"):
            InteractionEvent("u", "s1", EVENT_DWELL)
        with pytest.raises(ValueError, match="dwell_seconds"):
            InteractionEvent("u", "s1", EVENT_DWELL, dwell_seconds=0.0)

    def test_click_must_not_carry_duration(self):
        with pytest.raises(ValueError, match="click"):
            InteractionEvent("u", "s1", EVENT_CLICK, dwell_seconds=3.0)


class TestUserWeight:
    def test_untouched_shot_is_zero(self):
        assert user_weight(UserProfile.empty("u"), "s1") == 0.0

    def test_single_click_is_half(self):
        profile = UserProfile("u", {"s1": ShotStats(clicks=1)})
        assert user_weight(profile, "s1") == 0.5

    def test_three_clicks_two_minutes(self):
        profile = UserProfile("u", {"s1": ShotStats(clicks=3, dwell_seconds=120.0)})
        assert user_weight(profile, "s1") == 5 / 6

    def test_strictly_increasing_in_both_indicators(self):
        base = user_weight(UserProfile("u", {"s": ShotStats(clicks=2, dwell_seconds=30)}), "s")
        more_clicks = user_weight(
            UserProfile("u", {"s": ShotStats(clicks=3, dwell_seconds=30)}), "s"
        )
        more_dwell = user_weight(
            UserProfile("u", {"s": ShotStats(clicks=2, dwell_seconds=31)}), "s"
        )
        assert more_clicks > base
        assert more_dwell > base

    def test_bounded_below_one(self):
        profile = UserProfile("u", {"s": ShotStats(clicks=10**6)})
        assert 0.0 < user_weight(profile, "s") < 1.0


class TestRecordEvent:
    def test_click_increments(self):
        profile = record_event(
            UserProfile.empty("u"), InteractionEvent("u", "s1", EVENT_CLICK, timestamp=5.0)
        )
        assert profile.stats["s1"].clicks == 1
        assert profile.stats["s1"].dwell_seconds == 0.0
        assert profile.stats["s1"].last_seen == 5.0

    def test_dwell_accumulates(self):
        profile = record_event(
            UserProfile.empty("u"), InteractionEvent("u", "s1", EVENT_CLICK)
        )
        profile = record_event(
            profile, InteractionEvent("u", "s1", EVENT_DWELL, dwell_seconds=30.0)
        )
        assert profile.stats["s1"].clicks == 1
        assert profile.stats["s1"].dwell_seconds == 30.0

    def test_other_entries_untouched(self):
        profile = UserProfile("u", {"s2": ShotStats(clicks=4)})
        updated = record_event(profile, InteractionEvent("u", "s1", EVENT_CLICK))
        assert updated.stats["s2"] == ShotStats(clicks=4)

    def test_original_profile_unchanged(self):
        profile = UserProfile.empty("u")
        record_event(profile, InteractionEvent("u", "s1", EVENT_CLICK))
        assert profile.stats == {}

    def test_unknown_shot_rejected_with_known_set(self):
        with pytest.raises(KeyError, match="s9"):
            record_event(
                UserProfile.empty("u"),
                InteractionEvent("u", "s9", EVENT_CLICK),
                known_shots={"s1", "s2"},
            )


class TestProfileDocument:
    def test_round_trip(self):
        profile = UserProfile(
            "u1",
            {"s1": ShotStats(clicks=2, dwell_seconds=12.5, last_seen=9.0)},
            {"language": "en"},
        )
        doc = profile_to_document(profile)
        back = profile_from_document(doc)
        assert back == profile

    def test_static_info_preserved_but_unused_by_weight(self):
        profile = UserProfile("u1", {}, {"age": "30"})
        assert user_weight(profile, "s1") == 0.0
        assert profile_to_document(profile)["static_info"] == {"age": "30"}


class TestProfileStore:
    def test_missing_user_loads_empty(self, tmp_path):
        store = ProfileStore(tmp_path)
        assert store.load("nobody") == UserProfile.empty("nobody")

    def test_apply_persists_across_instances(self, tmp_path):
        store = ProfileStore(tmp_path)
        store.apply(InteractionEvent("u1", "s1", EVENT_CLICK))
        store.apply(InteractionEvent("u1", "s1", EVENT_DWELL, dwell_seconds=30.0))
        fresh = ProfileStore(tmp_path)
        profile = fresh.load("u1")
        assert profile.stats["s1"].clicks == 1
        assert profile.stats["s1"].dwell_seconds == 30.0

    def test_user_id_with_path_characters_is_safe(self, tmp_path):
        store = ProfileStore(tmp_path)
        store.apply(InteractionEvent("a/../b", "s1", EVENT_CLICK))
        files = list(tmp_path.iterdir())
        assert len(files) == 1
        assert files[0].parent == tmp_path
        assert store.load("a/../b").stats["s1"].clicks == 1

    def test_known_shots_enforced(self, tmp_path):
        store = ProfileStore(tmp_path)
        with pytest.raises(KeyError):
            store.apply(InteractionEvent("u", "sX", EVENT_CLICK), known_shots={"s1"})
        assert store.load("u").stats == {}

    def test_concurrent_events_all_counted(self, tmp_path):
        store = ProfileStore(tmp_path)

        def clicker():
            for _ in range(20):
                store.apply(InteractionEvent("u", "s1", EVENT_CLICK))

        threads = [threading.Thread(target=clicker) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert store.load("u").stats["s1"].clicks == 80
