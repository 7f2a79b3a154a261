"""User profiles: interaction history and the per-shot preference weight.

A profile accumulates clicks and dwell time per shot. Profiles persist as
one JSON document per user, flushed after every event so personalization
survives a server restart.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Collection, Mapping
from urllib.parse import quote

EVENT_CLICK = "click"
EVENT_DWELL = "dwell"

# One click is worth this many seconds of dwell in the preference score.
DWELL_SECONDS_PER_CLICK = 60.0


@dataclass(frozen=True)
class ShotStats:
    clicks: int = 0
    dwell_seconds: float = 0.0
    last_seen: float | None = None


@dataclass(frozen=True)
class InteractionEvent:
    """A single user action on a shot: a click (stimulus) or a dwell period."""

    user_id: str
    shot_id: str
    kind: str
    dwell_seconds: float | None = None
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (EVENT_CLICK, EVENT_DWELL):
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.kind == EVENT_DWELL:
            if self.dwell_seconds is None or self.dwell_seconds <= 0:
                raise ValueError("dwell events require dwell_seconds > 0")
        elif self.dwell_seconds is not None:
            raise ValueError("click events must not carry dwell_seconds")


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    stats: Mapping[str, ShotStats] = field(default_factory=dict)
    static_info: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def empty(cls, user_id: str) -> "UserProfile":
        return cls(user_id=user_id)


def user_weight(profile: UserProfile, shot_id: str) -> float:
    """Per-shot preference in [0, 1).

    score = clicks + dwell_seconds / 60; the weight score / (score + 1) is 0
    for untouched shots, strictly increasing in both indicators, and
    saturates toward 1 so no single shot can dominate unboundedly.
    """
    stats = profile.stats.get(shot_id)
    if stats is None:
        return 0.0
    score = stats.clicks + stats.dwell_seconds / DWELL_SECONDS_PER_CLICK
    return score / (score + 1.0)


def record_event(
    profile: UserProfile,
    event: InteractionEvent,
    known_shots: Collection[str] | None = None,
) -> UserProfile:
    """Apply one event, returning the updated profile.

    When known_shots is given, events referencing other shots are rejected.
    Clicks add one to the shot's click count; dwells add their duration.
    """
    if known_shots is not None and event.shot_id not in known_shots:
        raise KeyError(f"unknown shot {event.shot_id!r}")
    stats = dict(profile.stats)
    current = stats.get(event.shot_id, ShotStats())
    if event.kind == EVENT_CLICK:
        current = replace(current, clicks=current.clicks + 1, last_seen=event.timestamp)
    else:
        current = replace(
            current,
            dwell_seconds=current.dwell_seconds + (event.dwell_seconds or 0.0),
            last_seen=event.timestamp,
        )
    stats[event.shot_id] = current
    return replace(profile, stats=stats)


def profile_to_document(profile: UserProfile) -> dict:
    return {
        "format": "profile",
        "format_version": "1",
        "user_id": profile.user_id,
        "static_info": dict(sorted(profile.static_info.items())),
        "stats": {
            sid: {
                "clicks": s.clicks,
                "dwell_seconds": s.dwell_seconds,
                "last_seen": s.last_seen,
            }
            for sid, s in sorted(profile.stats.items())
        },
    }


def profile_from_document(doc: dict) -> UserProfile:
    stats = {
        sid: ShotStats(
            clicks=int(entry.get("clicks", 0)),
            dwell_seconds=float(entry.get("dwell_seconds", 0.0)),
            last_seen=entry.get("last_seen"),
        )
        for sid, entry in doc.get("stats", {}).items()
    }
    return UserProfile(
        user_id=doc["user_id"],
        stats=stats,
        static_info=dict(doc.get("static_info", {})),
    )


class ProfileStore:
    """Per-user profile persistence under a directory, one JSON file per user.

    Events for one user are applied under an exclusive per-user lock;
    distinct users update concurrently. Reads return immutable snapshots.
    """

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry = threading.Lock()

    def _lock_for(self, user_id: str) -> threading.Lock:
        with self._registry:
            return self._locks.setdefault(user_id, threading.Lock())

    def _path_for(self, user_id: str) -> Path:
        return self.root / (quote(user_id, safe="") + ".json")

    def load(self, user_id: str) -> UserProfile:
        path = self._path_for(user_id)
        if not path.exists():
            return UserProfile.empty(user_id)
        return profile_from_document(json.loads(path.read_text(encoding="utf-8")))

    def save(self, profile: UserProfile) -> None:
        path = self._path_for(profile.user_id)
        text = json.dumps(profile_to_document(profile), indent=2, ensure_ascii=False)
        path.write_text(text + "\n", encoding="utf-8")

    def apply(
        self, event: InteractionEvent, known_shots: Collection[str] | None = None
    ) -> UserProfile:
        """Load, update, and flush the event's user profile atomically."""
        with self._lock_for(event.user_id):
            updated = record_event(self.load(event.user_id), event, known_shots)
            self.save(updated)
            return updated
