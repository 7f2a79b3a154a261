"""Corpus data model shared by every pipeline stage.

A corpus couples a concept lexicon with an ordered list of shots; each shot
carries one keyframe path and the set of concepts detected in it. Instances
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class ConceptLexicon:
    """Fixed catalogue of (concept_id, concept_name) pairs.

    Iteration order is ascending concept_id, which pins the ordering of every
    downstream matrix row and export. Ids and names are both unique; names
    are matched case-sensitively.
    """

    __slots__ = ("_ids", "_names", "_pos", "_id_by_name")

    def __init__(self, entries: Iterable[tuple[int, str]]) -> None:
        ordered = sorted(entries, key=lambda e: e[0])
        ids: list[int] = []
        names: list[str] = []
        pos: dict[int, int] = {}
        id_by_name: dict[str, int] = {}
        for cid, name in ordered:
            if cid < 1:
                raise ValueError(f"concept id must be a positive integer, got {cid}")
            if not name:
                raise ValueError(f"concept {cid} has an empty name")
            if cid in pos:
                raise ValueError(f"duplicate concept id {cid}")
            if name in id_by_name:
                raise ValueError(f"duplicate concept name {name!r}")
            pos[cid] = len(ids)
            id_by_name[name] = cid
            ids.append(cid)
            names.append(name)
        self._ids = tuple(ids)
        self._names = tuple(names)
        self._pos = pos
        self._id_by_name = id_by_name

    @property
    def ids(self) -> tuple[int, ...]:
        return self._ids

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def __len__(self) -> int:
        return len(self._ids)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(zip(self._ids, self._names))

    def __contains__(self, concept_id: int) -> bool:
        return concept_id in self._pos

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConceptLexicon):
            return NotImplemented
        return self._ids == other._ids and self._names == other._names

    def __hash__(self) -> int:
        return hash((self._ids, self._names))

    def __repr__(self) -> str:
        return f"ConceptLexicon({len(self._ids)} concepts)"

    def name_of(self, concept_id: int) -> str:
        return self._names[self._pos[concept_id]]

    def id_of(self, name: str) -> int:
        return self._id_by_name[name]

    def index_of(self, concept_id: int) -> int:
        """Dense position of a concept in ascending-id order (matrix row index)."""
        return self._pos[concept_id]


@dataclass(frozen=True)
class DetectionRecord:
    """One raw detector output: probability that a concept occurs in a shot."""

    shot_id: str
    concept_id: int
    score: float
    rank: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(
                f"detection score for ({self.shot_id}, {self.concept_id}) "
                f"outside [0, 1]: {self.score}"
            )
        if self.rank is not None and self.rank < 1:
            raise ValueError(f"detection rank must be positive, got {self.rank}")


@dataclass(frozen=True)
class ConceptVector:
    """Set of concepts detected in one shot."""

    shot_id: str
    concepts: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "concepts", frozenset(self.concepts))

    @property
    def n(self) -> int:
        return len(self.concepts)

    @property
    def is_indexed(self) -> bool:
        """Shots with no detected concepts are quarantined from similarity."""
        return bool(self.concepts)


@dataclass(frozen=True)
class ShotRecord:
    """A shot is a keyframe image plus the concept vector describing it."""

    shot_id: str
    video_id: str
    keyframe_path: str
    vector: ConceptVector


class Corpus:
    """Immutable shot collection bound to a lexicon.

    Shots are kept in ascending shot_id order; that order is the canonical
    one for every deterministic output.
    """

    __slots__ = ("lexicon", "shots", "_by_id")

    def __init__(self, lexicon: ConceptLexicon, shots: Iterable[ShotRecord]) -> None:
        self.lexicon = lexicon
        self.shots: tuple[ShotRecord, ...] = tuple(
            sorted(shots, key=lambda s: s.shot_id)
        )
        by_id: dict[str, ShotRecord] = {}
        for rec in self.shots:
            by_id.setdefault(rec.shot_id, rec)
        self._by_id = by_id

    def __len__(self) -> int:
        return len(self.shots)

    def __iter__(self) -> Iterator[ShotRecord]:
        return iter(self.shots)

    def __contains__(self, shot_id: str) -> bool:
        return shot_id in self._by_id

    def shot(self, shot_id: str) -> ShotRecord:
        return self._by_id[shot_id]

    def indexed(self) -> tuple[ShotRecord, ...]:
        """Shots carrying at least one concept, in canonical order."""
        return tuple(rec for rec in self.shots if rec.vector.is_indexed)

    def unindexed_ids(self) -> frozenset[str]:
        return frozenset(rec.shot_id for rec in self.shots if not rec.vector.is_indexed)


def validate_corpus(corpus: Corpus) -> list[str]:
    """Check every corpus invariant, returning one diagnostic per violation.

    An empty list means the corpus is safe for every downstream operation.
    Diagnostics name the offending shot or concept and the violated rule.
    """
    diagnostics: list[str] = []
    seen: set[str] = set()
    for rec in corpus.shots:
        if rec.shot_id in seen:
            diagnostics.append(f"duplicate shot_id {rec.shot_id!r}")
            continue
        seen.add(rec.shot_id)
        if not rec.shot_id:
            diagnostics.append("shot with empty shot_id")
        if not rec.keyframe_path:
            diagnostics.append(f"shot {rec.shot_id!r} has an empty keyframe_path")
        if rec.vector.shot_id != rec.shot_id:
            diagnostics.append(
                f"shot {rec.shot_id!r} carries a vector labelled {rec.vector.shot_id!r}"
            )
        for cid in sorted(rec.vector.concepts):
            if cid not in corpus.lexicon:
                diagnostics.append(
                    f"shot {rec.shot_id!r} references concept {cid} absent from the lexicon"
                )
    return diagnostics
