"""Partition indexed shots into semantic classes.

Classes are the connected components of the graph whose edges are shot
pairs with symmetrized similarity above a threshold; each class is
represented by its medoid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from shotgraph.semantics import SimilarityMatrix


@dataclass(frozen=True)
class SemanticClass:
    class_id: int
    members: tuple[str, ...]  # ascending shot_id
    medoid: str


@dataclass(frozen=True)
class ClassPartition:
    """Disjoint, covering partition of the indexed shots, plus the quarantined rest."""

    classes: tuple[SemanticClass, ...]
    unindexed: frozenset[str]
    theta: float

    def class_of(self, shot_id: str) -> SemanticClass:
        for cls in self.classes:
            if shot_id in cls.members:
                return cls
        raise KeyError(shot_id)


def medoid(members: Iterable[str], sim: SimilarityMatrix) -> str:
    """Class member with the greatest total similarity to the other members.

    Ties break toward the ascending shot_id. Raises on an empty member set.
    """
    ordered = sorted(members)
    if not ordered:
        raise ValueError("medoid of an empty shot set")
    best_id = ordered[0]
    best_sum = -1.0
    for candidate in ordered:
        total = 0.0
        for other in ordered:
            if other != candidate:
                total += sim.symmetric(candidate, other)
        if total > best_sum:
            best_sum = total
            best_id = candidate
    return best_id


def classify(sim: SimilarityMatrix, theta: float) -> ClassPartition:
    """Partition the indexed shots at similarity threshold theta.

    Classes are connected components over edges with symmetric(A, B) >= theta;
    singletons are legitimate classes. The result does not depend on shot
    iteration order: class ids are assigned by ascending smallest member.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must be in [0, 1], got {theta}")

    n = len(sim.shot_ids)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    sym = sim.symmetric_array()
    for i, j in zip(*np.nonzero(np.triu(sym >= theta, k=1))):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[str]] = {}
    for idx, shot_id in enumerate(sim.shot_ids):
        groups.setdefault(find(idx), []).append(shot_id)

    classes = []
    for class_id, members in enumerate(sorted(groups.values(), key=lambda m: min(m))):
        ordered = tuple(sorted(members))
        classes.append(SemanticClass(class_id, ordered, medoid(ordered, sim)))
    return ClassPartition(tuple(classes), unindexed=sim.unindexed, theta=theta)


def class_similarity(c1: SemanticClass, c2: SemanticClass, sim: SimilarityMatrix) -> float:
    """Similarity between two classes: the symmetric similarity of their medoids."""
    return sim.symmetric(c1.medoid, c2.medoid)
