"""Concept statistics and the semantic space.

Builds occurrence/co-occurrence counts over a corpus, derives the directed
concept-correlation matrix from them, and computes the shot-to-shot
similarity space used by classification and the exploration graph.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

import numpy as np

from shotgraph import kernels
from shotgraph.model import ConceptLexicon, ConceptVector, Corpus, DetectionRecord


class ConceptCounts:
    """Occurrence and pairwise co-occurrence shot counts over a corpus.

    cooccur(i, i) equals occur(i); counts are symmetric and bounded by the
    smaller of the two occurrence counts.
    """

    __slots__ = ("lexicon", "total_shots", "_matrix")

    def __init__(self, lexicon: ConceptLexicon, matrix: np.ndarray, total_shots: int) -> None:
        self.lexicon = lexicon
        self.total_shots = total_shots
        self._matrix = matrix  # (C, C) int64, symmetric

    def occur(self, concept_id: int) -> int:
        i = self.lexicon.index_of(concept_id)
        return int(self._matrix[i, i])

    def cooccur(self, ci: int, cj: int) -> int:
        return int(self._matrix[self.lexicon.index_of(ci), self.lexicon.index_of(cj)])


class CorrelationMatrix:
    """Directed concept-to-concept weights in [0, 1], dense over the lexicon."""

    __slots__ = ("lexicon", "values")

    def __init__(self, lexicon: ConceptLexicon, values: np.ndarray) -> None:
        if values.shape != (len(lexicon), len(lexicon)):
            raise ValueError(
                f"correlation matrix shape {values.shape} does not match "
                f"lexicon size {len(lexicon)}"
            )
        self.lexicon = lexicon
        self.values = np.ascontiguousarray(values, dtype=np.float64)

    @classmethod
    def from_entries(
        cls, lexicon: ConceptLexicon, entries: Iterable[tuple[int, int, float]]
    ) -> "CorrelationMatrix":
        """Build a matrix from (source_id, target_id, weight) triples; missing entries are 0."""
        values = np.zeros((len(lexicon), len(lexicon)), dtype=np.float64)
        for src, dst, weight in entries:
            values[lexicon.index_of(src), lexicon.index_of(dst)] = weight
        return cls(lexicon, values)

    def weight(self, src: int, dst: int) -> float:
        return float(self.values[self.lexicon.index_of(src), self.lexicon.index_of(dst)])

    def entries(self) -> Iterator[tuple[int, int, float]]:
        """Nonzero (source_id, target_id, weight) triples in ascending id order."""
        ids = self.lexicon.ids
        for i, src in enumerate(ids):
            row = self.values[i]
            for j, dst in enumerate(ids):
                if row[j] != 0.0:
                    yield src, dst, float(row[j])


class SimilarityMatrix:
    """Directed and symmetrized shot-to-shot similarities over indexed shots.

    Shots with empty concept vectors are excluded entirely and listed in
    ``unindexed``.
    """

    __slots__ = ("shot_ids", "unindexed", "_directed", "_pos")

    def __init__(
        self,
        shot_ids: Iterable[str],
        directed: np.ndarray,
        unindexed: Iterable[str] = (),
    ) -> None:
        self.shot_ids = tuple(shot_ids)
        if directed.shape != (len(self.shot_ids), len(self.shot_ids)):
            raise ValueError(
                f"directed matrix shape {directed.shape} does not match "
                f"{len(self.shot_ids)} shots"
            )
        self._directed = np.ascontiguousarray(directed, dtype=np.float64)
        self._pos = {sid: i for i, sid in enumerate(self.shot_ids)}
        self.unindexed = frozenset(unindexed)

    def __contains__(self, shot_id: str) -> bool:
        return shot_id in self._pos

    def __len__(self) -> int:
        return len(self.shot_ids)

    def directed(self, a: str, b: str) -> float:
        return float(self._directed[self._pos[a], self._pos[b]])

    def symmetric(self, a: str, b: str) -> float:
        i, j = self._pos[a], self._pos[b]
        return float((self._directed[i, j] + self._directed[j, i]) / 2.0)

    def symmetric_array(self) -> np.ndarray:
        """Full symmetrized matrix, rows/cols in shot_ids order."""
        return (self._directed + self._directed.T) / 2.0

    def directed_array(self) -> np.ndarray:
        """Raw directed matrix, rows/cols in shot_ids order (read-only view)."""
        view = self._directed.view()
        view.flags.writeable = False
        return view

    def entries(self) -> Iterator[tuple[int, int, float]]:
        """Nonzero directed entries as (row_index, col_index, value)."""
        n = len(self.shot_ids)
        for i in range(n):
            row = self._directed[i]
            for j in range(n):
                if row[j] != 0.0:
                    yield i, j, float(row[j])


def binarize_detections(
    records: Iterable[DetectionRecord], tau: float
) -> dict[str, frozenset[int]]:
    """Turn probabilistic detections into per-shot concept sets.

    A shot carries a concept iff its detection score is >= tau; shots whose
    records all fall below tau map to an empty set.
    """
    membership: dict[str, set[int]] = {}
    for rec in records:
        shot = membership.setdefault(rec.shot_id, set())
        if rec.score >= tau:
            shot.add(rec.concept_id)
    return {sid: frozenset(cs) for sid, cs in membership.items()}


def concept_counts(corpus: Corpus) -> ConceptCounts:
    """Count, for every concept and concept pair, the shots carrying them."""
    lexicon = corpus.lexicon
    n_concepts = len(lexicon)
    occupancy = np.zeros((len(corpus.shots), n_concepts), dtype=np.int64)
    for row, rec in enumerate(corpus.shots):
        for cid in rec.vector.concepts:
            occupancy[row, lexicon.index_of(cid)] = 1
    matrix = occupancy.T @ occupancy
    return ConceptCounts(lexicon, matrix, total_shots=len(corpus.shots))


def concept_correlation(counts: ConceptCounts, src: int, dst: int) -> float:
    """Directed correlation weight from src to dst.

    The fraction of src-carrying shots that also carry dst; 1.0 exactly when
    dst subsumes src in the corpus, 0.0 when src never occurs.
    """
    n_src = counts.occur(src)
    if n_src == 0:
        return 0.0
    return counts.cooccur(src, dst) / n_src


def correlation_matrix(corpus: Corpus) -> CorrelationMatrix:
    """Directed correlation weights for every ordered concept pair."""
    counts = concept_counts(corpus)
    raw = counts._matrix
    occur = np.diagonal(raw).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(occur[:, None] > 0, raw / occur[:, None], 0.0)
    return CorrelationMatrix(corpus.lexicon, values)


def shot_similarity(a: ConceptVector, b: ConceptVector, corr: CorrelationMatrix) -> float:
    """Directed similarity from shot a to shot b.

    Averages, over a's concepts, the best correlation into any of b's
    concepts. Equals 1.0 when the vectors are identical and 0.0 when no
    concept of a correlates with any concept of b.
    """
    if not a.is_indexed:
        raise ValueError(f"unindexed shot {a.shot_id!r} (empty concept vector)")
    if not b.is_indexed:
        raise ValueError(f"unindexed shot {b.shot_id!r} (empty concept vector)")
    lexicon = corr.lexicon
    values = corr.values
    cols = sorted(lexicon.index_of(c) for c in b.concepts)
    acc = 0.0
    for ca in sorted(lexicon.index_of(c) for c in a.concepts):
        best = 0.0
        for cb in cols:
            w = values[ca, cb]
            if w > best:
                best = w
        acc += best
    return acc / a.n


def similarity_matrix(corpus: Corpus, corr: CorrelationMatrix) -> SimilarityMatrix:
    """Directed similarities for all ordered pairs of indexed shots.

    The correlation matrix must have been computed over the same lexicon.
    The pairwise fill runs in the compiled kernel when available.
    """
    if corr.lexicon != corpus.lexicon:
        raise ValueError("correlation matrix lexicon does not match the corpus")
    indexed = corpus.indexed()
    lexicon = corpus.lexicon

    indptr = np.zeros(len(indexed) + 1, dtype=np.int32)
    flat: list[int] = []
    for i, rec in enumerate(indexed):
        flat.extend(sorted(lexicon.index_of(c) for c in rec.vector.concepts))
        indptr[i + 1] = len(flat)
    concept_idx = np.asarray(flat, dtype=np.int32)

    out = np.zeros((len(indexed), len(indexed)), dtype=np.float64)
    kernels.similarity_fill(indptr, concept_idx, corr.values, out)
    return SimilarityMatrix(
        (rec.shot_id for rec in indexed), out, unindexed=corpus.unindexed_ids()
    )
