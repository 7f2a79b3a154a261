"""Canonical persistence for pipeline artifacts.

Every artifact is a versioned JSON document with fields in a fixed order,
so identical inputs always serialize to identical bytes. Downstream
documents embed the sha256 of their upstream documents; a mismatch means
the artifact was computed from a different input and must be rebuilt.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .classify import ClassPartition, SemanticClass
from .graph import ExplorationGraph, GraphEdge, GraphNode, ViewState
from .model import ConceptLexicon, ConceptVector, Corpus, ShotRecord
from .semantics import CorrelationMatrix, SimilarityMatrix

FORMAT_VERSION = "1"


class SchemaError(ValueError):
    """Raised when a document does not match its schema; names the JSON path."""


def content_hash(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"$: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$: document must be a JSON object")
    return doc


def _get(doc: Any, key: str, expected: type | tuple[type, ...], path: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{path}.{key}: missing")
    value = doc[key]
    if not isinstance(value, expected):
        names = (
            expected.__name__
            if isinstance(expected, type)
            else "/".join(t.__name__ for t in expected)
        )
        raise SchemaError(f"{path}.{key}: expected {names}, got {type(value).__name__}")
    return value


def _check_header(doc: dict, fmt: str) -> None:
    found = _get(doc, "format", str, "$")
    if found != fmt:
        raise SchemaError(f"$.format: expected {fmt!r}, got {found!r}")
    version = _get(doc, "format_version", str, "$")
    if version != FORMAT_VERSION:
        raise SchemaError(f"$.format_version: unsupported version {version!r}")


def _lexicon_to_list(lexicon: ConceptLexicon) -> list[list]:
    return [[cid, name] for cid, name in lexicon]


def _lexicon_from_list(raw: Any, path: str) -> ConceptLexicon:
    if not isinstance(raw, list):
        raise SchemaError(f"{path}: expected a list")
    entries: list[tuple[int, str]] = []
    for i, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError(f"{path}[{i}]: expected [id, name]")
        cid, name = pair
        if not isinstance(cid, int) or not isinstance(name, str):
            raise SchemaError(f"{path}[{i}]: expected [int, str]")
        entries.append((cid, name))
    try:
        return ConceptLexicon(entries)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def save_corpus(corpus: Corpus) -> str:
    doc = {
        "format": "corpus",
        "format_version": FORMAT_VERSION,
        "lexicon": _lexicon_to_list(corpus.lexicon),
        "shots": [
            {
                "shot_id": rec.shot_id,
                "video_id": rec.video_id,
                "keyframe_path": rec.keyframe_path,
                "concepts": sorted(rec.vector.concepts),
            }
            for rec in corpus.shots
        ],
    }
    return _dump(doc)


def load_corpus(text: str) -> Corpus:
    doc = _loads(text)
    _check_header(doc, "corpus")
    lexicon = _lexicon_from_list(_get(doc, "lexicon", list, "$"), "$.lexicon")
    shots: list[ShotRecord] = []
    for i, raw in enumerate(_get(doc, "shots", list, "$")):
        path = f"$.shots[{i}]"
        sid = _get(raw, "shot_id", str, path)
        concepts = _get(raw, "concepts", list, path)
        for j, cid in enumerate(concepts):
            if not isinstance(cid, int):
                raise SchemaError(f"{path}.concepts[{j}]: expected int")
            if cid not in lexicon:
                raise SchemaError(f"{path}.concepts[{j}]: concept {cid} not in lexicon")
        shots.append(
            ShotRecord(
                shot_id=sid,
                video_id=_get(raw, "video_id", str, path),
                keyframe_path=_get(raw, "keyframe_path", str, path),
                vector=ConceptVector(sid, frozenset(concepts)),
            )
        )
    return Corpus(lexicon, shots)


@dataclass(frozen=True)
class CorrelationArtifact:
    matrix: CorrelationMatrix
    corpus_hash: str


def save_correlation(matrix: CorrelationMatrix, corpus_hash: str) -> str:
    doc = {
        "format": "correlation",
        "format_version": FORMAT_VERSION,
        "corpus_hash": corpus_hash,
        "lexicon": _lexicon_to_list(matrix.lexicon),
        "values": [[float(v) for v in row] for row in matrix.values],
    }
    return _dump(doc)


def load_correlation(text: str) -> CorrelationArtifact:
    doc = _loads(text)
    _check_header(doc, "correlation")
    lexicon = _lexicon_from_list(_get(doc, "lexicon", list, "$"), "$.lexicon")
    values = _matrix_from_rows(_get(doc, "values", list, "$"), len(lexicon), "$.values")
    return CorrelationArtifact(
        matrix=CorrelationMatrix(lexicon, values),
        corpus_hash=_get(doc, "corpus_hash", str, "$"),
    )


def _matrix_from_rows(raw: list, n: int, path: str) -> np.ndarray:
    if len(raw) != n:
        raise SchemaError(f"{path}: expected {n} rows, got {len(raw)}")
    out = np.zeros((n, n), dtype=np.float64)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"{path}[{i}]: expected a list of {n} numbers")
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise SchemaError(f"{path}[{i}][{j}]: expected a number")
            out[i, j] = float(v)
    return out


@dataclass(frozen=True)
class SimilarityArtifact:
    sim: SimilarityMatrix
    corpus_hash: str
    correlation_hash: str


def save_similarity(sim: SimilarityMatrix, corpus_hash: str, correlation_hash: str) -> str:
    doc = {
        "format": "similarity",
        "format_version": FORMAT_VERSION,
        "corpus_hash": corpus_hash,
        "correlation_hash": correlation_hash,
        "shots": list(sim.shot_ids),
        "unindexed": sorted(sim.unindexed),
        "directed": [[float(v) for v in row] for row in sim.directed_array()],
    }
    return _dump(doc)


def load_similarity(text: str) -> SimilarityArtifact:
    doc = _loads(text)
    _check_header(doc, "similarity")
    shots = _get(doc, "shots", list, "$")
    for i, sid in enumerate(shots):
        if not isinstance(sid, str):
            raise SchemaError(f"$.shots[{i}]: expected str")
    unindexed = _get(doc, "unindexed", list, "$")
    directed = _matrix_from_rows(_get(doc, "directed", list, "$"), len(shots), "$.directed")
    return SimilarityArtifact(
        sim=SimilarityMatrix(tuple(shots), directed, frozenset(unindexed)),
        corpus_hash=_get(doc, "corpus_hash", str, "$"),
        correlation_hash=_get(doc, "correlation_hash", str, "$"),
    )


@dataclass(frozen=True)
class PartitionArtifact:
    partition: ClassPartition
    corpus_hash: str
    similarity_hash: str


def save_partition(partition: ClassPartition, corpus_hash: str, similarity_hash: str) -> str:
    doc = {
        "format": "partition",
        "format_version": FORMAT_VERSION,
        "corpus_hash": corpus_hash,
        "similarity_hash": similarity_hash,
        "theta": partition.theta,
        "classes": [
            {
                "class_id": cls.class_id,
                "members": list(cls.members),
                "medoid": cls.medoid,
            }
            for cls in partition.classes
        ],
        "unindexed": sorted(partition.unindexed),
    }
    return _dump(doc)


def load_partition(text: str) -> PartitionArtifact:
    doc = _loads(text)
    _check_header(doc, "partition")
    classes: list[SemanticClass] = []
    for i, raw in enumerate(_get(doc, "classes", list, "$")):
        path = f"$.classes[{i}]"
        members = _get(raw, "members", list, path)
        for j, sid in enumerate(members):
            if not isinstance(sid, str):
                raise SchemaError(f"{path}.members[{j}]: expected str")
        medoid = _get(raw, "medoid", str, path)
        if medoid not in members:
            raise SchemaError(f"{path}.medoid: {medoid!r} is not a member")
        classes.append(
            SemanticClass(
                class_id=_get(raw, "class_id", int, path),
                members=tuple(members),
                medoid=medoid,
            )
        )
    theta = _get(doc, "theta", (int, float), "$")
    return PartitionArtifact(
        partition=ClassPartition(
            classes=tuple(classes),
            unindexed=frozenset(_get(doc, "unindexed", list, "$")),
            theta=float(theta),
        ),
        corpus_hash=_get(doc, "corpus_hash", str, "$"),
        similarity_hash=_get(doc, "similarity_hash", str, "$"),
    )


@dataclass(frozen=True)
class GraphArtifact:
    graph: ExplorationGraph
    params: dict[str, float]
    corpus_hash: str
    partition_hash: str


def save_graph(
    graph: ExplorationGraph,
    params: dict[str, float],
    corpus_hash: str,
    partition_hash: str,
) -> str:
    doc = {
        "format": "graph",
        "format_version": FORMAT_VERSION,
        "corpus_hash": corpus_hash,
        "partition_hash": partition_hash,
        "params": {k: params[k] for k in sorted(params)},
        "nodes": [
            {
                "shot_id": node.shot_id,
                "keyframe_path": node.keyframe_path,
                "class_id": node.class_id,
                "is_medoid": node.is_medoid,
                "medoid_sim": node.medoid_sim,
            }
            for node in sorted(graph.nodes.values(), key=lambda n: n.shot_id)
        ],
        "edges": [
            {"src": e.src, "dst": e.dst, "weight": e.weight, "kind": e.kind}
            for e in graph.edges
        ],
    }
    return _dump(doc)


def load_graph(text: str) -> GraphArtifact:
    doc = _loads(text)
    _check_header(doc, "graph")
    nodes: list[GraphNode] = []
    for i, raw in enumerate(_get(doc, "nodes", list, "$")):
        path = f"$.nodes[{i}]"
        nodes.append(
            GraphNode(
                shot_id=_get(raw, "shot_id", str, path),
                class_id=_get(raw, "class_id", int, path),
                keyframe_path=_get(raw, "keyframe_path", str, path),
                is_medoid=_get(raw, "is_medoid", bool, path),
                medoid_sim=float(_get(raw, "medoid_sim", (int, float), path)),
            )
        )
    edges: list[GraphEdge] = []
    for i, raw in enumerate(_get(doc, "edges", list, "$")):
        path = f"$.edges[{i}]"
        try:
            edges.append(
                GraphEdge(
                    src=_get(raw, "src", str, path),
                    dst=_get(raw, "dst", str, path),
                    weight=float(_get(raw, "weight", (int, float), path)),
                    kind=_get(raw, "kind", str, path),
                )
            )
        except ValueError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    params_raw = _get(doc, "params", dict, "$")
    # Values keep their JSON numeric type so a reload-and-save round-trip
    # reproduces the document byte for byte.
    params: dict[str, float] = {}
    for key, value in params_raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"$.params.{key}: expected a number")
        params[key] = value
    try:
        graph = ExplorationGraph(nodes, edges)
    except ValueError as exc:
        raise SchemaError(f"$.edges: {exc}") from exc
    return GraphArtifact(
        graph=graph,
        params=params,
        corpus_hash=_get(doc, "corpus_hash", str, "$"),
        partition_hash=_get(doc, "partition_hash", str, "$"),
    )


def view_to_document(view: ViewState, graph: ExplorationGraph) -> dict:
    """Serialize a view for the HTTP API and the UI.

    Nodes carry what rendering needs (class for coloring, medoid flag for
    shape, level for emphasis); clients fetch thumbnails per shot_id.
    """
    nodes = []
    for sid in view.shots:
        node = graph.nodes[sid]
        nodes.append(
            {
                "shot_id": sid,
                "class_id": node.class_id,
                "is_medoid": node.is_medoid,
                "level": float(view.levels.get(sid, 0.0)),
            }
        )
    return {
        "format": "view",
        "format_version": FORMAT_VERSION,
        "kind": view.kind,
        "stimulus": view.stimulus,
        "nodes": nodes,
        "edges": [
            {"src": e.src, "dst": e.dst, "weight": e.weight, "kind": e.kind}
            for e in view.edges
        ],
    }
