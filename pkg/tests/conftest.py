"""Shared fixtures: the desk corpus, the chain graph, and file factories."""

from __future__ import annotations

import io
import random
from pathlib import Path

import pytest
from hypothesis import settings

from shotgraph.classify import classify
from shotgraph.graph import ExplorationGraph, GraphEdge, GraphNode
from shotgraph.model import ConceptLexicon, ConceptVector, Corpus, ShotRecord
from shotgraph.semantics import correlation_matrix, similarity_matrix

settings.register_profile("suite", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("suite")


def _shot(shot_id: str, concepts: set[int], video_id: str = "v1") -> ShotRecord:
    return ShotRecord(
        shot_id=shot_id,
        video_id=video_id,
        keyframe_path=f"kf/{shot_id}.png",
        vector=ConceptVector(shot_id, frozenset(concepts)),
    )


@pytest.fixture()
def d1_lexicon() -> ConceptLexicon:
    return ConceptLexicon([(1, "A"), (2, "B"), (3, "C")])


@pytest.fixture()
def d1_corpus(d1_lexicon) -> Corpus:
    """Three-shot desk corpus: s1={A,B}, s2={A,C}, s3={B}.

    Hand-checked values: occur A=2, B=2, C=1; Cd(A,B)=Cd(A,C)=0.5,
    Cd(B,A)=0.5, Cd(C,A)=1; Sd(s1->s2)=0.75, Sd(s2->s1)=1;
    symmetric(s1,s2)=symmetric(s1,s3)=0.875, symmetric(s2,s3)=0.375.
    """
    return Corpus(d1_lexicon, [_shot("s1", {1, 2}), _shot("s2", {1, 3}), _shot("s3", {2})])


@pytest.fixture()
def d1_similarity(d1_corpus):
    corr = correlation_matrix(d1_corpus)
    return similarity_matrix(d1_corpus, corr)


@pytest.fixture()
def d1_partition(d1_similarity):
    return classify(d1_similarity, 0.6)


@pytest.fixture()
def chain_graph() -> ExplorationGraph:
    """Four nodes in one class: n1-n2 (0.8), n2-n4 (0.9), n1-n3 (0.4)."""
    nodes = [
        GraphNode("n1", 0, "kf/n1.png", True, 1.0),
        GraphNode("n2", 0, "kf/n2.png", False, 0.8),
        GraphNode("n3", 0, "kf/n3.png", False, 0.4),
        GraphNode("n4", 0, "kf/n4.png", False, 0.7),
    ]
    edges = [
        GraphEdge("n1", "n2", 0.8, "dendrite"),
        GraphEdge("n2", "n4", 0.9, "dendrite"),
        GraphEdge("n1", "n3", 0.4, "dendrite"),
    ]
    return ExplorationGraph(nodes, edges)


@pytest.fixture()
def png_bytes() -> bytes:
    from PIL import Image

    buf = io.BytesIO()
    Image.new("RGB", (4, 3), (180, 60, 60)).save(buf, format="PNG")
    return buf.getvalue()


def write_corpus_files(
    root: Path,
    n_shots: int = 50,
    n_concepts: int = 8,
    seed: int = 11,
    top_k: int = 2000,
) -> dict[str, Path]:
    """Write lexicon, rankings, manifest, and keyframe images under root.

    Rankings are deterministic for a given seed: each concept ranks a
    random subset of the shots. Returns the paths keyed by role.
    """
    from PIL import Image

    rng = random.Random(seed)
    kf_dir = root / "kf"
    rankings_dir = root / "rankings"
    kf_dir.mkdir(parents=True, exist_ok=True)
    rankings_dir.mkdir(parents=True, exist_ok=True)

    lexicon_path = root / "lexicon.txt"
    lexicon_lines = ["TV10_ID LSCOM_Name"]
    for cid in range(1, n_concepts + 1):
        lexicon_lines.append(f"{cid:03d} Concept_{cid}")
    lexicon_path.write_text("\n".join(lexicon_lines) + "\n", encoding="utf-8")

    shot_ids = [f"shot{i:04d}_1" for i in range(1, n_shots + 1)]
    manifest_path = root / "manifest.tsv"
    manifest_lines = [f"{sid}\tkf/{sid}.png\tv{(i % 5) + 1}" for i, sid in enumerate(shot_ids)]
    manifest_path.write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")

    for i, sid in enumerate(shot_ids):
        shade = 40 + (i * 4) % 200
        Image.new("RGB", (6, 4), (shade, 80, 120)).save(kf_dir / f"{sid}.png")

    for cid in range(1, n_concepts + 1):
        k = rng.randint(max(1, n_shots // 6), max(2, n_shots // 2))
        ranked = rng.sample(shot_ids, k)
        lines = [f'<videoFeatureExtractionFeatureResult fNum="{cid}">']
        for pos, sid in enumerate(ranked, start=1):
            lines.append(f'  <item seqNum="{pos}" shotId="{sid}"/>')
        lines.append("</videoFeatureExtractionFeatureResult>")
        (rankings_dir / f"feature_{cid:03d}.xml").write_text(
            "\n".join(lines) + "\n", encoding="utf-8"
        )

    return {
        "lexicon": lexicon_path,
        "manifest": manifest_path,
        "rankings": rankings_dir,
        "keyframes": kf_dir,
    }


@pytest.fixture()
def corpus_files(tmp_path: Path) -> dict[str, Path]:
    return write_corpus_files(tmp_path)
