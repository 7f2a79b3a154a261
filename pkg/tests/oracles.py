"""Independent reference implementations used to check the library.

Everything here is written the slow, obvious way: explicit loops over
shots and concepts, exhaustive path enumeration, breadth-first component
search. Test assertions compare the optimized code against these.
"""

from __future__ import annotations

import itertools
import random

from shotgraph.graph import ExplorationGraph, GraphEdge, GraphNode, effective_weight
from shotgraph.model import ConceptLexicon, ConceptVector, Corpus, ShotRecord
from shotgraph.profile import UserProfile
from shotgraph.semantics import CorrelationMatrix


def brute_occur(corpus: Corpus, concept_id: int) -> int:
    return sum(1 for rec in corpus.shots if concept_id in rec.vector.concepts)


def brute_cooccur(corpus: Corpus, ci: int, cj: int) -> int:
    return sum(
        1
        for rec in corpus.shots
        if ci in rec.vector.concepts and cj in rec.vector.concepts
    )


def brute_cd(corpus: Corpus, src: int, dst: int) -> float:
    n_src = brute_occur(corpus, src)
    if n_src == 0:
        return 0.0
    return brute_cooccur(corpus, src, dst) / n_src


def brute_sd(va: frozenset[int], vb: frozenset[int], corr: CorrelationMatrix) -> float:
    """Directed similarity by the definition: mean over source concepts of
    the best correlation into the target vector."""
    if not va or not vb:
        raise ValueError("unindexed shot")
    total = 0.0
    for ca in sorted(va):
        best = 0.0
        for cb in sorted(vb):
            w = corr.weight(ca, cb)
            if w > best:
                best = w
        total += best
    return total / len(va)


def brute_components(shot_ids: list[str], sym, theta: float) -> list[frozenset[str]]:
    """Connected components over the thresholded symmetric similarity, by
    breadth-first search; sym is a callable (a, b) -> float."""
    remaining = set(shot_ids)
    components = []
    while remaining:
        seed = min(remaining)
        queue = [seed]
        comp = {seed}
        remaining.discard(seed)
        while queue:
            cur = queue.pop()
            for other in list(remaining):
                if sym(cur, other) >= theta:
                    comp.add(other)
                    remaining.discard(other)
                    queue.append(other)
        components.append(frozenset(comp))
    return components


def brute_activation(
    graph: ExplorationGraph,
    stimulus: str,
    profile: UserProfile,
    decay: float,
    lam: float,
) -> dict[str, float]:
    """Best level per node over every simple path from the stimulus.

    Deliberately exhaustive: every simple path is walked in full, with no
    pruning beyond the visited set that keeps paths simple.
    """
    levels = {stimulus: 1.0}

    def walk(node: str, level: float, visited: frozenset[str]) -> None:
        for edge in graph.neighbors(node):
            other = edge.dst if edge.src == node else edge.src
            if other in visited:
                continue
            nxt = level * effective_weight(edge, profile, lam) * decay
            if nxt <= 0.0:
                continue
            if nxt > levels.get(other, 0.0):
                levels[other] = nxt
            walk(other, nxt, visited | {other})

    walk(stimulus, 1.0, frozenset({stimulus}))
    return levels


def random_corpus(
    rng: random.Random, max_shots: int = 8, max_concepts: int = 6
) -> Corpus:
    """Small random corpus; some shots may come out unindexed."""
    n_concepts = rng.randint(1, max_concepts)
    lexicon = ConceptLexicon([(i + 1, f"c{i + 1}") for i in range(n_concepts)])
    n_shots = rng.randint(1, max_shots)
    shots = []
    for i in range(n_shots):
        sid = f"s{i + 1:02d}"
        concepts = frozenset(
            cid for cid in lexicon.ids if rng.random() < 0.45
        )
        shots.append(
            ShotRecord(
                shot_id=sid,
                video_id="v1",
                keyframe_path=f"{sid}.png",
                vector=ConceptVector(sid, concepts),
            )
        )
    return Corpus(lexicon, shots)


def random_connected_graph(rng: random.Random, max_nodes: int = 10) -> ExplorationGraph:
    """Connected weighted graph: a random spanning tree plus extra edges."""
    n = rng.randint(1, max_nodes)
    names = [f"n{i + 1:02d}" for i in range(n)]
    nodes = [
        GraphNode(
            shot_id=name,
            class_id=0,
            keyframe_path=f"{name}.png",
            is_medoid=(i == 0),
            medoid_sim=1.0,
        )
        for i, name in enumerate(names)
    ]
    pairs = set()
    for i in range(1, n):
        j = rng.randrange(i)
        pairs.add((min(names[i], names[j]), max(names[i], names[j])))
    for a, b in itertools.combinations(names, 2):
        if rng.random() < 0.25:
            pairs.add((min(a, b), max(a, b)))
    edges = [
        GraphEdge(
            src=a,
            dst=b,
            weight=rng.uniform(0.05, 1.0),
            kind="dendrite",
        )
        for a, b in sorted(pairs)
    ]
    return ExplorationGraph(nodes, edges)
