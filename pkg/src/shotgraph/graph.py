"""Keyframe exploration graph: construction, activation, and view assembly.

Nodes are indexed shots. Two edge kinds connect them: dendrites link
sufficiently similar shots inside one class, axons link the medoids of
distinct classes whose class-level similarity clears a second threshold.
Clicking a node spreads activation outward along a decaying max-product;
a user's profile lifts edge weights on shots they favor, so the active
neighborhood bends toward their history.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .classify import ClassPartition, class_similarity
from .model import Corpus
from .profile import UserProfile, user_weight
from .semantics import SimilarityMatrix

EDGE_DENDRITE = "dendrite"
EDGE_AXON = "axon"


@dataclass(frozen=True)
class GraphNode:
    shot_id: str
    class_id: int
    keyframe_path: str
    is_medoid: bool
    medoid_sim: float


@dataclass(frozen=True)
class GraphEdge:
    """Undirected weighted edge, stored once with src < dst."""

    src: str
    dst: str
    weight: float
    kind: str

    def __post_init__(self) -> None:
        if self.src >= self.dst:
            raise ValueError("edge endpoints must satisfy src < dst")
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"edge weight {self.weight} outside [0, 1]")
        if self.kind not in (EDGE_DENDRITE, EDGE_AXON):
            raise ValueError(f"unknown edge kind {self.kind!r}")


class ExplorationGraph:
    """Immutable node/edge store with an adjacency index for traversal."""

    def __init__(self, nodes: Iterable[GraphNode], edges: Iterable[GraphEdge]) -> None:
        self.nodes: dict[str, GraphNode] = {}
        for node in nodes:
            if node.shot_id in self.nodes:
                raise ValueError(f"duplicate node {node.shot_id!r}")
            self.nodes[node.shot_id] = node
        self.edges: tuple[GraphEdge, ...] = tuple(
            sorted(edges, key=lambda e: (e.src, e.dst))
        )
        self._adjacency: dict[str, list[GraphEdge]] = {sid: [] for sid in self.nodes}
        seen: set[tuple[str, str]] = set()
        for edge in self.edges:
            if edge.src not in self.nodes or edge.dst not in self.nodes:
                raise ValueError(f"edge {edge.src!r}->{edge.dst!r} references a missing node")
            key = (edge.src, edge.dst)
            if key in seen:
                raise ValueError(f"duplicate edge {edge.src!r}->{edge.dst!r}")
            seen.add(key)
            self._adjacency[edge.src].append(edge)
            self._adjacency[edge.dst].append(edge)

    def neighbors(self, shot_id: str) -> list[GraphEdge]:
        return self._adjacency[shot_id]

    def medoids(self) -> list[GraphNode]:
        return [n for n in self.nodes.values() if n.is_medoid]


def build_graph(
    corpus: Corpus,
    partition: ClassPartition,
    sim: SimilarityMatrix,
    theta_edge: float = 0.6,
    theta_axon: float = 0.3,
) -> ExplorationGraph:
    """Assemble the exploration graph from a partition and its similarities.

    Dendrites: within each class, every unordered pair with symmetric
    similarity >= theta_edge. Axons: for each pair of distinct classes whose
    medoid similarity >= theta_axon, one edge between the medoids. When a
    medoid pair already carries a dendrite (impossible across classes, but
    kept explicit), the dendrite wins.
    """
    if not 0.0 <= theta_edge <= 1.0:
        raise ValueError(f"theta_edge {theta_edge} outside [0, 1]")
    if not 0.0 <= theta_axon <= 1.0:
        raise ValueError(f"theta_axon {theta_axon} outside [0, 1]")

    nodes: list[GraphNode] = []
    for cls in partition.classes:
        for sid in cls.members:
            shot = corpus.shot(sid)
            nodes.append(
                GraphNode(
                    shot_id=sid,
                    class_id=cls.class_id,
                    keyframe_path=shot.keyframe_path,
                    is_medoid=sid == cls.medoid,
                    medoid_sim=sim.symmetric(sid, cls.medoid),
                )
            )

    edges: list[GraphEdge] = []
    for cls in partition.classes:
        members = cls.members
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                weight = sim.symmetric(members[i], members[j])
                if weight >= theta_edge:
                    a, b = sorted((members[i], members[j]))
                    edges.append(GraphEdge(src=a, dst=b, weight=weight, kind=EDGE_DENDRITE))

    classes = partition.classes
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            weight = class_similarity(classes[i], classes[j], sim)
            if weight >= theta_axon:
                a, b = sorted((classes[i].medoid, classes[j].medoid))
                edges.append(GraphEdge(src=a, dst=b, weight=weight, kind=EDGE_AXON))

    return ExplorationGraph(nodes, edges)


@dataclass(frozen=True)
class ExploreParams:
    """Tunables for activation spreading and view assembly."""

    theta_act: float = 0.2
    decay: float = 0.85
    lam: float = 0.5
    budget: int = 30

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta_act <= 1.0:
            raise ValueError(f"theta_act {self.theta_act} outside [0, 1]")
        if not 0.0 < self.decay <= 1.0:
            raise ValueError(f"decay {self.decay} outside (0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda {self.lam} outside [0, 1]")
        if self.budget < 1:
            raise ValueError(f"budget {self.budget} must be >= 1")


def effective_weight(
    edge: GraphEdge, profile: UserProfile, lam: float = 0.5
) -> float:
    """Edge weight after personalization.

    The user's stronger attachment to either endpoint pulls the weight up,
    blended by lam; an edge is never penalized below its base weight, so an
    empty profile (or lam = 0) leaves the graph untouched.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda {lam} outside [0, 1]")
    wu = max(user_weight(profile, edge.src), user_weight(profile, edge.dst))
    blended = (1.0 - lam) * edge.weight + lam * wu
    return max(edge.weight, blended)


@dataclass(frozen=True)
class ActivationMap:
    """Result of spreading activation from one stimulus shot."""

    stimulus: str
    levels: Mapping[str, float] = field(default_factory=dict)
    theta_act: float = 0.2

    def level(self, shot_id: str) -> float:
        return self.levels.get(shot_id, 0.0)

    def active(self) -> list[str]:
        return sorted(s for s, lv in self.levels.items() if lv >= self.theta_act)

    def is_active(self, shot_id: str) -> bool:
        return self.level(shot_id) >= self.theta_act


def activate(
    graph: ExplorationGraph,
    stimulus: str,
    profile: UserProfile,
    params: ExploreParams = ExploreParams(),
) -> ActivationMap:
    """Spread activation from the clicked shot over the graph.

    The stimulus starts at level 1. Crossing an edge multiplies the level by
    effective_weight * decay, and each node keeps the best level over all
    paths. All factors are <= 1, so a best-first frontier settles each node
    exactly once; the result is path-order independent.
    """
    if stimulus not in graph.nodes:
        raise KeyError(f"stimulus {stimulus!r} is not in the graph")
    levels: dict[str, float] = {}
    # Max-heap via negated levels; ties broken by shot id for determinism.
    frontier: list[tuple[float, str]] = [(-1.0, stimulus)]
    while frontier:
        neg, sid = heapq.heappop(frontier)
        level = -neg
        if sid in levels:
            continue
        levels[sid] = level
        for edge in graph.neighbors(sid):
            other = edge.dst if edge.src == sid else edge.src
            if other in levels:
                continue
            weight = effective_weight(edge, profile, params.lam)
            nxt = level * weight * params.decay
            if nxt > 0.0:
                heapq.heappush(frontier, (-nxt, other))
    return ActivationMap(stimulus=stimulus, levels=levels, theta_act=params.theta_act)


@dataclass(frozen=True)
class ViewEdge:
    src: str
    dst: str
    weight: float
    kind: str


@dataclass(frozen=True)
class ViewState:
    """What the explorer shows: a set of shots plus the edges among them."""

    kind: str
    shots: tuple[str, ...]
    edges: tuple[ViewEdge, ...]
    stimulus: str | None = None
    levels: Mapping[str, float] = field(default_factory=dict)


def _induced_edges(
    graph: ExplorationGraph, shots: Iterable[str], profile: UserProfile, lam: float
) -> tuple[ViewEdge, ...]:
    visible = set(shots)
    out = []
    for edge in graph.edges:
        if edge.src in visible and edge.dst in visible:
            out.append(
                ViewEdge(
                    src=edge.src,
                    dst=edge.dst,
                    weight=effective_weight(edge, profile, lam),
                    kind=edge.kind,
                )
            )
    return tuple(out)


def overview(
    graph: ExplorationGraph,
    profile: UserProfile,
    params: ExploreParams = ExploreParams(),
) -> ViewState:
    """Entry view: every class medoid, then the user's strongest shots.

    Medoids always appear so each class stays reachable. Remaining budget
    goes to non-medoid nodes ranked by profile weight, then by closeness to
    their class medoid, with the shot id as the final tiebreak.
    """
    medoid_ids = sorted(n.shot_id for n in graph.medoids())
    if params.budget < len(medoid_ids):
        raise ValueError(
            f"budget below class count ({params.budget} < {len(medoid_ids)})"
        )
    chosen = list(medoid_ids)
    remaining = params.budget - len(chosen)
    if remaining > 0:
        rest = [n for n in graph.nodes.values() if not n.is_medoid]
        rest.sort(
            key=lambda n: (
                -user_weight(profile, n.shot_id),
                -n.medoid_sim,
                n.shot_id,
            )
        )
        chosen.extend(n.shot_id for n in rest[:remaining])
    shots = tuple(sorted(chosen))
    return ViewState(
        kind="overview",
        shots=shots,
        edges=_induced_edges(graph, shots, profile, params.lam),
    )


def focus_view(
    graph: ExplorationGraph,
    activation: ActivationMap,
    profile: UserProfile,
    params: ExploreParams = ExploreParams(),
) -> ViewState:
    """Post-click view: the active neighborhood plus every class medoid."""
    active = set(activation.active())
    shots = tuple(sorted(active | {n.shot_id for n in graph.medoids()}))
    return ViewState(
        kind="focus",
        shots=shots,
        edges=_induced_edges(graph, shots, profile, params.lam),
        stimulus=activation.stimulus,
        levels={s: activation.level(s) for s in shots if activation.level(s) > 0.0},
    )
