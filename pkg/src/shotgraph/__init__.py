"""Concept-correlation engine and explorer for video-shot corpora.

The pipeline turns ranked concept detections into a browsable keyframe
graph: binarize detections into concept vectors, derive a directed
concept-correlation matrix from co-occurrence, score shot-to-shot semantic
similarity, partition shots into classes, and wire class members and
medoids into a graph whose activation spreading answers user clicks.
"""

from .classify import ClassPartition, SemanticClass, class_similarity, classify, medoid
from .graph import (
    ActivationMap,
    ExplorationGraph,
    ExploreParams,
    GraphEdge,
    GraphNode,
    ViewState,
    activate,
    build_graph,
    effective_weight,
    focus_view,
    overview,
)
from .model import (
    ConceptLexicon,
    ConceptVector,
    Corpus,
    DetectionRecord,
    ShotRecord,
    validate_corpus,
)
from .profile import InteractionEvent, ProfileStore, UserProfile, record_event, user_weight
from .semantics import (
    ConceptCounts,
    CorrelationMatrix,
    SimilarityMatrix,
    binarize_detections,
    concept_correlation,
    concept_counts,
    correlation_matrix,
    shot_similarity,
    similarity_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationMap",
    "ClassPartition",
    "ConceptCounts",
    "ConceptLexicon",
    "ConceptVector",
    "Corpus",
    "CorrelationMatrix",
    "DetectionRecord",
    "ExplorationGraph",
    "ExploreParams",
    "GraphEdge",
    "GraphNode",
    "InteractionEvent",
    "ProfileStore",
    "SemanticClass",
    "ShotRecord",
    "SimilarityMatrix",
    "UserProfile",
    "ViewState",
    "activate",
    "binarize_detections",
    "build_graph",
    "class_similarity",
    "classify",
    "concept_correlation",
    "concept_counts",
    "correlation_matrix",
    "effective_weight",
    "focus_view",
    "medoid",
    "overview",
    "record_event",
    "shot_similarity",
    "similarity_matrix",
    "user_weight",
    "validate_corpus",
]
