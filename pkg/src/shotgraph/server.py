"""HTTP service around the exploration engine.

The server is a thin shell: it loads the artifact chain produced by the
CLI, verifies the content hashes link up, and answers view requests.
Corpus and graph state are immutable while serving; per-user profiles are
the only mutable state and are flushed to disk after every event.
"""

from __future__ import annotations

import json
import mimetypes
import threading
import time
from dataclasses import dataclass, fields, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response

from .graph import ExplorationGraph, ExploreParams, ViewState, activate, focus_view, overview
from .profile import EVENT_CLICK, EVENT_DWELL, InteractionEvent, ProfileStore
from .store import content_hash, load_corpus, load_graph, view_to_document

ARTIFACT_NAMES = {
    "corpus": "corpus.json",
    "correlation": "correlation.json",
    "similarity": "similarity.json",
    "partition": "partition.json",
    "graph": "graph.json",
}


class EngineError(RuntimeError):
    """Raised when the artifact chain is missing, stale, or inconsistent."""


@dataclass(frozen=True)
class ServerConfig:
    """Serving parameters; every field can come from a config file.

    The JSON config file uses these field names, with "lambda" accepted
    for lam. Thresholds live in [0, 1]; budget must be at least 1.
    """

    workdir: str = "."
    keyframe_root: str | None = None
    addr: str = "127.0.0.1:8000"
    theta: float = 0.6
    theta_edge: float = 0.6
    theta_axon: float = 0.3
    theta_act: float = 0.2
    decay: float = 0.85
    lam: float = 0.5
    budget: int = 30
    top_k: int = 2000
    tau: float = 0.5

    def __post_init__(self) -> None:
        for name in ("theta", "theta_edge", "theta_axon", "theta_act", "tau"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} {value} outside [0, 1]")
        if not 0.0 < self.decay <= 1.0:
            raise ValueError(f"decay {self.decay} outside (0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda {self.lam} outside [0, 1]")
        if self.budget < 1:
            raise ValueError(f"budget {self.budget} must be >= 1")
        if self.top_k < 0:
            raise ValueError(f"top_k {self.top_k} must be non-negative")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServerConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        return cls().merged(raw)

    def merged(self, overrides: dict) -> "ServerConfig":
        """New config with every non-None override applied."""
        known = {f.name for f in fields(self)}
        updates = {}
        for key, value in overrides.items():
            name = "lam" if key == "lambda" else key
            if name not in known:
                raise ValueError(f"unknown config field {key!r}")
            if value is not None:
                updates[name] = value
        return replace(self, **updates) if updates else self

    def explore_params(self) -> ExploreParams:
        return ExploreParams(
            theta_act=self.theta_act, decay=self.decay, lam=self.lam, budget=self.budget
        )


def _read_artifact(workdir: Path, key: str) -> str:
    path = workdir / ARTIFACT_NAMES[key]
    if not path.exists():
        raise EngineError(f"stale input: missing artifact {path}")
    return path.read_text(encoding="utf-8")


class ExplorerEngine:
    """Loaded pipeline state plus per-user interaction handling."""

    def __init__(
        self,
        corpus,
        graph: ExplorationGraph,
        graph_document: dict,
        params: ExploreParams,
        profiles: ProfileStore,
        keyframe_root: Path,
    ) -> None:
        self.corpus = corpus
        self.graph = graph
        self._graph_document = graph_document
        self.params = params
        self.profiles = profiles
        self.keyframe_root = keyframe_root.resolve()
        self._views: dict[str, ViewState] = {}
        self._views_lock = threading.Lock()

    @classmethod
    def from_workdir(cls, config: ServerConfig) -> "ExplorerEngine":
        """Load and hash-verify the artifact chain under config.workdir."""
        workdir = Path(config.workdir)
        corpus_text = _read_artifact(workdir, "corpus")
        corpus_hash = content_hash(corpus_text)
        correlation_text = _read_artifact(workdir, "correlation")
        correlation_hash = content_hash(correlation_text)
        similarity_text = _read_artifact(workdir, "similarity")
        similarity_hash = content_hash(similarity_text)
        partition_text = _read_artifact(workdir, "partition")
        partition_hash = content_hash(partition_text)
        graph_text = _read_artifact(workdir, "graph")

        from .store import load_correlation, load_partition, load_similarity

        corr_art = load_correlation(correlation_text)
        if corr_art.corpus_hash != corpus_hash:
            raise EngineError("stale input: correlation was computed from a different corpus")
        sim_art = load_similarity(similarity_text)
        if sim_art.corpus_hash != corpus_hash or sim_art.correlation_hash != correlation_hash:
            raise EngineError("stale input: similarity does not match corpus/correlation")
        part_art = load_partition(partition_text)
        if part_art.corpus_hash != corpus_hash or part_art.similarity_hash != similarity_hash:
            raise EngineError("stale input: partition does not match corpus/similarity")
        graph_art = load_graph(graph_text)
        if graph_art.corpus_hash != corpus_hash or graph_art.partition_hash != partition_hash:
            raise EngineError("stale input: graph does not match corpus/partition")

        corpus = load_corpus(corpus_text)
        params = config.explore_params()
        keyframe_root = Path(config.keyframe_root) if config.keyframe_root else workdir
        return cls(
            corpus=corpus,
            graph=graph_art.graph,
            graph_document=json.loads(graph_text),
            params=params,
            profiles=ProfileStore(workdir / "profiles"),
            keyframe_root=keyframe_root,
        )

    def _remember_view(self, user_id: str, view: ViewState) -> None:
        with self._views_lock:
            self._views[user_id] = view

    def _current_view(self, user_id: str) -> ViewState:
        with self._views_lock:
            view = self._views.get(user_id)
        if view is not None:
            return view
        return overview(self.graph, self.profiles.load(user_id), self.params)

    def overview_for(self, user_id: str) -> dict:
        profile = self.profiles.load(user_id)
        view = overview(self.graph, profile, self.params)
        self._remember_view(user_id, view)
        return view_to_document(view, self.graph)

    def handle_event(self, event: InteractionEvent) -> dict:
        """Apply one event and return the view the client should now show.

        Clicks on graph nodes re-focus the view; clicks on corpus shots
        outside the graph (unindexed) still update the profile but leave
        the view alone, as do dwell events.
        """
        profile = self.profiles.apply(event, known_shots=self.corpus)
        if event.kind == EVENT_CLICK and event.shot_id in self.graph.nodes:
            activation = activate(self.graph, event.shot_id, profile, self.params)
            view = focus_view(self.graph, activation, profile, self.params)
            self._remember_view(event.user_id, view)
        else:
            view = self._current_view(event.user_id)
        return view_to_document(view, self.graph)

    def graph_document(self) -> dict:
        return self._graph_document

    def profile_document(self, user_id: str) -> dict:
        from .profile import profile_to_document

        return profile_to_document(self.profiles.load(user_id))

    def keyframe(self, shot_id: str) -> tuple[bytes, str]:
        """Read a shot's keyframe image, enforcing root containment."""
        if "/" in shot_id or "\\" in shot_id or ".." in shot_id:
            raise PermissionError(f"invalid shot_id {shot_id!r}")
        if shot_id in self.corpus:
            rel = self.corpus.shot(shot_id).keyframe_path
        elif shot_id in self.graph.nodes:
            rel = self.graph.nodes[shot_id].keyframe_path
        else:
            raise KeyError(shot_id)
        candidate = Path(rel)
        if not candidate.is_absolute():
            candidate = self.keyframe_root / candidate
        resolved = candidate.resolve()
        if not resolved.is_relative_to(self.keyframe_root):
            raise PermissionError(f"keyframe for {shot_id!r} escapes the keyframe root")
        if not resolved.is_file():
            raise KeyError(shot_id)
        media_type = mimetypes.guess_type(resolved.name)[0] or "application/octet-stream"
        return resolved.read_bytes(), media_type


def create_app(engine: ExplorerEngine | None) -> FastAPI:
    """Build the API app; a None engine answers everything with 503."""
    app = FastAPI(title="shotgraph explorer", docs_url=None, redoc_url=None)

    def require_engine() -> ExplorerEngine:
        if engine is None:
            raise HTTPException(status_code=503, detail="graph not loaded")
        return engine

    @app.get("/api/overview")
    def get_overview(user: str = "") -> Response:
        eng = require_engine()
        if not user:
            raise HTTPException(status_code=400, detail="user query parameter is required")
        return _json_response(eng.overview_for(user))

    @app.post("/api/events")
    async def post_event(request: Request) -> Response:
        eng = require_engine()
        try:
            payload = json.loads(await request.body())
        except json.JSONDecodeError:
            raise HTTPException(status_code=400, detail="body is not valid JSON") from None
        if not isinstance(payload, dict):
            raise HTTPException(status_code=400, detail="body must be a JSON object")
        user = payload.get("user")
        shot_id = payload.get("shot_id")
        kind = payload.get("kind")
        dwell_seconds = payload.get("dwell_seconds")
        if not isinstance(user, str) or not user:
            raise HTTPException(status_code=400, detail="user must be a non-empty string")
        if not isinstance(shot_id, str) or not shot_id:
            raise HTTPException(status_code=400, detail="shot_id must be a non-empty string")
        if kind not in (EVENT_CLICK, EVENT_DWELL):
            raise HTTPException(status_code=400, detail="kind must be 'click' or 'dwell'")
        if dwell_seconds is not None and not isinstance(dwell_seconds, (int, float)):
            raise HTTPException(status_code=400, detail="dwell_seconds must be a number")
        try:
            event = InteractionEvent(
                user_id=user,
                shot_id=shot_id,
                kind=kind,
                dwell_seconds=float(dwell_seconds) if dwell_seconds is not None else None,
                timestamp=time.time(),
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        try:
            view_doc = eng.handle_event(event)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown shot {shot_id!r}") from None
        return _json_response({"ok": True, "view": view_doc})

    @app.get("/api/graph")
    def get_graph() -> Response:
        return _json_response(require_engine().graph_document())

    @app.get("/api/profile")
    def get_profile(user: str = "") -> Response:
        eng = require_engine()
        if not user:
            raise HTTPException(status_code=400, detail="user query parameter is required")
        return _json_response(eng.profile_document(user))

    @app.get("/api/keyframes/{shot_id}")
    def get_keyframe(shot_id: str) -> Response:
        eng = require_engine()
        try:
            data, media_type = eng.keyframe(shot_id)
        except PermissionError as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from None
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no keyframe for {shot_id!r}") from None
        return Response(content=data, media_type=media_type)

    return app


def _json_response(doc: dict) -> Response:
    # Serialized once, deterministically; FastAPI's jsonable-encoder pass
    # is skipped so repeated requests yield byte-identical bodies.
    body = json.dumps(doc, ensure_ascii=False, separators=(",", ":"))
    return Response(content=body, media_type="application/json")


def run_server(config: ServerConfig) -> None:
    """Blocking entry point used by the CLI serve command."""
    import uvicorn

    engine = ExplorerEngine.from_workdir(config)
    host, _, port_text = config.addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"addr must look like host:port, got {config.addr!r}")
    app = create_app(engine)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
