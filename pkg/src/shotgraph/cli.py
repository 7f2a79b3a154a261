"""Command-line pipeline: ingest -> correlate -> similarity -> classify -> graph -> serve.

Each command reads the previous step's artifact from the working directory,
verifies the content-hash chain, writes its own artifact, and prints a
one-line summary. Artifacts are byte-deterministic, so re-running a step on
unchanged inputs reproduces the same file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ingest as ingest_mod
from .classify import classify as classify_op
from .graph import build_graph
from .ingest import ParseError
from .semantics import correlation_matrix, similarity_matrix
from .server import ARTIFACT_NAMES, EngineError, ExplorerEngine, ServerConfig, create_app
from .store import (
    SchemaError,
    content_hash,
    load_corpus,
    load_correlation,
    load_partition,
    load_similarity,
    save_corpus,
    save_correlation,
    save_graph,
    save_partition,
    save_similarity,
)


class CliError(RuntimeError):
    """Fatal command failure; the message is the diagnostic to print."""


def _artifact_path(workdir: Path, key: str) -> Path:
    return workdir / ARTIFACT_NAMES[key]


def _read_artifact(workdir: Path, key: str) -> str:
    path = _artifact_path(workdir, key)
    if not path.exists():
        raise CliError(f"stale input: missing artifact {path} (run the earlier steps first)")
    return path.read_text(encoding="utf-8")


def _write_artifact(workdir: Path, key: str, text: str) -> Path:
    workdir.mkdir(parents=True, exist_ok=True)
    path = _artifact_path(workdir, key)
    path.write_text(text, encoding="utf-8")
    return path


def _load_config(args: argparse.Namespace) -> ServerConfig:
    config = ServerConfig()
    if getattr(args, "config", None):
        config = ServerConfig.from_file(args.config)
    overrides = {
        name: getattr(args, name)
        for name in (
            "workdir",
            "keyframe_root",
            "addr",
            "theta",
            "theta_edge",
            "theta_axon",
            "theta_act",
            "decay",
            "lam",
            "budget",
            "top_k",
            "tau",
        )
        if getattr(args, name, None) is not None
    }
    return config.merged(overrides)


def _cmd_ingest(args: argparse.Namespace) -> int:
    config = _load_config(args)
    workdir = Path(config.workdir)
    lexicon = ingest_mod.parse_lexicon(Path(args.lexicon).read_text(encoding="utf-8"))
    manifest = ingest_mod.parse_manifest(Path(args.manifest).read_text(encoding="utf-8"))
    if args.detections:
        records = ingest_mod.parse_detections(
            Path(args.detections).read_text(encoding="utf-8"), lexicon
        )
        corpus = ingest_mod.assemble_from_detections(records, manifest, lexicon, config.tau)
    else:
        rankings_dir = Path(args.rankings)
        if not rankings_dir.is_dir():
            raise CliError(f"rankings directory {rankings_dir} does not exist")
        rankings = [
            ingest_mod.parse_ranking_xml(path.read_text(encoding="utf-8"), lexicon)
            for path in sorted(rankings_dir.glob("*.xml"))
        ]
        corpus = ingest_mod.assemble_corpus(rankings, manifest, lexicon, config.top_k)
    out = _write_artifact(workdir, "corpus", save_corpus(corpus))
    print(f"ingest: {len(lexicon)} concepts, {len(corpus)} shots -> {out}")
    return 0


def _cmd_correlate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    workdir = Path(config.workdir)
    corpus_text = _read_artifact(workdir, "corpus")
    corpus = load_corpus(corpus_text)
    matrix = correlation_matrix(corpus)
    out = _write_artifact(
        workdir, "correlation", save_correlation(matrix, content_hash(corpus_text))
    )
    n = len(matrix.lexicon)
    print(f"correlate: {n} concepts, {n * n} entries -> {out}")
    return 0


def _cmd_similarity(args: argparse.Namespace) -> int:
    config = _load_config(args)
    workdir = Path(config.workdir)
    corpus_text = _read_artifact(workdir, "corpus")
    corpus_hash = content_hash(corpus_text)
    correlation_text = _read_artifact(workdir, "correlation")
    corr_art = load_correlation(correlation_text)
    if corr_art.corpus_hash != corpus_hash:
        raise CliError("stale input: correlation.json was computed from a different corpus")
    corpus = load_corpus(corpus_text)
    sim = similarity_matrix(corpus, corr_art.matrix)
    out = _write_artifact(
        workdir,
        "similarity",
        save_similarity(sim, corpus_hash, content_hash(correlation_text)),
    )
    print(f"similarity: {len(sim)} shots, {len(sim.unindexed)} unindexed -> {out}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    config = _load_config(args)
    workdir = Path(config.workdir)
    corpus_text = _read_artifact(workdir, "corpus")
    corpus_hash = content_hash(corpus_text)
    similarity_text = _read_artifact(workdir, "similarity")
    sim_art = load_similarity(similarity_text)
    if sim_art.corpus_hash != corpus_hash:
        raise CliError("stale input: similarity.json was computed from a different corpus")
    partition = classify_op(sim_art.sim, config.theta)
    out = _write_artifact(
        workdir,
        "partition",
        save_partition(partition, corpus_hash, content_hash(similarity_text)),
    )
    print(f"classify: {len(partition.classes)} classes at theta={config.theta} -> {out}")
    return 0


def _cmd_graph(args: argparse.Namespace) -> int:
    config = _load_config(args)
    workdir = Path(config.workdir)
    corpus_text = _read_artifact(workdir, "corpus")
    corpus_hash = content_hash(corpus_text)
    similarity_text = _read_artifact(workdir, "similarity")
    sim_art = load_similarity(similarity_text)
    if sim_art.corpus_hash != corpus_hash:
        raise CliError("stale input: similarity.json was computed from a different corpus")
    partition_text = _read_artifact(workdir, "partition")
    part_art = load_partition(partition_text)
    if part_art.corpus_hash != corpus_hash:
        raise CliError("stale input: partition.json was computed from a different corpus")
    if part_art.similarity_hash != content_hash(similarity_text):
        raise CliError("stale input: partition.json was computed from a different similarity")
    corpus = load_corpus(corpus_text)
    graph = build_graph(
        corpus, part_art.partition, sim_art.sim, config.theta_edge, config.theta_axon
    )
    params = {
        "theta_edge": config.theta_edge,
        "theta_axon": config.theta_axon,
        "theta_act": config.theta_act,
        "decay": config.decay,
        "lambda": config.lam,
        "budget": config.budget,
    }
    out = _write_artifact(
        workdir,
        "graph",
        save_graph(graph, params, corpus_hash, content_hash(partition_text)),
    )
    print(f"graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges -> {out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    config = _load_config(args)
    engine = ExplorerEngine.from_workdir(config)
    host, _, port_text = config.addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise CliError(f"addr must look like host:port, got {config.addr!r}")
    print(f"serve: {len(engine.graph.nodes)} nodes at http://{config.addr}")
    import uvicorn

    uvicorn.run(create_app(engine), host=host, port=int(port_text), log_level="warning")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workdir", help="artifact directory (default: current directory)")
    parser.add_argument("--config", help="JSON config file overriding any parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shotgraph",
        description="Concept-correlation pipeline and keyframe exploration server.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build the corpus from lexicon, rankings, manifest")
    _add_common(p)
    p.add_argument("--lexicon", required=True, help="two-column concept table")
    p.add_argument("--rankings", help="directory of ranked-shot XML files")
    p.add_argument("--manifest", required=True, help="shot_id to keyframe path table")
    p.add_argument("--detections", help="score table (alternative to --rankings)")
    p.add_argument("--top-k", dest="top_k", type=int, help="ranking depth (default 2000)")
    p.add_argument("--tau", type=float, help="score threshold for --detections (default 0.5)")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("correlate", help="compute the concept-correlation matrix")
    _add_common(p)
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("similarity", help="compute the shot-similarity matrix")
    _add_common(p)
    p.set_defaults(func=_cmd_similarity)

    p = sub.add_parser("classify", help="partition shots into semantic classes")
    _add_common(p)
    p.add_argument("--theta", type=float, help="similarity threshold (default 0.6)")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("graph", help="build the exploration graph")
    _add_common(p)
    p.add_argument("--theta-edge", dest="theta_edge", type=float, help="dendrite threshold")
    p.add_argument("--theta-axon", dest="theta_axon", type=float, help="axon threshold")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("serve", help="serve the exploration API")
    _add_common(p)
    p.add_argument("--addr", help="listen address host:port (default 127.0.0.1:8000)")
    p.add_argument("--keyframe-root", dest="keyframe_root", help="keyframe image directory")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "ingest" and not args.rankings and not args.detections:
        parser.error("ingest requires --rankings or --detections")
    try:
        return args.func(args)
    except (CliError, EngineError, ParseError, SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
