"""Parsers and exporters for the external interchange formats.

Three formats come from the TRECVID ecosystem: the two-column concept
lexicon table, the per-concept ranked-shot XML, and the concept-correlation
XML (Indexing/Concept/SubConcept with comma or dot decimal weights). A
plain manifest maps shots to keyframe files, and a score table feeds the
threshold-based ingest path. All functions are pure.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence
from xml.sax.saxutils import quoteattr

from .model import ConceptLexicon, ConceptVector, Corpus, DetectionRecord, ShotRecord
from .semantics import CorrelationMatrix

CORRELATION_DOCTYPE = '<!DOCTYPE Indexing SYSTEM "index.dtd">'


class ParseError(ValueError):
    """Raised when an input file does not match its documented format."""


@dataclass(frozen=True)
class RankingDocument:
    """One concept's ranked shot list, best first."""

    feature_number: int
    items: tuple[tuple[int, str], ...]


class SubConceptRow(NamedTuple):
    sub_id: int
    sub_name: str
    weight: float


class ConceptRow(NamedTuple):
    concept_id: int
    concept_name: str
    sub_concepts: tuple[SubConceptRow, ...]


@dataclass(frozen=True)
class CorrelationDocument:
    """Parsed correlation XML: one row per source concept."""

    entries: tuple[ConceptRow, ...]


class ManifestEntry(NamedTuple):
    shot_id: str
    keyframe_path: str
    video_id: str


def parse_lexicon(text: str) -> ConceptLexicon:
    """Parse a two-column (id, name) table into a lexicon.

    Blank lines are skipped. A single header row is tolerated when its id
    column is not an integer. Ids may carry leading zeros.
    """
    entries: list[tuple[int, str]] = []
    seen_ids: set[int] = set()
    seen_names: set[str] = set()
    header_allowed = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected '<id> <name>', got {line!r}")
        id_text, name = parts[0], parts[1].strip()
        try:
            cid = int(id_text)
        except ValueError:
            if header_allowed:
                header_allowed = False
                continue
            raise ParseError(f"line {lineno}: non-integer concept id {id_text!r}") from None
        header_allowed = False
        if cid < 1:
            raise ParseError(f"line {lineno}: concept id must be positive, got {cid}")
        if cid in seen_ids:
            raise ParseError(f"line {lineno}: duplicate concept id {cid}")
        if name in seen_names:
            raise ParseError(f"line {lineno}: duplicate concept name {name!r}")
        seen_ids.add(cid)
        seen_names.add(name)
        entries.append((cid, name))
    return ConceptLexicon(entries)


def _parse_xml(text: str) -> ET.Element:
    try:
        return ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}") from exc


def parse_ranking_xml(text: str, lexicon: ConceptLexicon) -> RankingDocument:
    """Parse one ranked-shot document for a single concept.

    The document must hold exactly one videoFeatureExtractionFeatureResult
    element (as root or nested); fNum must name a lexicon concept; seqNum
    must run exactly 1..n in order.
    """
    root = _parse_xml(text)
    if root.tag == "videoFeatureExtractionFeatureResult":
        results = [root]
    else:
        results = root.findall(".//videoFeatureExtractionFeatureResult")
    if len(results) != 1:
        raise ParseError(
            f"expected exactly one videoFeatureExtractionFeatureResult element, "
            f"found {len(results)}"
        )
    result = results[0]
    fnum_text = result.get("fNum")
    if fnum_text is None:
        raise ParseError("videoFeatureExtractionFeatureResult lacks an fNum attribute")
    try:
        fnum = int(fnum_text)
    except ValueError:
        raise ParseError(f"non-integer fNum {fnum_text!r}") from None
    if fnum not in lexicon:
        raise ParseError(f"fNum {fnum} is not a lexicon concept")
    items: list[tuple[int, str]] = []
    for pos, item in enumerate(result.findall("item"), start=1):
        seq_text = item.get("seqNum")
        shot_id = item.get("shotId")
        if seq_text is None or shot_id is None:
            raise ParseError(f"item {pos} lacks seqNum or shotId")
        try:
            seq = int(seq_text)
        except ValueError:
            raise ParseError(f"item {pos}: non-integer seqNum {seq_text!r}") from None
        if seq != pos:
            raise ParseError(f"non-monotone rank: item {pos} carries seqNum {seq}")
        items.append((seq, shot_id))
    return RankingDocument(feature_number=fnum, items=tuple(items))


def parse_manifest(text: str) -> list[ManifestEntry]:
    """Parse the shot manifest: one shot per line.

    Columns are shot_id, keyframe_path, and an optional video_id. Tab-
    separated when a tab is present, otherwise whitespace-separated (paths
    with spaces require tabs).
    """
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        parts = [p.strip() for p in parts if p.strip()]
        if len(parts) not in (2, 3):
            raise ParseError(
                f"line {lineno}: expected 'shot_id keyframe_path [video_id]', got {line!r}"
            )
        shot_id, keyframe_path = parts[0], parts[1]
        video_id = parts[2] if len(parts) == 3 else ""
        if shot_id in seen:
            raise ParseError(f"line {lineno}: duplicate shot_id {shot_id!r}")
        seen.add(shot_id)
        entries.append(ManifestEntry(shot_id, keyframe_path, video_id))
    return entries


def parse_detections(text: str, lexicon: ConceptLexicon) -> list[DetectionRecord]:
    """Parse a score table: shot_id, concept_id, score per line."""
    records: list[DetectionRecord] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(
                f"line {lineno}: expected 'shot_id concept_id score', got {line!r}"
            )
        try:
            cid = int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer concept id {parts[1]!r}") from None
        if cid not in lexicon:
            raise ParseError(f"line {lineno}: concept {cid} is not in the lexicon")
        try:
            score = float(parts[2])
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric score {parts[2]!r}") from None
        try:
            records.append(DetectionRecord(shot_id=parts[0], concept_id=cid, score=score))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return records


def assemble_corpus(
    rankings: Sequence[RankingDocument],
    manifest: Sequence[ManifestEntry] | Mapping[str, str],
    lexicon: ConceptLexicon,
    top_k: int = 2000,
) -> Corpus:
    """Build the corpus by binarizing ranked lists at depth top_k.

    A shot carries concept c exactly when it sits within the first top_k
    items of c's ranking. Every manifest shot becomes a corpus shot; shots
    outside every top-k prefix get empty vectors. Ranking order among
    documents does not matter.
    """
    if top_k < 0:
        raise ValueError(f"top_k must be non-negative, got {top_k}")
    if isinstance(manifest, Mapping):
        entries = [ManifestEntry(sid, path, "") for sid, path in manifest.items()]
    else:
        entries = list(manifest)
    by_shot: dict[str, set[int]] = {e.shot_id: set() for e in entries}
    missing: set[str] = set()
    for doc in rankings:
        for seq, shot_id in doc.items:
            if shot_id not in by_shot:
                missing.add(shot_id)
            elif seq <= top_k:
                by_shot[shot_id].add(doc.feature_number)
    if missing:
        raise ParseError(
            "ranked shots missing from the manifest: " + ", ".join(sorted(missing))
        )
    shots = [
        ShotRecord(
            shot_id=e.shot_id,
            video_id=e.video_id,
            keyframe_path=e.keyframe_path,
            vector=ConceptVector(e.shot_id, frozenset(by_shot[e.shot_id])),
        )
        for e in entries
    ]
    return Corpus(lexicon, shots)


def assemble_from_detections(
    records: Sequence[DetectionRecord],
    manifest: Sequence[ManifestEntry] | Mapping[str, str],
    lexicon: ConceptLexicon,
    tau: float = 0.5,
) -> Corpus:
    """Build the corpus from raw scores thresholded at tau."""
    from .semantics import binarize_detections

    if isinstance(manifest, Mapping):
        entries = [ManifestEntry(sid, path, "") for sid, path in manifest.items()]
    else:
        entries = list(manifest)
    known = {e.shot_id for e in entries}
    missing = sorted({r.shot_id for r in records} - known)
    if missing:
        raise ParseError("scored shots missing from the manifest: " + ", ".join(missing))
    vectors = binarize_detections(records, tau)
    shots = [
        ShotRecord(
            shot_id=e.shot_id,
            video_id=e.video_id,
            keyframe_path=e.keyframe_path,
            vector=ConceptVector(e.shot_id, vectors.get(e.shot_id, frozenset())),
        )
        for e in entries
    ]
    return Corpus(lexicon, shots)


def _parse_weight(text: str) -> float:
    # Comma decimals appear in locale-formatted exports; normalize to dot.
    normalized = text.replace(",", ".")
    try:
        weight = float(normalized)
    except ValueError:
        raise ParseError(f"non-numeric weight {text!r}") from None
    if not 0.0 <= weight <= 1.0:
        raise ParseError(f"weight {text!r} outside [0, 1]")
    return weight


def parse_correlation_xml(
    text: str, lexicon: ConceptLexicon | None = None
) -> CorrelationDocument:
    """Parse an Indexing/Concept/SubConcept correlation document.

    Comma decimal weights are normalized to dot form. When a lexicon is
    supplied, every id/name pair must agree with it.
    """
    root = _parse_xml(text)
    if root.tag != "Indexing":
        raise ParseError(f"expected Indexing root element, got {root.tag!r}")
    rows: list[ConceptRow] = []
    for concept in root:
        if concept.tag != "Concept":
            raise ParseError(f"unexpected element {concept.tag!r} under Indexing")
        cid_text = concept.get("ConceptId")
        cname = concept.get("ConceptName")
        if cid_text is None or cname is None:
            raise ParseError("Concept element lacks ConceptId or ConceptName")
        try:
            cid = int(cid_text)
        except ValueError:
            raise ParseError(f"non-integer ConceptId {cid_text!r}") from None
        subs: list[SubConceptRow] = []
        for sub in concept:
            if sub.tag != "SubConcept":
                raise ParseError(f"unexpected element {sub.tag!r} under Concept")
            sid_text = sub.get("ConceptID")
            sname = sub.get("ConceptName")
            wtext = sub.get("Weight")
            if sid_text is None or sname is None or wtext is None:
                raise ParseError(
                    "SubConcept element lacks ConceptID, ConceptName, or Weight"
                )
            try:
                sid = int(sid_text)
            except ValueError:
                raise ParseError(f"non-integer SubConcept ConceptID {sid_text!r}") from None
            subs.append(SubConceptRow(sid, sname, _parse_weight(wtext)))
        rows.append(ConceptRow(cid, cname, tuple(subs)))
    doc = CorrelationDocument(entries=tuple(rows))
    if lexicon is not None:
        for row in doc.entries:
            for cid, name in [(row.concept_id, row.concept_name)] + [
                (s.sub_id, s.sub_name) for s in row.sub_concepts
            ]:
                if cid not in lexicon:
                    raise ParseError(f"concept id {cid} is not in the lexicon")
                if lexicon.name_of(cid) != name:
                    raise ParseError(
                        f"concept {cid} named {name!r} but the lexicon says "
                        f"{lexicon.name_of(cid)!r}"
                    )
    return doc


def format_weight(weight: float) -> str:
    """Dot-decimal weight with at most 4 fractional digits, no trailing zeros."""
    text = f"{weight:.4f}".rstrip("0").rstrip(".")
    return text if text else "0"


def export_correlation_xml(
    matrix: CorrelationMatrix, lexicon: ConceptLexicon, threshold: float = 0.0
) -> str:
    """Serialize the matrix in the Indexing/Concept/SubConcept shape.

    One Concept element per lexicon concept in ascending id; SubConcept
    children are the targets (source excluded) whose weight clears the
    threshold, ascending by id. Output is byte-deterministic.
    """
    if matrix.lexicon != lexicon:
        raise ValueError("matrix lexicon does not match the export lexicon")
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', CORRELATION_DOCTYPE, "<Indexing>"]
    for cid, cname in lexicon:
        lines.append(f"  <Concept ConceptId={quoteattr(str(cid))} ConceptName={quoteattr(cname)}>")
        for sid, sname in lexicon:
            if sid == cid:
                continue
            weight = matrix.weight(cid, sid)
            if weight >= threshold:
                lines.append(
                    f"    <SubConcept ConceptID={quoteattr(str(sid))} "
                    f"ConceptName={quoteattr(sname)} "
                    f"Weight={quoteattr(format_weight(weight))}/>"
                )
        lines.append("  </Concept>")
    lines.append("</Indexing>")
    return "\n".join(lines) + "\n"


def matrix_from_correlation_document(
    doc: CorrelationDocument,
) -> tuple[ConceptLexicon, CorrelationMatrix]:
    """Rebuild a matrix from parsed rows.

    The lexicon is the union of all ids seen; self-correlations (absent
    from the XML by design) are restored to 1.
    """
    names: dict[int, str] = {}
    for row in doc.entries:
        names.setdefault(row.concept_id, row.concept_name)
        for sub in row.sub_concepts:
            names.setdefault(sub.sub_id, sub.sub_name)
    lexicon = ConceptLexicon(sorted(names.items()))
    triples = [(cid, cid, 1.0) for cid in lexicon.ids]
    for row in doc.entries:
        for sub in row.sub_concepts:
            if sub.sub_id != row.concept_id:
                triples.append((row.concept_id, sub.sub_id, sub.weight))
    return lexicon, CorrelationMatrix.from_entries(lexicon, triples)
