"""
Index files: versioned JSON documents validated with pydantic
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, Field, ValidationError
from typing_extensions import Final, Literal

from .exceptions import IndexFormatError
from .grammar import Grammar
from .graph import LabeledGraph
from .lin_dist_index import INF, DistanceTable
from .models import BuildStats, IndexKind
from .relations import EPS, Bin, Eps, LinL, LinR, ReachabilityIndex, RelationSet, Term, WitnessRecord, WitnessTable

logger = logging.getLogger(__name__)

FORMAT_VERSION: Final = 1

RECORD_TAGS: Final = {Term: "term", Eps: "eps", Bin: "bin", LinL: "linl", LinR: "linr"}


class WitnessEntry(BaseModel):
    """One W[A, u, v] record; ``args`` follow the record's field order"""
    a: int = Field(ge=0)
    u: int = Field(ge=0)
    v: int = Field(ge=0)
    tag: Literal["term", "eps", "bin", "linl", "linr"]
    args: List[int] = Field(default_factory=list)


class IndexDocument(BaseModel):
    format_version: int
    kind: IndexKind
    grammar: Grammar
    graph: LabeledGraph
    rows: List[List[str]]
    witnesses: List[WitnessEntry]
    distances: Optional[List[List[Union[int, Literal["inf"]]]]] = None
    stats: BuildStats


def _encode_record(a: int, u: int, v: int, record: WitnessRecord) -> WitnessEntry:
    tag = RECORD_TAGS[type(record)]
    if isinstance(record, Term):
        args = [record.u, record.v, record.label]
    elif isinstance(record, Bin):
        args = [record.b, record.c, record.mid]
    elif isinstance(record, LinL):
        args = [record.label, record.u, record.x, record.b]
    elif isinstance(record, LinR):
        args = [record.b, record.label, record.x, record.w]
    else:
        args = []
    return WitnessEntry(a=a, u=u, v=v, tag=tag, args=args)


def _decode_record(entry: WitnessEntry) -> WitnessRecord:
    expected = {"term": 3, "eps": 0, "bin": 3, "linl": 4, "linr": 4}[entry.tag]
    if len(entry.args) != expected:
        raise IndexFormatError(
            f"witness ({entry.a}, {entry.u}, {entry.v}) has {len(entry.args)} arguments, expected {expected}",
            "index_format",
        )
    if entry.tag == "term":
        return Term(*entry.args)
    if entry.tag == "bin":
        return Bin(*entry.args)
    if entry.tag == "linl":
        return LinL(*entry.args)
    if entry.tag == "linr":
        return LinR(*entry.args)
    return EPS


def to_document(index: ReachabilityIndex) -> IndexDocument:
    distances = None
    if isinstance(index, DistanceTable) and index.distances is not None:
        distances = [["inf" if d == INF else d for d in row] for row in index.distances]
    return IndexDocument(
        format_version=FORMAT_VERSION,
        kind=index.kind,
        grammar=index.grammar,
        graph=index.graph,
        rows=[[format(row, "x") for row in matrix] for matrix in index.relations.rows],
        witnesses=[_encode_record(a, u, v, record) for (a, u, v), record in sorted(index.witnesses.items())],
        distances=distances,
        stats=index.stats,
    )


def from_document(doc: IndexDocument) -> ReachabilityIndex:
    if doc.format_version != FORMAT_VERSION:
        raise IndexFormatError(
            f"unsupported index format version {doc.format_version} (expected {FORMAT_VERSION})",
            "index_version",
            {"format_version": doc.format_version},
        )
    n = doc.graph.n
    if len(doc.rows) != doc.grammar.num_nonterminals or any(len(matrix) != n for matrix in doc.rows):
        raise IndexFormatError("relation rows do not match the grammar and graph sizes", "index_format")
    try:
        rows = [[int(row, 16) for row in matrix] for matrix in doc.rows]
    except ValueError as e:
        raise IndexFormatError(f"bad relation row: {e}", "index_format") from e
    if any(row >> n for matrix in rows for row in matrix):
        raise IndexFormatError("relation row has bits beyond the vertex count", "index_format")
    relations = RelationSet.from_rows(rows, n, track_columns=doc.kind is IndexKind.SAT)

    witnesses = WitnessTable()
    for entry in doc.witnesses:
        witnesses.record(entry.a, entry.u, entry.v, _decode_record(entry))

    if doc.kind is IndexKind.LINDIST:
        if doc.distances is None:
            raise IndexFormatError("lindist index without distances", "index_format")
        distances = [[INF if d == "inf" else d for d in row] for row in doc.distances]
        return DistanceTable(
            kind=doc.kind,
            grammar=doc.grammar,
            graph=doc.graph,
            relations=relations,
            witnesses=witnesses,
            stats=doc.stats,
            distances=distances,
        )
    return ReachabilityIndex(
        kind=doc.kind, grammar=doc.grammar, graph=doc.graph, relations=relations, witnesses=witnesses, stats=doc.stats
    )


def save_index(index: ReachabilityIndex, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_document(index).model_dump_json(), encoding="utf-8")
    logger.debug("saved %s index to %s", index.kind.value, path)
    return path


def load_index(path: Path) -> ReachabilityIndex:
    """Read an index file written by ``save_index``

    Raises:
        IndexFormatError: unreadable, invalid, or unsupported-version file
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise IndexFormatError(f"cannot read index {path}: {e}", "index_unreadable") from e
    try:
        doc = IndexDocument.model_validate_json(text)
    except ValidationError as e:
        raise IndexFormatError(f"invalid index file {path}: {e.error_count()} validation errors", "index_format") from e
    return from_document(doc)
