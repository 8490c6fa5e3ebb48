"""
Edge-labelled directed graphs with label-partitioned adjacency
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from typing_extensions import TypeAlias

from .exceptions import GraphFormatError, UnknownLabelError, VertexRangeError
from .grammar import Grammar

logger = logging.getLogger(__name__)

EdgeTriple: TypeAlias = Tuple[int, int, int]

DEFAULT_MAX_VERTICES = 1 << 24


class Path(BaseModel):
    """A walk given by its start vertex and consecutive (u, v, label) edges"""
    start: int = Field(ge=0)
    edges: Tuple[EdgeTriple, ...] = ()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_consecutive(self) -> "Path":
        at = self.start
        for u, v, _ in self.edges:
            if u != at:
                raise ValueError(f"edge ({u}, {v}) does not continue the walk at vertex {at}")
            at = v
        return self

    @classmethod
    def empty(cls, vertex: int) -> "Path":
        return cls(start=vertex)

    @property
    def end(self) -> int:
        return self.edges[-1][1] if self.edges else self.start

    def __len__(self) -> int:
        return len(self.edges)

    def concat(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise ValueError(f"cannot concatenate a walk ending at {self.end} with one starting at {other.start}")
        return Path(start=self.start, edges=self.edges + other.edges)

    def vertices(self) -> List[int]:
        return [self.start] + [v for _, v, _ in self.edges]


def trace_of(path: Path) -> Tuple[int, ...]:
    """Label ids along the path, in edge order"""
    return tuple(label for _, _, label in path.edges)


class LabeledGraph(BaseModel):
    """G = (V, E, Σ, λ) with vertices 0..n-1 and terminal-id labels.

    Identical (u, v, label) triples are stored once; parallel edges with
    different labels are distinct. Adjacency is partitioned by label so
    propagation can scan In_a(x) and Out_a(v) directly.
    """
    n: int = Field(ge=0)
    edges: Tuple[EdgeTriple, ...] = ()
    label_names: Tuple[str, ...] = ()
    vertex_names: Optional[Tuple[str, ...]] = None

    model_config = ConfigDict(frozen=True)

    _in: Dict[int, Dict[int, List[int]]] = PrivateAttr(default_factory=dict)
    _out: Dict[int, Dict[int, List[int]]] = PrivateAttr(default_factory=dict)
    _by_label: Dict[int, List[Tuple[int, int]]] = PrivateAttr(default_factory=dict)

    @field_validator("edges", mode="before")
    @classmethod
    def canonical_edges(cls, value: Iterable[Sequence[int]]) -> Tuple[EdgeTriple, ...]:
        return tuple(sorted({(int(u), int(v), int(a)) for u, v, a in value}))

    @model_validator(mode="after")
    def check_ranges(self) -> "LabeledGraph":
        for u, v, label in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range [0, {self.n})")
            if self.label_names and not 0 <= label < len(self.label_names):
                raise ValueError(f"edge label id {label} is not a known terminal")
        if self.vertex_names is not None and len(self.vertex_names) != self.n:
            raise ValueError("vertex_names must name every vertex")
        return self

    def model_post_init(self, __context: object) -> None:
        for u, v, label in self.edges:
            self._out.setdefault(label, {}).setdefault(u, []).append(v)
            self._in.setdefault(label, {}).setdefault(v, []).append(u)
            self._by_label.setdefault(label, []).append((u, v))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def m_by_label(self) -> Dict[int, int]:
        return {label: len(pairs) for label, pairs in self._by_label.items()}

    def in_neighbors(self, label: int, v: int) -> Sequence[int]:
        """In_a(v): predecessors of v over edges labelled ``label``"""
        return self._in.get(label, {}).get(v, ())

    def out_neighbors(self, label: int, u: int) -> Sequence[int]:
        """Out_a(u): successors of u over edges labelled ``label``"""
        return self._out.get(label, {}).get(u, ())

    def edges_with_label(self, label: int) -> Sequence[Tuple[int, int]]:
        return self._by_label.get(label, ())

    def labels(self) -> List[int]:
        return sorted(self._by_label)

    def has_edge(self, u: int, v: int, label: int) -> bool:
        return v in self.out_neighbors(label, u)

    def check_vertex(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise VertexRangeError(
                f"vertex {v} outside graph with {self.n} vertices", "vertex_range", {"vertex": v, "n": self.n}
            )
        return v

    def vertex_id(self, token: Union[int, str]) -> int:
        """Resolve a vertex name or integer token to its id"""
        if isinstance(token, int):
            return self.check_vertex(token)
        if self.vertex_names is not None:
            try:
                return self.vertex_names.index(token)
            except ValueError:
                raise VertexRangeError(f"unknown vertex {token!r}", "vertex_range", {"vertex": token}) from None
        try:
            return self.check_vertex(int(token))
        except ValueError:
            raise VertexRangeError(f"unknown vertex {token!r}", "vertex_range", {"vertex": token}) from None

    def vertex_name(self, v: int) -> str:
        return self.vertex_names[v] if self.vertex_names is not None else str(v)

    def label_name(self, label: int) -> str:
        return self.label_names[label] if label < len(self.label_names) else str(label)


def path_labels(path: Path, graph: LabeledGraph) -> List[str]:
    return [graph.label_name(label) for label in trace_of(path)]


def _as_int(token: str) -> Optional[int]:
    try:
        return int(token)
    except ValueError:
        return None


def parse_graph(
    text: str,
    label_map: Union[Grammar, Sequence[str]],
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> LabeledGraph:
    """Parse an edge list against the terminal interning of a grammar.

    Raises:
        GraphFormatError: malformed line or directive
        UnknownLabelError: a label is not a terminal of the grammar
        VertexRangeError: vertex outside ``@vertices N`` or above ``max_vertices``
    """
    labels = tuple(label_map.terminal_names) if isinstance(label_map, Grammar) else tuple(label_map)
    label_index = {name: i for i, name in enumerate(labels)}

    declared_n: Optional[int] = None
    declared_names: List[str] = []
    raw_edges: List[Tuple[str, str, int, int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "@vertices":
            if declared_n is not None:
                raise GraphFormatError("@vertices declared twice", line_no)
            count = _as_int(tokens[1]) if len(tokens) == 2 else None
            if count is None or count < 0:
                raise GraphFormatError("@vertices takes one non-negative integer", line_no)
            declared_n = count
            continue
        if tokens[0] == "@vertex":
            if len(tokens) != 2:
                raise GraphFormatError("@vertex takes one name", line_no)
            if tokens[1] in declared_names:
                raise GraphFormatError(f"vertex {tokens[1]!r} declared twice", line_no)
            declared_names.append(tokens[1])
            continue
        if tokens[0].startswith("@"):
            raise GraphFormatError(f"unknown directive {tokens[0]}", line_no)
        if len(tokens) != 3:
            raise GraphFormatError("expected 'u v label'", line_no)
        u, v, label = tokens
        if label not in label_index:
            raise UnknownLabelError(
                f"line {line_no}: label {label!r} is not a terminal of the grammar",
                "unknown_label",
                {"line": line_no, "label": label},
            )
        raw_edges.append((u, v, label_index[label], line_no))

    if declared_n is not None and declared_names:
        raise GraphFormatError("@vertices and @vertex cannot be combined", 0)

    vertex_names: Optional[Tuple[str, ...]] = None
    edges: List[EdgeTriple] = []
    if declared_n is not None:
        for u, v, label, line_no in raw_edges:
            ids = []
            for token in (u, v):
                value = _as_int(token)
                if value is None:
                    raise GraphFormatError(f"vertex {token!r} is not an integer", line_no)
                if not 0 <= value < declared_n:
                    raise VertexRangeError(
                        f"line {line_no}: vertex {value} outside @vertices {declared_n}",
                        "vertex_range",
                        {"line": line_no, "vertex": value},
                    )
                ids.append(value)
            edges.append((ids[0], ids[1], label))
        n = declared_n
    elif not declared_names and all(_as_int(t) is not None for u, v, _, _ in raw_edges for t in (u, v)):
        n = 0
        for u, v, label, line_no in raw_edges:
            iu, iv = int(u), int(v)
            if iu < 0 or iv < 0:
                raise VertexRangeError(
                    f"line {line_no}: negative vertex id", "vertex_range", {"line": line_no}
                )
            n = max(n, iu + 1, iv + 1)
            edges.append((iu, iv, label))
    else:
        index: Dict[str, int] = {}
        for name in declared_names:
            index[name] = len(index)
        for u, v, label, _ in raw_edges:
            for token in (u, v):
                if token not in index:
                    index[token] = len(index)
            edges.append((index[u], index[v], label))
        vertex_names = tuple(index)
        n = len(index)

    if n > max_vertices:
        raise VertexRangeError(
            f"graph needs {n} vertices, limit is {max_vertices}", "vertex_range", {"n": n, "limit": max_vertices}
        )

    graph = LabeledGraph(n=n, edges=edges, label_names=labels, vertex_names=vertex_names)
    logger.debug("parsed graph: n=%d m=%d labels=%s", graph.n, graph.m, graph.m_by_label)
    return graph


def serialize_graph(graph: LabeledGraph) -> str:
    """Canonical edge-list text; parsing it back yields an identical graph"""
    lines: List[str] = []
    if graph.vertex_names is not None:
        lines.extend(f"@vertex {name}" for name in graph.vertex_names)
    else:
        lines.append(f"@vertices {graph.n}")
    for u, v, label in graph.edges:
        lines.append(f"{graph.vertex_name(u)} {graph.vertex_name(v)} {graph.label_name(label)}")
    return "\n".join(lines) + "\n"


def parse_query_pairs(text: str, graph: LabeledGraph) -> List[Tuple[int, int]]:
    """Lines ``s t`` resolved to vertex ids"""
    pairs: List[Tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError("expected 's t'", line_no)
        pairs.append((graph.vertex_id(tokens[0]), graph.vertex_id(tokens[1])))
    return pairs
