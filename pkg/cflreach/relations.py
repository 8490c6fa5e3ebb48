"""
Relation matrices, witness records and the index type shared by all builders
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple, Union

from typing_extensions import TypeAlias

from .exceptions import MissingWitnessError, NoWitnessError, UnknownSymbolError, VertexRangeError
from .grammar import Grammar
from .graph import LabeledGraph, Path
from .models import BuildStats, IndexKind
from .utils import iter_bits, popcount

logger = logging.getLogger(__name__)

Entry: TypeAlias = Tuple[int, int, int]


class RelationSet:
    """Per-nonterminal boolean matrices M_A with bit-packed rows.

    Row ``rows[A][u]`` is an int whose bit v is M_A[u, v]. With
    ``track_columns`` a transposed copy is kept so column scans cost the
    same as row scans.
    """

    def __init__(self, num_nonterminals: int, n: int, track_columns: bool = False):
        self.num_nonterminals = num_nonterminals
        self.n = n
        self.rows: List[List[int]] = [[0] * n for _ in range(num_nonterminals)]
        self.cols: Optional[List[List[int]]] = (
            [[0] * n for _ in range(num_nonterminals)] if track_columns else None
        )
        self.true_count = 0

    @classmethod
    def from_rows(cls, rows: List[List[int]], n: int, track_columns: bool = False) -> "RelationSet":
        relations = cls(len(rows), n, track_columns=track_columns)
        for a, matrix in enumerate(rows):
            for u, row in enumerate(matrix):
                for v in iter_bits(row):
                    relations.add(a, u, v)
        return relations

    def get(self, a: int, u: int, v: int) -> bool:
        return bool(self.rows[a][u] >> v & 1)

    def add(self, a: int, u: int, v: int) -> bool:
        """Set M_A[u, v]; True when the entry was previously unset"""
        row = self.rows[a][u]
        if row >> v & 1:
            return False
        self.rows[a][u] = row | (1 << v)
        if self.cols is not None:
            self.cols[a][v] |= 1 << u
        self.true_count += 1
        return True

    def row(self, a: int, u: int) -> int:
        return self.rows[a][u]

    def column(self, a: int, v: int) -> int:
        if self.cols is not None:
            return self.cols[a][v]
        return sum(1 << u for u in range(self.n) if self.rows[a][u] >> v & 1)

    def pairs(self, a: int) -> Iterator[Tuple[int, int]]:
        for u, row in enumerate(self.rows[a]):
            for v in iter_bits(row):
                yield u, v

    def entries(self) -> Iterator[Entry]:
        for a in range(self.num_nonterminals):
            for u, v in self.pairs(a):
                yield a, u, v

    def count(self, a: int) -> int:
        return sum(popcount(row) for row in self.rows[a])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelationSet):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __repr__(self) -> str:
        return f"RelationSet(nonterminals={self.num_nonterminals}, n={self.n}, true={self.true_count})"


@dataclass(frozen=True)
class Term:
    """Entry produced by a terminal rule on edge (u, v)"""
    u: int
    v: int
    label: int


@dataclass(frozen=True)
class Eps:
    """Entry produced by S -> ε on the diagonal"""


@dataclass(frozen=True)
class Bin:
    """A -> B C split at vertex ``mid``"""
    b: int
    c: int
    mid: int


@dataclass(frozen=True)
class LinL:
    """A -> a B: edge (u, x) labelled ``label`` followed by B from x"""
    label: int
    u: int
    x: int
    b: int


@dataclass(frozen=True)
class LinR:
    """A -> B a: B up to x followed by edge (x, w) labelled ``label``"""
    b: int
    label: int
    x: int
    w: int


EPS = Eps()

WitnessRecord: TypeAlias = Union[Term, Eps, Bin, LinL, LinR]


class WitnessTable:
    """W[A, u, v]; the first record written for an entry is kept"""

    def __init__(self) -> None:
        self._records: Dict[Entry, WitnessRecord] = {}

    def record(self, a: int, u: int, v: int, witness: WitnessRecord) -> bool:
        key = (a, u, v)
        if key in self._records:
            return False
        self._records[key] = witness
        return True

    def get(self, a: int, u: int, v: int) -> Optional[WitnessRecord]:
        return self._records.get((a, u, v))

    def items(self) -> Iterator[Tuple[Entry, WitnessRecord]]:
        return iter(self._records.items())

    def __contains__(self, key: object) -> bool:
        return key in self._records

    def __len__(self) -> int:
        return len(self._records)


def check_pair(relations: RelationSet, s: int, t: int) -> None:
    for v in (s, t):
        if not 0 <= v < relations.n:
            raise VertexRangeError(
                f"vertex {v} outside graph with {relations.n} vertices",
                "vertex_range",
                {"vertex": v, "n": relations.n},
            )


def query(relations: RelationSet, a: int, s: int, t: int) -> bool:
    """M_A[s, t]"""
    check_pair(relations, s, t)
    return relations.get(a, s, t)


def extract_path(witnesses: WitnessTable, a: int, u: int, v: int) -> Path:
    """Rebuild the walk recorded for (A, u, v), in time linear in its length.

    Raises:
        NoWitnessError: (A, u, v) has no record
        MissingWitnessError: a record refers to an entry that has none
    """
    if witnesses.get(a, u, v) is None:
        raise NoWitnessError(f"no witness for ({a}, {u}, {v})", "no_witness", {"entry": [a, u, v]})

    edges: List[Tuple[int, int, int]] = []
    stack: List[Union[Entry, Term]] = [(a, u, v)]
    while stack:
        item = stack.pop()
        if isinstance(item, Term):
            edges.append((item.u, item.v, item.label))
            continue
        na, nu, nv = item
        witness = witnesses.get(na, nu, nv)
        if witness is None:
            raise MissingWitnessError(
                f"witness table has no record for ({na}, {nu}, {nv})", "missing_witness", {"entry": list(item)}
            )
        if isinstance(witness, Term):
            edges.append((witness.u, witness.v, witness.label))
        elif isinstance(witness, Bin):
            stack.append((witness.c, witness.mid, nv))
            stack.append((witness.b, nu, witness.mid))
        elif isinstance(witness, LinL):
            stack.append((witness.b, witness.x, nv))
            stack.append(Term(witness.u, witness.x, witness.label))
        elif isinstance(witness, LinR):
            stack.append(Term(witness.x, witness.w, witness.label))
            stack.append((witness.b, nu, witness.x))
    return Path(start=u, edges=tuple(edges))


@dataclass
class ReachabilityIndex:
    """A built index: relations plus witnesses over one grammar and graph"""
    kind: IndexKind
    grammar: Grammar
    graph: LabeledGraph
    relations: RelationSet
    witnesses: WitnessTable
    stats: BuildStats

    def nonterminal(self, name: Union[int, str, None] = None) -> int:
        """Resolve a nonterminal name or id; the start symbol by default"""
        if name is None:
            return self.grammar.start
        if isinstance(name, int):
            if not 0 <= name < self.grammar.num_nonterminals:
                raise UnknownSymbolError(f"unknown nonterminal id {name}", "unknown_symbol", {"id": name})
            return name
        return self.grammar.nonterminal_id(name)

    def query(self, s: int, t: int, nonterminal: Union[int, str, None] = None) -> bool:
        return query(self.relations, self.nonterminal(nonterminal), s, t)

    def witness(self, s: int, t: int, nonterminal: Union[int, str, None] = None) -> Path:
        a = self.nonterminal(nonterminal)
        check_pair(self.relations, s, t)
        if not self.relations.get(a, s, t):
            raise NoWitnessError(
                f"({self.grammar.nonterminal_names[a]}, {s}, {t}) is not in the relation",
                "no_witness",
                {"entry": [a, s, t]},
            )
        return extract_path(self.witnesses, a, s, t)
