"""
Shortest accepted path lengths for TALNF grammars.

Distances are a multi-source BFS over the implicit dependency graph whose
nodes are triples (A, u, v): ε-sources sit at distance 0, terminal
sources at 1, and every A -> aB / A -> Ba step adds one edge. The graph is
never materialised; successors are generated from the label-partitioned
adjacency exactly as in the boolean propagation.
"""

import logging
import time
from collections import deque
from dataclasses import dataclass
from typing import Deque, List, Optional, Union

from typing_extensions import Final

from .grammar import Grammar
from .graph import LabeledGraph, Path
from .lin_index import dispatch_tables, require_talnf
from .models import BuildStats, IndexKind
from .relations import (
    EPS,
    Entry,
    LinL,
    LinR,
    ReachabilityIndex,
    RelationSet,
    Term,
    WitnessTable,
    check_pair,
)

logger = logging.getLogger(__name__)

INF: Final = 2 ** 63 - 1


@dataclass
class DistanceTable(ReachabilityIndex):
    """Boolean index plus D_A[u, v]; witnesses are first-discovery parent records"""
    distances: Optional[List[List[int]]] = None

    def distance(self, a: int, u: int, v: int) -> int:
        check_pair(self.relations, u, v)
        assert self.distances is not None
        return self.distances[a][u * self.graph.n + v]

    @property
    def settled(self) -> int:
        return self.stats.dequeues

    def finite_relations(self) -> RelationSet:
        """Support of D as a RelationSet"""
        assert self.distances is not None
        n = self.graph.n
        rel = RelationSet(self.grammar.num_nonterminals, n)
        for a, row in enumerate(self.distances):
            for index, d in enumerate(row):
                if d != INF:
                    rel.add(a, index // n, index % n)
        return rel

    def shortest_accepted_path(
        self, s: int, t: int, nonterminal: Union[int, str, None] = None
    ) -> Optional[Path]:
        """A path of length D_A[s, t] with accepted trace, or None when D is infinite"""
        a = self.nonterminal(nonterminal)
        if self.distance(a, s, t) == INF:
            return None
        return self.witness(s, t, a)


def lindist_build(g: Grammar, graph: LabeledGraph) -> DistanceTable:
    """Exact D_A for every triple, with a parent record per finite entry.

    Raises:
        GrammarNotTALNFError: ``g`` fails the TALNF checker
    """
    require_talnf(g, "lindist")

    began = time.perf_counter()
    n = graph.n
    distances = [[INF] * (n * n) for _ in range(g.num_nonterminals)]
    relations = RelationSet(g.num_nonterminals, n)
    parents = WitnessTable()
    queue: Deque[Entry] = deque()
    stats = BuildStats(kind=IndexKind.LINDIST, nonterminals=g.num_nonterminals, vertices=n, edges=graph.m)
    terminal_rules, left_rules, right_rules, epsilon_lhs = dispatch_tables(g)

    def discover(a: int, u: int, v: int, d: int, parent) -> None:
        if distances[a][u * n + v] != INF:
            return
        distances[a][u * n + v] = d
        relations.add(a, u, v)
        parents.record(a, u, v, parent)
        queue.append((a, u, v))
        stats.enqueued += 1

    # 0-sources go in ahead of 1-sources so the FIFO stays sorted by distance
    for a in epsilon_lhs:
        for u in range(n):
            discover(a, u, u, 0, EPS)
    for label, lhs_list in terminal_rules.items():
        for u, v in graph.edges_with_label(label):
            for a in lhs_list:
                discover(a, u, v, 1, Term(u, v, label))

    while queue:
        b, x, v = queue.popleft()
        stats.dequeues += 1
        d = distances[b][x * n + v] + 1
        for a, label in left_rules.get(b, ()):
            predecessors = graph.in_neighbors(label, x)
            stats.inner_iterations += len(predecessors)
            for u in predecessors:
                discover(a, u, v, d, LinL(label, u, x, b))
        for a, label in right_rules.get(b, ()):
            successors = graph.out_neighbors(label, v)
            stats.inner_iterations += len(successors)
            for w in successors:
                discover(a, x, w, d, LinR(b, label, v, w))

    stats.true_entries = relations.true_count
    stats.elapsed_seconds = time.perf_counter() - began
    logger.debug("lindist build: %s", stats.as_key_values())
    return DistanceTable(
        kind=IndexKind.LINDIST,
        grammar=g,
        graph=graph,
        relations=relations,
        witnesses=parents,
        stats=stats,
        distances=distances,
    )


def shortest_accepted_path(table: DistanceTable, s: int, t: int) -> Optional[Path]:
    return table.shortest_accepted_path(s, t)
