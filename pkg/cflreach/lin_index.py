"""
Terminal-anchored propagation for TALNF grammars.

A dequeued entry (B, x, v) only ever extends by one edge: rules A -> aB
look back over In_a(x), rules A -> Ba look ahead over Out_a(v). Work is
therefore charged to adjacency entries rather than to vertex triples.
"""

import logging
import time
from collections import deque
from typing import Deque, Dict, List, Tuple

from .exceptions import GrammarNotTALNFError
from .grammar import Grammar, is_talnf
from .graph import LabeledGraph
from .models import BuildStats, IndexKind
from .relations import EPS, Entry, LinL, LinR, ReachabilityIndex, RelationSet, Term, WitnessTable

logger = logging.getLogger(__name__)

# B -> [(A, a)] for A -> aB, and for A -> Ba
DispatchTable = Dict[int, List[Tuple[int, int]]]


def dispatch_tables(g: Grammar) -> Tuple[Dict[int, List[int]], DispatchTable, DispatchTable, List[int]]:
    """Index TALNF rules by terminal (A -> a) and by rhs nonterminal and side"""
    terminal_rules: Dict[int, List[int]] = {}
    left_rules: DispatchTable = {}
    right_rules: DispatchTable = {}
    epsilon_lhs: List[int] = []
    for p in g.productions:
        if not p.rhs:
            epsilon_lhs.append(p.lhs)
        elif len(p.rhs) == 1:
            terminal_rules.setdefault(p.rhs[0].id, []).append(p.lhs)
        elif p.rhs[0].is_terminal:
            left_rules.setdefault(p.rhs[1].id, []).append((p.lhs, p.rhs[0].id))
        else:
            right_rules.setdefault(p.rhs[0].id, []).append((p.lhs, p.rhs[1].id))
    return terminal_rules, left_rules, right_rules, epsilon_lhs


def require_talnf(g: Grammar, index_name: str) -> None:
    if not is_talnf(g):
        raise GrammarNotTALNFError(
            f"grammar is {g.form.value}, {index_name} index needs TALNF",
            "grammar_not_talnf",
            {"form": g.form.value},
        )


def lin_build(g: Grammar, graph: LabeledGraph) -> ReachabilityIndex:
    """Compute every M_A for a TALNF grammar in O(|P|·m·n).

    Raises:
        GrammarNotTALNFError: ``g`` fails the TALNF checker
    """
    require_talnf(g, "lin")

    began = time.perf_counter()
    relations = RelationSet(g.num_nonterminals, graph.n)
    witnesses = WitnessTable()
    queue: Deque[Entry] = deque()
    stats = BuildStats(kind=IndexKind.LIN, nonterminals=g.num_nonterminals, vertices=graph.n, edges=graph.m)
    terminal_rules, left_rules, right_rules, epsilon_lhs = dispatch_tables(g)

    def push(a: int, u: int, v: int, witness) -> None:
        if relations.add(a, u, v):
            witnesses.record(a, u, v, witness)
            queue.append((a, u, v))
            stats.enqueued += 1

    for a in epsilon_lhs:
        for u in range(graph.n):
            push(a, u, u, EPS)
    for label, lhs_list in terminal_rules.items():
        for u, v in graph.edges_with_label(label):
            for a in lhs_list:
                push(a, u, v, Term(u, v, label))

    while queue:
        b, x, v = queue.popleft()
        stats.dequeues += 1
        for a, label in left_rules.get(b, ()):
            predecessors = graph.in_neighbors(label, x)
            stats.inner_iterations += len(predecessors)
            for u in predecessors:
                push(a, u, v, LinL(label, u, x, b))
        for a, label in right_rules.get(b, ()):
            successors = graph.out_neighbors(label, v)
            stats.inner_iterations += len(successors)
            for w in successors:
                push(a, x, w, LinR(b, label, v, w))

    stats.true_entries = relations.true_count
    stats.elapsed_seconds = time.perf_counter() - began
    logger.debug("lin build: %s", stats.as_key_values())
    return ReachabilityIndex(
        kind=IndexKind.LIN, grammar=g, graph=graph, relations=relations, witnesses=witnesses, stats=stats
    )


def propagation_count(stats: BuildStats) -> int:
    """Adjacency entries scanned across all dequeues"""
    return stats.inner_iterations
