"""
Cubic worklist saturation over CNF grammars
"""

import logging
import time
from collections import deque
from typing import Deque, Dict, List, Tuple

from .exceptions import GrammarNotCNFError
from .grammar import Grammar, is_cnf
from .graph import LabeledGraph
from .models import BuildStats, IndexKind
from .relations import EPS, Bin, Entry, ReachabilityIndex, RelationSet, Term, WitnessTable
from .utils import iter_bits

logger = logging.getLogger(__name__)


def sat_build(g: Grammar, graph: LabeledGraph) -> ReachabilityIndex:
    """Compute every M_A and a witness for each true entry.

    Entries are enqueued once, when they first flip to true, and the
    witness written at that moment is kept. ``inner_iterations`` charges
    one pass over the n candidate vertices for each row or column scan.

    Raises:
        GrammarNotCNFError: ``g`` fails the CNF checker
    """
    if not is_cnf(g):
        raise GrammarNotCNFError(
            f"grammar is {g.form.value}, sat index needs CNF", "grammar_not_cnf", {"form": g.form.value}
        )

    began = time.perf_counter()
    n = graph.n
    relations = RelationSet(g.num_nonterminals, n, track_columns=True)
    witnesses = WitnessTable()
    queue: Deque[Entry] = deque()
    stats = BuildStats(kind=IndexKind.SAT, nonterminals=g.num_nonterminals, vertices=n, edges=graph.m)

    terminal_rules: Dict[int, List[int]] = {}
    by_left: Dict[int, List[Tuple[int, int]]] = {}
    by_right: Dict[int, List[Tuple[int, int]]] = {}
    epsilon_lhs: List[int] = []
    for p in g.productions:
        if not p.rhs:
            epsilon_lhs.append(p.lhs)
        elif len(p.rhs) == 1:
            terminal_rules.setdefault(p.rhs[0].id, []).append(p.lhs)
        else:
            b, c = p.rhs[0].id, p.rhs[1].id
            by_left.setdefault(b, []).append((p.lhs, c))
            by_right.setdefault(c, []).append((p.lhs, b))

    def push(a: int, u: int, v: int, witness) -> None:
        if relations.add(a, u, v):
            witnesses.record(a, u, v, witness)
            queue.append((a, u, v))
            stats.enqueued += 1

    for a in epsilon_lhs:
        for u in range(n):
            push(a, u, u, EPS)
    for label in graph.labels():
        lhs_list = terminal_rules.get(label, [])
        if not lhs_list:
            continue
        for u, v in graph.edges_with_label(label):
            for a in lhs_list:
                push(a, u, v, Term(u, v, label))

    while queue:
        b, i, j = queue.popleft()
        stats.dequeues += 1
        # A -> B C: (i, j) in B and (j, k) in C
        for a, c in by_left.get(b, ()):
            stats.inner_iterations += n
            for k in iter_bits(relations.row(c, j)):
                stats.triples_inspected += 1
                push(a, i, k, Bin(b, c, j))
        # A -> C B: (k, i) in C and (i, j) in B
        for a, c in by_right.get(b, ()):
            stats.inner_iterations += n
            for k in iter_bits(relations.column(c, i)):
                stats.triples_inspected += 1
                push(a, k, j, Bin(c, b, i))

    stats.true_entries = relations.true_count
    stats.elapsed_seconds = time.perf_counter() - began
    logger.debug("sat build: %s", stats.as_key_values())
    return ReachabilityIndex(
        kind=IndexKind.SAT, grammar=g, graph=graph, relations=relations, witnesses=witnesses, stats=stats
    )
