"""
Reference implementations used to check the index builders.

``naive_fixpoint`` recomputes every relation from the previous round until
nothing changes; ``enumerate_accepted`` walks the graph exhaustively up to
a length bound and asks the CYK recognizer about each trace.
"""

import logging
from typing import Dict, List, Set, Tuple

from typing_extensions import Final

from .exceptions import BudgetExceededError, UnsupportedFormError
from .grammar import Grammar, is_cnf, recognize, to_cnf
from .graph import LabeledGraph, Path, trace_of
from .relations import RelationSet

logger = logging.getLogger(__name__)

MAX_WALK_LENGTH: Final = 12
DEFAULT_NODE_BUDGET: Final = 200_000

Pairs = Set[Tuple[int, int]]


def _compose(left: Pairs, right: Pairs) -> Pairs:
    by_start: Dict[int, List[int]] = {}
    for x, v in right:
        by_start.setdefault(x, []).append(v)
    return {(u, v) for u, x in left for v in by_start.get(x, ())}


def naive_fixpoint(g: Grammar, graph: LabeledGraph) -> RelationSet:
    """Least fixpoint of the rule system by full re-scan rounds.

    Handles any grammar whose right-hand sides have length at most two,
    which covers CNF and TALNF.

    Raises:
        UnsupportedFormError: a right-hand side is longer than two
    """
    for p in g.productions:
        if len(p.rhs) > 2:
            raise UnsupportedFormError(
                f"rule for {g.nonterminal_names[p.lhs]} has {len(p.rhs)} symbols; at most 2 supported",
                "unsupported_form",
            )

    by_label: Dict[int, Pairs] = {label: set(graph.edges_with_label(label)) for label in graph.labels()}
    diagonal = {(u, u) for u in range(graph.n)}
    current: List[Pairs] = [set() for _ in range(g.num_nonterminals)]

    rounds = 0
    while True:
        rounds += 1

        def pairs_of(sym) -> Pairs:
            return by_label.get(sym.id, set()) if sym.is_terminal else current[sym.id]

        nxt: List[Pairs] = [set(s) for s in current]
        for p in g.productions:
            if not p.rhs:
                nxt[p.lhs] |= diagonal
            elif len(p.rhs) == 1:
                nxt[p.lhs] |= pairs_of(p.rhs[0])
            else:
                nxt[p.lhs] |= _compose(pairs_of(p.rhs[0]), pairs_of(p.rhs[1]))
        if nxt == current:
            break
        current = nxt

    relations = RelationSet(g.num_nonterminals, graph.n)
    for a, pairs in enumerate(current):
        for u, v in sorted(pairs):
            relations.add(a, u, v)
    logger.debug("naive fixpoint: rounds=%d true=%d", rounds, relations.true_count)
    return relations


def enumerate_accepted(
    g: Grammar,
    graph: LabeledGraph,
    s: int,
    t: int,
    max_len: int,
    budget: int = DEFAULT_NODE_BUDGET,
) -> List[Tuple[int, Path]]:
    """Every walk s -> t of length <= max_len whose trace is in L(g), shortest first.

    Raises:
        BudgetExceededError: max_len above the supported bound, or more than
            ``budget`` walk prefixes expanded
    """
    if max_len > MAX_WALK_LENGTH:
        raise BudgetExceededError(
            f"max_len {max_len} above {MAX_WALK_LENGTH}", "budget_exceeded", {"max_len": max_len}
        )
    graph.check_vertex(s)
    graph.check_vertex(t)
    target = g if is_cnf(g) else to_cnf(g)
    verdicts: Dict[Tuple[int, ...], bool] = {}

    out_edges: Dict[int, List[Tuple[int, int]]] = {}
    for u, v, label in graph.edges:
        out_edges.setdefault(u, []).append((v, label))

    found: List[Tuple[int, Path]] = []
    expanded = 0
    stack: List[Tuple[int, Tuple[Tuple[int, int, int], ...]]] = [(s, ())]
    while stack:
        at, edges = stack.pop()
        expanded += 1
        if expanded > budget:
            raise BudgetExceededError(
                f"walk enumeration exceeded {budget} expansions", "budget_exceeded", {"budget": budget}
            )
        if at == t:
            path = Path(start=s, edges=edges)
            trace = trace_of(path)
            if trace not in verdicts:
                verdicts[trace] = recognize(target, trace)
            if verdicts[trace]:
                found.append((len(edges), path))
        if len(edges) < max_len:
            for v, label in reversed(out_edges.get(at, [])):
                stack.append((v, edges + ((at, v, label),)))

    found.sort(key=lambda item: (item[0], item[1].edges))
    return found
