"""
Shared witness DAG with hash-consing, and straight-line program emission
"""

import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .exceptions import InvalidHandleError, MissingWitnessError, NoWitnessError, SlpExpansionError
from .graph import Path
from .relations import Bin, Entry, Eps, LinL, LinR, RelationSet, Term, WitnessTable

logger = logging.getLogger(__name__)


class NodeKind(str, Enum):
    EDGE = "edge"
    EPS = "eps"
    CONCAT = "concat"


# (kind, a, b, c): Edge(u, v, label) | Eps(u, -, -) | Concat(left, right, -)
DagNode = Tuple[NodeKind, int, int, int]


class WitnessDag:
    """Append-only arena of hash-consed Edge / Eps / Concat nodes"""

    def __init__(self) -> None:
        self._nodes: List[DagNode] = []
        self._cons: Dict[DagNode, int] = {}
        self._start: List[int] = []
        self._end: List[int] = []
        self._length: List[int] = []
        self.roots: Dict[Entry, int] = {}

    def _intern(self, key: DagNode, start: int, end: int, length: int) -> int:
        handle = self._cons.get(key)
        if handle is None:
            handle = len(self._nodes)
            self._nodes.append(key)
            self._cons[key] = handle
            self._start.append(start)
            self._end.append(end)
            self._length.append(length)
        return handle

    def edge(self, u: int, v: int, label: int) -> int:
        return self._intern((NodeKind.EDGE, u, v, label), u, v, 1)

    def eps(self, u: int) -> int:
        return self._intern((NodeKind.EPS, u, -1, -1), u, u, 0)

    def concat(self, left: int, right: int) -> int:
        self.check_handle(left)
        self.check_handle(right)
        if self._end[left] != self._start[right]:
            raise InvalidHandleError(
                f"nodes {left} and {right} do not compose: {self._end[left]} != {self._start[right]}",
                "invalid_handle",
            )
        return self._intern(
            (NodeKind.CONCAT, left, right, -1),
            self._start[left],
            self._end[right],
            self._length[left] + self._length[right],
        )

    def check_handle(self, handle: int) -> None:
        if not 0 <= handle < len(self._nodes):
            raise InvalidHandleError(f"no DAG node {handle}", "invalid_handle", {"handle": handle})

    def node(self, handle: int) -> DagNode:
        self.check_handle(handle)
        return self._nodes[handle]

    def endpoints(self, handle: int) -> Tuple[int, int]:
        self.check_handle(handle)
        return self._start[handle], self._end[handle]

    def length(self, handle: int) -> int:
        self.check_handle(handle)
        return self._length[handle]

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    def root_for(self, a: int, u: int, v: int) -> int:
        handle = self.roots.get((a, u, v))
        if handle is None:
            raise NoWitnessError(f"no root for ({a}, {u}, {v})", "no_witness", {"entry": [a, u, v]})
        return handle


def _dependencies(key: Entry, witness) -> List[Entry]:
    a, u, v = key
    if isinstance(witness, Bin):
        return [(witness.b, u, witness.mid), (witness.c, witness.mid, v)]
    if isinstance(witness, LinL):
        return [(witness.b, witness.x, v)]
    if isinstance(witness, LinR):
        return [(witness.b, u, witness.x)]
    return []


def swd_wrap(relations: RelationSet, witnesses: WitnessTable) -> WitnessDag:
    """Give every true entry a root in one hash-consed DAG.

    Raises:
        MissingWitnessError: a true entry, or an entry a record refers to,
            has no record; or the records form a cycle
    """
    dag = WitnessDag()
    roots = dag.roots
    in_progress = set()

    for entry in relations.entries():
        if entry in roots:
            continue
        stack: List[Tuple[Entry, bool]] = [(entry, False)]
        while stack:
            key, expanded = stack.pop()
            if key in roots:
                continue
            witness = witnesses.get(*key)
            if witness is None:
                raise MissingWitnessError(
                    f"witness table has no record for {key}", "missing_witness", {"entry": list(key)}
                )
            if not expanded:
                if key in in_progress:
                    raise MissingWitnessError(
                        f"witness records for {key} are cyclic", "missing_witness", {"entry": list(key)}
                    )
                in_progress.add(key)
                stack.append((key, True))
                stack.extend((dep, False) for dep in _dependencies(key, witness) if dep not in roots)
                continue

            in_progress.discard(key)
            _, u, v = key
            if isinstance(witness, Term):
                handle = dag.edge(witness.u, witness.v, witness.label)
            elif isinstance(witness, Eps):
                handle = dag.eps(u)
            elif isinstance(witness, Bin):
                handle = dag.concat(roots[(witness.b, u, witness.mid)], roots[(witness.c, witness.mid, v)])
            elif isinstance(witness, LinL):
                handle = dag.concat(dag.edge(witness.u, witness.x, witness.label), roots[(witness.b, witness.x, v)])
            else:
                handle = dag.concat(roots[(witness.b, u, witness.x)], dag.edge(witness.x, witness.w, witness.label))
            roots[key] = handle

    logger.debug("witness dag: roots=%d nodes=%d", len(roots), dag.node_count)
    return dag


def expand_explicit(dag: WitnessDag, root: int) -> Path:
    """Walk the DAG below ``root``, emitting each output edge once"""
    start, _ = dag.endpoints(root)
    edges: List[Tuple[int, int, int]] = []
    stack = [root]
    while stack:
        kind, a, b, c = dag.node(stack.pop())
        if kind is NodeKind.EDGE:
            edges.append((a, b, c))
        elif kind is NodeKind.CONCAT:
            stack.append(b)
            stack.append(a)
    return Path(start=start, edges=tuple(edges))


class SlpRule(BaseModel):
    """X_i -> a, X_i -> ε, or X_i -> X_j X_k"""
    terminal: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None

    model_config = ConfigDict(frozen=True)

    @property
    def is_epsilon(self) -> bool:
        return self.terminal is None and self.left is None

    @property
    def is_pair(self) -> bool:
        return self.left is not None


class Slp(BaseModel):
    """Straight-line program; the last rule is the start symbol"""
    rules: Tuple[SlpRule, ...] = Field(min_length=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_straight_line(self) -> "Slp":
        for i, rule in enumerate(self.rules):
            if rule.is_pair:
                if rule.right is None or not (0 <= rule.left < i and 0 <= rule.right < i):
                    raise ValueError(f"rule X{i + 1} must reference two earlier rules")
        return self

    @property
    def start(self) -> int:
        return len(self.rules) - 1

    def expanded_length(self) -> int:
        lengths: List[int] = []
        for rule in self.rules:
            if rule.is_pair:
                lengths.append(lengths[rule.left] + lengths[rule.right])
            else:
                lengths.append(0 if rule.is_epsilon else 1)
        return lengths[-1]

    def expand(self, max_length: Optional[int] = None) -> List[int]:
        """Terminal sequence derived by the start rule"""
        total = self.expanded_length()
        if max_length is not None and total > max_length:
            raise SlpExpansionError(
                f"expansion has {total} symbols, bound is {max_length}",
                "slp_expansion",
                {"length": total, "bound": max_length},
            )
        out: List[int] = []
        stack = [self.start]
        while stack:
            rule = self.rules[stack.pop()]
            if rule.is_pair:
                stack.append(rule.right)
                stack.append(rule.left)
            elif rule.terminal is not None:
                out.append(rule.terminal)
        return out

    def to_text(self, label_names: Optional[Sequence[str]] = None) -> str:
        def name(label: int) -> str:
            return label_names[label] if label_names is not None else str(label)

        lines = []
        for i, rule in enumerate(self.rules, start=1):
            if rule.is_pair:
                body = f"X{rule.left + 1} X{rule.right + 1}"
            elif rule.terminal is not None:
                body = name(rule.terminal)
            else:
                body = "eps"
            lines.append(f"X{i} -> {body}")
        return "\n".join(lines) + "\n"


def emit_slp(dag: WitnessDag, root: int) -> Slp:
    """One rule per node reachable from ``root``, children before parents"""
    dag.check_handle(root)
    index: Dict[int, int] = {}
    rules: List[SlpRule] = []
    stack: List[Tuple[int, bool]] = [(root, False)]
    while stack:
        handle, expanded = stack.pop()
        if handle in index:
            continue
        kind, a, b, c = dag.node(handle)
        if kind is NodeKind.CONCAT and not expanded:
            stack.append((handle, True))
            stack.append((b, False))
            stack.append((a, False))
            continue
        if kind is NodeKind.EDGE:
            rule = SlpRule(terminal=c)
        elif kind is NodeKind.EPS:
            rule = SlpRule()
        else:
            rule = SlpRule(left=index[a], right=index[b])
        index[handle] = len(rules)
        rules.append(rule)
    return Slp(rules=tuple(rules))
