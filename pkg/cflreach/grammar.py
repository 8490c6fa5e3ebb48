"""
Context-free grammars: file format, classification and normal forms.

Grammars are immutable pydantic models with interned symbols. Terminal and
nonterminal ids live in separate dense ranges. Normal-form conversions
(``to_cnf``, ``to_talnf``) are pure functions that keep the terminal
interning of their input, so graphs parsed against one grammar stay valid
for its conversions.
"""

import logging
from collections import deque
from enum import Enum, Flag
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Final

from .exceptions import (
    DuplicateDeclarationError,
    GrammarSyntaxError,
    NotLinearError,
    UndeclaredStartError,
    UnknownSymbolError,
)
from .models import GrammarForm

logger = logging.getLogger(__name__)

EPSILON_TOKENS: Final = frozenset({"ε", "eps"})


class SymbolKind(str, Enum):
    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"


class Symbol(BaseModel):
    """A terminal or nonterminal, identified by its dense id"""
    kind: SymbolKind
    id: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)

    @property
    def is_terminal(self) -> bool:
        return self.kind is SymbolKind.TERMINAL

    @property
    def is_nonterminal(self) -> bool:
        return self.kind is SymbolKind.NONTERMINAL


def terminal(symbol_id: int) -> Symbol:
    return Symbol(kind=SymbolKind.TERMINAL, id=symbol_id)


def nonterminal(symbol_id: int) -> Symbol:
    return Symbol(kind=SymbolKind.NONTERMINAL, id=symbol_id)


class Production(BaseModel):
    """A rule ``lhs -> rhs``; an empty rhs is an ε-rule"""
    lhs: int = Field(ge=0)
    rhs: Tuple[Symbol, ...] = ()

    model_config = ConfigDict(frozen=True)

    @property
    def nonterminal_count(self) -> int:
        return sum(1 for sym in self.rhs if sym.is_nonterminal)


class FormFlag(Flag):
    NONE = 0
    CNF = 1
    LINEAR = 2
    TALNF = 4


class Grammar(BaseModel):
    """A context-free grammar (N, Σ, P, S)"""
    nonterminal_names: Tuple[str, ...]
    terminal_names: Tuple[str, ...] = ()
    productions: Tuple[Production, ...] = ()
    start: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_symbols(self) -> "Grammar":
        if self.start >= len(self.nonterminal_names):
            raise ValueError(f"start symbol id {self.start} is not a declared nonterminal")
        if len(set(self.nonterminal_names)) != len(self.nonterminal_names):
            raise ValueError("nonterminal names must be unique")
        if len(set(self.terminal_names)) != len(self.terminal_names):
            raise ValueError("terminal names must be unique")
        clash = set(self.nonterminal_names) & set(self.terminal_names)
        if clash:
            raise ValueError(f"names used as both terminal and nonterminal: {sorted(clash)}")
        for production in self.productions:
            if production.lhs >= len(self.nonterminal_names):
                raise ValueError(f"undeclared nonterminal id {production.lhs}")
            for sym in production.rhs:
                bound = len(self.terminal_names) if sym.is_terminal else len(self.nonterminal_names)
                if sym.id >= bound:
                    raise ValueError(f"undeclared {sym.kind.value} id {sym.id}")
        return self

    @property
    def num_nonterminals(self) -> int:
        return len(self.nonterminal_names)

    @property
    def num_terminals(self) -> int:
        return len(self.terminal_names)

    @property
    def start_name(self) -> str:
        return self.nonterminal_names[self.start]

    @property
    def size_measure(self) -> int:
        """Total right-hand-side length, counting an ε-rule as 1"""
        return sum(max(1, len(p.rhs)) for p in self.productions)

    @property
    def form(self) -> GrammarForm:
        return classify(self)

    @property
    def flags(self) -> FormFlag:
        return form_flags(self)

    def nonterminal_id(self, name: str) -> int:
        try:
            return self.nonterminal_names.index(name)
        except ValueError:
            raise UnknownSymbolError(f"unknown nonterminal {name!r}", "unknown_symbol", {"name": name}) from None

    def terminal_id(self, name: str) -> int:
        try:
            return self.terminal_names.index(name)
        except ValueError:
            raise UnknownSymbolError(f"unknown terminal {name!r}", "unknown_symbol", {"name": name}) from None

    def productions_of(self, lhs: int) -> List[Production]:
        return [p for p in self.productions if p.lhs == lhs]

    def has_start_epsilon(self) -> bool:
        return any(p.lhs == self.start and not p.rhs for p in self.productions)

    def with_start(self, start: Union[int, str]) -> "Grammar":
        """Same rules, different start symbol"""
        start_id = self.nonterminal_id(start) if isinstance(start, str) else start
        return Grammar(
            nonterminal_names=self.nonterminal_names,
            terminal_names=self.terminal_names,
            productions=self.productions,
            start=start_id,
        )

    def symbol_name(self, sym: Symbol) -> str:
        return self.terminal_names[sym.id] if sym.is_terminal else self.nonterminal_names[sym.id]


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def form_flags(g: Grammar) -> FormFlag:
    """Bitset of the normal-form predicates that every production satisfies"""
    cnf = linear = talnf = True
    for p in g.productions:
        rhs = p.rhs
        n_nt = p.nonterminal_count
        if n_nt > 1:
            linear = False
        if not rhs:
            if p.lhs != g.start:
                cnf = talnf = False
            continue
        if len(rhs) == 1:
            if not rhs[0].is_terminal:
                cnf = talnf = False
        elif len(rhs) == 2:
            if not (rhs[0].is_nonterminal and rhs[1].is_nonterminal):
                cnf = False
            if n_nt != 1:
                talnf = False
        else:
            cnf = talnf = False
    flags = FormFlag.NONE
    if cnf:
        flags |= FormFlag.CNF
    if linear:
        flags |= FormFlag.LINEAR
    if talnf:
        flags |= FormFlag.TALNF
    return flags


def classify(g: Grammar) -> GrammarForm:
    """Most specific form; precedence TALNF > CNF > Linear > General"""
    flags = form_flags(g)
    if FormFlag.TALNF in flags:
        return GrammarForm.TALNF
    if FormFlag.CNF in flags:
        return GrammarForm.CNF
    if FormFlag.LINEAR in flags:
        return GrammarForm.LINEAR
    return GrammarForm.GENERAL


def is_cnf(g: Grammar) -> bool:
    return FormFlag.CNF in form_flags(g)


def is_linear(g: Grammar) -> bool:
    return FormFlag.LINEAR in form_flags(g)


def is_talnf(g: Grammar) -> bool:
    return FormFlag.TALNF in form_flags(g)


# ---------------------------------------------------------------------------
# Grammar file format
# ---------------------------------------------------------------------------


class _RuleCollector:
    """Accumulates rules by name while parsing"""

    def __init__(self) -> None:
        self.lhs_order: List[str] = []
        self.rules: List[Tuple[str, Tuple[str, ...], int]] = []
        self.start: Optional[Tuple[str, int]] = None
        self.declared_terminals: List[str] = []
        self.declared_nonterminals: List[str] = []

    def add_rule(self, lhs: str, rhs: Tuple[str, ...], line: int) -> None:
        if lhs not in self.lhs_order:
            self.lhs_order.append(lhs)
        self.rules.append((lhs, rhs, line))


def _split_alternatives(body: str, line: int) -> List[Tuple[str, ...]]:
    alternatives: List[Tuple[str, ...]] = []
    for alt in body.split("|"):
        tokens = alt.split()
        if not tokens:
            raise GrammarSyntaxError("empty alternative (write ε for the empty string)", line)
        if "->" in tokens:
            raise GrammarSyntaxError("unexpected '->' in right-hand side", line)
        if len(tokens) == 1 and tokens[0] in EPSILON_TOKENS:
            alternatives.append(())
        elif any(tok in EPSILON_TOKENS for tok in tokens):
            raise GrammarSyntaxError("ε cannot be mixed with other symbols", line)
        else:
            alternatives.append(tuple(tokens))
    return alternatives


def _declare(names: List[str], new: Iterable[str], what: str, line: int) -> None:
    for name in new:
        if name in names:
            raise DuplicateDeclarationError(
                f"line {line}: {what} {name!r} declared twice", "duplicate_declaration", {"line": line}
            )
        names.append(name)


def parse_grammar(text: str) -> Grammar:
    """Parse the grammar file format into an interned Grammar"""

    collected = _RuleCollector()
    current_lhs: Optional[str] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        if line.startswith("@"):
            directive, *args = line.split()
            if directive == "@start":
                if len(args) != 1:
                    raise GrammarSyntaxError("@start takes exactly one symbol", line_no)
                if collected.start is not None:
                    raise DuplicateDeclarationError(
                        f"line {line_no}: @start declared twice", "duplicate_declaration", {"line": line_no}
                    )
                collected.start = (args[0], line_no)
            elif directive == "@terminals":
                _declare(collected.declared_terminals, args, "terminal", line_no)
            elif directive == "@nonterminals":
                _declare(collected.declared_nonterminals, args, "nonterminal", line_no)
            else:
                raise GrammarSyntaxError(f"unknown directive {directive}", line_no)
            continue

        if line.startswith("|"):
            if current_lhs is None:
                raise GrammarSyntaxError("alternative continuation without a preceding rule", line_no)
            lhs, body = current_lhs, line[1:]
        else:
            if "->" not in line:
                raise GrammarSyntaxError("expected 'LHS -> alternatives'", line_no)
            head, body = line.split("->", 1)
            head_tokens = head.split()
            if len(head_tokens) != 1:
                raise GrammarSyntaxError("left-hand side must be a single symbol", line_no)
            lhs = head_tokens[0]
        current_lhs = lhs
        for rhs in _split_alternatives(body, line_no):
            collected.add_rule(lhs, rhs, line_no)

    if not collected.rules and not collected.declared_nonterminals:
        raise GrammarSyntaxError("grammar contains no rules", 0)

    nonterminal_names = list(collected.lhs_order)
    for name in collected.declared_nonterminals:
        if name not in nonterminal_names:
            nonterminal_names.append(name)

    overlap = set(collected.declared_terminals) & set(nonterminal_names)
    if overlap:
        raise DuplicateDeclarationError(
            f"declared as both terminal and nonterminal: {sorted(overlap)}", "duplicate_declaration"
        )

    if collected.start is not None:
        start_name, start_line = collected.start
        if start_name not in nonterminal_names:
            raise UndeclaredStartError(
                f"line {start_line}: start symbol {start_name!r} has no rules",
                "undeclared_start",
                {"line": start_line},
            )
    else:
        start_name = nonterminal_names[0]

    nt_index = {name: i for i, name in enumerate(nonterminal_names)}
    terminal_names: List[str] = []
    t_index: Dict[str, int] = {}

    def intern_terminal(name: str) -> int:
        if name not in t_index:
            t_index[name] = len(terminal_names)
            terminal_names.append(name)
        return t_index[name]

    productions: List[Production] = []
    seen: Set[Production] = set()
    for lhs, rhs, _ in collected.rules:
        symbols = tuple(
            nonterminal(nt_index[tok]) if tok in nt_index else terminal(intern_terminal(tok)) for tok in rhs
        )
        production = Production(lhs=nt_index[lhs], rhs=symbols)
        if production not in seen:
            seen.add(production)
            productions.append(production)
    for name in collected.declared_terminals:
        intern_terminal(name)

    grammar = Grammar(
        nonterminal_names=tuple(nonterminal_names),
        terminal_names=tuple(terminal_names),
        productions=tuple(productions),
        start=nt_index[start_name],
    )
    logger.debug(
        "parsed grammar: |N|=%d |Σ|=%d |P|=%d form=%s",
        grammar.num_nonterminals, grammar.num_terminals, len(grammar.productions), grammar.form.value,
    )
    return grammar


def format_grammar(g: Grammar) -> str:
    """Render a grammar in the grammar file format"""
    lines = [f"@start {g.start_name}"]
    used_terminals = {sym.id for p in g.productions for sym in p.rhs if sym.is_terminal}
    unused = [name for i, name in enumerate(g.terminal_names) if i not in used_terminals]
    if unused:
        lines.append("@terminals " + " ".join(unused))
    ruleless = [name for i, name in enumerate(g.nonterminal_names) if not g.productions_of(i)]
    if ruleless:
        lines.append("@nonterminals " + " ".join(ruleless))
    by_lhs: Dict[int, List[str]] = {}
    for p in g.productions:
        alt = " ".join(g.symbol_name(sym) for sym in p.rhs) if p.rhs else "ε"
        by_lhs.setdefault(p.lhs, []).append(alt)
    for lhs in sorted(by_lhs):
        lines.append(f"{g.nonterminal_names[lhs]} -> " + " | ".join(by_lhs[lhs]))
    return "\n".join(lines) + "\n"


def canonical_productions(g: Grammar) -> FrozenSet[Tuple[str, Tuple[str, ...]]]:
    """Productions by name, for structural comparison of grammars"""
    return frozenset(
        (g.nonterminal_names[p.lhs], tuple(g.symbol_name(sym) for sym in p.rhs)) for p in g.productions
    )


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

Rule = Tuple[int, Tuple[Symbol, ...]]


class _Workspace:
    """Mutable rule list with fresh-name allocation, shared by the conversions"""

    def __init__(self, g: Grammar) -> None:
        self.names: List[str] = list(g.nonterminal_names)
        self.terminal_names = g.terminal_names
        self.taken: Set[str] = set(self.names) | set(g.terminal_names)
        self.rules: List[Rule] = [(p.lhs, p.rhs) for p in g.productions]
        self.start = g.start

    def fresh(self, base: str) -> int:
        name = base
        while name in self.taken:
            name += "'"
        self.taken.add(name)
        self.names.append(name)
        return len(self.names) - 1

    def start_on_rhs(self) -> bool:
        return any(sym.is_nonterminal and sym.id == self.start for _, rhs in self.rules for sym in rhs)

    def nullable(self) -> Set[int]:
        result: Set[int] = set()
        changed = True
        while changed:
            changed = False
            for lhs, rhs in self.rules:
                if lhs in result:
                    continue
                if all(sym.is_nonterminal and sym.id in result for sym in rhs):
                    result.add(lhs)
                    changed = True
        return result

    def eliminate_units(self) -> None:
        """Replace unit rules A -> B by copies of B's non-unit rules"""
        units: Dict[int, List[int]] = {}
        for lhs, rhs in self.rules:
            if len(rhs) == 1 and rhs[0].is_nonterminal:
                units.setdefault(lhs, []).append(rhs[0].id)
        non_unit: Dict[int, List[Tuple[Symbol, ...]]] = {}
        for lhs, rhs in self.rules:
            if rhs and not (len(rhs) == 1 and rhs[0].is_nonterminal):
                non_unit.setdefault(lhs, []).append(rhs)

        result: List[Rule] = []
        for lhs in range(len(self.names)):
            closure = [lhs]
            seen = {lhs}
            queue = deque([lhs])
            while queue:
                a = queue.popleft()
                for b in units.get(a, []):
                    if b not in seen:
                        seen.add(b)
                        closure.append(b)
                        queue.append(b)
            for b in closure:
                for rhs in non_unit.get(b, []):
                    result.append((lhs, rhs))
        if any(lhs == self.start and not rhs for lhs, rhs in self.rules):
            result.append((self.start, ()))
        self.rules = result

    def build(self) -> Grammar:
        productions: List[Production] = []
        seen: Set[Production] = set()
        for lhs, rhs in self.rules:
            production = Production(lhs=lhs, rhs=rhs)
            if production not in seen:
                seen.add(production)
                productions.append(production)
        return Grammar(
            nonterminal_names=tuple(self.names),
            terminal_names=self.terminal_names,
            productions=tuple(productions),
            start=self.start,
        )


def to_cnf(g: Grammar) -> Grammar:
    """Convert any CFG to Chomsky normal form (TERM, BIN, DEL, UNIT)"""
    ws = _Workspace(g)

    if ws.start_on_rhs() and ws.start in ws.nullable():
        old = ws.start
        ws.start = ws.fresh(f"{ws.names[old]}#start")
        ws.rules.append((ws.start, (nonterminal(old),)))

    # TERM: isolate terminals inside long right-hand sides
    term_nt: Dict[int, int] = {}
    isolated: List[Rule] = []
    for lhs, rhs in ws.rules:
        if len(rhs) >= 2:
            replaced = []
            for sym in rhs:
                if sym.is_terminal:
                    if sym.id not in term_nt:
                        term_nt[sym.id] = ws.fresh(f"{ws.terminal_names[sym.id]}#term")
                    replaced.append(nonterminal(term_nt[sym.id]))
                else:
                    replaced.append(sym)
            rhs = tuple(replaced)
        isolated.append((lhs, rhs))
    for t_id, nt_id in term_nt.items():
        isolated.append((nt_id, (terminal(t_id),)))
    ws.rules = isolated

    # BIN: split right-hand sides longer than two
    binary: List[Rule] = []
    for index, (lhs, rhs) in enumerate(ws.rules):
        if len(rhs) <= 2:
            binary.append((lhs, rhs))
            continue
        prev = lhs
        for position in range(1, len(rhs) - 1):
            nxt = ws.fresh(f"{ws.names[lhs]}#{index}#{position}")
            binary.append((prev, (rhs[position - 1], nonterminal(nxt))))
            prev = nxt
        binary.append((prev, (rhs[-2], rhs[-1])))
    ws.rules = binary

    # DEL: remove ε-rules, keeping start -> ε when the language needs it
    nullable = ws.nullable()
    without_eps: List[Rule] = []
    for lhs, rhs in ws.rules:
        if not rhs:
            continue
        without_eps.append((lhs, rhs))
        if len(rhs) == 2:
            a, b = rhs
            if a.is_nonterminal and a.id in nullable:
                without_eps.append((lhs, (b,)))
            if b.is_nonterminal and b.id in nullable:
                without_eps.append((lhs, (a,)))
    if ws.start in nullable:
        without_eps.append((ws.start, ()))
    ws.rules = without_eps

    # UNIT
    ws.eliminate_units()
    result = ws.build()
    logger.debug("to_cnf: |P| %d -> %d", len(g.productions), len(result.productions))
    return result


def _check_linear(g: Grammar) -> None:
    for p in g.productions:
        if p.nonterminal_count > 1:
            rendered = " ".join(g.symbol_name(s) for s in p.rhs)
            raise NotLinearError(
                f"production {g.nonterminal_names[p.lhs]} -> {rendered} has {p.nonterminal_count} nonterminals",
                "not_linear",
                {"lhs": g.nonterminal_names[p.lhs], "rhs": rendered},
            )


def talnf_size_bound(g: Grammar) -> int:
    """Upper bound checked against |P(to_talnf(g))|"""
    return 2 * (g.num_nonterminals + 1) * g.size_measure


def to_talnf(g: Grammar) -> Grammar:
    """Convert a linear grammar to terminal-anchored linear normal form.

    Steps: drop ε-rules (keeping the language through A -> xy copies),
    close unit rules, then turn every ``A -> x B y`` into prefix chains of
    ``A -> aB`` rules and suffix chains of ``A -> Ba`` rules. Fresh
    nonterminals are named ``<lhs>#<ruleIndex>#<position>``.

    Raises:
        NotLinearError: a production has two or more nonterminals
    """
    _check_linear(g)
    ws = _Workspace(g)

    nullable = ws.nullable()
    start_eps = ws.start in nullable
    without_eps: List[Rule] = []
    for lhs, rhs in ws.rules:
        if not rhs:
            continue
        without_eps.append((lhs, rhs))
        for i, sym in enumerate(rhs):
            if sym.is_nonterminal and sym.id in nullable:
                shorter = rhs[:i] + rhs[i + 1:]
                if shorter:
                    without_eps.append((lhs, shorter))
    ws.rules = without_eps
    ws.eliminate_units()

    anchored: List[Rule] = []
    for index, (lhs, rhs) in enumerate(ws.rules):
        anchored.extend(_anchor_rule(ws, index, lhs, rhs))
    ws.rules = anchored

    if start_eps:
        if ws.start_on_rhs():
            old = ws.start
            ws.start = ws.fresh(f"{ws.names[old]}#start")
            ws.rules.extend([(ws.start, rhs) for lhs, rhs in anchored if lhs == old])
        ws.rules.append((ws.start, ()))

    result = ws.build()
    logger.debug(
        "to_talnf: size %d -> |P|=%d (bound %d)", g.size_measure, len(result.productions), talnf_size_bound(g)
    )
    return result


def _anchor_rule(ws: _Workspace, index: int, lhs: int, rhs: Tuple[Symbol, ...]) -> List[Rule]:
    positions = [i for i, sym in enumerate(rhs) if sym.is_nonterminal]
    lhs_name = ws.names[lhs]

    def chain(prefix: Sequence[Symbol], target: Optional[Symbol]) -> List[Rule]:
        # A -> a1 A1, A1 -> a2 A2, ..., ending in a_p target (or a_p alone)
        out: List[Rule] = []
        current = lhs
        for i, a in enumerate(prefix):
            last = i == len(prefix) - 1
            if last:
                out.append((current, (a, target) if target is not None else (a,)))
            else:
                nxt = ws.fresh(f"{lhs_name}#{index}#{i + 1}")
                out.append((current, (a, nonterminal(nxt))))
                current = nxt
        return out

    if not positions:
        return chain(rhs, None)

    b_pos = positions[0]
    prefix, b, suffix = rhs[:b_pos], rhs[b_pos], rhs[b_pos + 1:]
    p, q = len(prefix), len(suffix)
    if q == 0:
        return chain(prefix, b)

    out: List[Rule] = []
    suffix_len = q if p >= 1 else q - 1
    current = b
    for i in range(suffix_len):
        nxt = ws.fresh(f"{lhs_name}#{index}#{p + 1 + i}")
        out.append((nxt, (current, suffix[i])))
        current = nonterminal(nxt)
    if p >= 1:
        out.extend(chain(prefix, current))
    else:
        out.append((lhs, (current, suffix[-1])))
    return out


# ---------------------------------------------------------------------------
# Recognition
# ---------------------------------------------------------------------------


def _is_binary_shaped(g: Grammar) -> bool:
    for p in g.productions:
        if len(p.rhs) > 2:
            return False
        if len(p.rhs) == 2 and not (p.rhs[0].is_nonterminal and p.rhs[1].is_nonterminal):
            return False
    return True


def recognize(g: Grammar, word: Sequence[Union[int, str]]) -> bool:
    """CYK membership test of ``word`` in L(start).

    Grammars outside the A -> BC | A -> B | A -> a | A -> ε shape are
    converted with ``to_cnf`` first. ε-rules on any nonterminal are
    tolerated, so sub-grammars obtained with ``with_start`` work too.
    """
    if not _is_binary_shaped(g):
        g = to_cnf(g)

    ids: List[int] = []
    for token in word:
        if isinstance(token, str):
            if token not in g.terminal_names:
                return False
            ids.append(g.terminal_names.index(token))
        else:
            ids.append(token)

    term_rules: Dict[int, int] = {}
    unit_rules: List[Tuple[int, int]] = []
    binary_rules: List[Tuple[int, int, int]] = []
    eps_mask = 0
    for p in g.productions:
        if not p.rhs:
            eps_mask |= 1 << p.lhs
        elif len(p.rhs) == 1 and p.rhs[0].is_terminal:
            term_rules[p.rhs[0].id] = term_rules.get(p.rhs[0].id, 0) | (1 << p.lhs)
        elif len(p.rhs) == 1:
            unit_rules.append((p.lhs, p.rhs[0].id))
        else:
            binary_rules.append((p.lhs, p.rhs[0].id, p.rhs[1].id))

    def close(mask: int, left_of: Sequence[Optional[int]], right_of: Sequence[Optional[int]]) -> int:
        # left_of[k]/right_of[k] are the masks of the spans split at k,
        # with the span itself standing in for the empty side
        changed = True
        while changed:
            changed = False
            for a, b in unit_rules:
                if mask >> b & 1 and not mask >> a & 1:
                    mask |= 1 << a
                    changed = True
            for a, b, c in binary_rules:
                if mask >> a & 1:
                    continue
                for lm, rm in zip(left_of, right_of):
                    lm = mask if lm is None else lm
                    rm = mask if rm is None else rm
                    if lm >> b & 1 and rm >> c & 1:
                        mask |= 1 << a
                        changed = True
                        break
        return mask

    n = len(ids)
    nullable = close(eps_mask, [None], [None])
    table: Dict[Tuple[int, int], int] = {(i, i): nullable for i in range(n + 1)}
    for length in range(1, n + 1):
        for i in range(n - length + 1):
            j = i + length
            mask = term_rules.get(ids[i], 0) if length == 1 else 0
            left_of: List[Optional[int]] = [nullable]
            right_of: List[Optional[int]] = [None]
            for k in range(i + 1, j):
                left_of.append(table[(i, k)])
                right_of.append(table[(k, j)])
            left_of.append(None)
            right_of.append(nullable)
            table[(i, j)] = close(mask, left_of, right_of)
    return bool(table[(0, n)] >> g.start & 1)
