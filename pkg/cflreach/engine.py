"""
cflreach engine: the facade binding parsers, index builders, witnesses,
storage and the schema census
"""

import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from .exceptions import ConfigurationError, IndexKindError
from .grammar import Grammar, classify, is_cnf, is_talnf, parse_grammar, to_cnf, to_talnf
from .graph import DEFAULT_MAX_VERTICES, LabeledGraph, Path as GraphPath, parse_graph, parse_query_pairs
from .lin_dist_index import INF, DistanceTable, lindist_build
from .lin_index import lin_build
from .models import CensusReport, FetchSettings, GrammarForm, IndexKind, WitnessFormat
from .oracle import enumerate_accepted, naive_fixpoint
from .relations import ReachabilityIndex, RelationSet
from .sat_index import sat_build
from .schema_census import fetch_corpus, run_census, write_census
from .store import load_index, save_index
from .swd_index import Slp, emit_slp, swd_wrap

logger = logging.getLogger(__name__)

PACKAGE_LOGGER = "cflreach"
DEFAULT_INDEX_NAME = "index.json"
TRUTHY = frozenset({"1", "true", "yes", "on"})

Nonterminal = Union[int, str, None]


def enable_debug_logging() -> None:
    """Send package DEBUG records to stderr; attaches the handler once"""
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    package_logger.setLevel(logging.DEBUG)
    if not any(getattr(h, "_cflreach_debug", False) for h in package_logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
        handler._cflreach_debug = True  # type: ignore[attr-defined]
        package_logger.addHandler(handler)


class IndexEngine:
    """
    cflreach engine

    Loads grammars and graphs, builds the three reachability indices,
    answers queries and witness requests, and runs the schema census.
    """

    CONFIG_KEYS = ("output_dir", "normalize", "workers", "max_vertices", "debug")

    def __init__(
        self,
        output_dir: Optional[Union[str, Path]] = None,
        normalize: bool = True,
        workers: int = 1,
        max_vertices: int = DEFAULT_MAX_VERTICES,
        debug: bool = False,
    ):
        """
        Initialize the engine

        Args:
            output_dir: Default directory for index files and census reports
            normalize: Convert grammars to the normal form an index needs (default: True)
            workers: Worker processes for the census (default: 1)
            max_vertices: Largest vertex count accepted when parsing graphs
            debug: Enable debug logging (default: False)

        Raises:
            ConfigurationError: If a setting is invalid
        """
        self._output_dir: Optional[Path] = None
        self._normalize = True
        self._workers = 1
        self._max_vertices = DEFAULT_MAX_VERTICES
        self._debug = False
        self.update_config(
            output_dir=output_dir, normalize=normalize, workers=workers, max_vertices=max_vertices, debug=debug
        )

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None, **overrides: Any) -> "IndexEngine":
        """Build an engine from CFLREACH_OUTPUT_DIR, CFLREACH_DEBUG and CFLREACH_WORKERS"""
        env = os.environ if environ is None else environ
        settings: Dict[str, Any] = {}
        if env.get("CFLREACH_OUTPUT_DIR"):
            settings["output_dir"] = env["CFLREACH_OUTPUT_DIR"]
        if "CFLREACH_DEBUG" in env:
            settings["debug"] = env["CFLREACH_DEBUG"].strip().lower() in TRUTHY
        if env.get("CFLREACH_WORKERS"):
            try:
                settings["workers"] = int(env["CFLREACH_WORKERS"])
            except ValueError:
                raise ConfigurationError(
                    f"CFLREACH_WORKERS must be an integer, got {env['CFLREACH_WORKERS']!r}"
                ) from None
        settings.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**settings)

    def get_config(self) -> Dict[str, Any]:
        """Get current engine configuration"""
        return {
            "output_dir": str(self._output_dir) if self._output_dir is not None else None,
            "normalize": self._normalize,
            "workers": self._workers,
            "max_vertices": self._max_vertices,
            "debug": self._debug,
        }

    def update_config(self, **kwargs: Any) -> None:
        """Update engine configuration

        Raises:
            ConfigurationError: On unknown keys or invalid values
        """
        unknown = sorted(set(kwargs) - set(self.CONFIG_KEYS))
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {', '.join(unknown)}")

        if "output_dir" in kwargs:
            output_dir = kwargs["output_dir"]
            if output_dir is not None:
                output_dir = Path(output_dir)
                if output_dir.exists() and not output_dir.is_dir():
                    raise ConfigurationError(f"output_dir {output_dir} is not a directory")
            self._output_dir = output_dir
        if "normalize" in kwargs:
            self._normalize = bool(kwargs["normalize"])
        if "workers" in kwargs:
            workers = kwargs["workers"]
            if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
                raise ConfigurationError(f"workers must be a positive integer, got {workers!r}")
            self._workers = workers
        if "max_vertices" in kwargs:
            max_vertices = kwargs["max_vertices"]
            if not isinstance(max_vertices, int) or isinstance(max_vertices, bool) or max_vertices < 1:
                raise ConfigurationError(f"max_vertices must be a positive integer, got {max_vertices!r}")
            self._max_vertices = max_vertices
        if "debug" in kwargs:
            self._debug = bool(kwargs["debug"])
            if self._debug:
                enable_debug_logging()

    @property
    def output_dir(self) -> Optional[Path]:
        return self._output_dir

    # Inputs

    def load_grammar(self, path: Union[str, Path]) -> Grammar:
        grammar = parse_grammar(Path(path).read_text(encoding="utf-8"))
        logger.debug("loaded grammar %s: form=%s productions=%d", path, grammar.form.value, len(grammar.productions))
        return grammar

    def load_graph(self, path: Union[str, Path], grammar: Grammar) -> LabeledGraph:
        graph = parse_graph(Path(path).read_text(encoding="utf-8"), grammar, self._max_vertices)
        logger.debug("loaded graph %s: n=%d m=%d", path, graph.n, graph.m)
        return graph

    def load_pairs(self, path: Union[str, Path], graph: LabeledGraph) -> List[Tuple[int, int]]:
        return parse_query_pairs(Path(path).read_text(encoding="utf-8"), graph)

    # Building

    def prepare(self, grammar: Grammar, kind: IndexKind) -> Grammar:
        """The grammar an index of ``kind`` is built from"""
        if not self._normalize:
            return grammar
        if kind is IndexKind.SAT:
            if is_cnf(grammar):
                return grammar
            logger.debug("normalizing %s grammar to CNF", grammar.form.value)
            return to_cnf(grammar)
        if is_talnf(grammar):
            return grammar
        logger.debug("normalizing %s grammar to TALNF", grammar.form.value)
        return to_talnf(grammar)

    def build(self, grammar: Grammar, graph: LabeledGraph, kind: Union[IndexKind, str]) -> ReachabilityIndex:
        """Build an index of ``kind``

        Raises:
            GrammarNotCNFError / GrammarNotTALNFError: normalize is off and the checker fails
            NotLinearError: a lin or lindist build over a non-linear grammar
        """
        kind = IndexKind(kind)
        prepared = self.prepare(grammar, kind)
        if kind is IndexKind.SAT:
            index = sat_build(prepared, graph)
        elif kind is IndexKind.LIN:
            index = lin_build(prepared, graph)
        else:
            index = lindist_build(prepared, graph)
        logger.debug("built %s index: true_entries=%d", kind.value, index.stats.true_entries)
        return index

    # Queries

    def query(
        self, index: ReachabilityIndex, s: Union[int, str], t: Union[int, str], nonterminal: Nonterminal = None
    ) -> bool:
        return index.query(index.graph.vertex_id(s), index.graph.vertex_id(t), nonterminal)

    def query_pairs(
        self, index: ReachabilityIndex, pairs: List[Tuple[int, int]], nonterminal: Nonterminal = None
    ) -> List[Tuple[int, int, bool]]:
        return [(s, t, index.query(s, t, nonterminal)) for s, t in pairs]

    def witness(
        self,
        index: ReachabilityIndex,
        s: Union[int, str],
        t: Union[int, str],
        fmt: Union[WitnessFormat, str] = WitnessFormat.EXPLICIT,
        nonterminal: Nonterminal = None,
    ) -> Union[GraphPath, Slp]:
        """A witness path for (A, s, t), explicit or as a straight-line program

        Raises:
            NoWitnessError: the entry is false
        """
        fmt = WitnessFormat(fmt)
        su, tv = index.graph.vertex_id(s), index.graph.vertex_id(t)
        path = index.witness(su, tv, nonterminal)
        if fmt is WitnessFormat.EXPLICIT:
            return path
        dag = swd_wrap(index.relations, index.witnesses)
        return emit_slp(dag, dag.root_for(index.nonterminal(nonterminal), su, tv))

    def shortest(
        self, index: ReachabilityIndex, s: Union[int, str], t: Union[int, str], nonterminal: Nonterminal = None
    ) -> Tuple[int, Optional[GraphPath]]:
        """(distance, path); distance is INF and path None when nothing is accepted

        Raises:
            IndexKindError: ``index`` carries no distances
        """
        if not isinstance(index, DistanceTable):
            raise IndexKindError(
                f"shortest needs a lindist index, got {index.kind.value}",
                "index_kind",
                {"kind": index.kind.value},
            )
        su, tv = index.graph.vertex_id(s), index.graph.vertex_id(t)
        a = index.nonterminal(nonterminal)
        distance = index.distance(a, su, tv)
        if distance == INF:
            return INF, None
        return distance, index.shortest_accepted_path(su, tv, a)

    def classify(self, grammar: Grammar) -> GrammarForm:
        return classify(grammar)

    def normal_form(self, grammar: Grammar) -> Grammar:
        """The grammar converted to the normal form of its reported class"""
        form = classify(grammar)
        if form in (GrammarForm.TALNF, GrammarForm.CNF):
            return grammar
        if form is GrammarForm.LINEAR:
            return to_talnf(grammar)
        return to_cnf(grammar)

    # Census

    def census(
        self,
        corpus_dir: Union[str, Path],
        manifest: Optional[Union[str, Path]] = None,
        out_dir: Optional[Union[str, Path]] = None,
    ) -> CensusReport:
        report = run_census(Path(corpus_dir), Path(manifest) if manifest else None, self._workers)
        target = Path(out_dir) if out_dir is not None else self._output_dir
        if target is not None:
            write_census(report, target)
        return report

    def fetch(self, dest: Union[str, Path], settings: Optional[FetchSettings] = None) -> int:
        return fetch_corpus(Path(dest), settings)

    # Reference checks

    def oracle(self, grammar: Grammar, graph: LabeledGraph) -> Tuple[Grammar, RelationSet]:
        """Naive fixpoint relations over the grammar in CNF (unless already CNF)"""
        target = grammar if is_cnf(grammar) else to_cnf(grammar)
        return target, naive_fixpoint(target, graph)

    def oracle_walks(
        self, grammar: Grammar, graph: LabeledGraph, s: Union[int, str], t: Union[int, str], max_len: int = 8
    ) -> List[Tuple[int, GraphPath]]:
        return enumerate_accepted(grammar, graph, graph.vertex_id(s), graph.vertex_id(t), max_len)

    # Storage

    def index_path(self, path: Optional[Union[str, Path]] = None) -> Path:
        if path is not None:
            return Path(path)
        if self._output_dir is None:
            raise ConfigurationError("no index path given and CFLREACH_OUTPUT_DIR is not set")
        return self._output_dir / DEFAULT_INDEX_NAME

    def save(self, index: ReachabilityIndex, path: Optional[Union[str, Path]] = None) -> Path:
        return save_index(index, self.index_path(path))

    def load(self, path: Union[str, Path]) -> ReachabilityIndex:
        return load_index(Path(path))
