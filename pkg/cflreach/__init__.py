"""
cflreach

Context-free language reachability indices over edge-labelled graphs:
cubic saturation for CNF grammars, subcubic propagation for linear
grammars, shared witness DAGs with straight-line program output, shortest
accepted paths, and a JSON schema linearity census.
"""

import logging

__version__ = "1.0.0"

from .engine import IndexEngine
from .exceptions import *
from .grammar import (
    Grammar,
    Production,
    Symbol,
    classify,
    format_grammar,
    is_cnf,
    is_linear,
    is_talnf,
    parse_grammar,
    recognize,
    to_cnf,
    to_talnf,
)
from .graph import LabeledGraph, Path, parse_graph, serialize_graph
from .lin_dist_index import INF, DistanceTable, lindist_build, shortest_accepted_path
from .lin_index import lin_build
from .models import *
from .oracle import enumerate_accepted, naive_fixpoint
from .relations import ReachabilityIndex, RelationSet, extract_path, query
from .sat_index import sat_build
from .schema_census import classify_schema, run_census, schema_to_cfg
from .store import load_index, save_index
from .swd_index import Slp, WitnessDag, emit_slp, expand_explicit, swd_wrap

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "IndexEngine",
    # Grammars and graphs
    "Grammar",
    "Production",
    "Symbol",
    "parse_grammar",
    "format_grammar",
    "classify",
    "is_cnf",
    "is_linear",
    "is_talnf",
    "to_cnf",
    "to_talnf",
    "recognize",
    "LabeledGraph",
    "Path",
    "parse_graph",
    "serialize_graph",
    # Indices
    "ReachabilityIndex",
    "RelationSet",
    "DistanceTable",
    "INF",
    "sat_build",
    "lin_build",
    "lindist_build",
    "query",
    "extract_path",
    "shortest_accepted_path",
    "WitnessDag",
    "Slp",
    "swd_wrap",
    "expand_explicit",
    "emit_slp",
    "save_index",
    "load_index",
    "naive_fixpoint",
    "enumerate_accepted",
    # Census
    "schema_to_cfg",
    "classify_schema",
    "run_census",
    # Models
    "GrammarForm",
    "IndexKind",
    "WitnessFormat",
    "BuildStats",
    "CensusRow",
    "CensusReport",
    "FetchSettings",
    # Exceptions
    "CflReachError",
    "GrammarSyntaxError",
    "UndeclaredStartError",
    "DuplicateDeclarationError",
    "NotLinearError",
    "GrammarNotCNFError",
    "GrammarNotTALNFError",
    "UnsupportedFormError",
    "GraphFormatError",
    "UnknownLabelError",
    "UnknownSymbolError",
    "VertexRangeError",
    "NoWitnessError",
    "MissingWitnessError",
    "InvalidHandleError",
    "SlpExpansionError",
    "BudgetExceededError",
    "SchemaConversionError",
    "IndexFormatError",
    "IndexKindError",
    "NetworkError",
    "TimeoutError",
    "ConfigurationError",
]
