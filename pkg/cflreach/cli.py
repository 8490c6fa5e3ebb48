"""
Command line front end: ``cflreach <command> ...``
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from . import __version__
from .engine import IndexEngine
from .exceptions import EXIT_OK, CflReachError, exit_code_for
from .grammar import Grammar, format_grammar
from .graph import LabeledGraph, Path as GraphPath
from .lin_dist_index import INF
from .models import IndexKind, WitnessFormat
from .oracle import MAX_WALK_LENGTH
from .schema_census import format_aggregate
from .swd_index import Slp
from .utils import format_key_values

logger = logging.getLogger(__name__)


def _write_path(out: TextIO, path: GraphPath, graph: LabeledGraph) -> None:
    out.write(f"# path from {graph.vertex_name(path.start)} to {graph.vertex_name(path.end)}, length {len(path)}\n")
    for u, v, label in path.edges:
        out.write(f"{graph.vertex_name(u)} {graph.vertex_name(v)} {graph.label_name(label)}\n")


def _cmd_build(engine: IndexEngine, args: argparse.Namespace) -> int:
    grammar = engine.load_grammar(args.grammar)
    graph = engine.load_graph(args.edges, grammar)
    index = engine.build(grammar, graph, args.index)
    path = engine.save(index, args.output)
    sys.stderr.write(format_key_values(index.stats.as_key_values()) + "\n")
    print(path)
    return EXIT_OK


def _cmd_query(engine: IndexEngine, args: argparse.Namespace) -> int:
    index = engine.load(args.index)
    if args.pairs:
        for s, t, answer in engine.query_pairs(index, engine.load_pairs(args.pairs, index.graph), args.nonterminal):
            print(f"{index.graph.vertex_name(s)} {index.graph.vertex_name(t)} {str(answer).lower()}")
        return EXIT_OK
    if args.s is None or args.t is None:
        raise _UsageError("query needs 's t' or --pairs FILE")
    print(str(engine.query(index, args.s, args.t, args.nonterminal)).lower())
    return EXIT_OK


def _cmd_witness(engine: IndexEngine, args: argparse.Namespace) -> int:
    index = engine.load(args.index)
    witness = engine.witness(index, args.s, args.t, args.format, args.nonterminal)
    if isinstance(witness, Slp):
        sys.stdout.write(witness.to_text(index.graph.label_names or index.grammar.terminal_names))
    else:
        _write_path(sys.stdout, witness, index.graph)
    return EXIT_OK


def _cmd_shortest(engine: IndexEngine, args: argparse.Namespace) -> int:
    index = engine.load(args.index)
    distance, path = engine.shortest(index, args.s, args.t, args.nonterminal)
    if distance == INF or path is None:
        print("dist=inf")
        return EXIT_OK
    print(f"dist={distance}")
    _write_path(sys.stdout, path, index.graph)
    return EXIT_OK


def _cmd_classify(engine: IndexEngine, args: argparse.Namespace) -> int:
    grammar = engine.load_grammar(args.grammar)
    print(engine.classify(grammar).value)
    if args.show:
        sys.stdout.write(format_grammar(engine.normal_form(grammar)))
    return EXIT_OK


def _cmd_census(engine: IndexEngine, args: argparse.Namespace) -> int:
    if args.fetch:
        count = engine.fetch(args.corpus)
        logger.info("downloaded %d schemas", count)
    out_dir = args.out if args.out is not None else engine.output_dir or Path("census")
    report = engine.census(args.corpus, args.splits, out_dir)
    sys.stdout.write(format_aggregate(report))
    return EXIT_OK


def _print_relations(grammar: Grammar, graph: LabeledGraph, relations) -> None:
    for a, name in enumerate(grammar.nonterminal_names):
        for u, v in relations.pairs(a):
            print(f"{name} {graph.vertex_name(u)} {graph.vertex_name(v)}")


def _cmd_oracle(engine: IndexEngine, args: argparse.Namespace) -> int:
    grammar = engine.load_grammar(args.grammar)
    graph = engine.load_graph(args.edges, grammar)
    if args.s is None:
        target, relations = engine.oracle(grammar, graph)
        _print_relations(target, graph, relations)
        return EXIT_OK
    if args.t is None:
        raise _UsageError("oracle needs both s and t")
    for length, path in engine.oracle_walks(grammar, graph, args.s, args.t, args.max_len):
        labels = " ".join(graph.label_name(label) for _, _, label in path.edges) or "eps"
        print(f"{length}: {labels}")
    return EXIT_OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cflreach", description="Context-free language reachability indices over labelled graphs"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--debug", action="store_true", help="log debug output to stderr")
    parser.add_argument("--seed", type=int, default=None, help="reserved; currently unused")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    build = commands.add_parser("build", help="build and save an index")
    build.add_argument("-g", "--grammar", required=True, type=Path)
    build.add_argument("-e", "--edges", required=True, type=Path)
    build.add_argument("--index", required=True, choices=[k.value for k in IndexKind])
    build.add_argument("-o", "--output", type=Path, default=None)
    build.add_argument("--no-normalize", action="store_true", help="require the grammar in the index's normal form")
    build.set_defaults(handler=_cmd_build)

    query = commands.add_parser("query", help="is t reachable from s under the grammar")
    query.add_argument("index", type=Path)
    query.add_argument("s", nargs="?")
    query.add_argument("t", nargs="?")
    query.add_argument("--nonterminal", default=None)
    query.add_argument("--pairs", type=Path, default=None, help="file of 's t' lines")
    query.set_defaults(handler=_cmd_query)

    witness = commands.add_parser("witness", help="print a path whose trace the grammar accepts")
    witness.add_argument("index", type=Path)
    witness.add_argument("s")
    witness.add_argument("t")
    witness.add_argument("--format", choices=[f.value for f in WitnessFormat], default=WitnessFormat.EXPLICIT.value)
    witness.add_argument("--nonterminal", default=None)
    witness.set_defaults(handler=_cmd_witness)

    shortest = commands.add_parser("shortest", help="shortest accepted path (lindist index)")
    shortest.add_argument("index", type=Path)
    shortest.add_argument("s")
    shortest.add_argument("t")
    shortest.add_argument("--nonterminal", default=None)
    shortest.set_defaults(handler=_cmd_shortest)

    classify = commands.add_parser("classify", help="report the grammar form")
    classify.add_argument("-g", "--grammar", required=True, type=Path)
    classify.add_argument("--show", action="store_true", help="print the grammar in its normal form")
    classify.set_defaults(handler=_cmd_classify)

    census = commands.add_parser("census", help="classify a corpus of JSON schemas")
    census.add_argument("corpus", type=Path)
    census.add_argument("--splits", type=Path, default=None, help="manifest mapping files to splits")
    census.add_argument("--out", type=Path, default=None)
    census.add_argument("--workers", type=int, default=None)
    census.add_argument("--fetch", action="store_true", help="download the benchmark corpus first")
    census.set_defaults(handler=_cmd_census)

    oracle = commands.add_parser("oracle")
    oracle.add_argument("-g", "--grammar", required=True, type=Path)
    oracle.add_argument("-e", "--edges", required=True, type=Path)
    oracle.add_argument("s", nargs="?")
    oracle.add_argument("t", nargs="?")
    oracle.add_argument("--max-len", type=int, default=8, choices=range(0, MAX_WALK_LENGTH + 1), metavar="K")
    oracle.set_defaults(handler=_cmd_oracle)
    # hidden from the command list
    commands._choices_actions = [a for a in commands._choices_actions if a.dest != "oracle"]

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        overrides = {"debug": True if args.debug else None}
        if getattr(args, "no_normalize", False):
            overrides["normalize"] = False
        if getattr(args, "workers", None) is not None:
            overrides["workers"] = args.workers
        engine = IndexEngine.from_env(**overrides)
        return args.handler(engine, args)
    except _UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"cflreach: error: {e}\n")
        return exit_code_for(e)
    except (CflReachError, OSError) as e:
        sys.stderr.write(f"cflreach: error: {e}\n")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
