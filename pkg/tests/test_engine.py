"""
Tests for the IndexEngine facade
"""

import logging
from pathlib import Path

import pytest

from cflreach import IndexEngine
from cflreach.engine import DEFAULT_INDEX_NAME, enable_debug_logging
from cflreach.exceptions import (
    ConfigurationError,
    GrammarNotCNFError,
    GrammarNotTALNFError,
    IndexKindError,
    NoWitnessError,
)
from cflreach.grammar import is_cnf, is_talnf, parse_grammar
from cflreach.graph import Path as GraphPath
from cflreach.lin_dist_index import INF
from cflreach.models import GrammarForm, IndexKind
from cflreach.swd_index import Slp

from .conftest import ANBN, FOUR_CYCLE

CENSUS_CORPUS = Path(__file__).parent / "fixtures" / "census_mini"


@pytest.fixture
def engine():
    return IndexEngine()


@pytest.fixture
def files(tmp_path):
    grammar = tmp_path / "anbn.cfg"
    grammar.write_text(ANBN)
    edges = tmp_path / "cycle.edges"
    edges.write_text(FOUR_CYCLE)
    return grammar, edges


class TestConfiguration:
    """Test engine configuration"""

    def test_defaults(self, engine):
        config = engine.get_config()
        assert config["output_dir"] is None
        assert config["normalize"] is True
        assert config["workers"] == 1
        assert config["debug"] is False

    def test_update_config(self, engine, tmp_path):
        engine.update_config(output_dir=tmp_path, workers=3)
        assert engine.get_config()["output_dir"] == str(tmp_path)
        assert engine.get_config()["workers"] == 3
        assert engine.output_dir == tmp_path

    def test_unknown_key(self, engine):
        with pytest.raises(ConfigurationError, match="timeout"):
            engine.update_config(timeout=5)

    @pytest.mark.parametrize("workers", [0, -1, True, "2"])
    def test_invalid_workers(self, workers):
        with pytest.raises(ConfigurationError):
            IndexEngine(workers=workers)

    def test_invalid_max_vertices(self):
        with pytest.raises(ConfigurationError):
            IndexEngine(max_vertices=0)

    def test_output_dir_must_be_directory(self, tmp_path):
        file_path = tmp_path / "file.txt"
        file_path.write_text("x")
        with pytest.raises(ConfigurationError):
            IndexEngine(output_dir=file_path)

    def test_from_env(self, tmp_path):
        engine = IndexEngine.from_env(
            {"CFLREACH_OUTPUT_DIR": str(tmp_path), "CFLREACH_DEBUG": "yes", "CFLREACH_WORKERS": "4"}
        )
        assert engine.get_config()["output_dir"] == str(tmp_path)
        assert engine.get_config()["debug"] is True
        assert engine.get_config()["workers"] == 4

    def test_from_env_overrides(self):
        engine = IndexEngine.from_env({"CFLREACH_WORKERS": "4", "CFLREACH_DEBUG": "0"}, workers=2, debug=None)
        assert engine.get_config()["workers"] == 2
        assert engine.get_config()["debug"] is False

    def test_from_env_bad_workers(self):
        with pytest.raises(ConfigurationError):
            IndexEngine.from_env({"CFLREACH_WORKERS": "many"})

    def test_debug_handler_attached_once(self):
        enable_debug_logging()
        enable_debug_logging()
        package_logger = logging.getLogger("cflreach")
        tagged = [h for h in package_logger.handlers if getattr(h, "_cflreach_debug", False)]
        assert len(tagged) == 1
        assert package_logger.level == logging.DEBUG


class TestBuildAndQuery:
    """Test building and querying through the engine"""

    def test_prepare_normalizes(self, engine, anbn):
        assert is_cnf(engine.prepare(anbn, IndexKind.SAT))
        assert is_talnf(engine.prepare(anbn, IndexKind.LIN))
        assert is_talnf(engine.prepare(anbn, IndexKind.LINDIST))

    def test_prepare_keeps_normal_forms(self, engine, a_plus):
        assert engine.prepare(a_plus, IndexKind.LIN) is a_plus

    @pytest.mark.parametrize("kind", ["sat", "lin", "lindist"])
    def test_every_kind_agrees(self, engine, files, kind):
        grammar = engine.load_grammar(files[0])
        graph = engine.load_graph(files[1], grammar)
        index = engine.build(grammar, graph, kind)
        assert index.kind is IndexKind(kind)
        assert engine.query(index, 1, 3)
        assert engine.query(index, "0", "0")
        assert not engine.query(index, 0, 3)

    def test_without_normalization(self, anbn, four_cycle):
        engine = IndexEngine(normalize=False)
        with pytest.raises(GrammarNotCNFError):
            engine.build(anbn, four_cycle, IndexKind.SAT)
        with pytest.raises(GrammarNotTALNFError):
            engine.build(anbn, four_cycle, IndexKind.LIN)

    def test_query_pairs(self, engine, anbn, four_cycle):
        index = engine.build(anbn, four_cycle, IndexKind.LIN)
        assert engine.query_pairs(index, [(1, 3), (0, 3)]) == [(1, 3, True), (0, 3, False)]

    def test_witness_formats(self, engine, anbn, four_cycle):
        index = engine.build(anbn, four_cycle, IndexKind.SAT)
        path = engine.witness(index, 0, 0)
        assert isinstance(path, GraphPath)
        assert path.vertices() == [0, 1, 2, 3, 0]
        slp = engine.witness(index, 0, 0, "slp")
        assert isinstance(slp, Slp)
        assert [four_cycle.label_names[x] for x in slp.expand()] == ["a", "a", "b", "b"]

    def test_witness_of_false_entry(self, engine, anbn, four_cycle):
        index = engine.build(anbn, four_cycle, IndexKind.LIN)
        with pytest.raises(NoWitnessError):
            engine.witness(index, 0, 3, "slp")

    def test_shortest(self, engine, anbn, four_cycle):
        index = engine.build(anbn, four_cycle, IndexKind.LINDIST)
        distance, path = engine.shortest(index, 1, 3)
        assert distance == 2
        assert path.vertices() == [1, 2, 3]
        assert engine.shortest(index, 0, 3) == (INF, None)

    def test_shortest_needs_distances(self, engine, anbn, four_cycle):
        index = engine.build(anbn, four_cycle, IndexKind.LIN)
        with pytest.raises(IndexKindError):
            engine.shortest(index, 1, 3)


class TestClassifyAndOracle:
    """Test grammar classification and reference checks"""

    def test_classify(self, engine, anbn, a_plus):
        assert engine.classify(anbn) is GrammarForm.LINEAR
        assert engine.classify(a_plus) is GrammarForm.TALNF

    def test_normal_form(self, engine, anbn):
        assert is_talnf(engine.normal_form(anbn))
        dyck = parse_grammar("S -> S S | a S b | ε")
        assert is_cnf(engine.normal_form(dyck))

    def test_oracle_matches_sat(self, engine, anbn, four_cycle):
        target, relations = engine.oracle(anbn, four_cycle)
        index = engine.build(anbn, four_cycle, IndexKind.SAT)
        assert relations == index.relations
        assert target == index.grammar

    def test_oracle_walks(self, engine, anbn, four_cycle):
        walks = engine.oracle_walks(anbn, four_cycle, "1", "3")
        assert [length for length, _ in walks] == [2]


class TestStorageAndCensus:
    """Test index files and the census through the engine"""

    def test_save_needs_a_path(self, engine, anbn, four_cycle):
        index = engine.build(anbn, four_cycle, IndexKind.LIN)
        with pytest.raises(ConfigurationError):
            engine.save(index)

    def test_save_to_output_dir(self, tmp_path, anbn, four_cycle):
        engine = IndexEngine(output_dir=tmp_path)
        index = engine.build(anbn, four_cycle, IndexKind.LIN)
        path = engine.save(index)
        assert path == tmp_path / DEFAULT_INDEX_NAME
        assert engine.load(path).relations == index.relations

    def test_census_writes_reports(self, tmp_path):
        engine = IndexEngine(output_dir=tmp_path)
        report = engine.census(CENSUS_CORPUS)
        assert report.total.total == 20
        assert (tmp_path / "census.csv").exists()
        assert (tmp_path / "aggregate.txt").exists()

    def test_census_without_output(self, engine, tmp_path):
        report = engine.census(CENSUS_CORPUS)
        assert report.skipped == 1
        assert list(tmp_path.iterdir()) == []
