"""
Tests for the command line
"""

from pathlib import Path

import pytest

from cflreach import __version__
from cflreach.cli import build_parser, main

from .conftest import ANBN, FOUR_CYCLE

CENSUS_CORPUS = Path(__file__).parent / "fixtures" / "census_mini"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("CFLREACH_OUTPUT_DIR", "CFLREACH_DEBUG", "CFLREACH_WORKERS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def inputs(tmp_path):
    grammar = tmp_path / "anbn.cfg"
    grammar.write_text(ANBN)
    edges = tmp_path / "cycle.edges"
    edges.write_text(FOUR_CYCLE)
    return grammar, edges


def build_index(inputs, tmp_path, kind, capsys):
    grammar, edges = inputs
    target = tmp_path / f"{kind}.json"
    assert main(["build", "-g", str(grammar), "-e", str(edges), "--index", kind, "-o", str(target)]) == 0
    capsys.readouterr()
    return str(target)


class TestBuild:
    """Test the build command"""

    def test_prints_path_and_stats(self, inputs, tmp_path, capsys):
        grammar, edges = inputs
        target = tmp_path / "out" / "idx.json"
        code = main(["build", "-g", str(grammar), "-e", str(edges), "--index", "sat", "-o", str(target)])
        captured = capsys.readouterr()
        assert code == 0
        assert captured.out.strip() == str(target)
        assert "index=sat" in captured.err.splitlines()
        assert "vertices=4" in captured.err.splitlines()
        assert target.exists()

    def test_output_dir_from_environment(self, inputs, tmp_path, monkeypatch, capsys):
        grammar, edges = inputs
        monkeypatch.setenv("CFLREACH_OUTPUT_DIR", str(tmp_path / "env"))
        assert main(["build", "-g", str(grammar), "-e", str(edges), "--index", "lin"]) == 0
        assert capsys.readouterr().out.strip() == str(tmp_path / "env" / "index.json")

    def test_without_output_location(self, inputs, capsys):
        grammar, edges = inputs
        code = main(["build", "-g", str(grammar), "-e", str(edges), "--index", "lin"])
        assert code == 2
        assert "CFLREACH_OUTPUT_DIR" in capsys.readouterr().err

    def test_no_normalize(self, inputs, tmp_path, capsys):
        grammar, edges = inputs
        code = main(
            ["build", "-g", str(grammar), "-e", str(edges), "--index", "lin", "--no-normalize",
             "-o", str(tmp_path / "i.json")]
        )
        assert code == 1
        assert capsys.readouterr().err.startswith("cflreach: error:")

    def test_unknown_label(self, tmp_path, capsys):
        grammar = tmp_path / "g.cfg"
        grammar.write_text(ANBN)
        edges = tmp_path / "e.edges"
        edges.write_text("0 1 z\n")
        code = main(["build", "-g", str(grammar), "-e", str(edges), "--index", "lin", "-o", str(tmp_path / "i.json")])
        assert code == 1

    def test_missing_grammar_file(self, tmp_path, capsys):
        code = main(["build", "-g", str(tmp_path / "none.cfg"), "-e", str(tmp_path / "none.edges"),
                     "--index", "sat", "-o", str(tmp_path / "i.json")])
        assert code == 1


class TestQuery:
    """Test the query command"""

    @pytest.mark.parametrize("kind", ["sat", "lin", "lindist"])
    def test_answers(self, inputs, tmp_path, capsys, kind):
        index = build_index(inputs, tmp_path, kind, capsys)
        assert main(["query", index, "1", "3"]) == 0
        assert capsys.readouterr().out == "true\n"
        assert main(["query", index, "0", "3"]) == 0
        assert capsys.readouterr().out == "false\n"

    def test_pairs_file(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lin", capsys)
        pairs = tmp_path / "pairs.txt"
        pairs.write_text("1 3\n0 3\n")
        assert main(["query", index, "--pairs", str(pairs)]) == 0
        assert capsys.readouterr().out == "1 3 true\n0 3 false\n"

    def test_vertex_out_of_range(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lin", capsys)
        assert main(["query", index, "1", "99"]) == 1
        assert "99" in capsys.readouterr().err

    def test_unknown_nonterminal(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lin", capsys)
        assert main(["query", index, "1", "3", "--nonterminal", "Q"]) == 1
        assert "unknown nonterminal 'Q'" in capsys.readouterr().err

    def test_missing_pair(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lin", capsys)
        assert main(["query", index]) == 2
        err = capsys.readouterr().err
        assert err.startswith("usage:")

    def test_unreadable_index(self, tmp_path, capsys):
        assert main(["query", str(tmp_path / "missing.json"), "0", "1"]) == 1


class TestWitnessAndShortest:
    """Test the witness and shortest commands"""

    def test_explicit(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lin", capsys)
        assert main(["witness", index, "1", "3"]) == 0
        assert capsys.readouterr().out == "# path from 1 to 3, length 2\n1 2 a\n2 3 b\n"

    def test_slp(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lin", capsys)
        assert main(["witness", index, "1", "3", "--format", "slp"]) == 0
        assert capsys.readouterr().out == "X1 -> a\nX2 -> b\nX3 -> X1 X2\n"

    def test_false_entry(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "sat", capsys)
        assert main(["witness", index, "0", "3"]) == 1

    def test_shortest(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lindist", capsys)
        assert main(["shortest", index, "1", "3"]) == 0
        assert capsys.readouterr().out == "dist=2\n# path from 1 to 3, length 2\n1 2 a\n2 3 b\n"
        assert main(["shortest", index, "0", "3"]) == 0
        assert capsys.readouterr().out == "dist=inf\n"

    def test_shortest_needs_lindist(self, inputs, tmp_path, capsys):
        index = build_index(inputs, tmp_path, "lin", capsys)
        assert main(["shortest", index, "1", "3"]) == 1
        assert "lindist" in capsys.readouterr().err


class TestClassifyCensusOracle:
    """Test classify, census and the hidden oracle command"""

    def test_classify(self, inputs, capsys):
        assert main(["classify", "-g", str(inputs[0])]) == 0
        assert capsys.readouterr().out == "linear\n"

    def test_classify_show(self, inputs, capsys):
        assert main(["classify", "-g", str(inputs[0]), "--show"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "linear"
        assert lines[1] == "@start S"
        start_line = next(line for line in lines if line.startswith("S -> "))
        assert sorted(start_line[len("S -> "):].split(" | ")) == ["a S#0#2", "a S#1#1"]

    def test_census(self, tmp_path, capsys):
        out = tmp_path / "report"
        assert main(["census", str(CENSUS_CORPUS), "--out", str(out)]) == 0
        assert "skipped files: 1" in capsys.readouterr().out
        assert (out / "census.csv").exists()
        assert (out / "class_by_dataset.csv").exists()

    def test_census_missing_corpus(self, tmp_path, capsys):
        assert main(["census", str(tmp_path / "nowhere"), "--out", str(tmp_path / "r")]) == 1

    def test_oracle_relations(self, inputs, capsys):
        assert main(["oracle", "-g", str(inputs[0]), "-e", str(inputs[1])]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert "S 1 3" in lines
        assert "S 0 0" in lines
        assert "S 0 3" not in lines

    def test_oracle_walks(self, inputs, capsys):
        assert main(["oracle", "-g", str(inputs[0]), "-e", str(inputs[1]), "0", "0", "--max-len", "8"]) == 0
        assert capsys.readouterr().out == "4: a a b b\n"

    def test_oracle_hidden_from_help(self):
        assert "oracle" not in build_parser().format_help()


class TestParser:
    """Test argument parsing"""

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_command(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2

    def test_bad_index_kind(self, inputs, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["build", "-g", str(inputs[0]), "-e", str(inputs[1]), "--index", "fast"])
        assert exc_info.value.code == 2
