"""
Tests for terminal-anchored propagation
"""

import pytest
from hypothesis import given, settings

from cflreach.exceptions import GrammarNotTALNFError
from cflreach.grammar import parse_grammar, to_cnf, to_talnf
from cflreach.graph import LabeledGraph, parse_graph
from cflreach.lin_index import dispatch_tables, lin_build, propagation_count
from cflreach.models import IndexKind
from cflreach.oracle import naive_fixpoint
from cflreach.sat_index import sat_build
from cflreach.utils import fit_growth_exponent

from .strategies import instances, line_graph_text, linear_grammars
from .test_sat_index import assert_witnesses_sound


class TestLinBuild:
    """Test lin_build on the reference instances"""

    def test_anbn_four_cycle_matches_sat(self, anbn, four_cycle):
        talnf = to_talnf(anbn)
        cnf = to_cnf(anbn)
        lin = lin_build(talnf, four_cycle)
        sat = sat_build(cnf, four_cycle)
        assert lin.kind is IndexKind.LIN
        assert lin.query(1, 3)
        assert lin.query(0, 0)
        assert not lin.query(0, 3)
        assert lin.relations.rows[talnf.start] == sat.relations.rows[cnf.start]

    def test_single_terminal(self):
        g = parse_grammar("S -> a")
        index = lin_build(g, parse_graph("0 1 a\n", g))
        assert list(index.relations.pairs(g.start)) == [(0, 1)]
        assert propagation_count(index.stats) == 0

    def test_path_graph(self, a_plus, path_graph):
        index = lin_build(a_plus, path_graph)
        expected = [(i, j) for i in range(4) for j in range(4) if i < j]
        assert sorted(index.relations.pairs(a_plus.start)) == expected

    def test_edgeless_graph(self, a_plus):
        index = lin_build(a_plus, LabeledGraph(n=5, label_names=a_plus.terminal_names))
        assert index.relations.true_count == 0
        assert propagation_count(index.stats) == 0

    def test_requires_talnf(self, anbn, four_cycle):
        with pytest.raises(GrammarNotTALNFError):
            lin_build(anbn, four_cycle)

    def test_left_and_right_rules(self):
        g = parse_grammar("S -> a B | B a\nB -> b")
        index = lin_build(g, parse_graph("0 1 a\n1 2 b\n2 3 a\n", g))
        assert sorted(index.relations.pairs(g.start)) == [(0, 2), (1, 3)]
        assert_witnesses_sound(index)

    def test_dispatch_tables(self):
        g = parse_grammar("S -> a B | B a | ε\nB -> b")
        terminal_rules, left_rules, right_rules, epsilon_lhs = dispatch_tables(g)
        a, b = g.terminal_id("a"), g.terminal_id("b")
        s, nb = g.nonterminal_id("S"), g.nonterminal_id("B")
        assert terminal_rules == {b: [nb]}
        assert left_rules == {nb: [(s, a)]}
        assert right_rules == {nb: [(s, a)]}
        assert epsilon_lhs == [s]

    @settings(max_examples=200, deadline=None)
    @given(instances(linear_grammars(), sparse=True))
    def test_matches_sat_on_start(self, instance):
        g, graph = instance
        talnf, cnf = to_talnf(g), to_cnf(g)
        lin = lin_build(talnf, graph)
        sat = sat_build(cnf, graph)
        assert lin.relations.rows[talnf.start] == sat.relations.rows[cnf.start]
        assert lin.relations == naive_fixpoint(talnf, graph)
        assert_witnesses_sound(lin)


@pytest.mark.slow
class TestScaling:
    """Operation counts on line graphs with S -> a S | a"""

    SIZES = (64, 128, 256, 512)

    def _counts(self, builder, grammar):
        counts = []
        for n in self.SIZES:
            graph = parse_graph(line_graph_text(n), grammar)
            counts.append(builder(grammar, graph).stats.inner_iterations)
        return counts

    def test_doubling_ratio(self, a_plus):
        small = lin_build(a_plus, parse_graph(line_graph_text(128), a_plus))
        large = lin_build(a_plus, parse_graph(line_graph_text(256), a_plus))
        assert propagation_count(large.stats) / propagation_count(small.stats) <= 4.5

    def test_lin_is_subcubic_and_sat_is_not(self, a_plus):
        lin_exponent = fit_growth_exponent(self.SIZES, self._counts(lin_build, a_plus))
        sat_exponent = fit_growth_exponent(self.SIZES, self._counts(sat_build, to_cnf(a_plus)))
        assert lin_exponent <= 2.3
        assert sat_exponent > lin_exponent
