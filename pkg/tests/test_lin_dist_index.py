"""
Tests for shortest accepted paths
"""

import pytest
from hypothesis import given, settings

from cflreach.exceptions import GrammarNotTALNFError
from cflreach.grammar import parse_grammar, recognize, to_talnf
from cflreach.graph import LabeledGraph, trace_of
from cflreach.lin_dist_index import INF, lindist_build, shortest_accepted_path
from cflreach.lin_index import lin_build
from cflreach.models import IndexKind
from cflreach.oracle import enumerate_accepted

from .strategies import instances, linear_grammars


class TestLindistBuild:
    """Test distances on the reference instances"""

    def test_anbn_four_cycle(self, anbn, four_cycle):
        g = to_talnf(anbn)
        table = lindist_build(g, four_cycle)
        s = g.start
        assert table.kind is IndexKind.LINDIST
        assert table.distance(s, 1, 3) == 2
        assert table.distance(s, 0, 0) == 4
        assert table.distance(s, 0, 3) == INF

    def test_epsilon_distances(self):
        g = parse_grammar("S -> ε")
        table = lindist_build(g, LabeledGraph(n=3))
        for u in range(3):
            for v in range(3):
                assert table.distance(0, u, v) == (0 if u == v else INF)

    def test_path_graph(self, a_plus, path_graph):
        table = lindist_build(a_plus, path_graph)
        for i in range(4):
            for j in range(4):
                assert table.distance(0, i, j) == (j - i if i < j else INF)

    def test_requires_talnf(self, anbn, four_cycle):
        with pytest.raises(GrammarNotTALNFError):
            lindist_build(anbn, four_cycle)

    def test_settled_counts_dequeues(self, a_plus, path_graph):
        table = lindist_build(a_plus, path_graph)
        assert table.settled == table.stats.dequeues == table.relations.true_count

    def test_finite_support_matches_lin(self, anbn, four_cycle):
        g = to_talnf(anbn)
        assert lindist_build(g, four_cycle).finite_relations() == lin_build(g, four_cycle).relations


class TestShortestAcceptedPath:
    """Test extraction of shortest witnesses"""

    def test_anbn(self, anbn, four_cycle):
        table = lindist_build(to_talnf(anbn), four_cycle)
        path = shortest_accepted_path(table, 1, 3)
        assert path.vertices() == [1, 2, 3]
        assert trace_of(path) == (0, 1)

    def test_infinite(self, anbn, four_cycle):
        table = lindist_build(to_talnf(anbn), four_cycle)
        assert shortest_accepted_path(table, 0, 3) is None

    def test_empty_path(self):
        g = parse_grammar("S -> a S | ε")
        table = lindist_build(to_talnf(g), LabeledGraph(n=2, edges=[(0, 1, 0)], label_names=("a",)))
        path = table.shortest_accepted_path(1, 1)
        assert path.start == 1 and len(path) == 0

    @settings(max_examples=200, deadline=None)
    @given(instances(linear_grammars(), sparse=True))
    def test_support_equals_lin(self, instance):
        g, graph = instance
        talnf = to_talnf(g)
        assert lindist_build(talnf, graph).finite_relations() == lin_build(talnf, graph).relations

    @pytest.mark.slow
    @settings(max_examples=100, deadline=None)
    @given(instances(linear_grammars(), max_vertices=6, max_edges=6))
    def test_matches_walk_enumeration(self, instance):
        g, graph = instance
        talnf = to_talnf(g)
        table = lindist_build(talnf, graph)
        for s in range(graph.n):
            for t in range(graph.n):
                d = table.distance(talnf.start, s, t)
                walks = enumerate_accepted(talnf, graph, s, t, 8)
                if walks:
                    assert d == walks[0][0]
                else:
                    assert d == INF or d > 8
                if d != INF:
                    path = table.shortest_accepted_path(s, t)
                    assert len(path) == d
                    assert path.start == s and path.end == t
                    assert recognize(talnf, trace_of(path))
