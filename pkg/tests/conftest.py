"""
Shared fixtures
"""

import logging

import pytest

from cflreach.grammar import parse_grammar
from cflreach.graph import parse_graph

ANBN = "S -> a S b | a b\n"
FOUR_CYCLE = "0 1 a\n1 2 a\n2 3 b\n3 0 b\n"


@pytest.fixture(autouse=True)
def reset_package_logger():
    """Detach the debug handler an engine attached during the test"""
    package_logger = logging.getLogger("cflreach")
    level = package_logger.level
    yield
    package_logger.handlers = [h for h in package_logger.handlers if not getattr(h, "_cflreach_debug", False)]
    package_logger.setLevel(level)


@pytest.fixture
def anbn():
    """{a^n b^n : n >= 1}"""
    return parse_grammar(ANBN)


@pytest.fixture
def four_cycle(anbn):
    return parse_graph(FOUR_CYCLE, anbn)


@pytest.fixture
def a_plus():
    """S -> a S | a"""
    return parse_grammar("S -> a S | a\n")


@pytest.fixture
def path_graph(a_plus):
    """0 -> 1 -> 2 -> 3, every edge labelled a"""
    return parse_graph("0 1 a\n1 2 a\n2 3 a\n", a_plus)
