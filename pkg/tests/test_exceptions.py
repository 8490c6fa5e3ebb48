"""
Tests for cflreach exceptions
"""

import pytest

from cflreach.exceptions import (
    EXIT_DOMAIN_ERROR,
    EXIT_USAGE_ERROR,
    CflReachError,
    ConfigurationError,
    GrammarSyntaxError,
    GraphFormatError,
    NetworkError,
    NotFoundError,
    RateLimitError,
    ServerError,
    TimeoutError,
    UnknownSymbolError,
    VertexRangeError,
    create_error_from_response,
    exit_code_for,
    is_retriable_error,
)


class TestErrors:
    """Test error attributes"""

    def test_base_error(self):
        error = CflReachError("went wrong", "some_code", {"key": 1})
        assert str(error) == "went wrong"
        assert error.code == "some_code"
        assert error.details == {"key": 1}
        assert CflReachError("plain").details == {}

    def test_line_errors(self):
        error = GrammarSyntaxError("expected 'LHS -> alternatives'", 7)
        assert str(error) == "line 7: expected 'LHS -> alternatives'"
        assert error.line == 7
        assert error.code == "grammar_syntax"
        assert error.details == {"line": 7}

        error = GraphFormatError("expected 'u v label'", 3, {"token": "x"})
        assert error.details == {"line": 3, "token": "x"}
        assert error.code == "graph_format"


class TestCreateErrorFromResponse:
    """Test mapping HTTP responses to errors"""

    @pytest.mark.parametrize(
        "status_code, error_class",
        [(404, NotFoundError), (429, RateLimitError), (500, ServerError), (503, ServerError)],
    )
    def test_status_codes(self, status_code, error_class):
        error = create_error_from_response(status_code, {"error": "message"})
        assert type(error) is error_class
        assert error.message == "message"
        assert error.details["status_code"] == status_code

    def test_other_status(self):
        error = create_error_from_response(400, {})
        assert type(error) is CflReachError
        assert error.message == "HTTP 400"
        assert error.code == "http_error"


class TestExitCodes:
    """Test exit status mapping"""

    def test_domain_errors(self):
        assert exit_code_for(VertexRangeError("vertex 9")) == EXIT_DOMAIN_ERROR
        assert exit_code_for(FileNotFoundError("x")) == EXIT_DOMAIN_ERROR

    def test_unknown_symbol_is_a_domain_error(self):
        assert exit_code_for(UnknownSymbolError("unknown nonterminal 'Q'")) == EXIT_DOMAIN_ERROR

    def test_usage_errors(self):
        assert exit_code_for(ConfigurationError("bad")) == EXIT_USAGE_ERROR
        assert exit_code_for(ValueError("bad")) == EXIT_USAGE_ERROR


class TestRetriable:
    """Test retriable classification"""

    def test_retriable(self):
        assert is_retriable_error(NetworkError("down"))
        assert is_retriable_error(TimeoutError("slow"))
        assert is_retriable_error(ServerError("boom"))
        assert is_retriable_error(RateLimitError("wait"))

    def test_not_retriable(self):
        assert not is_retriable_error(NotFoundError("gone"))
        assert not is_retriable_error(ValueError("bad"))
