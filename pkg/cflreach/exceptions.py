"""
Exception classes for cflreach
"""

from typing import Any, Dict, Optional


class CflReachError(Exception):
    """Base exception for all cflreach errors"""

    def __init__(self, message: str, code: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.code = code
        self.details = details or {}


class GrammarSyntaxError(CflReachError):
    """Raised when a grammar file cannot be parsed"""

    def __init__(self, message: str, line: int, details: Optional[Dict[str, Any]] = None):
        merged = {"line": line, **(details or {})}
        super().__init__(f"line {line}: {message}", "grammar_syntax", merged)
        self.line = line


class UndeclaredStartError(CflReachError):
    """Raised when the start symbol has no rules"""
    pass


class DuplicateDeclarationError(CflReachError):
    """Raised when a directive or terminal is declared twice"""
    pass


class NotLinearError(CflReachError):
    """Raised when a production has two or more nonterminals on its right-hand side"""
    pass


class GrammarNotCNFError(CflReachError):
    """Raised when a builder needs a grammar in Chomsky normal form"""
    pass


class GrammarNotTALNFError(CflReachError):
    """Raised when a builder needs a terminal-anchored linear grammar"""
    pass


class UnsupportedFormError(CflReachError):
    """Raised when a grammar shape is outside what an algorithm handles"""
    pass


class GraphFormatError(CflReachError):
    """Raised when an edge-list file is malformed"""

    def __init__(self, message: str, line: int, details: Optional[Dict[str, Any]] = None):
        merged = {"line": line, **(details or {})}
        super().__init__(f"line {line}: {message}", "graph_format", merged)
        self.line = line


class UnknownLabelError(CflReachError):
    """Raised when an edge label is not a terminal of the grammar"""
    pass


class UnknownSymbolError(CflReachError):
    """Raised when a symbol name or id is not declared in the grammar"""
    pass


class VertexRangeError(CflReachError):
    """Raised when a vertex id is outside the graph"""
    pass


class NoWitnessError(CflReachError):
    """Raised when a witness is requested for a false relation entry"""
    pass


class MissingWitnessError(CflReachError):
    """Raised when a witness table does not cover a true relation entry"""
    pass


class InvalidHandleError(CflReachError):
    """Raised when a DAG handle does not name a node"""
    pass


class SlpExpansionError(CflReachError):
    """Raised when an SLP expansion exceeds the requested bound"""
    pass


class BudgetExceededError(CflReachError):
    """Raised when a bounded enumeration runs out of budget"""
    pass


class SchemaConversionError(CflReachError):
    """Raised when a JSON schema cannot be converted to a grammar"""
    pass


class IndexFormatError(CflReachError):
    """Raised when an index file is unreadable or has an unsupported version"""
    pass


class IndexKindError(CflReachError):
    """Raised when an operation does not apply to the loaded index kind"""
    pass


class NetworkError(CflReachError):
    """Raised when a network error occurs"""
    pass


class TimeoutError(CflReachError):
    """Raised when a request times out"""
    pass


class NotFoundError(CflReachError):
    """Raised when a remote resource is not found"""
    pass


class RateLimitError(CflReachError):
    """Raised when the corpus server rate-limits requests"""
    pass


class ServerError(CflReachError):
    """Raised when the corpus server fails"""
    pass


class ConfigurationError(CflReachError):
    """Raised when engine configuration is invalid"""
    pass


def create_error_from_response(status_code: int, response_data: Dict[str, Any]) -> CflReachError:
    """Create appropriate error from an HTTP error response"""

    message = response_data.get("error", f"HTTP {status_code}")
    details = {"status_code": status_code}

    if status_code == 404:
        return NotFoundError(message, "not_found", details)
    elif status_code == 429:
        return RateLimitError(message, "rate_limited", details)
    elif 500 <= status_code < 600:
        return ServerError(message, "server_error", details)
    else:
        return CflReachError(message, "http_error", details)


EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2


def exit_code_for(error: BaseException) -> int:
    """Map an error to the command-line exit status"""

    if isinstance(error, ConfigurationError):
        return EXIT_USAGE_ERROR

    if isinstance(error, (CflReachError, OSError)):
        return EXIT_DOMAIN_ERROR

    return EXIT_USAGE_ERROR


def is_retriable_error(error: Exception) -> bool:
    """Check if error is retriable"""

    if isinstance(error, (NetworkError, TimeoutError)):
        return True

    if isinstance(error, (ServerError, RateLimitError)):
        return True

    return False
