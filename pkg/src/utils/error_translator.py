"""
Error translation utilities: user-facing messages and CLI exit codes.
"""
from typing import Any, Dict, Optional

from config.settings import settings
from utils.exceptions import KHomologyError


class ErrorTranslator:
    """
    Translates engine errors into diagnostics and exit codes.
    """

    ERROR_MESSAGES = {
        # Input errors
        "parse_error": "Could not read the graph input",
        "validation_error": "The graph is not a valid finite directed graph",
        "unknown_vertex": "Unknown vertex",
        "missing_eta": "An eta value is required for every non-sink vertex",

        # Algebra errors
        "dimension_mismatch": "Matrix and basis dimensions do not agree",
        "not_in_group": "The vector does not lie in the group",
        "not_harmonic": "The vertex function is not in the kernel of the dual boundary",

        # Operator-model errors
        "star_condition": "The Fredholm module does not satisfy condition (*)",
        "certificate_violation": "A defect certificate failed its guard-shell check",
        "module_error": "The Fredholm module is inconsistent",
        "index_mismatch": "Operator-model index disagrees with the path-count formula",

        "verification_failed": "One or more invariant checks failed",
        "internal_error": "Internal error",
    }

    EXIT_CODES = {
        "parse_error": settings.EXIT_PARSE_ERROR,
        "validation_error": settings.EXIT_VALIDATION_ERROR,
        "missing_eta": settings.EXIT_MISSING_ETA,
    }

    @classmethod
    def code_of(cls, error: Any) -> str:
        if isinstance(error, KHomologyError):
            return error.code
        if isinstance(error, str) and error in cls.ERROR_MESSAGES:
            return error
        return "internal_error"

    @classmethod
    def translate(cls, error: Any, default_message: str = "An error occurred") -> str:
        """
        Translate an error to a diagnostic line.

        Args:
            error: Error code string or exception

        Returns:
            Message combining the generic description and the specific detail
        """
        if isinstance(error, str):
            return cls.ERROR_MESSAGES.get(error, default_message)

        if isinstance(error, KHomologyError):
            generic = cls.ERROR_MESSAGES.get(error.code, default_message)
            return f"{generic}: {error.message}" if error.message else generic

        if isinstance(error, Exception):
            return str(error) or default_message

        return default_message

    @classmethod
    def exit_code(cls, error: Any) -> int:
        """Exit code for an error; anything unmapped is a plain failure."""
        return cls.EXIT_CODES.get(cls.code_of(error), settings.EXIT_FAILURE)

    @classmethod
    def describe(cls, error: Any) -> Dict[str, Any]:
        """Structured form of an error, for JSON reports."""
        payload: Dict[str, Any] = {
            "code": cls.code_of(error),
            "message": cls.translate(error),
        }
        details: Optional[Any] = getattr(error, "details", None)
        if details is not None:
            payload["details"] = details
        return payload


# Global instance
error_translator = ErrorTranslator()
