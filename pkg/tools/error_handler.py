"""
Error Handling for the distillation toolchain
Structured errors carrying a CLI exit code, plus centralized reporting
"""

import logging
import traceback
from typing import Any, Dict, Optional

logger = logging.getLogger("error_handler")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class DistillError(Exception):
    """Base exception class for toolchain errors"""

    def __init__(self, message: str, code: int = EXIT_DATA, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.code = code
        self.details = details or {}
        super().__init__(message)


class ValidationError(DistillError):
    """Invalid user-supplied value"""
    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, EXIT_USAGE, {"field": field} if field else {})


class UnsupportedLanguage(ValidationError):
    def __init__(self, language: Any):
        super().__init__(f"Unsupported language: {language!r}", "language")


class ParseFailure(DistillError):
    """No tree could be produced for the input"""
    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, EXIT_DATA, {"path": path} if path else {})


class ReparseFailure(DistillError):
    """A transform produced text that no longer parses (internal error)"""
    def __init__(self, operation: str, text: str):
        super().__init__(f"{operation} produced unparseable text", EXIT_DATA, {"text": text[:200]})


class MalformedRow(DistillError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"Malformed registry row at line {line_no}: {reason}", EXIT_DATA, {"line": line_no})


class DuplicateRule(DistillError):
    def __init__(self, language: str, category: str, surface: str, line_no: int = 0):
        super().__init__(
            f"Duplicate rule for ({language}, {category}, {surface!r})",
            EXIT_DATA,
            {"language": language, "category": category, "surface": surface, "line": line_no},
        )


class SlotMismatch(DistillError):
    def __init__(self, surface: str, unified: str, line_no: int = 0):
        super().__init__(
            f"Slots of {surface!r} differ from slots of {unified!r}",
            EXIT_DATA,
            {"surface": surface, "unified": unified, "line": line_no},
        )


class UntemplatedNode(DistillError):
    def __init__(self, kind: str):
        super().__init__(f"No template for node kind {kind!r}", EXIT_DATA, {"kind": kind})


class UnrenderableMorpheme(DistillError):
    def __init__(self, morpheme: str, target: str):
        super().__init__(
            f"Morpheme {morpheme!r} has no surface form in {target}",
            EXIT_DATA,
            {"morpheme": morpheme, "target": target},
        )


class MalformedDistilled(DistillError):
    def __init__(self, reason: str, position: Optional[int] = None):
        details = {"position": position} if position is not None else {}
        super().__init__(f"Malformed distilled code: {reason}", EXIT_DATA, details)


class MalformedRecord(DistillError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"Malformed record at line {line_no}: {reason}", EXIT_DATA, {"line": line_no})


class IoFailure(DistillError):
    def __init__(self, path: str, error: str):
        super().__init__(f"I/O failure on {path}: {error}", EXIT_IO, {"path": path, "error": error})


class EmptyReference(DistillError):
    def __init__(self):
        super().__init__("BLEU reference is empty", EXIT_DATA)


class RunnerFailure(DistillError):
    """Infrastructure failure (missing toolchain), never a candidate failure"""
    def __init__(self, language: str, command: str):
        super().__init__(
            f"Toolchain for {language} unavailable: {command}",
            EXIT_IO,
            {"language": language, "command": command},
        )


class NoRelevantCandidate(DistillError):
    def __init__(self, query_index: int):
        super().__init__(f"Query {query_index} has no relevant candidate", EXIT_DATA, {"query": query_index})


class ErrorHandler:
    """Centralized error reporting for the command line"""

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        """Map an exception to the documented exit code"""
        if isinstance(error, DistillError):
            return error.code
        if isinstance(error, OSError):
            return EXIT_IO
        return EXIT_DATA

    @staticmethod
    def handle_cli_error(error: BaseException, context: str = "") -> int:
        """Log an error raised by a subcommand and return its exit code"""
        code = ErrorHandler.exit_code_for(error)
        prefix = f"{context}: " if context else ""
        if isinstance(error, DistillError):
            logger.error(f"{prefix}{error.message}")
            if error.details:
                logger.debug(f"Error details: {error.details}")
        else:
            logger.error(f"{prefix}{error}")
            logger.debug(traceback.format_exc())
        return code

    @staticmethod
    def log_operation(operation: str, success: bool, details: Optional[Dict[str, Any]] = None):
        """Log operation results"""
        if success:
            logger.info(f"Operation '{operation}' completed successfully")
            if details:
                logger.debug(f"Operation details: {details}")
        else:
            logger.error(f"Operation '{operation}' failed")
            if details:
                logger.error(f"Failure details: {details}")


# Global error handler instance
error_handler = ErrorHandler()
