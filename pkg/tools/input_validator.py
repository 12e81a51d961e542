"""
Input Validation
Validates user-supplied values (languages, ratios, seeds, paths) before they reach the pipeline
"""

import os
from pathlib import Path
from typing import Any, Optional

from models.syntax import LanguageId
from tools.error_handler import UnsupportedLanguage, ValidationError


class InputValidator:
    """Validation helpers shared by the CLI and the library entry points"""

    # Extension -> language
    EXTENSIONS = {
        ".py": LanguageId.PYTHON,
        ".java": LanguageId.JAVA,
        ".cs": LanguageId.CSHARP,
        ".cpp": LanguageId.CPP,
        ".cc": LanguageId.CPP,
        ".cxx": LanguageId.CPP,
        ".hpp": LanguageId.CPP,
        ".h": LanguageId.CPP,
    }

    @staticmethod
    def validate_language(language: Any) -> LanguageId:
        """Coerce a language id, rejecting anything outside the closed set"""
        if isinstance(language, LanguageId):
            return language
        if not language or not isinstance(language, str):
            raise UnsupportedLanguage(language)
        try:
            return LanguageId(language.strip().lower())
        except ValueError:
            raise UnsupportedLanguage(language)

    @staticmethod
    def infer_language(path: str, language: Optional[Any] = None) -> LanguageId:
        """Explicit language wins; otherwise infer from the file extension"""
        if language:
            return InputValidator.validate_language(language)
        suffix = Path(path).suffix.lower()
        if suffix not in InputValidator.EXTENSIONS:
            raise ValidationError(f"Cannot infer language from extension {suffix!r} of {path}", "language")
        return InputValidator.EXTENSIONS[suffix]

    @staticmethod
    def validate_ratio(value: Any, name: str = "ratio") -> float:
        """Validate a probability in [0, 1]"""
        try:
            value = float(value)
        except (ValueError, TypeError):
            raise ValidationError(f"{name} must be a number", name)

        if value != value or value < 0.0 or value > 1.0:
            raise ValidationError(f"{name} must be between 0 and 1", name)

        return value

    @staticmethod
    def validate_seed(seed: Any) -> int:
        """Seeds are non-negative 64-bit integers"""
        try:
            seed = int(seed)
        except (ValueError, TypeError):
            raise ValidationError("Seed must be an integer", "seed")

        if seed < 0 or seed >= 2 ** 64:
            raise ValidationError("Seed must fit in an unsigned 64-bit integer", "seed")

        return seed

    @staticmethod
    def validate_jobs(jobs: Any) -> int:
        try:
            jobs = int(jobs)
        except (ValueError, TypeError):
            raise ValidationError("Job count must be a number", "jobs")

        if jobs < 1:
            raise ValidationError("Job count must be at least 1", "jobs")

        return jobs

    @staticmethod
    def validate_positive(value: Any, name: str) -> float:
        try:
            value = float(value)
        except (ValueError, TypeError):
            raise ValidationError(f"{name} must be a number", name)

        if value <= 0:
            raise ValidationError(f"{name} must be greater than 0", name)

        return value

    @staticmethod
    def validate_readable_path(path: Any) -> str:
        """Check that a path exists and is readable"""
        if not path or not isinstance(path, (str, os.PathLike)):
            raise ValidationError("Path must be a non-empty string", "path")

        path = os.fspath(path)
        if not os.path.exists(path):
            raise ValidationError(f"Path does not exist: {path}", "path")
        if not os.access(path, os.R_OK):
            raise ValidationError(f"Path is not readable: {path}", "path")

        return path
