import pytest

from models.syntax import LanguageId
from tools.error_handler import EXIT_USAGE, UnsupportedLanguage
from tools.input_validator import InputValidator, ValidationError


class TestInputValidator:
    """Test input validation functionality"""

    def test_validate_language_valid(self):
        """Test coercing language names"""
        assert InputValidator.validate_language("java") is LanguageId.JAVA
        assert InputValidator.validate_language(" CSharp ") is LanguageId.CSHARP
        assert InputValidator.validate_language(LanguageId.CPP) is LanguageId.CPP

    def test_validate_language_unknown(self):
        """Test rejecting languages outside the closed set"""
        for language in ["rust", "", None, 3]:
            with pytest.raises(UnsupportedLanguage):
                InputValidator.validate_language(language)

    def test_infer_language_from_extension(self):
        """Test inferring the language from a file name"""
        assert InputValidator.infer_language("a/b/Main.java") is LanguageId.JAVA
        assert InputValidator.infer_language("x.CC") is LanguageId.CPP
        assert InputValidator.infer_language("prog.cs") is LanguageId.CSHARP

    def test_infer_language_explicit_wins(self):
        """Test that an explicit language overrides the extension"""
        assert InputValidator.infer_language("notes.txt", "python") is LanguageId.PYTHON

    def test_infer_language_unknown_extension(self):
        """Test that an unknown extension is a usage error"""
        with pytest.raises(ValidationError, match="Cannot infer") as info:
            InputValidator.infer_language("notes.txt")
        assert info.value.code == EXIT_USAGE

    def test_validate_ratio(self):
        """Test ratio bounds"""
        assert InputValidator.validate_ratio("0.25") == 0.25
        assert InputValidator.validate_ratio(0) == 0.0
        assert InputValidator.validate_ratio(1) == 1.0
        for bad in [-0.1, 1.5, "abc", float("nan")]:
            with pytest.raises(ValidationError):
                InputValidator.validate_ratio(bad, "mask_ratio")

    def test_validate_seed(self):
        """Test seed range"""
        assert InputValidator.validate_seed("42") == 42
        with pytest.raises(ValidationError, match="integer"):
            InputValidator.validate_seed("x")
        with pytest.raises(ValidationError):
            InputValidator.validate_seed(-1)
        with pytest.raises(ValidationError):
            InputValidator.validate_seed(2 ** 64)

    def test_validate_jobs(self):
        """Test job counts"""
        assert InputValidator.validate_jobs(4) == 4
        with pytest.raises(ValidationError, match="at least 1"):
            InputValidator.validate_jobs(0)

    def test_validate_positive(self):
        """Test positive numbers"""
        assert InputValidator.validate_positive("2.5", "timeout") == 2.5
        with pytest.raises(ValidationError, match="greater than 0"):
            InputValidator.validate_positive(0, "timeout")

    def test_validate_readable_path(self, tmp_path):
        """Test path checks"""
        path = tmp_path / "a.py"
        path.write_text("x = 1\n")
        assert InputValidator.validate_readable_path(path) == str(path)
        with pytest.raises(ValidationError, match="does not exist"):
            InputValidator.validate_readable_path(tmp_path / "missing.py")
        with pytest.raises(ValidationError):
            InputValidator.validate_readable_path("")
