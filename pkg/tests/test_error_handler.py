import pytest

from tools.error_handler import (
    EXIT_DATA, EXIT_IO, EXIT_USAGE, DistillError, EmptyReference, ErrorHandler, IoFailure,
    MalformedDistilled, MalformedRow, RunnerFailure, UnsupportedLanguage, ValidationError,
)


class TestErrorHandler:
    """Test exit-code mapping and error reporting"""

    @pytest.mark.parametrize("error,code", [
        (ValidationError("bad ratio", "mask_ratio"), EXIT_USAGE),
        (UnsupportedLanguage("rust"), EXIT_USAGE),
        (MalformedRow(4, "short"), EXIT_DATA),
        (MalformedDistilled("unbalanced"), EXIT_DATA),
        (EmptyReference(), EXIT_DATA),
        (IoFailure("x.py", "denied"), EXIT_IO),
        (RunnerFailure("java", "javac"), EXIT_IO),
        (FileNotFoundError("x"), EXIT_IO),
        (ValueError("x"), EXIT_DATA),
    ])
    def test_exit_codes(self, error, code):
        """Test the documented exit code per error class"""
        assert ErrorHandler.exit_code_for(error) == code

    def test_details(self):
        """Test structured details on errors"""
        error = MalformedRow(4, "short")
        assert error.details == {"line": 4}
        assert "line 4" in error.message
        assert ValidationError("bad", "seed").details == {"field": "seed"}
        assert isinstance(UnsupportedLanguage("go"), ValidationError)

    def test_handle_cli_error_logs(self, caplog):
        """Test that a handled error is logged with its context"""
        with caplog.at_level("ERROR", logger="error_handler"):
            code = ErrorHandler.handle_cli_error(IoFailure("a.py", "denied"), "distill")
        assert code == EXIT_IO
        assert "distill: I/O failure on a.py: denied" in caplog.text

    def test_handle_plain_exception(self, caplog):
        """Test that non-toolchain exceptions are reported too"""
        with caplog.at_level("ERROR", logger="error_handler"):
            assert ErrorHandler.handle_cli_error(ValueError("oops")) == EXIT_DATA
        assert "oops" in caplog.text

    def test_base_error_default_code(self):
        """Test the default exit code"""
        assert DistillError("x").code == EXIT_DATA
