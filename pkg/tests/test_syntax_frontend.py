import pytest

from models.syntax import LanguageId, TokenKind
from tools.error_handler import ParseFailure, UnsupportedLanguage
from tools.syntax_frontend import (
    detokenize, extract_functions, parse, parse_file, strip_noncode, tokenize, tokenize_text,
)
from tests.conftest import functions_from, only_function


class TestParse:
    """Test parsing and function extraction"""

    def test_parse_valid_java(self):
        """Test that valid code parses without error nodes"""
        tree = parse("class A { int f() { return 1; } }", "java")
        assert tree.language is LanguageId.JAVA
        assert not tree.has_error

    def test_parse_error_sets_flag(self):
        """Test that syntax errors set the tree flag instead of raising"""
        tree = parse("def f(:\n    return 1\n", "python")
        assert tree.has_error

    def test_parse_empty_source(self):
        """Test that empty input is rejected"""
        with pytest.raises(ParseFailure):
            parse("", "python")

    def test_parse_unknown_language(self):
        """Test the closed language set"""
        with pytest.raises(UnsupportedLanguage):
            parse("fn main() {}", "rust")

    def test_parse_file_infers_language(self, tmp_path):
        """Test language inference from the extension"""
        path = tmp_path / "a.cpp"
        path.write_text("int f() { return 0; }\n")
        assert parse_file(path).language is LanguageId.CPP

    def test_parse_file_empty(self, tmp_path):
        """Test that an empty file is a parse failure"""
        path = tmp_path / "a.py"
        path.write_text("   \n")
        with pytest.raises(ParseFailure, match="empty"):
            parse_file(path)

    def test_extract_functions_per_language(self):
        """Test that every method of a class is extracted with its name"""
        source = "class A {\n  int f() { return 1; }\n  void g(int x) { }\n}\n"
        functions = functions_from(source, "java")
        assert [fn.name for fn in functions] == ["f", "g"]
        assert functions[0].body.startswith("int f()")

    def test_extract_python_methods_are_dedented(self):
        """Test that class methods are re-anchored at column zero"""
        source = "class A:\n    def f(self, x):\n        return x\n"
        fn = only_function(source, "python")
        assert fn.body == "def f(self, x):\n    return x"

    def test_extract_skips_broken_functions(self):
        """Test that a function with errors is reported and left out"""
        source = "int good() { return 1; }\nint bad() { return 1 + ; }\n"
        skips = []
        tree = parse(source, "cpp")
        functions = extract_functions(tree, source, "cpp", on_skip=skips.append)
        assert [fn.name for fn in functions] == ["good"]
        assert skips == ["function_error"]


class TestTokens:
    """Test tokenization"""

    def test_tokenize_classifies_leaves(self):
        """Test token classes of a small Java method"""
        fn = only_function("class A { int f(int x) { return x + 1; } }", "java")
        tokens = tokenize(fn)
        kinds = {t.text: t.kind for t in tokens}
        assert [t.text for t in tokens] == ["int", "f", "(", "int", "x", ")", "{", "return", "x", "+", "1", ";", "}"]
        assert kinds["x"] is TokenKind.IDENTIFIER
        assert kinds["return"] is TokenKind.KEYWORD
        assert kinds["1"] is TokenKind.LITERAL
        assert kinds["+"] is TokenKind.SYMBOL

    def test_string_literal_is_one_token(self):
        """Test that strings are kept whole"""
        tokens = tokenize_text('x = "a b c"\n', "python")
        assert '"a b c"' in [t.text for t in tokens]

    def test_detokenize_brace_language(self):
        """Test the space-joined inverse"""
        fn = only_function("int f(int x) {\n  return x;\n}\n", "cpp")
        assert detokenize(tokenize(fn), "cpp") == "int f ( int x ) { return x ; }"

    def test_detokenize_python_keeps_lines(self):
        """Test that Python output reparses to the same tokens"""
        fn = only_function("def f(x):\n    if x:\n        return 1\n    return 2\n", "python")
        text = detokenize(tokenize(fn), "python")
        assert [t.text for t in tokenize_text(text, "python")] == [t.text for t in tokenize(fn)]

    def test_detokenize_empty(self):
        """Test the empty sequence"""
        assert detokenize([], "java") == ""


class TestStripNoncode:
    """Test comment, docstring and dead-code removal"""

    def test_strips_comments(self):
        """Test that comments disappear"""
        fn = only_function("int f() {\n  // note\n  return 1; /* end */\n}\n", "cpp")
        stripped = strip_noncode(fn)
        assert "note" not in stripped.body
        assert "end" not in stripped.body

    def test_strips_docstring_and_keeps_block(self):
        """Test that a docstring-only body becomes pass"""
        fn = only_function('def f():\n    """Doc."""\n', "python")
        stripped = strip_noncode(fn)
        assert "Doc" not in stripped.body
        assert "pass" in stripped.body

    def test_strips_unreachable_code(self):
        """Test that statements after a return are dropped"""
        fn = only_function("class A { int f() { return 1; int y = 2; } }", "java")
        stripped = strip_noncode(fn)
        assert "y" not in [t.text for t in stripped.tokens]

    def test_strips_false_branch(self):
        """Test that if (false) without else is removed"""
        fn = only_function("class A { void f() { if (false) { g(); } h(); } }", "java")
        texts = [t.text for t in strip_noncode(fn).tokens]
        assert "g" not in texts
        assert "h" in texts

    def test_false_branch_keeps_else(self):
        """Test that if (false) ... else ... leaves only the else statements"""
        fn = only_function("class A { int f() { int x = 0; if (false) { x = 1; } else { x = 2; } return x; } }", "java")
        texts = [t.text for t in strip_noncode(fn).tokens]
        assert "if" not in texts and "else" not in texts
        assert "1" not in texts
        assert "2" in texts

    def test_false_branch_flattens_else_if(self):
        """Test that a dead head of an else-if chain hands over to the next guard"""
        fn = only_function(
            "class A { void f(bool c) { if (false) { a(); } else if (c) { b(); } else { d(); } } }", "csharp",
        )
        texts = [t.text for t in strip_noncode(fn).tokens]
        assert "a" not in texts
        assert texts.count("if") == 1
        assert "b" in texts and "d" in texts

    def test_zero_condition_with_else_clause(self):
        """Test the C++ else clause under a literal 0 guard"""
        fn = only_function("int f() { if (0) { return 1; } else { return 2; } }", "cpp")
        texts = [t.text for t in strip_noncode(fn).tokens]
        assert "if" not in texts
        assert texts.count("return") == 1
        assert "2" in texts

    def test_python_false_branch_dedents_else(self):
        """Test that a Python else body moves out to the if's indentation"""
        source = (
            "def f(x):\n"
            "    if False:\n"
            "        x = 1\n"
            "    else:\n"
            "        x = 2\n"
            "        y = x\n"
            "    return x\n"
        )
        stripped = strip_noncode(only_function(source, "python"))
        assert "    x = 2\n    y = x\n    return x" in stripped.body
        assert "if" not in [t.text for t in stripped.tokens]

    def test_python_false_branch_promotes_elif(self):
        """Test that the first elif becomes the head of the chain"""
        source = "def f(x):\n    if False:\n        a()\n    elif x:\n        b()\n"
        stripped = strip_noncode(only_function(source, "python"))
        assert "    if x:\n        b()" in stripped.body
        assert "a" not in [t.text for t in stripped.tokens]

    def test_python_else_as_only_statement(self):
        """Test that a replaced sole statement is not turned into pass"""
        source = "def f():\n    if False:\n        return 1\n    else:\n        return 2\n"
        stripped = strip_noncode(only_function(source, "python"))
        texts = [t.text for t in stripped.tokens]
        assert "pass" not in texts
        assert "2" in texts and "1" not in texts

    def test_fixpoint(self):
        """Test idempotence"""
        fn = only_function("def f(x):\n    # c\n    return x\n    x = 1\n", "python")
        once = strip_noncode(fn)
        assert strip_noncode(once).body == once.body
