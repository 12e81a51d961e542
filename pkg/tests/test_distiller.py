from collections import Counter

import pytest

from models.distilled import DistilledCode, NameBag, StructMark, TypeRef, UnifiedKeyword
from models.syntax import LanguageId, TokenKind
from tools.distilled_codec import deserialize, serialize
from tools.distiller import canonicalize, distill, distill_text, vocabulary
from tools.identifiers import BLANK_WORD, name_words, render_name, segment
from tools.syntax_frontend import strip_noncode, tokenize
from tests.conftest import FIXTURES, only_function

TWO_SUM_SNAPSHOT = FIXTURES / "golden" / "two_sum.distilled"


def distilled_text(source, language, registry):
    return serialize(distill(only_function(source, language), registry))


class TestSegment:
    """Test identifier segmentation"""

    @pytest.mark.parametrize("identifier,words", [
        ("getMaxValue", ["get", "max", "value"]),
        ("two_sum2", ["two", "sum", "2"]),
        ("x", ["x"]),
        ("MAX_SIZE", ["max", "size"]),
        ("__init__", ["init"]),
    ])
    def test_segment(self, identifier, words):
        """Test splitting on case, underscores and digits"""
        assert segment(identifier) == words

    @pytest.mark.parametrize("identifiers,words", [
        (["_"], ["_"]),
        (["__"], ["_"]),
        (["self", "_"], ["self"]),
        (["maxValue"], ["max", "value"]),
    ])
    def test_name_words(self, identifiers, words):
        """Test that a separator-only name keeps the blank marker instead of invented words"""
        assert name_words(identifiers) == words

    @pytest.mark.parametrize("language,name", [
        (LanguageId.PYTHON, "_"), (LanguageId.CPP, "_"), (LanguageId.CSHARP, "_"), (LanguageId.JAVA, "__"),
    ])
    def test_blank_marker_renders_back(self, language, name):
        """Test that the blank marker renders as an identifier that segments to nothing"""
        assert render_name([BLANK_WORD], language) == name
        assert segment(name) == []


class TestDistill:
    """Test the distillation pipeline"""

    def test_python_add(self, registry):
        """Test untyped Python parameters get the var type"""
        text = distilled_text("def add(a, b):\n    return a + b\n", "python", registry)
        assert text == "func {add} ( param var {a} , param var {b} ) { return {a} + {b} ; }"

    def test_java_add(self, registry):
        """Test a typed Java method"""
        text = distilled_text("class A { int add(int a, int b) { return a + b; } }", "java", registry)
        assert text == "func {add} ( param int {a} , param int {b} ) { return {a} + {b} ; }"

    def test_python_and_java_agree_except_types(self, registry):
        """Test convergence once type references are ignored"""
        py = canonicalize(distill(only_function("def add(a, b):\n    return a + b\n", "python"), registry))
        java = canonicalize(distill(only_function("class A { int add(int a, int b) { return a + b; } }", "java"), registry))

        def untyped(code):
            return [t for t in code.tokens if not isinstance(t, TypeRef)]

        assert untyped(py) == untyped(java)
        assert py != java

    def test_return_sum_core_in_all_languages(self, registry):
        """Test that already-unified arithmetic is identical everywhere"""
        sources = {
            "python": "def f(a, b):\n    return a + b\n",
            "java": "class A { int f(int a, int b) { return a + b; } }",
            "csharp": "class A { int F(int a, int b) { return a + b; } }",
            "cpp": "int f(int a, int b) { return a + b; }",
        }
        cores = set()
        for language, source in sources.items():
            text = distilled_text(source, language, registry)
            cores.add(text[text.index("return"):])
        assert cores == {"return {a} + {b} ; }"}

    def test_empty_body(self, registry):
        """Test the empty function template"""
        assert distilled_text("class A { void f() { } }", "java", registry) == "func {f} ( ) { }"

    def test_while_template(self, registry):
        """Test the unified while loop"""
        text = distilled_text("def f(n):\n    while n > 0:\n        n -= 1\n", "python", registry)
        assert text == "func {f} ( param var {n} ) { while ( {n} > 0 ) { assign {n} -= 1 ; } }"

    def test_counted_python_loop_matches_java(self, registry):
        """Test that range loops become counted for loops"""
        py = distilled_text("def f(n: int):\n    for i in range(n):\n        g(i)\n", "python", registry)
        java = distilled_text("class A { void f(int n) { for (int i = 0; i < n; i++) { g(i); } } }", "java", registry)
        assert py == java
        assert "for ( decl int {i} = 0 ; {i} < {n} ; assign {i} += 1 )" in py

    def test_inclusive_bound_matches_python_range(self, registry):
        """Test that i <= n lowers to the same bound as range(1, n + 1)"""
        py = distilled_text("def f(n: int):\n    for i in range(1, n + 1):\n        g(i)\n", "python", registry)
        java = distilled_text("class A { void f(int n) { for (int i = 1; i <= n; i++) { g(i); } } }", "java", registry)
        assert py == java
        assert "{i} < {n} + 1 ;" in java

    def test_inclusive_bound_needs_int_counter(self, registry):
        """Test that a non-integer counter keeps its inclusive bound"""
        text = distilled_text(
            "class A { void f(double n) { for (double x = 0; x <= n; x += 0.5) { g(x); } } }", "java", registry,
        )
        assert "{x} <= {n} ;" in text

    def test_blank_loop_variable(self, registry):
        """Test that a throwaway loop variable distils to the blank marker"""
        text = distilled_text("def f(n: int):\n    for _ in range(n):\n        print(n)\n", "python", registry)
        assert "for ( decl int {_} = 0 ; {_} < {n} ; assign {_} += 1 )" in text
        assert "anon" not in text

    def test_registry_morpheme(self, registry):
        """Test that a library call becomes its unified form"""
        text = distilled_text("class A { void f(int x) { System.out.println(x); } }", "java", registry)
        assert "println( {x} ) ;" in text

    def test_fuzzy_call(self, registry):
        """Test that unknown calls keep the callee path as one bag"""
        fn = only_function("class A { void f() { list.addAll(other); } }", "java")
        code = distill(fn, registry)
        assert "call {list add all} ( {other} )" in serialize(code)
        assert code.annotations["fuzzy"] == 1

    def test_python_string_quotes_normalized(self, registry):
        """Test single-quoted strings read as double-quoted"""
        text = distilled_text("def f():\n    return 'hi'\n", "python", registry)
        assert 'return "hi" ;' in text

    def test_comments_do_not_reach_output(self, registry):
        """Test that noise is stripped first"""
        with_comment = distilled_text("int f(int a) {\n  // sum\n  return a;\n}\n", "cpp", registry)
        without = distilled_text("int f(int a) {\n  return a;\n}\n", "cpp", registry)
        assert with_comment == without

    def test_distill_text(self, registry):
        """Test distilling every function of a snippet"""
        codes = distill_text("def f():\n    return 1\n\ndef g():\n    return 2\n", "python", registry)
        assert len(codes) == 2

    def test_balanced_and_closed(self, registry, golden_functions):
        """Test balance and vocabulary closure over the golden corpus"""
        words = vocabulary(registry)
        for functions in golden_functions.values():
            for fn in functions:
                code = distill(fn, registry)
                assert code.is_balanced(), fn.name
                assert set(code.keywords()) <= words, fn.name

    def test_deterministic(self, registry, java_two_sum):
        """Test that distillation is a pure function"""
        fn = only_function(java_two_sum, "java")
        assert distill(fn, registry) == distill(fn, registry)

    def test_two_sum_snapshot(self, registry, java_two_sum):
        """Test the two-sum method against its checked-in distilled form"""
        assert TWO_SUM_SNAPSHOT.is_file(), f"missing {TWO_SUM_SNAPSHOT}"
        text = serialize(distill(only_function(java_two_sum, "java"), registry))
        assert text == TWO_SUM_SNAPSHOT.read_text(encoding="utf-8").strip()
        assert text.startswith("func {two sum} ( param int[] {nums} , param int {target} ) {")


class TestIdentifierConservation:
    """Every identifier surviving pruning reappears as bag words"""

    SOURCES = {
        "java": (
            "class A { int count(int limit) { int total = 0; int i = 0;"
            " while (i < limit) { total = total + helper(i); i++; } return total; } }"
        ),
        "cpp": (
            "int count(int limit) { int total = 0; int i = 0;"
            " while (i < limit) { total = total + helper(i); i++; } return total; }"
        ),
        "python": (
            "def count(limit):\n    total = 0\n    i = 0\n    while i < limit:\n"
            "        total = total + helper(i)\n        i += 1\n    return total\n"
        ),
    }

    @pytest.mark.parametrize("language", sorted(SOURCES))
    def test_conservation(self, registry, language):
        """Test the multiset of name words equals the segmented identifiers"""
        fn = strip_noncode(only_function(self.SOURCES[language], language))
        expected = Counter(
            word
            for token in tokenize(fn) if token.kind is TokenKind.IDENTIFIER
            for word in segment(token.text)
        )
        assert Counter(distill(fn, registry).name_words()) == expected


class TestCanonicalize:
    """Test canonical bag order"""

    def test_sorts_bags(self):
        """Test lexicographic bag order"""
        code = DistilledCode([NameBag(("value", "get", "max"))])
        assert canonicalize(code).tokens == [NameBag(("get", "max", "value"))]

    def test_idempotent(self, registry, java_two_sum):
        """Test canonicalize twice equals once"""
        once = canonicalize(distill(only_function(java_two_sum, "java"), registry))
        assert canonicalize(once) == once

    def test_equal_up_to_bag_order(self):
        """Test that bag order differences vanish"""
        a = DistilledCode([UnifiedKeyword("return"), NameBag(("b", "a")), StructMark.of(";")])
        b = DistilledCode([UnifiedKeyword("return"), NameBag(("a", "b")), StructMark.of(";")])
        assert a != b
        assert canonicalize(a) == canonicalize(b)

    def test_commutes_with_serialization(self, registry, java_two_sum):
        """Test canonicalize survives a text round trip"""
        code = canonicalize(distill(only_function(java_two_sum, "java"), registry))
        assert canonicalize(deserialize(serialize(code), registry=registry)) == code
