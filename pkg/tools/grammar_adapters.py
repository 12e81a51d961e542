"""
Grammar Adapters
Binds each language to its tree-sitter grammar behind one interface and
converts grammar trees into SyntaxNode trees
"""

import importlib
import logging
import threading
from typing import Dict, FrozenSet, List, Optional

from tree_sitter import Language, Parser

from models.syntax import LanguageId, SyntaxNode, TokenKind
from tools.error_handler import ParseFailure, UnsupportedLanguage

logger = logging.getLogger("grammar_adapters")

IDENTIFIER_KINDS = frozenset({
    "identifier", "type_identifier", "field_identifier", "namespace_identifier",
    "property_identifier", "statement_identifier",
})


class GrammarAdapter:
    """Uniform access to one language grammar"""

    language: LanguageId
    module_name: str
    function_kinds: FrozenSet[str] = frozenset()
    comment_kinds: FrozenSet[str] = frozenset({"comment"})
    literal_kinds: FrozenSet[str] = frozenset()
    # grammar nodes kept as a single opaque token
    atomic_kinds: FrozenSet[str] = frozenset()
    block_kinds: FrozenSet[str] = frozenset({"block"})
    terminator_kinds: FrozenSet[str] = frozenset({
        "return_statement", "break_statement", "continue_statement", "throw_statement",
    })
    # text placed around a lone function so it parses as a compilation unit
    wrapper_prefix: str = ""
    wrapper_suffix: str = ""

    def __init__(self):
        self._ts_language: Optional[Language] = None
        self._local = threading.local()
        self._lock = threading.Lock()

    @property
    def ts_language(self) -> Language:
        with self._lock:
            if self._ts_language is None:
                module = importlib.import_module(self.module_name)
                self._ts_language = Language(module.language())
                logger.debug(f"Loaded tree-sitter grammar: {self.module_name}")
            return self._ts_language

    @property
    def parser(self) -> Parser:
        # tree-sitter parsers are not shared across threads
        parser = getattr(self._local, "parser", None)
        if parser is None:
            parser = Parser(self.ts_language)
            self._local.parser = parser
        return parser

    def parse_bytes(self, data: bytes, offset: int = 0) -> SyntaxNode:
        try:
            tree = self.parser.parse(data)
        except Exception as e:
            raise ParseFailure(f"{self.language.value} grammar failed: {e}")
        if tree is None or tree.root_node is None:
            raise ParseFailure(f"{self.language.value} grammar produced no tree")
        return self.convert(tree.root_node, data, offset)

    def is_atomic(self, kind: str) -> bool:
        return kind in self.atomic_kinds or kind in self.comment_kinds

    def convert(self, ts_root, data: bytes, offset: int = 0) -> SyntaxNode:
        """Copy a grammar tree into SyntaxNodes; spans are shifted left by ``offset``"""
        root = self._make_node(ts_root, None, data, offset)
        stack = [(ts_root, root)]
        while stack:
            ts_node, node = stack.pop()
            if self.is_atomic(ts_node.type):
                continue
            for index, ts_child in enumerate(ts_node.children):
                child = self._make_node(ts_child, ts_node.field_name_for_child(index), data, offset)
                node.children.append(child)
                stack.append((ts_child, child))
        return root

    @staticmethod
    def _make_node(ts_node, field_name: Optional[str], data: bytes, offset: int) -> SyntaxNode:
        return SyntaxNode(
            kind=ts_node.type,
            start=ts_node.start_byte - offset,
            end=ts_node.end_byte - offset,
            text=data[ts_node.start_byte:ts_node.end_byte].decode("utf-8", errors="replace"),
            is_named=ts_node.is_named,
            field_name=field_name,
            has_error=ts_node.has_error or ts_node.is_missing or ts_node.type == "ERROR",
        )

    def classify(self, leaf: SyntaxNode) -> TokenKind:
        """Token class of a leaf node"""
        if leaf.kind in self.literal_kinds:
            return TokenKind.LITERAL
        if leaf.kind in IDENTIFIER_KINDS:
            return TokenKind.IDENTIFIER
        text = leaf.text
        if leaf.kind in self.comment_kinds or leaf.kind.startswith("preproc"):
            return TokenKind.OTHER
        if text and (text[0].isalpha() or text[0] == "_") and text.replace("_", "a").isalnum():
            return TokenKind.KEYWORD
        if not leaf.is_named:
            return TokenKind.SYMBOL
        return TokenKind.OTHER

    def function_name(self, node: SyntaxNode) -> str:
        name = node.child_by_field("name")
        return name.text if name is not None else ""

    def is_docstring(self, statement: SyntaxNode) -> bool:
        return False

    def wrap(self, body: str) -> str:
        return f"{self.wrapper_prefix}{body}{self.wrapper_suffix}"


class PythonAdapter(GrammarAdapter):
    language = LanguageId.PYTHON
    module_name = "tree_sitter_python"
    function_kinds = frozenset({"function_definition"})
    literal_kinds = frozenset({
        "integer", "float", "string", "concatenated_string", "true", "false", "none",
    })
    atomic_kinds = frozenset({"string", "concatenated_string"})
    terminator_kinds = frozenset({
        "return_statement", "break_statement", "continue_statement", "raise_statement",
    })

    def is_docstring(self, statement: SyntaxNode) -> bool:
        named = statement.named_children
        return (
            statement.kind == "expression_statement"
            and len(named) == 1
            and named[0].kind in ("string", "concatenated_string")
        )


class JavaAdapter(GrammarAdapter):
    language = LanguageId.JAVA
    module_name = "tree_sitter_java"
    function_kinds = frozenset({"method_declaration", "constructor_declaration"})
    comment_kinds = frozenset({"line_comment", "block_comment"})
    literal_kinds = frozenset({
        "decimal_integer_literal", "hex_integer_literal", "octal_integer_literal",
        "binary_integer_literal", "decimal_floating_point_literal",
        "hex_floating_point_literal", "string_literal", "character_literal",
        "text_block", "true", "false", "null_literal",
    })
    atomic_kinds = frozenset({"string_literal", "character_literal", "text_block"})
    wrapper_prefix = "class __Unit {\n"
    wrapper_suffix = "\n}\n"


class CSharpAdapter(GrammarAdapter):
    language = LanguageId.CSHARP
    module_name = "tree_sitter_c_sharp"
    function_kinds = frozenset({"method_declaration", "constructor_declaration"})
    literal_kinds = frozenset({
        "integer_literal", "real_literal", "string_literal", "verbatim_string_literal",
        "raw_string_literal", "interpolated_string_expression", "character_literal",
        "boolean_literal", "null_literal",
    })
    atomic_kinds = frozenset({
        "string_literal", "verbatim_string_literal", "raw_string_literal",
        "interpolated_string_expression", "character_literal", "boolean_literal",
        "null_literal",
    })
    wrapper_prefix = "class __Unit {\n"
    wrapper_suffix = "\n}\n"


class CppAdapter(GrammarAdapter):
    language = LanguageId.CPP
    module_name = "tree_sitter_cpp"
    function_kinds = frozenset({"function_definition"})
    literal_kinds = frozenset({
        "number_literal", "string_literal", "raw_string_literal", "char_literal",
        "concatenated_string", "user_defined_literal", "system_lib_string",
        "true", "false", "null", "nullptr",
    })
    atomic_kinds = frozenset({
        "string_literal", "raw_string_literal", "char_literal", "concatenated_string",
        "system_lib_string",
    })
    block_kinds = frozenset({"compound_statement"})

    def is_atomic(self, kind: str) -> bool:
        # preprocessor directives are kept verbatim as one opaque token
        return super().is_atomic(kind) or kind.startswith("preproc_")

    def function_name(self, node: SyntaxNode) -> str:
        declarator = node.child_by_field("declarator")
        while declarator is not None:
            if declarator.kind in ("identifier", "field_identifier", "destructor_name", "operator_name"):
                return declarator.text
            if declarator.kind == "qualified_identifier":
                declarator = declarator.child_by_field("name")
                continue
            declarator = declarator.child_by_field("declarator")
        return ""


_ADAPTERS: Dict[LanguageId, GrammarAdapter] = {}
_ADAPTER_CLASSES = {
    LanguageId.PYTHON: PythonAdapter,
    LanguageId.JAVA: JavaAdapter,
    LanguageId.CSHARP: CSharpAdapter,
    LanguageId.CPP: CppAdapter,
}
_registry_lock = threading.Lock()


def get_adapter(language) -> GrammarAdapter:
    """Shared adapter for a language; parsers inside it are per thread"""
    if not isinstance(language, LanguageId):
        try:
            language = LanguageId(str(language))
        except ValueError:
            raise UnsupportedLanguage(language)
    with _registry_lock:
        if language not in _ADAPTERS:
            _ADAPTERS[language] = _ADAPTER_CLASSES[language]()
        return _ADAPTERS[language]


def all_adapters() -> List[GrammarAdapter]:
    return [get_adapter(lang) for lang in LanguageId]
