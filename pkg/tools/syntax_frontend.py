"""
Syntax Frontend
Parsing, function extraction, corpus preprocessing and tokenization
"""

import logging
import textwrap
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from models.syntax import LanguageId, SourceFunction, SyntaxNode, SyntaxTree, Token, TokenKind
from tools.error_handler import IoFailure, ParseFailure, ReparseFailure
from tools.grammar_adapters import GrammarAdapter, get_adapter
from tools.input_validator import InputValidator

logger = logging.getLogger("syntax_frontend")

FALSE_LITERALS = frozenset({"false", "False", "0"})
MAX_STRIP_PASSES = 16


def parse(source: str, language) -> SyntaxTree:
    """Parse source text; grammar errors set the tree's error flag instead of raising"""
    adapter = get_adapter(InputValidator.validate_language(language))
    if not isinstance(source, str) or not source:
        raise ParseFailure("Source must be non-empty text")
    root = adapter.parse_bytes(source.encode("utf-8"))
    return SyntaxTree(root=root, source=source, language=adapter.language)


def parse_file(path, language=None) -> SyntaxTree:
    language = InputValidator.infer_language(str(path), language)
    try:
        source = Path(path).read_bytes().decode("utf-8", errors="replace")
    except OSError as e:
        raise IoFailure(str(path), str(e))
    if not source.strip():
        raise ParseFailure("File is empty", str(path))
    return parse(source, language)


def _function_nodes(root: SyntaxNode, adapter: GrammarAdapter) -> List[SyntaxNode]:
    """Outermost function definitions; nested ones stay inside their parent"""
    found = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.kind in adapter.function_kinds:
            found.append(node)
            continue
        stack.extend(reversed(node.children))
    return found


def _line_start(data: bytes, offset: int) -> int:
    return data.rfind(b"\n", 0, offset) + 1


def extract_functions(tree: SyntaxTree, source: str, language, origin_path: str = "<text>",
                      on_skip: Optional[Callable[[str], None]] = None) -> List[SourceFunction]:
    """Functions of a parsed file; broken ones are reported to ``on_skip`` and left out"""
    adapter = get_adapter(InputValidator.validate_language(language))
    data = source.encode("utf-8")
    functions = []

    for node in _function_nodes(tree.root, adapter):
        if node.has_error:
            logger.debug(f"Skipping function with parse errors at {origin_path}:{node.start}")
            if on_skip is not None:
                on_skip("function_error")
            continue

        body = data[node.start:node.end].decode("utf-8", errors="replace")
        if adapter.language is LanguageId.PYTHON:
            # class members are indented; re-anchor at column 0
            column = node.start - _line_start(data, node.start)
            body = textwrap.dedent(" " * column + body)
            body = body.lstrip(" ")

        fn = SourceFunction(
            language=adapter.language,
            name=adapter.function_name(node),
            body=body,
            origin_path=origin_path,
            origin_span=(node.start, node.end),
        )
        try:
            fn_node = parse_function(fn)
        except ParseFailure:
            logger.debug(f"Function {fn.name} does not reparse standalone, skipped")
            if on_skip is not None:
                on_skip("function_error")
            continue
        fn.tokens = _tokens_of(fn_node, fn.body, adapter)
        functions.append(fn)

    return functions


def parse_function(fn: SourceFunction) -> SyntaxNode:
    """Re-parse a function (inside its wrapper) and return the function node.

    Spans of the returned tree are relative to ``fn.body``.
    """
    adapter = get_adapter(fn.language)
    prefix = adapter.wrapper_prefix.encode("utf-8")
    data = adapter.wrap(fn.body).encode("utf-8")
    root = adapter.parse_bytes(data, offset=len(prefix))
    if root.has_error:
        raise ParseFailure(f"Function {fn.name or '<anonymous>'} has syntax errors", fn.origin_path)
    nodes = _function_nodes(root, adapter)
    if not nodes:
        raise ParseFailure(f"No function definition found in {fn.name or '<anonymous>'}", fn.origin_path)
    return nodes[0]


def _block_depth_map(fn_node: SyntaxNode, adapter: GrammarAdapter) -> dict:
    """Leaf start offset -> number of enclosing blocks (Python indentation depth)"""
    depths = {}
    stack: List[Tuple[SyntaxNode, int]] = [(fn_node, 0)]
    while stack:
        node, depth = stack.pop()
        if not node.children:
            depths[id(node)] = depth
            continue
        inner = depth + 1 if node.kind in adapter.block_kinds else depth
        for child in node.children:
            stack.append((child, inner))
    return depths


def _tokens_of(fn_node: SyntaxNode, body: str, adapter: GrammarAdapter) -> List[Token]:
    data = body.encode("utf-8")
    depths = _block_depth_map(fn_node, adapter)
    tokens = []
    for leaf in fn_node.leaves():
        if leaf.start == leaf.end:
            continue
        line = data.count(b"\n", 0, leaf.start)
        tokens.append(Token(
            text=leaf.text,
            kind=adapter.classify(leaf),
            line=line,
            depth=depths.get(id(leaf), 0),
            end_line=line + leaf.text.count("\n"),
        ))
    return tokens


def tokenize(fn: SourceFunction) -> List[Token]:
    if fn.tokens:
        return list(fn.tokens)
    adapter = get_adapter(fn.language)
    return _tokens_of(parse_function(fn), fn.body, adapter)


def tokenize_text(source: str, language) -> List[Token]:
    """Leaf tokens of arbitrary source text (used where no function boundary exists)"""
    tree = parse(source, language)
    adapter = get_adapter(tree.language)
    return _tokens_of(tree.root, source, adapter)


def detokenize(tokens: List[Token], language) -> str:
    """Inverse of tokenize up to whitespace.

    Python keeps one output line per source line, indented by block depth;
    the other languages are space-joined, with line breaks after line
    comments and preprocessor directives.
    """
    language = InputValidator.validate_language(language)
    if not tokens:
        return ""

    if language is LanguageId.PYTHON:
        lines: List[str] = []
        current: List[str] = []
        prev: Optional[Token] = None
        for token in tokens:
            if prev is not None and token.line > prev.end_line:
                lines.append(" ".join(current))
                current = []
            if not current:
                current.append("    " * token.depth + token.text)
            else:
                current.append(token.text)
            prev = token
        lines.append(" ".join(current))
        return "\n".join(lines) + "\n"

    parts: List[str] = []
    for token in tokens:
        if token.kind is TokenKind.OTHER and token.text.startswith("#"):
            parts.append("\n" + token.text + "\n")
        elif token.kind is TokenKind.OTHER and token.text.startswith("//"):
            parts.append(token.text + "\n")
        else:
            parts.append(token.text)
    return " ".join(parts)


def _condition_is_false(node: SyntaxNode) -> bool:
    condition = node.child_by_field("condition")
    while condition is not None and condition.kind in (
        "parenthesized_expression", "condition_clause",
    ):
        inner = condition.child_by_field("value") or (
            condition.named_children[0] if condition.named_children else None
        )
        condition = inner
    return condition is not None and not condition.children and condition.text in FALSE_LITERALS


def _statements(block: SyntaxNode, adapter: GrammarAdapter) -> List[SyntaxNode]:
    return [c for c in block.named_children if c.kind not in adapter.comment_kinds]


def _column(data: bytes, offset: int) -> int:
    return offset - (data.rfind(b"\n", 0, offset) + 1)


def _live_branch(node: SyntaxNode, adapter: GrammarAdapter, data: bytes) -> Optional[Tuple[int, int, str]]:
    """Replacement of a literal-false ``if``/``while`` by the branch that can run, if it has one"""
    alternatives = [
        c for c in node.children_by_field("alternative") if c.kind not in adapter.comment_kinds
    ]
    if not alternatives:
        return None
    alternative = alternatives[0]

    if adapter.language is LanguageId.PYTHON:
        if alternative.kind == "elif_clause":
            # the first elif takes over as the head of the chain
            return (node.start, alternative.start + len("elif"), "if")
        body = alternative.child_by_field("body")
        statements = _statements(body, adapter) if body is not None else []
        if not statements:
            return None
        start = statements[0].start
        shift = _column(data, start) - _column(data, node.start)
        lines = data[start:body.end].decode("utf-8").split("\n")
        dedented = [lines[0]] + [
            line[shift:] if not line[:shift].strip() else line.lstrip() for line in lines[1:]
        ]
        return (node.start, node.end, "\n".join(dedented))

    if alternative.kind == "else_clause":
        inner = [c for c in alternative.named_children if c.kind not in adapter.comment_kinds]
        if not inner:
            return None
        alternative = inner[0]
    if alternative.kind in adapter.block_kinds and len(alternative.children) >= 2:
        opening, closing = alternative.children[0], alternative.children[-1]
        return (node.start, node.end, " " + data[opening.end:closing.start].decode("utf-8") + " ")
    return (node.start, node.end, " " + data[alternative.start:alternative.end].decode("utf-8") + " ")


def _noncode_spans(fn_node: SyntaxNode, adapter: GrammarAdapter, data: bytes) -> List[Tuple[int, int, str]]:
    """Spans to delete, with their replacement text"""
    deletions: List[Tuple[int, int, str]] = []
    python = adapter.language is LanguageId.PYTHON

    for node in fn_node.walk():
        if node.kind in adapter.comment_kinds:
            deletions.append((node.start, node.end, " "))
            continue

        if node.kind in ("if_statement", "while_statement") and _condition_is_false(node):
            live = _live_branch(node, adapter, data)
            deletions.append(live if live is not None else (node.start, node.end, " "))
            continue

        if node.kind not in adapter.block_kinds:
            continue

        statements = _statements(node, adapter)
        if python and statements and adapter.is_docstring(statements[0]):
            deletions.append((statements[0].start, statements[0].end, " "))

        for index, statement in enumerate(statements):
            if statement.kind in adapter.terminator_kinds:
                for dead in statements[index + 1:]:
                    deletions.append((dead.start, dead.end, " "))
                break

    if python:
        deletions = _keep_python_blocks_nonempty(fn_node, adapter, deletions)
    return deletions


def _covered(node: SyntaxNode, deletions) -> bool:
    return any(
        start <= node.start and node.end <= end and not replacement.strip()
        for start, end, replacement in deletions
    )


def _keep_python_blocks_nonempty(fn_node, adapter, deletions):
    fixed = list(deletions)
    for block in fn_node.walk():
        if block.kind != "block":
            continue
        statements = _statements(block, adapter)
        if statements and all(_covered(s, deletions) for s in statements):
            first = statements[0]
            fixed = [d for d in fixed if not (d[0] == first.start and d[1] == first.end)]
            fixed.append((first.start, first.end, "pass"))
    return fixed


def _apply(data: bytes, deletions: List[Tuple[int, int, str]]) -> bytes:
    out = bytearray()
    cursor = 0
    for start, end, replacement in sorted(deletions, key=lambda d: (d[0], -d[1])):
        if start < cursor:
            # nested in an earlier deletion
            continue
        out += data[cursor:start]
        out += replacement.encode("utf-8")
        cursor = end
    out += data[cursor:]
    return bytes(out)


def strip_noncode(fn: SourceFunction) -> SourceFunction:
    """Remove comments, docstrings and dead code; iterates to a fixpoint"""
    adapter = get_adapter(fn.language)
    current = fn
    fn_node = parse_function(current)

    for _ in range(MAX_STRIP_PASSES):
        data = current.body.encode("utf-8")
        deletions = _noncode_spans(fn_node, adapter, data)
        if not deletions:
            break
        body = _apply(data, deletions).decode("utf-8")
        candidate = current.with_body(body, [])
        try:
            fn_node = parse_function(candidate)
        except ParseFailure:
            raise ReparseFailure("strip_noncode", body)
        current = candidate

    current.tokens = _tokens_of(fn_node, current.body, adapter)
    return current
