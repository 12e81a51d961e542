"""
Distiller
prune -> unify -> fuzz_names -> reassemble, producing distilled code
"""

import logging
import re
from functools import lru_cache
from typing import FrozenSet, List, Optional, Tuple

from models.distilled import (
    CLOSE_SYMBOLS, CONTROL_KEYWORDS, OPEN_SYMBOLS, OPERATORS, SEP_SYMBOLS, DistilledCode,
    DistilledToken, Literal, NameBag, StructMark, TypeRef, UnifiedKeyword,
)
from models.morpheme import MorphemeRegistry
from models.syntax import SourceFunction, SyntaxNode, SyntaxTree
from tools.error_handler import UntemplatedNode
from tools.grammar_adapters import get_adapter
from tools.identifiers import BLANK_WORD, name_words
from tools.input_validator import InputValidator
from tools.lowering import lowerer_for
from tools.morpheme_registry import default_registry
from tools.pruning import prune
from tools.syntax_frontend import extract_functions, parse, parse_function, strip_noncode

logger = logging.getLogger("distiller")


_PATTERN_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<head>[A-Za-z_]\w*)(?=\()"
    r"|(?P<slot>(?<!\w)[abc](?!\w))"
    r"|(?P<op>&&|\|\||==|!=|<=|>=|<<|>>|\*\*|//|[-+*/%<>!~&|^?])"
    r"|(?P<mark>[()\[\]{},;:])"
    r")"
)


def vocabulary(registry: Optional[MorphemeRegistry] = None) -> FrozenSet[str]:
    """Closed keyword vocabulary of distilled code"""
    registry = registry or default_registry()
    return CONTROL_KEYWORDS | OPERATORS | registry.heads()


def type_vocabulary(registry: Optional[MorphemeRegistry] = None) -> FrozenSet[str]:
    registry = registry or default_registry()
    return registry.type_names() | {"var"}


def is_type_text(text: str, registry: Optional[MorphemeRegistry] = None) -> bool:
    base = text
    while base.endswith("[]"):
        base = base[:-2]
    return base in type_vocabulary(registry)


# ---------------------------------------------------------------------------
# unify / fuzz_names
# ---------------------------------------------------------------------------

def _function_root(tree: SyntaxTree) -> SyntaxNode:
    adapter = get_adapter(tree.language)
    for node in tree.root.walk():
        if node.kind in adapter.function_kinds:
            return node
    return tree.root


def unify(pruned: SyntaxTree, language, registry: MorphemeRegistry) -> SyntaxTree:
    """Rewrite registry morphemes and control flow into the unified tree"""
    language = InputValidator.validate_language(language)
    lowerer = lowerer_for(registry, language)
    root = lowerer.lower_function(_function_root(pruned))
    root.attrs["hits"] = dict(lowerer.hits)
    return SyntaxTree(root=root, source=pruned.source, language=language)


def _bag(node: SyntaxNode, idents) -> SyntaxNode:
    bag = node.with_children([])
    bag.kind = "u_bag"
    bag.attrs = {"words": tuple(name_words(idents))}
    return bag


def _fuzz(node: SyntaxNode) -> SyntaxNode:
    if node.kind == "u_name":
        return _bag(node, [node.attrs["ident"]])
    if node.kind == "u_path":
        return _bag(node, node.attrs["idents"])
    return node.with_children([_fuzz(child) for child in node.children])


def fuzz_names(unified: SyntaxTree) -> SyntaxTree:
    """Replace every remaining identifier by the bag of its subwords"""
    return SyntaxTree(root=_fuzz(unified.root), source=unified.source, language=unified.language)


# ---------------------------------------------------------------------------
# reassemble
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def pattern_tokens(unified: str) -> Tuple[Tuple[str, str], ...]:
    """Tokens of a unified pattern as (kind, text) pairs; kind is head, slot, op or mark"""
    out = []
    position = 0
    text = unified.rstrip()
    while position < len(text):
        match = _PATTERN_TOKEN.match(text, position)
        if match is None or match.end() == position:
            raise UntemplatedNode(f"pattern {unified!r}")
        kind = match.lastgroup
        out.append((kind, match.group(kind)))
        position = match.end()
    return tuple(out)


class _Emitter:
    """Walks a fuzzed unified tree and emits template tokens"""

    def __init__(self):
        self.tokens: List[DistilledToken] = []

    def kw(self, name: str):
        self.tokens.append(UnifiedKeyword(name))

    def mark(self, symbol: str):
        self.tokens.append(StructMark.of(symbol))

    def emit(self, node: Optional[SyntaxNode]):
        if node is None:
            return
        handler = getattr(self, "_" + node.kind[2:], None) if node.kind.startswith("u_") else None
        if handler is None:
            raise UntemplatedNode(node.kind)
        handler(node)

    def emit_all(self, nodes, separator: Optional[str] = ","):
        for index, node in enumerate(nodes):
            if index and separator:
                self.mark(separator)
            self.emit(node)

    # -- declarations ------------------------------------------------------

    def _func(self, node):
        self.kw("func")
        self.emit(node.child_by_field("name"))
        self.mark("(")
        self.emit_all(node.children_by_field("param"))
        self.mark(")")
        self.emit(node.child_by_field("body"))

    def _param(self, node):
        self.kw("param")
        self.emit(node.child_by_field("type"))
        self.emit(node.child_by_field("name"))
        default = node.child_by_field("default")
        if default is not None:
            self.kw("=")
            self.emit(default)

    def _block(self, node):
        self.mark("{")
        for child in node.children:
            self.emit(child)
        self.mark("}")

    # -- statements --------------------------------------------------------

    def _decl(self, node, terminate: bool = True):
        self.kw("decl")
        self.emit(node.child_by_field("type"))
        self.emit(node.child_by_field("name"))
        value = node.child_by_field("value")
        if value is not None:
            self.kw("=")
            self.emit(value)
        if terminate:
            self.mark(";")

    def _assign(self, node, terminate: bool = True):
        self.kw("assign")
        self.emit(node.child_by_field("target"))
        self.kw(node.attrs["op"])
        self.emit(node.child_by_field("value"))
        if terminate:
            self.mark(";")

    def _header(self, node):
        """init/update list of a for header: simple statements without terminators"""
        if node.kind == "u_empty":
            return
        for index, child in enumerate(node.children):
            if index:
                self.mark(",")
            if child.kind == "u_decl":
                self._decl(child, terminate=False)
            elif child.kind == "u_assign":
                self._assign(child, terminate=False)
            elif child.kind == "u_expr_stmt":
                self.emit(child.child_by_field("expr"))
            else:
                self.emit(child)

    def _if(self, node):
        self.kw("if")
        self._guarded(node)
        for clause in node.children_by_field("elif"):
            self.kw("elif")
            self._guarded(clause)
        otherwise = node.child_by_field("else")
        if otherwise is not None:
            self.kw("else")
            self.emit(otherwise)

    def _guarded(self, node):
        self.mark("(")
        self.emit(node.child_by_field("condition"))
        self.mark(")")
        self.emit(node.child_by_field("body"))

    def _while(self, node):
        self.kw("while")
        self._guarded(node)

    def _for(self, node):
        self.kw("for")
        self.mark("(")
        self._header(node.child_by_field("init"))
        self.mark(";")
        self.emit(node.child_by_field("condition"))
        self.mark(";")
        self._header(node.child_by_field("update"))
        self.mark(")")
        self.emit(node.child_by_field("body"))

    def _foreach(self, node):
        self.kw("for")
        self.mark("(")
        self.emit(node.child_by_field("name"))
        self.mark(":")
        self.emit(node.child_by_field("iterable"))
        self.mark(")")
        self.emit(node.child_by_field("body"))

    def _return(self, node):
        self.kw("return")
        self.emit(node.child_by_field("value"))
        self.mark(";")

    def _break(self, node):
        self.kw("break")
        self.mark(";")

    def _continue(self, node):
        self.kw("continue")
        self.mark(";")

    def _expr_stmt(self, node):
        self.emit(node.child_by_field("expr"))
        self.mark(";")

    def _raw_stmt(self, node):
        before = len(self.tokens)
        for child in node.children:
            self.emit(child)
        if len(self.tokens) == before:
            return
        last = self.tokens[-1]
        if not (isinstance(last, StructMark) and last.symbol in (";", "}")):
            self.mark(";")

    # -- expressions -------------------------------------------------------

    def _call(self, node):
        self.kw("call")
        callee = node.child_by_field("callee")
        if callee is None or callee.kind == "u_empty":
            self.tokens.append(NameBag((BLANK_WORD,)))
        else:
            self.emit(callee)
        self.mark("(")
        self.emit_all(node.children_by_field("arg"))
        self.mark(")")

    def _morpheme(self, node):
        bindings = {child.field_name: child for child in node.children}
        for kind, text in pattern_tokens(node.attrs["unified"]):
            if kind == "slot":
                self.emit(bindings[text])
            elif kind in ("head", "op"):
                self.kw(text)
            else:
                self.mark(text)

    def _binary(self, node):
        self.emit(node.child_by_field("left"))
        self.kw(node.attrs["op"])
        self.emit(node.child_by_field("right"))

    def _unary(self, node):
        self.kw(node.attrs["op"])
        self.emit(node.child_by_field("operand"))

    def _paren(self, node):
        self.mark("(")
        self.emit(node.child_by_field("inner"))
        self.mark(")")

    def _subscript(self, node):
        self.emit(node.child_by_field("value"))
        self.mark("[")
        self.emit(node.child_by_field("index"))
        self.mark("]")

    def _ternary(self, node):
        self.emit(node.child_by_field("condition"))
        self.kw("?")
        self.emit(node.child_by_field("consequence"))
        self.mark(":")
        self.emit(node.child_by_field("alternative"))

    def _seq(self, node):
        self.emit_all(node.children)

    def _literal(self, node):
        self.tokens.append(Literal(node.attrs["text"]))

    def _bag(self, node):
        self.tokens.append(NameBag(tuple(node.attrs["words"])))

    def _typeref(self, node):
        self.tokens.append(TypeRef(node.attrs["text"]))

    def _raw(self, node):
        for child in node.children:
            self.emit(child)

    def _sym(self, node):
        text = node.attrs["text"]
        if text in OPEN_SYMBOLS or text in CLOSE_SYMBOLS or text in SEP_SYMBOLS:
            self.mark(text)
        elif text in OPERATORS:
            self.kw(text)

    def _empty(self, node):
        pass

    def _name(self, node):
        # only reached when reassembling an unfuzzed tree
        self.tokens.append(NameBag(tuple(name_words([node.attrs["ident"]]))))

    def _path(self, node):
        self.tokens.append(NameBag(tuple(name_words(node.attrs["idents"]))))


def reassemble(tree: SyntaxTree) -> DistilledCode:
    """Serialize the fuzzed unified tree through the string templates"""
    emitter = _Emitter()
    emitter.emit(tree.root)
    hits = tree.root.attrs.get("hits", {})
    return DistilledCode(
        tokens=emitter.tokens,
        source_language=tree.language,
        annotations={"unified": hits.get("unified", 0), "fuzzy": hits.get("fuzzy", 0)},
    )


def distill(fn: SourceFunction, registry: Optional[MorphemeRegistry] = None) -> DistilledCode:
    registry = registry or default_registry()
    cleaned = strip_noncode(fn)
    fn_node = parse_function(cleaned)
    tree = SyntaxTree(root=fn_node, source=cleaned.body, language=fn.language)

    code = reassemble(fuzz_names(unify(prune(tree, fn.language), fn.language, registry)))
    logger.debug(f"Distilled {fn.language.value} function {fn.name!r} into {len(code)} tokens")
    return code


def canonicalize(code: DistilledCode) -> DistilledCode:
    """Sort the words of every bag; idempotent"""
    return DistilledCode(
        tokens=[t.canonical() if isinstance(t, NameBag) else t for t in code.tokens],
        source_language=code.source_language,
        annotations=dict(code.annotations),
    )


def distill_text(source: str, language, registry: Optional[MorphemeRegistry] = None) -> List[DistilledCode]:
    """Distill every function found in a source text"""
    language = InputValidator.validate_language(language)
    tree = parse(source, language)
    return [distill(fn, registry) for fn in extract_functions(tree, source, language)]


