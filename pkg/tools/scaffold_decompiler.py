"""
Scaffold Decompiler
Rule-based inverse of the distiller: distilled code back to a compilable
function scaffold in a target language.

Control flow, operators, types and registry morphemes are restored exactly.
Names come back in the target's naming style; fuzzy calls come back as calls
of a function named after their bag. Anything the target cannot express
raises instead of producing text that does not parse.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from models.distilled import (
    MASK, MarkKind, DistilledCode, DistilledToken, NameBag, RenderContext,
    RoundTripReport, StructMark, TypeRef, UnifiedKeyword,
)
from models.morpheme import SLOT_PATTERN, Category, MorphemeRegistry
from models.syntax import LanguageId, SourceFunction
from tools.distilled_codec import serialize
from tools.distiller import canonicalize, distill, pattern_tokens
from tools.error_handler import MalformedDistilled, ParseFailure, UnrenderableMorpheme
from tools.identifiers import render_name
from tools.input_validator import InputValidator
from tools.morpheme_registry import (
    default_registry, direct_call_slots, instantiate, is_absent, reverse_rule,
)
from tools.syntax_frontend import extract_functions, parse

logger = logging.getLogger("scaffold_decompiler")

ASSIGN_OPERATORS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="})
# operators that bind looser than a comparison; a range() stop must not contain them
_LOOSE_OPERATORS = frozenset({"&&", "||", "?", "<", ">", "<=", ">=", "==", "!=", "in"})
_RANGE_COMPARISONS = frozenset({"<", ">", "<=", ">="})

FILE_EXTENSIONS = {
    LanguageId.JAVA: ".java",
    LanguageId.CSHARP: ".cs",
    LanguageId.CPP: ".cpp",
    LanguageId.PYTHON: ".py",
}


# ---------------------------------------------------------------------------
# Parsed forms
# ---------------------------------------------------------------------------

@dataclass
class Op:
    text: str


@dataclass
class Name:
    words: Tuple[str, ...]


@dataclass
class Lit:
    text: str


@dataclass
class TypeAtom:
    text: str


@dataclass
class Expr:
    items: List["Item"]

    @property
    def is_compound(self) -> bool:
        return len(self.items) > 1 or any(isinstance(i, Ternary) for i in self.items)


@dataclass
class Paren:
    inner: Expr


@dataclass
class Call:
    words: Tuple[str, ...]
    args: List[Expr]


@dataclass
class Morph:
    unified: str
    args: Dict[str, Expr]


@dataclass
class Sub:
    value: "Item"
    index: Expr


@dataclass
class Ternary:
    condition: Expr
    consequence: Expr
    alternative: Expr


Item = Union[Op, Name, Lit, TypeAtom, Paren, Call, Morph, Sub, Ternary]
TypeSpec = Union[TypeAtom, Name]


@dataclass
class DBlock:
    statements: List["Statement"] = field(default_factory=list)


@dataclass
class DDecl:
    type: TypeSpec
    name: Tuple[str, ...]
    value: Optional[Expr] = None


@dataclass
class DAssign:
    target: Expr
    op: str
    value: Expr


@dataclass
class DIf:
    branches: List[Tuple[Expr, DBlock]]
    otherwise: Optional[DBlock] = None


@dataclass
class DWhile:
    condition: Expr
    body: DBlock


@dataclass
class DFor:
    init: List["Statement"]
    condition: Optional[Expr]
    update: List["Statement"]
    body: DBlock


@dataclass
class DForeach:
    name: Tuple[str, ...]
    iterable: Expr
    body: DBlock


@dataclass
class DReturn:
    value: Optional[Expr] = None


@dataclass
class DJump:
    keyword: str


@dataclass
class DExprStmt:
    expr: Expr


@dataclass
class DParam:
    type: TypeSpec
    name: Tuple[str, ...]
    default: Optional[Expr] = None


@dataclass
class DFunc:
    name: Tuple[str, ...]
    params: List[DParam]
    body: DBlock


Statement = Union[DBlock, DDecl, DAssign, DIf, DWhile, DFor, DForeach, DReturn, DJump, DExprStmt]


# ---------------------------------------------------------------------------
# Parsing distilled tokens
# ---------------------------------------------------------------------------

def _is_mark(token: Optional[DistilledToken], symbol: str) -> bool:
    return isinstance(token, StructMark) and token.symbol == symbol


def _is_kw(token: Optional[DistilledToken], name: str) -> bool:
    return isinstance(token, UnifiedKeyword) and token.name == name


def _pattern_matches(piece: Tuple[str, str], token: DistilledToken) -> bool:
    kind, text = piece
    if kind == "mark":
        return _is_mark(token, text)
    return _is_kw(token, text)


class _Parser:
    """Recursive descent over the statement templates of distilled code"""

    def __init__(self, tokens: Sequence[DistilledToken], registry: MorphemeRegistry, offset: int = 0):
        self.tokens = list(tokens)
        self.registry = registry
        self.pos = 0
        self.offset = offset
        self.heads: Dict[str, str] = {}
        for rule in registry.rules:
            if rule.head and rule.category is not Category.DATA_TYPE:
                self.heads.setdefault(rule.head, rule.unified)

    # -- cursor ------------------------------------------------------------

    def peek(self, ahead: int = 0) -> Optional[DistilledToken]:
        index = self.pos + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def advance(self) -> DistilledToken:
        token = self.peek()
        if token is None:
            self.fail("unexpected end of input")
        self.pos += 1
        return token

    def fail(self, reason: str):
        raise MalformedDistilled(reason, self.offset + self.pos)

    def expect_mark(self, symbol: str):
        if not _is_mark(self.peek(), symbol):
            self.fail(f"expected {symbol!r}")
        self.pos += 1

    def expect_kw(self, name: str):
        if not _is_kw(self.peek(), name):
            self.fail(f"expected keyword {name!r}")
        self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    # -- declarations ------------------------------------------------------

    def function(self) -> DFunc:
        self.expect_kw("func")
        name = self.bag()
        self.expect_mark("(")
        params: List[DParam] = []
        while not _is_mark(self.peek(), ")"):
            if params:
                self.expect_mark(",")
            params.append(self.param())
        self.expect_mark(")")
        body = self.block()
        if not self.at_end():
            self.fail("tokens after the function body")
        return DFunc(name, params, body)

    def bag(self) -> Tuple[str, ...]:
        token = self.advance()
        if not isinstance(token, NameBag):
            self.pos -= 1
            self.fail("expected a name")
        return token.words

    def type_spec(self) -> TypeSpec:
        token = self.advance()
        if isinstance(token, TypeRef):
            return TypeAtom(token.text)
        if isinstance(token, NameBag):
            return Name(token.words)
        self.pos -= 1
        self.fail("expected a type")

    def param(self) -> DParam:
        self.expect_kw("param")
        spec = self.type_spec()
        name = self.bag()
        default = None
        if _is_kw(self.peek(), "="):
            self.pos += 1
            default = self.required(frozenset({","}))
        return DParam(spec, name, default)

    def block(self) -> DBlock:
        self.expect_mark("{")
        statements: List[Statement] = []
        while not _is_mark(self.peek(), "}"):
            if self.at_end():
                self.fail("unterminated block")
            statements.append(self.statement())
        self.expect_mark("}")
        return DBlock(statements)

    # -- statements --------------------------------------------------------

    def statement(self) -> Statement:
        token = self.peek()
        if _is_mark(token, "{"):
            return self.block()
        if isinstance(token, UnifiedKeyword):
            handler = {
                "decl": self.decl, "assign": self.assign, "if": self.if_statement,
                "while": self.while_statement, "for": self.for_statement,
                "return": self.return_statement,
            }.get(token.name)
            if handler is not None:
                return handler()
            if token.name in ("break", "continue"):
                self.pos += 1
                self.expect_mark(";")
                return DJump(token.name)
        expr = self.required(frozenset({";"}))
        self.expect_mark(";")
        return DExprStmt(expr)

    def decl(self, terminated: bool = True) -> DDecl:
        self.expect_kw("decl")
        spec = self.type_spec()
        name = self.bag()
        value = None
        if _is_kw(self.peek(), "="):
            self.pos += 1
            value = self.required(frozenset({";", ","}))
        if terminated:
            self.expect_mark(";")
        return DDecl(spec, name, value)

    def assign(self, terminated: bool = True) -> DAssign:
        self.expect_kw("assign")
        target = self.required(frozenset({";", ","}), stop_at_assign=True)
        op = self.advance()
        if not isinstance(op, UnifiedKeyword) or op.name not in ASSIGN_OPERATORS:
            self.fail("expected an assignment operator")
        value = self.required(frozenset({";", ","}))
        if terminated:
            self.expect_mark(";")
        return DAssign(target, op.name, value)

    def guard(self) -> Expr:
        self.expect_mark("(")
        condition = self.required(frozenset())
        self.expect_mark(")")
        return condition

    def if_statement(self) -> DIf:
        self.expect_kw("if")
        branches = [(self.guard(), self.block())]
        while _is_kw(self.peek(), "elif"):
            self.pos += 1
            branches.append((self.guard(), self.block()))
        otherwise = None
        if _is_kw(self.peek(), "else"):
            self.pos += 1
            otherwise = self.block()
        return DIf(branches, otherwise)

    def while_statement(self) -> DWhile:
        self.expect_kw("while")
        return DWhile(self.guard(), self.block())

    def for_statement(self) -> Union[DFor, DForeach]:
        self.expect_kw("for")
        self.expect_mark("(")
        if isinstance(self.peek(), NameBag) and _is_mark(self.peek(1), ":"):
            name = self.bag()
            self.pos += 1
            iterable = self.required(frozenset())
            self.expect_mark(")")
            return DForeach(name, iterable, self.block())

        init = self.header(";")
        self.expect_mark(";")
        condition = None
        if not _is_mark(self.peek(), ";"):
            condition = self.required(frozenset({";"}))
        self.expect_mark(";")
        update = self.header(")")
        self.expect_mark(")")
        return DFor(init, condition, update, self.block())

    def header(self, end: str) -> List[Statement]:
        items: List[Statement] = []
        while not _is_mark(self.peek(), end):
            if items:
                self.expect_mark(",")
            if _is_kw(self.peek(), "decl"):
                items.append(self.decl(terminated=False))
            elif _is_kw(self.peek(), "assign"):
                items.append(self.assign(terminated=False))
            else:
                items.append(DExprStmt(self.required(frozenset({",", ";"}))))
        return items

    def return_statement(self) -> DReturn:
        self.expect_kw("return")
        value = None
        if not _is_mark(self.peek(), ";"):
            value = self.required(frozenset({";"}))
        self.expect_mark(";")
        return DReturn(value)

    # -- expressions -------------------------------------------------------

    def required(self, stops: FrozenSet[str], stop_at_assign: bool = False) -> Expr:
        expr = self.expr(stops, stop_at_assign)
        if not expr.items:
            self.fail("expected an expression")
        return expr

    def expr(self, stops: FrozenSet[str], stop_at_assign: bool = False) -> Expr:
        items: List[Item] = []
        while not self.at_end():
            token = self.peek()
            if isinstance(token, StructMark):
                if token.kind is MarkKind.CLOSE:
                    break
                if token.kind is MarkKind.SEP:
                    if token.symbol in stops:
                        break
                    self.fail(f"unexpected {token.symbol!r}")
                if token.symbol == "(":
                    self.pos += 1
                    inner = self.required(frozenset())
                    self.expect_mark(")")
                    items.append(Paren(inner))
                elif token.symbol == "[":
                    if not items or isinstance(items[-1], Op):
                        self.fail("subscript without a value")
                    self.pos += 1
                    index = self.required(frozenset())
                    self.expect_mark("]")
                    items[-1] = Sub(items[-1], index)
                else:
                    self.fail("block inside an expression")
            elif isinstance(token, UnifiedKeyword):
                name = token.name
                if name == "?":
                    self.pos += 1
                    if not items:
                        self.fail("conditional without a condition")
                    consequence = self.required(stops | {":"})
                    self.expect_mark(":")
                    alternative = self.required(stops, stop_at_assign)
                    return Expr([Ternary(Expr(items), consequence, alternative)])
                if stop_at_assign and name in ASSIGN_OPERATORS:
                    break
                if name == MASK:
                    self.fail("mask token in distilled code")
                if name == "call":
                    items.append(self.call())
                elif name in self.heads and _is_mark(self.peek(1), "("):
                    items.append(self.morpheme())
                elif name in ASSIGN_OPERATORS or name in ("func", "param", "decl", "assign", "if",
                                                          "elif", "else", "while", "for", "return",
                                                          "break", "continue"):
                    self.fail(f"unexpected keyword {name!r}")
                else:
                    self.pos += 1
                    items.append(Op(name))
            elif isinstance(token, NameBag):
                self.pos += 1
                items.append(Name(token.words))
            elif isinstance(token, TypeRef):
                self.pos += 1
                items.append(TypeAtom(token.text))
            else:
                self.pos += 1
                items.append(Lit(token.text))
        return Expr(items)

    def call(self) -> Call:
        self.expect_kw("call")
        words = self.bag()
        self.expect_mark("(")
        args: List[Expr] = []
        while not _is_mark(self.peek(), ")"):
            if args:
                self.expect_mark(",")
            args.append(self.required(frozenset({","})))
        self.expect_mark(")")
        return Call(words, args)

    def _enclosed(self) -> List[DistilledToken]:
        """Tokens up to the ``)`` matching an already consumed ``(``"""
        start = self.pos
        depth = 0
        while not self.at_end():
            token = self.peek()
            if isinstance(token, StructMark) and token.kind is MarkKind.OPEN:
                depth += 1
            elif isinstance(token, StructMark) and token.kind is MarkKind.CLOSE:
                if depth == 0:
                    inner = self.tokens[start:self.pos]
                    self.pos += 1
                    return inner
                depth -= 1
            self.pos += 1
        self.fail("unterminated morpheme")

    def morpheme(self) -> Morph:
        head = self.advance().name
        unified = self.heads[head]
        self.expect_mark("(")
        start = self.pos
        inner = self._enclosed()
        pattern = pattern_tokens(unified)[2:-1]

        spans: Dict[str, Tuple[int, int]] = {}
        cursor = 0
        index = 0
        while index < len(pattern):
            kind, text = pattern[index]
            if kind != "slot":
                if cursor >= len(inner) or not _pattern_matches(pattern[index], inner[cursor]):
                    self.fail(f"{head}( does not fit {unified!r}")
                cursor += 1
                index += 1
                continue
            if index + 1 == len(pattern):
                spans[text] = (cursor, len(inner))
                cursor = len(inner)
                index += 1
                continue
            literal = pattern[index + 1]
            positions = self._top_level(inner, cursor, literal)
            if not positions:
                self.fail(f"{head}( does not fit {unified!r}")
            end = positions[0] if literal == ("mark", ",") else positions[-1]
            spans[text] = (cursor, end)
            cursor = end + 1
            index += 2
        if cursor != len(inner):
            self.fail(f"{head}( does not fit {unified!r}")

        args: Dict[str, Expr] = {}
        for slot, (begin, end) in spans.items():
            sub = _Parser(inner[begin:end], self.registry, self.offset + start + begin)
            args[slot] = sub.required(frozenset())
            if not sub.at_end():
                sub.fail("unbalanced morpheme argument")
        return Morph(unified, args)

    @staticmethod
    def _top_level(tokens: List[DistilledToken], start: int, literal: Tuple[str, str]) -> List[int]:
        positions = []
        depth = 0
        for index in range(start, len(tokens)):
            token = tokens[index]
            if isinstance(token, StructMark) and token.kind is MarkKind.OPEN:
                depth += 1
            elif isinstance(token, StructMark) and token.kind is MarkKind.CLOSE:
                depth -= 1
            elif depth == 0 and _pattern_matches(literal, token):
                positions.append(index)
        return positions


def parse_distilled(code: DistilledCode, registry: Optional[MorphemeRegistry] = None) -> DFunc:
    return _Parser(code.tokens, registry or default_registry()).function()


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_INFIX = re.compile(r"a\s*(\S+?)\s*b")
_PREFIX = re.compile(r"(\S+?)\s*a")
_ATOMIC_SURFACE = re.compile(r"[\w.]*\(.*\)|[\w.]+\(\)|\w+(?:\.\w+)+")


def operator_map(registry: MorphemeRegistry, target: LanguageId) -> Dict[str, str]:
    """Unified operator -> target spelling, from infix and prefix registry rows"""
    mapping: Dict[str, str] = {}
    for rule in registry.rules_for(target, Category.OPERATOR):
        for shape in (_INFIX, _PREFIX):
            unified = shape.fullmatch(rule.unified)
            surface = shape.fullmatch(rule.surface)
            if unified and surface and unified.group(1) != surface.group(1):
                mapping[unified.group(1)] = surface.group(1)
    return mapping


def _atomic(surface: str) -> bool:
    """Whether a rendered morpheme needs no parentheses inside a larger expression"""
    if not _ATOMIC_SURFACE.fullmatch(surface):
        return False
    depth = 0
    for char in surface:
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        elif depth == 0 and char not in "._" and not char.isalnum():
            return False
    return True


def _mentions(statements: Sequence[Statement], words: Tuple[str, ...]) -> bool:
    """Whether any statement assigns the name ``words``"""
    for stmt in statements:
        if isinstance(stmt, DAssign) and stmt.target.items and stmt.target.items[0] == Name(words):
            return True
        children: List[Statement] = []
        if isinstance(stmt, DBlock):
            children = stmt.statements
        elif isinstance(stmt, DIf):
            children = [b for _, b in stmt.branches] + ([stmt.otherwise] if stmt.otherwise else [])
        elif isinstance(stmt, (DWhile, DForeach)):
            children = [stmt.body]
        elif isinstance(stmt, DFor):
            children = stmt.init + stmt.update + [stmt.body]
        if _mentions(children, words):
            return True
    return False


def _update_before_continue(statements: Sequence[Statement], update: List[Statement]) -> List[Statement]:
    """Loop body with ``update`` run ahead of each ``continue`` that targets this loop"""
    out: List[Statement] = []
    for stmt in statements:
        if isinstance(stmt, DJump) and stmt.keyword == "continue":
            out.append(DBlock(list(update) + [stmt]))
        elif isinstance(stmt, DBlock):
            out.append(DBlock(_update_before_continue(stmt.statements, update)))
        elif isinstance(stmt, DIf):
            branches = [(condition, DBlock(_update_before_continue(block.statements, update)))
                        for condition, block in stmt.branches]
            otherwise = stmt.otherwise
            if otherwise is not None:
                otherwise = DBlock(_update_before_continue(otherwise.statements, update))
            out.append(DIf(branches, otherwise))
        else:
            # nested loops own their continues
            out.append(stmt)
    return out


class Renderer:
    """Target-neutral part of rendering; subclasses fill in the syntax"""

    target: LanguageId
    var_keyword = "var"
    generic_argument = "Object"
    supports_arrays = True
    literal_aliases: Dict[str, str] = {}

    def __init__(self, registry: MorphemeRegistry):
        self.registry = registry
        self.context = RenderContext.for_target(self.target)
        self.operators = operator_map(registry, self.target)

    # -- names, literals, types -------------------------------------------

    def name(self, words: Sequence[str], as_type: bool = False) -> str:
        return render_name(words, self.target, as_type)

    def literal(self, text: str) -> str:
        return self.literal_aliases.get(text, text)

    def _type_rule(self, base: str) -> str:
        rule = reverse_rule(self.registry, f"{base} a", self.target)
        if rule is None or rule.category is not Category.DATA_TYPE:
            if is_absent(self.registry, f"{base} a", self.target):
                raise UnrenderableMorpheme(base, self.target.value)
            raise MalformedDistilled(f"unknown type {base!r}")
        return rule.surface

    def base_type(self, base: str) -> str:
        if base == "var":
            return self.var_keyword
        surface = SLOT_PATTERN.sub("", self._type_rule(base)).strip().replace("std::", "")
        if surface.endswith("<>"):
            arity = 2 if base == "map<>" else 1
            surface = surface[:-2] + "<" + ", ".join([self.generic_argument] * arity) + ">"
        return surface

    def type_text(self, spec: TypeSpec) -> str:
        if isinstance(spec, Name):
            return self.name(spec.words, as_type=True)
        base = spec.text
        dims = 0
        while base.endswith("[]"):
            base = base[:-2]
            dims += 1
        if dims and not self.supports_arrays:
            raise UnrenderableMorpheme(spec.text, self.target.value)
        return self.base_type(base) + "[]" * dims

    # -- expressions -------------------------------------------------------

    def expr(self, expr: Expr) -> str:
        compound = len(expr.items) > 1
        return " ".join(self.item(item, compound) for item in expr.items)

    def item(self, item: Item, compound: bool = False) -> str:
        if isinstance(item, Op):
            return self.operators.get(item.text, item.text)
        if isinstance(item, Name):
            return self.name(item.words)
        if isinstance(item, Lit):
            return self.literal(item.text)
        if isinstance(item, TypeAtom):
            return self.type_text(item)
        if isinstance(item, Paren):
            return f"({self.expr(item.inner)})"
        if isinstance(item, Call):
            return f"{self.name(item.words)}({', '.join(self.expr(a) for a in item.args)})"
        if isinstance(item, Sub):
            return f"{self.item(item.value)}[{self.expr(item.index)}]"
        if isinstance(item, Ternary):
            text = self.ternary(item)
            return f"({text})" if compound else text
        text = self.morpheme(item)
        return text if not compound or _atomic(text) else f"({text})"

    def morpheme(self, morph: Morph) -> str:
        rule = reverse_rule(self.registry, morph.unified, self.target)
        if rule is None:
            raise UnrenderableMorpheme(morph.unified, self.target.value)
        direct = direct_call_slots(rule.surface)
        args = {}
        for slot, expr in morph.args.items():
            text = self.expr(expr)
            if slot not in direct and expr.is_compound:
                text = f"({text})"
            args[slot] = text
        return instantiate(rule.surface, args)

    def ternary(self, node: Ternary) -> str:
        return f"{self.expr(node.condition)} ? {self.expr(node.consequence)} : {self.expr(node.alternative)}"

    # -- statements --------------------------------------------------------

    def lines(self, statements: Sequence[Statement], depth: int) -> List[str]:
        out: List[str] = []
        for stmt in statements:
            out.extend(self.statement(stmt, depth))
        return out

    def pad(self, depth: int) -> str:
        return self.context.indent * depth

    def statement(self, stmt: Statement, depth: int) -> List[str]:
        raise NotImplementedError

    def function(self, fn: DFunc) -> str:
        raise NotImplementedError

    @staticmethod
    def returns_value(statements: Sequence[Statement]) -> bool:
        for stmt in statements:
            if isinstance(stmt, DReturn) and stmt.value is not None:
                return True
            nested: List[Statement] = []
            if isinstance(stmt, DBlock):
                nested = stmt.statements
            elif isinstance(stmt, DIf):
                nested = [b for _, b in stmt.branches] + ([stmt.otherwise] if stmt.otherwise else [])
            elif isinstance(stmt, (DWhile, DFor, DForeach)):
                nested = [stmt.body]
            if Renderer.returns_value(nested):
                return True
        return False


class BraceRenderer(Renderer):
    """Shared syntax of the curly-brace targets"""

    value_return_type = "Object"
    untyped = "Object"
    member_indent = 0
    foreach_keyword = "for"
    foreach_separator = ":"

    def explicit_type(self, spec: TypeSpec) -> str:
        """Type text where ``var`` cannot be inferred (parameters, uninitialized locals)"""
        if isinstance(spec, TypeAtom) and spec.text.split("[", 1)[0] == "var":
            if self.supports_arrays or spec.text == "var":
                return self.untyped + spec.text[len("var"):]
        return self.type_text(spec)

    def declaration(self, decl: DDecl) -> str:
        name = self.name(decl.name)
        if decl.value is not None:
            return f"{self.type_text(decl.type)} {name} = {self.expr(decl.value)}"
        type_text = self.explicit_type(decl.type)
        return f"{type_text} {name}{self.empty_container(decl.type, type_text)}"

    def empty_container(self, spec: TypeSpec, type_text: str) -> str:
        return ""

    def simple(self, stmt: Statement) -> str:
        if isinstance(stmt, DDecl):
            return self.declaration(stmt)
        if isinstance(stmt, DAssign):
            return f"{self.expr(stmt.target)} {stmt.op} {self.expr(stmt.value)}"
        return self.expr(stmt.expr)

    def body(self, block: DBlock, depth: int, opener: str) -> List[str]:
        return [f"{self.pad(depth)}{opener} {{"] + self.lines(block.statements, depth + 1)

    def statement(self, stmt: Statement, depth: int) -> List[str]:
        pad = self.pad(depth)
        if isinstance(stmt, (DDecl, DAssign, DExprStmt)):
            return [f"{pad}{self.simple(stmt)};"]
        if isinstance(stmt, DBlock):
            return [f"{pad}{{"] + self.lines(stmt.statements, depth + 1) + [f"{pad}}}"]
        if isinstance(stmt, DIf):
            out: List[str] = []
            for index, (condition, block) in enumerate(stmt.branches):
                keyword = "if" if index == 0 else "} else if"
                opener = f"{keyword} ({self.expr(condition)})"
                if index:
                    out.append(f"{pad}{opener} {{")
                    out.extend(self.lines(block.statements, depth + 1))
                else:
                    out.extend(self.body(block, depth, opener))
            if stmt.otherwise is not None:
                out.append(f"{pad}}} else {{")
                out.extend(self.lines(stmt.otherwise.statements, depth + 1))
            return out + [f"{pad}}}"]
        if isinstance(stmt, DWhile):
            return self.body(stmt.body, depth, f"while ({self.expr(stmt.condition)})") + [f"{pad}}}"]
        if isinstance(stmt, DFor):
            init = ", ".join(self.simple(s) for s in stmt.init)
            condition = self.expr(stmt.condition) if stmt.condition is not None else ""
            update = ", ".join(self.simple(s) for s in stmt.update)
            header = f"for ({init}; {condition}; {update})".replace(";  ;", "; ;")
            return self.body(stmt.body, depth, header) + [f"{pad}}}"]
        if isinstance(stmt, DForeach):
            header = (f"{self.foreach_keyword} ({self.var_keyword} {self.name(stmt.name)} "
                      f"{self.foreach_separator} {self.expr(stmt.iterable)})")
            return self.body(stmt.body, depth, header) + [f"{pad}}}"]
        if isinstance(stmt, DReturn):
            return [f"{pad}return;" if stmt.value is None else f"{pad}return {self.expr(stmt.value)};"]
        return [f"{pad}{stmt.keyword};"]

    def signature(self, fn: DFunc) -> str:
        return_type = self.value_return_type if self.returns_value(fn.body.statements) else "void"
        params = []
        for param in fn.params:
            text = f"{self.explicit_type(param.type)} {self.name(param.name)}"
            if param.default is not None:
                text += f" = {self.expr(param.default)}"
            params.append(text)
        return f"{return_type} {self.function_name(fn.name)}({', '.join(params)})"

    def function_name(self, words: Sequence[str]) -> str:
        return self.name(words)

    def method(self, fn: DFunc) -> List[str]:
        depth = self.member_indent
        pad = self.pad(depth)
        return ([f"{pad}{self.signature(fn)} {{"]
                + self.lines(fn.body.statements, depth + 1)
                + [f"{pad}}}"])


class JavaRenderer(BraceRenderer):
    target = LanguageId.JAVA
    member_indent = 1
    concrete = {"Queue": "LinkedList", "Deque": "ArrayDeque"}

    def empty_container(self, spec, type_text):
        if not isinstance(spec, TypeAtom) or not spec.text.endswith("<>"):
            return ""
        raw = type_text.split("<", 1)[0]
        return f" = new {self.concrete.get(raw, raw)}<>()"

    def signature(self, fn):
        return "static " + super().signature(fn)

    def function(self, fn: DFunc) -> str:
        members = self.method(fn)
        header = ["import java.util.*;", "", "class Main {"]
        if any("rand." in line for line in members):
            header += [f"{self.pad(1)}static Random rand = new Random();", ""]
        return "\n".join(header + members + ["}", ""])


class CSharpRenderer(BraceRenderer):
    target = LanguageId.CSHARP
    member_indent = 1
    generic_argument = "object"
    value_return_type = "dynamic"
    untyped = "dynamic"
    foreach_keyword = "foreach"
    foreach_separator = "in"

    def empty_container(self, spec, type_text):
        if not isinstance(spec, TypeAtom) or not spec.text.endswith("<>"):
            return ""
        return f" = new {type_text}()"

    def function_name(self, words):
        return self.name(words, as_type=True)

    def signature(self, fn):
        return "static " + super().signature(fn)

    def function(self, fn: DFunc) -> str:
        members = self.method(fn)
        header = ["using System;", "using System.Collections.Generic;", "", "class Program {"]
        if any("rand." in line for line in members):
            header += [f"{self.pad(1)}static Random rand = new Random();", ""]
        return "\n".join(header + members + ["}", ""])


class CppRenderer(BraceRenderer):
    target = LanguageId.CPP
    var_keyword = "auto"
    generic_argument = "int"
    value_return_type = "auto"
    untyped = "auto"
    supports_arrays = False
    literal_aliases = {"null": "nullptr"}

    def function(self, fn: DFunc) -> str:
        lines = ["#include <bits/stdc++.h>", "using namespace std;", ""] + self.method(fn)
        return "\n".join(lines + [""])


class PythonRenderer(Renderer):
    target = LanguageId.PYTHON
    supports_arrays = False
    literal_aliases = {"true": "True", "false": "False", "null": "None"}

    def ternary(self, node: Ternary) -> str:
        return f"{self.expr(node.consequence)} if {self.expr(node.condition)} else {self.expr(node.alternative)}"

    def annotation(self, spec: TypeSpec) -> Optional[str]:
        """Annotation text, or None for var and containers"""
        if isinstance(spec, Name):
            return self.name(spec.words, as_type=True)
        if spec.text == "var":
            return None
        if spec.text.endswith("[]"):
            raise UnrenderableMorpheme(spec.text, self.target.value)
        surface = self._type_rule(spec.text)
        if "=" in surface:
            return None
        return SLOT_PATTERN.sub("", surface).strip()

    def declaration(self, decl: DDecl) -> str:
        name = self.name(decl.name)
        annotation = self.annotation(decl.type)
        if decl.value is not None:
            value = self.expr(decl.value)
            return f"{name}: {annotation} = {value}" if annotation else f"{name} = {value}"
        if annotation:
            return f"{name}: {annotation}"
        if isinstance(decl.type, TypeAtom) and decl.type.text != "var":
            surface = instantiate(self._type_rule(decl.type.text), {"a": name})
            _, empty = surface.split("=", 1)
            return f"{name} = {empty.strip()}"
        return f"{name} = None"

    def simple(self, stmt: Statement) -> str:
        if isinstance(stmt, DDecl):
            return self.declaration(stmt)
        if isinstance(stmt, DAssign):
            return f"{self.expr(stmt.target)} {stmt.op} {self.expr(stmt.value)}"
        return self.expr(stmt.expr)

    def suite(self, statements: Sequence[Statement], depth: int) -> List[str]:
        body = self.lines(statements, depth)
        return body or [f"{self.pad(depth)}pass"]

    def statement(self, stmt: Statement, depth: int) -> List[str]:
        pad = self.pad(depth)
        if isinstance(stmt, (DDecl, DAssign, DExprStmt)):
            return [pad + self.simple(stmt)]
        if isinstance(stmt, DBlock):
            return self.lines(stmt.statements, depth)
        if isinstance(stmt, DIf):
            out: List[str] = []
            for index, (condition, block) in enumerate(stmt.branches):
                keyword = "if" if index == 0 else "elif"
                out.append(f"{pad}{keyword} {self.expr(condition)}:")
                out.extend(self.suite(block.statements, depth + 1))
            if stmt.otherwise is not None:
                out.append(f"{pad}else:")
                out.extend(self.suite(stmt.otherwise.statements, depth + 1))
            return out
        if isinstance(stmt, DWhile):
            return [f"{pad}while {self.expr(stmt.condition)}:"] + self.suite(stmt.body.statements, depth + 1)
        if isinstance(stmt, DFor):
            return self.counted_loop(stmt, depth)
        if isinstance(stmt, DForeach):
            return ([f"{pad}for {self.name(stmt.name)} in {self.expr(stmt.iterable)}:"]
                    + self.suite(stmt.body.statements, depth + 1))
        if isinstance(stmt, DReturn):
            return [f"{pad}return" if stmt.value is None else f"{pad}return {self.expr(stmt.value)}"]
        return [pad + stmt.keyword]

    def _range(self, loop: DFor) -> Optional[str]:
        """``range(...)`` call equivalent to a counted C-style header, if there is one"""
        if len(loop.init) != 1 or len(loop.update) != 1 or loop.condition is None:
            return None
        init, update = loop.init[0], loop.update[0]
        if not (isinstance(init, DDecl) and init.value is not None
                and init.type == TypeAtom("int")):
            return None
        items = loop.condition.items
        if len(items) < 3 or items[0] != Name(init.name):
            return None
        if not (isinstance(items[1], Op) and items[1].text in _RANGE_COMPARISONS):
            return None
        if any(isinstance(i, (Op, Ternary)) and getattr(i, "text", "?") in _LOOSE_OPERATORS for i in items[2:]):
            return None
        if not (isinstance(update, DAssign) and update.target.items == [Name(init.name)]
                and len(update.value.items) == 1 and isinstance(update.value.items[0], Lit)
                and update.value.items[0].text.isdigit()):
            return None
        ascending = items[1] in (Op("<"), Op("<="))
        if update.op != ("+=" if ascending else "-="):
            return None
        if _mentions(loop.body.statements, init.name):
            return None

        start = self.expr(init.value)
        stop = self.expr(Expr(items[2:]))
        if items[1] == Op("<="):
            stop += " + 1"
        elif items[1] == Op(">="):
            stop += " - 1"
        step = update.value.items[0].text
        if ascending and step == "1":
            return f"range({stop})" if start == "0" else f"range({start}, {stop})"
        return f"range({start}, {stop}, {step if ascending else '-' + step})"

    def counted_loop(self, loop: DFor, depth: int) -> List[str]:
        pad = self.pad(depth)
        counted = self._range(loop)
        if counted is not None:
            return ([f"{pad}for {self.name(loop.init[0].name)} in {counted}:"]
                    + self.suite(loop.body.statements, depth + 1))

        out = [pad + self.simple(s) for s in loop.init]
        condition = self.expr(loop.condition) if loop.condition is not None else "True"
        out.append(f"{pad}while {condition}:")
        out.extend(self.lines(_update_before_continue(loop.body.statements, loop.update), depth + 1))
        out.extend(self.pad(depth + 1) + self.simple(s) for s in loop.update)
        if not loop.body.statements and not loop.update:
            out.append(f"{self.pad(depth + 1)}pass")
        return out

    def function(self, fn: DFunc) -> str:
        params = []
        for param in fn.params:
            text = self.name(param.name)
            annotation = self.annotation(param.type)
            if annotation:
                text += f": {annotation}"
            if param.default is not None:
                text += f" = {self.expr(param.default)}"
            params.append(text)
        body = [f"def {self.name(fn.name)}({', '.join(params)}):"] + self.suite(fn.body.statements, 1)
        text = "\n".join(body)

        imports = []
        if "math." in text:
            imports.append("import math")
        if "queue.Queue" in text:
            imports.append("import queue")
        if "random." in text:
            imports.append("import random")
        if "deque(" in text:
            imports.append("from collections import deque")
        header = imports + ["", ""] if imports else []
        return "\n".join(header + body + [""])


RENDERERS = {
    LanguageId.JAVA: JavaRenderer,
    LanguageId.CSHARP: CSharpRenderer,
    LanguageId.CPP: CppRenderer,
    LanguageId.PYTHON: PythonRenderer,
}


def decompile(code: DistilledCode, target, registry: Optional[MorphemeRegistry] = None) -> str:
    """Render distilled code as a function scaffold that parses in ``target``"""
    target = InputValidator.validate_language(target)
    registry = registry or default_registry()
    fn = parse_distilled(code, registry)
    text = RENDERERS[target](registry).function(fn)

    try:
        tree = parse(text, target)
    except ParseFailure as e:
        raise MalformedDistilled(f"rendered {target.value} is empty: {e.message}")
    if tree.has_error:
        logger.debug(f"Rendered {target.value} scaffold does not parse:\n{text}")
        raise MalformedDistilled(f"rendered {target.value} scaffold does not parse")
    return text


def file_name_for(code: DistilledCode, target) -> str:
    """Output file name: the function's name in the target style plus its extension"""
    target = InputValidator.validate_language(target)
    first = next((t for t in code.tokens if isinstance(t, NameBag)), None)
    words = first.words if first is not None else ("main",)
    return render_name(words, target) + FILE_EXTENSIONS[target]


def round_trip_check(fn: SourceFunction, target, registry: Optional[MorphemeRegistry] = None) -> RoundTripReport:
    """distill -> decompile -> distill and compare the canonical forms"""
    target = InputValidator.validate_language(target)
    registry = registry or default_registry()
    original = canonicalize(distill(fn, registry))
    report = RoundTripReport(
        target=target, passed=False, original=serialize(original),
        fuzzy=original.annotations.get("fuzzy", 0) > 0,
    )

    try:
        report.rendered = decompile(original, target, registry)
    except (UnrenderableMorpheme, MalformedDistilled) as e:
        report.cause = e.message
        return report

    tree = parse(report.rendered, target)
    functions = extract_functions(tree, report.rendered, target)
    if not functions:
        report.cause = "rendered scaffold has no function"
        return report

    restored = canonicalize(distill(functions[0], registry))
    report.restored = serialize(restored)
    report.passed = restored == original
    if not report.passed:
        report.cause = "distilled forms differ"
    return report
