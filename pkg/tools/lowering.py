"""
Lowering
Rewrites a pruned grammar tree into the unified tree shared by all languages.

Unified node kinds all start with ``u_``; child roles are carried in
``field_name`` and scalar payloads (operators, identifier text, unified
forms) in ``attrs``.
"""

import logging
import re
from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from models.morpheme import Category, MorphemeRegistry
from models.syntax import LanguageId, SyntaxNode
from tools.grammar_adapters import IDENTIFIER_KINDS, get_adapter
from tools.morpheme_registry import matcher_for

logger = logging.getLogger("lowering")

RECEIVERS = frozenset({"self", "cls", "this"})
# Object is the untyped parameter type of rendered Java scaffolds
VAR_TYPES = frozenset({"var", "auto", "dynamic", "Object"})
ASSIGN_OPERATORS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="})
BINARY_OPERATORS = frozenset({
    "+", "-", "*", "/", "%", "==", "!=", "<", ">", "<=", ">=", "&&", "||",
    "&", "|", "^", "<<", ">>", "in",
})
ARITHMETIC_OPERATORS = frozenset({"+", "-", "*", "/", "%"})
UNARY_OPERATORS = frozenset({"-", "+", "!", "~"})
LITERAL_ALIASES = {
    "True": "true", "False": "false", "None": "null", "nullptr": "null", "NULL": "null",
}


def unode(kind: str, origin: Optional[SyntaxNode] = None, children: Sequence[SyntaxNode] = (), **attrs) -> SyntaxNode:
    """Fresh unified node; spans are taken from the grammar node it replaces"""
    return SyntaxNode(
        kind=kind,
        start=origin.start if origin is not None else 0,
        end=origin.end if origin is not None else 0,
        text=origin.text if origin is not None else "",
        children=list(children),
        attrs=attrs,
    )


def tag(name: str, node: SyntaxNode) -> SyntaxNode:
    node.field_name = name
    return node


def unwrap_parens(node: SyntaxNode) -> SyntaxNode:
    while node.kind in ("parenthesized_expression", "condition_clause") and node.named_children:
        inner = node.child_by_field("value") or node.named_children[-1]
        if node.kind == "parenthesized_expression" and len(node.named_children) != 1:
            break
        node = inner
    return node


class Lowerer:
    """Shared lowering; subclasses bind grammar node kinds to handlers"""

    language: LanguageId
    literal_kinds: frozenset = frozenset()
    type_kinds: frozenset = frozenset()
    # grammar kind -> handler method name
    statements: Dict[str, str] = {}
    expressions: Dict[str, str] = {}

    def __init__(self, registry: MorphemeRegistry):
        self.registry = registry
        self.matcher = matcher_for(registry, self.language)
        self.adapter = get_adapter(self.language)
        self.hits: Counter = Counter({"unified": 0, "fuzzy": 0})
        self._statements: Dict[str, Callable] = {k: getattr(self, v) for k, v in self.statements.items()}
        self._expressions: Dict[str, Callable] = {k: getattr(self, v) for k, v in self.expressions.items()}

    # -- entry points ------------------------------------------------------

    def lower_function(self, fn: SyntaxNode) -> SyntaxNode:
        name = unode("u_name", fn, ident=self.function_name(fn) or "anonymous")
        params = [tag("param", p) for p in self.params(fn)]
        body = tag("body", self.function_body(fn))
        return unode("u_func", fn, [tag("name", name), *params, body])

    def function_name(self, fn: SyntaxNode) -> str:
        return self.adapter.function_name(fn)

    def function_body(self, fn: SyntaxNode) -> SyntaxNode:
        body = fn.child_by_field("body")
        return self.block(body) if body is not None else unode("u_block", fn)

    def params(self, fn: SyntaxNode) -> List[SyntaxNode]:
        raise NotImplementedError

    def param(self, origin: SyntaxNode, name: Optional[SyntaxNode], type_node: Optional[SyntaxNode],
              default: Optional[SyntaxNode] = None, dims: int = 0) -> Optional[SyntaxNode]:
        if name is None:
            return None
        children = [
            tag("type", self.lower_type(type_node, dims) if type_node is not None else self.var_type(origin)),
            tag("name", self.name(name)),
        ]
        if default is not None:
            children.append(tag("default", self.expr(default)))
        return unode("u_param", origin, children)

    # -- statements --------------------------------------------------------

    def block(self, node: SyntaxNode) -> SyntaxNode:
        if node.kind not in self.adapter.block_kinds and node.kind != "constructor_body":
            return unode("u_block", node, self.stmt(node))
        statements: List[SyntaxNode] = []
        for child in node.named_children:
            statements.extend(self.stmt(child))
        return unode("u_block", node, statements)

    def stmt(self, node: SyntaxNode) -> List[SyntaxNode]:
        if node.kind in self.adapter.comment_kinds:
            return []
        if node.kind in self.adapter.block_kinds:
            return [self.block(node)]
        handler = self._statements.get(node.kind)
        if handler is not None:
            return handler(node)
        if node.kind in self._expressions or node.kind in IDENTIFIER_KINDS:
            return [unode("u_expr_stmt", node, [tag("expr", self.expr(node))])]
        logger.debug(f"No statement template for {self.language.value} {node.kind}; using raw form")
        return [unode("u_raw_stmt", node, [self.raw(node)])]

    def expression_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        named = node.named_children
        if not named:
            return []
        if len(named) > 1:
            return [unode("u_expr_stmt", node, [tag("expr", self.seq(node, named))])]
        inner = named[0]
        simple = self.simple_statement(inner)
        if simple is not None:
            return simple
        if inner.kind in self._statements:
            return self._statements[inner.kind](inner)
        return [unode("u_expr_stmt", node, [tag("expr", self.expr(inner))])]

    def simple_statement(self, node: SyntaxNode) -> Optional[List[SyntaxNode]]:
        """Assignments, increments and declarations; the forms allowed in a for header"""
        return None

    def assign(self, origin: SyntaxNode, target: SyntaxNode, op: str, value: SyntaxNode) -> SyntaxNode:
        return unode("u_assign", origin, [tag("target", target), tag("value", value)], op=op)

    def step(self, origin: SyntaxNode, target: SyntaxNode, op: str) -> SyntaxNode:
        """``x++`` / ``--x`` as ``assign x += 1``"""
        one = unode("u_literal", origin, text="1")
        return self.assign(origin, self.expr(target), "+=" if op == "++" else "-=", one)

    def decl(self, origin: SyntaxNode, type_node: SyntaxNode, name: SyntaxNode,
             value: Optional[SyntaxNode]) -> SyntaxNode:
        children = [tag("type", type_node), tag("name", name)]
        if value is not None:
            children.append(tag("value", value))
        return unode("u_decl", origin, children)

    def return_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        named = [c for c in node.named_children if c.kind not in self.adapter.comment_kinds]
        if not named:
            return [unode("u_return", node)]
        value = self.expr(named[0]) if len(named) == 1 else self.seq(node, named)
        return [unode("u_return", node, [tag("value", value)])]

    def break_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        return [unode("u_break", node)]

    def continue_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        return [unode("u_continue", node)]

    def empty_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        return []

    def condition(self, node: SyntaxNode) -> SyntaxNode:
        node = unwrap_parens(node)
        lowered = self.expr(node)
        while lowered.kind == "u_paren" and lowered.children:
            lowered = lowered.children[0]
        return tag("condition", lowered)

    def if_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        children = [
            self.condition(node.child_by_field("condition")),
            tag("body", self.block(node.child_by_field("consequence"))),
        ]
        alternative = self.alternative_of(node)
        while alternative is not None:
            if alternative.kind == "if_statement":
                elif_node = unode("u_elif", alternative, [
                    self.condition(alternative.child_by_field("condition")),
                    tag("body", self.block(alternative.child_by_field("consequence"))),
                ])
                children.append(tag("elif", elif_node))
                alternative = self.alternative_of(alternative)
                continue
            children.append(tag("else", self.block(alternative)))
            break
        return [unode("u_if", node, children)]

    def alternative_of(self, node: SyntaxNode) -> Optional[SyntaxNode]:
        alternative = node.child_by_field("alternative")
        if alternative is not None and alternative.kind == "else_clause":
            named = alternative.named_children
            alternative = named[0] if named else None
        return alternative

    def while_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        return [unode("u_while", node, [
            self.condition(node.child_by_field("condition")),
            tag("body", self.block(node.child_by_field("body"))),
        ])]

    def for_header(self, node: SyntaxNode) -> Tuple[List[SyntaxNode], List[SyntaxNode], List[SyntaxNode]]:
        """Split a C-style header into init/condition/update parts by position"""
        segments: Tuple[List[SyntaxNode], ...] = ([], [], [])
        index = 0
        opened = False
        body = node.child_by_field("body")
        for child in node.children:
            if child is body:
                break
            if not child.is_named:
                if child.text == "(" and not opened:
                    opened = True
                elif child.text == ")" and opened:
                    break
                elif child.text == ";" and opened:
                    index = min(index + 1, 2)
                continue
            if not opened or child.kind in self.adapter.comment_kinds:
                continue
            if child.kind in ("comma_expression", "expression_list", "sequence_expression"):
                segments[index].extend(self._flatten_comma(child))
            else:
                segments[index].append(child)
            if child.text.rstrip().endswith(";"):
                index = min(index + 1, 2)
        return segments

    @staticmethod
    def _flatten_comma(node: SyntaxNode) -> List[SyntaxNode]:
        out = []
        for child in node.named_children:
            if child.kind == node.kind:
                out.extend(Lowerer._flatten_comma(child))
            else:
                out.append(child)
        return out

    def header_statements(self, nodes: List[SyntaxNode], origin: SyntaxNode) -> SyntaxNode:
        parts: List[SyntaxNode] = []
        for item in nodes:
            simple = self.simple_statement(item)
            if simple is None:
                simple = self.stmt(item) if item.kind in self._statements else [self.expr(item)]
            parts.extend(simple)
        return unode("u_seq", origin, parts) if parts else unode("u_empty", origin)

    def for_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        init, cond, update = self.for_header(node)
        init_node = self.header_statements(init, node)
        if len(cond) == 1:
            condition = tag("condition", self.exclusive_bound(init_node, self.condition(cond[0])))
        else:
            condition = tag("condition", unode("u_empty", node))
        return [unode("u_for", node, [
            tag("init", init_node),
            condition,
            tag("update", self.header_statements(update, node)),
            tag("body", self.block(node.child_by_field("body"))),
        ])]

    @staticmethod
    def exclusive_bound(init: SyntaxNode, condition: SyntaxNode) -> SyntaxNode:
        """``i <= n`` becomes ``i < n + 1`` and ``i >= n`` becomes ``i > n - 1`` for an int counter"""
        op = condition.attrs.get("op")
        if condition.kind != "u_binary" or op not in ("<=", ">="):
            return condition
        decls = [c for c in init.children if c.kind == "u_decl"] if init.kind == "u_seq" else []
        if len(decls) != 1:
            return condition
        type_node, name = decls[0].child_by_field("type"), decls[0].child_by_field("name")
        if type_node is None or type_node.kind != "u_typeref" or type_node.attrs.get("text") != "int":
            return condition
        left, right = condition.child_by_field("left"), condition.child_by_field("right")
        if left is None or left.kind != "u_name" or left.attrs.get("ident") != name.attrs.get("ident"):
            return condition
        if right.kind in ("u_ternary", "u_raw") or (
                right.kind == "u_binary" and right.attrs.get("op") not in ARITHMETIC_OPERATORS):
            return condition
        bound = unode("u_binary", right, [
            tag("left", right), tag("right", unode("u_literal", right, text="1")),
        ], op="+" if op == "<=" else "-")
        return unode("u_binary", condition, [tag("left", left), tag("right", bound)], op=op[0])

    def foreach(self, node: SyntaxNode, name: SyntaxNode, iterable: SyntaxNode, body: SyntaxNode) -> List[SyntaxNode]:
        return [unode("u_foreach", node, [
            tag("name", self.expr(name)),
            tag("iterable", self.expr(iterable)),
            tag("body", self.block(body)),
        ])]

    def switch(self, node: SyntaxNode, subject: SyntaxNode,
               groups: List[Tuple[List[SyntaxNode], bool, List[SyntaxNode]]]) -> List[SyntaxNode]:
        """Rewrite a switch as an if/elif/else chain of equality guards"""
        branches: List[Tuple[SyntaxNode, SyntaxNode]] = []
        default_body: Optional[SyntaxNode] = None
        pending: List[SyntaxNode] = []
        pending_default = False

        for labels, is_default, body in groups:
            labels = pending + labels
            is_default = is_default or pending_default
            if not body:
                # empty group falls through to the next one
                pending, pending_default = labels, is_default
                continue
            pending, pending_default = [], False

            statements: List[SyntaxNode] = []
            for child in body:
                statements.extend(self.stmt(child))
            while statements and statements[-1].kind == "u_break":
                statements.pop()
            block = unode("u_block", body[0], statements)

            if is_default:
                default_body = block
                continue
            guard: Optional[SyntaxNode] = None
            for label in labels:
                test = unode("u_binary", label, [
                    tag("left", self.expr(unwrap_parens(subject))),
                    tag("right", self.expr(label)),
                ], op="==")
                guard = test if guard is None else unode("u_binary", label, [
                    tag("left", guard), tag("right", test),
                ], op="||")
            if guard is not None:
                branches.append((guard, block))

        if not branches:
            return list(default_body.children) if default_body is not None else []

        first_guard, first_body = branches[0]
        children = [tag("condition", first_guard), tag("body", first_body)]
        for guard, body in branches[1:]:
            children.append(tag("elif", unode("u_elif", guard, [tag("condition", guard), tag("body", body)])))
        if default_body is not None:
            children.append(tag("else", default_body))
        return [unode("u_if", node, children)]

    # -- expressions -------------------------------------------------------

    def expr(self, node: SyntaxNode) -> SyntaxNode:
        matched = self.matcher.match(node)
        if matched is not None:
            rule, bindings = matched
            if rule.category is Category.BUILTIN or rule.head:
                self.hits["unified"] += 1
            return unode(
                "u_morpheme", node,
                [tag(slot, self.expr(bound)) for slot, bound in sorted(bindings.items())],
                unified=rule.unified, category=rule.category.value,
            )

        handler = self._expressions.get(node.kind)
        if handler is not None:
            return handler(node)
        if not node.children:
            return self.leaf(node)
        if node.kind in self.type_kinds:
            return self.lower_type(node)
        return self.raw(node)

    def leaf(self, node: SyntaxNode) -> SyntaxNode:
        if node.kind in IDENTIFIER_KINDS:
            if node.text in RECEIVERS:
                return unode("u_empty", node)
            return self.name(node)
        if node.kind in self.literal_kinds or node.text in LITERAL_ALIASES:
            return self.literal(node)
        if node.kind in self.type_kinds:
            return self.lower_type(node)
        return unode("u_sym", node, text=node.text)

    def name(self, node: SyntaxNode) -> SyntaxNode:
        return unode("u_name", node, ident=node.text)

    def literal(self, node: SyntaxNode) -> SyntaxNode:
        text = node.text.strip()
        return unode("u_literal", node, text=LITERAL_ALIASES.get(text, text))

    def identifiers(self, node: SyntaxNode) -> List[str]:
        return [
            leaf.text for leaf in node.leaves()
            if leaf.kind in IDENTIFIER_KINDS and leaf.text not in RECEIVERS
        ]

    def path(self, node: SyntaxNode) -> SyntaxNode:
        """Member access chain flattened into one name path"""
        idents = self.identifiers(node)
        if not idents:
            return unode("u_empty", node)
        if len(idents) == 1:
            return unode("u_name", node, ident=idents[0])
        return unode("u_path", node, idents=tuple(idents))

    def is_path(self, node: SyntaxNode) -> bool:
        return all(
            leaf.kind in IDENTIFIER_KINDS or not leaf.is_named or leaf.text in RECEIVERS
            for leaf in node.leaves()
        ) and not any(leaf.text in ("(", "[") for leaf in node.leaves())

    def member(self, node: SyntaxNode) -> SyntaxNode:
        return self.path(node) if self.is_path(node) else self.raw(node)

    def call(self, node: SyntaxNode, callee: Optional[SyntaxNode], arguments: Optional[SyntaxNode]) -> SyntaxNode:
        self.hits["fuzzy"] += 1
        path = self.path(callee) if callee is not None else unode("u_empty", node)
        args = [tag("arg", self.expr(a)) for a in self.arguments(arguments)]
        return unode("u_call", node, [tag("callee", path), *args])

    def arguments(self, node: Optional[SyntaxNode]) -> List[SyntaxNode]:
        if node is None:
            return []
        return [c for c in node.named_children if c.kind not in self.adapter.comment_kinds]

    def binary(self, node: SyntaxNode) -> SyntaxNode:
        left = node.child_by_field("left")
        right = node.child_by_field("right")
        op_node = node.child_by_field("operator")
        op = op_node.text if op_node is not None else self._anonymous_text(node)
        op = " ".join(op.split())
        if left is None or right is None or op not in BINARY_OPERATORS:
            return self.raw(node)
        return unode("u_binary", node, [tag("left", self.expr(left)), tag("right", self.expr(right))], op=op)

    @staticmethod
    def _anonymous_text(node: SyntaxNode) -> str:
        for child in node.children:
            if not child.is_named:
                return child.text
        return ""

    def unary(self, node: SyntaxNode) -> SyntaxNode:
        operand = node.child_by_field("operand") or node.child_by_field("argument")
        if operand is None and node.named_children:
            operand = node.named_children[-1]
        op_node = node.child_by_field("operator")
        op = op_node.text if op_node is not None else self._anonymous_text(node)
        if operand is None or op not in UNARY_OPERATORS:
            return self.raw(node)
        return unode("u_unary", node, [tag("operand", self.expr(operand))], op=op)

    def paren(self, node: SyntaxNode) -> SyntaxNode:
        named = node.named_children
        if len(named) != 1:
            return self.raw(node)
        inner = self.expr(named[0])
        # call-form morphemes are atomic; parentheses around them carry nothing
        if inner.kind == "u_morpheme" and re.match(r"[A-Za-z_]\w*\(", inner.attrs["unified"]):
            return inner
        return unode("u_paren", node, [tag("inner", inner)])

    def subscript(self, node: SyntaxNode, value: Optional[SyntaxNode], index: Optional[SyntaxNode]) -> SyntaxNode:
        if value is None or index is None:
            return self.raw(node)
        return unode("u_subscript", node, [tag("value", self.expr(value)), tag("index", self.expr(index))])

    def ternary(self, node: SyntaxNode) -> SyntaxNode:
        condition = node.child_by_field("condition")
        consequence = node.child_by_field("consequence")
        alternative = node.child_by_field("alternative")
        if condition is None or consequence is None or alternative is None:
            return self.raw(node)
        return self._ternary(node, condition, consequence, alternative)

    def _ternary(self, node, condition, consequence, alternative) -> SyntaxNode:
        return unode("u_ternary", node, [
            tag("condition", self.expr(condition)),
            tag("consequence", self.expr(consequence)),
            tag("alternative", self.expr(alternative)),
        ])

    def seq(self, origin: SyntaxNode, nodes: List[SyntaxNode]) -> SyntaxNode:
        return unode("u_seq", origin, [self.expr(n) for n in nodes])

    def raw(self, node: SyntaxNode) -> SyntaxNode:
        """Fallback for grammar forms without a template: keep names, literals and marks"""
        pieces: List[SyntaxNode] = []
        for child in node.children:
            if child.kind in self.adapter.comment_kinds:
                continue
            if child.kind in self.adapter.block_kinds:
                pieces.append(self.block(child))
            elif child.kind in self.type_kinds:
                pieces.append(self.lower_type(child))
            elif child.kind in self._expressions or not child.children:
                pieces.append(self.expr(child))
            elif self.matcher.match(child) is not None:
                pieces.append(self.expr(child))
            else:
                pieces.append(self.raw(child))
        return unode("u_raw", node, pieces)

    # -- types -------------------------------------------------------------

    def type_shape(self, node: SyntaxNode) -> Tuple[str, int]:
        """Registry shape of a type node and its array dimension count"""
        return re.sub(r"\s+", "", node.text), 0

    def lower_type(self, node: Optional[SyntaxNode], dims: int = 0) -> SyntaxNode:
        if node is None:
            return unode("u_typeref", None, text="var")
        shape, inner_dims = self.type_shape(node)
        dims += inner_dims
        if shape in VAR_TYPES:
            return unode("u_typeref", node, text="var" + "[]" * dims)
        unified = self.matcher.type_for(shape)
        if unified is not None:
            return unode("u_typeref", node, text=unified + "[]" * dims)
        words = self.identifiers(node) or node.text.replace("[", " ").replace("]", " ").split()
        words = [w for w in words if re.match(r"\w", w)]
        if not words:
            return unode("u_typeref", node, text="var" + "[]" * dims)
        if len(words) == 1:
            return unode("u_name", node, ident=words[0])
        return unode("u_path", node, idents=tuple(words))

    def var_type(self, origin: Optional[SyntaxNode]) -> SyntaxNode:
        return unode("u_typeref", origin, text="var")

    @staticmethod
    def is_container(type_node: SyntaxNode) -> bool:
        return type_node.kind == "u_typeref" and type_node.attrs.get("text", "").endswith("<>")

    def container_value(self, type_node: SyntaxNode, value: Optional[SyntaxNode]) -> Optional[SyntaxNode]:
        """Drop a no-argument constructor initializer from a container declaration"""
        if value is None or not self.is_container(type_node):
            return value
        if value.kind in ("object_creation_expression", "argument_list", "initializer_list"):
            arguments = value.child_by_field("arguments") if value.kind == "object_creation_expression" else value
            if arguments is None or not arguments.named_children:
                initializer = value.child_by_field("initializer")
                if initializer is None or not initializer.named_children:
                    return None
        return value


# ---------------------------------------------------------------------------
# Python
# ---------------------------------------------------------------------------

class PythonLowerer(Lowerer):
    language = LanguageId.PYTHON
    literal_kinds = frozenset({"integer", "float", "string", "concatenated_string", "true", "false", "none"})
    type_kinds = frozenset({"type"})
    statements = {
        "expression_statement": "expression_statement",
        "if_statement": "if_statement",
        "while_statement": "while_statement",
        "for_statement": "for_statement",
        "return_statement": "return_statement",
        "break_statement": "break_statement",
        "continue_statement": "continue_statement",
        "pass_statement": "empty_statement",
        "function_definition": "nested_function",
    }
    expressions = {
        "call": "call_expression",
        "binary_operator": "binary",
        "comparison_operator": "comparison",
        "unary_operator": "unary",
        "parenthesized_expression": "paren",
        "subscript": "subscript_expression",
        "attribute": "member",
        "conditional_expression": "conditional",
        "string": "literal",
        "concatenated_string": "literal",
        "not_operator": "not_expression",
        "boolean_operator": "boolean",
    }
    container_shapes = ("[]", "{}", "set()", "queue.Queue()", "deque()")

    def __init__(self, registry: MorphemeRegistry):
        super().__init__(registry)
        self.declared: set = set()

    def lower_function(self, fn: SyntaxNode) -> SyntaxNode:
        self.declared = set()
        return super().lower_function(fn)

    def nested_function(self, node: SyntaxNode) -> List[SyntaxNode]:
        outer = self.declared
        lowered = self.lower_function(node)
        self.declared = outer
        return [lowered]

    def params(self, fn: SyntaxNode) -> List[SyntaxNode]:
        out = []
        parameters = fn.child_by_field("parameters")
        if parameters is None:
            return out
        for index, child in enumerate(parameters.named_children):
            name, type_node, default = self._param_parts(child)
            if name is None:
                continue
            if index == 0 and name.text in ("self", "cls"):
                continue
            self.declared.add(name.text)
            lowered = self.param(child, name, type_node, default)
            if lowered is not None:
                out.append(lowered)
        return out

    @staticmethod
    def _param_parts(node: SyntaxNode):
        if node.kind == "identifier":
            return node, None, None
        if node.kind == "default_parameter":
            return node.child_by_field("name"), None, node.child_by_field("value")
        if node.kind == "typed_default_parameter":
            return node.child_by_field("name"), node.child_by_field("type"), node.child_by_field("value")
        if node.kind == "typed_parameter":
            names = [c for c in node.named_children if c.kind == "identifier"]
            return (names[0] if names else None), node.child_by_field("type"), None
        # splat parameters keep their name only
        names = [leaf for leaf in node.leaves() if leaf.kind == "identifier"]
        return (names[0] if names else None), None, None

    def literal(self, node: SyntaxNode) -> SyntaxNode:
        text = node.text.strip()
        if node.kind == "string" and len(text) >= 2 and text[0] == text[-1] == "'" and not text.startswith("'''"):
            text = '"' + text[1:-1].replace("\\'", "'").replace('"', '\\"') + '"'
        return unode("u_literal", node, text=LITERAL_ALIASES.get(text, text))

    def leaf(self, node: SyntaxNode) -> SyntaxNode:
        if node.kind in ("true", "false", "none"):
            return self.literal(node)
        return super().leaf(node)

    def simple_statement(self, node: SyntaxNode) -> Optional[List[SyntaxNode]]:
        if node.kind == "assignment":
            return self.assignment(node)
        if node.kind == "augmented_assignment":
            return [self.augmented(node)]
        return None

    def assignment(self, node: SyntaxNode) -> List[SyntaxNode]:
        left = node.child_by_field("left")
        right = node.child_by_field("right")
        annotation = node.child_by_field("type")

        if left is not None and left.kind == "identifier" and (annotation is not None or left.text not in self.declared):
            self.declared.add(left.text)
            type_node = self._container_type(right)
            if type_node is not None:
                return [self.decl(node, type_node, self.name(left), None)]
            type_node = self.lower_type(annotation) if annotation is not None else self.var_type(node)
            value = self.expr(right) if right is not None else None
            return [self.decl(node, type_node, self.name(left), value)]

        if left is None or right is None:
            return [unode("u_raw_stmt", node, [self.raw(node)])]
        return [self.assign(node, self.expr(left), "=", self.expr(right))]

    def _container_type(self, value: Optional[SyntaxNode]) -> Optional[SyntaxNode]:
        if value is None:
            return None
        shape = re.sub(r"\s+", "", value.text)
        if shape not in self.container_shapes:
            return None
        unified = self.matcher.type_for("=" + shape)
        return unode("u_typeref", value, text=unified) if unified is not None else None

    def augmented(self, node: SyntaxNode) -> SyntaxNode:
        left = node.child_by_field("left")
        right = node.child_by_field("right")
        op = node.child_by_field("operator").text
        if op in ASSIGN_OPERATORS:
            return self.assign(node, self.expr(left), op, self.expr(right))
        # //= and **= expand through their registry forms
        rule = self.registry.index_forward.get((self.language, Category.OPERATOR, f"a{op[:-1]}b"))
        if rule is None:
            return unode("u_raw_stmt", node, [self.raw(node)])
        self.hits["unified"] += 1
        value = unode("u_morpheme", node, [
            tag("a", self.expr(left)), tag("b", self.expr(right)),
        ], unified=rule.unified, category=rule.category.value)
        return self.assign(node, self.expr(left), "=", value)

    def for_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        left = node.child_by_field("left")
        right = node.child_by_field("right")
        body = node.child_by_field("body")
        if node.child_by_field("alternative") is not None:
            logger.debug("for/else: the else clause has no unified template and is dropped")
        if left is not None and left.kind == "identifier":
            self.declared.add(left.text)
            counted = self._range_for(node, left, right, body)
            if counted is not None:
                return counted
        return self.foreach(node, left, right, body)

    def _range_for(self, node, counter, call, body) -> Optional[List[SyntaxNode]]:
        if call is None or call.kind != "call":
            return None
        function = call.child_by_field("function")
        if function is None or function.text != "range":
            return None
        args = self.arguments(call.child_by_field("arguments"))
        if not 1 <= len(args) <= 3 or any(a.kind == "keyword_argument" for a in args):
            return None

        start = self.expr(args[0]) if len(args) > 1 else unode("u_literal", call, text="0")
        stop = args[0] if len(args) == 1 else args[1]
        op, compare, step = "+=", "<", unode("u_literal", call, text="1")
        if len(args) == 3:
            step_node = args[2]
            if step_node.kind == "integer":
                step = self.expr(step_node)
            elif step_node.kind == "unary_operator" and step_node.text.replace(" ", "").startswith("-") \
                    and step_node.named_children and step_node.named_children[-1].kind == "integer":
                op, compare = "-=", ">"
                step = self.expr(step_node.named_children[-1])
            else:
                return None

        init = unode("u_seq", call, [self.decl(call, unode("u_typeref", call, text="int"), self.name(counter), start)])
        condition = unode("u_binary", call, [
            tag("left", self.name(counter)), tag("right", self.expr(stop)),
        ], op=compare)
        update = unode("u_seq", call, [self.assign(call, self.name(counter), op, step)])
        return [unode("u_for", node, [
            tag("init", init), tag("condition", condition), tag("update", update),
            tag("body", self.block(body)),
        ])]

    def if_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        children = [
            self.condition(node.child_by_field("condition")),
            tag("body", self.block(node.child_by_field("consequence"))),
        ]
        for clause in node.children_by_field("alternative"):
            if clause.kind == "elif_clause":
                children.append(tag("elif", unode("u_elif", clause, [
                    self.condition(clause.child_by_field("condition")),
                    tag("body", self.block(clause.child_by_field("consequence"))),
                ])))
            elif clause.kind == "else_clause":
                children.append(tag("else", self.block(clause.child_by_field("body"))))
        return [unode("u_if", node, children)]

    def while_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        if node.child_by_field("alternative") is not None:
            logger.debug("while/else: the else clause has no unified template and is dropped")
        return super().while_statement(node)

    def call_expression(self, node: SyntaxNode) -> SyntaxNode:
        return self.call(node, node.child_by_field("function"), node.child_by_field("arguments"))

    def comparison(self, node: SyntaxNode) -> SyntaxNode:
        operands = node.named_children
        ops = [" ".join(c.text.split()) for c in node.children if not c.is_named]
        if len(ops) != len(operands) - 1:
            return self.raw(node)
        result: Optional[SyntaxNode] = None
        for index, op in enumerate(ops):
            left, right = self.expr(operands[index]), self.expr(operands[index + 1])
            if op == "is":
                op = "=="
            elif op == "is not":
                op = "!="
            if op == "not in":
                part = unode("u_unary", node, [tag("operand", unode("u_paren", node, [
                    tag("inner", unode("u_binary", node, [tag("left", left), tag("right", right)], op="in")),
                ]))], op="!")
            elif op in BINARY_OPERATORS:
                part = unode("u_binary", node, [tag("left", left), tag("right", right)], op=op)
            else:
                return self.raw(node)
            # chained comparisons a < b < c become a < b && b < c
            result = part if result is None else unode("u_binary", node, [tag("left", result), tag("right", part)], op="&&")
        return result

    def not_expression(self, node: SyntaxNode) -> SyntaxNode:
        argument = node.child_by_field("argument")
        return unode("u_unary", node, [tag("operand", self.expr(argument))], op="!")

    def boolean(self, node: SyntaxNode) -> SyntaxNode:
        op = {"and": "&&", "or": "||"}.get(node.child_by_field("operator").text)
        return unode("u_binary", node, [
            tag("left", self.expr(node.child_by_field("left"))),
            tag("right", self.expr(node.child_by_field("right"))),
        ], op=op)

    def subscript_expression(self, node: SyntaxNode) -> SyntaxNode:
        indices = node.children_by_field("subscript")
        if len(indices) != 1 or indices[0].kind == "slice":
            return self.raw(node)
        return self.subscript(node, node.child_by_field("value"), indices[0])

    def conditional(self, node: SyntaxNode) -> SyntaxNode:
        named = node.named_children
        if len(named) != 3:
            return self.raw(node)
        consequence, condition, alternative = named
        return self._ternary(node, condition, consequence, alternative)

    def type_shape(self, node: SyntaxNode) -> Tuple[str, int]:
        return re.sub(r"\s+", "", node.text), 0


# ---------------------------------------------------------------------------
# Brace languages
# ---------------------------------------------------------------------------

class BraceLowerer(Lowerer):
    """Java, C# and C++ share most statement forms"""

    statements = {
        "expression_statement": "expression_statement",
        "if_statement": "if_statement",
        "while_statement": "while_statement",
        "for_statement": "for_statement",
        "return_statement": "return_statement",
        "break_statement": "break_statement",
        "continue_statement": "continue_statement",
        "empty_statement": "empty_statement",
    }
    expressions = {
        "binary_expression": "binary",
        "parenthesized_expression": "paren",
        "assignment_expression": "assignment_expression",
    }

    def declarators(self, node: SyntaxNode) -> List[Tuple[SyntaxNode, Optional[SyntaxNode], int]]:
        """(name, value, extra array dims) for each variable a declaration introduces"""
        raise NotImplementedError

    def declaration(self, node: SyntaxNode, type_field: Optional[SyntaxNode] = None) -> List[SyntaxNode]:
        type_field = type_field or node.child_by_field("type")
        out = []
        for name, value, dims in self.declarators(node):
            type_node = self.lower_type(type_field, dims)
            value = self.container_value(type_node, value)
            out.append(self.decl(node, type_node, self.name(name), self.expr(value) if value is not None else None))
        return out

    def assignment_expression(self, node: SyntaxNode) -> SyntaxNode:
        # an assignment used as a value keeps its surface form
        return self.raw(node)

    def simple_statement(self, node: SyntaxNode) -> Optional[List[SyntaxNode]]:
        if node.kind == "assignment_expression":
            left = node.child_by_field("left")
            right = node.child_by_field("right")
            op_node = node.child_by_field("operator")
            op = op_node.text if op_node is not None else self._anonymous_text(node)
            if left is None or right is None or op not in ASSIGN_OPERATORS:
                return None
            return [self.assign(node, self.expr(left), op, self.expr(right))]
        if node.kind in self.update_kinds:
            operand = [c for c in node.named_children]
            op = [c.text for c in node.children if not c.is_named and c.text in ("++", "--")]
            if len(operand) == 1 and op:
                return [self.step(node, operand[0], op[0])]
        if node.kind in self.declaration_kinds:
            return self.declaration(node)
        return None

    update_kinds: frozenset = frozenset({"update_expression"})
    declaration_kinds: frozenset = frozenset()


class JavaLowerer(BraceLowerer):
    language = LanguageId.JAVA
    literal_kinds = get_adapter(LanguageId.JAVA).literal_kinds
    type_kinds = frozenset({
        "integral_type", "floating_point_type", "boolean_type", "void_type", "type_identifier",
        "generic_type", "array_type", "scoped_type_identifier",
    })
    declaration_kinds = frozenset({"local_variable_declaration"})
    statements = {
        **BraceLowerer.statements,
        "local_variable_declaration": "declaration",
        "enhanced_for_statement": "enhanced_for",
        "switch_expression": "switch_statement",
    }
    expressions = {
        **BraceLowerer.expressions,
        "unary_expression": "unary",
        "method_invocation": "method_invocation",
        "field_access": "member",
        "array_access": "array_access",
        "ternary_expression": "ternary",
        "object_creation_expression": "object_creation",
        "this": "receiver",
    }

    def params(self, fn: SyntaxNode) -> List[SyntaxNode]:
        out = []
        parameters = fn.child_by_field("parameters")
        for child in parameters.named_children if parameters is not None else []:
            if child.kind == "formal_parameter":
                dims = child.child_by_field("dimensions")
                lowered = self.param(child, child.child_by_field("name"), child.child_by_field("type"),
                                     dims=dims.text.count("[") if dims is not None else 0)
            elif child.kind == "spread_parameter":
                names = [leaf for leaf in child.leaves() if leaf.kind == "identifier"]
                lowered = self.param(child, names[-1] if names else None, None)
            else:
                continue
            if lowered is not None:
                out.append(lowered)
        return out

    def declarators(self, node: SyntaxNode):
        out = []
        for declarator in node.children_by_field("declarator"):
            dims = declarator.child_by_field("dimensions")
            out.append((
                declarator.child_by_field("name"),
                declarator.child_by_field("value"),
                dims.text.count("[") if dims is not None else 0,
            ))
        return out

    def type_shape(self, node: SyntaxNode) -> Tuple[str, int]:
        if node.kind == "array_type":
            shape, dims = self.type_shape(node.child_by_field("element"))
            dimensions = node.child_by_field("dimensions")
            return shape, dims + (dimensions.text.count("[") if dimensions is not None else 1)
        if node.kind == "generic_type":
            base = [c for c in node.named_children if c.kind != "type_arguments"]
            return (re.sub(r"\s+", "", base[0].text) + "<>" if base else node.text), 0
        if node.kind == "scoped_type_identifier":
            return node.named_children[-1].text, 0
        return re.sub(r"\s+", "", node.text), 0

    def expression_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        named = node.named_children
        if len(named) == 1 and named[0].kind == "switch_expression":
            return self.switch_statement(named[0])
        return super().expression_statement(node)

    def receiver(self, node: SyntaxNode) -> SyntaxNode:
        return unode("u_empty", node)

    def enhanced_for(self, node: SyntaxNode) -> List[SyntaxNode]:
        return self.foreach(node, node.child_by_field("name"), node.child_by_field("value"), node.child_by_field("body"))

    def method_invocation(self, node: SyntaxNode) -> SyntaxNode:
        # the callee path is the receiver chain plus the method name
        callee = node.with_children([
            c for c in (node.child_by_field("object"), node.child_by_field("name")) if c is not None
        ])
        return self.call(node, callee, node.child_by_field("arguments"))

    def array_access(self, node: SyntaxNode) -> SyntaxNode:
        return self.subscript(node, node.child_by_field("array"), node.child_by_field("index"))

    def object_creation(self, node: SyntaxNode) -> SyntaxNode:
        if node.child_by_field("body") is not None:
            return self.raw(node)
        return self.call(node, node.child_by_field("type"), node.child_by_field("arguments"))

    def switch_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        subject = node.child_by_field("condition")
        body = node.child_by_field("body")
        groups = []
        for group in body.named_children if body is not None else []:
            if group.kind not in ("switch_block_statement_group", "switch_rule"):
                continue
            labels, is_default, statements = [], False, []
            for child in group.named_children:
                if child.kind == "switch_label":
                    if child.children and child.children[0].text == "default":
                        is_default = True
                    labels.extend(child.named_children)
                elif child.kind not in self.adapter.comment_kinds:
                    statements.append(child)
            groups.append((labels, is_default, statements))
        return self.switch(node, subject, groups)


class CSharpLowerer(BraceLowerer):
    language = LanguageId.CSHARP
    literal_kinds = get_adapter(LanguageId.CSHARP).literal_kinds
    type_kinds = frozenset({
        "predefined_type", "generic_name", "array_type", "nullable_type", "implicit_type",
        "qualified_name", "pointer_type",
    })
    update_kinds = frozenset({"postfix_unary_expression", "prefix_unary_expression"})
    declaration_kinds = frozenset({"variable_declaration", "local_declaration_statement"})
    statements = {
        **BraceLowerer.statements,
        "local_declaration_statement": "local_declaration",
        "foreach_statement": "foreach_statement",
        "switch_statement": "switch_statement",
    }
    expressions = {
        **BraceLowerer.expressions,
        "prefix_unary_expression": "unary",
        "invocation_expression": "invocation",
        "member_access_expression": "member",
        "element_access_expression": "element_access",
        "conditional_expression": "ternary",
        "object_creation_expression": "object_creation",
        "argument": "argument",
        "this_expression": "receiver",
        "this": "receiver",
        "boolean_literal": "literal",
        "null_literal": "literal",
    }

    def function_body(self, fn: SyntaxNode) -> SyntaxNode:
        body = fn.child_by_field("body")
        if body is None:
            arrow = [c for c in fn.named_children if c.kind == "arrow_expression_clause"]
            if arrow and arrow[0].named_children:
                value = self.expr(arrow[0].named_children[0])
                return unode("u_block", arrow[0], [unode("u_return", arrow[0], [tag("value", value)])])
            return unode("u_block", fn)
        return self.block(body)

    def params(self, fn: SyntaxNode) -> List[SyntaxNode]:
        out = []
        parameters = fn.child_by_field("parameters")
        for child in parameters.named_children if parameters is not None else []:
            if child.kind != "parameter":
                continue
            default = None
            children = child.children
            for index, grandchild in enumerate(children):
                if not grandchild.is_named and grandchild.text == "=" and index + 1 < len(children):
                    default = children[index + 1]
            lowered = self.param(child, child.child_by_field("name"), child.child_by_field("type"), default)
            if lowered is not None:
                out.append(lowered)
        return out

    def local_declaration(self, node: SyntaxNode) -> List[SyntaxNode]:
        declarations = [c for c in node.named_children if c.kind == "variable_declaration"]
        return self.declaration(declarations[0]) if declarations else [unode("u_raw_stmt", node, [self.raw(node)])]

    def declaration(self, node: SyntaxNode, type_field: Optional[SyntaxNode] = None) -> List[SyntaxNode]:
        if node.kind == "local_declaration_statement":
            return self.local_declaration(node)
        return super().declaration(node, type_field)

    def declarators(self, node: SyntaxNode):
        out = []
        for declarator in (c for c in node.named_children if c.kind == "variable_declarator"):
            name = declarator.child_by_field("name")
            if name is None:
                idents = [c for c in declarator.named_children if c.kind == "identifier"]
                name = idents[0] if idents else None
            value = declarator.child_by_field("value")
            children = declarator.children
            for index, child in enumerate(children):
                if value is not None:
                    break
                if child.kind == "equals_value_clause" and child.named_children:
                    value = child.named_children[0]
                elif not child.is_named and child.text == "=" and index + 1 < len(children):
                    value = children[index + 1]
            if name is not None:
                out.append((name, value, 0))
        return out

    def type_shape(self, node: SyntaxNode) -> Tuple[str, int]:
        if node.kind == "array_type":
            shape, dims = self.type_shape(node.child_by_field("type"))
            rank = node.child_by_field("rank")
            return shape, dims + 1 + (rank.text.count(",") if rank is not None else 0)
        if node.kind == "nullable_type":
            return self.type_shape(node.named_children[0])
        if node.kind == "generic_name":
            names = [c for c in node.named_children if c.kind == "identifier"]
            return (names[0].text + "<>" if names else node.text), 0
        return re.sub(r"\s+", "", node.text), 0

    def lower_type(self, node: Optional[SyntaxNode], dims: int = 0) -> SyntaxNode:
        # C# spells user type names as plain identifiers
        if node is not None and node.kind == "identifier":
            unified = self.matcher.type_for(node.text)
            if unified is not None:
                return unode("u_typeref", node, text=unified + "[]" * dims)
        return super().lower_type(node, dims)

    def receiver(self, node: SyntaxNode) -> SyntaxNode:
        return unode("u_empty", node)

    def argument(self, node: SyntaxNode) -> SyntaxNode:
        named = node.named_children
        if len(named) == 1:
            return self.expr(named[0])
        return self.raw(node)

    def unary(self, node: SyntaxNode) -> SyntaxNode:
        children = node.children
        if len(children) == 2 and not children[0].is_named and children[0].text in UNARY_OPERATORS:
            return unode("u_unary", node, [tag("operand", self.expr(children[1]))], op=children[0].text)
        return self.raw(node)

    def foreach_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        return self.foreach(node, node.child_by_field("left"), node.child_by_field("right"), node.child_by_field("body"))

    def invocation(self, node: SyntaxNode) -> SyntaxNode:
        return self.call(node, node.child_by_field("function"), node.child_by_field("arguments"))

    def element_access(self, node: SyntaxNode) -> SyntaxNode:
        subscript = node.child_by_field("subscript")
        arguments = self.arguments(subscript)
        return self.subscript(node, node.child_by_field("expression"), arguments[0] if len(arguments) == 1 else None)

    def object_creation(self, node: SyntaxNode) -> SyntaxNode:
        if node.child_by_field("initializer") is not None:
            return self.raw(node)
        return self.call(node, node.child_by_field("type"), node.child_by_field("arguments"))

    def switch_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        subject = node.child_by_field("value")
        if subject is None:
            subject = next((c for c in node.named_children if c.kind != "switch_body"), None)
        body = node.child_by_field("body") or next((c for c in node.named_children if c.kind == "switch_body"), None)
        if subject is None or body is None:
            return [unode("u_raw_stmt", node, [self.raw(node)])]

        groups = []
        for section in (c for c in body.named_children if c.kind == "switch_section"):
            labels, is_default, statements = [], False, []
            in_label = False
            for child in section.children:
                if not child.is_named:
                    if child.text == "case":
                        in_label = True
                    elif child.text == "default":
                        is_default = True
                    elif child.text == ":":
                        in_label = False
                    continue
                if child.kind == "case_switch_label":
                    labels.extend(child.named_children)
                elif child.kind == "default_switch_label":
                    is_default = True
                elif in_label:
                    labels.append(child.named_children[0] if child.kind == "constant_pattern" and child.named_children else child)
                elif child.kind not in self.adapter.comment_kinds:
                    statements.append(child)
            groups.append((labels, is_default, statements))
        return self.switch(node, subject, groups)


class CppLowerer(BraceLowerer):
    language = LanguageId.CPP
    literal_kinds = get_adapter(LanguageId.CPP).literal_kinds
    type_kinds = frozenset({
        "primitive_type", "type_identifier", "template_type", "sized_type_specifier",
        "placeholder_type_specifier", "type_descriptor", "auto",
    })
    declaration_kinds = frozenset({"declaration"})
    statements = {
        **BraceLowerer.statements,
        "declaration": "declaration",
        "for_range_loop": "range_loop",
        "switch_statement": "switch_statement",
    }
    expressions = {
        **BraceLowerer.expressions,
        "unary_expression": "unary",
        "call_expression": "call_expression",
        "field_expression": "member",
        "subscript_expression": "subscript_expression",
        "conditional_expression": "ternary",
        "this": "receiver",
        "true": "literal",
        "false": "literal",
        "null": "literal",
        "nullptr": "literal",
    }

    @staticmethod
    def _declared_name(declarator: Optional[SyntaxNode]) -> Tuple[Optional[SyntaxNode], int]:
        dims = 0
        while declarator is not None and declarator.kind not in IDENTIFIER_KINDS:
            if declarator.kind == "array_declarator":
                dims += 1
            inner = declarator.child_by_field("declarator")
            if inner is None:
                idents = [c for c in declarator.named_children if c.kind in IDENTIFIER_KINDS]
                inner = idents[0] if idents else None
            declarator = inner
        return declarator, dims

    def params(self, fn: SyntaxNode) -> List[SyntaxNode]:
        declarator = fn.child_by_field("declarator")
        while declarator is not None and declarator.kind != "function_declarator":
            declarator = declarator.child_by_field("declarator")
        parameters = declarator.child_by_field("parameters") if declarator is not None else None
        out = []
        for child in parameters.named_children if parameters is not None else []:
            if child.kind not in ("parameter_declaration", "optional_parameter_declaration"):
                continue
            name, dims = self._declared_name(child.child_by_field("declarator"))
            lowered = self.param(child, name, child.child_by_field("type"), child.child_by_field("default_value"), dims)
            if lowered is not None:
                out.append(lowered)
        return out

    def declarators(self, node: SyntaxNode):
        out = []
        for declarator in node.children_by_field("declarator"):
            value = None
            if declarator.kind == "init_declarator":
                value = declarator.child_by_field("value")
            name, dims = self._declared_name(declarator.child_by_field("declarator") if declarator.kind == "init_declarator" else declarator)
            if name is not None:
                out.append((name, value, dims))
        return out

    def type_shape(self, node: SyntaxNode) -> Tuple[str, int]:
        if node.kind == "template_type":
            name = node.child_by_field("name")
            return (re.sub(r"\s+", "", name.text) + "<>" if name is not None else node.text), 0
        if node.kind == "type_descriptor":
            inner = node.child_by_field("type")
            if inner is not None:
                return self.type_shape(inner)
        if node.kind == "placeholder_type_specifier":
            return "auto", 0
        return re.sub(r"\s+", "", node.text), 0

    def receiver(self, node: SyntaxNode) -> SyntaxNode:
        return unode("u_empty", node)

    def if_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        if any(not c.is_named and c.text == "constexpr" for c in node.children):
            return [unode("u_raw_stmt", node, [self.raw(node)])]
        return super().if_statement(node)

    def range_loop(self, node: SyntaxNode) -> List[SyntaxNode]:
        name, _ = self._declared_name(node.child_by_field("declarator"))
        return self.foreach(node, name, node.child_by_field("right"), node.child_by_field("body"))

    def call_expression(self, node: SyntaxNode) -> SyntaxNode:
        return self.call(node, node.child_by_field("function"), node.child_by_field("arguments"))

    def subscript_expression(self, node: SyntaxNode) -> SyntaxNode:
        index = node.child_by_field("index")
        if index is None:
            indices = node.child_by_field("indices")
            arguments = self.arguments(indices)
            index = arguments[0] if len(arguments) == 1 else None
        return self.subscript(node, node.child_by_field("argument"), index)

    def switch_statement(self, node: SyntaxNode) -> List[SyntaxNode]:
        subject = node.child_by_field("condition")
        body = node.child_by_field("body")
        groups = []
        for case in (c for c in (body.named_children if body is not None else []) if c.kind == "case_statement"):
            value = case.child_by_field("value")
            is_default = bool(case.children) and case.children[0].text == "default"
            statements = [
                c for c in case.named_children
                if c is not value and c.kind not in self.adapter.comment_kinds
            ]
            groups.append(([value] if value is not None else [], is_default, statements))
        return self.switch(node, subject, groups)


_LOWERERS = {
    LanguageId.PYTHON: PythonLowerer,
    LanguageId.JAVA: JavaLowerer,
    LanguageId.CSHARP: CSharpLowerer,
    LanguageId.CPP: CppLowerer,
}


def lowerer_for(registry: MorphemeRegistry, language: LanguageId) -> Lowerer:
    """A fresh lowerer; lowerers carry per-function state and are not shared"""
    return _LOWERERS[language](registry)
