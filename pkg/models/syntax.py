"""
Syntax Models
Language ids, syntax nodes and extracted source functions
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple


class LanguageId(str, Enum):
    """The four supported source languages"""

    CPP = "cpp"
    JAVA = "java"
    CSHARP = "csharp"
    PYTHON = "python"

    @property
    def lang_token(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    SYMBOL = "symbol"
    LITERAL = "literal"
    OTHER = "other"


@dataclass(frozen=True)
class Token:
    """A leaf token; depth/line are only meaningful for indentation-sensitive joins"""

    text: str
    kind: TokenKind
    line: int = 0
    depth: int = 0
    end_line: int = 0


@dataclass
class SyntaxNode:
    """Language-neutral tree node, converted from a grammar tree or built by a transform"""

    kind: str
    start: int
    end: int
    text: str
    children: List["SyntaxNode"] = field(default_factory=list)
    is_named: bool = True
    field_name: Optional[str] = None
    has_error: bool = False
    attrs: Dict[str, Any] = field(default_factory=dict)

    @property
    def span(self) -> Tuple[int, int]:
        return (self.start, self.end)

    @property
    def named_children(self) -> List["SyntaxNode"]:
        return [c for c in self.children if c.is_named]

    def child_by_field(self, name: str) -> Optional["SyntaxNode"]:
        for child in self.children:
            if child.field_name == name:
                return child
        return None

    def children_by_field(self, name: str) -> List["SyntaxNode"]:
        return [c for c in self.children if c.field_name == name]

    def walk(self) -> Iterator["SyntaxNode"]:
        """Pre-order traversal"""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> Iterator["SyntaxNode"]:
        for node in self.walk():
            if not node.children:
                yield node

    def find_all(self, kind: str) -> List["SyntaxNode"]:
        return [n for n in self.walk() if n.kind == kind]

    def with_children(self, children: List["SyntaxNode"]) -> "SyntaxNode":
        return SyntaxNode(
            kind=self.kind,
            start=self.start,
            end=self.end,
            text=self.text,
            children=children,
            is_named=self.is_named,
            field_name=self.field_name,
            has_error=self.has_error,
            attrs=dict(self.attrs),
        )

    def with_field(self, field_name: Optional[str]) -> "SyntaxNode":
        node = self.with_children(list(self.children))
        node.field_name = field_name
        return node


@dataclass
class SyntaxTree:
    root: SyntaxNode
    source: str
    language: LanguageId

    @property
    def has_error(self) -> bool:
        return self.root.has_error


@dataclass
class SourceFunction:
    language: LanguageId
    name: str
    body: str
    origin_path: str = "<text>"
    origin_span: Tuple[int, int] = (0, 0)
    tokens: List[Token] = field(default_factory=list)

    def with_body(self, body: str, tokens: List[Token]) -> "SourceFunction":
        return SourceFunction(
            language=self.language,
            name=self.name,
            body=body,
            origin_path=self.origin_path,
            origin_span=self.origin_span,
            tokens=tokens,
        )
