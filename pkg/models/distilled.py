"""
Distilled Code Models
Token variants of the language-agnostic pivot and the code container
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from models.syntax import LanguageId

MASK = "<mask>"

CONTROL_KEYWORDS = frozenset({
    "func", "param", "decl", "if", "elif", "else", "while", "for",
    "return", "break", "continue", "call", "assign",
})

OPERATORS = frozenset({
    "+", "-", "*", "/", "%", "**", "//",
    "==", "!=", "<", ">", "<=", ">=",
    "&&", "||", "!",
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=",
    "&", "|", "^", "~", "<<", ">>",
    "?", "in",
})


class MarkKind(str, Enum):
    OPEN = "OPEN"
    CLOSE = "CLOSE"
    SEP = "SEP"


OPEN_SYMBOLS = {"(": ")", "[": "]", "{": "}"}
CLOSE_SYMBOLS = {v: k for k, v in OPEN_SYMBOLS.items()}
SEP_SYMBOLS = frozenset({",", ";", ":"})


@dataclass(frozen=True)
class UnifiedKeyword:
    name: str


@dataclass(frozen=True)
class TypeRef:
    text: str


@dataclass(frozen=True)
class NameBag:
    words: Tuple[str, ...]

    def __post_init__(self):
        if not self.words:
            raise ValueError("NameBag must not be empty")

    def canonical(self) -> "NameBag":
        return NameBag(tuple(sorted(self.words)))


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class StructMark:
    kind: MarkKind
    symbol: str

    @classmethod
    def of(cls, symbol: str) -> "StructMark":
        if symbol in OPEN_SYMBOLS:
            return cls(MarkKind.OPEN, symbol)
        if symbol in CLOSE_SYMBOLS:
            return cls(MarkKind.CLOSE, symbol)
        if symbol in SEP_SYMBOLS:
            return cls(MarkKind.SEP, symbol)
        raise ValueError(f"Not a structure symbol: {symbol!r}")


DistilledToken = Union[UnifiedKeyword, TypeRef, NameBag, Literal, StructMark]


@dataclass
class DistilledCode:
    tokens: List[DistilledToken]
    # provenance only; None for text read back from a corpus
    source_language: Optional[LanguageId] = None
    # registry hits vs fuzzy fallbacks, filled by the distiller
    annotations: Dict[str, int] = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        # provenance and annotations are not part of the value
        if not isinstance(other, DistilledCode):
            return NotImplemented
        return self.tokens == other.tokens

    def __len__(self) -> int:
        return len(self.tokens)

    def is_balanced(self) -> bool:
        stack: List[str] = []
        for token in self.tokens:
            if not isinstance(token, StructMark):
                continue
            if token.kind is MarkKind.OPEN:
                stack.append(token.symbol)
            elif token.kind is MarkKind.CLOSE:
                if not stack or OPEN_SYMBOLS[stack.pop()] != token.symbol:
                    return False
        return not stack

    def name_words(self) -> List[str]:
        words: List[str] = []
        for token in self.tokens:
            if isinstance(token, NameBag):
                words.extend(token.words)
        return words

    def keywords(self) -> List[str]:
        return [t.name for t in self.tokens if isinstance(t, UnifiedKeyword)]


class NameStyle(str, Enum):
    CAMEL = "camel"
    SNAKE = "snake"


@dataclass(frozen=True)
class RenderContext:
    """How names and blocks are written for one target language"""

    target: LanguageId
    name_style: NameStyle
    indent: str = "    "

    @classmethod
    def for_target(cls, target: LanguageId) -> "RenderContext":
        style = NameStyle.CAMEL if target in (LanguageId.JAVA, LanguageId.CSHARP) else NameStyle.SNAKE
        return cls(target=target, name_style=style)


@dataclass
class RoundTripReport:
    """Outcome of distill -> decompile -> distill for one function"""

    target: LanguageId
    passed: bool
    original: str
    restored: Optional[str] = None
    rendered: Optional[str] = None
    cause: Optional[str] = None
    # the function needed fuzzy call fallbacks, so API calls are best-effort names
    fuzzy: bool = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "target": self.target.value,
            "passed": self.passed,
            "original": self.original,
            "restored": self.restored,
            "cause": self.cause,
            "fuzzy": self.fuzzy,
        }
