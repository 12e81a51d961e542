"""
Distilled code text format.

Tokens are space separated. A bag is written ``{w1 w2}`` with no space after
the opening brace, which tells it apart from a standalone ``{`` mark. A call-form
keyword is glued to its opening parenthesis (``pow(``). Whitespace inside
literals is escaped as ``\\u0020``-style codes.
"""

import logging
import re
from typing import List, Optional

from models.distilled import (
    CLOSE_SYMBOLS, CONTROL_KEYWORDS, MASK, OPEN_SYMBOLS, SEP_SYMBOLS, DistilledCode,
    DistilledToken, Literal, NameBag, StructMark, TypeRef, UnifiedKeyword,
)
from models.morpheme import MorphemeRegistry
from models.syntax import LanguageId
from tools.distiller import is_type_text, vocabulary
from tools.error_handler import MalformedDistilled
from tools.morpheme_registry import default_registry

logger = logging.getLogger("distilled_codec")

_ESCAPES = {" ": "\\u0020", "\t": "\\u0009", "\n": "\\u000a", "\r": "\\u000d"}
_UNESCAPES = {"005c": "\\", "0020": " ", "0009": "\t", "000a": "\n", "000d": "\r"}
_ESCAPED = re.compile(r"\\u(005c|0020|0009|000a|000d)")
_BAG = re.compile(r"\{([^\s{}]+(?: [^\s{}]+)*)\}")
_GLUED = re.compile(r"([A-Za-z_]\w*)\($")


def escape(text: str) -> str:
    text = text.replace("\\u", "\\u005cu")
    for raw, code in _ESCAPES.items():
        text = text.replace(raw, code)
    return text


def unescape(text: str) -> str:
    return _ESCAPED.sub(lambda m: _UNESCAPES[m.group(1)], text)


def _glues(token: DistilledToken, following: Optional[DistilledToken]) -> bool:
    return (
        isinstance(token, UnifiedKeyword)
        and token.name not in CONTROL_KEYWORDS
        and token.name[:1].isalpha()
        and isinstance(following, StructMark)
        and following.symbol == "("
    )


def serialize(code: DistilledCode) -> str:
    parts: List[str] = []
    tokens = code.tokens
    index = 0
    while index < len(tokens):
        token = tokens[index]
        following = tokens[index + 1] if index + 1 < len(tokens) else None
        if _glues(token, following):
            parts.append(f"{token.name}(")
            index += 2
            continue
        if isinstance(token, UnifiedKeyword):
            parts.append(token.name)
        elif isinstance(token, TypeRef):
            parts.append(token.text)
        elif isinstance(token, NameBag):
            parts.append("{" + " ".join(token.words) + "}")
        elif isinstance(token, Literal):
            parts.append(escape(token.text))
        elif isinstance(token, StructMark):
            parts.append(token.symbol)
        index += 1
    return " ".join(parts)


def _pieces(text: str) -> List[str]:
    """Split on whitespace, keeping bags (which contain spaces) whole"""
    pieces: List[str] = []
    position = 0
    length = len(text)
    while position < length:
        if text[position].isspace():
            position += 1
            continue
        if text[position] == "{" and position + 1 < length and not text[position + 1].isspace():
            match = _BAG.match(text, position)
            if match is None:
                raise MalformedDistilled("unterminated or empty name bag", position)
            pieces.append(match.group(0))
            position = match.end()
            continue
        end = position
        while end < length and not text[end].isspace():
            end += 1
        pieces.append(text[position:end])
        position = end
    return pieces


def deserialize(text: str, source_language: Optional[LanguageId] = None,
                registry: Optional[MorphemeRegistry] = None, strict: bool = False) -> DistilledCode:
    """Parse distilled text; ``strict`` also requires balanced structure marks"""
    registry = registry or default_registry()
    keywords = vocabulary(registry)
    tokens: List[DistilledToken] = []

    for piece in _pieces(text):
        if piece.startswith("{") and len(piece) > 1:
            tokens.append(NameBag(tuple(piece[1:-1].split(" "))))
            continue
        glued = _GLUED.match(piece)
        if glued is not None:
            tokens.append(UnifiedKeyword(glued.group(1)))
            tokens.append(StructMark.of("("))
            continue
        if piece in OPEN_SYMBOLS or piece in CLOSE_SYMBOLS or piece in SEP_SYMBOLS:
            tokens.append(StructMark.of(piece))
        elif piece == MASK:
            tokens.append(UnifiedKeyword(piece))
        # a head like int( is always glued, so a bare int is the type
        elif is_type_text(piece, registry):
            tokens.append(TypeRef(piece))
        elif piece in keywords:
            tokens.append(UnifiedKeyword(piece))
        else:
            tokens.append(Literal(unescape(piece)))

    code = DistilledCode(tokens=tokens, source_language=source_language)
    if strict and not code.is_balanced():
        raise MalformedDistilled("unbalanced structure marks")
    return code
