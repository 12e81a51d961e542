"""
Identifier segmentation and rendering
"""

import keyword
import re
from typing import Iterable, List

from models.syntax import LanguageId

_LOWER_UPPER = re.compile(r"(?<=[a-z])(?=[A-Z])")
_LETTER_DIGIT = re.compile(r"(?<=[A-Za-z])(?=[0-9])|(?<=[0-9])(?=[A-Za-z])")

JAVA_KEYWORDS = frozenset("""
abstract assert boolean break byte case catch char class const continue default do
double else enum extends final finally float for goto if implements import instanceof
int interface long native new package private protected public return short static
strictfp super switch synchronized this throw throws transient try void volatile while
true false null var record yield _
""".split())

CSHARP_KEYWORDS = frozenset("""
abstract as base bool break byte case catch char checked class const continue decimal
default delegate do double else enum event explicit extern false finally fixed float for
foreach goto if implicit in int interface internal is lock long namespace new null object
operator out override params private protected public readonly ref return sbyte sealed
short sizeof stackalloc static string struct switch this throw true try typeof uint ulong
unchecked unsafe ushort using virtual void volatile while var dynamic
""".split())

CPP_KEYWORDS = frozenset("""
alignas alignof and and_eq asm auto bitand bitor bool break case catch char char16_t
char32_t class compl const constexpr const_cast continue decltype default delete do
double dynamic_cast else enum explicit export extern false float for friend goto if
inline int long mutable namespace new noexcept not not_eq nullptr operator or or_eq
private protected public register reinterpret_cast return short signed sizeof static
static_assert static_cast struct switch template this thread_local throw true try
typedef typeid typename union unsigned using virtual void volatile wchar_t while xor
xor_eq string vector map set queue deque cout endl
""".split())

PYTHON_KEYWORDS = frozenset(keyword.kwlist) | frozenset({"print", "len", "range", "int", "str", "float", "bool"})

KEYWORDS = {
    LanguageId.JAVA: JAVA_KEYWORDS,
    LanguageId.CSHARP: CSHARP_KEYWORDS,
    LanguageId.CPP: CPP_KEYWORDS,
    LanguageId.PYTHON: PYTHON_KEYWORDS,
}


def segment(identifier: str) -> List[str]:
    """Split on underscores, lower->upper transitions and letter/digit boundaries; lowercase"""
    words: List[str] = []
    for part in identifier.split("_"):
        if not part:
            continue
        part = _LOWER_UPPER.sub(" ", part)
        part = _LETTER_DIGIT.sub(" ", part)
        words.extend(w.lower() for w in part.split())
    return words


# bag word of a name made only of separators, e.g. ``_``; renders back as ``_``
BLANK_WORD = "_"


def name_words(identifiers: Iterable[str]) -> List[str]:
    """Bag words of one name spelled by ``identifiers``; never empty"""
    words = [word for identifier in identifiers for word in segment(identifier)]
    return words or [BLANK_WORD]


def _ordered(words: Iterable[str]) -> List[str]:
    ordered = sorted(words)
    # identifiers cannot start with a digit
    for index, word in enumerate(ordered):
        if not word[:1].isdigit():
            if index:
                ordered.insert(0, ordered.pop(index))
            return ordered
    return ordered


def join_camel(words: List[str], capitalize_first: bool = False) -> str:
    parts: List[str] = []
    for index, word in enumerate(words):
        piece = word if index == 0 and not capitalize_first else word[:1].upper() + word[1:]
        # keep adjacent numbers apart
        if parts and piece[:1].isdigit() and parts[-1][-1:].isdigit():
            parts.append("_")
        parts.append(piece)
    return "".join(parts)


def join_snake(words: List[str]) -> str:
    return "_".join(words)


def render_name(words: Iterable[str], language: LanguageId, as_type: bool = False) -> str:
    """Render a name bag as an identifier in the target's naming style"""
    ordered = _ordered(words)
    if language in (LanguageId.JAVA, LanguageId.CSHARP):
        name = join_camel(ordered, capitalize_first=as_type)
    else:
        name = join_snake(ordered)
    if name[:1].isdigit():
        name = "_" + name
    if name in KEYWORDS[language]:
        name += "_"
    return name
