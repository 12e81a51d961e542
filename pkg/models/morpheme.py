"""
Morpheme Models
One registry row per (language, category, surface) and the loaded registry
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from models.syntax import LanguageId

SLOT_PATTERN = re.compile(r"(?<![\w.])[abc](?!\w)")


class Category(str, Enum):
    OPERATOR = "operator"
    DATA_TYPE = "data_type"
    BUILTIN = "builtin"
    CONTROL = "control"


def slots_of(pattern: str) -> FrozenSet[str]:
    return frozenset(SLOT_PATTERN.findall(pattern))


def shape_key(pattern: str, category: "Category") -> str:
    """Index key of a pattern: whitespace and std:: removed; data types also drop their slot"""
    text = pattern.replace("std::", "")
    if category is Category.DATA_TYPE:
        text = SLOT_PATTERN.sub("", text)
    return re.sub(r"\s+", "", text)


@dataclass(frozen=True)
class MorphemeRule:
    language: LanguageId
    category: Category
    surface: str
    unified: str
    line_no: int = 0

    @property
    def slots(self) -> FrozenSet[str]:
        return slots_of(self.surface)

    @property
    def arity(self) -> int:
        return len(self.slots)

    @property
    def surface_key(self) -> str:
        return shape_key(self.surface, self.category)

    @property
    def unified_key(self) -> str:
        return shape_key(self.unified, self.category)

    @property
    def head(self) -> Optional[str]:
        """Call-form name of the unified pattern (``pow`` for ``pow(a,b)``), if any"""
        match = re.match(r"([A-Za-z_]\w*)\(", self.unified)
        return match.group(1) if match else None


@dataclass
class MorphemeRegistry:
    rules: List[MorphemeRule] = field(default_factory=list)
    index_forward: Dict[Tuple[LanguageId, Category, str], MorphemeRule] = field(default_factory=dict)
    index_reverse: Dict[Tuple[str, LanguageId], MorphemeRule] = field(default_factory=dict)
    # unified keys whose cell is "-" for a language
    absent: Dict[Tuple[str, LanguageId], Category] = field(default_factory=dict)
    source: str = "<memory>"

    def rules_for(self, language: LanguageId, category: Optional[Category] = None) -> List[MorphemeRule]:
        return [
            r for r in self.rules
            if r.language is language and (category is None or r.category is category)
        ]

    def heads(self) -> FrozenSet[str]:
        return frozenset(r.head for r in self.rules if r.head)

    def type_names(self) -> FrozenSet[str]:
        """Unified data-type heads, e.g. ``int`` or ``vector<>``"""
        return frozenset(
            r.unified_key for r in self.rules if r.category is Category.DATA_TYPE
        )

    def __len__(self) -> int:
        return len({(r.category, r.unified_key) for r in self.rules})
