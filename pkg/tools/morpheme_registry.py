"""
Morpheme Registry
Loads the unification tables, answers forward/reverse lookups and matches
registry patterns structurally against syntax trees
"""

import logging
import re
import threading
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from config import config
from models.morpheme import (
    SLOT_PATTERN, Category, MorphemeRegistry, MorphemeRule, shape_key, slots_of,
)
from models.syntax import LanguageId, SyntaxNode
from tools.error_handler import (
    DuplicateRule, IoFailure, MalformedRow, ParseFailure, SlotMismatch, ValidationError,
)
from tools.grammar_adapters import IDENTIFIER_KINDS, get_adapter
from tools.input_validator import InputValidator
from tools.pruning import prune_node

logger = logging.getLogger("morpheme_registry")

# column order of the registry file after the category and unified columns
COLUMN_LANGUAGES = (LanguageId.CPP, LanguageId.JAVA, LanguageId.CSHARP, LanguageId.PYTHON)
ABSENT = "-"


def parse_registry(text: str, source: str = "<memory>") -> MorphemeRegistry:
    registry = MorphemeRegistry(source=source)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue

        fields = line.split("\t")
        if len(fields) != 2 + len(COLUMN_LANGUAGES):
            raise MalformedRow(line_no, f"expected {2 + len(COLUMN_LANGUAGES)} tab-separated fields, got {len(fields)}")
        category_text, unified, *cells = [f.strip() for f in fields]

        try:
            category = Category(category_text)
        except ValueError:
            raise MalformedRow(line_no, f"unknown category {category_text!r}")
        if not unified or unified == ABSENT:
            raise MalformedRow(line_no, "unified form is empty")

        unified_slots = slots_of(unified)
        for language, surface in zip(COLUMN_LANGUAGES, cells):
            if not surface:
                raise MalformedRow(line_no, f"empty cell for {language.value}")
            if surface == ABSENT:
                registry.absent[(shape_key(unified, category), language)] = category
                continue
            if slots_of(surface) != unified_slots:
                raise SlotMismatch(surface, unified, line_no)

            rule = MorphemeRule(language, category, surface, unified, line_no)
            forward_key = (language, category, rule.surface_key)
            if forward_key in registry.index_forward:
                raise DuplicateRule(language.value, category.value, surface, line_no)
            registry.index_forward[forward_key] = rule

            reverse_key = (rule.unified_key, language)
            if reverse_key in registry.index_reverse:
                logger.warning(
                    f"Line {line_no}: second {language.value} surface for {unified!r}; "
                    f"reverse lookups keep {registry.index_reverse[reverse_key].surface!r}"
                )
            else:
                registry.index_reverse[reverse_key] = rule
            registry.rules.append(rule)

    logger.debug(f"Loaded {len(registry.rules)} morpheme rules from {source}")
    return registry


def load_registry(source=None) -> MorphemeRegistry:
    """Load a registry file; defaults to the shipped tables"""
    path = Path(source or config.REGISTRY_PATH)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoFailure(str(path), str(e))
    return parse_registry(text, str(path))


_default_registry: Optional[MorphemeRegistry] = None
_default_lock = threading.Lock()


def default_registry() -> MorphemeRegistry:
    global _default_registry
    with _default_lock:
        if _default_registry is None:
            _default_registry = load_registry()
        return _default_registry


def instantiate(pattern: str, args: Mapping[str, str]) -> str:
    return SLOT_PATTERN.sub(lambda m: args[m.group(0)], pattern)


def _check_args(rule: MorphemeRule, args: Mapping[str, str]):
    if set(args) != set(rule.slots):
        raise ValidationError(
            f"Arguments {sorted(args)} do not bind the slots {sorted(rule.slots)} of {rule.surface!r}",
            "args",
        )


def lookup(registry: MorphemeRegistry, language, category, surface: str,
           args: Optional[Mapping[str, str]] = None) -> Optional[str]:
    """Unified text for a surface form, or None when no rule matches"""
    language = InputValidator.validate_language(language)
    category = Category(category)
    rule = registry.index_forward.get((language, category, shape_key(surface, category)))
    if rule is None:
        return None
    args = dict(args or {})
    _check_args(rule, args)
    return instantiate(rule.unified, args)


def reverse_rule(registry: MorphemeRegistry, unified: str, target) -> Optional[MorphemeRule]:
    target = InputValidator.validate_language(target)
    for category in (Category.OPERATOR, Category.DATA_TYPE):
        rule = registry.index_reverse.get((shape_key(unified, category), target))
        if rule is not None and (rule.category is Category.DATA_TYPE) == (category is Category.DATA_TYPE):
            return rule
    return None


def reverse_lookup(registry: MorphemeRegistry, unified: str, target,
                   args: Optional[Mapping[str, str]] = None) -> Optional[str]:
    """Target-language surface for a unified form, or None where the cell is absent"""
    rule = reverse_rule(registry, unified, target)
    if rule is None:
        return None
    args = dict(args or {})
    _check_args(rule, args)
    return instantiate(rule.surface, args)


def is_absent(registry: MorphemeRegistry, unified: str, target: LanguageId) -> bool:
    return any(
        (shape_key(unified, category), target) in registry.absent
        for category in (Category.OPERATOR, Category.DATA_TYPE)
    )


# ---------------------------------------------------------------------------
# Structural matching
# ---------------------------------------------------------------------------

# expression contexts used to parse surface patterns
_PATTERN_CONTEXT = {
    LanguageId.PYTHON: ("", "\n"),
    LanguageId.JAVA: ("class __P { Object __p() { return ", "; } }\n"),
    LanguageId.CSHARP: ("class __P { object __p() { return ", "; } }\n"),
    LanguageId.CPP: ("auto __p() { return ", "; }\n"),
}

# python strings compare quote-insensitively
STRING_KINDS = frozenset({"string"})

# argument forms a slot never stands for
_UNBINDABLE = frozenset({
    "keyword_argument", "list_splat", "dictionary_splat", "parenthesized_list_splat",
    "spread_element", "comment",
})


def _pattern_expression(root: SyntaxNode, language: LanguageId) -> Optional[SyntaxNode]:
    if language is LanguageId.PYTHON:
        for node in root.walk():
            if node.kind == "expression_statement":
                return node.named_children[0] if node.named_children else None
        return None
    for node in root.walk():
        if node.kind == "return_statement":
            named = node.named_children
            return named[0] if named else None
    return None


def _size(node: SyntaxNode) -> int:
    return sum(1 for _ in node.walk())


def direct_call_slots(unified: str) -> frozenset:
    """Slots that appear as a whole argument of a call in a pattern"""
    return frozenset(
        m.group(1) for m in re.finditer(r"(?<=[(,])\s*([abc])\s*(?=[,)])", unified)
    )


def leaf_text(node: SyntaxNode) -> str:
    """Leaf text with single-quoted strings normalized to double quotes"""
    text = node.text
    if len(text) >= 2 and text[0] == text[-1] == "'" and node.kind in STRING_KINDS:
        return '"' + text[1:-1].replace('"', '\\"') + '"'
    return text


def tokens_equal(a: SyntaxNode, b: SyntaxNode) -> bool:
    return [leaf_text(leaf) for leaf in a.leaves()] == [leaf_text(leaf) for leaf in b.leaves()]


class MorphemeMatcher:
    """Matches operator and builtin rules of one language against syntax nodes"""

    def __init__(self, registry: MorphemeRegistry, language):
        self.registry = registry
        self.language = InputValidator.validate_language(language)
        self._patterns: Dict[str, List[Tuple[MorphemeRule, SyntaxNode]]] = {}
        self._types: Dict[str, str] = {
            rule.surface_key: rule.unified_key
            for rule in registry.rules_for(self.language, Category.DATA_TYPE)
        }
        self._compile()

    def _compile(self):
        adapter = get_adapter(self.language)
        prefix, suffix = _PATTERN_CONTEXT[self.language]
        compiled = []
        for rule in self.registry.rules_for(self.language):
            if rule.category is Category.DATA_TYPE:
                continue
            source = f"{prefix}{rule.surface}{suffix}".encode("utf-8")
            root = adapter.parse_bytes(source)
            expression = _pattern_expression(root, self.language)
            if root.has_error or expression is None:
                raise ParseFailure(f"Registry pattern {rule.surface!r} does not parse as {self.language.value}")
            compiled.append((rule, prune_node(expression, self.language)))

        # larger patterns first so println(a) wins over print(a)
        compiled.sort(key=lambda item: -_size(item[1]))
        for rule, pattern in compiled:
            self._patterns.setdefault(pattern.kind, []).append((rule, pattern))

    def type_for(self, shape: str) -> Optional[str]:
        """Unified data type for a type/initializer shape such as ``HashMap<>`` or ``=[]``"""
        return self._types.get(shape.replace("std::", ""))

    def match(self, node: SyntaxNode) -> Optional[Tuple[MorphemeRule, Dict[str, SyntaxNode]]]:
        for rule, pattern in self._patterns.get(node.kind, ()):
            bindings: Dict[str, SyntaxNode] = {}
            if self._match(pattern, node, rule.slots, bindings):
                direct = direct_call_slots(rule.unified)
                for slot, bound in list(bindings.items()):
                    while slot in direct and bound.kind == "parenthesized_expression" and len(bound.named_children) == 1:
                        bound = bound.named_children[0]
                    bindings[slot] = bound
                return rule, bindings
        return None

    def _match(self, pattern: SyntaxNode, node: SyntaxNode, slots, bindings) -> bool:
        if pattern.kind in IDENTIFIER_KINDS and not pattern.children and pattern.text in slots:
            if not node.is_named or node.kind in _UNBINDABLE:
                return False
            bound = bindings.get(pattern.text)
            if bound is not None:
                return tokens_equal(bound, node)
            bindings[pattern.text] = node
            return True

        if pattern.kind != node.kind:
            return False
        if not pattern.children or not node.children:
            return not pattern.children and not node.children and leaf_text(pattern) == leaf_text(node)

        pattern_children = [c for c in pattern.children if c.start != c.end]
        node_children = [c for c in node.children if c.start != c.end]
        if len(pattern_children) != len(node_children):
            return False
        return all(
            self._match(p, n, slots, bindings)
            for p, n in zip(pattern_children, node_children)
        )


_matchers: Dict[Tuple[int, LanguageId], MorphemeMatcher] = {}
_matchers_lock = threading.Lock()


def matcher_for(registry: MorphemeRegistry, language) -> MorphemeMatcher:
    """Compiled matcher, cached per (registry, language)"""
    language = InputValidator.validate_language(language)
    key = (id(registry), language)
    with _matchers_lock:
        matcher = _matchers.get(key)
        if matcher is None or matcher.registry is not registry:
            matcher = MorphemeMatcher(registry, language)
            _matchers[key] = matcher
        return matcher
