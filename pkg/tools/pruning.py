"""
Syntax tree pruning
Drops language-specific node kinds while keeping names, types, keywords and structure
"""

import logging
from typing import Dict, FrozenSet, Optional

from models.syntax import LanguageId, SyntaxNode, SyntaxTree
from tools.input_validator import InputValidator

logger = logging.getLogger("pruning")

# Whole subtrees removed per language
PRUNE_KINDS: Dict[LanguageId, FrozenSet[str]] = {
    LanguageId.JAVA: frozenset({
        "modifiers", "marker_annotation", "annotation", "throws", "type_parameters",
    }),
    LanguageId.CSHARP: frozenset({
        "modifier", "attribute_list", "type_parameter_constraints_clause",
    }),
    LanguageId.CPP: frozenset({
        "storage_class_specifier", "type_qualifier", "virtual_specifier", "virtual",
        "attribute_specifier", "attribute_declaration", "ms_declspec_modifier",
        "explicit_function_specifier",
    }),
    LanguageId.PYTHON: frozenset({"decorator", "async"}),
}


def _replacement(node: SyntaxNode, language: LanguageId) -> Optional[SyntaxNode]:
    """Node that stands in for ``node`` after pruning, if any"""
    if language is LanguageId.CPP and node.kind == "qualified_identifier":
        scope = node.child_by_field("scope")
        name = node.child_by_field("name")
        if scope is not None and name is not None and scope.kind == "namespace_identifier":
            return name
    elif language is LanguageId.CSHARP and node.kind == "qualified_name":
        name = node.child_by_field("name") or (node.named_children[-1] if node.named_children else None)
        if name is not None:
            return name
    elif language is LanguageId.PYTHON and node.kind == "decorated_definition":
        return node.child_by_field("definition")
    return None


def _prune_node(node: SyntaxNode, language: LanguageId, drop: FrozenSet[str]) -> SyntaxNode:
    replacement = _replacement(node, language)
    if replacement is not None:
        return _prune_node(replacement.with_field(node.field_name), language, drop)

    if language is LanguageId.JAVA and node.kind == "wildcard":
        # keep the wildcard itself, drop its bound
        return node.with_children([c for c in node.children if c.text == "?"])

    children = [
        _prune_node(child, language, drop)
        for child in node.children
        if child.kind not in drop
    ]
    return node.with_children(children)


def prune_node(node: SyntaxNode, language) -> SyntaxNode:
    language = InputValidator.validate_language(language)
    return _prune_node(node, language, PRUNE_KINDS[language])


def prune(tree: SyntaxTree, language) -> SyntaxTree:
    """Return a pruned copy of ``tree``; parent/child order is preserved"""
    language = InputValidator.validate_language(language)
    root = _prune_node(tree.root, language, PRUNE_KINDS[language])
    return SyntaxTree(root=root, source=tree.source, language=language)
