"""
Noise Lab
Seeded corruptions: identifier obfuscation, line/token shuffles, keyword and
symbol deletion, and the denoising corruptions used to build training pairs
"""

import dataclasses
import logging
import re
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from models.distilled import (
    MASK, DistilledCode, DistilledToken, Literal, NameBag, StructMark, TypeRef, UnifiedKeyword,
)
from models.noise import NoiseSpec, RenameMap
from models.syntax import LanguageId, SourceFunction, SyntaxNode, Token, TokenKind
from tools.distilled_codec import escape
from tools.error_handler import ValidationError
from tools.grammar_adapters import IDENTIFIER_KINDS, get_adapter
from tools.identifiers import KEYWORDS
from tools.input_validator import InputValidator
from tools.syntax_frontend import detokenize, parse_function, tokenize

logger = logging.getLogger("noise_lab")

STRUCTURE_SYMBOLS = frozenset({"(", ")", "[", "]", "{", "}", ",", ".", ";"})
# tokens that close a statement for permutation purposes
SENTENCE_ENDS = frozenset({";", "{", "}"})
RECEIVERS = frozenset({"self", "cls", "this"})
_OBFUSCATED = re.compile(r"\b(?:FUNC|VAR)_\d+\b")


def rng_for(seed: int, record_index: Optional[int] = None) -> np.random.Generator:
    """PCG64 generator; per-record streams mix the record index into the seed"""
    seed = InputValidator.validate_seed(seed)
    if record_index is None:
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence([seed, int(record_index)]))


# ---------------------------------------------------------------------------
# Identifier obfuscation
# ---------------------------------------------------------------------------

# node kind -> fields holding the names it binds
DEFINITION_FIELDS: Dict[LanguageId, Dict[str, Tuple[str, ...]]] = {
    LanguageId.PYTHON: {
        "default_parameter": ("name",),
        "typed_default_parameter": ("name",),
        "assignment": ("left",),
        "for_statement": ("left",),
        "for_in_clause": ("left",),
        "named_expression": ("name",),
    },
    LanguageId.JAVA: {
        "formal_parameter": ("name",),
        "variable_declarator": ("name",),
        "enhanced_for_statement": ("name",),
        "catch_formal_parameter": ("name",),
    },
    LanguageId.CSHARP: {
        "parameter": ("name",),
        "variable_declarator": ("name",),
        "foreach_statement": ("left",),
        "catch_declaration": ("name",),
    },
    LanguageId.CPP: {
        "parameter_declaration": ("declarator",),
        "optional_parameter_declaration": ("declarator",),
        "init_declarator": ("declarator",),
        "declaration": ("declarator",),
        "for_range_loop": ("declarator",),
    },
}

# wrappers whose bound name sits further down
_DECLARATOR_KINDS = frozenset({
    "pointer_declarator", "reference_declarator", "array_declarator",
    "init_declarator", "parenthesized_declarator",
})
_PATTERN_KINDS = frozenset({
    "pattern_list", "tuple_pattern", "list_pattern", "tuple", "list",
    "list_splat_pattern", "dictionary_splat_pattern", "typed_parameter", "expression_list",
})
# positions where an identifier names a member or keyword argument rather than a variable
_MEMBER_FIELDS = frozenset({"attribute", "field"})


def _bound_identifiers(node: Optional[SyntaxNode]) -> Iterator[SyntaxNode]:
    if node is None:
        return
    if node.kind in IDENTIFIER_KINDS and not node.children:
        yield node
    elif node.kind in _DECLARATOR_KINDS:
        inner = node.child_by_field("declarator")
        if inner is None:
            inner = next(iter(node.named_children), None)
        yield from _bound_identifiers(inner)
    elif node.kind in _PATTERN_KINDS:
        for child in node.named_children:
            yield from _bound_identifiers(child)


def _definitions(fn_node: SyntaxNode, language: LanguageId) -> Tuple[List[str], List[str]]:
    """(function names, variable names) defined in a function, in source order"""
    adapter = get_adapter(language)
    fields = DEFINITION_FIELDS[language]
    functions: List[Tuple[int, str]] = []
    variables: List[Tuple[int, str]] = []

    for node in fn_node.walk():
        if node.kind in adapter.function_kinds:
            name = adapter.function_name(node)
            if name:
                functions.append((node.start, name))
        if language is LanguageId.PYTHON and node.kind in ("parameters", "lambda_parameters"):
            for param in node.named_children:
                for ident in _bound_identifiers(param):
                    variables.append((ident.start, ident.text))
        for field_name in fields.get(node.kind, ()):
            for target in node.children_by_field(field_name):
                for ident in _bound_identifiers(target):
                    variables.append((ident.start, ident.text))

    reserved = KEYWORDS[language] | RECEIVERS
    function_names = [name for _, name in sorted(functions)]
    seen = set(function_names)
    variable_names: List[str] = []
    for _, name in sorted(variables):
        if name not in seen and name not in reserved:
            seen.add(name)
            variable_names.append(name)
    return list(dict.fromkeys(function_names)), variable_names


def _renamable_leaves(node: SyntaxNode, parent: Optional[SyntaxNode] = None) -> Iterator[SyntaxNode]:
    if not node.children:
        if node.kind in IDENTIFIER_KINDS:
            if node.field_name in _MEMBER_FIELDS:
                return
            if parent is not None and parent.kind == "keyword_argument" and node.field_name == "name":
                return
            if parent is not None and parent.kind == "member_access_expression" and node.field_name == "name":
                return
            if parent is not None and parent.kind == "method_invocation" and node.field_name == "name" \
                    and parent.child_by_field("object") is not None:
                return
            yield node
        return
    for child in node.children:
        yield from _renamable_leaves(child, node)


def obfuscate_identifiers(fn: SourceFunction) -> Tuple[SourceFunction, RenameMap]:
    """Rename user-defined functions to FUNC_i and variables to VAR_i"""
    fn_node = parse_function(fn)
    function_names, variable_names = _definitions(fn_node, fn.language)

    renames = RenameMap()
    for name in function_names:
        renames.add_function(name)
    for name in variable_names:
        renames.add_variable(name)

    data = fn.body.encode("utf-8")
    edits = sorted(
        ((leaf.start, leaf.end, renames[leaf.text]) for leaf in _renamable_leaves(fn_node) if leaf.text in renames),
        reverse=True,
    )
    for start, end, replacement in edits:
        data = data[:start] + replacement.encode("utf-8") + data[end:]

    renamed = fn.with_body(data.decode("utf-8"), [])
    renamed = renamed.with_body(renamed.body, tokenize(renamed))
    logger.debug(f"Obfuscated {fn.name!r}: {len(function_names)} functions, {len(variable_names)} variables, "
                 f"{len(edits)} occurrences")
    return renamed, renames


def deobfuscate(text: str, renames: RenameMap) -> str:
    """Apply the inverse rename map to obfuscated text"""
    inverse = renames.inverse
    return _OBFUSCATED.sub(lambda m: inverse.get(m.group(0), m.group(0)), text)


# ---------------------------------------------------------------------------
# Source-side corruptions: shuffles and deletions
# ---------------------------------------------------------------------------

def shuffle_lines(fn: SourceFunction, seed: int) -> str:
    lines = fn.body.splitlines()
    order = rng_for(seed).permutation(len(lines))
    return "\n".join(lines[i] for i in order)


def shuffle_tokens(fn: SourceFunction, seed: int) -> str:
    tokens = [t.text for t in tokenize(fn)]
    order = rng_for(seed).permutation(len(tokens))
    return " ".join(tokens[i] for i in order)


def delete_keywords(fn: SourceFunction) -> str:
    kept = [t for t in tokenize(fn) if t.kind is not TokenKind.KEYWORD]
    return detokenize(kept, fn.language)


def delete_symbols(fn: SourceFunction) -> str:
    """Replace structure symbols with blanks; operators stay"""
    tokens: List[Token] = []
    for token in tokenize(fn):
        if token.kind is TokenKind.SYMBOL and token.text in STRUCTURE_SYMBOLS:
            token = dataclasses.replace(token, text=" ")
        tokens.append(token)
    return detokenize(tokens, fn.language)


# ---------------------------------------------------------------------------
# Denoising corruptions
# ---------------------------------------------------------------------------

def _sentences(tokens: Sequence[str]) -> List[Tuple[int, int]]:
    spans = []
    start = 0
    for index, token in enumerate(tokens):
        if token in SENTENCE_ENDS:
            spans.append((start, index + 1))
            start = index + 1
    if start < len(tokens):
        spans.append((start, len(tokens)))
    return spans


def _swap_order(count: int, ratio: float, rng: np.random.Generator) -> List[int]:
    """Identity order with adjacent pairs swapped, each with probability ``ratio``"""
    order = list(range(count))
    if ratio <= 0.0 or count < 2:
        return order
    draws = rng.random(count - 1)
    index = 0
    while index < count - 1:
        if draws[index] < ratio:
            order[index], order[index + 1] = order[index + 1], order[index]
            index += 2
        else:
            index += 1
    return order


def permute_sentences(tokens: List[str], flags: List[bool], ratio: float,
                      rng: np.random.Generator) -> Tuple[List[str], List[bool]]:
    """Swap adjacent statements, each pair with probability ``ratio``"""
    spans = _sentences(tokens)
    order = _swap_order(len(spans), ratio, rng)
    out_tokens: List[str] = []
    out_flags: List[bool] = []
    for i in order:
        start, end = spans[i]
        out_tokens.extend(tokens[start:end])
        out_flags.extend(flags[start:end])
    return out_tokens, out_flags


def permute_bag_words(tokens: List[str], flags: List[bool], ratio: float,
                      rng: np.random.Generator) -> List[str]:
    """Swap adjacent words inside one bag run, each pair with probability ``ratio``"""
    tokens = list(tokens)
    if ratio <= 0.0:
        return tokens
    draws = rng.random(max(len(tokens) - 1, 0))
    index = 0
    while index < len(tokens) - 1:
        if flags[index] and flags[index + 1] and draws[index] < ratio:
            tokens[index], tokens[index + 1] = tokens[index + 1], tokens[index]
            index += 2
        else:
            index += 1
    return tokens


def corrupt_dae(tokens: Sequence[str], spec: NoiseSpec, is_bow_region: Sequence[bool],
                rng: Optional[np.random.Generator] = None) -> List[str]:
    """Permute, locally shuffle, mask and drop tokens; bag words use the bag ratios"""
    if len(tokens) != len(is_bow_region):
        raise ValidationError("is_bow_region must have one flag per token", "is_bow_region")
    if MASK in tokens:
        raise ValidationError(f"input already contains the {MASK} sentinel", "tokens")
    rng = rng if rng is not None else rng_for(spec.seed)

    tokens, flags = permute_sentences(list(tokens), list(is_bow_region), spec.permute_ratio, rng)
    tokens = permute_bag_words(tokens, flags, spec.bow_permute_ratio, rng)
    order = window_shuffle(range(len(tokens)), spec.shuffle_window, rng)
    tokens, flags = [tokens[i] for i in order], [flags[i] for i in order]

    draws = rng.random(len(tokens))
    out: List[str] = []
    for token, bow, u in zip(tokens, flags, draws):
        mask, dropout = (spec.bow_mask_ratio, spec.bow_dropout_ratio) if bow else (spec.mask_ratio, spec.dropout_ratio)
        if u < mask:
            out.append(MASK)
        elif u < mask + dropout:
            continue
        else:
            out.append(token)
    return out


def _token_text(token: DistilledToken) -> str:
    if isinstance(token, UnifiedKeyword):
        return token.name
    if isinstance(token, TypeRef):
        return token.text
    if isinstance(token, Literal):
        return escape(token.text)
    return token.symbol


def dae_tokens(code: DistilledCode) -> Tuple[List[str], List[bool]]:
    """Flat token texts of distilled code with bags opened into ``{ w1 w2 }``"""
    tokens: List[str] = []
    flags: List[bool] = []
    for token in code.tokens:
        if isinstance(token, NameBag):
            tokens.append("{")
            flags.append(False)
            tokens.extend(token.words)
            flags.extend([True] * len(token.words))
            tokens.append("}")
            flags.append(False)
        else:
            tokens.append(_token_text(token))
            flags.append(False)
    return tokens, flags


def corrupt_distilled(code: DistilledCode, spec: NoiseSpec,
                      rng: Optional[np.random.Generator] = None) -> DistilledCode:
    """Structure-preserving corruption: marks survive and no bag is emptied"""
    rng = rng if rng is not None else rng_for(spec.seed)
    texts = ["{" if isinstance(t, NameBag) else _token_text(t) for t in code.tokens]
    spans = _sentences(texts)
    permuted = [code.tokens[i] for s in _swap_order(len(spans), spec.permute_ratio, rng) for i in range(*spans[s])]

    out: List[DistilledToken] = []
    for token in permuted:
        if isinstance(token, StructMark):
            out.append(token)
            continue
        if isinstance(token, NameBag):
            words = []
            for word, u in zip(token.words, rng.random(len(token.words))):
                if u < spec.bow_mask_ratio:
                    words.append(MASK)
                elif u >= spec.bow_mask_ratio + spec.bow_dropout_ratio:
                    words.append(word)
            out.append(NameBag(tuple(words or token.words[:1])))
            continue
        u = rng.random()
        if u < spec.mask_ratio:
            out.append(UnifiedKeyword(MASK))
        elif u >= spec.mask_ratio + spec.dropout_ratio:
            out.append(token)
    return DistilledCode(tokens=out, source_language=code.source_language, annotations=dict(code.annotations))


def shuffle_bag_words(code: DistilledCode, rng: np.random.Generator) -> DistilledCode:
    """Randomize word order inside every bag"""
    tokens = [
        NameBag(tuple(t.words[i] for i in rng.permutation(len(t.words)))) if isinstance(t, NameBag) else t
        for t in code.tokens
    ]
    return DistilledCode(tokens=tokens, source_language=code.source_language, annotations=dict(code.annotations))


def window_shuffle(tokens: Sequence, window: int, rng: np.random.Generator) -> List:
    """Local shuffle: no token moves more than ``window`` positions"""
    if window < 0:
        raise ValidationError("window must be non-negative", "window")
    if window == 0 or len(tokens) < 2:
        return list(tokens)
    keys = np.arange(len(tokens)) + rng.uniform(0, window + 1, len(tokens))
    return [tokens[i] for i in np.argsort(keys, kind="stable")]
