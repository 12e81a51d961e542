"""
BLEU over pre-tokenized code, computed by sacrebleu
"""

import logging
import re
from functools import lru_cache
from typing import List, Sequence

from sacrebleu.metrics import BLEU

from tools.error_handler import EmptyReference, ValidationError
from tools.syntax_frontend import tokenize_text

logger = logging.getLogger("bleu")

# tokens may contain spaces (string literals); keep them one token for the metric
_WHITESPACE = re.compile(r"\s")
_SPACE_MARK = "▁"


def _joined(tokens: Sequence[str]) -> str:
    return " ".join(_WHITESPACE.sub(_SPACE_MARK, t) for t in tokens)


@lru_cache(maxsize=8)
def _metric(max_n: int, sentence: bool) -> BLEU:
    return BLEU(tokenize="none", smooth_method="none", max_ngram_order=max_n, effective_order=sentence)


def _check_order(max_n: int):
    if not isinstance(max_n, int) or max_n < 1:
        raise ValidationError("max_n must be a positive integer", "max_n")


def bleu(hypothesis: Sequence[str], reference: Sequence[str], max_n: int = 4) -> float:
    """Sentence BLEU in [0, 100] with uniform weights and brevity penalty"""
    _check_order(max_n)
    if not reference:
        raise EmptyReference()
    if not hypothesis:
        return 0.0
    return _metric(max_n, True).sentence_score(_joined(hypothesis), [_joined(reference)]).score


def corpus_bleu(hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]], max_n: int = 4) -> float:
    """Corpus BLEU: n-gram statistics summed over all segments before scoring"""
    _check_order(max_n)
    if len(hypotheses) != len(references):
        raise ValidationError("hypotheses and references differ in length", "references")
    if not references or any(not r for r in references):
        raise EmptyReference()
    result = _metric(max_n, False).corpus_score(
        [_joined(h) for h in hypotheses], [[_joined(r) for r in references]],
    )
    return result.score


def code_tokens(text: str, language) -> List[str]:
    """Tokens of a code snippet; the metric ignores whitespace and layout"""
    if not text.strip():
        return []
    return [t.text for t in tokenize_text(text, language)]


def bleu_text(hypothesis: str, reference: str, language, max_n: int = 4) -> float:
    return bleu(code_tokens(hypothesis, language), code_tokens(reference, language), max_n)
