import math

import pytest

from tools.bleu import bleu, bleu_text, code_tokens, corpus_bleu
from tools.error_handler import EmptyReference, ValidationError


class TestBleu:
    """Test sentence and corpus BLEU"""

    @pytest.mark.parametrize("tokens", [
        ["a", "b", "c", "d"],
        "int f ( ) { return 1 ; }".split(),
        ["x"] * 7,
    ])
    def test_identity(self, tokens):
        """Test BLEU(x, x) = 100"""
        assert bleu(tokens, tokens) == pytest.approx(100.0)

    def test_disjoint(self):
        """Test that no shared tokens gives zero"""
        assert bleu(["x", "y", "z", "w"], ["a", "b", "c", "d"]) == 0.0

    def test_hand_computed(self):
        """Test one substituted token out of five.

        Matches are 4/5, 3/4, 2/3 and 1/2 for orders one to four; lengths are
        equal so there is no brevity penalty. The geometric mean is 0.2 ** 0.25.
        """
        score = bleu(["a", "b", "c", "d", "e"], ["a", "b", "c", "d", "f"])
        assert score == pytest.approx(100 * 0.2 ** 0.25, abs=1e-4)
        assert score == pytest.approx(66.8740, abs=1e-4)

    def test_brevity_penalty(self):
        """Test a correct but short hypothesis"""
        score = bleu(["a", "b", "c", "d"], ["a", "b", "c", "d", "e"])
        assert score == pytest.approx(100 * math.exp(1 - 5 / 4), abs=1e-4)

    def test_renaming_invariance(self):
        """Test that a shared bijective renaming leaves the score unchanged"""
        hypothesis = "int x = y + 1 ; return x ;".split()
        reference = "int x = y + 2 ; return x ;".split()
        renames = {"x": "VAR_0", "y": "VAR_1"}

        def rename(tokens):
            return [renames.get(t, t) for t in tokens]

        assert bleu(rename(hypothesis), rename(reference)) == pytest.approx(bleu(hypothesis, reference))

    def test_spaced_tokens_stay_whole(self):
        """Test that a string literal token is not split by the metric"""
        assert bleu(['"a b"', ";"], ['"a c"', ";"]) < 100.0
        assert bleu(['"a b"', "x"], ['"a b"', "x"]) == pytest.approx(100.0)

    def test_empty_inputs(self):
        """Test the empty hypothesis and reference cases"""
        assert bleu([], ["a"]) == 0.0
        with pytest.raises(EmptyReference):
            bleu(["a"], [])

    def test_bad_order(self):
        """Test that max_n must be positive"""
        with pytest.raises(ValidationError):
            bleu(["a"], ["a"], max_n=0)

    def test_corpus(self):
        """Test corpus BLEU over two segments"""
        segments = [["a", "b", "c", "d"], ["e", "f", "g", "h"]]
        assert corpus_bleu(segments, segments) == pytest.approx(100.0)
        with pytest.raises(ValidationError):
            corpus_bleu(segments, segments[:1])
        with pytest.raises(EmptyReference):
            corpus_bleu([["a"]], [[]])


class TestCodeTokens:
    """Test metric tokenization of code text"""

    def test_whitespace_insensitive(self):
        """Test that layout does not change the score"""
        compact = "int f(){return 1;}"
        spaced = "int f ( )\n{\n    return 1 ;\n}\n"
        assert code_tokens(compact, "cpp") == code_tokens(spaced, "cpp")
        assert bleu_text(compact, spaced, "cpp") == pytest.approx(100.0)

    def test_blank_text(self):
        """Test that blank text has no tokens"""
        assert code_tokens("  \n", "python") == []
