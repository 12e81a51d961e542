from collections import Counter

import pytest

from models.distilled import MASK, NameBag, StructMark
from models.noise import NoiseSpec, RenameMap
from tools.distiller import canonicalize, distill
from tools.error_handler import ValidationError
from tools.noise_lab import (
    corrupt_dae, corrupt_distilled, deobfuscate, delete_keywords, delete_symbols,
    obfuscate_identifiers, rng_for, shuffle_lines, shuffle_tokens, window_shuffle,
)
from tools.syntax_frontend import tokenize
from tests.conftest import only_function

SAMPLE = 20000


def spec(**ratios):
    values = dict(mask_ratio=0.0, dropout_ratio=0.0, permute_ratio=0.0,
                  bow_mask_ratio=0.0, bow_dropout_ratio=0.0, bow_permute_ratio=0.0, seed=7)
    values.update(ratios)
    return NoiseSpec(**values)


def sample_tokens(count=SAMPLE):
    tokens = [f"t{i}" for i in range(count)]
    flags = [i % 2 == 1 for i in range(count)]
    return tokens, flags


class TestNoiseSpec:
    """Test corruption configuration"""

    def test_zero_is_identity(self):
        """Test the all-zero noise setting"""
        assert NoiseSpec.zero().is_identity
        assert not NoiseSpec().is_identity

    def test_ratio_out_of_range(self):
        """Test that ratios outside [0, 1] are rejected"""
        with pytest.raises(ValidationError):
            spec(mask_ratio=1.5)

    def test_mask_and_dropout_validated_separately(self):
        """Test that each ratio is a probability of its own"""
        noisy = spec(mask_ratio=0.6, dropout_ratio=0.6)
        assert (noisy.mask_ratio, noisy.dropout_ratio) == (0.6, 0.6)
        with pytest.raises(ValidationError):
            spec(dropout_ratio=1.2)

    @pytest.mark.parametrize("window", [-1, 1.5, True])
    def test_bad_shuffle_window(self, window):
        """Test that the shuffle window is a non-negative integer"""
        with pytest.raises(ValidationError):
            spec(shuffle_window=window)

    def test_rename_map_numbering(self):
        """Test separate counters for functions and variables"""
        renames = RenameMap()
        assert renames.add_function("f") == "FUNC_0"
        assert renames.add_variable("x") == "VAR_0"
        assert renames.add_variable("y") == "VAR_1"
        assert renames.add_variable("x") == "VAR_0"
        assert renames.inverse["VAR_1"] == "y"
        assert len(renames) == 3


class TestObfuscation:
    """Test identifier renaming"""

    def test_two_sum(self, java_two_sum):
        """Test renaming and its inverse on the two-sum method"""
        fn = only_function(java_two_sum, "java")
        renamed, renames = obfuscate_identifiers(fn)
        assert renames["twoSum"] == "FUNC_0"
        for name in ("nums", "target", "i", "j"):
            assert renames[name].startswith("VAR_")
        assert "twoSum" not in renamed.body
        assert "FUNC_0" in renamed.body
        assert deobfuscate(renamed.body, renames) == fn.body

    def test_python_keeps_receivers_and_attributes(self):
        """Test that self and called library names are left alone"""
        fn = only_function("class A:\n    def f(self, n):\n        total = len(n)\n        return total\n", "python")
        renamed, renames = obfuscate_identifiers(fn)
        assert "self" not in renames
        assert "len(" in renamed.body
        assert deobfuscate(renamed.body, renames) == fn.body


class TestSourceCorruptions:
    """Test shuffles and deletions"""

    def test_shuffle_lines_keeps_lines(self, java_two_sum):
        """Test that a line shuffle is a permutation"""
        fn = only_function(java_two_sum, "java")
        shuffled = shuffle_lines(fn, 3)
        assert Counter(shuffled.splitlines()) == Counter(fn.body.splitlines())
        assert shuffled == shuffle_lines(fn, 3)

    def test_shuffle_tokens_keeps_tokens(self, java_two_sum):
        """Test that a token shuffle is a permutation"""
        fn = only_function(java_two_sum, "java")
        shuffled = shuffle_tokens(fn, 3)
        assert Counter(shuffled.split(" ")) == Counter(t.text for t in tokenize(fn))

    def test_delete_keywords(self, java_two_sum):
        """Test that keywords disappear and identifiers stay"""
        text = delete_keywords(only_function(java_two_sum, "java"))
        pieces = text.split()
        assert "return" not in pieces
        assert "for" not in pieces
        assert "nums" in pieces

    def test_delete_symbols(self, java_two_sum):
        """Test that structure symbols disappear and operators stay"""
        text = delete_symbols(only_function(java_two_sum, "java"))
        for symbol in "(){};,":
            assert symbol not in text
        assert "==" in text
        assert "+" in text


class TestDenoisingCorruption:
    """Test mask, dropout and permutation rates"""

    def test_zero_spec_is_identity(self):
        """Test that no noise leaves the sequence alone"""
        tokens, flags = sample_tokens(200)
        assert corrupt_dae(tokens, NoiseSpec.zero(), flags) == tokens

    def test_mask_rates(self):
        """Test the empirical mask rate outside and inside bags"""
        tokens, flags = sample_tokens()
        out = corrupt_dae(tokens, spec(mask_ratio=0.3, bow_mask_ratio=0.5), flags)
        assert len(out) == len(tokens)
        outside = [o for o, bow in zip(out, flags) if not bow]
        inside = [o for o, bow in zip(out, flags) if bow]
        assert outside.count(MASK) / len(outside) == pytest.approx(0.30, abs=0.02)
        assert inside.count(MASK) / len(inside) == pytest.approx(0.50, abs=0.02)

    def test_dropout_rate(self):
        """Test the empirical dropout rate"""
        tokens, flags = sample_tokens()
        out = corrupt_dae(tokens, spec(dropout_ratio=0.3), [False] * len(tokens))
        assert len(out) / len(tokens) == pytest.approx(0.70, abs=0.02)
        assert MASK not in out

    def test_mask_takes_precedence_over_dropout(self):
        """Test that overlapping ratios cap dropout at what masking leaves"""
        tokens = [f"t{i}" for i in range(SAMPLE)]
        out = corrupt_dae(tokens, spec(mask_ratio=0.6, dropout_ratio=0.6), [False] * SAMPLE)
        assert set(out) == {MASK}
        assert len(out) / SAMPLE == pytest.approx(0.60, abs=0.02)

    def test_local_shuffle(self):
        """Test that the shuffle window reorders tokens without moving them far"""
        tokens = [f"t{i}" for i in range(300)]
        out = corrupt_dae(tokens, spec(shuffle_window=3), [False] * len(tokens))
        assert out != tokens
        assert sorted(out) == sorted(tokens)
        assert all(abs(position - int(token[1:])) <= 3 for position, token in enumerate(out))

    def test_permutation_keeps_multiset(self):
        """Test that statement permutation only reorders"""
        texts = "a = 1 ; b = 2 ; c = 3 ; d = 4 ; e = 5 ;".split()
        out = corrupt_dae(texts, spec(permute_ratio=1.0), [False] * len(texts))
        assert Counter(out) == Counter(texts)
        assert out != texts

    def test_deterministic(self):
        """Test the same seed gives the same corruption"""
        tokens, flags = sample_tokens(500)
        assert corrupt_dae(tokens, NoiseSpec(seed=11), flags) == corrupt_dae(tokens, NoiseSpec(seed=11), flags)

    def test_flag_length_mismatch(self):
        """Test one flag per token"""
        with pytest.raises(ValidationError):
            corrupt_dae(["a", "b"], NoiseSpec(), [False])

    def test_sentinel_in_input(self):
        """Test that input may not already hold the mask token"""
        with pytest.raises(ValidationError):
            corrupt_dae(["a", MASK], NoiseSpec(), [False, False])

    def test_distilled_corruption_keeps_structure(self, registry, golden_functions):
        """Test that marks survive and bags never empty"""
        noisy = spec(mask_ratio=0.3, dropout_ratio=0.3, bow_mask_ratio=0.5, bow_dropout_ratio=0.5)
        for index, fn in enumerate(golden_functions[next(iter(golden_functions))]):
            code = canonicalize(distill(fn, registry))
            out = corrupt_distilled(code, noisy, rng_for(noisy.seed, index))
            assert [t for t in out.tokens if isinstance(t, StructMark)] == \
                [t for t in code.tokens if isinstance(t, StructMark)]
            assert all(t.words for t in out.tokens if isinstance(t, NameBag))
            assert out.is_balanced()


class TestRandomness:
    """Test seeded generators"""

    def test_record_streams(self):
        """Test per-record streams are reproducible and distinct"""
        assert rng_for(5, 0).random() == rng_for(5, 0).random()
        assert rng_for(5, 0).random() != rng_for(5, 1).random()

    def test_window_shuffle_bound(self):
        """Test that no token moves further than the window"""
        tokens = list(range(300))
        out = window_shuffle(tokens, 3, rng_for(1))
        assert sorted(out) == tokens
        assert all(abs(position - token) <= 3 for position, token in enumerate(out))
        assert window_shuffle(tokens, 0, rng_for(1)) == tokens
