"""
Cross-language properties over the golden corpus: the same functions written
in C++, Java, C# and Python using only registry morphemes and unified control flow.
"""

import time

import pytest

from models.syntax import LanguageId
from tools.distilled_codec import serialize
from tools.distiller import canonicalize, distill
from tools.identifiers import segment
from tools.scaffold_decompiler import decompile, round_trip_check
from tools.syntax_frontend import parse

LANGUAGES = [LanguageId.CPP, LanguageId.JAVA, LanguageId.CSHARP, LanguageId.PYTHON]


@pytest.fixture(scope="module")
def quadruples(golden_functions):
    lists = [golden_functions[language] for language in LANGUAGES]
    assert len({len(functions) for functions in lists}) == 1, "golden files differ in length"
    return list(zip(*lists))


class TestGoldenCorpus:
    """Test convergence and round trips on the golden corpus"""

    def test_corpus_size(self, quadruples):
        """Test there are at least forty quadruples"""
        assert len(quadruples) >= 40

    def test_quadruples_line_up(self, quadruples):
        """Test that each quadruple names the same function"""
        for quad in quadruples:
            assert len({tuple(segment(fn.name)) for fn in quad}) == 1, [fn.name for fn in quad]

    def test_canonical_forms_identical(self, quadruples, registry):
        """Test pairwise identical canonical distilled code"""
        started = time.monotonic()
        for quad in quadruples:
            forms = {fn.language.value: serialize(canonicalize(distill(fn, registry))) for fn in quad}
            assert len(set(forms.values())) == 1, forms
        assert time.monotonic() - started < 10.0

    @pytest.mark.slow
    @pytest.mark.parametrize("target", LANGUAGES, ids=lambda lang: lang.value)
    def test_round_trip_all_targets(self, golden_functions, registry, target):
        """Test the distilled-level round trip for every fixture and target"""
        failures = []
        for language in LANGUAGES:
            for fn in golden_functions[language]:
                report = round_trip_check(fn, target, registry)
                if not report.passed:
                    failures.append((language.value, fn.name, report.cause))
        assert failures == []

    @pytest.mark.parametrize("target", LANGUAGES, ids=lambda lang: lang.value)
    def test_decompiled_output_reparses(self, golden_functions, registry, target):
        """Test zero error nodes in every decompiled file"""
        for fn in golden_functions[LanguageId.JAVA]:
            text = decompile(canonicalize(distill(fn, registry)), target, registry)
            assert not parse(text, target).has_error, text
