import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from models.syntax import LanguageId
from tools.morpheme_registry import default_registry
from tools.syntax_frontend import extract_functions, parse

FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = FIXTURES / "golden"

GOLDEN_FILES = {
    LanguageId.CPP: GOLDEN / "corpus.cpp",
    LanguageId.JAVA: GOLDEN / "corpus.java",
    LanguageId.CSHARP: GOLDEN / "corpus.cs",
    LanguageId.PYTHON: GOLDEN / "corpus.py",
}


def functions_from(source: str, language):
    """Extract every clean function of a snippet"""
    tree = parse(source, language)
    return extract_functions(tree, source, language)


def only_function(source: str, language):
    functions = functions_from(source, language)
    assert len(functions) == 1, f"expected one function, got {[f.name for f in functions]}"
    return functions[0]


@pytest.fixture(scope="session")
def registry():
    """The shipped morpheme registry"""
    return default_registry()


@pytest.fixture(scope="session")
def golden_functions():
    """Golden corpus functions per language, in source order"""
    return {
        language: functions_from(path.read_text(encoding="utf-8"), language)
        for language, path in GOLDEN_FILES.items()
    }


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    import tempfile
    with tempfile.TemporaryDirectory() as tmpdir:
        original_cwd = os.getcwd()
        os.chdir(tmpdir)
        try:
            yield Path(tmpdir)
        finally:
            os.chdir(original_cwd)


@pytest.fixture
def java_two_sum():
    return (
        "class Solution {\n"
        "    static int[] twoSum(int[] nums, int target) {\n"
        "        for (int i = 0; i < nums.length; i++) {\n"
        "            for (int j = i + 1; j < nums.length; j++) {\n"
        "                if (nums[i] + nums[j] == target) {\n"
        "                    return new int[] {i, j};\n"
        "                }\n"
        "            }\n"
        "        }\n"
        "        return new int[] {};\n"
        "    }\n"
        "}\n"
    )


@pytest.fixture
def python_add():
    return "def add_numbers(first_value, second_value):\n    return first_value + second_value\n"
