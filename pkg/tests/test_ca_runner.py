import shlex
import sys

import pytest

from models.evaluation import EvalProblem, LanguageCommands, RunnerConfig
from models.syntax import LanguageId
from tools.ca_runner import (
    CandidateRunner, compute_ca, default_runner_config, load_problems, load_runner_config,
    outputs_match, verify_references,
)
from tools.error_handler import IoFailure, ValidationError
from tools.process_tracker import ProcessTracker

# (id, reference, [(stdin, expected stdout), ...])
TOY_PROBLEMS = [
    ("add", "a, b = map(int, input().split())\nprint(a + b)\n", [("2 3\n", "5\n"), ("10 -4\n", "6\n")]),
    ("double", "print(2 * int(input()))\n", [("4\n", "8\n"), ("0\n", "0\n")]),
    ("upper", "print(input().upper())\n", [("abc\n", "ABC\n"), ("Hi\n", "HI\n")]),
    ("reverse", "print(input()[::-1])\n", [("abc\n", "cba\n"), ("xy\n", "yx\n")]),
    ("square", "n = int(input())\nprint(n * n)\n", [("5\n", "25\n"), ("12\n", "144\n")]),
    ("maximum", "print(max(map(int, input().split())))\n", [("3 9 2\n", "9\n"), ("1\n", "1\n")]),
    ("length", "print(len(input()))\n", [("hello\n", "5\n"), ("\n", "0\n")]),
    ("words", "print(len(input().split()))\n", [("a b c\n", "3\n"), ("one\n", "1\n")]),
    ("parity", "print('odd' if int(input()) % 2 else 'even')\n", [("7\n", "odd\n"), ("4\n", "even\n")]),
    ("factorial", "import math\nprint(math.factorial(int(input())))\n", [("5\n", "120\n"), ("0\n", "1\n")]),
]
BROKEN = "print('wrong')\n"


@pytest.fixture(scope="module")
def problems():
    return [
        EvalProblem(id=pid, references={LanguageId.PYTHON: source}, test_cases=cases)
        for pid, source, cases in TOY_PROBLEMS
    ]


@pytest.fixture(scope="module")
def python_runner():
    return RunnerConfig(
        commands={LanguageId.PYTHON: LanguageCommands("main.py", f"{shlex.quote(sys.executable)} {{source}}")},
        timeout=10.0,
    )


def references(problems):
    return [[p.references[LanguageId.PYTHON]] for p in problems]


@pytest.mark.toolchain
class TestComputeCA:
    """Test CA@N over toy Python problems"""

    def test_references_pass(self, problems, python_runner):
        """Test CA@1 = 1.0 when every candidate is the reference"""
        report = compute_ca(references(problems), problems, python_runner, "python", n=1, jobs=4)
        assert report.score == 1.0
        assert all(r.passing_rank == 0 for r in report.results)
        assert report.infrastructure_failures == []

    def test_partially_broken(self, problems, python_runner):
        """Test CA@1 = 0.6 with four broken top candidates"""
        candidates = [[BROKEN] if i < 4 else c for i, c in enumerate(references(problems))]
        report = compute_ca(candidates, problems, python_runner, "python", n=1, jobs=4)
        assert report.score == pytest.approx(0.6)
        assert [r.outcomes[0].status for r in report.results[:4]] == ["wrong_answer"] * 4

    def test_monotone_in_n(self, problems, python_runner):
        """Test that a later passing candidate counts once N reaches it"""
        candidates = [[BROKEN] + c if i < 4 else c for i, c in enumerate(references(problems))]
        at_1 = compute_ca(candidates, problems, python_runner, "python", n=1, jobs=4)
        at_2 = compute_ca(candidates, problems, python_runner, "python", n=2, jobs=4)
        assert at_1.score == pytest.approx(0.6)
        assert at_2.score == 1.0
        assert at_2.results[0].passing_rank == 1

    def test_runtime_error_and_timeout(self, problems):
        """Test crash and timeout statuses"""
        fast = RunnerConfig(
            commands={LanguageId.PYTHON: LanguageCommands("main.py", f"{shlex.quote(sys.executable)} {{source}}")},
            timeout=1.0,
        )
        runner = CandidateRunner(fast)
        assert runner.run("raise SystemExit(3)\n", LanguageId.PYTHON, problems[0]).status == "runtime_error"
        assert runner.run("while True:\n    pass\n", LanguageId.PYTHON, problems[0]).status == "timeout"
        assert runner.run("  \n", LanguageId.PYTHON, problems[0]).status == "empty"

    def test_missing_toolchain(self, problems):
        """Test that a missing interpreter is an infrastructure failure"""
        missing = RunnerConfig(commands={LanguageId.PYTHON: LanguageCommands("main.py", "polypivot-no-such-python {source}")})
        report = compute_ca(references(problems)[:2], problems[:2], missing, "python", n=1, jobs=1)
        assert report.infrastructure_failures == ["add", "double"]
        assert report.score == 0.0
        assert report.results[0].outcomes[0].status == "infrastructure"

    def test_verify_references(self, problems, python_runner):
        """Test that every toy reference passes its own tests"""
        assert verify_references(problems, python_runner) == []


class TestRunnerInputs:
    """Test problem loading, config loading and validation"""

    def test_candidate_count_mismatch(self, problems, python_runner):
        """Test one candidate list per problem"""
        with pytest.raises(ValidationError):
            compute_ca([], problems, python_runner, "python")

    def test_bad_n(self, problems, python_runner):
        """Test that n must be positive"""
        with pytest.raises(ValidationError):
            compute_ca(references(problems), problems, python_runner, "python", n=0)

    def test_permission_denied_is_infrastructure(self, problems, python_runner, mocker):
        """Test that an unlaunchable program never counts as a candidate failure"""
        mocker.patch.object(ProcessTracker, "run", side_effect=PermissionError("denied"))
        report = compute_ca(references(problems)[:3], problems[:3], python_runner, "python", jobs=1)
        assert report.infrastructure_failures == ["add", "double", "upper"]
        assert all(r.outcomes[0].status == "infrastructure" for r in report.results)

    def test_outputs_match(self):
        """Test trailing whitespace tolerance"""
        assert outputs_match("5  \r\n\n", "5\n")
        assert not outputs_match("5\n6\n", "5\n")

    def test_load_problems(self, tmp_path):
        """Test the per-problem directory layout"""
        folder = tmp_path / "p1"
        (folder / "tests").mkdir(parents=True)
        (folder / "ref.py").write_text("print(1)\n")
        (folder / "tests" / "1.in").write_text("")
        (folder / "tests" / "1.out").write_text("1\n")
        loaded = load_problems(tmp_path)
        assert [p.id for p in loaded] == ["p1"]
        assert loaded[0].references[LanguageId.PYTHON] == "print(1)\n"
        assert loaded[0].test_cases == [("", "1\n")]

    def test_problem_without_cases(self, tmp_path):
        """Test that a problem needs test cases"""
        (tmp_path / "p1").mkdir()
        with pytest.raises(ValidationError):
            load_problems(tmp_path)

    def test_missing_problem_dir(self, tmp_path):
        """Test a problem directory that does not exist"""
        with pytest.raises(IoFailure):
            load_problems(tmp_path / "absent")

    def test_load_runner_config(self, tmp_path):
        """Test reading commands from an env-style file"""
        path = tmp_path / "runner.env"
        path.write_text('PYTHON_RUN="python3 {source}"\nCPP_COMPILE="g++ -o {binary} {source}"\n'
                        'CPP_RUN="{binary}"\nTIMEOUT=2.5\n')
        runner = load_runner_config(path)
        assert runner.timeout == 2.5
        assert runner.commands[LanguageId.PYTHON].filename == "main.py"
        assert runner.commands[LanguageId.CPP].compile == "g++ -o {binary} {source}"
        assert LanguageId.JAVA not in runner.commands

    def test_runner_config_without_source(self, tmp_path):
        """Test that a command set must reference the source file"""
        path = tmp_path / "runner.env"
        path.write_text('PYTHON_RUN="python3 main.py"\n')
        with pytest.raises(ValidationError):
            load_runner_config(path)

    def test_default_runner_config(self):
        """Test that the defaults cover every language"""
        assert set(default_runner_config(3.0).commands) == set(LanguageId)
