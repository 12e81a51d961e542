"""
Computational accuracy
Compiles and runs candidate programs against problem test cases
"""

import logging
import shlex
import sys
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from dotenv import dotenv_values

from config import config
from models.evaluation import (
    CAReport, EvalProblem, LanguageCommands, ProblemResult, RunnerConfig, RunOutcome,
)
from models.syntax import LanguageId
from tools.error_handler import IoFailure, RunnerFailure, ValidationError
from tools.input_validator import InputValidator
from tools.process_tracker import ProcessTracker
from tools.worker_pool import ordered_map

logger = logging.getLogger("ca_runner")

DEFAULT_FILENAMES = {
    LanguageId.PYTHON: "main.py",
    LanguageId.JAVA: "Main.java",
    LanguageId.CPP: "main.cpp",
    LanguageId.CSHARP: "Program.cs",
}

PLACEHOLDERS = ("{source}", "{workdir}", "{binary}")


def default_runner_config(timeout: Optional[float] = None) -> RunnerConfig:
    """Common local toolchains; Python runs on the current interpreter"""
    return RunnerConfig(
        commands={
            LanguageId.PYTHON: LanguageCommands("main.py", f"{shlex.quote(sys.executable)} {{source}}"),
            LanguageId.JAVA: LanguageCommands("Main.java", "java -cp {workdir} Main", "javac {source}"),
            LanguageId.CPP: LanguageCommands("main.cpp", "{binary}", "g++ -O2 -std=c++17 -o {binary} {source}"),
            LanguageId.CSHARP: LanguageCommands("Program.cs", "mono {binary}.exe", "mcs -out:{binary}.exe {source}"),
        },
        timeout=config.CA_TIMEOUT if timeout is None else timeout,
    )


def load_runner_config(path=None) -> RunnerConfig:
    """Read ``<LANG>_COMPILE``, ``<LANG>_RUN``, ``<LANG>_FILENAME`` and ``TIMEOUT`` from an env-style file"""
    path = path or config.RUNNER_CONFIG
    if not path:
        return default_runner_config()
    if not Path(path).is_file():
        raise IoFailure(str(path), "runner config not found")

    values = {k: v for k, v in dotenv_values(path).items() if v is not None}
    commands: Dict[LanguageId, LanguageCommands] = {}
    for language in LanguageId:
        prefix = language.value.upper()
        run = values.get(f"{prefix}_RUN")
        if not run:
            continue
        commands[language] = LanguageCommands(
            filename=values.get(f"{prefix}_FILENAME", DEFAULT_FILENAMES[language]),
            run=run,
            compile=values.get(f"{prefix}_COMPILE") or None,
        )
    try:
        timeout = float(values.get("TIMEOUT", config.CA_TIMEOUT))
        return RunnerConfig(commands=commands, timeout=timeout)
    except ValueError as e:
        raise ValidationError(f"Invalid runner config {path}: {e}", "runner_config")


def load_problems(directory) -> List[EvalProblem]:
    """One sub-directory per problem: reference files by extension, ``*.in``/``*.out`` test pairs"""
    root = Path(directory)
    if not root.is_dir():
        raise IoFailure(str(root), "problem directory not found")

    problems = []
    for folder in sorted(p for p in root.iterdir() if p.is_dir()):
        references: Dict[LanguageId, str] = {}
        for file in sorted(folder.iterdir()):
            language = InputValidator.EXTENSIONS.get(file.suffix.lower())
            if file.is_file() and language is not None:
                references[language] = file.read_text(encoding="utf-8")
        cases = []
        for case_in in sorted(folder.rglob("*.in")):
            case_out = case_in.with_suffix(".out")
            if case_out.is_file():
                cases.append((case_in.read_text(encoding="utf-8"), case_out.read_text(encoding="utf-8")))
        try:
            problems.append(EvalProblem(id=folder.name, references=references, test_cases=cases))
        except ValueError as e:
            raise ValidationError(str(e), "problems")
    logger.debug(f"Loaded {len(problems)} problems from {root}")
    return problems


def outputs_match(actual: str, expected: str) -> bool:
    """Equal after trimming trailing whitespace per line and trailing blank lines"""
    def normalize(text: str) -> List[str]:
        lines = [line.rstrip() for line in text.replace("\r\n", "\n").split("\n")]
        while lines and not lines[-1]:
            lines.pop()
        return lines
    return normalize(actual) == normalize(expected)


def _command(template: str, workdir: Path, filename: str) -> List[str]:
    values = {
        "{source}": str(workdir / filename),
        "{workdir}": str(workdir),
        "{binary}": str(workdir / Path(filename).stem),
    }
    parts = []
    for part in shlex.split(template):
        for placeholder in PLACEHOLDERS:
            part = part.replace(placeholder, values[placeholder])
        parts.append(part)
    return parts


class CandidateRunner:
    """Runs one program against a problem's test cases in a fresh temporary directory"""

    def __init__(self, runner: RunnerConfig, tracker: Optional[ProcessTracker] = None):
        self.runner = runner
        self.tracker = tracker or ProcessTracker()

    def _exec(self, language: LanguageId, command: List[str], workdir: Path, stdin: str = ""):
        try:
            return self.tracker.run(command, str(workdir), stdin, self.runner.timeout)
        except (FileNotFoundError, PermissionError):
            raise RunnerFailure(language.value, command[0])

    def run(self, source: str, language: LanguageId, problem: EvalProblem) -> RunOutcome:
        commands = self.runner.commands.get(language)
        if commands is None:
            raise RunnerFailure(language.value, "<not configured>")
        if not source.strip():
            return RunOutcome(False, "empty")

        with tempfile.TemporaryDirectory(prefix="polypivot-ca-") as tmp:
            workdir = Path(tmp)
            (workdir / commands.filename).write_text(source, encoding="utf-8")

            if commands.compile:
                result = self._exec(language, _command(commands.compile, workdir, commands.filename), workdir)
                if result.timed_out:
                    return RunOutcome(False, "compile_timeout")
                if result.returncode != 0:
                    return RunOutcome(False, "compile_error", result.stderr[-500:])

            run = _command(commands.run, workdir, commands.filename)
            for index, (stdin, expected) in enumerate(problem.test_cases):
                result = self._exec(language, run, workdir, stdin)
                if result.timed_out:
                    return RunOutcome(False, "timeout", f"case {index}")
                if result.returncode != 0:
                    return RunOutcome(False, "runtime_error", f"case {index}: {result.stderr[-500:]}")
                if not outputs_match(result.stdout, expected):
                    return RunOutcome(False, "wrong_answer", f"case {index}")
        return RunOutcome(True, "ok")


def verify_references(problems: Sequence[EvalProblem], runner: RunnerConfig,
                      languages: Optional[Sequence] = None) -> List[str]:
    """``problem:language`` labels of references that fail their own tests"""
    candidate_runner = CandidateRunner(runner)
    wanted = [InputValidator.validate_language(lang) for lang in languages] if languages else list(runner.commands)
    failures = []
    for problem in problems:
        for language, source in sorted(problem.references.items(), key=lambda item: item[0].value):
            if language not in wanted:
                continue
            outcome = candidate_runner.run(source, language, problem)
            if not outcome.passed:
                logger.warning(f"Reference {problem.id}/{language.value} fails: {outcome.status} {outcome.detail}")
                failures.append(f"{problem.id}:{language.value}")
    return failures


def compute_ca(candidates: Sequence[Sequence[str]], problems: Sequence[EvalProblem], runner: RunnerConfig,
               language, n: int = 1, jobs: Optional[int] = None) -> CAReport:
    """CA@n: a problem passes when any of its first ``n`` candidates passes every test case.

    ``candidates[i]`` is the preference-ordered list for ``problems[i]``. A
    missing toolchain is an infrastructure failure, listed apart from
    candidate failures.
    """
    language = InputValidator.validate_language(language)
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer", "n")
    if len(candidates) != len(problems):
        raise ValidationError("one candidate list per problem is required", "candidates")

    candidate_runner = CandidateRunner(runner)

    def evaluate(index: int) -> ProblemResult:
        problem = problems[index]
        result = ProblemResult(problem_id=problem.id, passed=False)
        for rank, source in enumerate(list(candidates[index])[:n]):
            outcome = candidate_runner.run(source, language, problem)
            result.outcomes.append(outcome)
            if outcome.passed:
                result.passed = True
                result.passing_rank = rank
                break
        return result

    def guarded(index: int):
        try:
            return evaluate(index), None
        except RunnerFailure as e:
            return ProblemResult(problem_id=problems[index].id, passed=False,
                                 outcomes=[RunOutcome(False, "infrastructure", e.message)]), problems[index].id

    report = CAReport(n=n)
    for result, failure in ordered_map(guarded, range(len(problems)), jobs):
        report.results.append(result)
        if failure is not None:
            report.infrastructure_failures.append(failure)

    logger.info(f"CA@{n} = {report.score:.4f} over {len(report.results)} problems "
                f"({len(report.infrastructure_failures)} infrastructure failures)")
    return report
