"""
Evaluation Models
Problems, runner configuration and result reports
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from models.syntax import LanguageId


@dataclass
class EvalProblem:
    id: str
    references: Dict[LanguageId, str]
    # (stdin text, expected stdout text)
    test_cases: List[Tuple[str, str]]

    def __post_init__(self):
        if not self.test_cases:
            raise ValueError(f"Problem {self.id} has no test cases")


@dataclass
class LanguageCommands:
    filename: str
    run: str
    compile: Optional[str] = None


@dataclass
class RunnerConfig:
    commands: Dict[LanguageId, LanguageCommands]
    timeout: float = 5.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be greater than 0")
        for language, cmds in self.commands.items():
            templates = [cmds.run] + ([cmds.compile] if cmds.compile else [])
            if not any("{source}" in t for t in templates):
                raise ValueError(f"Commands for {language} never reference {{source}}")


@dataclass
class RunOutcome:
    passed: bool
    status: str
    detail: str = ""


@dataclass
class ProblemResult:
    problem_id: str
    passed: bool
    # index of the first passing candidate within the top N
    passing_rank: Optional[int] = None
    outcomes: List[RunOutcome] = field(default_factory=list)


@dataclass
class CAReport:
    n: int
    results: List[ProblemResult] = field(default_factory=list)
    infrastructure_failures: List[str] = field(default_factory=list)

    @property
    def passes(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def score(self) -> float:
        if not self.results:
            return 0.0
        return self.passes / len(self.results)


@dataclass
class RetrievalReport:
    k: int
    precision_at_k: float
    mean_average_precision: float
    mean_reciprocal_rank: float

    def to_dict(self) -> Dict[str, float]:
        return {
            f"precision@{self.k}": self.precision_at_k,
            "map": self.mean_average_precision,
            "mrr": self.mean_reciprocal_rank,
        }
