"""
Corpus Models
Training records, ingestion reports and corpus statistics
"""

import hashlib
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from models.syntax import LanguageId

SPLITS = ("train", "valid", "test")


def record_id(language: LanguageId, text: str) -> str:
    return hashlib.sha256(f"{language.value}\n{text}".encode("utf-8")).hexdigest()[:16]


def assign_split(rid: str) -> str:
    """96/2/2 train/valid/test, stable per id"""
    bucket = int(rid, 16) % 100
    if bucket < 96:
        return "train"
    if bucket < 98:
        return "valid"
    return "test"


@dataclass
class TranslationPair:
    id: str
    source_language: LanguageId
    lang_token: str
    distilled: str
    target: str
    split: str
    hits: Dict[str, int] = field(default_factory=lambda: {"unified": 0, "fuzzy": 0})

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["source_language"] = self.source_language.value
        return data


@dataclass
class MLMSample:
    id: str
    lang_token: str
    tokens: List[str]
    answers: List[List[Any]]
    split: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class DAESample:
    id: str
    lang_token: str
    input: List[str]
    target: List[str]
    split: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class IngestReport:
    functions: int = 0
    files: int = 0
    skips: Counter = field(default_factory=Counter)

    def skip(self, cause: str, count: int = 1):
        self.skips[cause] += count

    @property
    def skipped(self) -> int:
        return sum(self.skips.values())

    def to_dict(self) -> Dict[str, Any]:
        return {"functions": self.functions, "files": self.files, "skips": dict(self.skips)}


@dataclass
class CorpusStats:
    records: int = 0
    functions: Dict[str, int] = field(default_factory=dict)
    distilled_tokens: Dict[str, int] = field(default_factory=dict)
    source_tokens: Dict[str, int] = field(default_factory=dict)
    # distilled/source length ratio summary: min, mean, median, max
    length_ratio: Dict[str, float] = field(default_factory=dict)
    unified_hits: int = 0
    fuzzy_hits: int = 0
    splits: Dict[str, int] = field(default_factory=dict)

    @property
    def registry_hit_rate(self) -> Optional[float]:
        total = self.unified_hits + self.fuzzy_hits
        if total == 0:
            return None
        return self.unified_hits / total

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["registry_hit_rate"] = self.registry_hit_rate
        return data


@dataclass
class EmitReport:
    """Records written by one emitter plus skips by cause"""

    records: int = 0
    skips: Counter = field(default_factory=Counter)

    def skip(self, cause: str, count: int = 1):
        self.skips[cause] += count

    def to_dict(self) -> Dict[str, Any]:
        return {"records": self.records, "skips": dict(self.skips)}
