"""
Pair file format: one JSON object per line, UTF-8, newlines escaped by JSON
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Tuple

from models.corpus import SPLITS
from models.syntax import LanguageId
from tools.error_handler import IoFailure, MalformedRecord

logger = logging.getLogger("pair_codec")

PAIR_FIELDS = ("id", "source_language", "lang_token", "distilled", "target", "split")


def encode_record(record: Dict[str, Any]) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def write_records(records: Iterable[Any], path) -> int:
    """Write records (dataclasses with ``to_dict`` or plain dicts); returns the count"""
    path = Path(path)
    count = 0
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as f:
            for record in records:
                data = record.to_dict() if hasattr(record, "to_dict") else record
                f.write(encode_record(data) + "\n")
                count += 1
    except OSError as e:
        raise IoFailure(str(path), str(e))
    logger.debug(f"Wrote {count} records to {path}")
    return count


def iter_records(path) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """(line number, record) pairs; blank lines are skipped"""
    path = Path(path)
    try:
        f = path.open("r", encoding="utf-8")
    except OSError as e:
        raise IoFailure(str(path), str(e))
    with f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedRecord(line_no, f"invalid JSON: {e.msg}")
            if not isinstance(data, dict):
                raise MalformedRecord(line_no, "record is not an object")
            yield line_no, data


def validate_pair(line_no: int, data: Dict[str, Any]) -> Dict[str, Any]:
    missing = [name for name in PAIR_FIELDS if name not in data]
    if missing:
        raise MalformedRecord(line_no, f"missing fields {missing}")
    try:
        language = LanguageId(data["source_language"])
    except ValueError:
        raise MalformedRecord(line_no, f"unknown language {data['source_language']!r}")
    if data["lang_token"] != language.lang_token:
        raise MalformedRecord(line_no, f"lang_token {data['lang_token']!r} does not match {language.value}")
    if data["split"] not in SPLITS:
        raise MalformedRecord(line_no, f"unknown split {data['split']!r}")
    hits = data.get("hits", {})
    if not isinstance(hits, dict) or any(not isinstance(v, int) or v < 0 for v in hits.values()):
        raise MalformedRecord(line_no, "hits must map to non-negative integers")
    return data


def read_pairs(path) -> List[Dict[str, Any]]:
    return [validate_pair(line_no, data) for line_no, data in iter_records(path)]
