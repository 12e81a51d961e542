"""
Corpus Pipeline
Ingests source trees and emits the pair (MPG), MLM and DAE corpora
"""

import hashlib
import logging
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import config
from models.corpus import (
    CorpusStats, DAESample, EmitReport, IngestReport, MLMSample, TranslationPair,
    assign_split, record_id,
)
from models.distilled import MASK, DistilledCode
from models.morpheme import MorphemeRegistry
from models.noise import NoiseSpec
from models.syntax import LanguageId, SourceFunction
from tools.distilled_codec import deserialize, serialize
from tools.distiller import canonicalize, distill
from tools.error_handler import DistillError, MalformedDistilled, MalformedRecord
from tools.input_validator import InputValidator
from tools.morpheme_registry import default_registry
from tools.noise_lab import corrupt_dae, corrupt_distilled, dae_tokens, rng_for, shuffle_bag_words
from tools.pair_codec import iter_records, validate_pair, write_records
from tools.syntax_frontend import extract_functions, parse, strip_noncode, tokenize
from tools.worker_pool import ordered_map

logger = logging.getLogger("corpus_pipeline")

# separates the distilled half from the source half of MLM/DAE sequences
SEPARATOR = "</s>"


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------

def _source_files(root: Path, languages: Optional[Sequence[LanguageId]]) -> List[Path]:
    candidates = [root] if root.is_file() else sorted(p for p in root.rglob("*") if p.is_file())
    files = []
    for path in candidates:
        language = InputValidator.EXTENSIONS.get(path.suffix.lower())
        if language is not None and (not languages or language in languages):
            files.append(path)
    return files


def _load_file(path: Path) -> Tuple[Path, List[SourceFunction], List[str]]:
    """Cleaned functions of one file and the causes of anything skipped"""
    causes: List[str] = []
    language = InputValidator.infer_language(str(path))
    try:
        source = path.read_bytes().decode("utf-8", errors="replace")
    except OSError as e:
        logger.warning(f"Cannot read {path}: {e}")
        return path, [], ["io"]
    if not source.strip():
        return path, [], []

    tree = parse(source, language)
    found = extract_functions(tree, source, language, str(path), on_skip=causes.append)
    if tree.has_error and not found:
        return path, [], ["parse_error"]

    cleaned = []
    for fn in found:
        try:
            stripped = strip_noncode(fn)
            cleaned.append(stripped.with_body(stripped.body, tokenize(stripped)))
        except DistillError as e:
            logger.debug(f"{path}: {fn.name} dropped during preprocessing: {e.message}")
            causes.append("function_error")
    return path, cleaned, causes


def _dedup_key(fn: SourceFunction) -> str:
    normalized = " ".join(t.text for t in fn.tokens)
    return hashlib.sha256(f"{fn.language.value}\n{normalized}".encode("utf-8")).hexdigest()


def ingest(roots: Iterable, languages: Optional[Sequence] = None,
           report: Optional[IngestReport] = None, jobs: Optional[int] = None) -> Iterator[SourceFunction]:
    """Stream preprocessed, deduplicated functions from files and directories.

    ``report`` is filled in while the stream is consumed. An unreadable root is
    recorded as an ``io`` skip and the remaining roots are still read.
    """
    report = report if report is not None else IngestReport()
    languages = [InputValidator.validate_language(lang) for lang in languages or []]

    files: List[Path] = []
    for root in roots:
        root = Path(root)
        if not root.exists():
            logger.warning(f"Skipping missing root {root}")
            report.skip("io")
            continue
        files.extend(_source_files(root, languages))

    seen = set()
    for path, functions, causes in ordered_map(_load_file, files, jobs):
        report.files += 1
        for cause in causes:
            report.skip(cause)
        for fn in functions:
            key = _dedup_key(fn)
            if key in seen:
                report.skip("duplicate")
                continue
            seen.add(key)
            report.functions += 1
            yield fn

    logger.info(f"Ingested {report.functions} functions from {report.files} files, {report.skipped} skipped")


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def _emit(build, functions: Iterable[SourceFunction], out, jobs: Optional[int], kind: str) -> EmitReport:
    """Run ``build(index, fn)`` per function and write the records in input order"""
    report = EmitReport()

    def guarded(item):
        index, fn = item
        try:
            return build(index, fn), None
        except DistillError as e:
            logger.debug(f"{fn.origin_path}: {fn.name} skipped: {e.message}")
            return None, "distill_error"

    def records():
        for record, cause in ordered_map(guarded, enumerate(functions), jobs):
            if cause is not None:
                report.skip(cause)
            else:
                yield record

    report.records = write_records(records(), out)
    logger.info(f"Wrote {report.records} {kind} records to {out}, {sum(report.skips.values())} skipped")
    return report


def _hits(code: DistilledCode) -> dict:
    return {"unified": code.annotations.get("unified", 0), "fuzzy": code.annotations.get("fuzzy", 0)}


def emit_mpg(functions: Iterable[SourceFunction], registry: Optional[MorphemeRegistry] = None,
             noise: Optional[NoiseSpec] = None, out="pairs.jsonl", jobs: Optional[int] = None) -> EmitReport:
    """Pairs of (corrupted distilled code, clean source) for decompiler training"""
    registry = registry or default_registry()
    noise = noise or NoiseSpec()

    def build(index: int, fn: SourceFunction) -> TranslationPair:
        code = canonicalize(distill(fn, registry))
        if not noise.is_identity:
            rng = rng_for(noise.seed, index)
            code = corrupt_distilled(shuffle_bag_words(code, rng), noise, rng)
        rid = record_id(fn.language, fn.body)
        return TranslationPair(
            id=rid,
            source_language=fn.language,
            lang_token=fn.language.lang_token,
            distilled=serialize(code),
            target=fn.body,
            split=assign_split(rid),
            hits=_hits(code),
        )

    return _emit(build, functions, out, jobs, "pair")


def _sequence(fn: SourceFunction, registry: MorphemeRegistry) -> Tuple[List[str], List[bool], List[str]]:
    """(distilled tokens, their bag flags, source tokens)"""
    tokens, flags = dae_tokens(canonicalize(distill(fn, registry)))
    source = [t.text for t in tokenize(fn)]
    if MASK in tokens or MASK in source:
        raise MalformedDistilled(f"{MASK} occurs in the input")
    return tokens, flags, source


def emit_mlm(functions: Iterable[SourceFunction], registry: Optional[MorphemeRegistry] = None,
             mask_ratio: float = None, out="mlm.jsonl", seed: int = None,
             jobs: Optional[int] = None) -> EmitReport:
    """Distilled tokens, separator, then source tokens, with a fraction masked"""
    registry = registry or default_registry()
    mask_ratio = InputValidator.validate_ratio(config.MLM_MASK_RATIO if mask_ratio is None else mask_ratio, "mask_ratio")
    seed = InputValidator.validate_seed(config.SEED if seed is None else seed)

    def build(index: int, fn: SourceFunction) -> MLMSample:
        distilled, _, source = _sequence(fn, registry)
        tokens = distilled + [SEPARATOR] + source
        draws = rng_for(seed, index).random(len(tokens))
        answers = []
        for position, u in enumerate(draws):
            if u < mask_ratio and tokens[position] != SEPARATOR:
                answers.append([position, tokens[position]])
                tokens[position] = MASK
        rid = record_id(fn.language, fn.body)
        return MLMSample(id=rid, lang_token=fn.language.lang_token, tokens=tokens,
                         answers=answers, split=assign_split(rid))

    return _emit(build, functions, out, jobs, "MLM")


def emit_dae(functions: Iterable[SourceFunction], registry: Optional[MorphemeRegistry] = None,
             spec: Optional[NoiseSpec] = None, out="dae.jsonl", jobs: Optional[int] = None) -> EmitReport:
    """Corrupted (distilled + source) sequences with the clean sequence as target"""
    registry = registry or default_registry()
    spec = spec or NoiseSpec()

    def build(index: int, fn: SourceFunction) -> DAESample:
        distilled, flags, source = _sequence(fn, registry)
        rng = rng_for(spec.seed, index)
        # the separator is never corrupted
        corrupted = (corrupt_dae(distilled, spec, flags, rng) + [SEPARATOR]
                     + corrupt_dae(source, spec, [False] * len(source), rng))
        rid = record_id(fn.language, fn.body)
        return DAESample(id=rid, lang_token=fn.language.lang_token, input=corrupted,
                         target=distilled + [SEPARATOR] + source, split=assign_split(rid))

    return _emit(build, functions, out, jobs, "DAE")


# ---------------------------------------------------------------------------
# stats
# ---------------------------------------------------------------------------

def stats(path, registry: Optional[MorphemeRegistry] = None) -> CorpusStats:
    """Exact counts over a pair file.

    Source token counts are whitespace-separated pieces of the target text.
    """
    registry = registry or default_registry()
    result = CorpusStats()
    ratios: List[float] = []

    for line_no, data in iter_records(path):
        record = validate_pair(line_no, data)
        language = LanguageId(record["source_language"]).value
        try:
            code = deserialize(record["distilled"], registry=registry, strict=True)
        except MalformedDistilled as e:
            raise MalformedRecord(line_no, e.message)
        source_tokens = len(record["target"].split())

        result.records += 1
        result.functions[language] = result.functions.get(language, 0) + 1
        result.distilled_tokens[language] = result.distilled_tokens.get(language, 0) + len(code)
        result.source_tokens[language] = result.source_tokens.get(language, 0) + source_tokens
        result.splits[record["split"]] = result.splits.get(record["split"], 0) + 1
        result.unified_hits += record.get("hits", {}).get("unified", 0)
        result.fuzzy_hits += record.get("hits", {}).get("fuzzy", 0)
        if source_tokens:
            ratios.append(len(code) / source_tokens)

    if ratios:
        values = np.asarray(ratios, dtype=float)
        result.length_ratio = {
            "min": float(values.min()),
            "mean": float(values.mean()),
            "median": float(np.median(values)),
            "max": float(values.max()),
        }
    return result
