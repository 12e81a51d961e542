#!/usr/bin/env python3
"""
polypivot command line
Distill, decompile, build training corpora, corrupt and evaluate
"""

import json
import logging
import logging.handlers
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import click
import numpy as np

from config import config
from models.corpus import IngestReport
from models.morpheme import MorphemeRegistry
from models.noise import NoiseSpec
from models.syntax import SourceFunction
from tools.bleu import bleu, code_tokens, corpus_bleu
from tools.ca_runner import compute_ca, load_problems, load_runner_config, verify_references
from tools.corpus_pipeline import emit_dae, emit_mlm, emit_mpg, ingest, stats
from tools.distilled_codec import deserialize, serialize
from tools.distiller import canonicalize, distill
from tools.error_handler import (
    EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_USAGE, DistillError, ErrorHandler, IoFailure, MalformedRecord,
)
from tools.input_validator import InputValidator
from tools.morpheme_registry import default_registry, load_registry
from tools.noise_lab import (
    corrupt_dae, dae_tokens, delete_keywords, delete_symbols, obfuscate_identifiers,
    rng_for, shuffle_lines, shuffle_tokens,
)
from tools.pair_codec import iter_records, write_records
from tools.retrieval import retrieval_metrics
from tools.scaffold_decompiler import decompile, file_name_for
from tools.syntax_frontend import extract_functions, parse_file, strip_noncode

logger = logging.getLogger("polypivot")

TASKS = ("mpg", "mlm", "dae")
TRANSFORMS = ("obf", "shuffle-lines", "shuffle-tokens", "del-keywords", "del-symbols", "dae")


def setup_logging(verbosity: int = 0):
    """Diagnostics to stderr, plus a rotating file when LOG_FILE is set"""
    root = logging.getLogger()
    level = logging.DEBUG if verbosity > 1 else logging.INFO if verbosity == 1 else getattr(logging, config.LOG_LEVEL, logging.INFO)
    root.setLevel(level)

    # Remove existing handlers
    for handler in root.handlers[:]:
        root.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))
    root.addHandler(console_handler)

    if config.LOG_FILE:
        os.makedirs(os.path.dirname(config.LOG_FILE) or ".", exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            config.LOG_FILE,
            maxBytes=config.LOG_MAX_BYTES,
            backupCount=config.LOG_BACKUP_COUNT
        )
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        ))
        root.addHandler(file_handler)
    return root


@dataclass
class GlobalConfig:
    registry_path: Optional[str]
    seed: int
    jobs: int
    verbosity: int = 0
    _registry: Optional[MorphemeRegistry] = None

    @property
    def registry(self) -> MorphemeRegistry:
        if self._registry is None:
            self._registry = load_registry(self.registry_path) if self.registry_path else default_registry()
        return self._registry


def _echo_json(data, out: Optional[str] = None):
    text = json.dumps(data, indent=2, ensure_ascii=False)
    if out:
        try:
            Path(out).write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            raise IoFailure(out, str(e))
    else:
        click.echo(text)


def _functions_of(path: str, language: Optional[str], on_error=None) -> List[SourceFunction]:
    tree = parse_file(path, language)
    if tree.has_error and on_error is not None:
        on_error(path)
    return extract_functions(tree, tree.source, tree.language, path)


@click.group(name="polypivot")
@click.option("--registry", "registry_path", type=click.Path(dir_okay=False), default=None,
              help="Morpheme registry file (defaults to the shipped tables)")
@click.option("--seed", type=int, default=config.SEED, show_default=True)
@click.option("--jobs", type=int, default=config.JOBS, show_default=True)
@click.option("-v", "--verbose", count=True, help="-v for info, -vv for debug")
@click.pass_context
def polypivot(ctx, registry_path, seed, jobs, verbose):
    """Language-agnostic pivot toolchain for code translation corpora"""
    setup_logging(verbose)
    ctx.obj = GlobalConfig(
        registry_path=registry_path,
        seed=InputValidator.validate_seed(seed),
        jobs=InputValidator.validate_jobs(jobs),
        verbosity=verbose,
    )


@polypivot.command("distill")
@click.argument("inputs", nargs=-1, required=True, type=click.Path())
@click.option("--language", default=None, help="Source language; inferred from the extension when omitted")
@click.option("--canonical/--no-canonical", default=False, help="Sort the words of every name bag")
@click.option("--out", default=None, help="Output record file (stdout when omitted)")
@click.pass_obj
def distill_command(cfg: GlobalConfig, inputs, language, canonical, out):
    """Distill every function of the input files, one record per function"""
    records = []
    status = EXIT_OK
    for path in inputs:
        InputValidator.infer_language(path, language)
        broken = []
        try:
            functions = _functions_of(path, language, broken.append)
        except DistillError as e:
            status = max(status, ErrorHandler.handle_cli_error(e, path))
            continue
        if broken:
            logger.error(f"{path}: syntax errors, {len(functions)} clean functions kept")
            status = max(status, EXIT_DATA)
        elif not functions:
            logger.warning(f"{path}: no functions found")
        for fn in functions:
            try:
                code = distill(fn, cfg.registry)
            except DistillError as e:
                status = max(status, ErrorHandler.handle_cli_error(e, f"{path}:{fn.name}"))
                continue
            if canonical:
                code = canonicalize(code)
            records.append({
                "path": path,
                "function": fn.name,
                "source_language": fn.language.value,
                "distilled": serialize(code),
                "hits": dict(code.annotations),
            })

    if out:
        write_records(records, out)
    else:
        for record in records:
            click.echo(json.dumps(record, ensure_ascii=False))
    ErrorHandler.log_operation("distill", status == EXIT_OK, {"records": len(records)})
    return status


@polypivot.command("decompile")
@click.argument("pairfile", type=click.Path())
@click.option("--target", required=True, help="Target language")
@click.option("--out", required=True, type=click.Path(file_okay=False), help="Output directory")
@click.pass_obj
def decompile_command(cfg: GlobalConfig, pairfile, target, out):
    """Render the distilled field of every record as a target-language scaffold"""
    target = InputValidator.validate_language(target)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    written = 0
    for line_no, record in iter_records(pairfile):
        if "distilled" not in record:
            raise MalformedRecord(line_no, "missing field 'distilled'")
        try:
            code = deserialize(record["distilled"], registry=cfg.registry, strict=True)
            text = decompile(code, target, cfg.registry)
        except DistillError as e:
            status = max(status, ErrorHandler.handle_cli_error(e, f"{pairfile}:{line_no}"))
            continue
        path = out_dir / f"{line_no:05d}_{file_name_for(code, target)}"
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise IoFailure(str(path), str(e))
        written += 1
    ErrorHandler.log_operation("decompile", status == EXIT_OK, {"files": written})
    return status


def _noise_options(func):
    options = [
        click.option("--mask-ratio", type=float, default=config.MASK_RATIO, show_default=True),
        click.option("--dropout-ratio", type=float, default=config.DROPOUT_RATIO, show_default=True),
        click.option("--permute-ratio", type=float, default=config.PERMUTE_RATIO, show_default=True),
        click.option("--bow-mask-ratio", type=float, default=config.BOW_MASK_RATIO, show_default=True),
        click.option("--bow-dropout-ratio", type=float, default=config.BOW_DROPOUT_RATIO, show_default=True),
        click.option("--bow-permute-ratio", type=float, default=config.BOW_PERMUTE_RATIO, show_default=True),
        click.option("--shuffle-window", type=int, default=config.SHUFFLE_WINDOW, show_default=True),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _spec(cfg: GlobalConfig, kwargs) -> NoiseSpec:
    return NoiseSpec(
        mask_ratio=kwargs["mask_ratio"], dropout_ratio=kwargs["dropout_ratio"],
        permute_ratio=kwargs["permute_ratio"], bow_mask_ratio=kwargs["bow_mask_ratio"],
        bow_dropout_ratio=kwargs["bow_dropout_ratio"], bow_permute_ratio=kwargs["bow_permute_ratio"],
        shuffle_window=kwargs["shuffle_window"], seed=cfg.seed,
    )


@polypivot.command("pairs")
@click.argument("roots", nargs=-1, required=True, type=click.Path())
@click.option("--task", type=click.Choice(TASKS), default="mpg", show_default=True)
@click.option("--language", "languages", multiple=True, help="Only ingest these languages")
@click.option("--mlm-mask-ratio", type=float, default=config.MLM_MASK_RATIO, show_default=True)
@_noise_options
@click.option("--out", required=True, help="Output record file")
@click.pass_obj
def pairs_command(cfg: GlobalConfig, roots, task, languages, mlm_mask_ratio, out, **noise):
    """Ingest source trees and emit an MPG, MLM or DAE corpus"""
    spec = _spec(cfg, noise)
    report = IngestReport()
    functions = ingest(roots, languages, report, cfg.jobs)
    if task == "mpg":
        emitted = emit_mpg(functions, cfg.registry, spec, out, cfg.jobs)
    elif task == "mlm":
        emitted = emit_mlm(functions, cfg.registry, mlm_mask_ratio, out, cfg.seed, cfg.jobs)
    else:
        emitted = emit_dae(functions, cfg.registry, spec, out, cfg.jobs)
    ErrorHandler.log_operation("pairs", True, {"ingest": report.to_dict(), "emit": emitted.to_dict()})
    return EXIT_IO if report.skips.get("io") else EXIT_OK


@polypivot.command("corrupt")
@click.argument("input_path", metavar="INPUT", type=click.Path())
@click.option("--transform", type=click.Choice(TRANSFORMS), required=True)
@click.option("--language", default=None)
@_noise_options
@click.option("--out", default=None, help="Output file (stdout when omitted)")
@click.pass_obj
def corrupt_command(cfg: GlobalConfig, input_path, transform, language, out, **noise):
    """Apply one corruption to every function of a source file"""
    spec = _spec(cfg, noise)
    chunks = []
    for index, fn in enumerate(_functions_of(input_path, language)):
        fn = strip_noncode(fn)
        if transform == "obf":
            renamed, renames = obfuscate_identifiers(fn)
            chunks.append(renamed.body)
            logger.info(f"{fn.name}: {renames.forward}")
        elif transform == "shuffle-lines":
            chunks.append(shuffle_lines(fn, cfg.seed))
        elif transform == "shuffle-tokens":
            chunks.append(shuffle_tokens(fn, cfg.seed))
        elif transform == "del-keywords":
            chunks.append(delete_keywords(fn))
        elif transform == "del-symbols":
            chunks.append(delete_symbols(fn))
        else:
            tokens, flags = dae_tokens(canonicalize(distill(fn, cfg.registry)))
            chunks.append(" ".join(corrupt_dae(tokens, spec, flags, rng_for(cfg.seed, index))))

    text = "\n\n".join(chunk.rstrip("\n") for chunk in chunks) + ("\n" if chunks else "")
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise IoFailure(out, str(e))
    else:
        click.echo(text, nl=False)
    return EXIT_OK


@polypivot.command("stats")
@click.argument("pairfile", type=click.Path())
@click.option("--out", default=None)
@click.pass_obj
def stats_command(cfg: GlobalConfig, pairfile, out):
    """Counts, length ratios and registry-hit rate of a pair file"""
    _echo_json(stats(pairfile, cfg.registry).to_dict(), out)
    return EXIT_OK


@polypivot.group("eval")
def eval_group():
    """BLEU, computational accuracy and retrieval metrics"""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise IoFailure(path, str(e))


@eval_group.command("bleu")
@click.argument("hypothesis", type=click.Path())
@click.argument("reference", type=click.Path())
@click.option("--language", default=None,
              help="Score whole files with the code tokenizer; otherwise line-aligned corpus BLEU on whitespace tokens")
@click.option("--max-n", type=int, default=4, show_default=True)
def eval_bleu(hypothesis, reference, language, max_n):
    """BLEU of a hypothesis file against a reference file"""
    if language:
        score = bleu(code_tokens(_read(hypothesis), language), code_tokens(_read(reference), language), max_n)
    else:
        hyps = _read(hypothesis).splitlines()
        refs = _read(reference).splitlines()
        score = corpus_bleu([h.split() for h in hyps], [r.split() for r in refs], max_n)
    _echo_json({"bleu": score, "max_n": max_n})
    return EXIT_OK


def _candidate_lists(directory: Path, problem_ids: List[str], language) -> List[List[str]]:
    """``<dir>/<problem>/`` holds ranked candidates (sorted by file name); ``<dir>/<problem>.<ext>`` a single one"""
    language = InputValidator.validate_language(language)
    lists = []
    for problem_id in problem_ids:
        folder = directory / problem_id
        if folder.is_dir():
            files = sorted(p for p in folder.iterdir()
                           if p.is_file() and InputValidator.EXTENSIONS.get(p.suffix.lower()) is language)
        else:
            files = [p for p in directory.glob(f"{problem_id}.*")
                     if InputValidator.EXTENSIONS.get(p.suffix.lower()) is language]
        lists.append([_read(str(p)) for p in files])
    return lists


@eval_group.command("ca")
@click.argument("problems_dir", type=click.Path())
@click.argument("candidates_dir", type=click.Path())
@click.option("--language", required=True, help="Language of the candidates")
@click.option("--n", "top_n", type=int, default=1, show_default=True)
@click.option("--runner-config", default=None, help="Env-style runner command file")
@click.option("--verify/--no-verify", default=False, help="Run the references first and report any that fail")
@click.option("--out", default=None)
@click.pass_obj
def eval_ca(cfg: GlobalConfig, problems_dir, candidates_dir, language, top_n, runner_config, verify, out):
    """Computational accuracy CA@N of candidate programs"""
    runner = load_runner_config(runner_config)
    problems = load_problems(problems_dir)
    if verify:
        broken = verify_references(problems, runner, [language])
        if broken:
            logger.error(f"References fail their own tests: {broken}")
            return EXIT_DATA
    candidates = _candidate_lists(Path(candidates_dir), [p.id for p in problems], language)
    report = compute_ca(candidates, problems, runner, language, top_n, cfg.jobs)
    _echo_json({
        "n": report.n,
        "score": report.score,
        "passes": report.passes,
        "problems": len(report.results),
        "infrastructure_failures": report.infrastructure_failures,
        "results": [
            {"id": r.problem_id, "passed": r.passed, "rank": r.passing_rank,
             "statuses": [o.status for o in r.outcomes]}
            for r in report.results
        ],
    }, out)
    return EXIT_IO if report.infrastructure_failures else EXIT_OK


@eval_group.command("retrieval")
@click.argument("similarity", type=click.Path())
@click.argument("relevance", type=click.Path())
@click.option("--k", type=int, default=10, show_default=True)
def eval_retrieval(similarity, relevance, k):
    """P@k, MAP and MRR from comma-separated query x candidate matrices"""
    try:
        scores = np.loadtxt(similarity, delimiter=",", ndmin=2)
        relevant = np.loadtxt(relevance, delimiter=",", ndmin=2)
    except OSError as e:
        raise IoFailure(str(e.filename or similarity), str(e))
    _echo_json(retrieval_metrics(scores, relevant, k).to_dict())
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    try:
        result = polypivot.main(args=argv, prog_name="polypivot", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except (DistillError, OSError, ValueError) as e:
        return ErrorHandler.handle_cli_error(e)
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
