"""
Command-line entry point for the sense change pipeline.

Usage: python -m src.main <command> [options]
"""
import argparse
import asyncio
import logging
import sys
from typing import List, Dict, Optional

from pydantic import ValidationError

from config.settings import resolve_train_config, settings
from src.assignment.sense_assigner import assign
from src.assignment.threshold_sweep import sweep_frame, sweep_threshold
from src.errors import ConfigurationError, SenseChangeError
from src.evaluation.embedding_backends import BagOfWordsBackend, BaseEmbeddingBackend, TransformerBackend
from src.evaluation.subtask_scoring import build_report, evaluate_language, format_report, write_report
from src.harvesting.definition_cache import DefinitionCache
from src.harvesting.harvest_manager import HarvestManager, coverage_frame, coverage_report, edition_statistics
from src.harvesting.rate_limiter import RateLimiter
from src.harvesting.wiktionary_client import WiktionaryClient
from src.matching.gloss_matcher import definitions_needed, match_definitions
from src.models.prediction import AssignPolicy, NovelIdMode
from src.models.scoring import TrainConfig
from src.models.sense import DatasetSplit, Period
from src.pairgen.pair_generator import build_training_set, split_train_dev
from src.scoring.base_scorer import BaseScorer
from src.scoring.cross_encoder import CrossEncoderScorer
from src.scoring.oracle_scorer import oracle_scorer
from src.scoring.overlap_scorer import mock_overlap_scorer
from src.scoring.trainer import train
from src.storage.corpus import (
    load_pairs,
    load_predictions,
    load_split,
    period_view,
    save_pairs,
    save_predictions,
)

logger = logging.getLogger(__name__)

LANGUAGES = ["fi", "ru", "de"]
SCORERS = ["checkpoint", "mock", "oracle"]


def _build_scorer(args: argparse.Namespace, gold: Optional[DatasetSplit] = None) -> BaseScorer:
    """
    Scorer selected by --scorer.
    """
    if args.scorer == "mock":
        return mock_overlap_scorer()
    if args.scorer == "oracle":
        if gold is None:
            raise ConfigurationError("The oracle scorer needs an annotated split (--data)")
        return oracle_scorer(gold)
    if not args.checkpoint:
        raise ConfigurationError("--checkpoint is required with --scorer checkpoint")
    return CrossEncoderScorer.from_checkpoint(args.checkpoint, batch_size=args.batch_size)


def _parse_grid(raw: Optional[str]) -> List[float]:
    if raw is None:
        return list(settings.THRESHOLD_GRID)
    try:
        return [float(value) for value in raw.split(",") if value.strip()]
    except ValueError:
        raise ConfigurationError(f"Invalid threshold grid '{raw}'")


def _parse_base_urls(values: Optional[List[str]]) -> Dict[str, str]:
    urls = dict(settings.WIKTIONARY_URLS)
    for value in values or []:
        language, sep, url = value.partition("=")
        if not sep or not url:
            raise ConfigurationError(f"Base URL override must look like LANG=URL, got '{value}'")
        urls[language] = url
    return urls


def cmd_prepare(args: argparse.Namespace) -> int:
    """
    Build the pair dataset of a split.
    """
    split = load_split(args.data, args.language)

    if not args.from_old_period:
        dataset = build_training_set(split, args.seed)
        save_pairs(dataset, args.out)
        return 0

    if not args.dev_out:
        raise ConfigurationError("--dev-out is required with --from-old-period")
    dataset = build_training_set(period_view(split, Period.OLD), args.seed)
    train_set, dev_set = split_train_dev(dataset, args.dev_fraction, args.seed)
    save_pairs(train_set, args.out)
    save_pairs(dev_set, args.dev_out)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    """
    Train the pair classifier of one language.
    """
    overrides = {
        "model_identifier": args.model,
        "epochs": args.epochs,
        "batch_size": args.batch_size,
        "grad_accum_steps": args.grad_accum_steps,
        "learning_rate": args.learning_rate,
        "half_precision": args.half_precision,
        "adapter": args.adapter,
        "warm_start_checkpoint": args.warm_start,
        "seed": args.seed,
    }
    config = TrainConfig(**resolve_train_config(args.language, args.config, overrides))

    train_set = load_pairs(args.train, args.language)
    dev_set = load_pairs(args.dev, args.language)
    checkpoint = train(train_set, dev_set, config, args.out)

    print(f"best epoch {checkpoint.epoch}\tdev F1 {checkpoint.dev_f1:.4f}\t{checkpoint.path}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    """
    Write the Subtask 1 submission of a split.
    """
    split = load_split(args.data, args.language)
    scorer = _build_scorer(args, split)
    policy = AssignPolicy(threshold=args.threshold, novel_id_mode=args.novel_id_mode)

    records = assign(split, scorer, policy)
    save_predictions(records, args.out)
    return 0


async def _harvest(args: argparse.Namespace, words):
    limiter = RateLimiter(args.rate)
    async with WiktionaryClient(base_urls=_parse_base_urls(args.base_url), rate_limiter=limiter) as client:
        manager = HarvestManager(client, DefinitionCache(args.cache), workers=args.workers)
        corpus, report = await manager.build_corpus(words)

        statistics = None
        if args.edition_stats:
            statistics = {}
            for language in sorted({language for language, _ in words}):
                statistics[language] = await edition_statistics(client, language)
    return corpus, report, statistics


def cmd_harvest(args: argparse.Namespace) -> int:
    """
    Harvest candidate definitions for the novel-flagged words of a submission.
    """
    records = load_predictions(args.submission, args.language)
    words = definitions_needed(records)
    corpus, report, statistics = asyncio.run(_harvest(args, words))

    frame = coverage_frame(coverage_report(corpus, words), statistics)
    if not frame.empty:
        print(frame.to_string(index=False, float_format=lambda value: f"{value:.2%}"))
    if args.report:
        frame.to_csv(args.report, sep="\t", index=False)
    for key, message in report.errors.items():
        print(f"failed\t{key}\t{message}", file=sys.stderr)
    return 0


def cmd_match(args: argparse.Namespace) -> int:
    """
    Attach harvested definitions to the novel senses of a submission.
    """
    records = load_predictions(args.submission, args.language)
    cache = DefinitionCache(args.corpus)
    if not cache.exists():
        raise FileNotFoundError(f"Definition corpus not found: {args.corpus}")
    corpus = cache.load_corpus()
    split = load_split(args.data, args.language) if args.data else None
    scorer = _build_scorer(args, split)

    matched = match_definitions(records, corpus, scorer, split=split)
    save_predictions(matched, args.out, with_definitions=True)
    return 0


def _build_backend(args: argparse.Namespace) -> Optional[BaseEmbeddingBackend]:
    if args.subtask == "1":
        return None
    if args.backend == "bow":
        return BagOfWordsBackend()
    return TransformerBackend(args.embedding_model)


def cmd_evaluate(args: argparse.Namespace) -> int:
    """
    Score submissions against gold splits and print the report.
    """
    backend = _build_backend(args)
    per_language = {}
    for language, gold_path, pred_path in args.pair:
        gold = load_split(gold_path, language)
        records = load_predictions(pred_path, language)
        per_language[language] = evaluate_language(gold, records, args.subtask, backend)

    report = build_report(per_language)
    print(format_report(report))
    if args.report:
        write_report(report, args.report)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    """
    Select the novelty threshold on a development split.
    """
    dev = load_split(args.data, args.language)
    scorer = _build_scorer(args, dev)
    best, points = sweep_threshold(dev, scorer, _parse_grid(args.grid), novel_id_mode=args.novel_id_mode)

    frame = sweep_frame(points)
    print(frame.to_string(index=False, float_format=lambda value: f"{value:.4f}"))
    if args.report:
        frame.to_csv(args.report, sep="\t", index=False, float_format="%.6f")
    print(f"best threshold\t{best}")
    return 0


def _add_scorer_arguments(parser: argparse.ArgumentParser, default: str = "checkpoint"):
    parser.add_argument("--scorer", choices=SCORERS, default=default, help="Pair scorer backend")
    parser.add_argument("--checkpoint", help="Checkpoint directory for --scorer checkpoint")
    parser.add_argument("--batch-size", type=int, default=settings.SCORING_BATCH_SIZE,
                        help="Pairs per scoring batch")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Diachronic sense assignment and novel sense definitions")
    subparsers = parser.add_subparsers(dest="command", required=True)

    prepare = subparsers.add_parser("prepare", help="Build positive and negative training pairs")
    prepare.add_argument("--data", required=True, help="Dataset split TSV")
    prepare.add_argument("--language", choices=LANGUAGES, required=True)
    prepare.add_argument("--out", required=True, help="Pair TSV to write")
    prepare.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    prepare.add_argument("--from-old-period", action="store_true",
                         help="Use only old-period annotations and split off a dev set")
    prepare.add_argument("--dev-out", help="Dev pair TSV (with --from-old-period)")
    prepare.add_argument("--dev-fraction", type=float, default=settings.DEV_FRACTION)
    prepare.set_defaults(handler=cmd_prepare)

    train_cmd = subparsers.add_parser("train", help="Train the pair classifier")
    train_cmd.add_argument("--train", required=True, help="Training pair TSV")
    train_cmd.add_argument("--dev", required=True, help="Dev pair TSV")
    train_cmd.add_argument("--language", choices=LANGUAGES, required=True)
    train_cmd.add_argument("--out", required=True, help="Checkpoint directory")
    train_cmd.add_argument("--config", help="JSON file with training settings")
    train_cmd.add_argument("--model", help="Pretrained encoder identifier or path")
    train_cmd.add_argument("--epochs", type=int)
    train_cmd.add_argument("--batch-size", type=int)
    train_cmd.add_argument("--grad-accum-steps", type=int)
    train_cmd.add_argument("--learning-rate", type=float)
    train_cmd.add_argument("--half-precision", action=argparse.BooleanOptionalAction, default=None)
    train_cmd.add_argument("--adapter", action=argparse.BooleanOptionalAction, default=None)
    train_cmd.add_argument("--warm-start", help="Checkpoint to continue training from")
    train_cmd.add_argument("--seed", type=int)
    train_cmd.set_defaults(handler=cmd_train)

    predict = subparsers.add_parser("predict", help="Assign senses to new-period usages")
    predict.add_argument("--data", required=True, help="Dataset split TSV")
    predict.add_argument("--language", choices=LANGUAGES, required=True)
    predict.add_argument("--out", required=True, help="Submission TSV to write")
    predict.add_argument("--threshold", type=float, default=settings.NOVEL_THRESHOLD)
    predict.add_argument("--novel-id-mode", choices=[mode.value for mode in NovelIdMode],
                         default=settings.NOVEL_ID_MODE)
    _add_scorer_arguments(predict)
    predict.set_defaults(handler=cmd_predict)

    harvest = subparsers.add_parser("harvest", help="Fetch Wiktionary definitions for novel senses")
    harvest.add_argument("--submission", required=True, help="Submission TSV")
    harvest.add_argument("--language", choices=LANGUAGES, required=True)
    harvest.add_argument("--cache", required=True, help="Definition cache TSV")
    harvest.add_argument("--rate", type=float, default=settings.HARVEST_RATE, help="Requests per second")
    harvest.add_argument("--workers", type=int, default=settings.HARVEST_WORKERS)
    harvest.add_argument("--base-url", action="append", metavar="LANG=URL", help="Edition base URL override")
    harvest.add_argument("--edition-stats", action="store_true", help="Also report edition page counts")
    harvest.add_argument("--report", help="Coverage TSV to write")
    harvest.set_defaults(handler=cmd_harvest)

    match = subparsers.add_parser("match", help="Attach definitions to novel senses")
    match.add_argument("--submission", required=True, help="Submission TSV")
    match.add_argument("--language", choices=LANGUAGES, required=True)
    match.add_argument("--corpus", required=True, help="Definition cache TSV")
    match.add_argument("--data", help="Dataset split TSV the submission belongs to")
    match.add_argument("--out", required=True, help="Enriched submission TSV to write")
    _add_scorer_arguments(match)
    match.set_defaults(handler=cmd_match)

    evaluate = subparsers.add_parser("evaluate", help="Score submissions against gold data")
    evaluate.add_argument("--pair", nargs=3, action="append", required=True,
                          metavar=("LANG", "GOLD", "PRED"), help="Language, gold split and prediction file")
    evaluate.add_argument("--subtask", choices=["1", "2", "both"], default="both")
    evaluate.add_argument("--backend", choices=["bow", "transformer"], default="transformer",
                          help="Embedding backend for semantic similarity")
    evaluate.add_argument("--embedding-model", default=settings.EMBEDDING_MODEL)
    evaluate.add_argument("--report", help="Report TSV to write")
    evaluate.set_defaults(handler=cmd_evaluate)

    sweep = subparsers.add_parser("sweep", help="Select the novelty threshold on dev data")
    sweep.add_argument("--data", required=True, help="Dev split TSV with new-period annotations")
    sweep.add_argument("--language", choices=LANGUAGES, required=True)
    sweep.add_argument("--grid", help="Comma-separated thresholds")
    sweep.add_argument("--novel-id-mode", choices=[mode.value for mode in NovelIdMode],
                       default=settings.NOVEL_ID_MODE)
    sweep.add_argument("--report", help="Sweep TSV to write")
    _add_scorer_arguments(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (SenseChangeError, ValidationError, FileNotFoundError) as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"error: {str(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
