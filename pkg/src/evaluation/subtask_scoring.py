"""
Shared-task aggregation: per-word scores averaged per language, then across languages.
"""
import logging
from collections import defaultdict
from typing import List, Dict, Iterable, Optional

import numpy as np
import pandas as pd

from src.errors import MetricInputError
from src.evaluation.embedding_backends import BaseEmbeddingBackend
from src.evaluation.metrics import adjusted_rand_index, bleu, macro_f1, semantic_similarity
from src.models.prediction import PredictionRecord
from src.models.report import EvaluationReport, LanguageScores, OverallScores
from src.models.sense import DatasetSplit, Period, UsageExample
from src.storage.corpus import old_inventories

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["language", "ari", "f1", "bleu", "bert_score", "subtask2_overall"]


def _mean(values: Iterable[float]) -> Optional[float]:
    values = list(values)
    if not values:
        return None
    return float(np.mean(values))


def _gold_new_usages(gold_split: DatasetSplit) -> Dict[str, List[UsageExample]]:
    grouped: Dict[str, List[UsageExample]] = defaultdict(list)
    for usage in gold_split.usages:
        if usage.period == Period.NEW and usage.sense_id is not None:
            grouped[usage.word].append(usage)
    return grouped


def _records_for(usages: List[UsageExample], records: Dict[str, PredictionRecord]) -> List[PredictionRecord]:
    matched = []
    for usage in usages:
        record = records.get(usage.usage_id)
        if record is None:
            raise MetricInputError(f"No prediction for gold usage '{usage.usage_id}'")
        matched.append(record)
    return matched


def score_subtask1(gold_split: DatasetSplit, records: List[PredictionRecord]) -> LanguageScores:
    """
    ARI and macro-F1 of one language.

    Per word, ARI covers all annotated new-period usages and F1 only those whose
    gold sense is in the old inventory; words without such usages are left out
    of the F1 average.

    Args:
        gold_split: Gold split with new-period annotations.
        records: Predictions for the split.

    Returns:
        Scores with ari and f1 set (None when no word could be scored).
    """
    by_usage = {record.usage_id: record for record in records}
    inventories = old_inventories(gold_split)

    word_ari = []
    word_f1 = []
    for word, usages in _gold_new_usages(gold_split).items():
        predicted = _records_for(usages, by_usage)
        gold_labels = [usage.sense_id for usage in usages]
        pred_labels = [record.assigned_sense_id for record in predicted]
        word_ari.append(adjusted_rand_index(gold_labels, pred_labels))

        known = set(inventories[word].sense_ids)
        kept = [(g, p) for g, p in zip(gold_labels, pred_labels) if g in known]
        if kept:
            word_f1.append(macro_f1([g for g, _ in kept], [p for _, p in kept]))

    scores = LanguageScores(ari=_mean(word_ari), f1=_mean(word_f1))
    logger.info(
        f"Subtask 1 ({gold_split.language.value}): {len(word_ari)} words, "
        f"ARI {scores.ari}, F1 {scores.f1} over {len(word_f1)} words"
    )
    return scores


def score_subtask2(
    gold_split: DatasetSplit,
    records: List[PredictionRecord],
    backend: BaseEmbeddingBackend,
) -> LanguageScores:
    """
    BLEU and semantic similarity of predicted definitions for gold-novel usages.

    A missing or empty definition is scored as an empty candidate.

    Args:
        gold_split: Gold split with glosses for the novel senses.
        records: Enriched predictions.
        backend: Embedding backend for the similarity metric.

    Returns:
        Scores with bleu and bert_score set (None when the split has no gold-novel usage).
    """
    by_usage = {record.usage_id: record for record in records}
    inventories = old_inventories(gold_split)
    senses = gold_split.sense_index()

    word_bleu = []
    word_similarity = []
    for word, usages in _gold_new_usages(gold_split).items():
        known = set(inventories[word].sense_ids)
        novel_usages = [
            usage for usage in usages
            if usage.sense_id not in known and senses[(word, usage.sense_id)].gloss is not None
        ]
        if not novel_usages:
            continue

        bleu_values = []
        similarity_values = []
        for usage, record in zip(novel_usages, _records_for(novel_usages, by_usage)):
            reference = senses[(word, usage.sense_id)].gloss
            candidate = record.definition or ""
            bleu_values.append(bleu(candidate, reference))
            similarity_values.append(semantic_similarity(candidate, reference, backend) if candidate.strip() else 0.0)

        word_bleu.append(float(np.mean(bleu_values)))
        word_similarity.append(float(np.mean(similarity_values)))

    scores = LanguageScores(bleu=_mean(word_bleu), bert_score=_mean(word_similarity))
    logger.info(
        f"Subtask 2 ({gold_split.language.value}): {len(word_bleu)} words, "
        f"BLEU {scores.bleu}, similarity {scores.bert_score}"
    )
    return scores


def build_report(per_language: Dict[str, LanguageScores]) -> EvaluationReport:
    """
    Aggregate language scores into unweighted means.

    Args:
        per_language: Scores keyed by language code.

    Returns:
        The evaluation report.
    """
    overall = {}
    for metric in ("ari", "f1", "bleu", "bert_score"):
        overall[metric] = _mean(
            getattr(scores, metric) for scores in per_language.values() if getattr(scores, metric) is not None
        )

    subtask2 = None
    if overall["bleu"] is not None and overall["bert_score"] is not None:
        subtask2 = (overall["bleu"] + overall["bert_score"]) / 2

    ordered = {language: per_language[language] for language in sorted(per_language)}
    return EvaluationReport(per_language=ordered, overall=OverallScores(subtask2_overall=subtask2, **overall))


def report_frame(report: EvaluationReport) -> pd.DataFrame:
    """
    One row per language plus an overall row.
    """
    rows = []
    for language, scores in report.per_language.items():
        row = {"language": language, **scores.model_dump()}
        if scores.bleu is not None and scores.bert_score is not None:
            row["subtask2_overall"] = (scores.bleu + scores.bert_score) / 2
        rows.append(row)
    rows.append({"language": "overall", **report.overall.model_dump()})
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def write_report(report: EvaluationReport, path: str):
    report_frame(report).to_csv(path, sep="\t", index=False, float_format="%.6f", na_rep="")
    logger.info(f"Wrote evaluation report to {path}")


def format_report(report: EvaluationReport) -> str:
    return report_frame(report).to_string(index=False, float_format=lambda value: f"{value:.4f}", na_rep="-")


def evaluate_language(
    gold_split: DatasetSplit,
    records: List[PredictionRecord],
    subtask: str,
    backend: Optional[BaseEmbeddingBackend] = None,
) -> LanguageScores:
    """
    Score one language for subtask "1", "2" or "both".
    """
    ids_gold = {usage.usage_id for usage in gold_split.usages}
    unknown = [record.usage_id for record in records if record.usage_id not in ids_gold]
    if unknown:
        raise MetricInputError(f"Predictions for usages missing from the gold split: {unknown[:5]}")

    scores: Dict[str, Optional[float]] = {}
    if subtask in ("1", "both"):
        scores.update(score_subtask1(gold_split, records).model_dump(include={"ari", "f1"}))
    if subtask in ("2", "both"):
        if backend is None:
            raise MetricInputError("Subtask 2 scoring needs an embedding backend")
        scores.update(score_subtask2(gold_split, records, backend).model_dump(include={"bleu", "bert_score"}))
    return LanguageScores(**scores)

