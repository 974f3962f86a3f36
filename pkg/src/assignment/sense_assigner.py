"""
Subtask 1 inference: thresholded argmax over the old-period inventory of each word.
"""
import logging
from typing import List, Dict, Optional, Tuple

from config.settings import settings
from src.errors import AssignmentError
from src.models.prediction import AssignPolicy, NovelIdMode, PredictionRecord
from src.models.scoring import ScorerInput
from src.models.sense import DatasetSplit, NOVEL_PREFIX, Period, SenseInventory
from src.scoring.base_scorer import BaseScorer
from src.scoring.encoding import encode_pair
from src.storage.corpus import old_inventories

logger = logging.getLogger(__name__)

# usage_id -> {sense_id: probability}, senses in inventory order
ProbabilityTable = Dict[str, Dict[str, float]]


def mint_novel_id(word: str, usage_id: str, mode: NovelIdMode) -> str:
    """
    Deterministic ID for a sense outside the old inventory.

    Args:
        word: Target word.
        usage_id: Usage that triggered the new sense.
        mode: per_usage gives one ID per usage, per_word one ID per word.

    Returns:
        An ID in the reserved novel namespace.
    """
    if NovelIdMode(mode) == NovelIdMode.PER_WORD:
        return f"{NOVEL_PREFIX}{word}"
    return f"{NOVEL_PREFIX}{word}:{usage_id}"


def score_usages(
    split: DatasetSplit,
    scorer: BaseScorer,
    inventories: Optional[Dict[str, SenseInventory]] = None,
    batch_size: Optional[int] = None,
) -> ProbabilityTable:
    """
    Score every new-period usage against the old-period glosses of its word.

    Old-period usages are never scored. Batches may mix usages of different words.

    Args:
        split: Split to score.
        scorer: A ready scorer.
        inventories: Old-period inventories; derived from the split when omitted.
        batch_size: Pairs per scorer call.

    Returns:
        Probability table covering every new-period usage.
    """
    if inventories is None:
        inventories = old_inventories(split)
    batch_size = batch_size or settings.SCORING_BATCH_SIZE

    table: ProbabilityTable = {}
    keys: List[Tuple[str, str]] = []
    inputs: List[ScorerInput] = []

    for usage in split.usages:
        if usage.period != Period.NEW:
            continue
        inventory = inventories.get(usage.word)
        if inventory is None:
            raise AssignmentError(f"Usage '{usage.usage_id}' has word '{usage.word}' without an inventory")

        table[usage.usage_id] = {}
        for entry in inventory.entries:
            if entry.gloss is None:
                continue
            keys.append((usage.usage_id, entry.sense_id))
            inputs.append(encode_pair(usage.example_text, entry.gloss))

    for start in range(0, len(inputs), batch_size):
        probabilities = scorer.score_batch(inputs[start:start + batch_size])
        for (usage_id, sense_id), probability in zip(keys[start:start + batch_size], probabilities):
            table[usage_id][sense_id] = probability

    logger.info(f"Scored {len(inputs)} pairs for {len(table)} new-period usages with {scorer.scorer_type}")
    return table


def assign_from_scores(split: DatasetSplit, table: ProbabilityTable, policy: AssignPolicy) -> List[PredictionRecord]:
    """
    Apply the threshold rule to a probability table.

    A usage keeps the argmax sense only when its probability is strictly above
    the threshold; ties go to the first sense in inventory order.

    Returns:
        One record per new-period usage, in file order.
    """
    records = []
    novel = 0
    for usage in split.usages:
        if usage.period != Period.NEW:
            continue
        if usage.usage_id not in table:
            raise AssignmentError(f"No scores for usage '{usage.usage_id}'")

        probabilities = table[usage.usage_id]
        best_sense = None
        best_probability = None
        for sense_id, probability in probabilities.items():
            if best_probability is None or probability > best_probability:
                best_sense, best_probability = sense_id, probability

        if best_sense is not None and best_probability > policy.threshold:
            assigned, is_novel = best_sense, False
        else:
            assigned, is_novel = mint_novel_id(usage.word, usage.usage_id, policy.novel_id_mode), True
            novel += 1

        records.append(PredictionRecord(
            usage_id=usage.usage_id,
            word=usage.word,
            language=split.language,
            period=usage.period,
            example_text=usage.example_text,
            assigned_sense_id=assigned,
            is_novel=is_novel,
            winning_probability=best_probability,
        ))

    logger.info(f"Threshold {policy.threshold}: {novel} of {len(records)} new-period usages flagged novel")
    return records


def compose_submission(records: List[PredictionRecord], split: DatasetSplit) -> List[PredictionRecord]:
    """
    Merge new-period predictions with old-period copy-throughs in file order.

    Args:
        records: Predictions for the new-period usages (copy-throughs may be included).
        split: The split the predictions belong to.

    Returns:
        One record per new-period usage and per annotated old-period usage.
    """
    by_usage = {record.usage_id: record for record in records}
    usage_ids = {usage.usage_id for usage in split.usages}
    for usage_id in by_usage:
        if usage_id not in usage_ids:
            raise AssignmentError(f"Prediction for unknown usage '{usage_id}'")

    merged = []
    for usage in split.usages:
        if usage.period == Period.NEW:
            if usage.usage_id not in by_usage:
                raise AssignmentError(f"Usage '{usage.usage_id}' has no prediction")
            merged.append(by_usage[usage.usage_id])
        elif usage.sense_id is not None:
            merged.append(PredictionRecord(
                usage_id=usage.usage_id,
                word=usage.word,
                language=split.language,
                period=usage.period,
                example_text=usage.example_text,
                assigned_sense_id=usage.sense_id,
                is_novel=False,
            ))
    return merged


def assign(
    split: DatasetSplit,
    scorer: BaseScorer,
    policy: AssignPolicy,
    inventories: Optional[Dict[str, SenseInventory]] = None,
) -> List[PredictionRecord]:
    """
    Assign old senses or novel IDs to the new-period usages of a split.

    Args:
        split: Split to predict.
        scorer: A ready scorer.
        policy: Threshold and novel ID policy.
        inventories: Old-period inventories; derived from the split when omitted.

    Returns:
        Submission records in file order, old-period annotations copied through.
    """
    table = score_usages(split, scorer, inventories)
    return compose_submission(assign_from_scores(split, table, policy), split)
