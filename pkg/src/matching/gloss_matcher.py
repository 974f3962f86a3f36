"""
Subtask 2: attach harvested dictionary definitions to novel senses.
"""
import logging
from collections import Counter, defaultdict
from typing import List, Dict, Optional, Tuple

from src.errors import AssignmentError
from src.models.harvest import DefinitionCorpus
from src.models.prediction import PredictionRecord
from src.models.sense import DatasetSplit
from src.scoring.base_scorer import BaseScorer

logger = logging.getLogger(__name__)


def definitions_needed(records: List[PredictionRecord]) -> List[Tuple[str, str]]:
    """
    Unique (language, word) pairs of novel-flagged records, first-seen order.
    """
    needed: Dict[Tuple[str, str], None] = {}
    for record in records:
        if record.is_novel:
            needed.setdefault((record.language.value, record.word), None)
    return list(needed)


def _best_candidate(record: PredictionRecord, candidates: List[str], scorer: BaseScorer) -> int:
    probabilities = scorer.score_texts([(record.example_text, candidate) for candidate in candidates])
    best = 0
    for index, probability in enumerate(probabilities):
        if probability > probabilities[best]:
            best = index
    return best


def match_definitions(
    records: List[PredictionRecord],
    corpus: DefinitionCorpus,
    scorer: BaseScorer,
    split: Optional[DatasetSplit] = None,
) -> List[PredictionRecord]:
    """
    Give every novel record the best-scoring definition of its own word.

    No acceptance threshold is applied. Records sharing a minted ID (per-word
    mode) all receive the definition selected most often, ties to corpus order.

    Args:
        records: Assigner output.
        corpus: Harvested definitions; missing words are allowed.
        scorer: Subtask 1 scorer.
        split: When given, every record must reference one of its usages.

    Returns:
        Records in input order, novel ones carrying a definition.
    """
    if split is not None:
        known = {usage.usage_id for usage in split.usages}
        for record in records:
            if record.usage_id not in known:
                raise AssignmentError(f"Record '{record.usage_id}' references a usage absent from the split")

    choices: Dict[str, int] = {}
    candidates_by_id: Dict[str, List[str]] = {}
    votes: Dict[str, Counter] = defaultdict(Counter)
    empty = 0

    for record in records:
        if not record.is_novel:
            continue
        candidates = corpus.definitions(record.language.value, record.word)
        candidates_by_id[record.assigned_sense_id] = candidates
        if not candidates:
            empty += 1
            continue
        choice = _best_candidate(record, candidates, scorer)
        choices[record.usage_id] = choice
        votes[record.assigned_sense_id][choice] += 1

    # Modal choice per sense id; lower corpus index wins ties
    representative = {
        sense_id: min(counter, key=lambda index: (-counter[index], index))
        for sense_id, counter in votes.items()
    }

    matched = []
    for record in records:
        if not record.is_novel:
            matched.append(record)
            continue
        candidates = candidates_by_id[record.assigned_sense_id]
        if not candidates:
            matched.append(record.model_copy(update={"definition": "", "no_candidates": True}))
            continue
        definition = candidates[representative[record.assigned_sense_id]]
        matched.append(record.model_copy(update={"definition": definition, "no_candidates": False}))

    if empty:
        logger.warning(f"{empty} novel usages have no candidate definitions")
    logger.info(f"Matched definitions for {len(choices)} novel usages")
    return matched
