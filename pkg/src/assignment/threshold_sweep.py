"""
Threshold selection on a development split.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel

from src.assignment.sense_assigner import assign_from_scores, compose_submission, score_usages
from src.errors import AssignmentError
from src.evaluation.subtask_scoring import score_subtask1
from src.models.prediction import AssignPolicy, NovelIdMode
from src.models.sense import DatasetSplit
from src.scoring.base_scorer import BaseScorer

logger = logging.getLogger(__name__)


class SweepPoint(BaseModel):
    """Subtask 1 scores at one threshold."""
    threshold: float
    ari: float
    f1: float
    mean: float


def sweep_threshold(
    dev: DatasetSplit,
    scorer: BaseScorer,
    grid: Sequence[float],
    novel_id_mode: NovelIdMode = NovelIdMode.PER_USAGE,
) -> Tuple[float, List[SweepPoint]]:
    """
    Pick the threshold with the best mean of ARI and macro-F1.

    Usages are scored once; every grid value reuses the probability table.
    Ties go to the lower threshold.

    Args:
        dev: Development split with gold new-period annotations.
        scorer: A ready scorer.
        grid: Candidate thresholds.
        novel_id_mode: Novel ID policy used while scoring.

    Returns:
        The best threshold and the scores of every grid value, ascending.
    """
    if not grid:
        raise AssignmentError("Threshold grid is empty")

    table = score_usages(dev, scorer)

    points: List[SweepPoint] = []
    best: Optional[SweepPoint] = None
    for threshold in sorted(set(grid)):
        policy = AssignPolicy(threshold=threshold, novel_id_mode=novel_id_mode)
        records = compose_submission(assign_from_scores(dev, table, policy), dev)
        scores = score_subtask1(dev, records)
        if scores.ari is None or scores.f1 is None:
            raise AssignmentError("Development split has no scorable new-period annotations")

        point = SweepPoint(threshold=threshold, ari=scores.ari, f1=scores.f1, mean=(scores.ari + scores.f1) / 2)
        points.append(point)
        logger.info(f"Threshold {threshold:.2f}: ARI {point.ari:.4f}, F1 {point.f1:.4f}, mean {point.mean:.4f}")

        if best is None or point.mean > best.mean:
            best = point

    logger.info(f"Best threshold {best.threshold:.2f} (mean {best.mean:.4f})")
    return best.threshold, points


def sweep_frame(points: List[SweepPoint]) -> pd.DataFrame:
    return pd.DataFrame([point.model_dump() for point in points], columns=["threshold", "ari", "f1", "mean"])
